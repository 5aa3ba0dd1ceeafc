"""Non-dimensional control parameters of the short Taylor-Couette cell.

Geometry is fixed: radius ratio 0.5 and aspect ratio 2, i.e. inner radius 1,
outer radius 2, lids at z = +-1 in units of the gap width.  Velocities are
measured against the reference scale built into each flow family, so the two
Reynolds numbers are the only dynamical inputs besides the driving strength.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError

R_INNER = 1.0
R_OUTER = 2.0
HALF_HEIGHT = 1.0  # Gamma / 2
FLUID_VOLUME = 6.0 * 3.141592653589793  # 2*pi * (R_o^2 - R_i^2)/2 * 2H


@dataclass
class SimParams:
    """Bundle of all non-dimensional run parameters.

    dt defaults to 0.2*dx, a conservative advective-CFL choice for wall
    speeds of order one; drivers override it per run kind.
    """

    Re: float = 120.0
    Rm: float = 200.0
    eta: float = 0.5
    Gamma: float = 2.0
    Omega_i: float = 1.0
    A: float = 0.0
    epsilon: float = 1.0
    M: int = 4
    dx: float = 1.0 / 40.0
    dt: float | None = None
    Rv: float = 4.0
    Zv: float = 2.0
    inner_core_rotating: bool = True

    def __post_init__(self):
        if self.dt is None:
            self.dt = 0.2 * self.dx

    def validate(self):
        """Raise ConfigError naming the first offending field."""
        checks = [
            ("Re", self.Re > 0),
            ("Rm", self.Rm > 0),
            ("eta", self.eta == 0.5),
            ("Gamma", self.Gamma == 2.0),
            ("M", self.M >= 1),
            ("dx", self.dx > 0),
            ("dt", self.dt > 0),
            ("Rv", self.Rv > R_OUTER),
            ("Zv", self.Zv > HALF_HEIGHT),
            ("epsilon", self.epsilon > 0),
        ]
        for name, ok in checks:
            if not ok:
                raise ConfigError(f"invalid parameter {name}={getattr(self, name)!r}")
        return self


@dataclass
class FlowStats:
    """Velocity statistics of a flow over the fluid annulus.

    V_star is the rms speed; the poloidal part collects the (r, z)
    components and the toroidal part the azimuthal one, so that
    V_star**2 == Vp_star**2 + Vt_star**2.  Lambda is the poloidal to
    toroidal rms ratio and V_max the largest velocity modulus found on
    grid nodes at the sampling angles.
    """

    V_star: float
    Vp_star: float
    Vt_star: float
    Lambda: float
    V_max: float

    def as_row(self):
        return {
            "V_star": self.V_star,
            "Vp_star": self.Vp_star,
            "Vt_star": self.Vt_star,
            "Lambda": self.Lambda,
            "V_max": self.V_max,
        }
