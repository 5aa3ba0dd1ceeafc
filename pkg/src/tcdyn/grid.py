"""Structured meridian (r, z) grid for the cell and its vacuum surround.

One uniform grid covers the whole box [0, Rv] x [-Zv, Zv]; the solid core
[0,1]x[-1,1], the fluid annulus [1,2]x[-1,1] and the vacuum shell are index
ranges of it.  Landmark radii and heights (r=1, r=2, z=+-1) always fall on
grid lines, which keeps every interface node shared between the adjacent
subdomains.  Azimuthal integrals are analytic per Fourier mode, so all
quadrature here is meridian trapezoid with the cylindrical r weight.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .params import HALF_HEIGHT, R_INNER, R_OUTER, SimParams

TAG_SOLID = 0
TAG_FLUID = 1
TAG_VACUUM = 2

REGIONS = ("fluid", "conductor", "box")


class MeridianGrid:
    """Uniform meridian grid with subdomain bookkeeping."""

    def __init__(self, dx: float, Rv: float = 4.0, Zv: float = 2.0):
        n = round(1.0 / dx)
        if n < 4:
            raise ConfigError(f"dx={dx} too coarse; need at least 4 cells per unit")
        self.h = 1.0 / n
        # Snap the box to whole cells so the landmarks stay on grid lines.
        nr_out = round(Rv * n)
        nz_half = round(Zv * n)
        if abs(nr_out - Rv * n) > 1e-9 or abs(nz_half - Zv * n) > 1e-9:
            raise ConfigError(f"Rv={Rv}, Zv={Zv} must be multiples of the spacing 1/{n}")
        self.Rv = nr_out * self.h
        self.Zv = nz_half * self.h
        self.r = np.linspace(0.0, self.Rv, nr_out + 1)
        self.z = np.linspace(-self.Zv, self.Zv, 2 * nz_half + 1)
        self.nr = self.r.size
        self.nz = self.z.size

        self.i_ri = round(R_INNER * n)
        self.i_ro = round(R_OUTER * n)
        self.j_bot = round((self.Zv - HALF_HEIGHT) * n)
        self.j_top = self.j_bot + 2 * round(HALF_HEIGHT * n)
        self.j_eq = (self.nz - 1) // 2

        tags = np.full((self.nr, self.nz), TAG_VACUUM, dtype=np.uint8)
        tags[: self.i_ri + 1, self.j_bot : self.j_top + 1] = TAG_SOLID
        tags[self.i_ri : self.i_ro + 1, self.j_bot : self.j_top + 1] = TAG_FLUID
        self.tags = tags

    @classmethod
    def from_params(cls, params: SimParams) -> "MeridianGrid":
        return cls(params.dx, params.Rv, params.Zv)

    # ------------------------------------------------------------------
    # Region bookkeeping
    # ------------------------------------------------------------------
    def region_slices(self, region: str):
        if region == "fluid":
            return (slice(self.i_ri, self.i_ro + 1), slice(self.j_bot, self.j_top + 1))
        if region == "conductor":
            return (slice(0, self.i_ro + 1), slice(self.j_bot, self.j_top + 1))
        if region == "box":
            return (slice(0, self.nr), slice(0, self.nz))
        raise ValueError(f"unknown region {region!r}")

    def region_shape(self, region: str):
        sr, sz = self.region_slices(region)
        return (sr.stop - sr.start, sz.stop - sz.start)

    def region_coords(self, region: str):
        sr, sz = self.region_slices(region)
        return self.r[sr], self.z[sz]

    def includes_axis(self, region: str) -> bool:
        return region in ("conductor", "box")

    # ------------------------------------------------------------------
    # Quadrature
    # ------------------------------------------------------------------
    def _trapz_1d(self, npts: int) -> np.ndarray:
        w = np.full(npts, self.h)
        w[0] = w[-1] = 0.5 * self.h
        return w

    def meridian_weights(self, region: str) -> np.ndarray:
        """Trapezoid weights w[i,j] including the cylindrical factor r.

        sum(w * f) approximates the meridian integral of f * r dr dz; the
        azimuthal factor (2*pi for mode 0, pi otherwise) is applied by the
        energy routines.
        """
        rr, zz = self.region_coords(region)
        wr = self._trapz_1d(rr.size) * rr
        wz = self._trapz_1d(zz.size)
        return np.outer(wr, wz)

    def vacuum_mask(self) -> np.ndarray:
        """True on nodes strictly outside the conductor."""
        return self.tags == TAG_VACUUM

    def vacuum_weights(self) -> np.ndarray:
        w = self.meridian_weights("box")
        w[~self.vacuum_mask()] = 0.0
        return w

    def region_volume(self, region: str) -> float:
        w = self.meridian_weights(region)
        return 2.0 * np.pi * float(w.sum())

    # ------------------------------------------------------------------
    def index_of_r(self, r: float) -> int:
        i = round((r - self.r[0]) / self.h)
        if not np.isclose(self.r[i], r, atol=1e-12):
            raise ValueError(f"r={r} is not a grid line")
        return i

    def index_of_z(self, z: float) -> int:
        j = round((z - self.z[0]) / self.h)
        if not np.isclose(self.z[j], z, atol=1e-12):
            raise ValueError(f"z={z} is not a grid line")
        return j

    def describe(self) -> str:
        return (
            f"MeridianGrid(h=1/{round(1 / self.h)}, box=[0,{self.Rv}]x[{-self.Zv},{self.Zv}], "
            f"nodes={self.nr}x{self.nz})"
        )
