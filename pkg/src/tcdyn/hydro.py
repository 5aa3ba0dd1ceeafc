"""Incompressible Navier-Stokes in the annulus with rotating inner wall and lids.

Time scheme: first-order semi-implicit.  Advection, body force and Lorentz
force are explicit; diffusion is implicit; an incremental pressure projection
restores the divergence constraint.  The implicit vector Helmholtz solve
decouples per mode through u+ = u_r + i u_theta and u- = u_r - i u_theta,
which obey scalar operators of Bessel index m+1 and |m-1| (and u_z of index
m), so each substep is a handful of cached LU back-substitutions.

Wall motion: the inner cylinder (r=1) and both lids corotate at angular
velocity Omega_i, the outer cylinder is at rest.  Corner nodes where a lid
meets the outer cylinder take the lid velocity, so the largest nodal speed
of the viscous base flow is the lid rim speed 2*Omega_i.

Azimuthal quadratic terms are evaluated as exact truncated convolutions over
modes (equivalent to fully dealiased collocation products), which keeps
mode-parity classes closed to machine precision.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace

import numpy as np

from .elliptic import EllipticSolver, all_neumann_rows, rect_rows
from .errors import NoConvergenceError
from .fields import (
    FourierScalarField,
    FourierVectorField,
    d_dr,
    d_dz,
    div_arrays,
    energy,
    flow_stats,
    mode_multiply,
)
from .grid import MeridianGrid
from .params import FlowStats

logger = logging.getLogger(__name__)


@dataclass
class WallMotion:
    """Angular velocity of the corotating inner wall and lids."""

    Omega_i: float = 1.0


@dataclass
class HydroState:
    u: FourierVectorField
    p: FourierScalarField
    t: float

    @property
    def M(self):
        return len(self.u.modes)


def body_force_eval(r, z, A):
    """Radial blade-model force (A/r, 0, 0) on 0.8<=|z|<=1, 1.2<=r<=1.8."""
    r = np.asarray(r, dtype=float)
    z = np.asarray(z, dtype=float)
    inside = (np.abs(z) >= 0.8) & (np.abs(z) <= 1.0) & (r >= 1.2) & (r <= 1.8)
    fr = np.where(inside, A / np.where(r == 0, 1.0, r), 0.0)
    return fr, np.zeros_like(fr), np.zeros_like(fr)


def body_force_field(grid: MeridianGrid, A: float) -> FourierVectorField:
    f = FourierVectorField.zeros(grid, "fluid", M=1)
    rr, zz = grid.region_coords("fluid")
    R, Z = np.meshgrid(rr, zz, indexing="ij")
    fr, ft, fz = body_force_eval(R, Z, A)
    f.fr[0] = fr
    return f


class HydroSolver:
    def __init__(self, grid: MeridianGrid, Re: float, dt: float, M: int = 1,
                 wall: WallMotion | None = None, A: float = 0.0):
        self.grid = grid
        self.Re = Re
        self.dt = dt
        self.M = M
        self.wall = wall or WallMotion()
        self.shape = grid.region_shape("fluid")
        rr, zz = grid.region_coords("fluid")
        self.rr, self.zz = rr, zz
        self.rcol = rr[:, None]
        self.force = body_force_field(grid, A) if A != 0.0 else None

        nr, nz = self.shape
        self.boundary = np.zeros(self.shape, dtype=bool)
        self.boundary[0, :] = self.boundary[-1, :] = True
        self.boundary[:, 0] = self.boundary[:, -1] = True

        # Wall azimuthal velocity (mode 0); lids win at shared corner nodes.
        bc = np.zeros(self.shape)
        bc[0, :] = self.wall.Omega_i
        bc[-1, :] = 0.0
        bc[:, 0] = self.wall.Omega_i * rr
        bc[:, -1] = self.wall.Omega_i * rr
        self.bc_ut0 = bc

        self._visc = {}
        for mu in sorted({abs(m - 1) for m in range(M)} | {m for m in range(M)} | {m + 1 for m in range(M)}):
            self._visc[mu] = EllipticSolver(grid, "fluid", mu, 1.0, -dt / Re,
                                            rect_rows(self.shape))
        self._press = {}
        w = grid.meridian_weights("fluid")
        for m in range(M):
            rows = all_neumann_rows(self.shape)
            border = w if m == 0 else None
            self._press[m] = EllipticSolver(grid, "fluid", m, 0.0, 1.0, rows, border_weights=border)
        self._pweights = w / w.sum()
        self._dirichlet_mask = rect_rows(self.shape).dirichlet

    # ------------------------------------------------------------------
    def new_state(self) -> HydroState:
        u = FourierVectorField.zeros(self.grid, "fluid", M=self.M)
        self.impose_walls(u)
        p = FourierScalarField.zeros(self.grid, "fluid", M=self.M)
        return HydroState(u=u, p=p, t=0.0)

    def impose_walls(self, u: FourierVectorField):
        for s, m in enumerate(u.modes):
            for comp in (u.fr, u.fz):
                comp[s][self.boundary] = 0.0
            u.ft[s][self.boundary] = self.bc_ut0[self.boundary] if m == 0 else 0.0

    # ------------------------------------------------------------------
    def advection(self, u: FourierVectorField):
        """(u . grad) u per mode, including the metric terms."""
        h = self.grid.h
        M = len(u.modes)
        mvec = np.array(u.modes).reshape(-1, 1, 1)
        out = []
        th = {c: 1j * mvec * comp / self.rcol for c, comp in zip("rtz", u.components())}
        dr = {c: d_dr(comp, h) for c, comp in zip("rtz", u.components())}
        dz = {c: d_dz(comp, h) for c, comp in zip("rtz", u.components())}
        for c in "rtz":
            adv = (mode_multiply(u.fr, dr[c], M)
                   + mode_multiply(u.ft, th[c], M)
                   + mode_multiply(u.fz, dz[c], M))
            out.append(adv)
        adv_r, adv_t, adv_z = out
        adv_r -= mode_multiply(u.ft, u.ft, M) / self.rcol
        adv_t += mode_multiply(u.fr, u.ft, M) / self.rcol
        return adv_r, adv_t, adv_z

    def cfl_number(self, u: FourierVectorField) -> float:
        h = self.grid.h
        vr = sum(np.abs(u.fr[s]).max() for s in range(len(u.modes)))
        vz = sum(np.abs(u.fz[s]).max() for s in range(len(u.modes)))
        mmax = max(u.modes)
        vt = sum(np.abs(u.ft[s]).max() for s in range(len(u.modes)))
        return self.dt * (vr / h + vz / h + mmax * vt / self.rr[0])

    # ------------------------------------------------------------------
    def step(self, state: HydroState, lorentz: FourierVectorField | None = None) -> HydroState:
        """One semi-implicit step with incremental pressure projection."""
        u, p = state.u, state.p
        dt, h = self.dt, self.grid.h
        M = len(u.modes)
        adv_r, adv_t, adv_z = self.advection(u)

        rhs = []
        for s, m in enumerate(u.modes):
            gp_r = d_dr(p.values[s], h)
            gp_t = 1j * m * p.values[s] / self.rcol
            gp_z = d_dz(p.values[s], h)
            br = u.fr[s] + dt * (-adv_r[s] - gp_r)
            bt = u.ft[s] + dt * (-adv_t[s] - gp_t)
            bz = u.fz[s] + dt * (-adv_z[s] - gp_z)
            if m == 0 and self.force is not None:
                br = br + dt * self.force.fr[0]
            if lorentz is not None:
                br = br + dt * lorentz.fr[s]
                bt = bt + dt * lorentz.ft[s]
                bz = bz + dt * lorentz.fz[s]
            rhs.append((br, bt, bz))

        ustar = u.copy()
        bmask = self._dirichlet_mask
        for s, m in enumerate(u.modes):
            br, bt, bz = rhs[s]
            if m == 0:
                br = br.real.copy()
                bt = bt.real.copy()
                bz = bz.real.copy()
                br[bmask] = 0.0
                bt[bmask] = self.bc_ut0[bmask]
                bz[bmask] = 0.0
                ustar.fr[s] = self._visc[1].solve(br).astype(np.complex128)
                ustar.ft[s] = self._visc[1].solve(bt).astype(np.complex128)
                ustar.fz[s] = self._visc[0].solve(bz).astype(np.complex128)
            else:
                bplus = br + 1j * bt
                bminus = br - 1j * bt
                for b in (bplus, bminus, bz):
                    b[bmask] = 0.0
                up = self._visc[m + 1].solve(bplus)
                um = self._visc[abs(m - 1)].solve(bminus)
                uz = self._visc[m].solve(bz)
                ustar.fr[s] = 0.5 * (up + um)
                ustar.ft[s] = (up - um) / 2j
                ustar.fz[s] = uz

        # Projection
        pnew = p.copy()
        unew = ustar
        for s, m in enumerate(u.modes):
            dv = div_arrays(self.grid, "fluid", m, unew.fr[s], unew.ft[s], unew.fz[s])
            b = dv / dt
            b[self.boundary] = 0.0
            if m == 0:
                b = b.real
            psi = self._press[m].solve(b)
            if m == 0:
                psi = psi - (self._pweights * psi).sum()
                psi = psi.astype(np.complex128)
            gr = d_dr(psi, h)
            gt = 1j * m * psi / self.rcol
            gz = d_dz(psi, h)
            inner = ~self.boundary
            unew.fr[s][inner] -= dt * gr[inner]
            unew.ft[s][inner] -= dt * gt[inner]
            unew.fz[s][inner] -= dt * gz[inner]
            pnew.values[s] = pnew.values[s] + psi
        self.impose_walls(unew)
        return HydroState(u=unew, p=pnew, t=state.t + dt)

    # ------------------------------------------------------------------
    def run_to_steady(self, state: HydroState | None = None, steady_tol: float = 1e-8,
                      max_time: float = 600.0, lorentz=None,
                      on_check=None) -> tuple[HydroState, FlowStats, list]:
        """Advance until the relative change over one rotation period drops
        below steady_tol.  Returns the state, its statistics and the
        (t, relative-change) history."""
        if state is None:
            state = self.new_state()
        omega = self.wall.Omega_i if self.wall.Omega_i > 0 else 1.0
        period = 2.0 * np.pi / omega
        check_steps = max(1, round(period / self.dt))
        history = []
        prev = state.u.copy()
        nsteps = int(np.ceil(max_time / self.dt))
        cfl = None
        for k in range(1, nsteps + 1):
            state = self.step(state, lorentz=lorentz)
            if k % check_steps == 0:
                num = np.sqrt(sum(np.sum(np.abs(a - b) ** 2)
                                  for a, b in zip(state.u.components(), prev.components())))
                den = np.sqrt(sum(np.sum(np.abs(a) ** 2) for a in state.u.components()))
                rel = float(num / den) if den > 0 else 0.0
                history.append((state.t, rel))
                if cfl is None:
                    cfl = self.cfl_number(state.u)
                    if cfl > 0.5:
                        logger.warning("advective CFL %.2f exceeds 0.5; consider a smaller dt", cfl)
                if on_check is not None:
                    on_check(state, rel)
                if rel < steady_tol:
                    return state, flow_stats(state.u), history
                prev = state.u.copy()
        raise NoConvergenceError(
            f"no steady state within t={max_time} (last rel change {history[-1][1]:.3e})",
            history=history,
        )

    # ------------------------------------------------------------------
    def stability_probe(self, base: HydroState, modes: list, horizon: float,
                        seed_rel: float = 1e-8, rng=None, sample_every: int = 20):
        """Growth rates of small perturbations riding on a steady base flow.

        Seeds random small-amplitude fields on the requested modes and
        evolves the full (weakly nonlinear) system; returns a dict mode ->
        GrowthRateEstimate fitted on the late part of each modal energy
        series.  Raises if a perturbation leaves the linear regime.
        """
        from .induction import estimate_growth_rate

        rng = rng or np.random.default_rng(0)
        mmax = max(modes)
        if mmax + 1 > self.M:
            raise ValueError(f"solver built with M={self.M}; need M>={mmax + 1}")
        e0 = energy(base.u)
        state = self.new_state()
        state.u.fr[0] = base.u.fr[base.u.slot_of(0)].copy()
        state.u.ft[0] = base.u.ft[base.u.slot_of(0)].copy()
        state.u.fz[0] = base.u.fz[base.u.slot_of(0)].copy()
        state.p.values[0] = base.p.values[base.p.slot_of(0)].copy()
        vol = self.grid.region_volume("fluid")
        amp = np.sqrt(seed_rel * 2.0 * e0 / vol)
        for m in modes:
            s = state.u.slot_of(m)
            for comp in (state.u.fr, state.u.ft, state.u.fz):
                noise = rng.standard_normal(self.shape) + 1j * rng.standard_normal(self.shape)
                comp[s] = amp * noise
        self.impose_walls(state.u)

        nsteps = int(np.ceil(horizon / self.dt))
        times, series = [], {m: [] for m in modes}
        from .fields import modal_energies

        for k in range(nsteps):
            state = self.step(state)
            if k % sample_every == 0:
                em = modal_energies(state.u)
                times.append(state.t)
                for m in modes:
                    series[m].append(em[m])
                if max(em[m] for m in modes) > 1e-4 * e0:
                    raise NoConvergenceError(
                        "perturbation left the linear regime before the fit window ended")
        times = np.array(times)
        return {m: estimate_growth_rate(times, np.array(series[m]), mode=m) for m in modes}
