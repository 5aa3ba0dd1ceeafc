"""Fourier-decomposed fields on the meridian grid and their cylindrical operators.

A real field is stored as complex coefficient arrays per azimuthal mode with
the reconstruction

    u(r, theta, z) = sum_m Re[ u_m(r, z) * exp(i m theta) ],

so mode 0 is purely real and each higher mode contributes
Re(u_m) cos(m theta) - Im(u_m) sin(m theta).  With this convention the energy
of a vector field splits over modes as

    E = 1/2 * [ 2*pi * <|u_0|^2> + pi * sum_{m>=1} <|u_m|^2> ],

where <.> is the meridian integral with the r weight.  All derivative
operators are centred second-order differences with second-order one-sided
closures at subdomain edges.

Axis treatment: the combinations u_r + i*u_theta, u_r - i*u_theta and u_z of
a mode-m vector field behave near r=0 like scalar Bessel modes of index
m+1, |m-1| and m respectively.  An index-0 quantity is even across the axis
(quadratic one-sided extrapolation), any other index vanishes there.  The
same rule covers scalars (index m) and gradients.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .grid import MeridianGrid
from .params import FlowStats


def _contiguous(modes):
    return tuple(modes) == tuple(range(len(modes)))


@dataclass
class FourierScalarField:
    grid: MeridianGrid
    region: str
    modes: tuple
    values: np.ndarray  # (nmodes, nr, nz) complex

    @classmethod
    def zeros(cls, grid, region, M=1, modes=None):
        if modes is None:
            modes = tuple(range(M))
        shape = (len(modes),) + grid.region_shape(region)
        return cls(grid, region, tuple(modes), np.zeros(shape, dtype=np.complex128))

    def copy(self):
        return replace(self, values=self.values.copy())

    def slot_of(self, m):
        return self.modes.index(m)


@dataclass
class FourierVectorField:
    grid: MeridianGrid
    region: str
    modes: tuple
    fr: np.ndarray
    ft: np.ndarray
    fz: np.ndarray

    @classmethod
    def zeros(cls, grid, region, M=1, modes=None):
        if modes is None:
            modes = tuple(range(M))
        shape = (len(modes),) + grid.region_shape(region)
        z = lambda: np.zeros(shape, dtype=np.complex128)
        return cls(grid, region, tuple(modes), z(), z(), z())

    def copy(self):
        return replace(self, fr=self.fr.copy(), ft=self.ft.copy(), fz=self.fz.copy())

    def slot_of(self, m):
        return self.modes.index(m)

    def components(self):
        return (self.fr, self.ft, self.fz)

    def scaled(self, c):
        return replace(self, fr=c * self.fr, ft=c * self.ft, fz=c * self.fz)

    def plus(self, other, c=1.0):
        return replace(
            self,
            fr=self.fr + c * other.fr,
            ft=self.ft + c * other.ft,
            fz=self.fz + c * other.fz,
        )


# ----------------------------------------------------------------------
# Derivatives and axis closure
# ----------------------------------------------------------------------

def d_dr(a: np.ndarray, h: float) -> np.ndarray:
    """d/dr along the second-to-last axis (works on 2D arrays and mode stacks)."""
    return np.gradient(a, h, axis=-2, edge_order=2)

def d_dz(a: np.ndarray, h: float) -> np.ndarray:
    return np.gradient(a, h, axis=-1, edge_order=2)


def _axis_even(col1, col2):
    # quadratic extrapolation of an even function to r=0
    return (4.0 * col1 - col2) / 3.0


def _fix_axis_scalar(a: np.ndarray, m: int):
    a[0, :] = _axis_even(a[1, :], a[2, :]) if m == 0 else 0.0


def _fix_axis_vector(cr, ct, cz, m: int):
    p0 = 0.0  # index m+1 >= 1 always vanishes on the axis
    if m == 1:
        q = cr - 1j * ct
        q0 = _axis_even(q[1, :], q[2, :])
    else:
        q0 = 0.0
    cr[0, :] = 0.5 * (p0 + q0)
    ct[0, :] = (p0 - q0) / 2j
    cz[0, :] = _axis_even(cz[1, :], cz[2, :]) if m == 0 else 0.0


def _radial_coords(grid, region):
    rr, _ = grid.region_coords(region)
    has_axis = rr[0] == 0.0
    r_safe = rr.copy()
    if has_axis:
        r_safe[0] = 1.0  # axis column is overwritten afterwards
    return rr[:, None], r_safe[:, None], has_axis


def curl_arrays(grid, region, m, fr, ft, fz):
    """Curl of one azimuthal mode; returns (cr, ct, cz) arrays."""
    h = grid.h
    _, r_safe, has_axis = _radial_coords(grid, region)
    cr = (1j * m / r_safe) * fz - d_dz(ft, h)
    ct = d_dz(fr, h) - d_dr(fz, h)
    cz = d_dr(ft, h) + ft / r_safe - (1j * m / r_safe) * fr
    if has_axis:
        _fix_axis_vector(cr, ct, cz, m)
    return cr, ct, cz


def div_arrays(grid, region, m, fr, ft, fz):
    h = grid.h
    _, r_safe, has_axis = _radial_coords(grid, region)
    dv = d_dr(fr, h) + fr / r_safe + (1j * m / r_safe) * ft + d_dz(fz, h)
    if has_axis:
        _fix_axis_scalar(dv, m)
    return dv


def grad_arrays(grid, region, m, phi):
    h = grid.h
    _, r_safe, has_axis = _radial_coords(grid, region)
    gr = d_dr(phi, h)
    gt = (1j * m / r_safe) * phi
    gz = d_dz(phi, h)
    if has_axis:
        _fix_axis_vector(gr, gt, gz, m)
    return gr, gt, gz


def curl_mode(f: FourierVectorField, m: int) -> FourierVectorField:
    """Curl of the single mode m of f, returned as a one-mode field."""
    s = f.slot_of(m)
    cr, ct, cz = curl_arrays(f.grid, f.region, m, f.fr[s], f.ft[s], f.fz[s])
    return FourierVectorField(f.grid, f.region, (m,), cr[None], ct[None], cz[None])


def divergence_mode(f: FourierVectorField, m: int) -> FourierScalarField:
    s = f.slot_of(m)
    dv = div_arrays(f.grid, f.region, m, f.fr[s], f.ft[s], f.fz[s])
    return FourierScalarField(f.grid, f.region, (m,), dv[None])


def gradient_mode(phi: FourierScalarField, m: int) -> FourierVectorField:
    s = phi.slot_of(m)
    gr, gt, gz = grad_arrays(phi.grid, phi.region, m, phi.values[s])
    return FourierVectorField(phi.grid, phi.region, (m,), gr[None], gt[None], gz[None])


# ----------------------------------------------------------------------
# Quadrature and statistics
# ----------------------------------------------------------------------

def mode_weight(m: int) -> float:
    return 2.0 * np.pi if m == 0 else np.pi


def energy(f: FourierVectorField, region: str | None = None) -> float:
    """1/2 * integral of |f|^2 over the field's region."""
    if region is not None and region != f.region:
        raise ValueError(f"field lives on {f.region!r}, not {region!r}")
    w = f.grid.meridian_weights(f.region)
    total = 0.0
    for s, m in enumerate(f.modes):
        dens = np.abs(f.fr[s]) ** 2 + np.abs(f.ft[s]) ** 2 + np.abs(f.fz[s]) ** 2
        total += 0.5 * mode_weight(m) * float(np.sum(w * dens))
    return total


def modal_energies(f: FourierVectorField) -> dict:
    w = f.grid.meridian_weights(f.region)
    out = {}
    for s, m in enumerate(f.modes):
        dens = np.abs(f.fr[s]) ** 2 + np.abs(f.ft[s]) ** 2 + np.abs(f.fz[s]) ** 2
        out[m] = 0.5 * mode_weight(m) * float(np.sum(w * dens))
    return out


def reconstruct_theta(f: FourierVectorField, thetas: np.ndarray):
    """Real (r, theta, z) samples of each component; shape (ntheta, nr, nz)."""
    shape = (len(thetas),) + f.fr.shape[1:]
    out = [np.zeros(shape) for _ in range(3)]
    for s, m in enumerate(f.modes):
        phase = np.exp(1j * m * np.asarray(thetas))
        for comp, acc in zip((f.fr[s], f.ft[s], f.fz[s]), out):
            acc += np.real(phase[:, None, None] * comp[None, :, :])
    return out


def flow_stats(f: FourierVectorField) -> FlowStats:
    """rms speed, poloidal/toroidal split and nodal maximum of a flow."""
    if f.region != "fluid":
        raise ValueError("flow statistics are defined on the fluid annulus")
    w = f.grid.meridian_weights("fluid")
    vol = f.grid.region_volume("fluid")
    ep = et = 0.0
    for s, m in enumerate(f.modes):
        fac = mode_weight(m)
        ep += 0.5 * fac * float(np.sum(w * (np.abs(f.fr[s]) ** 2 + np.abs(f.fz[s]) ** 2)))
        et += 0.5 * fac * float(np.sum(w * np.abs(f.ft[s]) ** 2))
    vp = np.sqrt(2.0 * ep / vol)
    vt = np.sqrt(2.0 * et / vol)
    vstar = np.sqrt(vp**2 + vt**2)
    lam = vp / vt if vt > 0 else np.inf
    max_m = max(f.modes)
    if max_m == 0:
        vmax = float(
            np.sqrt(np.abs(f.fr[0]) ** 2 + np.abs(f.ft[0]) ** 2 + np.abs(f.fz[0]) ** 2).max()
        )
    else:
        nth = max(64, 4 * max_m + 1)
        thetas = np.linspace(0.0, 2.0 * np.pi, nth, endpoint=False)
        ur, ut, uz = reconstruct_theta(f, thetas)
        vmax = float(np.sqrt(ur**2 + ut**2 + uz**2).max())
    return FlowStats(V_star=vstar, Vp_star=vp, Vt_star=vt, Lambda=lam, V_max=vmax)


# ----------------------------------------------------------------------
# Equatorial symmetry
# ----------------------------------------------------------------------

def equatorial_reflection(f: FourierVectorField) -> FourierVectorField:
    """(f_r, f_theta, -f_z)(r, theta, -z); an involution on symmetric grids."""
    _, zz = f.grid.region_coords(f.region)
    if not np.allclose(zz + zz[::-1], 0.0, atol=1e-12):
        raise ValueError("region is not symmetric under z -> -z")
    return replace(f, fr=f.fr[:, :, ::-1].copy(), ft=f.ft[:, :, ::-1].copy(),
                   fz=-f.fz[:, :, ::-1].copy())


def equatorial_split(f: FourierVectorField):
    """Split into the symmetric and antisymmetric parts; their sum is f."""
    sf = equatorial_reflection(f)
    sym = f.plus(sf).scaled(0.5)
    anti = f.plus(sf, -1.0).scaled(0.5)
    return sym, anti


# ----------------------------------------------------------------------
# Azimuthal products
# ----------------------------------------------------------------------

def mode_multiply(a: np.ndarray, b: np.ndarray, m_out: int) -> np.ndarray:
    """Pointwise product of two real fields given by mode coefficient stacks.

    a and b hold contiguous modes 0..Ma-1 / 0..Mb-1 in the half-spectrum
    convention above.  The product is evaluated as the exact truncated
    convolution, which is what a collocation product with full padding
    would give; modes >= m_out are discarded (dealiasing by truncation).
    Zero input modes contribute exact zeros, so mode-parity classes are
    preserved bit-for-bit.
    """
    ma, mb = a.shape[0], b.shape[0]
    shape = a.shape[1:]
    out = np.zeros((m_out,) + shape, dtype=np.complex128)

    def full(c, p):
        # coefficient of exp(i p theta) in the full two-sided spectrum
        if p == 0:
            return c[0]
        if p > 0:
            return 0.5 * c[p] if p < c.shape[0] else None
        return 0.5 * np.conj(c[-p]) if -p < c.shape[0] else None

    for k in range(m_out):
        acc = np.zeros(shape, dtype=np.complex128)
        for p in range(-(ma - 1), ma):
            ca = full(a, p)
            if ca is None:
                continue
            cb = full(b, k - p)
            if cb is None:
                continue
            acc = acc + ca * cb
        out[k] = acc if k > 0 else acc.real
        if k > 0:
            out[k] *= 2.0
    return out


def cross_product_modes(a_comps, b_comps, m_out: int):
    """(a x b) per mode for two coefficient-stack triples (r, theta, z)."""
    ar, at, az = a_comps
    br, bt, bz = b_comps
    cr = mode_multiply(at, bz, m_out) - mode_multiply(az, bt, m_out)
    ct = mode_multiply(az, br, m_out) - mode_multiply(ar, bz, m_out)
    cz = mode_multiply(ar, bt, m_out) - mode_multiply(at, br, m_out)
    return cr, ct, cz
