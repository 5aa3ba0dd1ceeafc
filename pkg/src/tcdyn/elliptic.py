"""Sparse direct solves of per-mode Helmholtz problems on meridian subgrids.

Every implicit substep in the package reduces to

    (c0 + c1 * L_mu) f = rhs,    L_mu = d_rr + (1/r) d_r - mu^2/r^2 + d_zz,

on a rectangular index range of the meridian grid, with a mix of boundary
row types: Dirichlet values, one-sided (second order) directional-derivative
rows for Neumann data, summed derivative rows at re-entrant corners, and
inactive nodes masked out of L-shaped domains.  Matrices are assembled once
per (operator, boundary layout) and LU-factorised; each later solve is a pair
of triangular sweeps, so time stepping costs back-substitutions only.

A pure-Neumann problem (the mode-0 pressure solve) is closed by bordering the
matrix with a quadrature-weight row/column, which pins the mean and absorbs
any small compatibility defect of the right-hand side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from .errors import SolverError
from .grid import MeridianGrid


@dataclass
class RowSpec:
    """Classification of every node of the subgrid into one row type."""

    interior: np.ndarray
    dirichlet: np.ndarray
    inactive: np.ndarray | None = None
    # (mask, axis, sign): one-sided derivative along +-r (axis 0) or +-z (axis 1)
    neumann: list = field(default_factory=list)
    # (i, j, [(axis, sign), ...]): summed derivative rows at corners
    neumann_sum: list = field(default_factory=list)

    def validate(self, shape):
        cover = self.interior.astype(int) + self.dirichlet.astype(int)
        if self.inactive is not None:
            cover += self.inactive.astype(int)
        for mask, _, _ in self.neumann:
            cover += mask.astype(int)
        for i, j, _ in self.neumann_sum:
            cover[i, j] += 1
        if cover.shape != shape or not np.all(cover == 1):
            bad = np.argwhere(cover != 1)
            raise SolverError(f"row classification not a partition at nodes {bad[:5]}")


class EllipticSolver:
    """LU-backed solver for one (c0 + c1 * L_mu) operator and row layout."""

    def __init__(self, grid: MeridianGrid, region: str, mu: int, c0: float, c1: float,
                 rows: RowSpec, border_weights: np.ndarray | None = None):
        self.grid = grid
        self.region = region
        self.shape = grid.region_shape(region)
        rows.validate(self.shape)
        self.rows = rows
        self.bordered = border_weights is not None
        self._assemble(mu, c0, c1, border_weights)

    def _assemble(self, mu, c0, c1, border_weights):
        nr, nz = self.shape
        rr, _ = self.grid.region_coords(self.region)
        h = self.grid.h
        n = nr * nz

        def flat(ii, jj):
            return ii * nz + jj

        data, rows_i, cols_i = [], [], []

        def add(rw, cl, vl):
            rows_i.append(np.asarray(rw, dtype=np.int64))
            cols_i.append(np.asarray(cl, dtype=np.int64))
            data.append(np.asarray(vl, dtype=np.float64))

        ii, jj = np.nonzero(self.rows.interior)
        if ii.size:
            if np.any(rr[ii] == 0.0):
                raise SolverError("interior operator row on the axis; classify it as a BC row")
            k = flat(ii, jj)
            ri = rr[ii]
            add(k, k, c0 + c1 * (-4.0 / h**2 - mu**2 / ri**2))
            add(k, flat(ii + 1, jj), c1 * (1.0 / h**2 + 1.0 / (2.0 * ri * h)))
            add(k, flat(ii - 1, jj), c1 * (1.0 / h**2 - 1.0 / (2.0 * ri * h)))
            add(k, flat(ii, jj + 1), np.full(ii.size, c1 / h**2))
            add(k, flat(ii, jj - 1), np.full(ii.size, c1 / h**2))

        for mask in (self.rows.dirichlet, self.rows.inactive):
            if mask is None:
                continue
            ii, jj = np.nonzero(mask)
            if ii.size:
                k = flat(ii, jj)
                add(k, k, np.ones(ii.size))

        def derivative_entries(ii, jj, axis, sign):
            k = flat(ii, jj)
            if axis == 0:
                s1, s2 = flat(ii + sign, jj), flat(ii + 2 * sign, jj)
            else:
                s1, s2 = flat(ii, jj + sign), flat(ii, jj + 2 * sign)
            add(k, k, np.full(ii.size, -3.0 / (2.0 * h)))
            add(k, s1, np.full(ii.size, 4.0 / (2.0 * h)))
            add(k, s2, np.full(ii.size, -1.0 / (2.0 * h)))

        for mask, axis, sign in self.rows.neumann:
            ii, jj = np.nonzero(mask)
            if ii.size:
                derivative_entries(ii, jj, axis, sign)

        for i, j, dirs in self.rows.neumann_sum:
            for axis, sign in dirs:
                derivative_entries(np.array([i]), np.array([j]), axis, sign)

        rows_i = np.concatenate(rows_i)
        cols_i = np.concatenate(cols_i)
        data = np.concatenate(data)

        if self.bordered:
            w = np.asarray(border_weights, dtype=np.float64).reshape(-1)
            extra_r = np.concatenate([rows_i, np.arange(n), np.full(n, n)])
            extra_c = np.concatenate([cols_i, np.full(n, n), np.arange(n)])
            extra_d = np.concatenate([data, w, w])
            mat = sp.coo_matrix((extra_d, (extra_r, extra_c)), shape=(n + 1, n + 1))
        else:
            mat = sp.coo_matrix((data, (rows_i, cols_i)), shape=(n, n))
        try:
            self._lu = splu(mat.tocsc())
        except RuntimeError as exc:  # singular matrix
            raise SolverError(f"factorization failed for mu={mu}: {exc}") from exc

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solve for a region-shaped right-hand side; complex rhs allowed."""
        b = np.asarray(rhs).reshape(-1)
        if self.bordered:
            b = np.concatenate([b, [0.0]])
        if np.iscomplexobj(b):
            cols = np.column_stack([b.real, b.imag])
            x = self._lu.solve(cols)
            out = x[:, 0] + 1j * x[:, 1]
        else:
            out = self._lu.solve(b.astype(np.float64))
        if self.bordered:
            out = out[:-1]
        return out.reshape(self.shape)


# ----------------------------------------------------------------------
# Common row layouts
# ----------------------------------------------------------------------

def rect_rows(shape, axis_col: str | None = None) -> RowSpec:
    """All-boundary-Dirichlet layout for a rectangle.

    axis_col: None, "dirichlet" or "neumann"; how to treat the i=0 column
    when it sits on the axis (Neumann means even symmetry there).
    """
    nr, nz = shape
    interior = np.zeros(shape, dtype=bool)
    interior[1:-1, 1:-1] = True
    dirichlet = ~interior
    neumann = []
    if axis_col == "neumann":
        mask = np.zeros(shape, dtype=bool)
        mask[0, 1:-1] = True
        dirichlet = dirichlet & ~mask
        neumann.append((mask, 0, +1))
    return RowSpec(interior=interior, dirichlet=dirichlet, neumann=neumann)


def all_neumann_rows(shape) -> RowSpec:
    """Neumann data on every edge, corner rows summed (pressure layout)."""
    nr, nz = shape
    interior = np.zeros(shape, dtype=bool)
    interior[1:-1, 1:-1] = True
    m_left = np.zeros(shape, dtype=bool)
    m_left[0, 1:-1] = True
    m_right = np.zeros(shape, dtype=bool)
    m_right[-1, 1:-1] = True
    m_bot = np.zeros(shape, dtype=bool)
    m_bot[1:-1, 0] = True
    m_top = np.zeros(shape, dtype=bool)
    m_top[1:-1, -1] = True
    corners = [
        (0, 0, [(0, +1), (1, +1)]),
        (0, nz - 1, [(0, +1), (1, -1)]),
        (nr - 1, 0, [(0, -1), (1, +1)]),
        (nr - 1, nz - 1, [(0, -1), (1, -1)]),
    ]
    return RowSpec(
        interior=interior,
        dirichlet=np.zeros(shape, dtype=bool),
        neumann=[(m_left, 0, +1), (m_right, 0, -1), (m_bot, 1, +1), (m_top, 1, -1)],
        neumann_sum=corners,
    )
