"""Hexagonal cell lattice with hierarchical 3-way coset partitioning.

The network is a rhombic patch of 3^m hexagonal cells in axial coordinates,
optionally closed into a torus.  Recursive reuse-3 coloring splits the cells
into equi-spaced cosets: the depth-1 color of cell (u, v) is (u + 2v) mod 3,
and deeper colors apply the same rule to the index-3 sublattice coordinates.
Nearest cells of one depth-i coset are sqrt(3)^i times farther apart than
nearest neighbours, which is what makes deeper pilot reuse less contaminated.

All coordinates and distances are expressed in units of the cell radius
(circumradius); multiply by ``cell_radius_m`` for meters.  Keeping geometry
scale-free makes downstream rate estimates bit-identical across radii.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

SQRT3 = math.sqrt(3.0)

# Axial basis vectors of the cell-center lattice, in units of the cell radius.
# Adjacent centers are sqrt(3)*r apart (hexagons of circumradius r share edges).
_A1 = np.array([SQRT3, 0.0])
_A2 = np.array([SQRT3 / 2.0, 1.5])


class AxialCoord(NamedTuple):
    u: int
    v: int


class CosetId(NamedTuple):
    depth: int
    index: int


def exponent_of_three(L: int) -> int:
    """Return m with L = 3^m, rejecting non-powers of 3."""
    if L < 3:
        raise ValueError(f"cell count must be a power of 3, got {L}")
    m = round(math.log(L, 3))
    if 3**m != L:
        raise ValueError(f"cell count must be a power of 3, got {L}")
    return m


def cluster_size(i: int, j: int) -> int:
    """Cells per cluster, i^2 + i*j + j^2, for integer cluster geometry (i, j)."""
    if i < 0 or j < 0 or (i == 0 and j == 0):
        raise ValueError("cluster shape integers must be >= 0 and not both zero")
    return i * i + i * j + j * j


def _gauss_reduce(w1: np.ndarray, w2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Lagrange-reduce a 2D lattice basis (shortest first, small projection)."""
    b1, b2 = w1.copy(), w2.copy()
    if b1 @ b1 > b2 @ b2:
        b1, b2 = b2, b1
    while True:
        mu = round((b2 @ b1) / (b1 @ b1))
        b2 = b2 - mu * b1
        if b2 @ b2 >= b1 @ b1:
            return b1, b2
        b1, b2 = b2, b1


class HexLattice:
    """Immutable rhombic patch of 3^m hexagonal cells, optionally toroidal.

    Build with :func:`build_lattice`.  Cells are indexed 0..L-1 in lexicographic
    (u, v) order over the fundamental domain [0, n_u) x [0, n_v).
    """

    def __init__(self, m: int, cell_radius_m: float = 1.0,
                 hole_ratio: float = 0.14, wraparound: bool = True):
        if not isinstance(m, int) or m < 2:
            raise ValueError("need m >= 2: the deepest allowed leaf is depth m-1 >= 1")
        if cell_radius_m <= 0:
            raise ValueError("cell_radius_m must be positive")
        if not 0.0 <= hole_ratio < 1.0:
            raise ValueError("hole_ratio must lie in [0, 1)")
        self.m = m
        self.L = 3**m
        self.cell_radius_m = float(cell_radius_m)
        self.hole_ratio = float(hole_ratio)
        self.wraparound = bool(wraparound)
        # Rhombus of 3^ceil(m/2) x 3^floor(m/2) cells: its translation lattice is
        # a sublattice of every depth-i coset lattice (i <= m-1), so coloring is
        # consistent under wraparound and every coset has exactly L/3^i cells.
        self.n_u = 3 ** ((m + 1) // 2)
        self.n_v = 3 ** (m // 2)

        self.cells = [AxialCoord(u, v) for u in range(self.n_u) for v in range(self.n_v)]
        uv = np.array(self.cells, dtype=float)
        self.centers = uv[:, :1] * _A1 + uv[:, 1:] * _A2

        self._coset_index = np.zeros((self.L, m), dtype=np.int64)
        for idx, cell in enumerate(self.cells):
            self._coset_index[idx] = self._coset_digits_path(cell)
        self._members: dict[tuple[int, int], list[int]] = {}
        for idx in range(self.L):
            for depth in range(m):
                key = (depth, int(self._coset_index[idx, depth]))
                self._members.setdefault(key, []).append(idx)

        if self.wraparound:
            w1 = self.n_u * _A1
            w2 = self.n_v * _A2
            b1, b2 = _gauss_reduce(w1, w2)
            basis = np.column_stack([b1, b2])
            self._torus_basis = basis
            self._torus_basis_inv = np.linalg.inv(basis)
            # 3x3 Babai neighbourhood; exact closest-vector for a reduced 2D basis.
            shifts = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)
            self._babai_shifts = shifts @ basis.T

    # -- cell indexing -----------------------------------------------------

    def canonical(self, cell) -> AxialCoord:
        u, v = cell
        return AxialCoord(int(u) % self.n_u, int(v) % self.n_v)

    def cell_index(self, cell) -> int:
        c = self.canonical(cell)
        return c.u * self.n_v + c.v

    def cell_center(self, cell) -> np.ndarray:
        return self.centers[self.cell_index(cell)]

    # -- hierarchical cosets -----------------------------------------------

    def _coset_digits_path(self, cell: AxialCoord) -> list[int]:
        """Cumulative coset indices of `cell` at depths 0..m-1.

        Depth-0 is the single root coset.  Each step extracts the reuse-3
        color c = (u + 2v) mod 3 and descends into the sublattice through
        the inverse of (u, v) -> (u - v, u + 2v), a sqrt(3) similarity.
        """
        u, v = self.canonical(cell)
        digits: list[int] = []
        for _ in range(self.m - 1):
            c = (u + 2 * v) % 3
            digits.append(c)
            u, v = u - c, v
            u, v = (2 * u + v) // 3, (v - u) // 3
        index = 0
        path = [0]
        for depth, c in enumerate(digits):
            index += c * 3**depth
            path.append(index)
        return path

    def coset_of(self, cell, depth: int) -> CosetId:
        if not 0 <= depth <= self.m - 1:
            raise ValueError(f"depth must be in [0, {self.m - 1}], got {depth}")
        return CosetId(depth, int(self._coset_index[self.cell_index(cell), depth]))

    def coset_members(self, coset: CosetId) -> list[AxialCoord]:
        try:
            idxs = self._members[(coset.depth, coset.index)]
        except KeyError:
            raise ValueError(f"no such coset: {coset}") from None
        return [self.cells[i] for i in idxs]

    def cosharing_cells(self, cell, depth: int) -> list[AxialCoord]:
        """All other cells in `cell`'s depth-`depth` coset (its interferer set)."""
        me = self.cell_index(cell)
        coset = self.coset_of(cell, depth)
        return [self.cells[i] for i in self._members[(depth, coset.index)] if i != me]

    def cosharing_indices(self, cell_index: int, depth: int) -> list[int]:
        key = (depth, int(self._coset_index[cell_index, depth]))
        return [i for i in self._members[key] if i != cell_index]

    # -- distances -----------------------------------------------------------

    def min_image_norms(self, deltas: np.ndarray) -> np.ndarray:
        """Torus norms of difference vectors, shape (n, 2) -> (n,)."""
        deltas = np.atleast_2d(np.asarray(deltas, dtype=float))
        if not self.wraparound:
            return np.hypot(deltas[:, 0], deltas[:, 1])
        coords = deltas @ self._torus_basis_inv.T
        residual = deltas - np.rint(coords) @ self._torus_basis.T
        cands = residual[:, None, :] - self._babai_shifts[None, :, :]
        return np.sqrt(np.min(np.einsum("nkc,nkc->nk", cands, cands), axis=1))

    def distance(self, a, b) -> float:
        """Distance between two points (units of cell radius), minimum-image on the torus."""
        d = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
        return float(self.min_image_norms(d[None, :])[0])

    def to_meters(self, length: float) -> float:
        return length * self.cell_radius_m

    # -- user placement ------------------------------------------------------

    def sample_cell_offsets(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform points in the canonical hexagon minus the BS-hole disk, (n, 2).

        Rejection from the bounding rectangle; the acceptance rate is about
        0.73 for hole_ratio 0.14, so the loop terminates quickly.
        """
        out = np.empty((n, 2))
        filled = 0
        while filled < n:
            want = n - filled
            batch = max(32, int(1.6 * want))
            x = rng.uniform(-SQRT3 / 2.0, SQRT3 / 2.0, size=batch)
            y = rng.uniform(-1.0, 1.0, size=batch)
            ok = (np.abs(x) + SQRT3 * np.abs(y) <= SQRT3) & (x * x + y * y >= self.hole_ratio**2)
            took = min(int(ok.sum()), want)
            sel = np.flatnonzero(ok)[:took]
            out[filled:filled + took, 0] = x[sel]
            out[filled:filled + took, 1] = y[sel]
            filled += took
        return out

    def sample_user_position(self, cell, rng: np.random.Generator) -> np.ndarray:
        """One uniform user position in `cell` (annular hexagon, BS at the center)."""
        return self.cell_center(cell) + self.sample_cell_offsets(1, rng)[0]

    def __repr__(self) -> str:
        return (f"HexLattice(m={self.m}, L={self.L}, domain={self.n_u}x{self.n_v}, "
                f"hole_ratio={self.hole_ratio}, wraparound={self.wraparound})")


def build_lattice(m: int, cell_radius_m: float = 1.0, hole_ratio: float = 0.14,
                  wraparound: bool = True) -> HexLattice:
    """Construct the 3^m-cell hexagonal lattice used throughout the library."""
    return HexLattice(m, cell_radius_m=cell_radius_m, hole_ratio=hole_ratio,
                      wraparound=wraparound)
