"""Closed-form optimal pilot assignment, its breakpoints, and oracles.

The per-cell sum rate of an assignment is C_sum(p) = sum_i 3^-i p_i C_i and
the net rate discounts the pilot overhead: C_net = (N_coh - N_pil)/N_coh *
C_sum.  For a fixed pilot length the C_sum-optimal vector has a closed form
with at most two adjacent nonzero entries; as the coherence interval grows
the optimal pilot length steps up by 2 at breakpoints Delta_n given in
closed form by the measured rates.

The brute-force oracle evaluates objectives in exact rational arithmetic
(floats are dyadic rationals, so Fraction(C_i) is lossless).  That makes
argmax ties exact instead of rounding accidents, and the lexicographically
smallest tie winner then provably agrees with the closed form's half-open
regime convention at integer-valued breakpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .assignment import (PilotAssignmentVector, PilotRealization, chi,
                         count_assignments, enumerate_assignments,
                         pilot_length, valid_pilot_lengths)
from .channel import DOMAIN_RANDOM_ASSIGN, RateProfile, derive_rng
from .hexgrid import HexLattice, exponent_of_three

BRUTE_FORCE_CAP = 10**7


def csum(p: PilotAssignmentVector, rates: RateProfile) -> float:
    """Per-cell sum rate, sum_i 3^-i p_i C_i."""
    if rates.m != p.m:
        raise ValueError(f"profile has {rates.m} depths but vector has {p.m}")
    return float(sum(p[i] * rates.C[i] / 3**i for i in range(p.m)))


def cnet(p: PilotAssignmentVector, rates: RateProfile, N_coh: int) -> float:
    """Net rate (N_coh - N_pil)/N_coh * C_sum; negative when p is infeasible."""
    if N_coh < 1:
        raise ValueError("N_coh must be >= 1")
    return (N_coh - pilot_length(p)) / N_coh * csum(p, rates)


def _csum_exact(p: PilotAssignmentVector, C: Sequence[float]) -> Fraction:
    return sum((Fraction(p[i]) * Fraction(float(C[i])) / 3**i for i in range(p.m)),
               Fraction(0))


def _cnet_exact(p: PilotAssignmentVector, C: Sequence[float], N_coh: int) -> Fraction:
    return Fraction(N_coh - pilot_length(p), N_coh) * _csum_exact(p, C)


def optimal_for_length(L: int, K: int, N_p0: int) -> PilotAssignmentVector:
    """The C_sum-optimal vector of pilot length N_p0 (closed form).

    Partitioning acts fill depths top-down, so the leaves concentrate on the
    two adjacent depths chi(N_p0) and chi(N_p0)+1.
    """
    m = exponent_of_three(L)
    if N_p0 not in valid_pilot_lengths(L, K):
        raise ValueError(f"N_p0={N_p0} is not a valid pilot length for L={L}, K={K}")
    acts = (N_p0 - K) // 2
    x = chi(N_p0, K)
    p = [0] * m
    p[x] = sum(K * 3**s for s in range(x + 1)) - acts
    spill = 3 * (acts - sum(K * 3**s for s in range(x)))
    if x + 1 < m:
        p[x + 1] = spill
    elif spill != 0:
        raise AssertionError("length-constrained optimum spilled past the deepest depth")
    vec = PilotAssignmentVector(L=L, K=K, p=tuple(p))
    assert pilot_length(vec) == N_p0
    return vec


def corollary_step(p_star: PilotAssignmentVector, N_p0: int) -> PilotAssignmentVector:
    """Step from the length-N_p0 optimum to the length-(N_p0+2) one.

    Tosses 1 leaf from depth chi(N_p0) and adds 3 at the next depth, trading
    the most contaminated leaf for three deeper ones.
    """
    if N_p0 + 2 > p_star.L * p_star.K // 3:
        raise ValueError(f"no optimal vector beyond the maximum length {N_p0}")
    x = chi(N_p0, p_star.K)
    p = list(p_star.p)
    p[x] -= 1
    p[x + 1] += 3
    return PilotAssignmentVector(L=p_star.L, K=p_star.K, p=tuple(p))


@dataclass
class BreakpointTable:
    """Coherence-time breakpoints Delta_1 < ... < Delta_{N_LK}.

    Crossing Delta_n moves the optimal pilot length from 2(n-1)+K to 2n+K.
    Exact rationals are kept alongside the float view so regime decisions at
    integer coherence times never hinge on rounding.
    """

    Delta: np.ndarray
    N_LK: int
    exact: list[Fraction]

    def __post_init__(self):
        self.Delta = np.asarray(self.Delta, dtype=float)
        if len(self.Delta) != self.N_LK:
            raise ValueError("breakpoint count must equal N_LK")
        if any(b <= a for a, b in zip(self.exact, self.exact[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    def regime(self, N_coh: int) -> int:
        """Largest n with Delta_n <= N_coh, or 0 below Delta_1."""
        lo, hi = 0, self.N_LK
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.exact[mid - 1] <= N_coh:
                lo = mid
            else:
                hi = mid - 1
        return lo


def breakpoints(L: int, K: int, rates: RateProfile) -> BreakpointTable:
    """Delta_n from the measured rate profile (exact in the given C values)."""
    m = exponent_of_three(L)
    if rates.m != m:
        raise ValueError(f"profile has {rates.m} depths, lattice needs {m}")
    if not np.all(np.diff(rates.C) > 0):
        raise ValueError("rates must be strictly increasing")
    C = [Fraction(float(c)) for c in rates.C]
    N_LK = (L * K // 3 - K) // 2
    exact = []
    for n in range(1, N_LK + 1):
        eta = chi(2 * n + K - 2, K)
        xi = 3**eta * C[eta] / (C[eta + 1] - C[eta])
        delta = 2 * (2 * n - 1 - sum(K * 3**i for i in range(eta)) + K * xi) + K
        exact.append(delta)
    return BreakpointTable(Delta=np.array([float(d) for d in exact]),
                           N_LK=N_LK, exact=exact)


def optimal_assignment(L: int, K: int, N_coh: int, rates: RateProfile,
                       table: Optional[BreakpointTable] = None) -> PilotAssignmentVector:
    """The net-rate-optimal vector for a coherence interval.

    Regimes are half-open on the right: N_coh in [Delta_n, Delta_{n+1}) gets
    pilot length 2n+K, and anything below Delta_1 gets full reuse.
    """
    if N_coh < 1:
        raise ValueError("N_coh must be >= 1")
    if table is None:
        table = breakpoints(L, K, rates)
    n = table.regime(N_coh)
    return optimal_for_length(L, K, 2 * n + K)


def brute_force_optimal(L: int, K: int, rates: RateProfile, objective: str = "cnet",
                        N_coh: Optional[int] = None, N_p0: Optional[int] = None,
                        cap: int = BRUTE_FORCE_CAP) -> PilotAssignmentVector:
    """Exhaustive argmax over all valid vectors; the closed forms' oracle.

    Objectives are evaluated in exact rational arithmetic and ties go to the
    lexicographically smallest vector.
    """
    if objective not in ("csum", "cnet"):
        raise ValueError("objective must be 'csum' or 'cnet'")
    if objective == "cnet" and N_coh is None:
        raise ValueError("objective 'cnet' needs N_coh")
    n_vec = count_assignments(L, K, N_p0)
    if n_vec > cap:
        raise ValueError(f"enumeration of {n_vec} vectors exceeds cap {cap}")
    best: Optional[PilotAssignmentVector] = None
    best_val: Optional[Fraction] = None
    for p in enumerate_assignments(L, K, N_p0):
        val = (_csum_exact(p, rates.C) if objective == "csum"
               else _cnet_exact(p, rates.C, N_coh))
        if best_val is None or val > best_val:
            best, best_val = p, val
    if best is None:
        raise ValueError(f"no valid assignment for L={L}, K={K}, N_p0={N_p0}")
    return best


def random_assignment(L: int, K: int, N_pil: int,
                      rng: np.random.Generator) -> PilotRealization:
    """Every cell draws K distinct pilots uniformly from [0, N_pil)."""
    if N_pil < K:
        raise ValueError("need at least K pilots for within-cell orthogonality")
    assignment = np.empty((L, K), dtype=np.int64)
    for cell in range(L):
        assignment[cell] = rng.choice(N_pil, size=K, replace=False)
    return PilotRealization(n_pilots=N_pil, assignment=assignment)


def _realization_sum_rate(realization: PilotRealization, lattice: HexLattice,
                          gamma: float, rng: np.random.Generator) -> float:
    """Per-cell sum rate of one realization with freshly drawn user positions."""
    L, K = realization.L, realization.K
    offsets = lattice.sample_cell_offsets(L * K, rng).reshape(L, K, 2)
    total = 0.0
    for pilot in range(realization.n_pilots):
        cells = realization.cells_sharing(pilot)
        if len(cells) == 0:
            continue
        users = [(c, int(np.flatnonzero(realization.assignment[c] == pilot)[0]))
                 for c in cells]
        pos = np.array([lattice.centers[c] + offsets[c, k] for c, k in users])
        own = np.array([offsets[c, k] for c, k in users])
        beta_own_sq = (own[:, 0] ** 2 + own[:, 1] ** 2) ** (-gamma)
        for i, (c, _) in enumerate(users):
            delta = pos - lattice.centers[c]
            d = lattice.min_image_norms(delta)
            beta_sq = d ** (-2.0 * gamma)
            interference = beta_sq.sum() - beta_sq[i]
            # a sole cell on a pilot has no contamination and an unbounded
            # asymptotic rate; such users contribute zero instead
            if interference > 0:
                total += np.log2(1.0 + beta_own_sq[i] / interference)
    return total / L


def random_mean_sum_rate(lattice: HexLattice, K: int, N_pil: int,
                         gamma: float = 3.7, trials: int = 500,
                         seed: int = 0) -> tuple[float, float]:
    """Mean and stderr of the per-cell sum rate under random pilot assignment.

    Each trial redraws both the pilot choices and all user positions.
    Uncontaminated users (sole cell on a pilot) are skipped rather than
    credited with infinite rate, matching the no-uncontaminated-leaf rule.
    """
    vals = np.empty(trials)
    for t in range(trials):
        rng = derive_rng(seed, DOMAIN_RANDOM_ASSIGN, t)
        realization = random_assignment(lattice.L, K, N_pil, rng)
        vals[t] = _realization_sum_rate(realization, lattice, gamma, rng)
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(trials))


def random_mean_cnet(lattice: HexLattice, K: int, N_pil: int, N_coh: int,
                     gamma: float = 3.7, trials: int = 500,
                     seed: int = 0) -> tuple[float, float]:
    """Mean and stderr of C_net under random pilot assignment."""
    mean, stderr = random_mean_sum_rate(lattice, K, N_pil, gamma=gamma,
                                        trials=trials, seed=seed)
    overhead = (N_coh - N_pil) / N_coh
    return overhead * mean, abs(overhead) * stderr


@dataclass
class NetRatePoint:
    N_coh: int
    p: PilotAssignmentVector
    C_net: float
    training_fraction: float

    def __post_init__(self):
        if not 0.0 <= self.training_fraction <= 1.0:
            raise ValueError("training fraction must lie in [0, 1]")


def sweep_training_fraction(L: int, K: int, N_coh_values: Iterable[int],
                            rates: RateProfile) -> list[NetRatePoint]:
    """Optimal assignment and its pilot share of the coherence interval."""
    table = breakpoints(L, K, rates)
    out = []
    for N_coh in N_coh_values:
        p = optimal_assignment(L, K, N_coh, rates, table=table)
        out.append(NetRatePoint(N_coh=N_coh, p=p, C_net=cnet(p, rates, N_coh),
                                training_fraction=pilot_length(p) / N_coh))
    return out
