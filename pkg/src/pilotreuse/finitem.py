"""Finite-antenna-count spectral efficiency and the finite-M optimum.

With M antennas and an MRC receiver the per-user interference at reuse
depth i is

    I_i(M) = mu3_i + (mu3_i - mu2_i)/M
             + (K*mu0 + 1/rho) * (1 + mu1_i + 1/(N_pil*rho)) / M

built from Monte Carlo moments of the distance ratio between a user's own
base station and the contaminated one: mu_jl^(w) = E[(r_own/r_cross)^(gamma*w)].
mu3_i is the pilot contamination floor that survives M -> infinity, the /M
terms are the finite-array noise and interference.  The per-cell net rate

    C_net(p, M) = (1 - N_pil/N_coh) * sum_i 3^-i p_i log2(1 + 1/I_i(M))

reduces to the asymptotic net rate as M grows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .assignment import PilotAssignmentVector, count_assignments, realize
from .channel import CHUNK, DOMAIN_CDF, DOMAIN_MU, derive_rng
from .hexgrid import HexLattice, exponent_of_three

ENUMERATION_CAP = 2_000_000


@dataclass
class FiniteMConfig:
    M: int
    K: int
    N_coh: int
    rho_db: float = 5.0
    gamma: float = 3.7
    trials: int = 100_000
    seed: int = 0

    def __post_init__(self):
        if self.M < 1 or self.K < 1 or self.N_coh < 1 or self.trials < 1:
            raise ValueError("M, K, N_coh and trials must all be >= 1")

    @property
    def rho_linear(self) -> float:
        return 10.0 ** (self.rho_db / 10.0)


@dataclass
class MuStats:
    """Aggregated distance-ratio moments for one lattice and decay exponent."""

    mu0: float
    mu1: np.ndarray  # (m,) sums over cosharing cells at each depth
    mu2: np.ndarray
    mu3: np.ndarray
    stderr_mu1: np.ndarray
    stderr_mu3: np.ndarray
    gamma: float
    trials: int
    seed: int

    @property
    def m(self) -> int:
        return len(self.mu1)


def _mu_pairs(lattice: HexLattice, gamma: float, trials: int, seed: int,
              bs_idx: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-cell moments E[ratio^gamma], E[ratio^2gamma] seen from one BS."""
    L = lattice.L
    mean1 = np.zeros(L)
    mean2 = np.zeros(L)
    var1 = np.zeros(L)
    var2 = np.zeros(L)
    bs_center = lattice.centers[bs_idx]
    for cell in range(L):
        s1 = s1sq = s2 = s2sq = 0.0
        done = 0
        for chunk_no, start in enumerate(range(0, trials, CHUNK)):
            n = min(CHUNK, trials - start)
            rng = derive_rng(seed, DOMAIN_MU, bs_idx, cell, chunk_no)
            offs = lattice.sample_cell_offsets(n, rng)
            r_own = np.hypot(offs[:, 0], offs[:, 1])
            if cell == bs_idx:
                ratio_g = np.ones(n)
            else:
                delta = (lattice.centers[cell] - bs_center) + offs
                r_cross = lattice.min_image_norms(delta)
                ratio_g = (r_own / r_cross) ** gamma
            ratio_2g = ratio_g * ratio_g
            s1 += ratio_g.sum()
            s1sq += (ratio_g ** 2).sum()
            s2 += ratio_2g.sum()
            s2sq += (ratio_2g ** 2).sum()
            done += n
        mean1[cell] = s1 / done
        mean2[cell] = s2 / done
        var1[cell] = max(s1sq - done * mean1[cell] ** 2, 0.0) / max(done - 1, 1)
        var2[cell] = max(s2sq - done * mean2[cell] ** 2, 0.0) / max(done - 1, 1)
    return mean1, mean2, var1 / trials, var2 / trials


def estimate_mu_stats(lattice: HexLattice, gamma: float = 3.7,
                      trials: int = 100_000, seed: int = 0) -> MuStats:
    """Monte Carlo mu statistics; the own-cell ratio is identically 1.

    Under wraparound all base stations are equivalent and cell 0 is used;
    without wraparound the moments are averaged over all base stations.
    """
    m = lattice.m
    bs_list = [0] if lattice.wraparound else list(range(lattice.L))
    mu1 = np.zeros(m)
    mu2 = np.zeros(m)
    mu3 = np.zeros(m)
    se1 = np.zeros(m)
    se3 = np.zeros(m)
    mu0 = 0.0
    for bs_idx in bs_list:
        mean1, mean2, v1, v2 = _mu_pairs(lattice, gamma, trials, seed, bs_idx)
        mu0 += mean1.sum() / len(bs_list)
        for depth in range(m):
            share = lattice.cosharing_indices(bs_idx, depth)
            mu1[depth] += mean1[share].sum() / len(bs_list)
            mu2[depth] += (mean1[share] ** 2).sum() / len(bs_list)
            mu3[depth] += mean2[share].sum() / len(bs_list)
            se1[depth] += v1[share].sum() / len(bs_list) ** 2
            se3[depth] += v2[share].sum() / len(bs_list) ** 2
    return MuStats(mu0=float(mu0), mu1=mu1, mu2=mu2, mu3=mu3,
                   stderr_mu1=np.sqrt(se1), stderr_mu3=np.sqrt(se3),
                   gamma=gamma, trials=trials, seed=seed)


def interference(i: int, M: int, K: int, rho_linear: float, N_pil: int,
                 mu: MuStats) -> float:
    """I_i(M): contamination floor plus the finite-array terms."""
    if M < 1 or rho_linear <= 0 or N_pil < 1:
        raise ValueError("need M >= 1, rho_linear > 0, N_pil >= 1")
    lead = (K * mu.mu0 + 1.0 / rho_linear) * (1.0 + mu.mu1[i] + 1.0 / (N_pil * rho_linear))
    return float(mu.mu3[i] + (mu.mu3[i] - mu.mu2[i]) / M + lead / M)


def se_user(i: int, cfg: FiniteMConfig, N_pil: int, mu: MuStats) -> float:
    """Per-user net spectral efficiency at reuse depth i."""
    if N_pil > cfg.N_coh:
        raise ValueError(f"pilot length {N_pil} exceeds the coherence interval {cfg.N_coh}")
    I = interference(i, cfg.M, cfg.K, cfg.rho_linear, N_pil, mu)
    return (1.0 - N_pil / cfg.N_coh) * float(np.log2(1.0 + 1.0 / I))


@dataclass
class FiniteMResult:
    p: PilotAssignmentVector
    M: int
    C_net: float
    per_depth_SE: np.ndarray


def _depth_rates(M: int, K: int, rho_linear: float, N_pil: int, mu: MuStats) -> np.ndarray:
    lead = (K * mu.mu0 + 1.0 / rho_linear) * (1.0 + mu.mu1 + 1.0 / (N_pil * rho_linear))
    I = mu.mu3 + (mu.mu3 - mu.mu2) / M + lead / M
    return np.log2(1.0 + 1.0 / I)


def cnet_finite(p: PilotAssignmentVector, cfg: FiniteMConfig, mu: MuStats) -> FiniteMResult:
    """Per-cell net throughput of an assignment with M antennas."""
    N_pil = sum(p.p)
    if N_pil > cfg.N_coh:
        raise ValueError(f"pilot length {N_pil} exceeds the coherence interval {cfg.N_coh}")
    prefactor = 1.0 - N_pil / cfg.N_coh
    rates = _depth_rates(cfg.M, cfg.K, cfg.rho_linear, N_pil, mu)
    weights = np.array([p[i] / 3**i for i in range(p.m)])
    c_net = prefactor * float(weights @ rates)
    return FiniteMResult(p=p, M=cfg.M, C_net=c_net, per_depth_SE=prefactor * rates)


@dataclass
class FiniteMOptimum:
    p: PilotAssignmentVector
    C_net: float
    exhaustive: bool  # False when the two-adjacent-depth heuristic was used


def _assignment_array(L: int, K: int) -> np.ndarray:
    """All valid vectors as an (n, m) array, lexicographically sorted."""
    m = exponent_of_three(L)
    # Enumerate transition chains 0 <= t_0 <= K, 0 <= t_i <= 3 t_{i-1}
    chains = np.arange(K + 1, dtype=np.int64)[:, None]
    for _ in range(m - 2):
        reps = 3 * chains[:, -1] + 1
        idx = np.repeat(np.arange(len(chains)), reps)
        last = np.concatenate([np.arange(r) for r in reps]) if len(reps) else np.empty(0, int)
        chains = np.column_stack([chains[idx], last])
    p = np.empty((len(chains), m), dtype=np.int64)
    p[:, 0] = K - chains[:, 0]
    for i in range(1, m - 1):
        p[:, i] = 3 * chains[:, i - 1] - chains[:, i]
    p[:, m - 1] = 3 * chains[:, m - 2]
    order = np.lexsort(p.T[::-1])
    return p[order]


def _two_depth_candidates(L: int, K: int, N_coh: int) -> np.ndarray:
    """Vectors supported on two adjacent depths, the shape every optimum takes."""
    m = exponent_of_three(L)
    rows = []
    for N_pil in range(K, min(L * K // 3, N_coh) + 1, 2):
        for d in range(m - 1):
            # x/3^d + y/3^(d+1) = K and x + y = N_pil
            x2 = K * 3 ** (d + 1) - N_pil
            if x2 < 0 or x2 % 2:
                continue
            x = x2 // 2
            y = N_pil - x
            if y < 0 or x > K * 3**d or y > K * 3 ** (d + 1):
                continue
            row = [0] * m
            row[d], row[d + 1] = x, y
            rows.append(row)
    return np.unique(np.array(rows, dtype=np.int64), axis=0)


def optimal_assignment_finite(cfg: FiniteMConfig, lattice: HexLattice, mu: MuStats,
                              cap: int = ENUMERATION_CAP) -> FiniteMOptimum:
    """Argmax of C_net(p, M), exhaustive up to `cap` enumerated vectors.

    Above the cap only two-adjacent-depth vectors are searched; every optimum
    observed in practice has that shape, but the result is flagged heuristic.
    """
    L, K = lattice.L, cfg.K
    exhaustive = count_assignments(L, K) <= cap
    vecs = _assignment_array(L, K) if exhaustive else _two_depth_candidates(L, K, cfg.N_coh)
    n_pil = vecs.sum(axis=1)
    feasible = n_pil <= cfg.N_coh
    if not feasible.any():
        raise ValueError(f"no assignment fits N_pil <= N_coh = {cfg.N_coh}")
    vecs = vecs[feasible]
    n_pil = n_pil[feasible]
    m = vecs.shape[1]
    weights = 3.0 ** -np.arange(m)
    # I_i depends on p only through N_pil, so one rate row per distinct length
    lengths, inverse = np.unique(n_pil, return_inverse=True)
    rate_rows = np.stack([_depth_rates(cfg.M, K, cfg.rho_linear, int(n), mu)
                          for n in lengths])
    vals = (1.0 - n_pil / cfg.N_coh) * np.einsum(
        "rm,rm->r", vecs * weights, rate_rows[inverse])
    # vecs are in lexicographic order and argmax takes the first maximum,
    # so exact ties resolve to the lexicographically smallest vector
    best = int(np.argmax(vals))
    p = PilotAssignmentVector(L=L, K=K, p=tuple(int(x) for x in vecs[best]))
    return FiniteMOptimum(p=p, C_net=float(vals[best]), exhaustive=exhaustive)


def per_user_rate_cdf(p: PilotAssignmentVector, cfg: FiniteMConfig,
                      lattice: HexLattice, trials: int = 200,
                      seed: int = 0) -> np.ndarray:
    """Sorted per-user net rates with positions substituted into I_i.

    Each trial places every user uniformly in its cell and replaces the mu
    expectations by that trial's realized distance ratios, so the sample
    spreads over user geometry rather than averaging it away.
    """
    realization = realize(p, lattice)
    N_pil = realization.n_pilots
    if N_pil > cfg.N_coh:
        raise ValueError("pilot length exceeds the coherence interval")
    L, K, M = lattice.L, cfg.K, cfg.M
    if K != realization.K:
        raise ValueError("cfg.K does not match the assignment vector")
    rho = cfg.rho_linear
    prefactor = 1.0 - N_pil / cfg.N_coh
    out = np.empty(trials * L * K)
    pos = 0
    for t in range(trials):
        rng = derive_rng(seed, DOMAIN_CDF, t)
        offs = lattice.sample_cell_offsets(L * K, rng).reshape(L, K, 2)
        r_own = np.hypot(offs[..., 0], offs[..., 1])  # (L, K)
        for j in range(L):
            # realized ratio of every user seen from BS j
            delta = (lattice.centers[:, None, :] - lattice.centers[j]) + offs
            r_cross = lattice.min_image_norms(delta.reshape(-1, 2)).reshape(L, K)
            ratio = (r_own / r_cross) ** cfg.gamma
            mu0K_real = float(ratio.sum())
            for k in range(K):
                share = realization.cells_sharing(realization.assignment[j, k])
                others = share[share != j]
                rr = ratio[others, k]
                mu1_real = float(rr.sum())
                mu3_real = float((rr ** 2).sum())
                # conditioned on positions the mu3 - mu2 variance term is zero
                lead = (mu0K_real + 1.0 / rho) * (1.0 + mu1_real + 1.0 / (N_pil * rho))
                I = mu3_real + lead / M
                out[pos] = prefactor * np.log2(1.0 + 1.0 / I)
                pos += 1
    return np.sort(out)


def throughput_vs_m_sweep(lattice: HexLattice, mu: MuStats, M_over_K: int,
                          M_values: Sequence[int], N_coh: int,
                          rho_db: float = 5.0, cap: int = ENUMERATION_CAP
                          ) -> list[tuple[int, int, FiniteMOptimum]]:
    """Per-user optimum net rate along an M grid at a fixed M/K ratio."""
    out = []
    for M in M_values:
        if M % M_over_K:
            raise ValueError(f"M={M} is not a multiple of M/K={M_over_K}")
        K = M // M_over_K
        cfg = FiniteMConfig(M=M, K=K, N_coh=N_coh, rho_db=rho_db,
                            gamma=mu.gamma, trials=mu.trials, seed=mu.seed)
        out.append((M, K, optimal_assignment_finite(cfg, lattice, mu, cap=cap)))
    return out
