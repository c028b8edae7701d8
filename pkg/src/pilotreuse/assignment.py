"""Integer algebra of hierarchical pilot assignment vectors.

A pilot assignment vector p = (p_0, ..., p_{m-1}) counts the leaves of the
3-ary partitioning tree at each depth: p_i pilots are each reused by all
L/3^i cells of one depth-i coset.  Validity means 0 <= p_i <= K*3^i and
sum_i p_i / 3^i = K; the transition vector t counts the 3-way partitioning
acts per depth and is the dual object used by the optimality proofs.

Everything here is exact integer arithmetic; the validity constraint is
checked as sum_i p_i * 3^(m-1-i) == K * 3^(m-1).
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .hexgrid import CosetId, HexLattice, exponent_of_three


@dataclass(frozen=True)
class PilotAssignmentVector:
    L: int
    K: int
    p: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))
        m = exponent_of_three(self.L)
        if self.K < 1:
            raise ValueError("K must be >= 1")
        if len(self.p) != m:
            raise ValueError(f"p must have length m = log3(L) = {m}, got {len(self.p)}")

    @property
    def m(self) -> int:
        return len(self.p)

    def __iter__(self):
        return iter(self.p)

    def __getitem__(self, i):
        return self.p[i]

    def to_json(self) -> str:
        return json.dumps({"L": self.L, "K": self.K, "p": list(self.p)})

    @classmethod
    def from_json(cls, text: str) -> "PilotAssignmentVector":
        d = json.loads(text)
        return cls(L=int(d["L"]), K=int(d["K"]), p=tuple(d["p"]))

    def dashed(self) -> str:
        return "-".join(str(x) for x in self.p)


@dataclass(frozen=True)
class TransitionVector:
    K: int
    t: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(int(x) for x in self.t))

    @property
    def m(self) -> int:
        return len(self.t) + 1

    def __iter__(self):
        return iter(self.t)

    def __getitem__(self, i):
        return self.t[i]


def is_valid(p: PilotAssignmentVector) -> bool:
    """Both defining constraints, under exact integer arithmetic."""
    m = p.m
    scale = 3 ** (m - 1)
    if any(not 0 <= p[i] <= p.K * 3**i for i in range(m)):
        return False
    return sum(p[i] * 3 ** (m - 1 - i) for i in range(m)) == p.K * scale


def _require_valid(p: PilotAssignmentVector) -> None:
    if not is_valid(p):
        raise ValueError(f"invalid pilot assignment vector: L={p.L} K={p.K} p={p.p}")


def pilot_length(p: PilotAssignmentVector) -> int:
    """Number of orthogonal pilots consumed: the leaf count sum_i p_i."""
    return sum(p.p)


def to_transition(p: PilotAssignmentVector) -> TransitionVector:
    """Partitioning acts per depth: t_0 = K - p_0, t_i = 3 t_{i-1} - p_i."""
    _require_valid(p)
    t = [p.K - p[0]]
    for i in range(1, p.m - 1):
        t.append(3 * t[-1] - p[i])
    return TransitionVector(K=p.K, t=tuple(t))


def from_transition(t: TransitionVector, K: Optional[int] = None) -> PilotAssignmentVector:
    """Exact inverse of to_transition; rejects t that is not a partition sequence."""
    K = t.K if K is None else K
    m = t.m
    p = [K - t[0]]
    for i in range(1, m - 1):
        p.append(3 * t[i - 1] - t[i])
    p.append(3 * t[m - 2])
    if any(x < 0 for x in p):
        raise ValueError(f"transition vector {t.t} does not describe a partition sequence")
    vec = PilotAssignmentVector(L=3**m, K=K, p=tuple(p))
    _require_valid(vec)
    return vec


def valid_pilot_lengths(L: int, K: int) -> set[int]:
    """The attainable pilot lengths {K, K+2, ..., LK/3}."""
    exponent_of_three(L)
    return set(range(K, L * K // 3 + 1, 2))


def chi(N_p0: int, K: int) -> int:
    """Shortest leaf depth of the length-N_p0 optimal tree.

    Smallest k with sum_{i<=k} K*3^i > (N_p0 - K)/2: partitioning acts fill
    depths top-down, so the first depth that cannot be fully partitioned
    holds the shallowest leaves.
    """
    if N_p0 < K or (N_p0 - K) % 2 != 0:
        raise ValueError(f"N_p0 must be K, K+2, ... ; got N_p0={N_p0}, K={K}")
    acts = (N_p0 - K) // 2
    cum = 0
    k = 0
    while True:
        cum += K * 3**k
        if cum > acts:
            return k
        k += 1


def enumerate_assignments(L: int, K: int,
                          pilot_length_filter: Optional[int] = None
                          ) -> Iterator[PilotAssignmentVector]:
    """Yield every valid vector once, lexicographically ascending on (p_0, p_1, ...).

    With a filter, restricted to vectors of that pilot length; a filter with
    wrong parity or outside [K, LK/3] warns and yields nothing.
    """
    m = exponent_of_three(L)
    if K < 1:
        raise ValueError("K must be >= 1")
    if pilot_length_filter is not None and pilot_length_filter not in valid_pilot_lengths(L, K):
        warnings.warn(f"no valid assignment has pilot length {pilot_length_filter} "
                      f"for L={L}, K={K}", stacklevel=2)
        return

    scale = 3 ** (m - 1)
    target = K * scale

    def rec(depth: int, remaining: int, length_left, prefix: list[int]):
        if depth == m - 1:
            # weight of the last depth is 1, so the remainder is p_{m-1}
            if remaining <= K * 3 ** (m - 1) and (length_left is None or remaining == length_left):
                yield PilotAssignmentVector(L=L, K=K, p=tuple(prefix + [remaining]))
            return
        weight = 3 ** (m - 1 - depth)
        hi = min(K * 3**depth, remaining // weight)
        if length_left is not None:
            hi = min(hi, length_left)
        # later depths can absorb at most K*3^(m-1) of weighted sum each
        max_future = K * scale * (m - 1 - depth)
        for val in range(0, hi + 1):
            rest = remaining - val * weight
            if rest > max_future:
                continue
            ll = None if length_left is None else length_left - val
            yield from rec(depth + 1, rest, ll, prefix + [val])

    yield from rec(0, target, pilot_length_filter, [])


def count_assignments(L: int, K: int, pilot_length_filter: Optional[int] = None) -> int:
    """Count valid vectors by dynamic programming over transition chains.

    Valid vectors correspond one-to-one to chains 0 <= t_0 <= K,
    0 <= t_i <= 3*t_{i-1}; with a length filter the chain must additionally
    sum to (N_p0 - K)/2.  Independent of the enumerator, for cross-checking.
    """
    m = exponent_of_three(L)
    if pilot_length_filter is not None:
        if pilot_length_filter not in valid_pilot_lengths(L, K):
            return 0
        acts_target = (pilot_length_filter - K) // 2
    else:
        acts_target = None

    # state: dict (t_i, acts_so_far) -> count
    states = {(t0, t0): 1 for t0 in range(K + 1)}
    for _ in range(1, m - 1):
        nxt: dict[tuple[int, int], int] = {}
        for (prev, acts), cnt in states.items():
            for t in range(3 * prev + 1):
                key = (t, acts + t)
                nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    if acts_target is None:
        return sum(states.values())
    return sum(cnt for (_, acts), cnt in states.items() if acts == acts_target)


# -- realization onto the lattice -------------------------------------------


@dataclass
class PilotRealization:
    """Mapping (cell index, user index) -> pilot index in [0, n_pilots)."""

    n_pilots: int
    assignment: np.ndarray  # (L, K) int
    pilot_depth: Optional[np.ndarray] = None  # (n_pilots,) leaf depth, coset realizations only
    pilot_coset: Optional[list[CosetId]] = None

    @property
    def L(self) -> int:
        return self.assignment.shape[0]

    @property
    def K(self) -> int:
        return self.assignment.shape[1]

    def pilot_of(self, cell_index: int, user: int) -> int:
        return int(self.assignment[cell_index, user])

    def cells_sharing(self, pilot: int) -> np.ndarray:
        """Indices of cells with a user on this pilot."""
        return np.flatnonzero((self.assignment == pilot).any(axis=1))


def _split_transitions(t: TransitionVector, K: int) -> list[TransitionVector]:
    """Decompose an aggregate transition chain into K single-user chains.

    Greedy left-to-right fill: each depth's acts go to the lowest-numbered
    trees first, within each tree's cap of 3x its previous-depth acts.
    """
    per_tree = [[0] * len(t.t) for _ in range(K)]
    for k in range(min(t[0], K)):
        per_tree[k][0] = 1
    for i in range(1, len(t.t)):
        remaining = t[i]
        for k in range(K):
            cap = 3 * per_tree[k][i - 1]
            take = min(cap, remaining)
            per_tree[k][i] = take
            remaining -= take
        assert remaining == 0, "aggregate transition vector exceeded tree capacity"
    return [TransitionVector(K=1, t=tuple(chain)) for chain in per_tree]


def realize(p: PilotAssignmentVector, lattice: HexLattice) -> PilotRealization:
    """Deterministic map of tree leaves onto cosets, one tree per user.

    The aggregate vector splits into K single-user trees; each tree is built
    greedily left-to-right (lowest coset indices become leaves first, the
    rest get partitioned).  Tree k >= 1 rotates the depth-1 branch labels by
    k mod 3 so that different users' shallow leaves land on different cosets.
    """
    _require_valid(p)
    if lattice.L != p.L:
        raise ValueError(f"lattice has {lattice.L} cells but vector is for L={p.L}")
    m = p.m
    trees = [from_transition(tk, K=1) for tk in _split_transitions(to_transition(p), p.K)]

    assignment = np.full((p.L, p.K), -1, dtype=np.int64)
    pilot_depth: list[int] = []
    pilot_coset: list[CosetId] = []
    next_pilot = 0
    for k, tree in enumerate(trees):
        def rotated_key(index: int, depth: int) -> tuple:
            if depth == 0:
                return (0,)
            first = index % 3
            return ((first - k) % 3, index // 3)

        nodes = [0]  # coset indices at current depth
        for depth in range(m):
            nodes.sort(key=lambda idx: rotated_key(idx, depth))
            leaves, internal = nodes[:tree[depth]], nodes[tree[depth]:]
            for idx in leaves:
                coset = CosetId(depth, idx)
                for cell in lattice.coset_members(coset):
                    assignment[lattice.cell_index(cell), k] = next_pilot
                pilot_depth.append(depth)
                pilot_coset.append(coset)
                next_pilot += 1
            nodes = [idx + 3**depth * d for idx in internal for d in range(3)]
        assert not nodes, "tree construction left unpartitioned nodes"

    assert next_pilot == pilot_length(p)
    assert (assignment >= 0).all()
    return PilotRealization(n_pilots=next_pilot, assignment=assignment,
                            pilot_depth=np.array(pilot_depth), pilot_coset=pilot_coset)
