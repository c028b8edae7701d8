"""Property suites checking the closed forms against brute-force oracles.

Each check returns a result object naming every failing instance, so a
broken closed form points straight at the offending N_p0 or N_coh.  The
closed-form callables are injectable to let tests confirm that a planted
bug is actually caught.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import assignment, optimizer
from .channel import RateProfile, synthetic_linear_profile


@dataclass
class CheckResult:
    name: str
    ok: bool
    checked: int
    failures: list[dict] = field(default_factory=list)

    def fail(self, **info):
        self.ok = False
        self.failures.append(info)


@dataclass
class VerificationReport:
    checks: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json(self) -> str:
        return json.dumps({
            "ok": self.ok,
            "checks": [{"name": c.name, "ok": c.ok, "checked": c.checked,
                        "failures": c.failures} for c in self.checks],
        }, indent=2)

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            status = "pass" if c.ok else "FAIL"
            lines.append(f"[{status}] {c.name} ({c.checked} instances)")
            for f in c.failures[:5]:
                lines.append(f"    failing instance: {f}")
        return lines


def check_lemma1(L: int, K: int) -> CheckResult:
    """Enumerated pilot lengths equal {K, K+2, ..., LK/3} exactly."""
    res = CheckResult(name=f"lemma1 L={L} K={K}", ok=True, checked=0)
    seen = set()
    for p in assignment.enumerate_assignments(L, K):
        seen.add(assignment.pilot_length(p))
        res.checked += 1
    expected = assignment.valid_pilot_lengths(L, K)
    if seen != expected:
        res.fail(missing=sorted(expected - seen), extra=sorted(seen - expected))
    return res


def check_lemma2_bijection(L: int, K: int, limit: Optional[int] = None) -> CheckResult:
    """Transition bounds and exact round-trip for every enumerated vector."""
    res = CheckResult(name=f"lemma2+bijection L={L} K={K}", ok=True, checked=0)
    for p in assignment.enumerate_assignments(L, K):
        if limit is not None and res.checked >= limit:
            break
        res.checked += 1
        t = assignment.to_transition(p)
        n_pil = assignment.pilot_length(p)
        if sum(t.t) != (n_pil - K) // 2:
            res.fail(p=p.p, t=t.t, reason="act count != (N_pil - K)/2")
            continue
        if any(not 0 <= t[i] <= K * 3**i for i in range(len(t.t))):
            res.fail(p=p.p, t=t.t, reason="transition bounds violated")
            continue
        if assignment.from_transition(t).p != p.p:
            res.fail(p=p.p, t=t.t, reason="round trip mismatch")
    return res


def check_theorem1(L: int, K: int, rates: RateProfile,
                   closed_form: Optional[Callable] = None) -> CheckResult:
    """Closed-form length-constrained optimum equals the brute-force argmax."""
    closed_form = closed_form or optimizer.optimal_for_length
    res = CheckResult(name=f"theorem1 L={L} K={K}", ok=True, checked=0)
    for N_p0 in sorted(assignment.valid_pilot_lengths(L, K)):
        res.checked += 1
        want = optimizer.brute_force_optimal(L, K, rates, objective="csum", N_p0=N_p0)
        got = closed_form(L, K, N_p0)
        if got.p != want.p:
            res.fail(N_p0=N_p0, closed_form=got.p, brute_force=want.p)
    return res


def check_theorem2(L: int, K: int, rates: RateProfile,
                   N_coh_values: Optional[Sequence[int]] = None,
                   closed_form: Optional[Callable] = None) -> CheckResult:
    """Closed-form net-rate optimum equals the brute-force argmax per N_coh."""
    closed_form = closed_form or optimizer.optimal_assignment
    if N_coh_values is None:
        N_coh_values = range(1, 4 * L * K // 3 + 1)
    res = CheckResult(name=f"theorem2 L={L} K={K}", ok=True, checked=0)
    table = optimizer.breakpoints(L, K, rates)
    for N_coh in N_coh_values:
        res.checked += 1
        want = optimizer.brute_force_optimal(L, K, rates, objective="cnet", N_coh=N_coh)
        got = closed_form(L, K, N_coh, rates, table=table)
        if got.p != want.p:
            res.fail(N_coh=N_coh, closed_form=got.p, brute_force=want.p)
    return res


def check_corollary1(L: int, K: int) -> CheckResult:
    """Stepping (-1, +3) through the lengths reproduces every optimum."""
    res = CheckResult(name=f"corollary1 L={L} K={K}", ok=True, checked=0)
    lengths = sorted(assignment.valid_pilot_lengths(L, K))
    current = optimizer.optimal_for_length(L, K, lengths[0])
    for N_p0, N_next in zip(lengths, lengths[1:]):
        res.checked += 1
        stepped = optimizer.corollary_step(current, N_p0)
        direct = optimizer.optimal_for_length(L, K, N_next)
        if stepped.p != direct.p:
            res.fail(N_p0=N_p0, stepped=stepped.p, direct=direct.p)
        current = direct
    return res


def check_monte_carlo_agreement(L: int, K: int, rates: RateProfile,
                                N_coh_values: Sequence[int]) -> CheckResult:
    """Closed form vs brute force under a measured (noisy) profile.

    Theorem 2 is proved for linear rates; for Monte Carlo profiles the two
    may legitimately differ, but only by a net-rate gap within the profile's
    propagated uncertainty (3 sigma).  Larger gaps indicate a bug.
    """
    res = CheckResult(name=f"mc-agreement L={L} K={K}", ok=True, checked=0)
    table = optimizer.breakpoints(L, K, rates)
    for N_coh in N_coh_values:
        res.checked += 1
        brute = optimizer.brute_force_optimal(L, K, rates, objective="cnet", N_coh=N_coh)
        closed = optimizer.optimal_assignment(L, K, N_coh, rates, table=table)
        if closed.p == brute.p:
            continue
        gap = optimizer.cnet(brute, rates, N_coh) - optimizer.cnet(closed, rates, N_coh)
        sig = np.zeros(2)
        for j, p in enumerate((brute, closed)):
            terms = [(p[i] / 3**i * rates.stderr[i]) ** 2 for i in range(p.m)]
            sig[j] = (N_coh - assignment.pilot_length(p)) / N_coh * np.sqrt(sum(terms))
        if gap > 3.0 * float(np.hypot(sig[0], sig[1])):
            res.fail(N_coh=N_coh, closed_form=closed.p, brute_force=brute.p,
                     cnet_gap=gap)
    return res


def run_verification(L_values: Sequence[int] = (9, 27, 81),
                     K_values: Sequence[int] = (1, 2, 3),
                     slopes: Sequence[float] = (1.0, 6.0, 10.0),
                     c0: float = 1.0,
                     mc_profile: Optional[RateProfile] = None,
                     mc_N_coh: Sequence[int] = (10, 20, 40, 80, 160),
                     theorem2_factor: int = 4) -> VerificationReport:
    """The full oracle suite over a grid of instances."""
    checks = []
    for L in L_values:
        m = round(np.log(L) / np.log(3))
        for K in K_values:
            checks.append(check_lemma1(L, K))
            checks.append(check_lemma2_bijection(L, K))
            checks.append(check_corollary1(L, K))
            for slope in slopes:
                rates = synthetic_linear_profile(c0, slope, m)
                t1 = check_theorem1(L, K, rates)
                t1.name += f" slope={slope}"
                checks.append(t1)
                t2 = check_theorem2(L, K, rates,
                                    range(1, theorem2_factor * L * K // 3 + 1))
                t2.name += f" slope={slope}"
                checks.append(t2)
    if mc_profile is not None:
        L = 3 ** mc_profile.m
        checks.append(check_monte_carlo_agreement(L, 1, mc_profile, mc_N_coh))
    return VerificationReport(checks=checks)
