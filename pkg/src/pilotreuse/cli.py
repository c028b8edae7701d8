"""Command-line front end: rate estimation, assignment tables, finite-M sweeps.

Outputs are plain CSV (comma separator, header row, '.' decimal) and JSON;
assignment vectors are rendered dash-joined, e.g. 0-2-3-0.  Every command is
deterministic given its flags and seed.

Exit codes: 0 success, 1 validation error, 2 computation error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import assignment, finitem, optimizer, verify
from .channel import ChannelConfig, RateProfile, estimate_rate_profile
from .hexgrid import build_lattice, exponent_of_three


def _config_defaults(path: str) -> dict:
    """key = value lines; '#' comments; values parsed as int/float when possible."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        for cast in (int, float):
            try:
                value = cast(value)
                break
            except ValueError:
                continue
        out[key.replace("-", "_")] = value
    return out


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--L", type=int, default=81, help="cell count, a power of 3")
    sp.add_argument("--gamma", type=float, default=3.7)
    sp.add_argument("--trials", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--hole-ratio", type=float, default=0.14)
    sp.add_argument("--no-wraparound", action="store_true",
                    help="finite patch instead of the toroidal lattice")
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--output", type=str, default=None, help="output path stem")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--config", type=str, default=None,
                    help="key = value file supplying defaults; flags win")


def _lattice(args):
    return build_lattice(exponent_of_three(args.L), hole_ratio=args.hole_ratio,
                         wraparound=not args.no_wraparound)


def _write_csv(path: Path, header: list[str], rows: list[tuple]):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _profile_for(args) -> RateProfile:
    if getattr(args, "profile", None):
        return RateProfile.from_json(Path(args.profile).read_text())
    lattice = _lattice(args)
    cfg = ChannelConfig(lattice=lattice, gamma=args.gamma, trials=args.trials,
                        seed=args.seed)
    return estimate_rate_profile(lattice, cfg, threads=args.threads)


def cmd_rates(args) -> int:
    lattice = _lattice(args)
    cfg = ChannelConfig(lattice=lattice, gamma=args.gamma, trials=args.trials,
                        seed=args.seed)
    profile = estimate_rate_profile(lattice, cfg, threads=args.threads)
    diffs = np.diff(profile.C)
    print(f"L={args.L} gamma={args.gamma} trials={args.trials} seed={args.seed}")
    for i, (c, s) in enumerate(zip(profile.C, profile.stderr)):
        gap = f"  (+{diffs[i-1]:.3f})" if i else ""
        print(f"  C_{i} = {c:8.4f} +- {s:.4f}{gap}")
    if args.output:
        stem = Path(args.output)
        stem.with_suffix(".json").write_text(profile.to_json())
        _write_csv(stem.with_suffix(".csv"), ["depth", "C", "stderr"], profile.csv_rows())
        print(f"wrote {stem.with_suffix('.json')} and {stem.with_suffix('.csv')}")
    return 0


def cmd_optimize(args) -> int:
    profile = _profile_for(args)
    L, K = args.L, args.K
    coh_values = (range(args.coh_min, args.coh_max + 1) if args.coh is None
                  else [args.coh])
    table = optimizer.breakpoints(L, K, profile)
    lattice = _lattice(args)
    random_cache: dict[int, float] = {}
    rows = []
    for N_coh in coh_values:
        p_opt = optimizer.optimal_assignment(L, K, N_coh, profile, table=table)
        n_pil = assignment.pilot_length(p_opt)
        full = assignment.PilotAssignmentVector(L=L, K=K, p=(K,) + (0,) * (p_opt.m - 1))
        c_opt = optimizer.cnet(p_opt, profile, N_coh)
        c_full = optimizer.cnet(full, profile, N_coh)
        if args.random_trials > 0:
            # the sum-rate part depends only on N_pil; cache it across N_coh
            if n_pil not in random_cache:
                random_cache[n_pil], _ = optimizer.random_mean_sum_rate(
                    lattice, K, n_pil, gamma=args.gamma,
                    trials=args.random_trials, seed=args.seed)
            c_rand = (N_coh - n_pil) / N_coh * random_cache[n_pil]
        else:
            c_rand = float("nan")
        rows.append((N_coh, p_opt.dashed(), n_pil,
                     f"{c_opt:.6f}", f"{c_full:.6f}", f"{c_rand:.6f}"))
    header = ["N_coh", "p_opt", "N_pil", "C_net_optimal", "C_net_full_reuse",
              "C_net_random_mean"]
    if args.output:
        out = Path(args.output)
        if args.format == "json":
            out.write_text(json.dumps([dict(zip(header, r)) for r in rows], indent=1))
        else:
            _write_csv(out, header, rows)
        print(f"wrote {out}")
    # regime summary: one line per distinct optimal vector
    print(f"L={L} K={K}: optimal assignment regimes")
    prev = None
    for r in rows:
        if r[1] != prev:
            print(f"  N_coh >= {r[0]}: p = {r[1]} (N_pil = {r[2]})")
            prev = r[1]
    if args.coh is not None:
        N_coh, row = args.coh, rows[0]
        gain = (float(row[3]) / float(row[4]) - 1.0) * 100.0
        print(f"  C_net optimal {row[3]}, full reuse {row[4]}, gain {gain:.1f}%")
    return 0


def cmd_finite(args) -> int:
    lattice = _lattice(args)
    mu = finitem.estimate_mu_stats(lattice, gamma=args.gamma, trials=args.trials,
                                   seed=args.seed)
    if args.mu_output:
        header = ["depth", "mu1", "mu2", "mu3", "stderr_mu1", "stderr_mu3"]
        mu_rows = [(i, f"{mu.mu1[i]:.8e}", f"{mu.mu2[i]:.8e}", f"{mu.mu3[i]:.8e}",
                    f"{mu.stderr_mu1[i]:.2e}", f"{mu.stderr_mu3[i]:.2e}")
                   for i in range(mu.m)]
        _write_csv(Path(args.mu_output), header, mu_rows)
        Path(args.mu_output).open("a").write(f"# mu0,{mu.mu0:.8e}\n")
        print(f"wrote {args.mu_output}")
    rows: list[tuple] = []
    if args.sweep == "table":
        header = ["N_coh_over_K", "p_opt", "N_pil", "C_net", "method"]
        for tenth in range(int(args.coh_over_k_min * 10), int(args.coh_over_k_max * 10) + 1):
            N_coh = tenth * args.K // 10
            if N_coh < args.K:
                continue
            cfg = finitem.FiniteMConfig(M=args.M, K=args.K, N_coh=N_coh,
                                        rho_db=args.rho_db, gamma=args.gamma,
                                        trials=args.trials, seed=args.seed)
            opt = finitem.optimal_assignment_finite(cfg, lattice, mu)
            rows.append((tenth / 10.0, opt.p.dashed(), assignment.pilot_length(opt.p),
                         f"{opt.C_net:.6f}",
                         "exhaustive" if opt.exhaustive else "heuristic"))
    elif args.sweep == "rate-vs-m":
        header = ["M", "K", "p_opt", "C_net", "C_net_per_user", "method"]
        M_values = list(range(args.m_min, args.m_max + 1, args.m_step))
        for M, K, opt in finitem.throughput_vs_m_sweep(
                lattice, mu, args.m_over_k, M_values, args.coh, rho_db=args.rho_db):
            rows.append((M, K, opt.p.dashed(), f"{opt.C_net:.6f}",
                         f"{opt.C_net / K:.6f}",
                         "exhaustive" if opt.exhaustive else "heuristic"))
    else:  # cdf
        header = ["rate"]
        cfg = finitem.FiniteMConfig(M=args.M, K=args.K, N_coh=args.coh,
                                    rho_db=args.rho_db, gamma=args.gamma,
                                    trials=args.trials, seed=args.seed)
        opt = finitem.optimal_assignment_finite(cfg, lattice, mu)
        samples = finitem.per_user_rate_cdf(opt.p, cfg, lattice,
                                            trials=args.cdf_trials, seed=args.seed)
        rows = [(f"{x:.6f}",) for x in samples]
    for row in rows[:12]:
        print("  ".join(str(x) for x in row))
    if len(rows) > 12:
        print(f"... {len(rows)} rows total")
    if args.output:
        out = Path(args.output)
        if args.format == "json":
            out.write_text(json.dumps([dict(zip(header, r)) for r in rows], indent=1))
        else:
            _write_csv(out, header, rows)
        print(f"wrote {out}")
    return 0


def cmd_verify(args) -> int:
    mc_profile = None
    if args.with_mc:
        mc_profile = _profile_for(args)
    report = verify.run_verification(L_values=args.L_grid, K_values=args.K_grid,
                                     slopes=args.slopes, mc_profile=mc_profile)
    for line in report.summary_lines():
        print(line)
    if args.output:
        Path(args.output).write_text(report.to_json())
        print(f"wrote {args.output}")
    return 0 if report.ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pilotreuse",
        description="Optimal hierarchical pilot reuse for multi-cell massive MIMO")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rates", help="Monte Carlo per-depth rate profile")
    _add_common(sp)

    sp = sub.add_parser("optimize", help="optimal assignment table over coherence times")
    _add_common(sp)
    sp.add_argument("--K", type=int, default=1)
    sp.add_argument("--coh", type=int, default=None, help="single coherence interval")
    sp.add_argument("--coh-min", type=int, default=1)
    sp.add_argument("--coh-max", type=int, default=110)
    sp.add_argument("--profile", type=str, default=None,
                    help="rate profile JSON (skips the Monte Carlo run)")
    sp.add_argument("--random-trials", type=int, default=0,
                    help="trials for the random-assignment baseline (0 = skip)")

    sp = sub.add_parser("finite", help="finite antenna count sweeps")
    _add_common(sp)
    sp.add_argument("--sweep", choices=("table", "rate-vs-m", "cdf"), default="table")
    sp.add_argument("--K", type=int, default=10)
    sp.add_argument("--M", type=int, default=128)
    sp.add_argument("--rho-db", type=float, default=5.0)
    sp.add_argument("--coh", type=int, default=200)
    sp.add_argument("--coh-over-k-min", type=float, default=3.0)
    sp.add_argument("--coh-over-k-max", type=float, default=7.0)
    sp.add_argument("--m-over-k", type=int, default=20)
    sp.add_argument("--m-min", type=int, default=40)
    sp.add_argument("--m-max", type=int, default=2000)
    sp.add_argument("--m-step", type=int, default=40)
    sp.add_argument("--cdf-trials", type=int, default=50)
    sp.add_argument("--mu-output", type=str, default=None,
                    help="also dump the mu statistics to this CSV for audit")

    sp = sub.add_parser("verify", help="closed form vs brute force property suites")
    _add_common(sp)
    sp.add_argument("--L-grid", type=int, nargs="+", default=[9, 27])
    sp.add_argument("--K-grid", type=int, nargs="+", default=[1, 2, 3])
    sp.add_argument("--slopes", type=float, nargs="+", default=[1.0, 6.0, 10.0])
    sp.add_argument("--with-mc", action="store_true",
                    help="also compare closed form vs brute force on a measured profile")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        defaults = _config_defaults(args.config)
        known = {a.dest for a in parser._subparsers._group_actions[0]
                 .choices[args.command]._actions}
        unknown = set(defaults) - known
        if unknown:
            print(f"unknown config keys: {sorted(unknown)}", file=sys.stderr)
            return 1
        # flags win: re-parse with config values as defaults
        sub = parser._subparsers._group_actions[0].choices[args.command]
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    try:
        if args.command == "rates":
            return cmd_rates(args)
        if args.command == "optimize":
            return cmd_optimize(args)
        if args.command == "finite":
            return cmd_finite(args)
        return cmd_verify(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ArithmeticError as exc:
        print(f"computation error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
