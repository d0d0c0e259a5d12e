"""Command-line experiment runner.

Subcommands: ``hit`` (hitting-time report), ``figure`` (curve data as CSV),
``sweep`` (scaling table over parameter ranges), ``verify`` (invariant
suite). All output is deterministic; floats are serialized with 17
significant digits so round-trips are lossless.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 threshold
never crossed.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from .complete_graph import (
    AsymptoticConstants,
    CompleteGraphParams,
    asymptotic_H,
    asymptotic_probabilities,
    closed_F,
    closed_pM,
    hitting_time_closed,
    limiting_F,
    t_max,
)
from .markov import complete_graph, load_chain, mark_last
from .simulate import NoCrossingError, evolve_direct, hitting_time, prepare_walk
from .verify import DEFAULT_CASES, run_checks


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _write_csv(path: str | None, header: list[str], rows) -> None:
    if path is None:
        writer = csv.writer(sys.stdout, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
        return
    with open(Path(path), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def _resolve_chain(args):
    if args.chain is not None:
        chain = load_chain(args.chain)
        return chain, chain.n, chain.m
    if args.n is None or args.m is None:
        raise ValueError("give either --chain or both --n and --m")
    chain = mark_last(complete_graph(args.n), args.m)
    return chain, args.n, args.m


def _parse_int_list(text: str) -> list[int]:
    """Comma-separated integers; 'a..b' expands to the inclusive range."""
    values: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            values.extend(range(int(lo), int(hi) + 1))
        else:
            values.append(int(part))
    return values


def cmd_hit(args) -> int:
    chain, n, m = _resolve_chain(args)
    if m < 1:
        raise ValueError("hitting time needs at least one marked vertex")
    params = CompleteGraphParams(n, m)
    report: dict = {"n": n, "m": m, "threshold": params.threshold,
                    "limiting_F": limiting_F(params)}

    if args.mode in ("closed", "both"):
        rep = hitting_time_closed(params, T_cap=args.t_cap)
        report["closed"] = {"H": rep.H, "Tstar": rep.Tstar}
    if args.mode in ("simulate", "both"):
        rep = hitting_time(chain, T_cap=args.t_cap)
        report["simulated"] = {"H": rep.H, "Tstar": rep.Tstar,
                               "limiting_F": rep.limiting}
    if args.mode == "both":
        # discrepancy between directly simulated F and the closed form
        top = max(report["closed"]["H"], report["simulated"]["H"]) + 5
        bundle = prepare_walk(chain, materialize=False)
        trace = evolve_direct(bundle.ops, bundle.psi0, top)
        disc = max(abs(trace.F[T] - closed_F(params, T)) for T in range(top + 1))
        report["max_F_discrepancy"] = disc

    print(f"n={n} m={m} threshold={_fmt(report['threshold'])} "
          f"limiting_F={_fmt(report['limiting_F'])}")
    for key in ("closed", "simulated"):
        if key in report:
            print(f"{key}: H={report[key]['H']} Tstar={_fmt(report[key]['Tstar'])}")
    if "max_F_discrepancy" in report:
        print(f"max_F_discrepancy={_fmt(report['max_F_discrepancy'])}")

    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n",
                                  encoding="utf-8")
    return 0


def cmd_figure(args) -> int:
    chain, n, m = _resolve_chain(args)
    if m < 1:
        raise ValueError("figures need at least one marked vertex")
    if args.grid < 2:
        raise ValueError("--grid must be at least 2")
    if args.steps < 1:
        raise ValueError("--steps must be at least 1")
    params = CompleteGraphParams(n, m)
    xs = np.linspace(0.0, float(args.steps), args.grid)

    if args.which == "fig1":
        thr = params.threshold
        lim = limiting_F(params)
        header = ["T", "F", "threshold", "limiting"]
        values = [[float(T), closed_F(params, float(T)), thr, lim] for T in xs]
    else:
        header = ["t", "pM"]
        values = [[float(t), closed_pM(params, float(t))] for t in xs]

    if args.format == "json":
        text = json.dumps([dict(zip(header, row)) for row in values]) + "\n"
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    else:
        _write_csv(args.out, header, ([_fmt(v) for v in row] for row in values))
    return 0


def cmd_sweep(args) -> int:
    ns = _parse_int_list(args.n) if args.n else []
    ms = _parse_int_list(args.m) if args.m else []
    if not ns or not ms:
        raise ValueError("sweep needs nonempty --n and --m ranges")
    consts = AsymptoticConstants.default()
    header = ["n", "m", "H", "Tstar", "t_max", "pM_tmax", "pM_Tstar",
              "H_asym", "relerr_Tstar", "pM_tmax_asym", "relerr_pM_tmax",
              "pM_H_asym"]
    rows = []
    for n in sorted(set(ns)):
        for m in sorted(set(ms)):
            if not 1 <= m < n:
                continue
            params = CompleteGraphParams(n, m)
            rep = hitting_time_closed(params, T_cap=args.t_cap)
            tm = t_max(params)
            pm_tm = closed_pM(params, tm)
            pm_ts = closed_pM(params, rep.Tstar)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                h_asym = asymptotic_H(params, consts)
            pm_tm_asym, pm_h_asym = asymptotic_probabilities(params, consts)
            rows.append([
                n, m, rep.H, _fmt(rep.Tstar), _fmt(tm), _fmt(pm_tm), _fmt(pm_ts),
                _fmt(h_asym), _fmt(abs(rep.Tstar - h_asym) / rep.Tstar),
                _fmt(pm_tm_asym), _fmt(abs(pm_tm - pm_tm_asym) / pm_tm),
                _fmt(pm_h_asym),
            ])
    if not rows:
        raise ValueError("sweep ranges produced no valid (n, m) pairs")
    _write_csv(args.out, header, rows)
    return 0


def cmd_verify(args) -> int:
    cases = None
    if args.size:
        cases = []
        for token in args.size:
            n_str, m_str = token.split(":", 1)
            cases.append((int(n_str), int(m_str)))
    results = run_checks(cases=cases, perturb_row_sum=args.perturb_row_sum)
    passed = all(r.passed for r in results)
    report = {"passed": passed, "cases": list(cases or DEFAULT_CASES),
              "checks": [r.as_dict() for r in results]}
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    print(f"verify: {'all checks passed' if passed else 'FAILURES detected'}")
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n",
                                  encoding="utf-8")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="szwalk",
        description="Quantum hitting times on bipartite-duplicated Markov chains.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--n", type=int, default=None, help="vertex count")
        p.add_argument("--m", type=int, default=None, help="marked count")
        p.add_argument("--chain", default=None,
                       help="JSON chain descriptor {n, graph: 'complete', marked: [...]}")
        p.add_argument("--out", default=None, help="output file path")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--t-cap", type=int, default=None,
                       help="max steps scanned for the threshold crossing")
        p.add_argument("--seedless", action="store_true",
                       help="reserved; the pipeline is deterministic and uses no RNG")

    p_hit = sub.add_parser("hit", help="hitting-time report")
    add_common(p_hit)
    p_hit.add_argument("--mode", choices=["simulate", "closed", "both"],
                       default="both")
    p_hit.set_defaults(func=cmd_hit)

    p_fig = sub.add_parser("figure", help="curve data for the F(T) and pM(t) figures")
    p_fig.add_argument("which", choices=["fig1", "fig2"])
    add_common(p_fig)
    p_fig.add_argument("--steps", type=float, default=12.0,
                       help="right endpoint of the time axis")
    p_fig.add_argument("--grid", type=int, default=601,
                       help="number of sample points")
    p_fig.set_defaults(func=cmd_figure)

    p_sweep = sub.add_parser("sweep", help="closed-form scaling table over (n, m) ranges")
    p_sweep.add_argument("--n", default=None,
                         help="comma list and/or a..b ranges, e.g. 100,1000 or 10..20")
    p_sweep.add_argument("--m", default=None, help="same syntax as --n")
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--t-cap", type=int, default=None)
    p_sweep.add_argument("--seedless", action="store_true",
                         help="reserved; the pipeline is deterministic and uses no RNG")
    p_sweep.set_defaults(func=cmd_sweep)

    p_ver = sub.add_parser("verify", help="run the invariant suite")
    p_ver.add_argument("--size", action="append", default=None, metavar="N:M",
                       help="case to check, e.g. --size 8:3 (repeatable)")
    p_ver.add_argument("--perturb-row-sum", action="store_true",
                       help="inject a broken row sum as a negative control")
    p_ver.add_argument("--out", default=None, help="JSON report path")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoCrossingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
