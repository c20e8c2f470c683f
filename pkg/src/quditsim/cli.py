"""Command-line front end.

Exit codes: 0 on success, 1 on a runtime failure, 2 on a usage or parse error.
Sample streams go to stdout (or ``--output``); the footer goes to stderr so
that the stream itself is byte-identical across runs with the same seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from .approx import InfeasiblePrecision, NoCodeFound, find_code, max_precision
from .circuit import CircuitError, parse_file
from .field import NonPrimeDimension, check_dimension
from .magic import UnsupportedDimension, alpha, build_M, kappa, optimal_p, orbit
from .weaksim import SimConfig, WeakSimulator

DEFAULT_SEED = 20190101


class UsageError(Exception):
    pass


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quditsim", description="Qudit Clifford+T weak simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=["json", "csv", "text"], default=None)
        p.add_argument("--output", default=None, help="write to PATH instead of stdout")
        p.add_argument("--threads", type=int, default=1, help="worker cap (work runs on one thread)")

    p = sub.add_parser("simulate", help="sample measurement outcomes of a circuit")
    p.add_argument("--circuit", required=True)
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--p", type=int, default=None, help="orbit representative Z^p|+>")
    common(p)

    p = sub.add_parser("table", help="M_d, optimal p, |alpha| and kappa per dimension")
    p.add_argument("--d", type=int, nargs="+", default=[3, 5, 7])
    common(p)

    p = sub.add_parser("rank", help="certify an approximate magic state")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--p", type=int, default=None)
    common(p)

    p = sub.add_parser("check", help="run oracle cross-validation suites")
    p.add_argument("level", nargs="?", default="fast")
    common(p)
    return ap


def _open_out(path):
    return open(path, "w", newline="") if path else sys.stdout


def _emit(text: str, path) -> None:
    out = _open_out(path)
    try:
        out.write(text)
    finally:
        if path:
            out.close()


def _fmt_phase_exponents(d: int) -> str:
    gate = build_M(d)
    return " ".join(f"{lam}/{d ** gate.m}" for lam in gate.lambdas)


def cmd_table(args) -> int:
    fmt = args.format or "text"
    rows = []
    for d in args.d:
        try:
            check_dimension(d)
        except NonPrimeDimension as exc:
            raise UsageError(str(exc)) from None
        p = optimal_p(d)
        rows.append({"d": d, "M_d": _fmt_phase_exponents(d), "p": p,
                     "alpha": abs(alpha(d, p)), "kappa": kappa(d, p)})
    if fmt == "json":
        text = "".join(json.dumps(r) + "\n" for r in rows)
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        text = buf.getvalue()
    else:
        lines = [f"{'d':>3}  {'p*':>3}  {'|alpha|':>9}  {'kappa':>6}  M_d exponents (x 2 pi i)"]
        for r in rows:
            lines.append(f"{r['d']:>3}  {r['p']:>3}  {r['alpha']:9.6f}  {r['kappa']:6.4f}  {r['M_d']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return 0


def cmd_rank(args) -> int:
    try:
        d = check_dimension(args.d)
    except NonPrimeDimension as exc:
        raise UsageError(str(exc)) from None
    if args.t < 1:
        raise UsageError("--t must be at least 1")
    o = orbit(d, args.p)
    a = abs(o.alpha)
    cert = find_code(args.t, args.delta, o, np.random.default_rng(args.seed))
    report = {"d": d, "t": args.t, "delta": args.delta, "p": o.p, "k": cert.k, "chi": cert.chi,
              "Z": cert.Z, "fidelity": cert.fidelity, "trials": cert.trials,
              "threshold": cert.threshold, "delta_max": max_precision(args.t, a, d),
              "exact": cert.k == args.t}
    fmt = args.format or "text"
    if fmt == "json":
        text = json.dumps(report) + "\n"
    elif fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(report), lineterminator="\n")
        w.writeheader()
        w.writerow(report)
        text = buf.getvalue()
    else:
        text = "".join(f"{k:>10}: {v}\n" for k, v in report.items())
    _emit(text, args.output)
    return 0


def cmd_simulate(args) -> int:
    if args.samples < 0:
        raise UsageError("--samples must be non-negative")
    if not 0 < args.delta < 1:
        raise UsageError("--delta must lie in (0, 1)")
    circuit = parse_file(args.circuit)
    start = time.perf_counter()
    sim = WeakSimulator(circuit, SimConfig(delta=args.delta, seed=args.seed, p_override=args.p))
    fmt = args.format or "json"
    out = _open_out(args.output)
    try:
        writer = csv.writer(out, lineterminator="\n") if fmt == "csv" else None
        if writer:
            writer.writerow(["outcomes", "gadget_outcomes", "chi", "fidelity"])
        for _ in range(args.samples):
            rec = sim.sample()
            if fmt == "json":
                out.write(rec.to_json() + "\n")
            elif writer:
                writer.writerow([" ".join(map(str, rec.outcomes)),
                                 " ".join(map(str, rec.gadget_outcomes)), rec.chi, rec.fidelity])
            else:
                out.write(" ".join(map(str, rec.outcomes)) + "\n")
    finally:
        if args.output:
            out.close()
    wall = time.perf_counter() - start
    print(f"# samples={args.samples} chi={sim.chi} fidelity={sim.fidelity:.12g} "
          f"seed={args.seed} wall={wall:.3f}s", file=sys.stderr)
    return 0


def cmd_check(args) -> int:
    from .checks import LEVELS, run_checks
    if args.level not in LEVELS:
        raise UsageError(f"unknown check level {args.level!r}; choose from {sorted(LEVELS)}")
    results = run_checks(args.level)
    lines = [f"{r.name:<10} passed={r.passed} failed={r.failed} {'OK' if r.ok else 'FAIL'}"
             for r in results]
    _emit("\n".join(lines) + "\n", args.output)
    return 0 if all(r.ok for r in results) else 1


COMMANDS = {"simulate": cmd_simulate, "table": cmd_table, "rank": cmd_rank, "check": cmd_check}


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help
        return int(exc.code or 0)
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except (UsageError, CircuitError, NonPrimeDimension, UnsupportedDimension) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InfeasiblePrecision as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoCodeFound as exc:
        print(f"error: {exc} (retry with another --seed)", file=sys.stderr)
        return 1
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
