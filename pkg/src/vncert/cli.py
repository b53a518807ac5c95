"""Command-line front end.

Subcommands:

* ``analytic``  — closed-form probabilities for one game variant;
* ``simulate``  — Monte Carlo estimate vs analytic, with z-scores;
* ``verify``    — the full verification suite, PASS/FAIL per check;
* ``sweep``     — tabulate analytic + empirical values across dimensions
  to CSV or JSON lines, optionally rendering figures next to the data.

Exit codes: 0 success, 1 failed check or I/O error, 2 usage error.
Every command prints a single JSON run record with keys
{command, version, config, duration_s, result} except ``verify``, which
prints one line per check.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import subprocess
import sys
import time
from pathlib import Path

from . import __version__, discrim, protocol, report, verify

DEFAULT_SEED_ENV = "VNCERT_SEED"


def _version_string() -> str:
    try:
        out = subprocess.run(
            ["git", "describe", "--tags", "--always", "--dirty"],
            cwd=Path(__file__).resolve().parent, capture_output=True,
            text=True, timeout=5)
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except Exception:
        pass
    return f"v{__version__}"


def _default_seed() -> int:
    return int(os.environ.get(DEFAULT_SEED_ENV, "0"))


def _emit_record(command: str, config: dict, result, started: float,
                 stream=None) -> None:
    record = {
        "command": command,
        "version": _version_string(),
        "config": config,
        "duration_s": round(time.perf_counter() - started, 6),
        "result": result,
    }
    json.dump(record, stream or sys.stdout, indent=2)
    (stream or sys.stdout).write("\n")


def _z_score(value: float, stderr: float, target: float) -> float:
    if stderr == 0.0:
        return 0.0 if value == target else float("inf")
    return (value - target) / stderr


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vncert",
        description="Discrimination and certification of von Neumann "
                    "measurements: analytic values, simulations, checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_scheme=True):
        p.add_argument("--mode", choices=list(discrim.MODES),
                       default=discrim.MODE_BOTH_UNKNOWN)
        if with_scheme:
            p.add_argument("--scheme", choices=list(protocol.SCHEMES),
                           default=protocol.SCHEME_SYMMETRIC)
        p.add_argument("--dim", type=int, default=2)

    p_analytic = sub.add_parser("analytic", help="closed-form probabilities")
    add_common(p_analytic)

    p_sim = sub.add_parser("simulate", help="Monte Carlo estimate vs analytic")
    add_common(p_sim)
    p_sim.add_argument("--trials", type=int, default=100000)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--threads", type=int, default=os.cpu_count() or 1)

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--dmax", type=int, default=4)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--mc-samples", type=int, default=20000)
    p_ver.add_argument("--inequality-instances", type=int, default=1000)

    p_sweep = sub.add_parser("sweep", help="tabulate analytic vs empirical "
                                           "values across dimensions")
    p_sweep.add_argument("--modes", default=",".join(discrim.MODES))
    p_sweep.add_argument("--schemes", default=",".join(protocol.SCHEMES))
    p_sweep.add_argument("--dims", default="2,3,4,5")
    p_sweep.add_argument("--trials", type=int, default=100000)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p_sweep.add_argument("--plot", action="store_true",
                         help="also render PNG figures next to the output")
    return parser


def _cmd_analytic(args, parser, started) -> int:
    if args.dim < 2:
        parser.error("dimension must be >= 2")
    row = discrim.analytic_table(args.mode, args.dim)
    config = {"mode": args.mode, "scheme": args.scheme, "dim": args.dim}
    _emit_record("analytic", config, row.as_dict(), started)
    return 0


def _simulate_result(sim: protocol.SimResult) -> dict:
    result = sim.as_dict()
    analytic = sim.analytic
    for key, est in sim.empirical.items():
        target = getattr(analytic, key if key != "p_succ" else "p_succ")
        result["empirical"][key]["z"] = _z_score(est.value, est.stderr, target)
    return result


def _cmd_simulate(args, parser, started) -> int:
    if args.trials < 1:
        parser.error("trials must be >= 1")
    if args.dim < 2:
        parser.error("dimension must be >= 2")
    if args.threads < 1:
        parser.error("threads must be >= 1")
    seed = args.seed if args.seed is not None else _default_seed()
    config = protocol.ScenarioConfig(mode=args.mode, scheme=args.scheme,
                                     d=args.dim, trials=args.trials, seed=seed)
    sim = protocol.simulate(config, threads=args.threads)
    cfg = {"mode": args.mode, "scheme": args.scheme, "dim": args.dim,
           "trials": args.trials, "seed": seed, "threads": args.threads}
    _emit_record("simulate", cfg, _simulate_result(sim), started)
    return 0


def _cmd_verify(args, parser, started) -> int:
    if args.dmax < 2:
        parser.error("dmax must be >= 2")
    seed = args.seed if args.seed is not None else _default_seed()
    checks = verify.run_checks(args.dmax, seed=seed, mc_samples=args.mc_samples,
                               inequality_instances=args.inequality_instances)
    for check in checks:
        print(check.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    return 1 if failed else 0


def _sweep_row(mode: str, scheme: str, d: int, trials: int, seed: int,
               threads: int) -> dict:
    analytic = discrim.analytic_table(mode, d)
    config = protocol.ScenarioConfig(mode=mode, scheme=scheme, d=d,
                                     trials=trials, seed=seed)
    sim = protocol.simulate(config, threads=threads)
    row = {
        "mode": mode, "scheme": scheme, "d": d,
        "p_succ_analytic": analytic.p_succ,
        "p_err_analytic": analytic.p_err,
        "p1_analytic": analytic.p1,
        "p2_analytic": analytic.p2,
        "p_succ_hat": None, "p_succ_stderr": None, "p_succ_z": None,
        "p1_hat": None, "p2_hat": None, "p2_stderr": None, "p2_z": None,
    }
    if scheme == protocol.SCHEME_SYMMETRIC:
        est = sim.empirical["p_succ"]
        row.update(p_succ_hat=est.value, p_succ_stderr=est.stderr,
                   p_succ_z=_z_score(est.value, est.stderr, analytic.p_succ))
    else:
        e1, e2 = sim.empirical["p1"], sim.empirical["p2"]
        row.update(p1_hat=e1.value, p2_hat=e2.value, p2_stderr=e2.stderr,
                   p2_z=_z_score(e2.value, e2.stderr, analytic.p2))
    return row


SWEEP_COLUMNS = ["mode", "scheme", "d", "p_succ_analytic", "p_err_analytic",
                 "p1_analytic", "p2_analytic", "p_succ_hat", "p_succ_stderr",
                 "p_succ_z", "p1_hat", "p2_hat", "p2_stderr", "p2_z"]


def _write_sweep(rows: list[dict], out: Path, fmt: str) -> None:
    if fmt == "csv":
        with open(out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS)
            writer.writeheader()
            for row in rows:
                writer.writerow({k: ("" if row[k] is None else row[k])
                                 for k in SWEEP_COLUMNS})
    else:
        with open(out, "w") as fh:
            for row in rows:
                fh.write(json.dumps(row) + "\n")


def _cmd_sweep(args, parser, started) -> int:
    modes = [m.strip() for m in args.modes.split(",") if m.strip()]
    schemes = [s.strip() for s in args.schemes.split(",") if s.strip()]
    try:
        dims = [int(d) for d in args.dims.split(",") if d.strip()]
    except ValueError:
        parser.error(f"--dims must be a comma-separated list of integers, "
                     f"got {args.dims!r}")
    for m in modes:
        if m not in discrim.MODES:
            parser.error(f"unknown mode {m!r}")
    for s in schemes:
        if s not in protocol.SCHEMES:
            parser.error(f"unknown scheme {s!r}")
    if any(d < 2 for d in dims) or not dims:
        parser.error("dimensions must be >= 2")
    if args.trials < 1:
        parser.error("trials must be >= 1")
    seed = args.seed if args.seed is not None else _default_seed()

    rows = [_sweep_row(m, s, d, args.trials, seed, args.threads)
            for s in schemes for m in modes for d in dims]
    out = Path(args.out)
    figures: list[str] = []
    try:
        _write_sweep(rows, out, args.format)
        if args.plot:
            paths = report.save_sweep_figures(rows, out.parent or Path("."),
                                              out.stem)
            figures = [str(p) for p in paths]
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 1
    cfg = {"modes": modes, "schemes": schemes, "dims": dims,
           "trials": args.trials, "seed": seed, "threads": args.threads,
           "out": str(out), "format": args.format, "plot": args.plot}
    _emit_record("sweep", cfg,
                 {"rows": len(rows), "out": str(out), "figures": figures},
                 started)
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    started = time.perf_counter()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handlers = {
        "analytic": _cmd_analytic,
        "simulate": _cmd_simulate,
        "verify": _cmd_verify,
        "sweep": _cmd_sweep,
    }
    try:
        return handlers[args.command](args, parser, started)
    except SystemExit as exc:  # parser.error() inside a handler
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
