"""Command line entry point: ``siclab run|predict|compare|sweep``.

Exit codes: 0 success, 2 bad configuration or input, 3 backend failure,
4 comparison outside tolerance.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from ..series import SICSeries
from .config import ConfigError, load_config, parse_config, config_to_dict, with_override
from .runner import (
    BackendError,
    RunResult,
    UnsupportedRegime,
    compare,
    predict,
    run,
    write_outputs,
)

EXIT_OK, EXIT_CONFIG, EXIT_BACKEND, EXIT_COMPARE = 0, 2, 3, 4

log = logging.getLogger("siclab")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=d, help="master seed (overrides the config)")
    parser.add_argument("--jobs", type=int, default=d, help="worker processes")
    parser.add_argument("--out", default=d, help="output directory")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="siclab", description="Information-scrambling simulations")
    _global_flags(p, suppress=False)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="simulate a configuration")
    r.add_argument("config")
    _global_flags(r, suppress=True)

    pr = sub.add_parser("predict", help="write the analytic curve for a configuration")
    pr.add_argument("config")
    _global_flags(pr, suppress=True)

    c = sub.add_parser("compare", help="compare a simulated CSV with a theory CSV")
    c.add_argument("sim_csv")
    c.add_argument("theory_csv")
    c.add_argument("--tolerance", type=float, default=0.25, help="max |residual| in bits")
    c.add_argument("--t-min", type=float, default=None, help="ignore residuals before this time")
    _global_flags(c, suppress=True)

    s = sub.add_parser("sweep", help="run a configuration over one parameter axis")
    s.add_argument("config")
    s.add_argument("--axis", required=True, help="field to vary, e.g. model.w")
    s.add_argument("--values", required=True, help="comma-separated values")
    _global_flags(s, suppress=True)
    return p


def _parse_value(text: str):
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def _prepare(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        data = config_to_dict(cfg)
        data["sampling"]["master_seed"] = args.seed
        cfg = parse_config(data)
    out = Path(args.out or cfg.output or "results")
    return cfg, out, Path(args.config).stem


def cmd_run(args) -> int:
    cfg, out, stem = _prepare(args)
    result = run(cfg, args.jobs)
    csv_path, _ = write_outputs(result, out, stem)
    print(csv_path)
    if cfg.theory_overlay:
        try:
            predict(cfg).to_csv(out / f"{stem}_theory.csv")
        except UnsupportedRegime as exc:
            log.warning("no theory overlay: %s", exc)
    return EXIT_OK


def cmd_predict(args) -> int:
    cfg, out, stem = _prepare(args)
    series = predict(cfg)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{stem}_theory.csv"
    series.to_csv(path)
    print(path)
    return EXIT_OK


def cmd_compare(args) -> int:
    try:
        sim = SICSeries.from_csv(args.sim_csv)
        thy = SICSeries.from_csv(args.theory_csv)
        report = compare(sim, thy, t_min=args.t_min)
    except (OSError, ValueError, IndexError) as exc:
        raise ConfigError(f"cannot compare: {exc}") from exc
    report["tolerance"] = args.tolerance
    report["passed"] = report["max_abs_residual"] <= args.tolerance
    text = json.dumps(report, indent=2)
    print(text)
    if args.out:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        (Path(args.out) / "compare.json").write_text(text + "\n", encoding="utf-8")
    return EXIT_OK if report["passed"] else EXIT_COMPARE


def cmd_sweep(args) -> int:
    cfg, out, stem = _prepare(args)
    values = [_parse_value(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigError("--values is empty")
    # validate every member before spending any compute
    members = [with_override(cfg, args.axis, v) for v in values]
    summary = {"axis": args.axis, "values": values, "members": []}
    failed = False
    for k, (value, member) in enumerate(zip(values, members)):
        entry = {"index": k, "value": value}
        try:
            result = run(member, args.jobs, sweep_index=k)
            csv_path, _ = write_outputs(result, out, f"{stem}_{k:03d}")
            entry.update(status="ok", csv=csv_path.name)
            print(csv_path)
        except BackendError as exc:
            failed = True
            entry.update(status="failed", error=str(exc))
            log.error("sweep member %d (%s=%r) failed: %s", k, args.axis, value, exc)
        summary["members"].append(entry)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}_sweep.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    return EXIT_BACKEND if failed else EXIT_OK


COMMANDS = {"run": cmd_run, "predict": cmd_predict, "compare": cmd_compare, "sweep": cmd_sweep}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, UnsupportedRegime) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND


if __name__ == "__main__":
    sys.exit(main())
