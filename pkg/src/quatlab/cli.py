"""Command line driver: run verification suites and write reports."""

from __future__ import annotations

import argparse
import json
import re
import shlex
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, fields
from fractions import Fraction
from pathlib import Path

from .checks import SUITES, Config, Entry, UnknownSuite, suite_checks

SCHEMA_VERSION = 1


class ConfigInvalid(ValueError):
    pass


_KEYS = {"suite": str, "max_2l": int, "tol": float, "quad_nodes": int, "seed": int, "report": str}


def read_config_file(path) -> dict:
    """key = value lines; '#' starts a comment; dashes and underscores are interchangeable."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigInvalid(f"{path}:{n}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise ConfigInvalid(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = _KEYS[key](value.strip("\"'"))
        except ValueError:
            raise ConfigInvalid(f"{path}:{n}: bad value for {key}: {value!r}") from None
    return out


def validate(cfg: Config) -> Config:
    suite_checks(cfg.suite)
    if cfg.max_2l is not None and cfg.max_2l < 0:
        raise ConfigInvalid("max-2l must be >= 0")
    if cfg.tol is not None and not cfg.tol > 0:
        raise ConfigInvalid("tol must be > 0")
    if cfg.quad_nodes < 4:
        raise ConfigInvalid("quad-nodes must be >= 4")
    if cfg.report not in ("json", "md"):
        raise ConfigInvalid("report must be json or md")
    return cfg


def repro_command(cfg: Config) -> str:
    parts = ["quatlab", "--suite", cfg.suite, "--seed", str(cfg.seed), "--quad-nodes", str(cfg.quad_nodes)]
    if cfg.max_2l is not None:
        parts += ["--max-2l", str(cfg.max_2l)]
    if cfg.tol is not None:
        parts += ["--tol", repr(cfg.tol)]
    return shlex.join(parts)


def _run_one(check, cfg):
    try:
        return check(cfg)
    except Exception as exc:  # a crashing check is a failure, not a crashed run
        return [Entry(f"{check.__name__}.error", check.__name__, "fail",
                      detail={"exception": f"{type(exc).__name__}: {exc}"})]


def run_suite(cfg: Config, jobs: int = 1) -> list[Entry]:
    checks = suite_checks(cfg.suite)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, checks, [cfg] * len(checks)))
    else:
        results = [_run_one(c, cfg) for c in checks]
    entries = sorted((e for r in results for e in r), key=lambda e: e.id)
    for e in entries:
        if e.status == "fail":
            e.repro = repro_command(cfg)
    return entries


def build_report(cfg: Config, entries, wall_time=None) -> dict:
    counts = {"pass": 0, "fail": 0, "skip": 0}
    for e in entries:
        counts[e.status] += 1
    return {
        "schemaVersion": SCHEMA_VERSION,
        "suite": cfg.suite,
        "config": {k: v for k, v in asdict(cfg).items()},
        "entries": [e.to_dict() if isinstance(e, Entry) else e for e in entries],
        "summary": counts,
        "wallTime": wall_time,
    }


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"


def _cell(v):
    if v is None:
        return ""
    s = json.dumps(v) if not isinstance(v, str) else v
    return s.replace("|", "\\|")


def to_markdown(report: dict) -> str:
    s = report["summary"]
    lines = [f"# quatlab report: {report['suite']}", "",
             f"schemaVersion: {report['schemaVersion']}", "",
             "| pass | fail | skip |", "|---|---|---|", f"| {s['pass']} | {s['fail']} | {s['skip']} |", "",
             "## Config", ""]
    lines += [f"- {k}: {v}" for k, v in report["config"].items()]
    lines += ["", "## Entries", "", "| id | status | error | anchor |", "|---|---|---|---|"]
    for e in report["entries"]:
        lines.append(f"| {_cell(e['id'])} | {e['status']} | {_cell(e.get('error'))} | {_cell(e.get('anchor'))} |")
    fails = [e for e in report["entries"] if e["status"] == "fail"]
    if fails:
        lines += ["", "## Failures", ""]
        for e in fails:
            lines.append(f"- `{e['id']}`: measured {_cell(e.get('measured'))}, expected {_cell(e.get('expected'))}")
            if e.get("repro"):
                lines.append(f"  - reproduce: `{e['repro']}`")
    if report.get("wallTime") is not None:
        lines += ["", f"wallTime: {report['wallTime']:.3f} s"]
    return "\n".join(lines) + "\n"


def summary_from_markdown(text: str) -> dict:
    m = re.search(r"\| pass \| fail \| skip \|\n\|---\|---\|---\|\n\| (\d+) \| (\d+) \| (\d+) \|", text)
    if not m:
        raise ValueError("no summary table")
    return dict(zip(("pass", "fail", "skip"), map(int, m.groups())))


def write_tables(entries, directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for e in entries:
        csv_text = e.detail.get("convergence") if isinstance(e, Entry) else None
        if csv_text:
            (directory / f"{e.id.replace('.', '_')}.csv").write_text(csv_text)


def parser():
    p = argparse.ArgumentParser(prog="quatlab", description="Run quatlab verification suites.")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--suite", help=f"one of: {', '.join(SUITES)}")
    p.add_argument("--max-2l", dest="max_2l", type=int, help="largest 2l in basis sweeps")
    p.add_argument("--tol", type=float, help="numeric tolerance (default: per check)")
    p.add_argument("--quad-nodes", dest="quad_nodes", type=int, help="quadrature nodes per angle")
    p.add_argument("--seed", type=int)
    p.add_argument("--report", choices=("json", "md"))
    p.add_argument("--out", help="report file (default: stdout)")
    p.add_argument("--tables-dir", help="write kernel convergence tables as CSV here")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--timing", action="store_true", help="record wallTime (makes reports differ run to run)")
    return p


def make_config(args) -> Config:
    values = {}
    if args.config:
        values.update(read_config_file(args.config))
    for f in fields(Config):
        v = getattr(args, f.name, None)
        if v is not None:
            values[f.name] = v
    return validate(Config(**values))


def main(argv=None) -> int:
    args = parser().parse_args(argv)
    try:
        cfg = make_config(args)
    except (UnknownSuite, ConfigInvalid) as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    entries = run_suite(cfg, jobs=args.jobs)
    wall = time.perf_counter() - start if args.timing else None
    report = build_report(cfg, entries, wall)
    text = to_json(report) if cfg.report == "json" else to_markdown(report)
    if args.tables_dir:
        write_tables(entries, args.tables_dir)
    try:
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write report: {exc}", file=sys.stderr)
        return 2
    s = report["summary"]
    print(f"{cfg.suite}: {s['pass']} pass, {s['fail']} fail, {s['skip']} skip", file=sys.stderr)
    return 1 if s["fail"] else 0


if __name__ == "__main__":
    sys.exit(main())
