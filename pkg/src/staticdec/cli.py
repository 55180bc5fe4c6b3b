"""``staticdec <suite> --config file.json [--seed N] [--format json|text] [--out path]``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on a bad
config or any other error before a report exists.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .errors import ConfigError, GeometryError
from .suites import SUITES, CheckResult, SuiteConfig, SuiteReport, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _num(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _dump(obj) -> str:
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_dump(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_dump(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_dict(report: SuiteReport) -> dict:
    return {
        "suite": report.suite,
        "pass": report.passed,
        "checks": [
            {
                "name": c.name,
                "sup_defect": c.sup_defect,
                "tolerance": c.tolerance,
                "pass": c.passed,
                "worst_point": list(c.worst_point),
            }
            for c in report.checks
        ],
        "config": report.config,
        "ms": report.ms,
    }


def emit_report(report: SuiteReport, fmt: str = "json") -> bytes:
    """Serialize a report; JSON numbers carry 17 significant digits and keys keep schema order."""
    if fmt == "json":
        return (_dump(report_dict(report)) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    lines = [f"suite {report.suite}: {'PASS' if report.passed else 'FAIL'} ({report.ms:.0f} ms)"]
    for c in report.checks:
        status = "PASS" if c.passed else "FAIL"
        line = f"  [{status}] {c.name}: sup={c.sup_defect:.3e} tol={c.tolerance:.1e}"
        if not c.passed and c.worst_point:
            line += " at [" + ", ".join(f"{x:.6g}" for x in c.worst_point) + "]"
        lines.append(line)
        if c.name in report.notes:
            lines.append(f"      note: {report.notes[c.name]}")
    return ("\n".join(lines) + "\n").encode()


def parse_report(data: bytes | str) -> SuiteReport:
    """Inverse of ``emit_report(..., 'json')``."""
    d = json.loads(data)
    checks = tuple(
        CheckResult(c["name"], float(c["sup_defect"]), float(c["tolerance"]), bool(c["pass"]),
                    tuple(float(x) for x in c["worst_point"]))
        for c in d["checks"]
    )
    return SuiteReport(d["suite"], bool(d["pass"]), checks, d["config"], float(d["ms"]))


def strip_timing(data: bytes) -> bytes:
    """Report bytes with the wall-clock field zeroed, for determinism comparisons."""
    d = json.loads(data)
    d["ms"] = 0.0
    return _dump(d).encode()


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="staticdec", description="Numerical checks for static decompositions.")
    p.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    p.add_argument("--config", help="path to a JSON config")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    return p


def load_config(path, suite, seed) -> SuiteConfig:
    data = {}
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return SuiteConfig.from_dict(data, suite=suite, seed=seed)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_PASS
    try:
        cfg = load_config(args.config, args.suite, args.seed)
        report = run_suite(cfg)
    except (ConfigError, GeometryError) as exc:
        print(f"staticdec: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # bad input must not surface as a traceback
        print(f"staticdec: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    payload = emit_report(report, args.format)
    if args.out:
        try:
            with open(args.out, "wb") as fh:
                fh.write(payload)
        except OSError as exc:
            print(f"staticdec: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
    return EXIT_PASS if report.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
