#!/usr/bin/env python3
"""Run every config in configs/ through the CLI and print one line per config.

Exits 1 if any config other than the expected failures does not pass.
"""

import argparse
import json
import sys
from pathlib import Path

from staticdec.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent
# configs that exist to demonstrate a detected failure
EXPECTED_FAIL = {"prop31_perturbed"}


def run(path: Path, out_dir: Path | None) -> int:
    suite = json.loads(path.read_text())["suite"]
    argv = [suite, "--config", str(path), "--format", "text"]
    if out_dir is not None:
        argv += ["--out", str(out_dir / f"{path.stem}.txt")]
    return cli_main(argv)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--configs", type=Path, default=ROOT / "configs")
    ap.add_argument("--out-dir", type=Path, help="write one text report per config here instead of stdout")
    args = ap.parse_args(argv)
    if args.out_dir:
        args.out_dir.mkdir(parents=True, exist_ok=True)
    unexpected = []
    for path in sorted(args.configs.glob("*.json")):
        code = run(path, args.out_dir)
        expected = 1 if path.stem in EXPECTED_FAIL else 0
        status = "ok" if code == expected else "UNEXPECTED"
        print(f"{path.stem:24s} exit {code} ({status})", file=sys.stderr)
        if code != expected:
            unexpected.append(path.stem)
    return 1 if unexpected else 0


if __name__ == "__main__":
    sys.exit(main())
