#!/usr/bin/env python3
"""Run the full desk-scale grid on the checked-in fixture corpora.

For each config: ingest -> weight -> sweep (every configured variant,
composition, and k) -> report. Artifacts and per-run JSON/CSV reports
land under each config's output directory. With the default configs
this is 3 kinds x 2 compositions x 5 ks per task, and the accuracy
tables printed at the end summarize every run.

Full-scale corpus results are out of reach at desk size; this grid
exists to exercise every code path end to end on controlled data.
"""

from __future__ import annotations

import argparse
import os
import sys

HERE = os.path.dirname(os.path.abspath(__file__))
ROOT = os.path.dirname(HERE)
sys.path.insert(0, os.path.join(ROOT, "src"))

from argex.cli import main as cli_main  # noqa: E402

DEFAULT_CONFIGS = ("configs/bicknell.conf", "configs/chow.conf")


def run(argv: list[str]) -> None:
    code = cli_main(argv)
    if code != 0:
        sys.exit(code)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--configs",
        nargs="+",
        default=list(DEFAULT_CONFIGS),
        help="pipeline configs to run (default: both fixture configs)",
    )
    parser.add_argument(
        "--out-root",
        help="redirect outputs to <out-root>/<config name> instead of the configured out_dir",
    )
    args = parser.parse_args()

    os.chdir(ROOT)  # configs use repo-relative corpus and dataset paths
    for config in args.configs:
        name = os.path.splitext(os.path.basename(config))[0]
        extra: list[str] = []
        if args.out_root:
            extra = ["--out-dir", os.path.join(args.out_root, name)]
        print(f"=== {name} ===")
        run(["ingest", "-c", config, *extra])
        run(["weight", "-c", config, *extra])
        run(["sweep", "-c", config, *extra])
        print(f"--- {name} accuracy table ---")
        run(["report", "-c", config, *extra])


if __name__ == "__main__":
    main()
