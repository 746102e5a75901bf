#!/usr/bin/env python3
"""Regenerate every table/figure dataset into results/ (CSV + SVG)."""

import sys
from pathlib import Path

from coupled_array.cli import main

OUT = Path(__file__).resolve().parent.parent / "results"


def run() -> int:
    for target in ("table1", "fig2", "fig3", "fig4"):
        code = main(["reproduce", target, "--out", str(OUT)])
        if code != 0:
            print(f"{target} failed with exit code {code}", file=sys.stderr)
            return code
    print(f"all outputs under {OUT}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
