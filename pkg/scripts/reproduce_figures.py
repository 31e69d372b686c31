#!/usr/bin/env python3
"""Regenerate the CSV data behind every figure (fig2 through fig11).

Usage:  python scripts/reproduce_figures.py [OUT_DIR]

Each figure lands in its own subdirectory with three panel CSVs and a
metadata file recording every parameter default.
"""

import sys
import time
from pathlib import Path

from qbattery import FIGURES, figure_pipeline


def main() -> int:
    out_root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("figures_out")
    for figure_id in sorted(FIGURES, key=lambda f: int(f.removeprefix("fig"))):
        start = time.monotonic()
        files = figure_pipeline(figure_id, out_root / figure_id)
        print(f"{figure_id}: {len(files)} files in {time.monotonic() - start:.2f}s "
              f"-> {out_root / figure_id}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
