#!/usr/bin/env python3
"""Run the four bundled studies and render their figures.

    python scripts/reproduce_figures.py --out out/ [--samples N] [--seed S] [--workers K]

Writes out/<name>/results.csv + manifest.json via the fbsec CLI and, when
the fbsec-plots package is installed, out/<name>.png via fbsec-plot.
Full budgets (1e6 samples) take a few minutes; pass --samples 50000 for a
quick pass.
"""

import argparse
import shutil
import subprocess
import sys

SCENARIOS = ("fig2", "fig3", "fig4", "fig5")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="out")
    parser.add_argument("--samples", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None)
    args = parser.parse_args()

    have_plotter = shutil.which("fbsec-plot") is not None
    if not have_plotter:
        print("fbsec-plot not installed; writing CSVs only", file=sys.stderr)

    for name in SCENARIOS:
        run_dir = f"{args.out}/{name}"
        cmd = [sys.executable, "-m", "fbsec", "run", name, "--out", run_dir]
        for flag, value in (("--samples", args.samples), ("--seed", args.seed), ("--workers", args.workers)):
            if value is not None:
                cmd += [flag, str(value)]
        print("+", " ".join(cmd))
        code = subprocess.run(cmd).returncode
        if code != 0:
            return code
        if have_plotter:
            plot_cmd = [
                "fbsec-plot", name,
                "--csv", f"{run_dir}/results.csv",
                "--out", f"{args.out}/{name}.png",
            ]
            print("+", " ".join(plot_cmd))
            code = subprocess.run(plot_cmd).returncode
            if code != 0:
                return code
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
