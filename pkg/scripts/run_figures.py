#!/usr/bin/env python3
"""Default N-scans for all three systems, figure CSVs and scaling fits.

    python3 scripts/run_figures.py --out results/ --jobs 1

Writes scan_<system>.csv, fig1..fig4 series and fits.json into --out.
"""
import argparse
import json
import logging
import time
from pathlib import Path

from infodens.cli import read_scan_csv, run
from infodens.scaling import REFERENCE_POWER, REFERENCE_SLOPES, fit


def points(path, column):
    _, rows = read_scan_csv(str(path))
    return [(float(r["N"]), float(r[column])) for r in rows]


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--systems", default="cluster,nucleus,bosons")
    args = ap.parse_args()
    logging.basicConfig(level=logging.WARNING)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    fits = {}
    for system in args.systems.split(","):
        path = out / f"scan_{system}.csv"
        t0 = time.perf_counter()
        code = run(["scan", "--system", system, "--out", str(path), "--jobs", str(args.jobs),
                    "--figures", str(out)])
        if code:
            raise SystemExit(code)
        summary = {"seconds": round(time.perf_counter() - t0, 1)}
        for column, model in (("S_E", "linear"), ("S_E", "power"), ("S_I", "power"), ("S", "log")):
            res = fit(model, points(path, column))
            summary[f"{column}_{model}"] = {**res.coefficients, "r_squared": res.r_squared}
        if system in REFERENCE_SLOPES:
            summary["S_E_slope_ratio"] = summary["S_E_linear"]["c"] / REFERENCE_SLOPES[system]
            summary["S_I_reference_exponent"] = REFERENCE_POWER[system][1]
        fits[system] = summary
        print(f"{system:8s} {summary['seconds']:6.1f} s  "
              f"S_E linear r2={summary['S_E_linear']['r_squared']:.5f}  "
              f"S_I exponent={summary['S_I_power']['b']:.3f} "
              f"(r2={summary['S_I_power']['r_squared']:.4f})  "
              f"S log r2={summary['S_log']['r_squared']:.4f}")
    (out / "fits.json").write_text(json.dumps(fits, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
