#!/usr/bin/env python3
"""Regenerate the headline result tables.

Four CSV files are written into --out-dir (default: results/):

    optimal_splits.csv      optimal volume split and eigenvalue per exponent
    disk_vs_rectangle.csv   unit-area disk against the best unit-area rectangle
    flattening.csv          objective versus its large-exponent limit curve
    disk_probe.csv          disk eigenvalues against the longest-segment value

--quick shrinks grid resolutions for a fast smoke pass; the defaults
reproduce the checked-in baseline numbers.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from pathlib import Path

from grushin.asymptotics import convergence_report, max_deviation_per_s
from grushin.minimizer import MinimizeResult, ProblemParams, minimize
from grushin.planar import DiskProblem, segment_limit_probe, solve_disk
from grushin.tables import SweepTable, emit_csv

UNIT_AREA_RHO = math.pi ** -0.5


def log(msg: str) -> None:
    print(msg, file=sys.stderr)


def optimal_splits(n: int) -> SweepTable:
    rows = []
    for s in (0.5, 1.0, 2.0, 3.0, 150.0):
        rows.append(minimize(ProblemParams(d1=1, d2=1, s=s), n).csv_row())
    return SweepTable(headers=MinimizeResult.CSV_HEADERS, rows=tuple(rows))


def disk_vs_rectangle(n2d: int, n1d: int) -> SweepTable:
    rows = []
    for s in (0.0, 0.5, 1.0):
        disk = solve_disk(DiskProblem(rho=UNIT_AREA_RHO, s=s, n=n2d))
        if s == 0.0:
            rect = 2.0 * math.pi**2  # best unit-area rectangle is the square
        else:
            rect = minimize(ProblemParams(d1=1, d2=1, s=s), n1d).lambda1
        rows.append((s, disk.extrapolated, rect, disk.extrapolated - rect))
    return SweepTable(
        headers=("s", "disk_lambda1", "best_rectangle_lambda1", "difference"),
        rows=tuple(rows),
    )


def flattening(n: int, points: int) -> SweepTable:
    p = ProblemParams(d1=1, d2=1, s=1.0)
    t_grid = tuple(2.2 + k * (4.0 - 2.2) / (points - 1) for k in range(points))
    return convergence_report(p, (10.0, 50.0, 150.0), t_grid, n=n)


def disk_probe(n2d: int) -> SweepTable:
    rows = []
    for rho in (UNIT_AREA_RHO, 1.0, 2.0):
        table = segment_limit_probe(rho, (1.0, 10.0, 50.0, 150.0), n=n2d)
        for row in table.rows:
            rows.append((rho, *row))
    return SweepTable(headers=("rho", "s", "lambda1", "reference"), rows=tuple(rows))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=Path("results"))
    parser.add_argument("--quick", action="store_true", help="coarse grids, fast pass")
    args = parser.parse_args(argv)

    n1d = 1024 if args.quick else 4096
    n2d = 128 if args.quick else 512
    n_probe = 96 if args.quick else 256
    points = 5 if args.quick else 10

    args.out_dir.mkdir(parents=True, exist_ok=True)
    jobs = (
        ("optimal_splits.csv", lambda: optimal_splits(n1d)),
        ("disk_vs_rectangle.csv", lambda: disk_vs_rectangle(n2d, n1d)),
        ("flattening.csv", lambda: flattening(n1d, points)),
        ("disk_probe.csv", lambda: disk_probe(n_probe)),
    )
    for name, build in jobs:
        start = time.time()
        table = build()
        path = args.out_dir / name
        emit_csv(table, path)
        log(f"wrote {path} ({len(table.rows)} rows, {time.time() - start:.1f}s)")
        if name == "flattening.csv":
            for s, dev in max_deviation_per_s(table):
                log(f"  s={s:g}: sup deviation from the limit curve = {dev:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
