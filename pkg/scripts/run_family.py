"""Sweep the C_{M+1} family graded by e_1 and tabulate group orders and verdicts.

    python scripts/run_family.py --max-m 4
    python scripts/run_family.py --max-m 6 --checks axioms,relations,symplectic,mu --json out.json
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from math import factorial

from sandwich_weyl.pipeline import CHECKS, build_bundle, run_report


@dataclass
class SweepConfig:
    min_m: int = 1
    max_m: int = 4
    checks: list[str] = field(default_factory=lambda: list(CHECKS))
    workers: int = 1


@dataclass
class Row:
    M: int
    r_minus: int
    W_R: int | None
    W_R_hat: int | None
    W_script: int | None
    W_R_tilde: int | None
    expected_tilde: int
    passed: bool
    seconds: float


def sweep(cfg: SweepConfig) -> list[Row]:
    rows = []
    for m in range(cfg.min_m, cfg.max_m + 1):
        t0 = time.perf_counter()
        bundle = build_bundle("C", m + 1, [1] + [0] * m)
        rep = run_report(bundle, cfg.checks, workers=cfg.workers)
        o = rep["orders"]
        rows.append(Row(m, rep["alignment"]["r_minus"], o["W_R"], o["W_R_hat"], o["W_script"], o["W_R_tilde"],
                        4**m * factorial(m), rep["passed"], round(time.perf_counter() - t0, 3)))
    return rows


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--min-m", type=int, default=1)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--checks", default="all", help="comma-separated check names or 'all'")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", default=None, help="also write rows to this file")
    a = p.parse_args(argv)
    checks = list(CHECKS) if a.checks == "all" else a.checks.split(",")
    cfg = SweepConfig(a.min_m, a.max_m, checks, a.workers)
    rows = sweep(cfg)

    cols = ["M", "r_minus", "W_R", "W_R_hat", "W_script", "W_R_tilde", "expected_tilde", "passed", "seconds"]
    print("  ".join(f"{c:>14}" for c in cols))
    for r in rows:
        print("  ".join(f"{str(getattr(r, c)):>14}" for c in cols))
    if a.json:
        with open(a.json, "w", encoding="utf-8") as fh:
            json.dump({"config": asdict(cfg), "rows": [asdict(r) for r in rows]}, fh, indent=2, sort_keys=True)
    return 0 if all(r.passed for r in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
