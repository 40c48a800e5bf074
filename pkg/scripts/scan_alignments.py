"""Count class-C grading vectors across a range of ambient systems.

    python scripts/scan_alignments.py --bound 1
    python scripts/scan_alignments.py --systems C3,C4,B3,D4,G2 --bound 2 --show
"""

from __future__ import annotations

import argparse
import re
import sys
from collections import Counter
from dataclasses import dataclass

from sandwich_weyl.pipeline import scan_alignments


@dataclass
class ScanConfig:
    systems: list[tuple[str, int]]
    bound: int = 1
    show: bool = False


def parse_systems(text: str) -> list[tuple[str, int]]:
    out = []
    for item in text.split(","):
        m = re.fullmatch(r"\s*([A-Ga-g])(\d+)\s*", item)
        if not m:
            raise argparse.ArgumentTypeError(f"bad system {item!r}, expected e.g. C3")
        out.append((m.group(1).upper(), int(m.group(2))))
    return out


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--systems", type=parse_systems, default=parse_systems("A2,A3,B2,B3,C2,C3,C4,D4,G2"))
    p.add_argument("--bound", type=int, default=1)
    p.add_argument("--show", action="store_true", help="list every vector found")
    a = p.parse_args(argv)
    cfg = ScanConfig(a.systems, a.bound, a.show)
    for label, rank in cfg.systems:
        rows = scan_alignments(label, rank, cfg.bound)
        by_m = Counter(r["M"] for r in rows)
        summary = ", ".join(f"M={m}: {n}" for m, n in sorted(by_m.items())) or "none"
        print(f"{label}{rank}: {len(rows)} class-C vectors ({summary})")
        if cfg.show:
            for r in rows:
                print(f"    h* = {tuple(r['h_star'])}  M = {r['M']}  |R0| = {r['r_zero']}  |R-| = {r['r_minus']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
