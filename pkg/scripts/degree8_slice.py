#!/usr/bin/env python3
"""Run the documented degree-8 single-cell enumeration slice.

Enumerates one cell (s1 = 0, a_8 = -1, parity 1) of the production search —
degree 8, signature (2, 3), |disc| <= 5 726 300, excluded prime-power norms
{2, 3, 4, 5}, p(+-k) checks for k = 2..5 — and writes a JSON artifact with
the per-condition filter statistics and a SHA-256 digest of the survivor
stream.  The artifact doubles as frozen evidence for the acceptance tests,
which re-run a short block range and demand bit-identical statistics.

Usage:
    python3 scripts/degree8_slice.py [--out PATH] [--blocks N]

With --blocks N only the first N blocks are enumerated (a smoke run); the
default is the whole cell (a few minutes of numpy time).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from datetime import datetime, timezone
from types import SimpleNamespace

import numpy as np

from fieldscan.hp_bounds import BoundsSet
from fieldscan.enumeration import CellStats, EnumCell, count_blocks, run_cell

CELL = {
    "degree": 8, "r1": 2, "r2": 3, "disc_bound": 5726300,
    "excluded_norms": [2, 3, 4, 5], "eval_ks": [2, 3, 4, 5],
    "s1": 0, "a_n": -1, "parity_c": 1,
}
CHECK_RANGE = (0, 3000)


def build_cell() -> EnumCell:
    spec = SimpleNamespace(excluded_norms=frozenset(CELL["excluded_norms"]),
                           eval_range=tuple(CELL["eval_ks"]))
    bounds = BoundsSet.compute(CELL["degree"], CELL["s1"], CELL["disc_bound"],
                               abs(CELL["a_n"]))
    return EnumCell(spec=spec, s1=CELL["s1"], a_n=CELL["a_n"],
                    parity_c=CELL["parity_c"], bounds=bounds)


def run_range(cell: EnumCell, block_range, label: str):
    stats = CellStats()
    digest = hashlib.sha256()
    survivors = 0
    t0 = time.time()
    last = t0
    for tup in run_cell(cell, stats, engine="numpy", block_range=block_range,
                        raw=True):
        digest.update((",".join(map(str, tup)) + "\n").encode())
        survivors += 1
        if survivors % 65536 == 0 and time.time() - last > 10:
            last = time.time()
            print(f"  [{label}] {stats.blocks} blocks, {stats.generated} "
                  f"generated, {survivors} survivors, {last - t0:.0f}s",
                  flush=True)
    elapsed = time.time() - t0
    return {
        "blocks": [block_range[0], block_range[1]],
        "stats": stats.as_dict(),
        "survivors": survivors,
        "survivor_sha256": digest.hexdigest(),
        "runtime_seconds": round(elapsed, 2),
    }


def main() -> int:
    root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default=os.path.join(root, "tests", "data",
                                                  "degree8_slice.json"))
    ap.add_argument("--blocks", type=int, default=None,
                    help="enumerate only the first N blocks")
    args = ap.parse_args()

    cell = build_cell()
    t0 = time.time()
    nblocks = count_blocks(cell)
    print(f"cell {cell.cell_id}: {nblocks} blocks "
          f"(T={cell.bounds.T:.6f}) [{time.time() - t0:.2f}s]", flush=True)

    stop = nblocks if args.blocks is None else min(args.blocks, nblocks)
    print(f"check range {CHECK_RANGE} ...", flush=True)
    check = run_range(cell, CHECK_RANGE, "check")
    print(f"  {check['stats']['generated']} generated, "
          f"{check['survivors']} survivors [{check['runtime_seconds']}s]",
          flush=True)

    print(f"full range (0, {stop}) ...", flush=True)
    full = run_range(cell, (0, stop), "full")
    st = full["stats"]
    print(f"  blocks={st['blocks']} generated={st['generated']} "
          f"passed={st['passed']} [{full['runtime_seconds']}s]", flush=True)
    print(f"  discards: {st['discarded']}", flush=True)

    artifact = {
        "description": ("single-cell enumeration slice of the degree-8 "
                        "signature-(2,3) search (statistics evidence)"),
        "cell": CELL,
        "cell_id": cell.cell_id,
        "total_blocks": nblocks,
        "complete": stop == nblocks,
        "engine": "numpy",
        "check_range": check,
        "full": full,
        "environment": {"python": sys.version.split()[0],
                        "numpy": np.__version__},
        "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    tmp = args.out + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(artifact, fh, indent=2, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, args.out)
    print(f"wrote {args.out}", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
