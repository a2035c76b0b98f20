"""How many isomorphism classes closure sampling reaches, against the complete catalog.

    python scripts/sampling_coverage.py --p 5 --attempts 2000 10000 30000
"""
from __future__ import annotations

import argparse
import json
import time
from dataclasses import dataclass, field

from schurlab.enumeration import enumerate_srings, sample_generated
from schurlab.groups import make_group
from schurlab.srings import canonical_key


@dataclass
class CoverageRun:
    p: int = 5
    attempts: list[int] = field(default_factory=lambda: [2000, 10000, 30000])
    seed: int = 0
    target: int = 500


def run(cfg: CoverageRun) -> list[dict]:
    G = make_group([3, 3, cfg.p])
    full = {canonical_key(A) for A in enumerate_srings(G).srings()}
    rows = []
    for n in cfg.attempts:
        t = time.monotonic()
        got = sample_generated(G, cfg.target, cfg.seed, max_attempts=n)
        keys = {canonical_key(A) for A in got}
        rows.append({"p": cfg.p, "attempts": n, "distinct": len(keys), "catalog": len(full),
                     "outside_catalog": len(keys - full), "seconds": round(time.monotonic() - t, 1)})
        print(json.dumps(rows[-1]))
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=5)
    ap.add_argument("--attempts", type=int, nargs="+", default=[2000, 10000, 30000])
    ap.add_argument("--seed", type=int, default=0)
    run(CoverageRun(**vars(ap.parse_args())))
