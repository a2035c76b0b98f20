"""Trichotomy tags, density and projection checks over the full catalog of E9 x Cp.

    python scripts/structure_census.py --p 5 7
"""
from __future__ import annotations

import argparse
import json
import time
from collections import Counter
from dataclasses import dataclass, field

from schurlab.enumeration import enumerate_srings
from schurlab.groups import make_group
from schurlab.schurity import is_schurian
from schurlab.srings import is_dense
from schurlab.structure import (FactorSetError, check_projection, classify_trichotomy, construct_k,
                                projection_data, verify_dense_cyclotomic)


@dataclass
class CensusRun:
    p: list[int] = field(default_factory=lambda: [5])
    schurity: bool = True


def census(p: int, schurity: bool) -> dict:
    t = time.monotonic()
    cat = enumerate_srings(make_group([3, 3, p]))
    tags = Counter()
    dense = dense_cyc = k_missing = proj_bad = non_schurian = 0
    for A in cat.srings():
        tags[classify_trichotomy(A).verdict] += 1
        if is_dense(A):
            dense += 1
            dense_cyc += verify_dense_cyclotomic(A)
            for X in A.basic_sets:
                k_missing += construct_k(A, X) is None
                try:
                    proj_bad += not check_projection(A, projection_data(A, X)).ok
                except FactorSetError:
                    pass
        if schurity:
            non_schurian += not is_schurian(A).schurian
    return {"p": p, "records": len(cat), "trichotomy": dict(tags), "dense": dense, "dense_cyclotomic": dense_cyc,
            "k_missing": k_missing, "projection_failures": proj_bad,
            "non_schurian": non_schurian if schurity else None, "seconds": round(time.monotonic() - t, 1)}


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, nargs="+", default=[5])
    ap.add_argument("--no-schurity", dest="schurity", action="store_false")
    cfg = CensusRun(**vars(ap.parse_args()))
    for p in cfg.p:
        print(json.dumps(census(p, cfg.schurity)))
