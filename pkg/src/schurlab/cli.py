"""Command-line front end: ``python -m schurlab <command> [options]``.

Exit codes: 0 success, 1 a check failed (non-schurian record, non-conforming
classification, failing suite), 2 bad input, 3 search truncated by the time
budget, 4 schurity timeout.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .config import COMMANDS, DEFAULT_BUDGET, ENV_BUDGET, ConfigError, RunConfig, budget_default
from .enumeration import BudgetExceeded, EnumerationTask, enumerate_srings, sample_generated
from .groups import AbelianGroup, InvalidGroupError, TooLargeError, parse_group_spec
from .invariants import SUITES, run_suite
from .schurity import SchurityTimeout, is_schurian
from .srings import InvalidPartitionError, SRing, closure, dual_sring, is_cyclotomic, is_dense
from .structure import GroupShapeError, classify_e9, classify_trichotomy, e9_cp_prime

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_TRUNCATED, EXIT_TIMEOUT = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


# -- persistence -------------------------------------------------------------------------

def catalog_document(rings: list[dict], complete: bool, elapsed: float, reproducible: bool, **meta) -> dict:
    md = {"complete": complete, "elapsed_s": 0.0 if reproducible else round(elapsed, 3),
          "tool_version": __version__}
    md.update(meta)
    return {"metadata": md, "records": rings}


def write_json(doc, path: str | None) -> None:
    text = json.dumps(doc, indent=1) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".json")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def read_catalog(path: str | None) -> tuple[dict, list[SRing]]:
    if path is None:
        raise InputError("--in is required")
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"corrupted JSON in {path}: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("records"), list):
        raise InputError("catalog must be an object with a 'records' list")
    rings = []
    for i, rec in enumerate(doc["records"]):
        try:
            rings.append(SRing.from_dict(rec))
        except (KeyError, TypeError, ValueError, InvalidPartitionError) as exc:
            raise InputError(f"record {i}: {exc}") from None
    return doc, rings


def _summary(**kw) -> None:
    sys.stdout.write(json.dumps(kw, sort_keys=True) + "\n")


def _progress(cfg: RunConfig):
    if not cfg.progress:
        return None

    def sink(stats: dict) -> None:
        sys.stderr.write(json.dumps(stats, sort_keys=True) + "\n")
        sys.stderr.flush()
    return sink


def _group(cfg: RunConfig) -> AbelianGroup:
    if cfg.group is None:
        raise InputError("--group is required")
    G = parse_group_spec(cfg.group)
    return G


def _out(cfg: RunConfig, doc) -> None:
    write_json(doc, cfg.out_path)


# -- record annotation -------------------------------------------------------------------

def classify_record(A: SRing) -> dict:
    out: dict = {}
    M = is_cyclotomic(A)
    out["cyclotomic_witness_order"] = None if M is None else M.order
    if A.group.orders == (3, 3):
        c = classify_e9(A)
        out["e9_family"] = c.tag
        out["e9_family_all"] = c.tags
    try:
        e9_cp_prime(A.group)
    except GroupShapeError:
        return out
    out["dense"] = is_dense(A)
    out["trichotomy"] = classify_trichotomy(A).to_dict()
    return out


def _classify_worker(rec: dict) -> dict:
    return classify_record(SRing.from_dict(rec, check=False))


def _schurity_worker(args) -> dict:
    rec, budget = args
    A = SRing.from_dict(rec, check=False)
    try:
        v = is_schurian(A, budget=budget)
    except SchurityTimeout:
        return {"schurian": None, "timeout": True}
    return v.to_dict(A.group)


def _map(fn, items, jobs: int):
    if jobs <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- commands ----------------------------------------------------------------------------

def cmd_enumerate(cfg: RunConfig) -> int:
    G = _group(cfg)
    task = EnumerationTask(G, cfg.max_seconds, progress=_progress(cfg))
    start = time.monotonic()
    try:
        cat = enumerate_srings(task)
        code = EXIT_OK
    except BudgetExceeded as exc:
        cat = exc.catalog
        code = EXIT_TRUNCATED
    elapsed = time.monotonic() - start
    recs = [r.to_dict() for r in cat.records]
    doc = catalog_document(recs, code == EXIT_OK, elapsed, cfg.reproducible, group=G.spec, source="enumerate")
    _out(cfg, doc)
    _summary(command="enumerate", group=G.spec, records=len(recs), complete=code == EXIT_OK)
    return code


def cmd_sample(cfg: RunConfig) -> int:
    G = _group(cfg)
    count = 10 if cfg.count is None else cfg.count
    start = time.monotonic()
    rings = sample_generated(G, count, cfg.seed)
    recs = [A.to_dict() | {"rank": A.rank} for A in rings]
    doc = catalog_document(recs, len(rings) == count, time.monotonic() - start, cfg.reproducible,
                           group=G.spec, source="sample", seed=cfg.seed, requested=count)
    _out(cfg, doc)
    _summary(command="sample", group=G.spec, records=len(recs), requested=count)
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    doc, rings = read_catalog(cfg.in_path)
    notes = _map(_classify_worker, doc["records"], cfg.jobs)
    bad = 0
    for rec, note in zip(doc["records"], notes):
        rec.update(note)
        tri = note.get("trichotomy")
        if (tri is not None and tri["verdict"] == "NonConforming") or note.get("e9_family") == "unmatched":
            bad += 1
    _out(cfg, doc)
    _summary(command="classify", records=len(rings), nonconforming=bad)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_schurity(cfg: RunConfig) -> int:
    doc, rings = read_catalog(cfg.in_path)
    notes = _map(_schurity_worker, [(rec, cfg.max_seconds) for rec in doc["records"]], cfg.jobs)
    timeouts = sum(1 for n in notes if n.get("timeout"))
    nonschur = sum(1 for n in notes if n.get("schurian") is False)
    for rec, note in zip(doc["records"], notes):
        rec.update(note)
    _out(cfg, doc)
    _summary(command="schurity", records=len(rings), nonschurian=nonschur, timeouts=timeouts)
    if nonschur:
        return EXIT_FAIL
    return EXIT_TIMEOUT if timeouts else EXIT_OK


def cmd_dual(cfg: RunConfig) -> int:
    doc, rings = read_catalog(cfg.in_path)
    recs = [D.to_dict() | {"rank": D.rank} for D in (dual_sring(A) for A in rings)]
    out = catalog_document(recs, True, 0.0, True, source="dual")
    _out(cfg, out)
    _summary(command="dual", records=len(recs))
    return EXIT_OK


def cmd_closure(cfg: RunConfig) -> int:
    G = _group(cfg)
    if cfg.in_path is None:
        raise InputError("--in must name a JSON file with seed blocks")
    try:
        with open(cfg.in_path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {cfg.in_path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"corrupted JSON: {exc}") from None
    blocks_raw = data.get("blocks") if isinstance(data, dict) else data
    try:
        blocks = [[G.index(c) for c in B] for B in blocks_raw]
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"bad seed blocks: {exc}") from None
    A = closure(G, blocks)
    _out(cfg, A.to_dict() | {"rank": A.rank})
    if cfg.out_path is not None:
        _summary(command="closure", group=G.spec, rank=A.rank)
    return EXIT_OK


def cmd_invariants(cfg: RunConfig) -> int:
    names = SUITES if cfg.suite is None else (cfg.suite,)
    if cfg.suite is not None and cfg.suite not in SUITES:
        raise InputError(f"unknown suite {cfg.suite!r}; choose from {', '.join(SUITES)}")
    results = [run_suite(n, seed=cfg.seed, count=cfg.count) for n in names]
    report = {"seed": cfg.seed, "suites": [r.to_dict() for r in results]}
    ok = all(r.passed for r in results)
    if cfg.out_path is not None:
        write_json(report, cfg.out_path)
    sys.stdout.write(json.dumps({"command": "invariants", "passed": ok,
                                 "suites": {r.name: [r.passed, r.checked] for r in results}}, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_FAIL


HANDLERS = {
    "enumerate": cmd_enumerate, "classify": cmd_classify, "schurity": cmd_schurity, "sample": cmd_sample,
    "dual": cmd_dual, "closure": cmd_closure, "invariants": cmd_invariants,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="schurlab", description="S-rings over small abelian groups.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--group", help="group spec such as 3x3x5")
    p.add_argument("--in", dest="in_path", help="input JSON file")
    p.add_argument("--out", dest="out_path", help="output JSON file (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int)
    p.add_argument("--max-seconds", type=float, help=f"time budget in seconds (default ${ENV_BUDGET} or {DEFAULT_BUDGET:g})")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--suite", help="run a single invariant suite")
    p.add_argument("--progress", action="store_true", help="stream search statistics to stderr")
    p.add_argument("--reproducible", action="store_true", help="write elapsed_s as 0 for byte-stable output")
    return p


def parse_config(argv: list[str]) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    d = vars(ns)
    if d["max_seconds"] is None:
        d["max_seconds"] = budget_default()
    return RunConfig.from_dict(d)


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    except ConfigError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    try:
        return HANDLERS[cfg.command](cfg)
    except (InputError, InvalidGroupError, TooLargeError, ConfigError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
