"""Search orchestration: config, cell planning, checkpointed parallel
execution, verification, and the final report.

A search is described by a SearchSpec (parsed from a flat key=value config
file with command-line overrides).  plan_cells splits it into enumeration
cells, one per (trace, signed norm, parity) triple, sorted so the expensive
cells start first.  Each cell is cut into contiguous block-range chunks at
plan time; chunks are the unit of parallelism and of checkpointing, so a run
killed at any point resumes from the last completed chunk and still produces
a byte-identical survivor table.  Chunk boundaries are frozen into the
checkpoint on first contact and never recomputed.

The verification pass (irreducibility, signature, field discriminant) is
deterministic and cheap relative to enumeration, so it is re-run from the
checkpointed survivor stream on completion rather than checkpointed itself.

Checkpoints hold the step-3 survivor vectors inline, which is fine at desk
scale; a full degree-8 production run should lower checkpoint_interval's
chunk size and use the export file for survivor archival instead.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field, fields, replace
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .enumeration import CellStats, EnumCell, count_blocks, run_cell
from .explicit_bounds import (SignatureSpec, bounds_table_rows, norm_admissible,
                              prime_power)
from .hp_bounds import BoundsSet, u2_bound
from .verify import CandidatePolynomial, FieldRecord, dedup, verify_candidate

__all__ = [
    "ConfigError", "SearchSpec", "Checkpoint", "RunReport",
    "parse_config", "spec_from_strings", "plan_cells", "bounds_table",
    "execute", "run_search", "write_report", "EXIT_OK", "EXIT_CONFIG",
    "EXIT_INTERRUPTED",
]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INTERRUPTED = 3


class ConfigError(ValueError):
    """Invalid configuration (bad spec field, unknown key, stale checkpoint)."""


# ---------------------------------------------------------------------------
# SearchSpec

@dataclass(frozen=True)
class SearchSpec:
    """Everything that defines one search plus how to run it.

    The first nine fields fix the mathematical search (they enter the spec
    hash guarding checkpoints); workers, checkpoint_interval and the paths
    only affect execution and may change between resume runs.
    """

    degree: int
    r1: int
    r2: int
    disc_bound: int
    excluded_norms: Tuple[int, ...] = ()
    eval_range: Tuple[int, ...] = None  # defaulted from the degree below
    s1_values: Tuple[int, ...] = None   # None -> all of 0..n//2
    a_n_max: Optional[int] = None
    parity_values: Tuple[int, ...] = (0, 1)
    workers: int = 1
    checkpoint_interval: int = 5_000_000
    output_path: str = "fieldscan_report.txt"
    checkpoint_path: str = "fieldscan_checkpoint.json"

    def __post_init__(self):
        def fail(msg):
            raise ConfigError(msg)

        if not (2 <= self.degree <= 8):
            fail(f"degree must be in 2..8 (Hermite constants), got {self.degree}")
        if self.r1 < 0 or self.r2 < 0 or self.degree != self.r1 + 2 * self.r2:
            fail(f"signature ({self.r1},{self.r2}) inconsistent with degree {self.degree}")
        if self.disc_bound < 1:
            fail(f"disc_bound must be >= 1, got {self.disc_bound}")
        object.__setattr__(self, "excluded_norms",
                           tuple(sorted({int(q) for q in self.excluded_norms or ()})))
        for q in self.excluded_norms:
            if q < 2 or prime_power(q) is None:
                fail(f"excluded norm {q} is not a prime power")
        ev = self.eval_range
        if ev is None:
            ev = range(2, (5 * self.degree) // 8 + 1)
        ev = tuple(sorted({int(k) for k in ev}))
        if any(k < 2 for k in ev):
            fail("eval_range arguments must be >= 2 (1 is checked separately)")
        object.__setattr__(self, "eval_range", ev)
        s1s = self.s1_values
        if s1s is None:
            s1s = range(self.degree // 2 + 1)
        s1s = tuple(sorted({int(s) for s in s1s}))
        if not s1s or any(not 0 <= s <= self.degree // 2 for s in s1s):
            fail(f"s1_values must be a nonempty subset of 0..{self.degree // 2}")
        object.__setattr__(self, "s1_values", s1s)
        if self.a_n_max is not None and self.a_n_max < 1:
            fail("a_n_max must be >= 1 when given")
        pv = tuple(sorted({int(c) for c in self.parity_values}))
        if not pv or any(c not in (0, 1) for c in pv):
            fail("parity_values must be a nonempty subset of {0, 1}")
        object.__setattr__(self, "parity_values", pv)
        if self.workers < 1:
            fail("workers must be >= 1")
        if self.checkpoint_interval < 1:
            fail("checkpoint_interval must be >= 1")

    @property
    def signature(self) -> Tuple[int, int]:
        return self.r1, self.r2

    def semantic_key(self) -> dict:
        """The fields that determine the survivor set (and nothing else)."""
        return {
            "degree": self.degree, "r1": self.r1, "r2": self.r2,
            "disc_bound": self.disc_bound,
            "excluded_norms": list(self.excluded_norms),
            "eval_range": list(self.eval_range),
            "s1_values": list(self.s1_values),
            "a_n_max": self.a_n_max,
            "parity_values": list(self.parity_values),
        }

    def spec_hash(self) -> str:
        blob = json.dumps(self.semantic_key(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


_INT_FIELDS = {"degree", "r1", "r2", "disc_bound", "workers", "checkpoint_interval"}
_OPT_INT_FIELDS = {"a_n_max"}
_TUPLE_FIELDS = {"excluded_norms", "eval_range", "s1_values", "parity_values"}
_PATH_FIELDS = {"output_path", "checkpoint_path"}
_ALL_KEYS = _INT_FIELDS | _OPT_INT_FIELDS | _TUPLE_FIELDS | _PATH_FIELDS


def parse_config(path: str) -> Dict[str, str]:
    """Flat key=value file -> raw string dict.  '#' starts a comment."""
    items: Dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _ALL_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            items[key] = value.strip()
    return items


def spec_from_strings(items: Dict[str, str]) -> SearchSpec:
    """Build a SearchSpec from string values (config file and CLI flags)."""
    kwargs = {}
    for key, raw in items.items():
        if raw is None:
            continue
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}")
        try:
            if key in _INT_FIELDS:
                kwargs[key] = int(raw)
            elif key in _OPT_INT_FIELDS:
                kwargs[key] = None if raw.lower() in ("", "none") else int(raw)
            elif key in _TUPLE_FIELDS:
                raw = raw.strip()
                kwargs[key] = (None if raw.lower() == "none"
                               else tuple(int(t) for t in raw.replace(",", " ").split()))
            else:
                kwargs[key] = raw
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from exc
    missing = {"degree", "r1", "r2", "disc_bound"} - kwargs.keys()
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(sorted(missing))}")
    return SearchSpec(**kwargs)


# ---------------------------------------------------------------------------
# planning

@lru_cache(maxsize=256)
def _bounds_for(degree: int, s1: int, disc_bound: int, N: int) -> BoundsSet:
    return BoundsSet.compute(degree, s1, disc_bound, N)


def _norm_cap(degree: int, s1: int, disc_bound: int) -> int:
    t2 = u2_bound(degree, s1, disc_bound)
    return math.floor((t2 / degree) ** (degree / 2) * (1 + 1e-12))


def estimated_cost(cell: EnumCell) -> float:
    """Relative cost proxy: area of the two innermost coefficient windows.

    The row window scales with the norm (|a_{n-1}| <= U_{-1} N); the column
    level n-2, when it exists, contributes about 2 U_{n-2}/(n-2) values.
    Big norms therefore dominate, which is what the costliest-first sort
    needs; this is a scheduling heuristic, not a bound.
    """
    N = abs(cell.a_n)
    u = cell.bounds.U
    rows = 2 * u[-1] * N + 1
    if cell.n < 4:
        return rows
    m = cell.n - 2
    return rows * (2 * u[m] / m + 1)


def plan_cells(spec: SearchSpec) -> List[EnumCell]:
    """One cell per (s1, admissible N, sign, parity), costliest first.

    The norm cap floor((T(s1)/n)^(n/2)) is recomputed for every trace value;
    a spec whose every trace admits no norm at all is rejected.
    """
    cells: List[EnumCell] = []
    for s1 in spec.s1_values:
        cap = _norm_cap(spec.degree, s1, spec.disc_bound)
        if spec.a_n_max is not None:
            cap = min(cap, spec.a_n_max)
        for N in range(1, cap + 1):
            if not norm_admissible(N, spec.excluded_norms):
                continue
            bounds = _bounds_for(spec.degree, s1, spec.disc_bound, N)
            for sign in (1, -1):
                for c in spec.parity_values:
                    cells.append(EnumCell(spec=spec, s1=s1, a_n=sign * N,
                                          parity_c=c, bounds=bounds))
    if not cells:
        raise ConfigError(
            f"no admissible norm for any trace in {spec.s1_values}: "
            f"(T/n)^(n/2) < 1 everywhere")
    cells.sort(key=lambda c: (-estimated_cost(c), c.s1, c.a_n, c.parity_c))
    return cells


def bounds_table(sig: SignatureSpec, norms_list: Sequence[int]) -> list:
    """(norm, y_opt, rhs, implied_bound) rows; empty list = unconditional row."""
    return bounds_table_rows(sig, norms_list)


# ---------------------------------------------------------------------------
# checkpoint

def _atomic_write_text(path: str, text: str) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


@dataclass
class Checkpoint:
    """Durable progress record: frozen chunk boundaries plus chunk results.

    A chunk result holds the step-3 survivors of one block range, in
    enumeration order, and the chunk's counters.  The survivor stream of the
    whole search is the concatenation over cells in plan order and chunks in
    index order, so it does not depend on which worker finished first.
    """

    spec_hash: str
    blocks_per_chunk: int
    cells: List[dict]            # {"cell_id", "total_blocks", "chunks": [[lo,hi],..]}
    results: Dict[str, dict]     # "cellidx:chunkidx" -> {"survivors", "stats"}
    path: str

    @staticmethod
    def _chunk_ranges(total_blocks: int, per: int) -> List[List[int]]:
        if total_blocks <= 0:
            return []
        return [[lo, min(lo + per, total_blocks)]
                for lo in range(0, total_blocks, per)]

    @classmethod
    def create(cls, spec: SearchSpec, cells: Sequence[EnumCell]) -> "Checkpoint":
        per_block = max(1.0, sum(estimated_cost(c) for c in cells) / max(len(cells), 1))
        per = max(1, math.ceil(spec.checkpoint_interval / per_block))
        cell_entries = []
        for cell in cells:
            total = count_blocks(cell)
            cell_entries.append({
                "cell_id": cell.cell_id,
                "total_blocks": total,
                "chunks": cls._chunk_ranges(total, per),
            })
        return cls(spec_hash=spec.spec_hash(), blocks_per_chunk=per,
                   cells=cell_entries, results={}, path=spec.checkpoint_path)

    @classmethod
    def load(cls, spec: SearchSpec) -> Optional["Checkpoint"]:
        """Existing checkpoint for this spec, None if absent.

        A checkpoint written for a different search is a configuration
        error, not something to silently overwrite.
        """
        path = spec.checkpoint_path
        if not os.path.exists(path):
            return None
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if data.get("spec_hash") != spec.spec_hash():
            raise ConfigError(
                f"checkpoint {path} belongs to a different search "
                f"(hash {data.get('spec_hash', '?')[:12]}... != "
                f"{spec.spec_hash()[:12]}...); delete it or change checkpoint_path")
        return cls(spec_hash=data["spec_hash"],
                   blocks_per_chunk=data["blocks_per_chunk"],
                   cells=data["cells"], results=data["results"], path=path)

    @classmethod
    def load_or_create(cls, spec: SearchSpec, cells: Sequence[EnumCell]) -> "Checkpoint":
        cp = cls.load(spec)
        if cp is None:
            cp = cls.create(spec, cells)
            cp.save()
            return cp
        plan_ids = [c.cell_id for c in cells]
        if [e["cell_id"] for e in cp.cells] != plan_ids:
            raise ConfigError(f"checkpoint {cp.path} cell plan disagrees with spec")
        return cp

    def save(self) -> None:
        payload = {"spec_hash": self.spec_hash,
                   "blocks_per_chunk": self.blocks_per_chunk,
                   "cells": self.cells, "results": self.results}
        _atomic_write_text(self.path, json.dumps(payload))

    # -- progress queries ---------------------------------------------------

    def pending_chunks(self) -> List[Tuple[int, int, int, int]]:
        """(cell_index, chunk_index, lo, hi) for every chunk not yet done."""
        out = []
        for ci, entry in enumerate(self.cells):
            for ki, (lo, hi) in enumerate(entry["chunks"]):
                if f"{ci}:{ki}" not in self.results:
                    out.append((ci, ki, lo, hi))
        return out

    def record(self, cell_index: int, chunk_index: int, survivors: List[list],
               stats: dict) -> None:
        self.results[f"{cell_index}:{chunk_index}"] = {
            "survivors": survivors, "stats": stats}

    def complete(self) -> bool:
        return not self.pending_chunks()

    def merged_stats(self) -> CellStats:
        total = CellStats()
        for ci, entry in enumerate(self.cells):
            for ki in range(len(entry["chunks"])):
                res = self.results.get(f"{ci}:{ki}")
                if res:
                    total.merge(CellStats.from_dict(res["stats"]))
        return total

    def survivor_stream(self) -> Iterator[Tuple[Tuple[int, ...], str]]:
        """(coeff tuple, cell_id) in canonical order: plan order, then blocks."""
        for ci, entry in enumerate(self.cells):
            cid = entry["cell_id"]
            for ki in range(len(entry["chunks"])):
                res = self.results.get(f"{ci}:{ki}")
                if res is None:
                    raise RuntimeError(f"survivor stream requested before "
                                       f"cell {cid} chunk {ki} finished")
                for co in res["survivors"]:
                    yield tuple(co), cid


# ---------------------------------------------------------------------------
# execution

def _verify_task(args: tuple) -> list:
    """Worker entry point: verify one ordered batch of survivors."""
    degree, r1, r2, disc_bound, batch = args
    out = []
    for coeffs, cell_id in batch:
        cand = CandidatePolynomial(degree, tuple(coeffs), cell_id)
        out.append(verify_candidate(cand, degree, r1, r2, disc_bound))
    return out


def _verified_stream(spec: SearchSpec, survivors) -> Iterator[tuple]:
    """(verdict, payload) per survivor, in stream order.

    Verification is pure and per-candidate, so with workers > 1 it is
    farmed out in order-preserving batches.
    """
    if spec.workers == 1:
        for coeffs, cell_id in survivors:
            cand = CandidatePolynomial(spec.degree, tuple(coeffs), cell_id)
            yield verify_candidate(cand, spec.degree, spec.r1, spec.r2,
                                   spec.disc_bound)
        return
    batch_size = 256
    stream = list(survivors)
    batches = [(spec.degree, spec.r1, spec.r2, spec.disc_bound,
                stream[i:i + batch_size])
               for i in range(0, len(stream), batch_size)]
    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        for results in pool.map(_verify_task, batches):
            yield from results


def _chunk_task(args: tuple) -> dict:
    """Worker entry point: enumerate one block range of one cell."""
    (degree, r1, r2, disc_bound, excluded, eval_range,
     s1, a_n, parity_c, lo, hi) = args
    spec = SearchSpec(degree=degree, r1=r1, r2=r2, disc_bound=disc_bound,
                      excluded_norms=excluded, eval_range=eval_range)
    bounds = _bounds_for(degree, s1, disc_bound, abs(a_n))
    cell = EnumCell(spec=spec, s1=s1, a_n=a_n, parity_c=parity_c, bounds=bounds)
    stats = CellStats()
    survivors = [list(t) for t in
                 run_cell(cell, stats, engine="auto", block_range=(lo, hi), raw=True)]
    return {"survivors": survivors, "stats": stats.as_dict()}


def _task_args(spec: SearchSpec, cell: EnumCell, lo: int, hi: int) -> tuple:
    return (spec.degree, spec.r1, spec.r2, spec.disc_bound,
            spec.excluded_norms, spec.eval_range,
            cell.s1, cell.a_n, cell.parity_c, lo, hi)


def execute(spec: SearchSpec, cells: Sequence[EnumCell], checkpoint: Checkpoint,
            max_chunks: Optional[int] = None, progress=None) -> bool:
    """Run pending chunks; True when the whole search is done.

    max_chunks caps how many chunks this call completes (budgeted
    execution); the checkpoint is saved after every chunk either way, so
    stopping anywhere — including a hard kill — costs at most one chunk of
    work.
    """
    pending = checkpoint.pending_chunks()
    if max_chunks is not None:
        pending = pending[:max_chunks]
    if not pending:
        return checkpoint.complete()

    if spec.workers == 1:
        for ci, ki, lo, hi in pending:
            res = _chunk_task(_task_args(spec, cells[ci], lo, hi))
            checkpoint.record(ci, ki, res["survivors"], res["stats"])
            checkpoint.save()
            if progress:
                progress(ci, ki)
        return checkpoint.complete()

    with ProcessPoolExecutor(max_workers=spec.workers) as pool:
        queue = list(pending)
        inflight = {}
        while queue and len(inflight) < 2 * spec.workers:
            ci, ki, lo, hi = queue.pop(0)
            inflight[pool.submit(_chunk_task, _task_args(spec, cells[ci], lo, hi))] = (ci, ki)
        while inflight:
            done, _ = wait(inflight, return_when=FIRST_COMPLETED)
            for fut in done:
                ci, ki = inflight.pop(fut)
                res = fut.result()
                checkpoint.record(ci, ki, res["survivors"], res["stats"])
                checkpoint.save()
                if progress:
                    progress(ci, ki)
                if queue:
                    nci, nki, lo, hi = queue.pop(0)
                    inflight[pool.submit(_chunk_task,
                                         _task_args(spec, cells[nci], lo, hi))] = (nci, nki)
    return checkpoint.complete()


# ---------------------------------------------------------------------------
# the full run

@dataclass
class RunReport:
    """Everything run_search produces besides the files it writes."""

    spec: SearchSpec
    complete: bool
    stats: CellStats
    verify_counts: Dict[str, int]
    records: List[FieldRecord]          # accepted, sorted by |field_disc|
    unresolved: List[dict]
    groups: List[dict]                  # dedup output
    min_abs_field_disc: Optional[int]
    elapsed: float

    def conserved(self) -> bool:
        vc = self.verify_counts
        return (self.stats.conserved()
                and self.stats.passed == vc["rejected"] + vc["unresolved"] + vc["accepted"])


def run_search(spec: SearchSpec, max_chunks: Optional[int] = None,
               progress=None, write_files: bool = True) -> RunReport:
    """Plan, enumerate (resuming any checkpoint), verify, dedup, report.

    Interruptions surface as a RunReport with complete=False and no output
    files; a later call with the same spec picks up where this one stopped.
    """
    t0 = time.perf_counter()
    cells = plan_cells(spec)
    checkpoint = Checkpoint.load_or_create(spec, cells)
    done = execute(spec, cells, checkpoint, max_chunks=max_chunks, progress=progress)
    stats = checkpoint.merged_stats()
    if not done:
        return RunReport(spec=spec, complete=False, stats=stats,
                         verify_counts={"rejected": 0, "unresolved": 0, "accepted": 0},
                         records=[], unresolved=[], groups=[],
                         min_abs_field_disc=None,
                         elapsed=time.perf_counter() - t0)

    counts = {"rejected": 0, "unresolved": 0, "accepted": 0}
    records: List[FieldRecord] = []
    unresolved: List[dict] = []
    for verdict, payload in _verified_stream(spec, checkpoint.survivor_stream()):
        counts[verdict] += 1
        if verdict == "accepted":
            records.append(payload)
        elif verdict == "unresolved":
            unresolved.append({"coeffs": list(payload.poly.coeffs),
                               "poly_disc": payload.poly_disc,
                               "field_disc_between": [payload.lo, payload.hi]})
    records.sort(key=lambda r: (abs(r.field_disc), r.field_disc, r.poly.coeffs))
    groups = dedup(records)
    min_abs = min((abs(r.field_disc) for r in records), default=None)
    report = RunReport(spec=spec, complete=True, stats=stats,
                       verify_counts=counts, records=records,
                       unresolved=unresolved, groups=groups,
                       min_abs_field_disc=min_abs,
                       elapsed=time.perf_counter() - t0)
    if write_files:
        write_report(report)
    return report


def _report_text(rep: RunReport) -> str:
    spec = rep.spec
    lines = ["# fieldscan survivor table"]
    sk = spec.semantic_key()
    lines.append("# " + " ".join(f"{k}={sk[k]}" for k in
                                 ("degree", "r1", "r2", "disc_bound")))
    lines.append(f"# excluded_norms={list(spec.excluded_norms)} "
                 f"eval_range={list(spec.eval_range)} "
                 f"s1_values={list(spec.s1_values)} "
                 f"parity_values={list(spec.parity_values)} "
                 f"a_n_max={spec.a_n_max}")
    lines.append("#")
    lines.append("# coeffs; poly_disc; field_disc; r1,r2; flags")
    for rec in rep.records:
        lines.append(rec.to_line())
    for u in rep.unresolved:
        lines.append(f"{','.join(map(str, u['coeffs']))}; {u['poly_disc']}; "
                     f"in{u['field_disc_between']}; ?; unresolved")
    lines.append("#")
    lines.append("# statistics")
    st = rep.stats
    lines.append(f"blocks = {st.blocks}")
    lines.append(f"generated = {st.generated}")
    for key, val in st.discarded.items():
        lines.append(f"discarded.{key} = {val}")
    lines.append(f"passed_to_verify = {st.passed}")
    for key in ("rejected", "unresolved", "accepted"):
        lines.append(f"verify.{key} = {rep.verify_counts[key]}")
    lines.append(f"distinct_field_discs = {len(rep.groups)}")
    dup_groups = [g for g in rep.groups if len(g['members']) > 1]
    for g in dup_groups:
        lines.append(f"multi_generator_disc = {g['field_disc']} "
                     f"members={len(g['members'])} verdict={g['verdict']}")
    lines.append("min_abs_field_disc = "
                 + (str(rep.min_abs_field_disc) if rep.min_abs_field_disc else "none"))
    lines.append(f"elapsed_seconds = {rep.elapsed:.3f}")
    return "\n".join(lines) + "\n"


def _report_json(rep: RunReport) -> dict:
    return {
        "spec": rep.spec.semantic_key(),
        "output_path": rep.spec.output_path,
        "complete": rep.complete,
        "stats": rep.stats.as_dict(),
        "verify": dict(rep.verify_counts),
        "records": [{"coeffs": list(r.poly.coeffs), "poly_disc": r.poly_disc,
                     "field_disc": r.field_disc, "index2": r.index2,
                     "signature": list(r.signature), "cell_id": r.poly.cell_id}
                    for r in rep.records],
        "unresolved": rep.unresolved,
        "groups": [{"field_disc": g["field_disc"],
                    "members": [list(m.poly.coeffs) for m in g["members"]],
                    "canonical_forms": [list(f) for f in g["canonical_forms"]],
                    "verdict": g["verdict"]} for g in rep.groups],
        "min_abs_field_disc": rep.min_abs_field_disc,
        "elapsed_seconds": rep.elapsed,
    }


def write_report(rep: RunReport) -> Tuple[str, str, str]:
    """Write the text table, its JSON mirror, and the CAS export file.

    Export lines are dense coefficient vectors (leading 1 included) of every
    accepted and unresolved polynomial, for cross-checking elsewhere.
    """
    out = rep.spec.output_path
    _atomic_write_text(out, _report_text(rep))
    json_path = out + ".json"
    _atomic_write_text(json_path, json.dumps(_report_json(rep), indent=1))
    export_path = out + ".export"
    rows = [",".join(map(str, [1, *r.poly.coeffs])) for r in rep.records]
    rows += [",".join(map(str, [1, *u["coeffs"]])) for u in rep.unresolved]
    _atomic_write_text(export_path, "\n".join(rows) + ("\n" if rows else ""))
    return out, json_path, export_path
