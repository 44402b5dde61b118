"""HTTP interface to the search pipeline.

Searches are long jobs, so the service is submit-and-poll: POST /runs starts
one in a background thread and returns a run id, GET /runs/{id} reports
progress, POST /runs/{id}/resume restarts an interrupted one from its
checkpoint.  Stateless helpers (/bounds, /plan, /verify) answer directly.

The run registry is in-memory and per-process.  Killing the process loses
the registry but not the work: checkpoints live on disk, so a resubmitted
run with the same spec resumes where the dead one stopped.
"""

from __future__ import annotations

import threading
import uuid
from typing import Dict, List, Optional, Tuple

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .enumeration import count_blocks
from .explicit_bounds import SignatureSpec
from .pipeline import (ConfigError, RunReport, SearchSpec, bounds_table,
                       estimated_cost, plan_cells, run_search)
from .verify import CandidatePolynomial, verify_candidate


class BoundsRequest(BaseModel):
    degree: int
    r1: int
    r2: int
    norms: List[int] = []


class BoundsRow(BaseModel):
    norm: int  # 0 = unconditional
    y_opt: float
    rhs: float
    implied_bound: float


class SpecRequest(BaseModel):
    """SearchSpec over the wire; field names match the config keys."""

    degree: int
    r1: int
    r2: int
    disc_bound: int
    excluded_norms: List[int] = []
    eval_range: Optional[List[int]] = None
    s1_values: Optional[List[int]] = None
    a_n_max: Optional[int] = None
    parity_values: List[int] = [0, 1]
    workers: int = 1
    checkpoint_interval: int = 5_000_000
    output_path: str = "fieldscan_report.txt"
    checkpoint_path: str = "fieldscan_checkpoint.json"

    def to_spec(self) -> SearchSpec:
        spec_fields = set(SearchSpec.__dataclass_fields__)
        data = {k: v for k, v in self.model_dump().items() if k in spec_fields}
        try:
            return SearchSpec(**data)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc))


class PlanRequest(SpecRequest):
    include_blocks: bool = False


class PlanCell(BaseModel):
    cell_id: str
    s1: int
    a_n: int
    parity_c: int
    estimated_cost: float
    total_blocks: Optional[int] = None


class VerifyRequest(BaseModel):
    """Stand-alone verification of monic polynomials.

    Each polynomial is a dense coefficient list with the leading 1 included
    (the export-file format), descending powers.
    """

    degree: int
    r1: int
    r2: int
    disc_bound: int
    polynomials: List[List[int]]


class VerifyVerdict(BaseModel):
    coeffs: List[int]
    verdict: str
    detail: str
    field_disc: Optional[int] = None
    poly_disc: Optional[int] = None
    signature: Optional[Tuple[int, int]] = None


class RunStatus(BaseModel):
    run_id: str
    state: str                     # queued | running | complete | interrupted | failed
    chunks_done: int
    chunks_total: Optional[int]
    error: Optional[str] = None
    min_abs_field_disc: Optional[int] = None


class _Job:
    def __init__(self, run_id: str, spec: SearchSpec):
        self.run_id = run_id
        self.spec = spec
        self.state = "queued"
        self.chunks_done = 0
        self.chunks_total: Optional[int] = None
        self.error: Optional[str] = None
        self.report: Optional[RunReport] = None
        self.thread: Optional[threading.Thread] = None

    def status(self) -> RunStatus:
        return RunStatus(
            run_id=self.run_id, state=self.state,
            chunks_done=self.chunks_done, chunks_total=self.chunks_total,
            error=self.error,
            min_abs_field_disc=(self.report.min_abs_field_disc
                                if self.report and self.report.complete else None))


def create_app() -> FastAPI:
    app = FastAPI(title="fieldscan",
                  description="number-field search: bounds, enumeration, verification")
    jobs: Dict[str, _Job] = {}
    lock = threading.Lock()

    @app.post("/bounds", response_model=List[BoundsRow])
    def bounds(req: BoundsRequest):
        try:
            sig = SignatureSpec(req.degree, req.r1, req.r2)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return [BoundsRow(norm=q, y_opt=y, rhs=r, implied_bound=b)
                for q, y, r, b in bounds_table(sig, req.norms)]

    @app.post("/plan", response_model=List[PlanCell])
    def plan(req: PlanRequest):
        spec = req.to_spec()
        try:
            cells = plan_cells(spec)
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return [PlanCell(cell_id=c.cell_id, s1=c.s1, a_n=c.a_n,
                         parity_c=c.parity_c, estimated_cost=estimated_cost(c),
                         total_blocks=count_blocks(c) if req.include_blocks else None)
                for c in cells]

    @app.post("/verify", response_model=List[VerifyVerdict])
    def verify(req: VerifyRequest):
        out = []
        for dense in req.polynomials:
            if not dense or dense[0] != 1 or len(dense) != req.degree + 1:
                out.append(VerifyVerdict(coeffs=dense, verdict="rejected",
                                         detail="not monic of the stated degree"))
                continue
            try:
                cand = CandidatePolynomial(req.degree, tuple(dense[1:]), "cli")
            except ValueError as exc:
                out.append(VerifyVerdict(coeffs=dense, verdict="rejected",
                                         detail=str(exc)))
                continue
            verdict, payload = verify_candidate(cand, req.degree, req.r1,
                                                req.r2, req.disc_bound)
            if verdict == "accepted":
                out.append(VerifyVerdict(
                    coeffs=dense, verdict=verdict, detail="",
                    field_disc=payload.field_disc, poly_disc=payload.poly_disc,
                    signature=payload.signature))
            elif verdict == "unresolved":
                out.append(VerifyVerdict(
                    coeffs=dense, verdict=verdict,
                    detail=f"field disc in [{payload.lo}, {payload.hi}]",
                    poly_disc=payload.poly_disc))
            else:
                out.append(VerifyVerdict(coeffs=dense, verdict=verdict,
                                         detail=payload))
        return out

    def _launch(job: _Job) -> None:
        def work():
            job.state = "running"
            try:
                cells = plan_cells(job.spec)
                from .pipeline import Checkpoint
                cp = Checkpoint.load_or_create(job.spec, cells)
                job.chunks_total = sum(len(e["chunks"]) for e in cp.cells)
                job.chunks_done = job.chunks_total - len(cp.pending_chunks())

                def tick(ci, ki):
                    job.chunks_done += 1

                report = run_search(job.spec, progress=tick)
                job.report = report
                job.state = "complete" if report.complete else "interrupted"
            except ConfigError as exc:
                job.state = "failed"
                job.error = f"config: {exc}"
            except Exception as exc:  # surfaced through /runs/{id}, not lost in a thread
                job.state = "failed"
                job.error = repr(exc)

        job.thread = threading.Thread(target=work, daemon=True)
        job.thread.start()

    @app.post("/runs", response_model=RunStatus, status_code=202)
    def create_run(req: SpecRequest):
        spec = req.to_spec()
        run_id = uuid.uuid4().hex[:12]
        job = _Job(run_id, spec)
        with lock:
            jobs[run_id] = job
        _launch(job)
        return job.status()

    def _get(run_id: str) -> _Job:
        with lock:
            job = jobs.get(run_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"no run {run_id}")
        return job

    @app.get("/runs/{run_id}", response_model=RunStatus)
    def run_status(run_id: str):
        return _get(run_id).status()

    @app.get("/runs", response_model=List[RunStatus])
    def list_runs():
        with lock:
            return [job.status() for job in jobs.values()]

    @app.get("/runs/{run_id}/report")
    def run_report(run_id: str):
        job = _get(run_id)
        if job.state != "complete" or job.report is None:
            raise HTTPException(status_code=409,
                                detail=f"run {run_id} is {job.state}, not complete")
        from .pipeline import _report_json
        return _report_json(job.report)

    @app.post("/runs/{run_id}/resume", response_model=RunStatus, status_code=202)
    def resume_run(run_id: str):
        job = _get(run_id)
        if job.state == "running":
            raise HTTPException(status_code=409, detail="already running")
        _launch(job)
        return job.status()

    return app


app = create_app()
