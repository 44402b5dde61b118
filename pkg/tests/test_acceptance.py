"""Acceptance gate: one test (one pass/fail line under -v) per criterion.

Run as `pytest tests/test_acceptance.py -v`.  Every tolerance and time limit
is asserted inside the test that owns it.  Expected values were frozen
beforehand: published local-correction bounds for criterion 1, closed forms
for criterion 2, independent brute-force oracles for criteria 5 and 6, and
the archived single-cell slice for criterion 9.
"""

from __future__ import annotations

import hashlib
import json
import random
import signal
import subprocess
import sys
import time
from pathlib import Path
from types import SimpleNamespace

import numpy as np
import pytest

from fieldscan.enumeration import CellStats, EnumCell, run_cell
from fieldscan.explicit_bounds import SignatureSpec, bounds_table_rows
from fieldscan.hp_bounds import (BoundsSet, coeffs_to_power_sums,
                                 least_positive_root, power_sums_to_coeffs,
                                 u2_bound, um_bounds)
from fieldscan.pipeline import SearchSpec, run_search
from fieldscan.verify import (CandidatePolynomial, field_discriminant,
                              is_irreducible, poly_discriminant, signature)
from helpers import sample_feasible_points

DATA = Path(__file__).parent / "data"


def test_criterion_1_local_correction_table():
    published = {2: 11725962, 3: 8336752, 4: 6688609, 5: 5726300, 7: 4682934}
    t0 = time.perf_counter()
    rows = bounds_table_rows(SignatureSpec(8, 2, 3), list(published))
    elapsed = time.perf_counter() - t0
    for (norm, _y, _rhs, bound), want in zip(rows, published.values()):
        rel = abs(bound - want) / want
        assert rel < 0.01, f"norm {norm}: {bound} vs {want} ({rel:.2%})"
    assert elapsed < 10.0, f"table took {elapsed:.1f}s"


def test_criterion_2_u2_and_trivial_root_identity():
    want = 64 ** (1 / 7) * (5726300 / 8) ** (1 / 7)
    got = u2_bound(8, 0, 5726300)
    assert abs(got - want) / want < 1e-10  # 10 significant digits

    for n in range(3, 9):
        N = 2
        T = n * N ** (2 / n)  # N sits exactly at the cap (T/n)^(n/2)
        roots = {t: least_positive_root(n, t, N, T) for t in range(1, n)}
        ms = [-2, -1] + list(range(3, n + 1))
        U = um_bounds(n, N, T, roots, ms=ms)
        for m in ms:
            want_m = n * (T / n) ** (m / 2)
            assert abs(U[m] - want_m) / want_m < 1e-9, (n, m)


def test_criterion_3_domination_100k_points():
    t0 = time.perf_counter()
    cases = [(4, 10_000, 1), (4, 10_000, 6), (4, 40_000, 12),
             (5, 50_000, 1), (5, 50_000, 4), (5, 200_000, 8)]
    per_case = 100_000 // len(cases) + 1
    total = 0
    for n, disc, N in cases:
        bs = BoundsSet.compute(n=n, s1=0, disc_bound=disc, N=N)
        pts = sample_feasible_points(n, N, bs.T, count=per_case, seed=3000 + n + N)
        total += len(pts)
        for m, U in bs.U.items():
            tm = np.sum(pts ** float(m), axis=1)
            worst = float(tm.max())
            assert worst <= U * (1 + 1e-9), (n, N, m, worst, U)
    elapsed = time.perf_counter() - t0
    assert total >= 100_000
    assert elapsed < 60.0, f"domination sweep took {elapsed:.1f}s"


def test_criterion_4_newton_roundtrip_10k():
    rng = random.Random(4)
    for _ in range(10_000):
        n = rng.randint(1, 8)
        a = [rng.randint(-50, 50) for _ in range(n)]
        S = coeffs_to_power_sums(a, n)
        back = power_sums_to_coeffs(S, n)
        assert back == a, (a, S, back)


def test_criterion_5_cubic_end_to_end(tmp_path):
    t0 = time.perf_counter()
    spec = SearchSpec(degree=3, r1=1, r2=1, disc_bound=50,
                      output_path=str(tmp_path / "cubic.txt"),
                      checkpoint_path=str(tmp_path / "cubic.ckpt"))
    rep = run_search(spec)
    elapsed = time.perf_counter() - t0
    assert rep.complete and rep.conserved()
    assert {r.field_disc for r in rep.records} == {-23, -31, -44}
    for g in rep.groups:  # each disc arrives with verified generators
        assert g["members"] and all(m.field_disc == g["field_disc"]
                                    for m in g["members"])
    assert elapsed < 300.0, f"cubic search took {elapsed:.1f}s"


def test_criterion_6_quartic_end_to_end(tmp_path):
    t0 = time.perf_counter()
    spec = SearchSpec(degree=4, r1=2, r2=1, disc_bound=300,
                      output_path=str(tmp_path / "quartic.txt"),
                      checkpoint_path=str(tmp_path / "quartic.ckpt"))
    rep = run_search(spec)
    elapsed = time.perf_counter() - t0
    assert rep.complete and rep.conserved()
    assert rep.min_abs_field_disc == 275
    assert elapsed < 1800.0, f"quartic search took {elapsed:.1f}s"


def test_criterion_7_verifier_unit_table():
    P = lambda *co: CandidatePolynomial(len(co), co, "t")
    assert poly_discriminant(P(0, 1)) == -4
    assert poly_discriminant(P(0, -1, -1)) == -23
    assert poly_discriminant(P(0, -3, 1)) == 81
    assert signature(P(0, 1)) == (0, 1)
    assert signature(P(0, -1, -1)) == (1, 1)
    assert signature(P(0, -3, 1)) == (3, 0)
    assert is_irreducible(P(0, -1)) is False
    assert is_irreducible(P(0, 0, 0, 4)) is False   # sieve alone must not pass x^4+4
    assert is_irreducible(P(0, -1, -1)) is True
    assert field_discriminant(P(0, 1)) == (-4, 1)
    assert field_discriminant(P(0, -5)) == (5, 4)   # index 2 at q=2
    assert field_discriminant(P(0, -1, -1)) == (-23, 1)


def _run_cli(cfg_dir, timeout=180):
    return subprocess.run(
        [sys.executable, "-m", "fieldscan.cli", "run", "--config", "kr.cfg",
         "--quiet"],
        cwd=cfg_dir, capture_output=True, text=True, timeout=timeout)


def _table_bytes(path):
    # elapsed_seconds is wall-clock and legitimately differs between runs
    return "\n".join(l for l in Path(path).read_text().splitlines()
                     if not l.startswith("elapsed_seconds"))


def test_criterion_8_randomized_kill_resume(tmp_path):
    cfg = ("degree = 5\nr1 = 1\nr2 = 2\ndisc_bound = 1800\n"
           "checkpoint_interval = 30\n"
           "output_path = kr.txt\ncheckpoint_path = kr.ckpt\n")
    ref_dir = tmp_path / "ref"
    ref_dir.mkdir()
    (ref_dir / "kr.cfg").write_text(cfg)
    proc = _run_cli(ref_dir)
    assert proc.returncode == 0, proc.stderr
    reference = _table_bytes(ref_dir / "kr.txt")

    kill_dir = tmp_path / "kill"
    kill_dir.mkdir()
    (kill_dir / "kr.cfg").write_text(cfg)
    rng = random.Random(8)
    kills = 0
    finished = False
    for attempt in range(6):
        delay = rng.uniform(1.5, 6.0)
        p = subprocess.Popen(
            [sys.executable, "-m", "fieldscan.cli", "run", "--config", "kr.cfg",
             "--quiet"],
            cwd=kill_dir, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
        try:
            rc = p.wait(timeout=delay)
        except subprocess.TimeoutExpired:
            p.send_signal(signal.SIGKILL)
            p.wait()
            kills += 1
            continue
        if rc == 0:
            finished = True
            break
        pytest.fail(f"killed-run attempt exited with unexpected code {rc}")
    assert kills >= 1, "no attempt was actually interrupted; test proved nothing"
    if not finished:
        # the randomized rounds never got a long enough window; finish
        # cleanly from whatever checkpoint the last kill left behind
        assert (kill_dir / "kr.ckpt").exists()
        proc = _run_cli(kill_dir)
        assert proc.returncode == 0, proc.stderr
    assert _table_bytes(kill_dir / "kr.txt") == reference


def test_criterion_9_degree8_slice_statistics():
    """Full-scale claims are not desk-gated; the archived single-cell slice
    (s1=0, a_8=-1, c=1) is the feasibility evidence.  Re-enumerate its first
    3000 blocks and require exact agreement with the archive, then report
    the completed cell's statistics."""
    art = json.loads((DATA / "degree8_slice.json").read_text())
    assert art["complete"] is True

    full = art["full"]["stats"]
    conserved = full["generated"] == full["passed"] + sum(full["discarded"].values())
    assert conserved
    assert full["blocks"] == art["total_blocks"]

    cell_cfg = art["cell"]
    spec = SimpleNamespace(excluded_norms=tuple(cell_cfg["excluded_norms"]),
                           eval_range=tuple(cell_cfg["eval_ks"]))
    bounds = BoundsSet.compute(cell_cfg["degree"], cell_cfg["s1"],
                               cell_cfg["disc_bound"], abs(cell_cfg["a_n"]))
    cell = EnumCell(spec=spec, s1=cell_cfg["s1"], a_n=cell_cfg["a_n"],
                    parity_c=cell_cfg["parity_c"], bounds=bounds)
    assert cell.cell_id == art["cell_id"]

    lo, hi = art["check_range"]["blocks"]
    stats = CellStats()
    sha = hashlib.sha256()
    count = 0
    for tup in run_cell(cell, stats, engine="numpy", block_range=(lo, hi),
                        raw=True):
        sha.update((",".join(map(str, tup)) + "\n").encode())
        count += 1
    assert stats.as_dict() == art["check_range"]["stats"]
    assert count == art["check_range"]["survivors"]
    assert sha.hexdigest() == art["check_range"]["survivor_sha256"]

    print(f"\ndegree-8 slice {art['cell_id']}: {art['total_blocks']} blocks, "
          f"generated {full['generated']}, passed {full['passed']}, "
          f"discards {full['discarded']}, "
          f"{art['full']['runtime_seconds']:.1f}s archived runtime")
