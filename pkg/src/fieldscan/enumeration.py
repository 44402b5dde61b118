"""Exhaustive enumeration of candidate minimal polynomials.

Candidates are monic integer polynomials x^n + a_1 x^(n-1) + ... + a_n whose
root power sums S_m obey the Hunter-Pohst boxes |S_m| <= U_m.  Rather than
looping over coefficients, the search walks power sums: once a_1..a_{m-1} and
S_1..S_{m-1} are fixed, Newton's identity forces S_m into one congruence
class mod m (so that a_m comes out an integer), and the walk visits exactly
the values of that class inside the box, from the top down.  The last level
additionally locks the parity of p(1) to the cell's parity bit and therefore
steps by 2(n-1), halving the innermost work.

A *cell* fixes (trace s1, signed constant coefficient a_n, parity bit); cells
partition the candidate space and are independently enumerable, which is the
unit of parallelism and checkpointing upstream.  Within a cell, work is
further split into *blocks*: one block per assignment of the outer levels
2..n-3 (the grid of the two innermost levels is what a block enumerates).

Each full coefficient vector then runs a battery of cheap arithmetic filters.
The battery is a pure conjunction, so its order cannot change the surviving
set; it is applied cheapest-first, which here means:

  1. reciprocal-root sums: |a_{n-1}| <= U_{-1} |a_n| and
     |a_{n-1}^2 - 2 a_{n-2} a_n| <= U_{-2} a_n^2 (exact integers; the first
     half depends on a_{n-1} alone, so the vectorized engine applies it as a
     row window and never materializes the rows it kills);
  2. p(1): bounded by ((T - 2 S_1)/n + 1)^(n/2), nonzero, norm-admissible;
  3. p(-1): same with the mirrored cap ((T + 2 S_1)/n + 1)^(n/2);
  4. p(+-k) nonzero and norm-admissible for small k >= 2;
  5. the full Newton value S_n within [-U_n, U_n].

Norm-admissibility against the excluded prime-power set is periodic: whether
an excluded p^j rejects v depends only on v mod p^(j+1), so one boolean table
of period lcm(p^(j+1)) answers every test with a single index.

Two interchangeable engines produce identical streams: a pure-Python
reference built from the public single-step operations, and a numpy engine
that vectorizes the two innermost levels block by block (falling back to
exact Python arithmetic whenever an int64 overflow cannot be ruled out).
All bookkeeping is in arbitrary-precision integers; floats only ever enter
through the precomputed bound caps, always on the permissive side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .explicit_bounds import prime_power
from .hp_bounds import BoundsSet
from .verify import CandidatePolynomial

__all__ = [
    "Exhausted",
    "EXHAUSTED",
    "EnumCell",
    "EnumState",
    "CellStats",
    "DISCARD_KEYS",
    "init_level",
    "parity_adjust",
    "step3_filter",
    "advance",
    "cell_state",
    "iter_prefixes",
    "count_blocks",
    "run_cell",
    "stream_line",
]


class Exhausted:
    """Sentinel: the descent has no further states."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Exhausted"


EXHAUSTED = Exhausted()

# filter names, in evaluation order (cheapest first)
DISCARD_KEYS = ("reciprocal_sums", "p_plus_one", "p_minus_one",
                "small_arguments", "power_sum_n")

# magnitude ceiling for the vectorized engine: every intermediate must stay
# below 2^52 so that int64 arithmetic is exact AND comparisons against float
# caps cannot round (Python compares int to float exactly; float64 only
# represents integers exactly up to 2^53)
_INT64_SAFE = 2 ** 52


@dataclass
class CellStats:
    """Running counters for one cell (or an aggregation of cells)."""

    generated: int = 0
    discarded: Dict[str, int] = field(
        default_factory=lambda: {k: 0 for k in DISCARD_KEYS})
    passed: int = 0
    blocks: int = 0

    def merge(self, other: "CellStats") -> None:
        self.generated += other.generated
        self.passed += other.passed
        self.blocks += other.blocks
        for k in DISCARD_KEYS:
            self.discarded[k] += other.discarded[k]

    @property
    def discarded_total(self) -> int:
        return sum(self.discarded.values())

    def conserved(self) -> bool:
        return self.generated == self.passed + self.discarded_total

    def as_dict(self) -> dict:
        return {"generated": self.generated, "passed": self.passed,
                "blocks": self.blocks, "discarded": dict(self.discarded)}

    @classmethod
    def from_dict(cls, d: dict) -> "CellStats":
        st = cls(generated=d["generated"], passed=d["passed"], blocks=d["blocks"])
        st.discarded.update(d["discarded"])
        return st


@dataclass(frozen=True)
class EnumCell:
    """One unit of the search-space partition: (trace, signed norm, parity)."""

    spec: object  # anything with .excluded_norms and .eval_range; may be None
    s1: int
    a_n: int
    parity_c: int
    bounds: BoundsSet

    def __post_init__(self):
        n = self.bounds.n
        if not (0 <= self.s1 <= n / 2):
            raise ValueError(f"s1={self.s1} outside [0, {n/2}]")
        if self.s1 != self.bounds.s1:
            raise ValueError("cell trace disagrees with its bounds")
        if abs(self.a_n) != self.bounds.N or self.a_n == 0:
            raise ValueError("|a_n| must equal the bounds' norm N")
        if self.parity_c not in (0, 1):
            raise ValueError("parity_c must be 0 or 1")

    @property
    def n(self) -> int:
        return self.bounds.n

    @property
    def cell_id(self) -> str:
        return f"s{self.s1}_an{self.a_n}_c{self.parity_c}"

    @property
    def excluded_norms(self) -> frozenset:
        if self.spec is None:
            return frozenset()
        return frozenset(getattr(self.spec, "excluded_norms", ()) or ())

    @property
    def eval_ks(self) -> Tuple[int, ...]:
        ks = None
        if self.spec is not None:
            ks = getattr(self.spec, "eval_range", None)
        if ks is None:
            ks = range(2, (5 * self.n) // 8 + 1)
        return tuple(int(k) for k in ks)


@dataclass
class EnumState:
    """Mutable descent state: power sums, coefficients, and per-level walls.

    Keys of the maps are the level index m.  S, a cover the populated levels
    (a also holds the fixed a_1 = -s1 and a_n); k holds the forced residue
    class of S_m mod m and L the lowest admissible S_m in that class; U maps
    each level to its box cap (from the cell's BoundsSet).
    """

    n: int
    parity_c: int
    S: Dict[int, int]
    a: Dict[int, int]
    U: Dict[int, float] = field(default_factory=dict)
    k: Dict[int, int] = field(default_factory=dict)
    L: Dict[int, int] = field(default_factory=dict)
    level: int = 0


def _floor_ok(state: EnumState, m: int) -> bool:
    # level 2 carries the extra trace-dependent margin in its stopping rule
    if m == 2:
        n = state.n
        return n * state.S[2] >= n * state.L[2] + 2 * state.a[1] ** 2
    return state.S[m] >= state.L[m]


def init_level(state: EnumState, m: int) -> EnumState:
    """Set level m to the largest box value in its forced congruence class.

    Computes k_m = (-sum_{i<m} a_i S_{m-i}) mod m, puts S_m at the top of the
    class inside [-U_m, U_m], derives the exact integer a_m, and records the
    class floor L_m.  The level may be born exhausted (S_m below the wall);
    callers detect that and carry.
    """
    base = sum(state.a[i] * state.S[m - i] for i in range(1, m))
    k = (-base) % m
    U = state.U[m]
    S_m = m * math.floor((U - k) / m) + k
    state.k[m] = k
    state.S[m] = S_m
    state.a[m] = -(S_m + base) // m
    state.L[m] = -m * math.floor((U - (m - k)) / m) - (m - k)
    state.level = m
    return state


def parity_adjust(state: EnumState, c: int) -> EnumState:
    """Force p(1) = c (mod 2) by nudging the last free coefficient once.

    Idempotent; stepping a_{n-1} by 2 afterwards preserves the parity.  May
    push S_{n-1} below its wall, which the caller treats as an instant carry.
    """
    n = state.n
    p1 = 1 + sum(state.a[i] for i in range(1, n + 1))
    if (p1 - c) % 2:
        state.a[n - 1] += 1
        state.S[n - 1] -= n - 1
    return state


def _settle(state: EnumState, j_start: int) -> bool:
    """(Re)initialize levels j_start..n-1 top-down, carrying on walls.

    Returns True when the state rests on a valid full assignment, False when
    the whole cell is exhausted.
    """
    n = state.n
    j = j_start
    while True:
        born = 0
        for jj in range(j, n):
            init_level(state, jj)
            if not _floor_ok(state, jj):
                born = jj
                break
        if not born:
            parity_adjust(state, state.parity_c)
            if _floor_ok(state, n - 1):
                state.level = n - 1
                return True
            born = n - 1
        # carry into the level above the exhausted one
        m = born - 1
        while m >= 2:
            state.a[m] += 1
            state.S[m] -= m
            if _floor_ok(state, m):
                break
            m -= 1
        if m < 2:
            return False
        j = m + 1


def advance(state: EnumState):
    """One descent step: innermost move, carrying and re-initializing on walls.

    Returns the mutated state, or EXHAUSTED when level 2 falls below its
    stopping value L_2 + 2 a_1^2 / n (compared in exact integers).
    """
    n = state.n
    if n == 2:
        return EXHAUSTED
    q = n - 1
    state.a[q] += 2
    state.S[q] -= 2 * q
    if _floor_ok(state, q):
        return state
    m = n - 2
    while m >= 2:
        state.a[m] += 1
        state.S[m] -= m
        if _floor_ok(state, m):
            break
        m -= 1
    if m < 2:
        return EXHAUSTED
    return state if _settle(state, m + 1) else EXHAUSTED


def cell_state(cell: EnumCell):
    """Initial EnumState of a cell, or EXHAUSTED if the cell is empty."""
    n = cell.n
    state = EnumState(n=n, parity_c=cell.parity_c,
                      S={1: cell.s1}, a={1: -cell.s1, n: cell.a_n},
                      U=dict(cell.bounds.U))
    if n == 2:
        p1 = 1 + state.a[1] + state.a[2]
        return state if p1 % 2 == cell.parity_c else EXHAUSTED
    init_level(state, 2)
    if not _floor_ok(state, 2):
        return EXHAUSTED
    return state if _settle(state, 3) else EXHAUSTED


# ---------------------------------------------------------------------------
# The filter battery

def _excluded_map(excluded: Iterable[int]) -> Dict[int, frozenset]:
    by_prime: Dict[int, set] = {}
    for q in excluded:
        pp = prime_power(q)
        if pp is None:
            raise ValueError(f"excluded norm {q} is not a prime power >= 2")
        by_prime.setdefault(pp[0], set()).add(pp[1])
    return {p: frozenset(js) for p, js in by_prime.items()}


class _Admissible:
    """Norm-admissibility test for one excluded-norm set, precomputed.

    An excluded norm p^j rejects v exactly when v_p(|v|) = j, and that is
    determined by v mod p^(j+1) (a residue divisible by p^j but not p^(j+1)
    pins the valuation; anything deeper exceeds j).  All the excluded norms
    together therefore reduce to one boolean table with period
    M = lcm(p^(j_max+1)); v is admissible iff table[v % M].  Absurdly large
    excluded norms (M > 2^20) fall back to direct valuation loops.
    """

    __slots__ = ("by_prime", "period", "table", "table_np")

    _PERIOD_CAP = 1 << 20

    def __init__(self, excluded: Iterable[int]):
        self.by_prime = _excluded_map(excluded)
        period = 1
        for p, js in self.by_prime.items():
            period = math.lcm(period, p ** (max(js) + 1))
        if not self.by_prime or period > self._PERIOD_CAP:
            self.period = 0
            self.table = None
            self.table_np = None
            return
        r = np.arange(period, dtype=np.int64)
        tab = np.ones(period, dtype=bool)
        for p, js in self.by_prime.items():
            for j in js:
                tab &= ~((r % p ** j == 0) & (r % p ** (j + 1) != 0))
        self.period = period
        self.table_np = tab
        self.table = tab.tolist()

    def ok_int(self, v: int) -> bool:
        if self.period:
            return self.table[v % self.period]
        if v == 0:
            return True
        v = abs(v)
        for p, js in self.by_prime.items():
            if v % p:
                continue
            w, val = v, 0
            while w % p == 0:
                w //= p
                val += 1
            if val in js:
                return False
        return True

    def ok_vec(self, vals: np.ndarray) -> np.ndarray:
        if self.period:
            return self.table_np[vals % self.period]
        ok = np.ones(vals.shape, dtype=bool)
        if not self.by_prime:
            return ok
        av = np.abs(vals)
        for p, js in self.by_prime.items():
            w = av.copy()
            v = np.zeros(vals.shape, dtype=np.int64)
            m = (w > 0) & (w % p == 0)
            while m.any():
                w[m] //= p
                v[m] += 1
                m[m] = w[m] % p == 0
            bad = np.zeros(vals.shape, dtype=bool)
            for j in js:
                bad |= v == j
            ok &= ~bad
        return ok


def _poly_eval(n: int, a: Sequence[int], x: int) -> int:
    # a is 1-indexed: a[0] unused, coefficients a[1..n]; Horner on ints
    v = 1
    for i in range(1, n + 1):
        v = v * x + a[i]
    return v


def _step3_reason(n: int, a: Sequence[int], S: Sequence[int], bounds: BoundsSet,
                  adm: _Admissible, eval_ks: Sequence[int]) -> int:
    """0 if the candidate survives, else the 1-based index of the first
    failing condition in DISCARD_KEYS order."""
    T = bounds.T
    s1 = S[1]
    an = a[n]
    an1 = a[n - 1]
    an2 = a[n - 2] if n >= 3 else 1
    if abs(an1) > bounds.U[-1] * abs(an) or \
            abs(an1 * an1 - 2 * an2 * an) > bounds.U[-2] * an * an:
        return 1
    p1 = _poly_eval(n, a, 1)
    cap1 = ((T - 2 * s1) / n + 1) ** (n / 2)
    if abs(p1) > cap1 or p1 == 0 or not adm.ok_int(p1):
        return 2
    pm1 = _poly_eval(n, a, -1)
    capm = ((T + 2 * s1) / n + 1) ** (n / 2)
    if abs(pm1) > capm or pm1 == 0 or not adm.ok_int(pm1):
        return 3
    for kk in eval_ks:
        pk = _poly_eval(n, a, kk)
        if pk == 0 or not adm.ok_int(pk):
            return 4
        pk = _poly_eval(n, a, -kk)
        if pk == 0 or not adm.ok_int(pk):
            return 4
    s_n = -n * an - sum(a[i] * S[n - i] for i in range(1, n))
    if not (-bounds.U[n] <= s_n <= bounds.U[n]):
        return 5
    return 0


def step3_filter(state: EnumState, bounds: BoundsSet, excluded: Iterable[int] = (),
                 eval_range: Optional[Iterable[int]] = None) -> bool:
    """Keep/discard predicate over a fully populated state (pure)."""
    n = state.n
    a = [0] + [state.a[i] for i in range(1, n + 1)]
    S = [0] + [state.S[m] for m in range(1, n)]
    adm = _Admissible(excluded)
    if eval_range is None:
        eval_range = range(2, (5 * n) // 8 + 1)
    ks = tuple(int(k) for k in eval_range)
    return _step3_reason(n, a, S, bounds, adm, ks) == 0


# ---------------------------------------------------------------------------
# Block decomposition: outer levels 2..n-3 walked in Python, inner two levels
# enumerated per block

def _iter_prefixes_raw(cell: EnumCell) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
    n = cell.n
    if n <= 4:
        yield ({1: cell.s1}, {1: -cell.s1, n: cell.a_n})
        return
    top = n - 3
    state = EnumState(n=n, parity_c=cell.parity_c,
                      S={1: cell.s1}, a={1: -cell.s1, n: cell.a_n},
                      U=dict(cell.bounds.U))

    def settle_prefix(j_start: int) -> bool:
        j = j_start
        while True:
            born = 0
            for jj in range(j, top + 1):
                init_level(state, jj)
                if not _floor_ok(state, jj):
                    born = jj
                    break
            if not born:
                return True
            m = born - 1
            while m >= 2:
                state.a[m] += 1
                state.S[m] -= m
                if _floor_ok(state, m):
                    break
                m -= 1
            if m < 2:
                return False
            j = m + 1

    init_level(state, 2)
    if not _floor_ok(state, 2):
        return
    if top >= 3 and not settle_prefix(3):
        return
    while True:
        yield dict(state.S), dict(state.a)
        m = top
        while m >= 2:
            state.a[m] += 1
            state.S[m] -= m
            if _floor_ok(state, m):
                break
            m -= 1
        if m < 2:
            return
        if m < top and not settle_prefix(m + 1):
            return


def iter_prefixes(cell: EnumCell) -> Iterator[Tuple[Dict[int, int], Dict[int, int]]]:
    """Deterministic walk over the cell's blocks (outer-level assignments)."""
    return _iter_prefixes_raw(cell)


def count_blocks(cell: EnumCell) -> int:
    return sum(1 for _ in _iter_prefixes_raw(cell))


# ---------------------------------------------------------------------------
# Per-block enumeration of the two innermost levels

def _grid_setup(cell: EnumCell, S_pre: Dict[int, int], a_pre: Dict[int, int]):
    """Column layer (level n-2) of a block, in exact Python integers.

    Returns None when the block is empty, else
    (P, Q, basP, SPmax, LP, ncols, basQ_fixed) with LP already carrying the
    level-2 stopping margin when n = 4.
    """
    n = cell.n
    U = cell.bounds.U
    P, Q = n - 2, n - 1
    basP = sum(a_pre[i] * S_pre[P - i] for i in range(1, P))
    kP = (-basP) % P
    SPmax = P * math.floor((U[P] - kP) / P) + kP
    LP = -P * math.floor((U[P] - (P - kP)) / P) - (P - kP)
    if P == 2:
        a1 = a_pre[1]
        LP += 2 * ((a1 * a1 + n - 1) // n)
    if SPmax < LP:
        return None
    ncols = (SPmax - LP) // P + 1
    basQ_fixed = sum(a_pre[i] * S_pre[Q - i] for i in range(2, n - 2))
    return P, Q, basP, SPmax, LP, ncols, basQ_fixed


def _emit(n: int, coeffs: Tuple[int, ...], cell_id: str, raw: bool):
    if raw:
        return coeffs
    return CandidatePolynomial(n=n, coeffs=coeffs, cell_id=cell_id)


def _run_block_python(cell: EnumCell, S_pre: Dict[int, int], a_pre: Dict[int, int],
                      stats: CellStats, adm: _Admissible,
                      eval_ks: Sequence[int], raw: bool = False) -> list:
    n = cell.n
    bounds = cell.bounds
    U = bounds.U
    out: list = []
    a = [0] * (n + 1)
    S = [0] * n
    for i, v in a_pre.items():
        a[i] = v
    for m, v in S_pre.items():
        S[m] = v

    if n == 3:
        # single free level, parity-locked
        Q = 2
        basQ = a[1] * S[1]
        kQ = (-basQ) % Q
        SQ = Q * math.floor((U[Q] - kQ) / Q) + kQ
        LQ = -Q * math.floor((U[Q] - (Q - kQ)) / Q) - (Q - kQ)
        LQ += 2 * ((a[1] * a[1] + n - 1) // n)
        aQ = -(SQ + basQ) // Q
        if (1 + a[1] + aQ + a[n] - cell.parity_c) % 2:
            aQ += 1
            SQ -= Q
        while SQ >= LQ:
            a[2], S[2] = aQ, SQ
            stats.generated += 1
            r = _step3_reason(n, a, S, bounds, adm, eval_ks)
            if r:
                stats.discarded[DISCARD_KEYS[r - 1]] += 1
            else:
                stats.passed += 1
                out.append(_emit(n, tuple(a[1:]), cell.cell_id, raw))
            aQ += 2
            SQ -= 2 * Q
        return out

    grid = _grid_setup(cell, S_pre, a_pre)
    if grid is None:
        return out
    P, Q, basP, SPmax, LP, ncols, basQ_fixed = grid
    # |a_{n-1}| window from the first reciprocal-sum test; rows outside it
    # are counted in bulk (they all fail that test first, whatever else holds)
    R1 = math.floor(U[-1] * abs(a[n]))
    parity_fix = 1 + a[1] + sum(a_pre.get(i, 0) for i in range(2, n - 2)) + a[n]
    for j in range(ncols):
        SP = SPmax - P * j
        aP = -(SP + basP) // P
        a[P], S[P] = aP, SP
        basQ = a[1] * SP + aP * S[1] + basQ_fixed
        kQ = (-basQ) % Q
        SQ = Q * math.floor((U[Q] - kQ) / Q) + kQ
        LQ = -Q * math.floor((U[Q] - (Q - kQ)) / Q) - (Q - kQ)
        aQ = -(SQ + basQ) // Q
        if (parity_fix + aP + aQ - cell.parity_c) % 2:
            aQ += 1
            SQ -= Q
        nrows = (SQ - LQ) // (2 * Q) + 1 if SQ >= LQ else 0
        stats.generated += nrows
        tlo = max((-R1 - aQ + 1) // 2, 0)
        thi = min((R1 - aQ) // 2, nrows - 1)
        kept = max(thi - tlo + 1, 0)
        stats.discarded["reciprocal_sums"] += nrows - kept
        for t in range(tlo, tlo + kept):
            a[Q] = aQ + 2 * t
            S[Q] = SQ - 2 * Q * t
            r = _step3_reason(n, a, S, bounds, adm, eval_ks)
            if r:
                stats.discarded[DISCARD_KEYS[r - 1]] += 1
            else:
                stats.passed += 1
                out.append(_emit(n, tuple(a[1:]), cell.cell_id, raw))
    return out


def _run_block_numpy(cell: EnumCell, S_pre: Dict[int, int], a_pre: Dict[int, int],
                     stats: CellStats, adm: _Admissible,
                     eval_ks: Sequence[int], raw: bool = False) -> list:
    """Vectorized block enumeration; defers to the Python path when int64
    safety cannot be guaranteed a priori."""
    n = cell.n
    bounds = cell.bounds
    U = bounds.U
    grid = _grid_setup(cell, S_pre, a_pre)
    if grid is None:
        return []
    P, Q, basP, SPmax, LP, ncols, basQ_fixed = grid
    a1 = a_pre[1]
    s1 = S_pre[1]
    an = a_pre[n]

    # -- a-priori magnitude bounds (exact Python ints), for the overflow guard
    base_coeffs = [0] + [a_pre.get(i, 0) for i in range(1, n + 1)]  # aP, aQ = 0
    C_pref = 1 + sum(base_coeffs)
    Cm_pref = _poly_eval(n, base_coeffs, -1)
    maxSP = max(abs(SPmax), abs(LP))
    maxaP = max(abs(-(SPmax + basP) // P), abs(-(LP + basP) // P)) + 1
    maxbasQ = abs(a1) * maxSP + maxaP * abs(s1) + abs(basQ_fixed)
    maxSQ = int(U[Q]) + 4 * Q
    T = bounds.T
    cap1 = ((T - 2 * s1) / n + 1) ** (n / 2)
    capm = ((T + 2 * s1) / n + 1) ** (n / 2)
    M1, M3 = math.floor(cap1), math.floor(capm)
    R1 = math.floor(U[-1] * abs(an))    # row window: |a_{n-1}| <= U_{-1}|a_n|
    colaQ = (maxSQ + maxbasQ) // Q + 3  # |a_Q| over whole columns, pre-window
    maxaQ = min(colaQ, R1)              # materialized rows only
    max_a = {i: abs(a_pre[i]) for i in a_pre}
    max_a[P], max_a[Q] = maxaP, maxaQ
    max_S = {m: abs(S_pre[m]) for m in S_pre}
    max_S[P], max_S[Q] = maxSP, maxSQ
    worst = [
        maxbasQ, maxSQ + maxbasQ, colaQ,
        colaQ + R1 + 4,                        # window-intersection arithmetic
        abs(C_pref) + maxaP + maxaQ,           # p(1)
        abs(Cm_pref) + maxaP + maxaQ,          # p(-1)
        maxaQ * maxaQ + 2 * maxaP * abs(an),   # reciprocal-sum second test
        n * abs(an) + sum(max_a[i] * max_S[n - i] for i in range(1, n)),
    ]
    for kk in eval_ks:
        ck = max(abs(_poly_eval(n, base_coeffs, kk)),
                 abs(_poly_eval(n, base_coeffs, -kk)))
        worst.append(ck + maxaP * kk * kk + maxaQ * kk)
    if max(worst) >= _INT64_SAFE:
        return _run_block_python(cell, S_pre, a_pre, stats, adm, eval_ks, raw)

    # -- column layer
    SP = SPmax - P * np.arange(ncols, dtype=np.int64)
    aP = -(SP + basP) // P
    basQ = a1 * SP + aP * s1 + basQ_fixed
    kQ = (-basQ) % Q
    SQ = (Q * np.floor((U[Q] - kQ) / Q)).astype(np.int64) + kQ
    aQ = -(SQ + basQ) // Q
    LQ = (-Q * np.floor((U[Q] - (Q - kQ)) / Q)).astype(np.int64) - (Q - kQ)
    flip = (C_pref + aP + aQ - cell.parity_c) & 1
    aQ += flip
    SQ -= Q * flip
    tmax = np.where(SQ >= LQ, (SQ - LQ) // (2 * Q), -1)
    stats.generated += int((tmax + 1).sum())

    # -- row window from the first reciprocal-sum test: everything outside it
    # fails that test first, whatever else holds, so count it in bulk
    tlo = np.maximum((-R1 - aQ + 1) // 2, 0)
    thi = np.minimum((R1 - aQ) // 2, tmax)
    kept = np.maximum(thi - tlo + 1, 0)
    stats.discarded["reciprocal_sums"] += int(((tmax + 1) - kept).sum())
    total = int(kept.sum())
    if total == 0:
        return []

    cols = np.repeat(np.arange(ncols), kept)
    within = np.arange(total) - np.repeat(np.cumsum(kept) - kept, kept)
    t = within + np.repeat(tlo, kept)
    aQf = aQ[cols] + 2 * t
    SQf = SQ[cols] - 2 * Q * t
    aPf = aP[cols]
    SPf = SP[cols]

    def count_and_mask(alive, ok, key):
        fails = alive & ~ok
        stats.discarded[key] += int(fails.sum())
        return alive & ok

    alive = np.ones(total, dtype=bool)
    ok = np.abs(aQf * aQf - 2 * aPf * an) <= U[-2] * an * an
    alive = count_and_mask(alive, ok, "reciprocal_sums")

    p1 = C_pref + aPf + aQf
    ok = (np.abs(p1) <= M1) & (p1 != 0) & adm.ok_vec(p1)
    alive = count_and_mask(alive, ok, "p_plus_one")

    pm1 = Cm_pref + aPf - aQf
    ok = (np.abs(pm1) <= M3) & (pm1 != 0) & adm.ok_vec(pm1)
    alive = count_and_mask(alive, ok, "p_minus_one")

    if eval_ks:
        ok = np.ones(total, dtype=bool)
        for kk in eval_ks:
            pk = _poly_eval(n, base_coeffs, kk) + aPf * kk * kk + aQf * kk
            ok &= (pk != 0) & adm.ok_vec(pk)
            pk = _poly_eval(n, base_coeffs, -kk) + aPf * kk * kk - aQf * kk
            ok &= (pk != 0) & adm.ok_vec(pk)
        alive = count_and_mask(alive, ok, "small_arguments")

    Sn = np.full(total, -n * an, dtype=np.int64)
    for i in range(1, n):
        av = aPf if i == P else aQf if i == Q else a_pre[i]
        sv = SPf if n - i == P else SQf if n - i == Q else S_pre[n - i]
        Sn -= av * sv
    alive = count_and_mask(alive, (Sn >= -U[n]) & (Sn <= U[n]), "power_sum_n")

    stats.passed += int(alive.sum())
    idxs = np.flatnonzero(alive)
    if not idxs.size:
        return []
    head = tuple(a_pre.get(i, 0) for i in range(1, n - 2))
    cid = cell.cell_id
    ap_list = aPf[idxs].tolist()
    aq_list = aQf[idxs].tolist()
    return [_emit(n, head + (ap, aq, an), cid, raw)
            for ap, aq in zip(ap_list, aq_list)]


# ---------------------------------------------------------------------------
# Whole-cell drivers

def stream_line(cand: CandidatePolynomial) -> str:
    """One-line text form of a candidate: degree, a_1..a_n, cell id."""
    return f"{cand.n},{','.join(str(c) for c in cand.coeffs)},{cand.cell_id}"


def _run_cell_reference(cell: EnumCell, stats: CellStats, raw: bool = False) -> Iterator:
    adm = _Admissible(cell.excluded_norms)
    eval_ks = cell.eval_ks
    bounds = cell.bounds
    n = cell.n
    state = cell_state(cell)
    while state is not EXHAUSTED:
        stats.generated += 1
        a = [0] + [state.a[i] for i in range(1, n + 1)]
        S = [0] + [state.S[m] for m in range(1, n)]
        r = _step3_reason(n, a, S, bounds, adm, eval_ks)
        if r:
            stats.discarded[DISCARD_KEYS[r - 1]] += 1
        else:
            stats.passed += 1
            yield _emit(n, tuple(a[1:]), cell.cell_id, raw)
        state = advance(state)
    stats.blocks += count_blocks(cell)


def run_cell(cell: EnumCell, stats: Optional[CellStats] = None,
             engine: str = "auto",
             block_range: Optional[Tuple[int, int]] = None,
             raw: bool = False) -> Iterator:
    """Enumerate a cell's surviving candidates in deterministic order.

    engine: "auto" picks the vectorized path for n >= 4 and falls back to
    exact Python per block when int64 safety is in doubt; "python" forces the
    per-block exact path; "reference" drives the public single-step
    operations over the full state (no block_range support; used as the
    ground truth in tests).  block_range=(start, stop) restricts the run to
    that slice of the block walk, for checkpointed execution.  raw=True
    yields bare coefficient tuples instead of CandidatePolynomial records
    (statistics-only sweeps over very large cells).
    """
    if stats is None:
        stats = CellStats()
    if engine not in ("auto", "numpy", "python", "reference"):
        raise ValueError(f"unknown engine {engine!r}")
    if engine == "reference":
        if block_range is not None:
            raise ValueError("the reference engine cannot run partial cells")
        yield from _run_cell_reference(cell, stats, raw)
        return

    n = cell.n
    if n == 2:
        if block_range is not None and not (block_range[0] <= 0 < block_range[1]):
            return
        stats.blocks += 1
        a = [0, -cell.s1, cell.a_n]
        if (1 + a[1] + a[2]) % 2 == cell.parity_c:
            stats.generated += 1
            adm = _Admissible(cell.excluded_norms)
            r = _step3_reason(2, a, [0, cell.s1], cell.bounds, adm, cell.eval_ks)
            if r:
                stats.discarded[DISCARD_KEYS[r - 1]] += 1
            else:
                stats.passed += 1
                yield _emit(2, (a[1], a[2]), cell.cell_id, raw)
        return

    if engine == "numpy" and n < 4:
        raise ValueError("the vectorized engine needs degree >= 4")
    use_numpy = engine == "numpy" or (engine == "auto" and n >= 4)
    adm = _Admissible(cell.excluded_norms)
    eval_ks = cell.eval_ks
    start, stop = block_range if block_range is not None else (0, None)
    for bi, (S_pre, a_pre) in enumerate(_iter_prefixes_raw(cell)):
        if bi < start:
            continue
        if stop is not None and bi >= stop:
            return
        stats.blocks += 1
        if use_numpy:
            cands = _run_block_numpy(cell, S_pre, a_pre, stats, adm, eval_ks, raw)
        else:
            cands = _run_block_python(cell, S_pre, a_pre, stats, adm, eval_ks, raw)
        yield from cands
