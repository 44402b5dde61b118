"""Hunter-Pohst bounds and Newton-identity conversions.

For an algebraic integer alpha generating a field of degree n with
|disc| <= D, a suitable translate of alpha satisfies

    0 <= Tr(alpha) <= n/2   and   T2(alpha) <= Tr(alpha)^2/n + gamma_{n-1} (D/n)^(1/(n-1)) =: U2,

where T2 is the sum of squared absolute values of the conjugates and
gamma_{n-1} is a Hermite constant.  Feeding T := U2 and the norm modulus
N := |N(alpha)| into the constrained maximization of sum |x_i|^m over

    { x_i >= 0,  sum x_i^2 <= T,  prod x_i = N }

gives bounds U_m for every absolute power sum T_m(alpha) (m != 0, 2): the
maximum is attained at a point with at most two distinct coordinates, t of
one value and n-t of another, the smaller being the least positive root of

    t (u^(t-n) N)^(2/t) + (n-t) u^2 - T = 0.

Power sums S_m = sum alpha_i^m satisfy |S_m| <= T_m <= U_m and are tied to
the minimal-polynomial coefficients by Newton's identities — the engine room
of the coefficient enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

__all__ = [
    "HermiteTable",
    "BoundsSet",
    "u2_bound",
    "least_positive_root",
    "um_bounds",
    "coeffs_to_power_sums",
    "power_sums_to_coeffs",
    "negative_power_sums",
]

# Exact values of the Hermite constants gamma_p, p = 1..8 (the only
# dimensions where they are known exactly; Blichfeldt for 4..8).  Any valid
# upper bound would keep the search complete, so hard-coding the classical
# values is safe.
_HERMITE_EXACT = {
    1: 1.0,
    2: (4.0 / 3.0) ** 0.5,
    3: 2.0 ** (1.0 / 3.0),
    4: 2.0 ** 0.5,
    5: 8.0 ** (1.0 / 5.0),
    6: (64.0 / 3.0) ** (1.0 / 6.0),
    7: 64.0 ** (1.0 / 7.0),
    8: 2.0,
}


@dataclass(frozen=True)
class HermiteTable:
    gamma: Mapping[int, float] = field(default_factory=lambda: dict(_HERMITE_EXACT))

    def __getitem__(self, p: int) -> float:
        try:
            return self.gamma[p]
        except KeyError:
            raise KeyError(f"no Hermite constant for dimension {p}") from None


def u2_bound(n: int, s1: int, disc_bound: int, hermite: HermiteTable | None = None) -> float:
    """U2 = s1^2/n + gamma_{n-1} * (disc_bound/n)^(1/(n-1))."""
    if hermite is None:
        hermite = HermiteTable()
    if not (0 <= s1 <= n / 2):
        raise ValueError(f"trace s1={s1} outside [0, {n/2}]")
    if disc_bound < 1:
        raise ValueError("disc_bound must be >= 1")
    return s1 * s1 / n + hermite[n - 1] * (disc_bound / n) ** (1.0 / (n - 1))


def _root_equation(u: float, n: int, t: int, N: int, T: float) -> float:
    return t * (u ** (t - n) * N) ** (2.0 / t) + (n - t) * u * u - T


def least_positive_root(n: int, t: int, N: int, T: float) -> float:
    """Least u > 0 with t*(u^(t-n)*N)^(2/t) + (n-t)*u^2 = T.

    The left side decreases from +inf to the minimum n*N^(2/n) at
    u* = N^(1/n) (independent of t), then increases; a root exists iff
    N <= (T/n)^(n/2), and the least one lies in (0, N^(1/n)].
    """
    if not (1 <= t <= n - 1):
        raise ValueError(f"t={t} outside [1, {n-1}]")
    if N < 1:
        raise ValueError("N must be a positive integer")
    cap = (T / n) ** (n / 2.0)
    if N > cap * (1.0 + 1e-12):
        raise ValueError(f"N={N} exceeds (T/n)^(n/2)={cap}: no root guaranteed")

    u_star = N ** (1.0 / n)
    f_star = _root_equation(u_star, n, t, N, T)
    if f_star >= -1e-12 * T:
        # tangent (or within noise of it): the minimum touches zero
        return u_star

    lo = u_star
    while _root_equation(lo, n, t, N, T) < 0:
        lo *= 0.5
        if lo < 1e-300:  # pragma: no cover - unreachable for valid input
            raise ArithmeticError("bracketing failed")
    hi = min(2.0 * lo, u_star)
    # lo has f > 0, u_star has f < 0; bisect on [lo, u_star]
    a, b = lo, u_star
    for _ in range(200):
        mid = 0.5 * (a + b)
        if _root_equation(mid, n, t, N, T) > 0:
            a = mid
        else:
            b = mid
        if b - a <= 1e-12 * b:
            break
    u = 0.5 * (a + b)
    # two Newton polish steps on g(u) = t*(u^(t-n)*N)^(2/t) + (n-t)*u^2 - T
    for _ in range(2):
        g = _root_equation(u, n, t, N, T)
        dg = 2.0 * (n - t) * u * (1.0 - N ** (2.0 / t) * u ** (-2.0 * n / t))
        if dg == 0:
            break
        step = g / dg
        if not math.isfinite(step):
            break
        u_new = u - step
        if 0 < u_new <= u_star:
            u = u_new
    return u


# relative inflation applied to every U_m so downstream integer floors can
# never clip the search region through rounding
_SAFETY = 1e-12


def um_bounds(n: int, N: int, T: float, u_roots: Mapping[int, float],
              ms: Sequence[int] | None = None) -> Dict[int, float]:
    """U_m = max_t { t*(u_t^(t-n)*N)^(m/t) + (n-t)*u_t^m } for the wanted m.

    Defaults to m in {-2, -1} union {3..n}; m = 0, 2 are excluded (the
    maximization degenerates there — U2 is handled by u2_bound).
    """
    if ms is None:
        ms = [-2, -1] + list(range(3, n + 1))
    out: Dict[int, float] = {}
    for m in ms:
        if m in (0, 2):
            raise ValueError("m = 0 and m = 2 are not covered by this bound")
        best = -math.inf
        for t in range(1, n):
            u = u_roots[t]
            v = t * (u ** (t - n) * N) ** (m / t) + (n - t) * u ** m
            if v > best:
                best = v
        out[m] = best * (1.0 + _SAFETY)
    return out


@dataclass(frozen=True)
class BoundsSet:
    """Everything the enumerator needs for one (degree, trace, norm) choice."""

    n: int
    s1: int
    disc_bound: int
    T: float
    N: int
    u_roots: Mapping[int, float]
    U: Mapping[int, float]

    @classmethod
    def compute(cls, n: int, s1: int, disc_bound: int, N: int,
                hermite: HermiteTable | None = None) -> "BoundsSet":
        T = u2_bound(n, s1, disc_bound, hermite)
        cap = (T / n) ** (n / 2.0)
        if N > cap * (1.0 + 1e-12):
            raise ValueError(f"N={N} exceeds (T/n)^(n/2)={cap:.6g}")
        roots = {t: least_positive_root(n, t, N, T) for t in range(1, n)}
        U = um_bounds(n, N, T, roots)
        U[2] = T * (1.0 + _SAFETY)
        return cls(n=n, s1=s1, disc_bound=disc_bound, T=T, N=N, u_roots=roots, U=U)


# ---------------------------------------------------------------------------
# Newton's identities (exact integer / rational arithmetic throughout)

def coeffs_to_power_sums(a: Sequence[int], count: int) -> List[int]:
    """Power sums S_1..S_count of the roots of x^n + a[0] x^(n-1) + ... + a[n-1].

    S_1 = -a_1;  S_m = -m*a_m - sum_{i<m} a_i S_{m-i}  (m <= n);
    beyond the degree, S_m = -sum_{i=1}^{n} a_i S_{m-i}.
    """
    n = len(a)
    if count < 1:
        raise ValueError("count must be >= 1")
    S: List[int] = []
    for m in range(1, count + 1):
        acc = 0
        for i in range(1, min(m, n + 1)):
            acc += a[i - 1] * S[m - i - 1]
        if m <= n:
            acc += m * a[m - 1]
        S.append(-acc)
    return S


def power_sums_to_coeffs(S: Sequence[int], n: int) -> List[int]:
    """Invert Newton's identities: recover a_1..a_n from S_1..S_n.

    Raises ValueError if some coefficient fails to come out integral (i.e.
    the given power sums violate the congruences m | S_m + sum a_i S_{m-i}).
    """
    if len(S) < n:
        raise ValueError(f"need S_1..S_{n}")
    a: List[int] = []
    for m in range(1, n + 1):
        acc = S[m - 1]
        for i in range(1, m):
            acc += a[i - 1] * S[m - i - 1]
        q, r = divmod(-acc, m)
        if r:
            raise ValueError(f"power sums are not integral at m={m}")
        a.append(q)
    return a


def negative_power_sums(a: Sequence[int]) -> Tuple[Fraction, Fraction]:
    """(S_-1, S_-2) for the roots of the monic polynomial with coefficients a.

    S_-1 = -a_{n-1}/a_n and S_-2 = S_-1^2 - 2 a_{n-2}/a_n, both exact
    rationals; a_n = 0 is rejected (a zero root means the candidate was
    reducible anyway).
    """
    n = len(a)
    an = a[-1]
    if an == 0:
        raise ValueError("constant term is zero (reducible polynomial)")
    an1 = a[-2] if n >= 2 else 1  # a_{n-1}; for n = 1 the monic leading 1
    an2 = a[-3] if n >= 3 else (1 if n == 2 else 0)
    s1 = Fraction(-an1, an)
    s2 = s1 * s1 - 2 * Fraction(an2, an)
    return s1, s2
