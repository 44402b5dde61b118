"""Tests for the explicit-formula bound machinery.

Reference values were frozen from an independent mpmath implementation run at
40 decimal digits (Taylor series for the kernel everywhere, tails summed to
exhaustion); the table anchors for degree 8, signature (2, 3) are the
published integer thresholds.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fieldscan.explicit_bounds import (
    BoundEvaluation,
    LocalTermSpec,
    SignatureSpec,
    bound_rhs,
    bounds_table_rows,
    l1_func,
    l_func,
    norm_admissible,
    optimize_bound,
    prime_power,
    tartar_f,
)
from fieldscan.explicit_bounds import _L_COEFFS, _l_series_coeffs


SIG_8_23 = SignatureSpec(n=8, r1=2, r2=3)


# ---------------------------------------------------------------------------
# Tartar's function

def test_tartar_at_zero():
    assert tartar_f(0.0) == 1.0


# mpmath, 40 dps; spans both the series branch (|x| < 0.5) and the closed form
TARTAR_FROZEN = [
    (1e-6, 0.999999999999800000000000017192),
    (0.3, 0.982138241799599939296040465513),
    (0.49, 0.952956624947346509035957038652),
    (0.51, 0.949124977459463364574683124715),
    (0.7, 0.90601796969500724799933201922),
    (2.0, 0.426535250529436682454355206709),
    (math.pi, 0.0923938402921590167023750494041),  # = 9/pi^4 exactly
    (10.0, 0.000554135485972379640896891333497),
]


@pytest.mark.parametrize("x,expected", TARTAR_FROZEN)
def test_tartar_frozen(x, expected):
    assert tartar_f(x) == pytest.approx(expected, rel=1e-14)


def test_tartar_at_pi_closed_form():
    # sin(pi) = 0, cos(pi) = -1 collapse the formula to (3/pi^2)^2
    assert tartar_f(math.pi) == pytest.approx(9.0 / math.pi**4, rel=1e-15)


def test_tartar_branch_seam():
    # just below the cut the closed form still carries ~14 good digits, so the
    # two branches must agree there
    for x in (0.4, 0.45, 0.499):
        t = 3.0 * (math.sin(x) - x * math.cos(x)) / x**3
        assert tartar_f(x) == pytest.approx(t * t, rel=1e-13)


def test_tartar_vectorized_matches_scalar():
    from fieldscan.explicit_bounds import _tartar_f_vec

    xs = np.geomspace(1e-8, 60.0, 400)
    vec = _tartar_f_vec(xs)
    for x, v in zip(xs, vec):
        # libm vs numpy trig can differ in the last ulp
        assert v == pytest.approx(tartar_f(float(x)), rel=5e-15, abs=1e-18)


@given(st.floats(min_value=-60.0, max_value=60.0, allow_nan=False))
def test_tartar_even_and_bounded(x):
    fx = tartar_f(x)
    assert fx == tartar_f(-x)
    assert 0.0 <= fx <= 1.0


# ---------------------------------------------------------------------------
# The kernel

def test_l_series_coefficients_exact():
    # leading Taylor coefficients, computed by hand from the square of the
    # series for 3(sin x - x cos x)/x^3
    expected = [
        Fraction(4, 5),
        Fraction(-144, 175),
        Fraction(128, 105),
        Fraction(-512, 231),
        Fraction(4608, 1001),
        Fraction(-2048, 195),
    ]
    got = _l_series_coeffs(6)
    for g, e in zip(got, expected):
        assert g == float(e)
    assert len(_L_COEFFS) == 60


L_FROZEN = [
    (1e-4, 0.000079991772647397448620868637032),
    (0.01, 0.00791891161891880300985575134937),
    (0.1, 0.0728064088159526332593922833985),
    (0.1499, 0.104678236587341189128923273574),  # series branch
    (0.1501, 0.104800996124033868849600042079),  # closed form
    (0.25, 0.161852294216701138677110189385),
    (0.5, 0.276838123823290602915473664665),
    (1.0, 0.438829279953765328705944489952),
    (4.0, 0.861929141169266935402916390478),
    (25.0, 1.39586087306036769606989387183),
    (1e6, 1.99623458411595462206603578026),
]


@pytest.mark.parametrize("y,expected", L_FROZEN)
def test_l_func_frozen(y, expected):
    assert l_func(y) == pytest.approx(expected, rel=1e-12)


def test_l_func_rejects_nonpositive():
    with pytest.raises(ValueError):
        l_func(0.0)
    with pytest.raises(ValueError):
        l_func(-1.0)


def test_l_func_matches_integral_representation():
    # independent in-test oracle: L(y) = 2 * int_0^inf (1 - f(t sqrt(y))) e^-t dt
    for y in (0.05, 0.3, 1.0, 5.0):
        ry = math.sqrt(y)
        val, err = quad(lambda t: (1.0 - tartar_f(t * ry)) * math.exp(-t), 0.0, np.inf, limit=200)
        assert l_func(y) == pytest.approx(2.0 * val, rel=1e-9)


def test_l_func_approaches_two_from_below():
    assert 1.99 < l_func(1e6) < 2.0
    assert l_func(1e8) < 2.0


def test_l_func_small_y_linear():
    # L(y) ~ (4/5) y near 0
    assert l_func(1e-9) / 1e-9 == pytest.approx(0.8, rel=1e-8)


def test_l_func_increasing_on_grid():
    ys = np.geomspace(1e-6, 1e5, 300)
    vals = [l_func(float(y)) for y in ys]
    for a, b in zip(vals, vals[1:]):
        assert a < b
    assert all(0.0 < v < 2.0 for v in vals)


@given(st.floats(min_value=-12.0, max_value=12.0, allow_nan=False))
def test_l_func_range_property(e):
    assert 0.0 < l_func(10.0**e) < 2.0


# ---------------------------------------------------------------------------
# The archimedean sum

L1_FROZEN = [
    (1.0, SIG_8_23, 0.559101227544969886111407236111),
    (0.5, SIG_8_23, 0.350426273146758850559849344934),
    (2.5, SIG_8_23, 0.921126304641971198190719240688),
    (1.0, SignatureSpec(n=8, r1=0, r2=4), 0.47702862025186653766564626561),
]


@pytest.mark.parametrize("y,sig,expected", L1_FROZEN)
def test_l1_frozen(y, sig, expected):
    assert l1_func(y, sig) == pytest.approx(expected, rel=1e-12)


def test_l1_cutoff_independent():
    # the zeta tails make the result independent of where direct summation stops
    base = l1_func(1.0, SIG_8_23, k_cutoff=10_000)
    for k in (100, 1000, 2000, 50_000):
        assert l1_func(1.0, SIG_8_23, k_cutoff=k) == pytest.approx(base, rel=1e-13)


def test_l1_tiny_cutoff_extended_internally():
    assert l1_func(4.0, SIG_8_23, k_cutoff=1) == pytest.approx(
        l1_func(4.0, SIG_8_23), rel=1e-13
    )


def test_l1_rejects_bad_input():
    with pytest.raises(ValueError):
        l1_func(-1.0, SIG_8_23)
    with pytest.raises(ValueError):
        l1_func(1.0, SIG_8_23, k_cutoff=0)


# ---------------------------------------------------------------------------
# The bound

# frozen optimizer output: norms tuple -> (y_opt, rhs, implied |disc| bound)
BOUND_FROZEN = {
    (): (1.46659748613521, 1.8800469832260844733, 3403707.59920088),
    (2,): (1.22533963547304, 2.034664542152048732, 11725966.9410531),
    (3,): (1.22675590407529, 1.9920230833104671967, 8336755.47179769),
    (4,): (1.22999179748731, 1.964489608770312446, 6688611.5547078),
    (5,): (1.23549659121596, 1.9450725652505997857, 5726302.09663855),
    (7,): (1.25338945749594, 1.9199294686447648497, 4682935.66066958),
}

# published thresholds for degree 8, signature (2, 3)
PUBLISHED_8_23 = {2: 11725962, 3: 8336752, 4: 6688609, 5: 5726300, 7: 4682934}


@pytest.mark.parametrize("norms,frozen", sorted(BOUND_FROZEN.items()))
def test_optimize_bound_frozen(norms, frozen):
    y_opt, rhs, bound = frozen
    local = LocalTermSpec(norms=norms) if norms else None
    ev = optimize_bound(SIG_8_23, local)
    assert isinstance(ev, BoundEvaluation)
    assert ev.y == pytest.approx(y_opt, rel=1e-5)
    assert ev.rhs == pytest.approx(rhs, rel=1e-10)
    assert ev.implied_bound == pytest.approx(bound, rel=1e-8)


def test_bound_matches_published_table():
    for q, published in PUBLISHED_8_23.items():
        ev = optimize_bound(SIG_8_23, LocalTermSpec(norms=(q,)))
        assert abs(ev.implied_bound - published) / published < 0.01


def test_bound_monotone_in_hypothesized_norm():
    bounds = [optimize_bound(SIG_8_23, LocalTermSpec(norms=(q,))).implied_bound
              for q in (2, 3, 4, 5, 7)]
    uncond = optimize_bound(SIG_8_23).implied_bound
    assert all(a > b for a, b in zip(bounds, bounds[1:]))
    assert bounds[-1] > uncond


def test_local_term_only_raises_the_bound():
    for y in (0.5, 1.0, 2.0):
        plain = bound_rhs(y, SIG_8_23).rhs
        with_local = bound_rhs(y, SIG_8_23, LocalTermSpec(norms=(2,))).rhs
        assert with_local > plain


def test_repeated_norms_accumulate():
    y = 1.2
    one = bound_rhs(y, SIG_8_23, LocalTermSpec(norms=(3,))).rhs
    two = bound_rhs(y, SIG_8_23, LocalTermSpec(norms=(3, 3))).rhs
    plain = bound_rhs(y, SIG_8_23).rhs
    assert two - plain == pytest.approx(2.0 * (one - plain), rel=1e-9)


def test_every_y_is_a_valid_bound():
    # suboptimal y must never beat the optimized value
    best = optimize_bound(SIG_8_23).rhs
    for y in (0.1, 0.7, 1.4666, 3.0, 9.0):
        assert bound_rhs(y, SIG_8_23).rhs <= best + 1e-12


def test_implied_bound_is_exp_n_rhs():
    ev = bound_rhs(1.0, SIG_8_23)
    assert ev.implied_bound == pytest.approx(math.exp(8 * ev.rhs), rel=1e-15)


def test_bounds_table_rows_shape():
    rows = bounds_table_rows(SIG_8_23, [2, 5])
    assert [r[0] for r in rows] == [2, 5]
    assert rows[0][3] > rows[1][3]
    uncond = bounds_table_rows(SIG_8_23, [])
    assert len(uncond) == 1 and uncond[0][0] == 0


def test_signature_validation():
    with pytest.raises(ValueError):
        SignatureSpec(n=1, r1=1, r2=0)
    with pytest.raises(ValueError):
        SignatureSpec(n=8, r1=3, r2=3)
    with pytest.raises(ValueError):
        SignatureSpec(n=4, r1=-2, r2=3)


def test_local_spec_validation():
    with pytest.raises(ValueError):
        LocalTermSpec(norms=(6,))  # not a prime power
    with pytest.raises(ValueError):
        LocalTermSpec(norms=(2,), series_cutoff=0)
    LocalTermSpec(norms=(2, 4, 9, 27))  # fine


# ---------------------------------------------------------------------------
# Norm admissibility

def test_prime_power():
    assert prime_power(2) == (2, 1)
    assert prime_power(4) == (2, 2)
    assert prime_power(27) == (3, 3)
    assert prime_power(97) == (97, 1)
    assert prime_power(6) is None
    assert prime_power(1) is None
    assert prime_power(0) is None


STANDARD_EXCLUDED = (2, 3, 4, 5)


@pytest.mark.parametrize("v,excluded,expected", [
    (12, (4,), False),   # v_2(12) = 2, and 4 = 2^2 is excluded
    (8, (4,), True),     # v_2(8) = 3 != 2: valuation semantics, not divisibility
    (4, (4,), False),
    (2, (4,), True),
    (7, STANDARD_EXCLUDED, True),
    (6, STANDARD_EXCLUDED, False),   # v_2 = 1
    (8, STANDARD_EXCLUDED, True),    # v_2 = 3, only exponents 1 and 2 excluded
    (9, STANDARD_EXCLUDED, True),    # v_3 = 2, only 3^1 excluded
    (45, STANDARD_EXCLUDED, False),  # v_5 = 1
    (-6, STANDARD_EXCLUDED, False),  # sign is ignored
    (77, STANDARD_EXCLUDED, True),
    (1, STANDARD_EXCLUDED, True),
])
def test_norm_admissible_table(v, excluded, expected):
    assert norm_admissible(v, excluded) is expected


def test_norm_admissible_zero_raises():
    with pytest.raises(ValueError):
        norm_admissible(0, STANDARD_EXCLUDED)


def test_norm_admissible_bad_excluded():
    with pytest.raises(ValueError):
        norm_admissible(5, (6,))


@given(st.integers(min_value=1, max_value=10**9))
def test_norm_admissible_coprime_always_passes(v):
    w = v
    while w % 2 == 0 or w % 3 == 0 or w % 5 == 0:
        w += 1
    assert norm_admissible(w, STANDARD_EXCLUDED)
    assert norm_admissible(-w, STANDARD_EXCLUDED)


@given(st.integers(min_value=1, max_value=10**6), st.sampled_from([2, 3, 5]))
@settings(max_examples=60)
def test_norm_admissible_valuation_rule(v, p):
    # reference implementation of the contract, straight from the definition
    excluded = STANDARD_EXCLUDED
    exps = {2: {1, 2}, 3: {1}, 5: {1}}
    ok = True
    for q, js in exps.items():
        w, k = v, 0
        while w % q == 0:
            w //= q
            k += 1
        if k in js:
            ok = False
    assert norm_admissible(v, excluded) is ok
