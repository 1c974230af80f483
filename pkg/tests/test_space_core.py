import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orlicz_lab.space_core import (FINITE_DIM, MONOMIAL_LINF, SEQ_C0, SEQ_L1, SEQ_L2,
                                   TORUS_TRIG, ContractError, Functional, NotNorming, Space,
                                   Vector, monomial_functionals, norm, norm_at_least,
                                   norming_family, norming_sup, pair, poly_sup_abs)


def vec(kind, coords, precision="exact", **kw):
    return Vector.make(Space(kind, precision, **kw), coords)


# --- oracle values ----------------------------------------------------------

def test_l2_norm_of_3_4_is_5():
    assert norm(vec(SEQ_L2, {0: 3, 1: 4})) == 5


def test_c0_norm_single_coordinate():
    assert norm(vec(SEQ_C0, {7: -2})) == 2


@pytest.mark.parametrize("N", [0, 1, 5, 40, 200])
def test_monomial_power_has_sup_one(N):
    assert norm(vec(MONOMIAL_LINF, {N: 1})) == 1


def test_monomial_two_term_sup():
    # t^8 - t^16 peaks at t^8 = 1/2
    assert float(norm(vec(MONOMIAL_LINF, {8: 1, 16: -1}))) == pytest.approx(0.25, abs=1e-12)


def test_l1_pairing_finite_sum():
    sp = Space(SEQ_L1, "exact")
    L = Functional.make(sp, {0: 1, 1: -1})
    assert pair(L, Vector.make(sp, {0: 2, 1: 5})) == -3


@pytest.mark.parametrize("N", [0, 1, 2, 9, 63])
def test_indicator_pairing_closed_form(N):
    sp = Space(MONOMIAL_LINF, "exact")
    t_n = Vector.make(sp, {N: 1})
    assert pair(Functional.indicator(sp, 0, 1), t_n) == Fraction(1, N + 1)
    half = Fraction(1, 2)
    expected = (half ** (N + 1)) / (N + 1)
    assert pair(Functional.indicator(sp, 0, half), t_n) == expected


def test_pairing_with_zero_is_zero():
    for kind in (SEQ_L1, SEQ_L2, SEQ_C0):
        sp = Space(kind, "exact")
        assert pair(norming_family(sp).enumerate(5), Vector.zero(sp)) == 0


def test_c0_family_norms_example():
    v = vec(SEQ_C0, {2: -5, 9: 1})
    assert norming_sup(v, norming_family(v.space), 10) == 5 == norm(v)


def test_l1_sign_pattern_norms_example():
    v = vec(SEQ_L1, {0: 2, 1: -3})
    assert pair(norming_family(v.space).norming_functional(v), v) == 5


def test_l2_self_normalization_norms_example():
    sp = Space(SEQ_L2, "exact")
    v = Vector.make(sp, {0: 3, 1: 4})
    L = Functional.make(sp, {0: Fraction(3, 5), 1: Fraction(4, 5)})
    assert pair(L, v) == 5


def test_norming_sup_small_k_misses_support():
    v = vec(SEQ_C0, {3: 7})
    fam = norming_family(v.space)
    assert norming_sup(v, fam, 10) == 7
    assert norming_sup(v, fam, 2) == 0


def test_l1_norming_sup_reaches_two():
    v = vec(SEQ_L1, {0: 1, 1: 1})
    assert norming_sup(v, norming_family(v.space), 8) == 2


def test_monomial_has_no_norming_family():
    with pytest.raises(NotNorming):
        norming_family(Space(MONOMIAL_LINF))


def test_functional_norm_bound_enforced():
    with pytest.raises(ContractError):
        Functional.make(Space(SEQ_L2), {0: 1, 1: 1})
    with pytest.raises(ContractError):
        Functional.make(Space(SEQ_C0), {0: 0.75, 1: 0.5})


def test_space_mismatch_is_rejected():
    with pytest.raises(ContractError):
        pair(Functional.make(Space(SEQ_L1), {0: 1}), Vector.make(Space(SEQ_L2), {0: 1}))


def test_canonical_form_drops_zeros():
    a = vec(SEQ_L2, {3: 1, 1: 0, 0: 2})
    b = vec(SEQ_L2, {0: 2, 3: 1})
    assert a == b and a.coords == ((0, 2), (3, 1))


def test_vector_round_trips_through_json_dict():
    v = vec(FINITE_DIM, {0: Fraction(1, 3), 2: -2}, dim=3, p=math.inf)
    assert Vector.from_dict(v.to_dict()) == v


def test_norm_at_least_decides_near_ties_exactly():
    # sup of t^64 - t^16 sits near 0.4725; compare against rationals on both sides
    v = vec(MONOMIAL_LINF, {64: 1, 16: -1})
    r = float(norm(v))
    assert norm_at_least(v, Fraction(r).limit_denominator(10 ** 6) - Fraction(1, 10 ** 6))
    assert not norm_at_least(v, Fraction(r).limit_denominator(10 ** 6) + Fraction(1, 10 ** 6))


def test_poly_sup_grid_route_matches_roots_route():
    # degree above the root-finding limit: compare against dense sampling
    coeffs = {0: 0.3, 70: -1.1, 71: 0.9}
    import numpy as np
    t = np.linspace(0, 1, 200001)
    dense = np.max(np.abs(0.3 - 1.1 * t ** 70 + 0.9 * t ** 71))
    assert float(poly_sup_abs(coeffs)) == pytest.approx(dense, rel=1e-6)


def test_monomial_functionals_are_the_four_test_functionals():
    fs = monomial_functionals(Space(MONOMIAL_LINF, "exact")).functionals
    one = Vector.make(Space(MONOMIAL_LINF, "exact"), {0: 1})
    assert [pair(L, one) for L in fs] == [1, Fraction(1, 2), Fraction(1, 2), Fraction(1, 3)]


# --- properties ---------------------------------------------------------------

small = st.fractions(min_value=-8, max_value=8, max_denominator=16)
SPACES = [Space(SEQ_L1, "exact"), Space(SEQ_L2, "exact"), Space(SEQ_C0, "exact"),
          Space(TORUS_TRIG, "exact"), Space(FINITE_DIM, "exact", 3, 1),
          Space(FINITE_DIM, "exact", 3, math.inf), Space(FINITE_DIM, "exact", 2, 2)]


def vectors(space, size=4):
    idx = st.integers(0, (space.dim or 6) - 1)
    return st.dictionaries(idx, small, max_size=size).map(lambda d: Vector.make(space, d))


@st.composite
def space_and_vector(draw):
    space = draw(st.sampled_from(SPACES))
    return space, draw(vectors(space))


@settings(max_examples=60, deadline=None)
@given(space_and_vector())
def test_norming_sup_monotone_and_bounded(sv):
    space, v = sv
    fam = norming_family(space)
    sups = [norming_sup(v, fam, K) for K in (1, 5, 20, 60)]
    assert all(a <= b for a, b in zip(sups, sups[1:]))
    assert float(sups[-1]) <= float(norm(v)) + 1e-12


@settings(max_examples=60, deadline=None)
@given(space_and_vector())
def test_norming_member_attains_norm(sv):
    space, v = sv
    L = norming_family(space).norming_functional(v)
    assert norming_family(space).contains(L)
    if space.kind in (SEQ_L1, SEQ_C0) or (space.kind == FINITE_DIM and space.p in (1, math.inf)):
        assert abs(pair(L, v)) == norm(v)
    else:
        assert float(abs(pair(L, v))) == pytest.approx(float(norm(v)), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SPACES[:4]), st.integers(0, 200))
def test_enumerated_functionals_respect_operator_norm(space, k):
    L = norming_family(space).enumerate(k)
    v = Vector.make(space, {i: (-1) ** i * Fraction(i + 1, 3) for i in range(8)})
    assert abs(pair(L, v)) <= norm(v) + Fraction(1, 10 ** 12)


@settings(max_examples=60, deadline=None)
@given(space_and_vector(), st.data())
def test_norm_axioms_exact(sv, data):
    space, u = sv
    v = data.draw(vectors(space))
    a = data.draw(small)
    if space.kind in (SEQ_L1, SEQ_C0) or (space.kind == FINITE_DIM and space.p != 2):
        assert norm(u.scale(a)) == abs(a) * norm(u)
        assert norm(u + v) <= norm(u) + norm(v)
    else:
        assert float(norm(u.scale(a))) == pytest.approx(abs(float(a)) * float(norm(u)), rel=1e-12)
        assert float(norm(u + v)) <= float(norm(u)) + float(norm(v)) + 1e-12


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(st.integers(0, 30), st.floats(-4, 4, allow_nan=False), max_size=5))
def test_monomial_norm_dominates_pairings(d):
    sp = Space(MONOMIAL_LINF)
    v = Vector.make(sp, d)
    for L in monomial_functionals(sp).functionals:
        assert abs(float(pair(L, v))) <= float(norm(v)) + 1e-9
