from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orlicz_lab.catalog import catalog
from orlicz_lab.series import (SELECTORS, BlockPartition, CoefficientSeq, FormalSeries,
                               chi_from_eps, coarse_coefficients, partial_sum, range_sum,
                               restrict, s_from_sigma, sigma_from_s)
from orlicz_lab.space_core import SEQ_C0, SEQ_L2, ContractError, Space, Vector


def l2_harmonic():
    return catalog("l2_diagonal", {"alpha": 1}, "exact")[0]


def test_all_zero_selectors_give_zero():
    s = l2_harmonic()
    assert partial_sum(s, CoefficientSeq.constant(SELECTORS, 0), 7) == Vector.zero(s.space)


def test_c0_basis_partial_sum_with_signs():
    s = catalog("c0_basis", precision="exact")[0]
    eps = CoefficientSeq.signs([1, -1, -1, 1])
    v = partial_sum(s, eps, 3)
    assert v.as_dict() == {0: 1, 1: -1, 2: -1, 3: 1}


def test_l2_partial_sum_direct():
    v = partial_sum(l2_harmonic(), CoefficientSeq.constant(SELECTORS, 1), 1)
    assert v.as_dict() == {0: 1, 1: Fraction(1, 2)}


def test_sigma_from_s_extremes():
    plus, minus = sigma_from_s(CoefficientSeq.signs([1, 1, 1]), 2)
    assert plus.values == (1, 1, 1) and minus.values == (0, 0, 0)
    plus, minus = sigma_from_s(CoefficientSeq.signs([-1, -1]), 1)
    assert plus.values == (0, 0) and minus.values == (1, 1)


def test_sigma_from_s_two_terms():
    s = l2_harmonic()
    eps = CoefficientSeq.signs([1, -1])
    plus, minus = sigma_from_s(eps, 1)
    assert partial_sum(s, eps, 1) == partial_sum(s, plus, 1) - partial_sum(s, minus, 1)
    assert plus.values == (1, 0) and minus.values == (0, 1)


def test_s_from_sigma_examples():
    s = l2_harmonic()
    ones, signs = s_from_sigma(CoefficientSeq.selectors([1, 1, 1]), 2)
    assert signs.values == (1, 1, 1)
    ones, signs = s_from_sigma(CoefficientSeq.selectors([0, 0]), 1)
    half_sum = (partial_sum(s, ones, 1) + partial_sum(s, signs, 1)).scale(Fraction(1, 2))
    assert half_sum == Vector.zero(s.space)
    chi = CoefficientSeq.selectors([1, 0])
    ones, signs = s_from_sigma(chi, 1)
    both = (partial_sum(s, ones, 1) + partial_sum(s, signs, 1)).scale(Fraction(1, 2))
    assert both == partial_sum(s, chi, 1) == s.term(0)


def test_coarse_coefficients_examples():
    part = BlockPartition.from_list([[0, 1], [2]])
    c = coarse_coefficients(CoefficientSeq.signs([1, -1, 1, 1]), part, 3)
    assert c.values == (1, 1, -1)

    single = BlockPartition.singletons()
    eps = CoefficientSeq.signs([1, -1, -1, 1, 1])
    assert coarse_coefficients(eps, single, 5).values == eps.values

    part = BlockPartition.from_list([[0, 1], [3, 4]])
    # block ids: {0,1} -> 0, {3,4} -> 1, index 2 -> fresh id 2
    c = coarse_coefficients(CoefficientSeq.signs([-1, 1, -1]), part, 5)
    assert c.values[:2] == (-1, -1) and c.values[3:] == (1, 1) and c.values[2] == -1


def test_block_partition_f_and_fibers():
    part = BlockPartition.from_list([[5, 2], [0]])
    assert [part.f(n) for n in range(7)] == [1, 2, 0, 3, 4, 0, 5]
    for bid in range(6):
        assert all(part.f(n) == bid for n in part.fiber(bid))


def test_block_partition_rejects_overlap():
    with pytest.raises(ContractError):
        BlockPartition.from_list([[0, 1], [1, 2]])
    with pytest.raises(ContractError):
        BlockPartition.from_list([[]])


def test_restrict_all_empty_and_even_ids():
    s = catalog("c0_paired", precision="exact")[0]
    part = BlockPartition.from_list([[0, 1], [2, 3], [4, 5], [6, 7]])
    full = restrict(s, part, "all")
    assert all(full.term(n) == s.term(n) for n in range(8))
    empty = restrict(s, part, frozenset())
    assert all(empty.term(n) == Vector.zero(s.space) for n in range(8))
    even = restrict(s, part, lambda k: k % 2 == 0)
    kept = [n for n in range(8) if even.term(n) != Vector.zero(s.space)]
    assert kept == [0, 1, 4, 5]


def test_restrict_passes_restriction_to_oracle():
    s = catalog("c0_basis")[0]
    part = BlockPartition.singletons()
    eps = CoefficientSeq.signs([1] * 10, origin="haar")
    assert restrict(s, part, frozenset({0, 1})).oracle("strong", eps) is True
    assert restrict(s, part, "all").oracle("strong", eps) is False


def test_sign_values_are_checked():
    with pytest.raises(ContractError):
        CoefficientSeq.signs([1, 0])
    with pytest.raises(ContractError):
        CoefficientSeq.selectors([2])


def test_sampled_signs_do_not_extend_silently():
    eps = CoefficientSeq.signs([1, -1])
    with pytest.raises(ContractError):
        eps.value(5)


def test_chi_from_eps_examples():
    assert chi_from_eps(CoefficientSeq.signs([1])).values == (0,)
    assert chi_from_eps(CoefficientSeq.signs([-1])).values == (1,)
    assert chi_from_eps(CoefficientSeq.signs([1, -1, -1, 1])).values == (0, 1, 1, 0)


# --- properties ---------------------------------------------------------------

signs = st.lists(st.sampled_from([-1, 1]), min_size=1, max_size=65)
selectors = st.lists(st.sampled_from([0, 1]), min_size=1, max_size=65)
FAMILIES = ["l2_diagonal", "l1_absolute", "c0_basis", "c0_paired", "linf_monomial",
            "torus_fourier"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FAMILIES), signs)
def test_sigma_identity_exact(name, eps_vals):
    s = catalog(name, precision="exact")[0]
    N = len(eps_vals) - 1
    eps = CoefficientSeq.signs(eps_vals)
    plus, minus = sigma_from_s(eps, N)
    assert partial_sum(s, eps, N) == partial_sum(s, plus, N) - partial_sum(s, minus, N)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FAMILIES), selectors)
def test_s_identity_exact(name, chi_vals):
    s = catalog(name, precision="exact")[0]
    N = len(chi_vals) - 1
    chi = CoefficientSeq.selectors(chi_vals)
    ones, sg = s_from_sigma(chi, N)
    rhs = (partial_sum(s, ones, N) + partial_sum(s, sg, N)).scale(Fraction(1, 2))
    assert partial_sum(s, chi, N) == rhs


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FAMILIES), signs, st.data())
def test_partial_sum_additive_over_ranges(name, eps_vals, data):
    s = catalog(name, precision="exact")[0]
    N = len(eps_vals) - 1
    M = data.draw(st.integers(0, N))
    eps = CoefficientSeq.signs(eps_vals)
    assert partial_sum(s, eps, N) == partial_sum(s, eps, M) + range_sum(s, eps, M + 1, N)


@st.composite
def partitions(draw):
    pool = draw(st.permutations(range(20)))
    cuts = sorted(draw(st.lists(st.integers(1, 19), max_size=6, unique=True)))
    chunks = [pool[a:b] for a, b in zip([0] + cuts, cuts + [20])]
    keep = draw(st.lists(st.booleans(), min_size=len(chunks), max_size=len(chunks)))
    return BlockPartition.from_list([c for c, k in zip(chunks, keep) if k and c])


@settings(max_examples=60, deadline=None)
@given(partitions(), st.lists(st.sampled_from([-1, 1]), min_size=40, max_size=40))
def test_coarse_coefficients_constant_on_blocks(part, block_signs):
    c = coarse_coefficients(CoefficientSeq.signs(block_signs), part, 25)
    for block in part.blocks:
        vals = {c.value(i) for i in block if i < 25}
        assert len(vals) <= 1


@settings(max_examples=60, deadline=None)
@given(partitions())
def test_f_is_a_total_map_with_finite_fibers(part):
    ids = [part.f(n) for n in range(40)]
    for n, m in ((n, m) for n in range(40) for m in range(40)):
        same_block = any(n in b and m in b for b in part.blocks)
        assert (ids[n] == ids[m]) == (n == m or same_block)
    for bid in set(ids):
        assert sorted(part.fiber(bid)) == [n for n in range(40) if ids[n] == bid]


def test_formal_series_terms_are_pure():
    s = FormalSeries(Space(SEQ_L2), lambda n: Vector.make(Space(SEQ_L2), {n: 1.0 / (n + 1)}))
    assert s.terms(3) == s.terms(3)
    assert all(t.space == Space(SEQ_L2) for t in s.terms(3))


def test_partition_serializes_as_index_arrays():
    part = BlockPartition.from_list([[3, 1], [4]])
    assert part.to_list() == [[1, 3], [4]]
    assert BlockPartition.from_list(part.to_list()) == part


def test_c0_space_rejects_negative_indices():
    with pytest.raises(ContractError):
        Vector.make(Space(SEQ_C0), {-1: 1})
