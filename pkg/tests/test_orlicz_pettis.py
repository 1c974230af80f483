from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from orlicz_lab.catalog import catalog
from orlicz_lab.convergence import Budget
from orlicz_lab.orlicz_pettis import (OP_BUDGET, BudgetExhausted, PreconditionError,
                                      check_hypothesis, extract_blocks, flip_on, op_experiment,
                                      subseries_flip_identity, unconditional_cauchy_scan)
from orlicz_lab.randomness import Seed
from orlicz_lab.series import SELECTORS, BlockPartition, CoefficientSeq, FormalSeries, range_sum
from orlicz_lab.space_core import (SEQ_C0, SEQ_L2, ContractError, Space, Vector, norm,
                                   norm_at_least)

B = Budget(n_max=256)


def series(name, precision="float64", **params):
    return catalog(name, params or None, precision)[0]


def test_scan_l1_total_mass_below_delta():
    assert unconditional_cauchy_scan(series("l1_absolute"), 3, B) is None


def test_scan_c0_paired_singletons():
    s = series("c0_paired")
    for frontier in (-1, 0, 5, 40):
        hit = unconditional_cauchy_scan(s, 1, B, frontier)
        assert len(hit.indices) == 1 and hit.indices[0] > frontier and hit.norm == 1.0


def test_scan_zero_series():
    sp = Space(SEQ_L2)
    s = FormalSeries(sp, lambda n: Vector.zero(sp), name="zero-scan")
    assert unconditional_cauchy_scan(s, Fraction(1, 1000), B) is None


def test_scan_rejects_nonpositive_delta():
    with pytest.raises(ContractError):
        unconditional_cauchy_scan(series("c0_basis"), 0, B)


def test_extract_c0_paired_five_blocks():
    part = extract_blocks(series("c0_paired"), 1, 5, B)
    # every singleton carries norm one, so the scan takes them in order
    assert part.blocks == ((0,), (1,), (2,), (3,), (4,))
    assert part.block_norms == (1.0,) * 5


def test_extract_c0_basis_three_blocks():
    assert extract_blocks(series("c0_basis"), 1, 3, B).blocks == ((0,), (1,), (2,))


def test_extract_l1_half_exhausts():
    with pytest.raises(BudgetExhausted) as err:
        extract_blocks(series("l1_absolute"), Fraction(1, 2), 3, B)
    assert len(err.value.blocks) < 3


def test_extract_l2_harmonic_exhausts_at_delta_one():
    with pytest.raises(BudgetExhausted):
        extract_blocks(series("l2_diagonal", alpha=1), 1, 8, OP_BUDGET)


def test_extract_default_delta_is_half_the_tail_gap():
    part = extract_blocks(series("c0_basis"), None, 4, B)
    assert part.delta == 0.5 and len(part.blocks) == 4


def test_extract_root_harmonic_uses_windows():
    s = series("l2_diagonal", alpha=Fraction(1, 2))
    part = extract_blocks(s, 1, 3, Budget(n_max=1024))
    assert any(len(b) > 1 for b in part.blocks)
    for block, val in zip(part.blocks, part.block_norms):
        assert float(norm(range_sum(s, CoefficientSeq.constant(SELECTORS, 1), block[0],
                                    block[-1]))) == pytest.approx(val)


def test_extract_count_must_be_positive():
    with pytest.raises(ContractError):
        extract_blocks(series("c0_basis"), 1, 0, B)


@pytest.mark.parametrize("name,params", [("c0_paired", {}), ("c0_basis", {}),
                                         ("l2_diagonal", {"alpha": Fraction(1, 2)}),
                                         ("torus_fourier", {"s": Fraction(1, 2)}),
                                         ("linf_monomial", {})])
def test_extracted_blocks_invariants(name, params):
    s = catalog(name, params or None)[0]
    exact = catalog(name, params or None, "exact")[0] if name in ("c0_paired", "c0_basis",
                                                                   "linf_monomial") else None
    delta = Fraction(1, 4)
    part = extract_blocks(s, delta, 4, Budget(n_max=512), max_window=64)
    seen = set()
    for block in part.blocks:
        assert not seen & set(block)
        seen |= set(block)
        assert list(block) == sorted(block)
    for a, b in zip(part.blocks, part.blocks[1:]):
        assert max(a) < min(b)
    for block in part.blocks:
        src = exact or s
        v = Vector.zero(src.space)
        for n in block:
            v = v + src.term(n)
        assert norm_at_least(v, delta) if exact else float(norm(v)) >= float(delta) * (1 - 1e-9)
    for bid in range(20):
        assert 0 < len(part.fiber(bid)) < 1000


def test_exact_tie_is_decided_exactly():
    # each term has norm exactly 1/3 in c0 so a window never reaches 1/3 + 1e-12
    sp = Space(SEQ_C0, "exact")
    s = FormalSeries(sp, lambda n: Vector.make(sp, {n: Fraction(1, 3)}), name="thirds")
    assert unconditional_cauchy_scan(s, Fraction(1, 3), B).indices == (0,)
    assert unconditional_cauchy_scan(s, Fraction(1, 3) + Fraction(1, 10 ** 12), B) is None


# --- experiment ------------------------------------------------------------------------

def test_precondition_requires_recorded_norms():
    with pytest.raises(PreconditionError):
        check_hypothesis(BlockPartition.from_list([[0], [1]]), "all")


def test_precondition_requires_blocks_in_t():
    part = extract_blocks(series("c0_basis"), 1, 3, B)
    with pytest.raises(PreconditionError):
        check_hypothesis(part, frozenset({10}))


@pytest.mark.parametrize("name", ["c0_paired", "c0_basis"])
def test_op_experiment_passes_on_c0(name):
    s = series(name)
    part = extract_blocks(s, 1, 8, OP_BUDGET)
    r = op_experiment(s, part, "all", samples=30, b=OP_BUDGET, seed=Seed(2))
    assert r["frac_sigma_fail_weak"] == 1.0 and r["frac_s_fail_weak"] == 1.0
    assert r["form_disagreements"] == 0 and r["pass"]


def test_op_experiment_singleton_partition_precondition():
    with pytest.raises(PreconditionError):
        op_experiment(series("c0_basis"), BlockPartition.singletons(), samples=5, b=B)


# --- flip identity ----------------------------------------------------------------------

def test_flip_empty_set_is_identity():
    s = series("c0_paired", "exact")
    part = BlockPartition.from_list([[0, 1], [2, 3]])
    eps = CoefficientSeq.signs([1, -1, 1, -1, 1, 1])
    r = subseries_flip_identity(s, part, frozenset(), eps, 7)
    assert r["eps_prime"].values == eps.values
    assert r["difference"] == Vector.zero(s.space) and r["holds"]


def test_flip_all_negates():
    s = series("l2_diagonal", "exact", alpha=1)
    part = BlockPartition.singletons()
    eps = CoefficientSeq.signs([1, -1, -1, 1, 1, -1])
    r = subseries_flip_identity(s, part, "all", eps, 5)
    assert r["eps_prime"].values == tuple(-e for e in eps.values)
    total = Vector.zero(s.space)
    for n in range(6):
        total = total + s.term(n).scale(eps.value(n))
    assert r["difference"] == total.scale(-2) and r["holds"]


def test_flip_paired_cancellation():
    s = series("c0_paired", "exact")
    part = BlockPartition.from_list([[0, 1]])
    eps = CoefficientSeq.signs([1] * 4)
    r = subseries_flip_identity(s, part, frozenset({0}), eps, 3)
    assert r["difference"] == Vector.zero(s.space) and r["holds"]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["c0_paired", "c0_basis", "l1_absolute", "linf_monomial"]),
       st.lists(st.sampled_from([-1, 1]), min_size=12, max_size=12),
       st.sets(st.integers(0, 11)))
def test_flip_identity_exact(name, signs, T):
    s = series(name, "exact")
    part = BlockPartition.from_list([[0, 1], [2, 3, 4], [7]])
    eps = CoefficientSeq.signs(signs)
    r = subseries_flip_identity(s, part, frozenset(T), eps, 8)
    assert r["holds"]
    k = len(r["eps_prime"].values)
    assert flip_on(r["eps_prime"], frozenset(T), k).values == eps.values[:k]
