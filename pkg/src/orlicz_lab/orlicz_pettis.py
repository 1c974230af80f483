"""Block extraction and the coarse random subseries experiment.

When a series is not unconditionally summable there are disjoint finite
blocks far out whose sums stay above some delta.  Tying each block to one
random sign and restricting to a set of block ids gives a series that, with
probability one, fails to be weakly summable.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .convergence import (DIVERGED, UNDECIDED, Budget, TermTable, detect_weak, tail_sups,
                          term_table)
from .randomness import Seed, sample_coarse
from .series import (BlockPartition, CoefficientSeq, FormalSeries, _membership, chi_from_eps,
                     restrict)
from .space_core import (ContractError, NormingFamily, Vector, norm, norm_at_least,
                         norming_family)

PASS_FRACTION = 0.99
# relative distance to delta below which a float window norm is re-decided exactly
TIE_TOLERANCE = 1e-9
OP_BUDGET = Budget(n_max=1024)


class BudgetExhausted(RuntimeError):
    """Fewer blocks than requested were found within the budget."""

    def __init__(self, message: str, blocks: tuple = (), delta=None):
        super().__init__(message)
        self.blocks = blocks
        self.delta = delta


class PreconditionError(ContractError):
    """The partition carries no block-norm lower bound on T."""


@dataclass(frozen=True)
class ScanHit:
    indices: tuple
    norm: float


def _window_norm_at_least(s: FormalSeries, lo: int, hi: int, delta, approx: float) -> bool:
    """Decide ||x_lo + ... + x_hi|| >= delta, exactly when the float value is close."""
    d = float(delta)
    if abs(approx - d) > TIE_TOLERANCE * max(1.0, d):
        return approx >= d
    exact = s.space.with_precision("exact")
    coords: dict = {}
    for n in range(lo, hi + 1):
        for i, x in s.term(n).coords:
            coords[i] = coords.get(i, 0) + Fraction(x)
    return norm_at_least(Vector.make(exact, coords), Fraction(delta))


def _windows_disjoint(tab: TermTable, frontier: int, d: float):
    """Candidate windows (lo, N, norm) in scan order, via cumulative norms."""
    n, p = tab.n, tab.p
    w = tab.term_norm
    floor = d * (1 - TIE_TOLERANCE)
    if math.isinf(p):
        # the window norm is the largest term norm inside it
        for N in np.flatnonzero(w[frontier + 1:] >= floor) + frontier + 1:
            yield int(N), int(N), float(w[N])
        return
    cum = np.concatenate([[0.0], np.cumsum(w ** p)])
    for N in range(frontier + 1, n + 1):
        if cum[N + 1] - cum[frontier + 1] < floor ** p:
            continue
        # largest lo whose window reaches the floor; longer windows follow
        lo = int(np.searchsorted(cum[:N + 1], cum[N + 1] - floor ** p, side="right")) - 1
        for j in range(min(lo, N), frontier, -1):
            yield j, N, float((cum[N + 1] - cum[j]) ** (1 / p))


def _windows_generic(tab: TermTable, frontier: int, d: float, max_window: int | None):
    X = tab.X
    floor = d * (1 - TIE_TOLERANCE)
    for N in range(frontier + 1, tab.n + 1):
        acc = np.zeros(X.shape[1])
        stop = frontier if max_window is None else max(frontier, N - max_window)
        for lo in range(N, stop, -1):
            row = X[lo]
            acc[row.indices] += row.data
            val = tab.norm_of(acc)
            if val >= floor:
                yield lo, N, float(val)


def _row_norms(tab: TermTable) -> np.ndarray:
    if tab.disjoint:
        return tab.term_norm
    if not hasattr(tab, "_row_norms"):
        tab._row_norms = np.array([tab.norm_of(tab.X[r].toarray().ravel())
                                   for r in range(tab.n + 1)])
    return tab._row_norms


def _mass_below(s: FormalSeries, tab: TermTable, frontier: int, delta) -> bool:
    """sum_{n > frontier} ||x_n|| < delta, so no window can reach delta."""
    mass = float(_row_norms(tab)[frontier + 1:].sum())
    d = float(delta)
    if abs(mass - d) > TIE_TOLERANCE * max(1.0, d):
        return mass < d
    exact = s.space.with_precision("exact")
    total = sum(Fraction(norm(Vector.make(exact, {i: Fraction(x) for i, x in s.term(n).coords})))
                for n in range(frontier + 1, tab.n + 1))
    return total < Fraction(delta)


def unconditional_cauchy_scan(s: FormalSeries, delta, b: Budget = Budget(), frontier: int = -1,
                              max_window: int | None = None) -> ScanHit | None:
    """First window F = {lo, ..., N} inside (frontier, n_max] with ||sum_F x_n|| >= delta.

    Windows are tried by increasing right end N and, for each N, from the
    shortest up.  Returns None when no window qualifies, including when the
    remaining total mass is already below delta.
    """
    if delta <= 0:
        raise ContractError("delta must be positive")
    if frontier >= b.n_max:
        return None
    tab = term_table(s, b.n_max)
    if _mass_below(s, tab, frontier, delta):
        return None
    d = float(delta)
    windows = (_windows_disjoint(tab, frontier, d) if tab.disjoint
               else _windows_generic(tab, frontier, d, max_window))
    for lo, N, val in windows:
        if _window_norm_at_least(s, lo, N, delta, val):
            return ScanHit(tuple(range(lo, N + 1)), val)
    return None


def largest_tail_gap(s: FormalSeries, b: Budget = Budget()) -> float:
    """max_N ||x_{probe+1} + ... + x_N|| over the budget."""
    tab = term_table(s, b.n_max)
    sups, _ = tail_sups(tab, np.ones(b.n_max + 1), [b.probe])
    return float(sups[0])


def extract_blocks(s: FormalSeries, delta=None, count: int = 8, b: Budget = Budget(),
                   max_window: int | None = None) -> BlockPartition:
    """``count`` disjoint windows, each beyond the previous, with sum norm >= delta."""
    if count < 1:
        raise ContractError("count must be >= 1")
    if delta is None:
        delta = largest_tail_gap(s, b) / 2
        if delta <= 0:
            raise BudgetExhausted("the tail of the series is zero within the budget", (), 0.0)
    if delta <= 0:
        raise ContractError("delta must be positive")
    blocks, norms, frontier = [], [], -1
    while len(blocks) < count:
        hit = unconditional_cauchy_scan(s, delta, b, frontier, max_window)
        if hit is None:
            raise BudgetExhausted(
                f"found {len(blocks)} of {count} blocks with norm >= {delta} up to n = {b.n_max}",
                tuple(blocks), delta)
        blocks.append(hit.indices)
        norms.append(hit.norm)
        frontier = hit.indices[-1]
    _check_monotone(blocks)
    return BlockPartition(tuple(blocks), delta=delta, block_norms=tuple(norms))


def _check_monotone(blocks):
    for a, b in zip(blocks, blocks[1:]):
        if not max(a) < min(b):
            raise AssertionError("blocks must be emitted in increasing index order")


def _tested_blocks(part: BlockPartition, T) -> list[int]:
    keep = _membership(T)
    return [k for k in range(len(part.blocks)) if keep(k)]


def check_hypothesis(part: BlockPartition, T) -> dict:
    """The block-norm lower bound on T that the experiment relies on."""
    if part.delta is None or not part.block_norms:
        raise PreconditionError("partition has no recorded block norms; use extract_blocks")
    ids = _tested_blocks(part, T)
    if not ids:
        raise PreconditionError("no extracted block lies in T")
    low = min(part.block_norms[k] for k in ids)
    if low < float(part.delta) * (1 - TIE_TOLERANCE):
        raise PreconditionError(f"block norm {low} below delta {part.delta}")
    return {"delta": part.delta, "blocks_in_T": len(ids), "min_block_norm": low}


def op_experiment(s: FormalSeries, part: BlockPartition, T="all", samples: int = 1000,
                  fam: NormingFamily | None = None, b: Budget = Budget(),
                  seed: Seed = Seed(0)) -> dict:
    """Weak verdicts for sum eps_f(n) x_n and sum (1 - eps_f(n))/2 x_n over f(n) in T."""
    if samples < 1:
        raise ContractError("samples must be >= 1")
    hypothesis = check_hypothesis(part, T)
    fam = fam if fam is not None else norming_family(s.space)
    sub = restrict(s, part, T)
    rows = []
    for i in range(samples):
        eps = sample_coarse(seed, part, b.n_max + 1, i)
        sigma = detect_weak(sub, eps, fam, b).outcome
        sform = detect_weak(sub, chi_from_eps(eps), fam, b).outcome
        rows.append((sigma, sform))
    sig = _fail_fraction([r[0] for r in rows])
    sf = _fail_fraction([r[1] for r in rows])
    undecided = sum(UNDECIDED in r for r in rows) / samples
    passed = sig is not None and sf is not None and sig >= PASS_FRACTION and sf >= PASS_FRACTION
    return {"samples": samples, "hypothesis": hypothesis, "frac_sigma_fail_weak": sig,
            "frac_s_fail_weak": sf, "frac_undecided": undecided,
            "form_disagreements": sum(UNDECIDED not in r and r[0] != r[1] for r in rows),
            "pass": passed}


def _fail_fraction(outcomes):
    decided = [o for o in outcomes if o != UNDECIDED]
    if not decided:
        return None
    return sum(o == DIVERGED for o in decided) / len(decided)


def flip_on(eps: CoefficientSeq, T, n_blocks: int) -> CoefficientSeq:
    """eps' with eps'_k = -eps_k for block ids k in T."""
    keep = _membership(T)
    return CoefficientSeq.signs([-eps.value(k) if keep(k) else eps.value(k)
                                 for k in range(n_blocks)])


def subseries_flip_identity(s: FormalSeries, part: BlockPartition, T, eps: CoefficientSeq,
                            n: int) -> dict:
    """Check Sigma_N(eps') - Sigma_N(eps) = -2 sum_{k <= N, f(k) in T} eps_f(k) x_k for N <= n.

    ``eps`` is indexed by block id; vectors are compared exactly.
    """
    keep = _membership(T)
    ids = [part.f(k) for k in range(n + 1)]
    n_blocks = max(ids) + 1
    flipped = flip_on(eps, T, n_blocks)
    zero = Vector.zero(s.space)
    a = b_ = on_t = zero
    holds = True
    for k, j in enumerate(ids):
        x = s.term(k)
        a = a + x.scale(flipped.value(j))
        b_ = b_ + x.scale(eps.value(j))
        if keep(j):
            on_t = on_t + x.scale(eps.value(j))
        holds = holds and (a - b_) == on_t.scale(-2)
    return {"eps_prime": flipped, "difference": a - b_, "checked_up_to": n, "holds": holds}
