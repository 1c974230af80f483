"""Exact sign-cube checks (Lévy maximal inequality, sign-flip equidistribution)
and the sampled strong/weak dichotomy."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .convergence import CONVERGED, UNDECIDED, Budget, detect_strong, detect_weak
from .randomness import Seed, sample_haar
from .series import FormalSeries
from .space_core import (FINITE_DIM, MONOMIAL_LINF, SEQ_C0, SEQ_L1, SEQ_L2, TORUS_TRIG,
                         ContractError, NormingFamily, Vector, norm_at_least, norming_family,
                         sup_grid)

ENUMERATION_CAP = 20
MIN_SAMPLES = 100
LOW, HIGH = 0.01, 0.99
INCONCLUSIVE = 0.20
# separates l2_diagonal at alpha = 1/2 from alpha = 3/5 with margin > 0.1 on both sides
DICHOTOMY_BUDGET = Budget(n_max=8192, eps_grid=(Fraction(5, 8),))


class EnumerationBudget(ContractError):
    """The sign cube is too large to enumerate."""


def _check_terms(terms: Sequence[Vector], n: int):
    if n > ENUMERATION_CAP:
        raise EnumerationBudget(f"2^{n} sign vectors exceed the cap 2^{ENUMERATION_CAP}")
    if not terms:
        raise ContractError("need at least one term")
    space = terms[0].space
    if any(t.space != space for t in terms):
        raise ContractError("terms live in different spaces")


def _scaled_rows(terms: Sequence[Vector]) -> tuple[np.ndarray, int, list]:
    """Terms as rows of Python integers after scaling by a common denominator."""
    cols = sorted({i for t in terms for i in t.support})
    col_of = {c: k for k, c in enumerate(cols)}
    fracs = [{i: Fraction(x) for i, x in t.coords} for t in terms]
    scale = math.lcm(1, *(x.denominator for f in fracs for x in f.values()))
    A = np.zeros((len(terms), max(len(cols), 1)), dtype=object)
    A[:] = 0
    for r, f in enumerate(fracs):
        for i, x in f.items():
            A[r, col_of[i]] = int(x * scale)
    return A, scale, cols


def _sign_cube(n: int, fix_first: bool = False) -> np.ndarray:
    """All sign vectors of length n as rows (epsilon_0 = +1 when ``fix_first``)."""
    free = n - 1 if fix_first else n
    bits = (np.arange(2 ** free)[:, None] >> np.arange(free)[::-1]) & 1
    signs = (1 - 2 * bits).astype(object)
    if fix_first:
        signs = np.hstack([np.ones((len(signs), 1), dtype=object), signs])
    return signs


def _reaches(space, sums: np.ndarray, threshold) -> np.ndarray | None:
    """Exact ``norm >= threshold`` on integer rows, for the coordinate norms."""
    p = {SEQ_L1: 1, SEQ_C0: math.inf, SEQ_L2: 2, TORUS_TRIG: 2}.get(space.kind)
    if space.kind == FINITE_DIM and space.p in (1, 2, math.inf):
        p = space.p
    if p is None:
        return None
    a = np.abs(sums)
    if p == 1:
        stat, bound = a.sum(axis=-1), threshold
    elif p == 2:
        stat, bound = (a * a).sum(axis=-1), threshold * threshold
    else:
        stat, bound = a.max(axis=-1), threshold
    return np.vectorize(lambda x: x >= bound, otypes=[bool])(stat)


def levy_check_exhaustive(terms: Sequence[Vector], R) -> dict:
    """P[max_N ||Sigma_N|| >= R] <= 2 P[||Sigma_last|| >= R] over all sign vectors.

    Only sign vectors with epsilon_0 = +1 are visited; the other half is
    their mirror image and contributes identical counts.
    """
    terms = list(terms)
    n = len(terms)
    _check_terms(terms, n)
    space = terms[0].space
    R = Fraction(R)
    if R <= 0:
        raise ContractError("R must be positive")
    A, scale, cols = _scaled_rows(terms)
    signs = _sign_cube(n, fix_first=True)
    sums = np.cumsum(signs[:, :, None] * A[None, :, :], axis=1)
    hit = _reaches(space, sums, R * scale)
    if hit is None:
        hit = _reaches_generic(space, sums, scale, cols, R)
    half = len(signs)
    lhs = Fraction(int(hit.any(axis=1).sum()), half)
    rhs = 2 * Fraction(int(hit[:, -1].sum()), half)
    return {"n": n, "R": R, "lhs": lhs, "rhs": rhs, "holds": lhs <= rhs}


def _reaches_generic(space, sums, scale, cols, R) -> np.ndarray:
    exact = space.with_precision("exact")
    flat = sums.reshape(-1, sums.shape[-1])
    rows, inverse = np.unique(flat.astype(str), axis=0, return_inverse=True)
    decided = _grid_decide(space, flat, inverse, len(rows), scale, cols, R)
    first = np.zeros(len(rows), dtype=np.int64)
    first[inverse[::-1]] = np.arange(len(flat))[::-1]
    for k in np.flatnonzero(decided < 0):
        row = flat[first[k]]
        decided[k] = norm_at_least(_row_vector(exact, row, scale, cols), R)
    return decided[inverse].reshape(sums.shape[:2]).astype(bool)


def _grid_decide(space, flat, inverse, count, scale, cols, R) -> np.ndarray:
    """1 / 0 where a float grid bracket settles ``norm >= R``, -1 where it cannot."""
    out = np.full(count, -1, dtype=np.int64)
    if space.kind != MONOMIAL_LINF or not cols:
        return out
    t, slack = sup_grid(max(cols))
    powers = t[None, :] ** np.asarray(cols, dtype=float)[:, None]
    low = np.zeros(count)
    low[inverse] = np.abs(flat.astype(float) @ powers).max(axis=1) / scale
    r = float(R)
    # float rounding is far below this margin for the integer rows seen here
    margin = 1e-9 * max(1.0, r)
    out[low >= r + margin] = 1
    out[low / slack < r - margin] = 0
    return out


def _row_vector(space, row, scale, cols) -> Vector:
    return Vector.make(space, {cols[k]: Fraction(x, scale) for k, x in enumerate(row) if x})


def equidistribution_check(terms: Sequence[Vector], N: int, M: int) -> dict:
    """Compare the multisets {Sigma_M} and {Sigma_M - 2 Sigma_N} over the cube.

    Coordinates are scaled to integers by a common denominator, so the
    comparison is exact in both precisions.
    """
    if not 0 <= N <= M:
        raise ContractError("need 0 <= N <= M")
    terms = list(terms)
    if len(terms) < M + 1:
        raise ContractError(f"need {M + 1} terms, got {len(terms)}")
    _check_terms(terms, M)
    A, _, _ = _scaled_rows(terms[:M + 1])
    signs = _sign_cube(M + 1)
    total = signs.dot(A)
    head = signs[:, :N + 1].dot(A[:N + 1])
    plain = Counter(map(tuple, total))
    flipped = Counter(map(tuple, total - 2 * head))
    return {"N": N, "M": M, "patterns": len(signs), "distinct": len(plain),
            "multiset_equal": plain == flipped}


@dataclass(frozen=True)
class SampleOutcome:
    index: int
    strong: str
    weak: str

    @property
    def agree(self) -> bool:
        return UNDECIDED in (self.strong, self.weak) or self.strong == self.weak


def _fraction(outcomes: list[str]):
    decided = [o for o in outcomes if o != UNDECIDED]
    if not decided:
        return None
    return sum(o == CONVERGED for o in decided) / len(decided)


def _side(x):
    if x is None:
        return None
    if x <= LOW:
        return "low"
    if x >= HIGH:
        return "high"
    return "middle"


def dichotomy_experiment(s: FormalSeries, samples: int, b: Budget = DICHOTOMY_BUDGET,
                         fam: NormingFamily | None = None, seed: Seed = Seed(0)) -> dict:
    """Strong and weak verdicts for ``samples`` Haar sign sequences."""
    if samples < MIN_SAMPLES:
        raise ContractError(f"need at least {MIN_SAMPLES} samples")
    fam = fam if fam is not None else norming_family(s.space)
    rows = []
    for i in range(samples):
        eps = sample_haar(seed, b.n_max + 1, i)
        rows.append(SampleOutcome(i, detect_strong(s, eps, b).outcome,
                                  detect_weak(s, eps, fam, b).outcome))
    return summarize_dichotomy(rows)


def summarize_dichotomy(rows: list[SampleOutcome]) -> dict:
    rows = sorted(rows, key=lambda r: r.index)
    strong = _fraction([r.strong for r in rows])
    weak = _fraction([r.weak for r in rows])
    undecided = sum(UNDECIDED in (r.strong, r.weak) for r in rows) / len(rows)
    sides = (_side(strong), _side(weak))
    inconclusive = undecided > INCONCLUSIVE
    passed = (not inconclusive and sides[0] in ("low", "high") and sides[0] == sides[1])
    counts = {pred: dict(Counter(getattr(r, pred) for r in rows)) for pred in ("strong", "weak")}
    return {"samples": len(rows), "frac_strong": strong, "frac_weak": weak,
            "frac_undecided": undecided, "disagreements": sum(not r.agree for r in rows),
            "counts": counts, "inconclusive": inconclusive, "pass": passed}


__all__ = ["levy_check_exhaustive", "equidistribution_check", "dichotomy_experiment",
           "summarize_dichotomy", "EnumerationBudget", "SampleOutcome"]
