"""Finite-budget detectors for strong, S-weak and bounded summability.

A detector never claims more than the budget shows.  Three checkpoints
inside ``[0, n_max]`` structure every scan:

* candidates / stabilization frontiers ``m`` lie in ``[0, n_max // 4]``;
* the adversarial probe residual is taken at ``n_max // 2``;
* tail behaviour is required on ``[3 n_max // 4, n_max]``.

``Diverged`` is reported only with a finite witness *and* either a
confirming oracle or an exact obstruction; a witness alone, against an
oracle that says otherwise, gives ``Undecided``.
"""
from __future__ import annotations

import functools
import math
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from .series import CoefficientSeq, FormalSeries, partial_sum, range_sum
from .space_core import (FINITE_DIM, MONOMIAL_LINF, SEQ_C0, SEQ_L1, SEQ_L2, TORUS_TRIG,
                         ContractError, Functional, FunctionalList, NormingFamily, Space, Vector,
                         GRID_PER_DEGREE, monomial_weight, norm, pair, poly_sup_abs, sup_grid)

CONVERGED = "Converged"
DIVERGED = "Diverged"
UNDECIDED = "Undecided"

STRONG = "strong"
WEAK = "weak"
BOUNDED = "bounded"
UNCONDITIONAL = "unconditional"


@dataclass(frozen=True)
class Budget:
    n_max: int = 4096
    eps_grid: tuple = (Fraction(1, 2), Fraction(1, 8), Fraction(1, 64), Fraction(1, 512))
    k_functionals: int = 256
    candidate_count: int = 64
    blowup: float = 64.0

    def __post_init__(self):
        if self.n_max < 1:
            raise ContractError("n_max must be >= 1")
        grid = tuple(Fraction(e) for e in self.eps_grid)
        if not grid or any(e <= 0 for e in grid):
            raise ContractError("eps_grid must be nonempty and strictly positive")
        object.__setattr__(self, "eps_grid", grid)
        if self.k_functionals < 1 or self.candidate_count < 1:
            raise ContractError("k_functionals and candidate_count must be >= 1")

    @property
    def cand_hi(self) -> int:
        return self.n_max // 4

    @property
    def probe(self) -> int:
        return self.n_max // 2

    @property
    def cap(self) -> int:
        return (3 * self.n_max) // 4

    def candidates(self) -> np.ndarray:
        """Sorted frontier / candidate indices in [0, n_max // 4]."""
        grid = np.linspace(0, self.cand_hi, self.candidate_count)
        return np.unique(np.round(grid).astype(np.int64))

    def to_dict(self) -> dict:
        return {"n_max": self.n_max, "eps_grid": [str(e) for e in self.eps_grid],
                "k_functionals": self.k_functionals, "candidate_count": self.candidate_count,
                "blowup": self.blowup}

    @classmethod
    def from_dict(cls, d) -> "Budget":
        return cls(d["n_max"], tuple(Fraction(e) for e in d["eps_grid"]), d["k_functionals"],
                   d["candidate_count"], d.get("blowup", 64.0))


class _Lazy(Mapping):
    """Read-only mapping that builds each value on first access."""

    def __init__(self, raw: dict, build: Callable):
        self._raw, self._build, self._done = raw, build, {}

    def __getitem__(self, key):
        if key not in self._done:
            self._done[key] = self._build(self._raw[key])
        return self._done[key]

    def __iter__(self):
        return iter(self._raw)

    def __len__(self):
        return len(self._raw)


@dataclass
class ConvergenceVerdict:
    predicate: str
    outcome: str
    certificate: dict
    budget: Budget
    # zero-argument callable producing the limit vector, if one was found
    limit_source: Callable | None = field(default=None, repr=False)
    # functionals referenced by the certificate, kept for re-checking
    functionals: Mapping = field(default_factory=dict, repr=False)

    @functools.cached_property
    def limit(self) -> Vector | None:
        return None if self.limit_source is None else self.limit_source()

    @property
    def heuristic(self) -> bool:
        return self.certificate.get("confirmation") == "heuristic"

    def to_dict(self) -> dict:
        d = {"predicate": self.predicate, "outcome": self.outcome,
             "certificate": _plain(self.certificate), "budget": self.budget.to_dict()}
        if self.limit_source is not None:
            d["limit"] = summarize_vector(self.limit)
        return d


def summarize_vector(v: Vector, max_coords: int = 32) -> dict:
    d = {"norm": float(norm(v)), "support_size": len(v.coords)}
    if len(v.coords) <= max_coords:
        d["coords"] = {str(i): float(x) for i, x in v.coords}
    return d


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    return x


# --- term tables ----------------------------------------------------------

class TermTable:
    """x_0, ..., x_n as a sparse float matrix over the columns they touch."""

    def __init__(self, s: FormalSeries, n: int):
        self.space = s.space
        self.n = n
        terms = s.terms(n)
        cols = sorted({i for t in terms for i in t.support})
        self.columns = np.array(cols, dtype=np.int64)
        col_of = {c: k for k, c in enumerate(cols)}
        rows, cidx, vals = [], [], []
        for r, t in enumerate(terms):
            for i, x in t.coords:
                rows.append(r)
                cidx.append(col_of[i])
                vals.append(float(x))
        D = max(len(cols), 1)
        self.X = sp.csr_matrix((vals, (rows, cidx)), shape=(n + 1, D))
        self.XT = self.X.T.tocsr()
        counts = np.bincount(np.array(cidx, dtype=np.int64), minlength=D) if cidx else np.zeros(D)
        self.disjoint = bool(np.all(counts <= 1)) and self.space.kind != MONOMIAL_LINF
        self.p = _exponent(self.space)
        if self.disjoint:
            self.term_norm = np.array([float(norm(t)) for t in terms])

    def dense_sum(self, c: np.ndarray, lo: int, hi: int) -> np.ndarray:
        """sum_{j=lo}^{hi} c_j x_j as a dense column vector."""
        out = np.zeros(self.X.shape[1])
        if hi >= lo:
            out += self.X[lo:hi + 1].T @ c[lo:hi + 1]
        return out

    def norm_of(self, vals: np.ndarray) -> float:
        return dense_norm(self.space, self.columns, vals)

    def to_vector(self, vals: np.ndarray) -> Vector:
        return Vector.make(self.space, {int(i): float(x) for i, x in zip(self.columns, vals)
                                        if x != 0})


def _exponent(space: Space) -> float | None:
    return {SEQ_L1: 1.0, SEQ_C0: math.inf, SEQ_L2: 2.0, TORUS_TRIG: 2.0}.get(
        space.kind, space.p if space.kind == FINITE_DIM else None)


def dense_norm(space: Space, columns: np.ndarray, vals: np.ndarray) -> float:
    if space.kind == MONOMIAL_LINF:
        return float(poly_sup_abs({int(k): float(x) for k, x in zip(columns, vals) if x != 0}))
    p = _exponent(space)
    a = np.abs(vals)
    if a.size == 0:
        return 0.0
    if p == 1:
        return float(a.sum())
    if math.isinf(p):
        return float(a.max())
    if p == 2:
        return float(np.sqrt(np.dot(a, a)))
    return float(np.sum(a ** p) ** (1.0 / p))


@functools.lru_cache(maxsize=16)
def term_table(s: FormalSeries, n: int) -> TermTable:
    return TermTable(s, n)


def _coeff_array(c: CoefficientSeq, n: int) -> np.ndarray:
    return c.array(n + 1)


# --- tail scans -----------------------------------------------------------

def tail_sups(tab: TermTable, c: np.ndarray, frontiers) -> tuple[np.ndarray, np.ndarray]:
    """For each frontier m: max over N in (m, n] of ||S_N - S_m|| and the first argmax.

    Frontier -1 gives the partial sums themselves.  Frontiers >= n give 0.
    """
    frontiers = np.asarray(frontiers, dtype=np.int64)
    if tab.disjoint:
        return _tail_sups_disjoint(tab, c, frontiers)
    if tab.space.kind == MONOMIAL_LINF and _grid_size(tab) * (tab.n + 1) <= GRID_CELLS:
        return _tail_sups_monomial(tab, c, frontiers)
    return _tail_sups_generic(tab, c, frontiers)


def _tail_sups_disjoint(tab, c, frontiers):
    n = tab.n
    w = np.abs(c[:n + 1]) * tab.term_norm
    p = tab.p
    sups = np.zeros(len(frontiers))
    args = np.zeros(len(frontiers), dtype=np.int64)
    if math.isinf(p):
        for k, m in enumerate(frontiers):
            if m >= n:
                continue
            seg = w[m + 1:]
            j = int(np.argmax(seg))
            sups[k], args[k] = seg[j], m + 1 + j
        return sups, args
    cum = np.concatenate([[0.0], np.cumsum(w ** p)])
    for k, m in enumerate(frontiers):
        if m >= n:
            continue
        seg = cum[m + 2:] - cum[m + 1]
        j = int(np.argmax(seg))
        sups[k], args[k] = seg[j] ** (1.0 / p), m + 1 + j
    return sups, args


# cap on (terms x grid points) held in memory by the monomial fast path
GRID_CELLS = 12_000_000


def _grid_size(tab) -> int:
    degree = int(tab.columns.max()) if tab.columns.size else 0
    return GRID_PER_DEGREE * max(degree, 1) + 1


def _tail_sups_monomial(tab, c, frontiers):
    """Tail sups for polynomials on [0, 1] via a Chebyshev grid plus exact refinement.

    On t = (1 - cos u) / 2 a degree-d polynomial is a trigonometric polynomial
    of degree d in u, so its derivatives obey Bernstein's inequality.  Near an
    interior maximum the grid misses at most (step * d)^2 / 8 of the sup norm,
    and endpoint maxima are grid points.  The grid therefore brackets every
    sup; exact sups are computed only for (frontier, N) pairs whose upper
    bracket can still beat the best exact value found so far.
    """
    n = tab.n
    t, slack = sup_grid(int(tab.columns.max()) if tab.columns.size else 0)
    powers = t[None, :] ** tab.columns[:, None].astype(float)
    values = (tab.X @ powers) * c[:n + 1, None]
    F = len(frontiers)
    low = np.zeros((F, n + 1))
    for k, m in enumerate(frontiers):
        if m >= n:
            continue
        run = np.cumsum(values[m + 1:], axis=0)
        low[k, m + 1:] = np.abs(run).max(axis=1)
    sups = np.zeros(F)
    args = np.zeros(F, dtype=np.int64)
    for k, m in enumerate(frontiers):
        if m >= n:
            continue
        order = np.argsort(-low[k, m + 1:], kind="stable") + m + 1
        best, arg = -1.0, int(m + 1)
        for N in order:
            if best >= low[k, N] / slack:
                break
            val = tab.norm_of(tab.dense_sum(c, int(m) + 1, int(N)))
            if val > best or (val == best and N < arg):
                best, arg = val, int(N)
        sups[k], args[k] = max(best, 0.0), arg
    return sups, args


def _row_norms(M: np.ndarray, p: float) -> np.ndarray:
    a = np.abs(M)
    if p == 1:
        return a.sum(axis=1)
    if math.isinf(p):
        return a.max(axis=1)
    if p == 2:
        return np.sqrt(np.einsum("ij,ij->i", a, a))
    return np.sum(a ** p, axis=1) ** (1.0 / p)


def _tail_sups_generic(tab, c, frontiers):
    n = tab.n
    F, D = len(frontiers), tab.X.shape[1]
    T = np.zeros((F, D))
    sups = np.zeros(F)
    args = np.zeros(F, dtype=np.int64)
    X = tab.X
    for N in range(n + 1):
        lo, hi = X.indptr[N], X.indptr[N + 1]
        if hi == lo or c[N] == 0:
            continue
        active = frontiers < N
        if not active.any():
            continue
        cols = X.indices[lo:hi]
        T[np.ix_(active, cols)] += c[N] * X.data[lo:hi]
        idx = np.flatnonzero(active)
        if tab.p is not None:
            vals = _row_norms(T[idx], tab.p)
        else:
            vals = np.array([tab.norm_of(T[k]) for k in idx])
        better = vals > sups[idx]
        sups[idx[better]] = vals[better]
        args[idx[better]] = N
    # a frontier whose tail never moves keeps argmax at its first index
    for k, m in enumerate(frontiers):
        if sups[k] == 0 and m < n:
            args[k] = m + 1
    return sups, args


def _ask(s: FormalSeries, predicate: str, c: CoefficientSeq):
    if s.oracle is None:
        return None
    return s.oracle(predicate, c)


def _validate(b: Budget, c: CoefficientSeq):
    if c.length is not None and c.origin != "explicit" and c.length < b.n_max + 1:
        raise ContractError(f"coefficients sampled to length {c.length} < n_max + 1")


def detect_strong(s: FormalSeries, c: CoefficientSeq, b: Budget = Budget()) -> ConvergenceVerdict:
    """Cauchy scan for norm summability of sum c_n x_n."""
    _validate(b, c)
    tab = term_table(s, b.n_max)
    arr = _coeff_array(c, b.n_max)
    cands = b.candidates()
    frontiers = np.concatenate([cands, [b.probe]])
    sups, args = tail_sups(tab, arr, frontiers)
    per_eps, failed = [], None
    for eps in b.eps_grid:
        ok = np.flatnonzero(sups[:-1] < float(eps))
        if ok.size == 0:
            failed = eps
            break
        k = int(ok[0])
        per_eps.append({"eps": eps, "frontier": int(cands[k]), "N0": int(cands[k]) + 1,
                        "tail_sup": float(sups[k]), "argmax": int(args[k])})
    if failed is None:
        return ConvergenceVerdict(STRONG, CONVERGED, {"per_eps": per_eps}, b,
                                  limit_source=_limit_source(tab, arr, b.n_max))

    best = {"eps": failed, "min_tail_sup": float(sups[:-1].min()),
            "frontier": int(cands[int(np.argmin(sups[:-1]))])}
    witness = {"M": int(b.probe), "N": int(args[-1]), "gap": float(sups[-1]), "delta": failed}
    has_witness = sups[-1] >= float(failed)
    oracle = _ask(s, STRONG, c)
    if has_witness and oracle is False:
        cert = {"failed": best, "witness": witness, "confirmation": "oracle"}
        return ConvergenceVerdict(STRONG, DIVERGED, cert, b)
    if has_witness and oracle is None:
        cert = {"failed": best, "witness": witness, "confirmation": "heuristic"}
        return ConvergenceVerdict(STRONG, DIVERGED, cert, b)
    cert = {"exhausted": best, "witness": witness if has_witness else None, "oracle": oracle}
    return ConvergenceVerdict(STRONG, UNDECIDED, cert, b)


def detect_bounded(s: FormalSeries, c: CoefficientSeq, b: Budget = Budget()) -> ConvergenceVerdict:
    """max over N <= n_max of ||S_N||, judged against ``b.blowup``."""
    _validate(b, c)
    tab = term_table(s, b.n_max)
    arr = _coeff_array(c, b.n_max)
    sups, args = tail_sups(tab, arr, [-1])
    sup, arg = float(sups[0]), int(args[0])
    cert = {"sup": sup, "argmax": arg, "blowup": b.blowup}
    oracle = _ask(s, BOUNDED, c)
    if sup <= b.blowup and oracle is True:
        return ConvergenceVerdict(BOUNDED, CONVERGED, {**cert, "confirmation": "oracle"}, b)
    if sup > b.blowup and oracle is not True:
        conf = "oracle" if oracle is False else "heuristic"
        return ConvergenceVerdict(BOUNDED, DIVERGED, {**cert, "confirmation": conf}, b)
    return ConvergenceVerdict(BOUNDED, UNDECIDED, {**cert, "oracle": oracle}, b)


# --- weak detection -------------------------------------------------------

def _check_family(s: FormalSeries, fam: NormingFamily):
    a, b = s.space, fam.space
    if (a.kind, a.dim, a.p) != (b.kind, b.dim, b.p):
        raise ContractError(f"family for {b} used on a series in {a}")


def functional_matrix(tab: TermTable, fs) -> sp.csr_matrix:
    """Rows: functionals as weights over the table's columns."""
    D = tab.X.shape[1]
    if tab.space.kind == MONOMIAL_LINF:
        dense = np.array([[float(monomial_weight(L, int(k))) for k in tab.columns] for L in fs])
        return sp.csr_matrix(dense.reshape(len(fs), D) if tab.columns.size else np.zeros((len(fs), D)))
    col_of = {int(c): k for k, c in enumerate(tab.columns)}
    rows, cols, vals = [], [], []
    for r, L in enumerate(fs):
        for i, x in L.coeffs:
            if i in col_of:
                rows.append(r)
                cols.append(col_of[i])
                vals.append(float(x))
    return sp.csr_matrix((vals, (rows, cols)), shape=(len(fs), D))


class _WeakProbe:
    """Pairings of the first k functionals with every term, compressed to
    the term indices where some pairing is nonzero."""

    def __init__(self, tab: TermTable, fs):
        P = (functional_matrix(tab, fs) @ tab.XT).tocsc()
        nz = np.unique(P.nonzero()[1])
        self.cols = nz
        self.C = P[:, nz].toarray() if nz.size else np.zeros((len(fs), 0))

    def run(self, c: np.ndarray):
        return np.cumsum(self.C * c[self.cols], axis=1) if self.cols.size else self.C

    def value_at(self, cum: np.ndarray, N: int) -> np.ndarray:
        pos = int(np.searchsorted(self.cols, N, side="right")) - 1
        return cum[:, pos] if pos >= 0 else np.zeros(cum.shape[0])

    def window(self, cum: np.ndarray, lo: int) -> tuple[np.ndarray, np.ndarray]:
        """Per-functional min and max of Lambda(S_N) over N in [lo, n]."""
        pos = int(np.searchsorted(self.cols, lo, side="right")) - 1
        start = self.value_at(cum, lo)[:, None]
        seg = np.concatenate([start, cum[:, pos + 1:]], axis=1)
        return seg.min(axis=1), seg.max(axis=1)


@functools.lru_cache(maxsize=16)
def _weak_probe(s: FormalSeries, n: int, fam: NormingFamily, k: int) -> _WeakProbe:
    return _WeakProbe(term_table(s, n), fam.first(k))


def detect_weak(s: FormalSeries, c: CoefficientSeq, fam: NormingFamily,
                b: Budget = Budget()) -> ConvergenceVerdict:
    """Finite form of: for each eps some candidate X stays eps-close to S_N,
    eventually, under every functional of the family.

    The functionals tried are the first ``k_functionals`` of the enumeration
    plus, when the family is norming, the member that norms the residual
    ``S_probe - X`` for each candidate ``X``.
    """
    _check_family(s, fam)
    _validate(b, c)
    tab = term_table(s, b.n_max)
    arr = _coeff_array(c, b.n_max)
    k = _functional_count(fam, b)
    probe = _weak_probe(s, b.n_max, fam, k)
    cum = probe.run(arr)
    lo, hi = probe.window(cum, b.cap)

    cands = b.candidates()
    # candidate vectors: zero first, then S_m for m in the grid (largest m first)
    sums = {}
    acc, prev = np.zeros(tab.X.shape[1]), -1
    for m in cands:
        acc = acc + tab.dense_sum(arr, prev + 1, int(m))
        sums[int(m)] = acc
        prev = int(m)
    order = [None] + [int(m) for m in cands[::-1]]
    s_probe = tab.dense_sum(arr, 0, b.probe)
    tail_pairings = {}

    def adversarial(m, eps):
        xa = sums[m] if m is not None else np.zeros_like(s_probe)
        w = fam.norming_dense(s_probe - xa)
        if not w.any():
            return None
        p = tab.X @ w
        vals = np.cumsum(arr * p)
        base = vals[m] if m is not None else 0.0
        dev = np.abs(vals[b.cap:] - base)
        j = int(np.argmax(dev))
        return {"N": b.cap + j, "value": float(dev[j]), "weights": w, "ok": dev[j] < eps}

    per_eps, failures, failed = [], [], None
    for eps in b.eps_grid:
        e = float(eps)
        found, matched = None, False
        eps_failures = []
        for m in order:
            v = probe.value_at(cum, m) if m is not None else np.zeros(len(lo))
            dev = np.maximum(hi - v, v - lo)
            bad = np.flatnonzero(dev >= e)
            if bad.size:
                j = int(bad[0])
                eps_failures.append({"candidate": m, "functional": j, "deviation": float(dev[j])})
                continue
            if fam.norming:
                adv = adversarial(m, e)
                if adv is not None and not adv["ok"]:
                    tail_pairings[(str(eps), m)] = adv["weights"]
                    eps_failures.append({"candidate": m, "functional": "probe", "N": adv["N"],
                                         "deviation": adv["value"]})
                    continue
                if adv is not None:
                    tail_pairings[(str(eps), m)] = adv["weights"]
            found, matched = m, True
            break
        if not matched:
            failed = eps
            failures = eps_failures
            break
        per_eps.append({"eps": eps, "candidate": found, "N0": int(b.cap),
                        "functionals_checked": int(len(lo)),
                        "probe": (str(eps), found) in tail_pairings})

    functionals = _Lazy(tail_pairings, functools.partial(_functional_from_dense, tab, fam))
    if failed is None:
        # the limit is the candidate matched at the finest eps
        final = sums[found] if found is not None else np.zeros(tab.X.shape[1])
        return ConvergenceVerdict(WEAK, CONVERGED, {"per_eps": per_eps}, b,
                                  limit_source=lambda: tab.to_vector(final),
                                  functionals=functionals)

    spread = hi - lo
    j = int(np.argmax(spread)) if spread.size else 0
    obstruction = None
    if spread.size and spread[j] > 2 * float(failed):
        obstruction = {"functional": j, "low": float(lo[j]), "high": float(hi[j]),
                       "window": [int(b.cap), int(b.n_max)]}
    cert = {"failed_eps": failed, "candidate_failures": failures, "obstruction": obstruction}
    oracle = _ask(s, WEAK, c)
    if oracle is False:
        return ConvergenceVerdict(WEAK, DIVERGED, {**cert, "confirmation": "oracle"}, b,
                                  functionals=functionals)
    if oracle is None and obstruction is not None:
        return ConvergenceVerdict(WEAK, DIVERGED, {**cert, "confirmation": "obstruction"}, b,
                                  functionals=functionals)
    return ConvergenceVerdict(WEAK, UNDECIDED, {**cert, "oracle": oracle}, b,
                              functionals=functionals)


def _limit_source(tab: TermTable, arr: np.ndarray, n: int) -> Callable:
    return lambda: tab.to_vector(tab.dense_sum(arr, 0, n))


def _functional_count(fam: NormingFamily, b: Budget) -> int:
    if isinstance(fam, FunctionalList):
        return min(b.k_functionals, len(fam.functionals))
    return b.k_functionals


def _functional_from_dense(tab: TermTable, fam: NormingFamily, w: np.ndarray) -> Functional:
    coeffs = {int(i): x for i, x in zip(tab.columns, w) if x != 0}
    if fam.space.exact:
        coeffs = {i: Fraction(x) for i, x in coeffs.items()}
    return Functional.make(fam.space, coeffs, check=False)


# --- independent re-checking ----------------------------------------------

def recheck(v: ConvergenceVerdict, s: FormalSeries, c: CoefficientSeq,
            fam: NormingFamily | None = None) -> bool:
    """Re-verify a certificate with ``partial_sum`` / ``norm`` / ``pair`` only.

    Quadratic in ``n_max``; meant for small budgets.
    """
    b, cert = v.budget, v.certificate
    n = b.n_max
    if v.outcome == UNDECIDED:
        return True
    if v.predicate == STRONG:
        if v.outcome == CONVERGED:
            for row in cert["per_eps"]:
                m = row["frontier"]
                worst = max((float(norm(range_sum(s, c, m + 1, N))) for N in range(m + 1, n + 1)),
                            default=0.0)
                if not worst < float(row["eps"]) or not math.isclose(worst, row["tail_sup"],
                                                                     rel_tol=1e-6, abs_tol=1e-12):
                    return False
            return True
        w = cert["witness"]
        return float(norm(range_sum(s, c, w["M"] + 1, w["N"]))) >= float(w["delta"]) * (1 - 1e-12)
    if v.predicate == BOUNDED:
        val = float(norm(partial_sum(s, c, cert["argmax"])))
        if not math.isclose(val, cert["sup"], rel_tol=1e-6, abs_tol=1e-12):
            return False
        return val <= b.blowup if v.outcome == CONVERGED else val > b.blowup
    if v.predicate == WEAK:
        if fam is None:
            raise ContractError("weak certificates need the family to re-check")
        sums = _partial_sums(s, c, n)
        fs = fam.first(_functional_count(fam, b))
        if v.outcome == CONVERGED:
            for row in cert["per_eps"]:
                m, eps = row["candidate"], float(row["eps"])
                xa = sums[m] if m is not None else Vector.zero(s.space)
                probes = list(fs)
                key = (str(row["eps"]), m)
                if key in v.functionals:
                    L = v.functionals[key]
                    if not fam.contains(L):
                        return False
                    probes.append(L)
                for L in probes:
                    base = pair(L, xa)
                    if any(not abs(float(pair(L, sums[N]) - base)) < eps for N in range(b.cap, n + 1)):
                        return False
            return True
        ob = cert.get("obstruction")
        if cert.get("confirmation") == "obstruction":
            L = fs[ob["functional"]]
            vals = [float(pair(L, sums[N])) for N in range(b.cap, n + 1)]
            return max(vals) - min(vals) > 2 * float(cert["failed_eps"])
        eps = float(cert["failed_eps"])
        for f in cert["candidate_failures"]:
            m = f["candidate"]
            xa = sums[m] if m is not None else Vector.zero(s.space)
            if f["functional"] == "probe":
                L = v.functionals[(str(cert["failed_eps"]), m)]
                if not fam.contains(L):
                    return False
                if not abs(float(pair(L, sums[f["N"]] - xa))) >= eps * (1 - 1e-9):
                    return False
            else:
                L = fs[f["functional"]]
                base = float(pair(L, xa))
                if max(abs(float(pair(L, sums[N])) - base) for N in range(b.cap, n + 1)) < eps * (1 - 1e-9):
                    return False
        return len(cert["candidate_failures"]) == len(b.candidates()) + 1
    raise ContractError(f"unknown predicate {v.predicate}")


def _partial_sums(s: FormalSeries, c: CoefficientSeq, n: int) -> list[Vector]:
    out, acc = [], Vector.zero(s.space)
    for N in range(n + 1):
        acc = acc + s.term(N).scale(c.value(N))
        out.append(acc)
    return out
