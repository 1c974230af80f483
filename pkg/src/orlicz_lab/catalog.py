"""Series families with closed-form oracles.

=================  ===========  ==========================================
name               space        terms
=================  ===========  ==========================================
l2_diagonal        SeqL2        e_n / (n+1)^alpha
l1_absolute        SeqL1        e_n 2^-n
c0_basis           SeqC0        e_n
c0_paired          SeqC0        x_2k = e_k, x_2k+1 = -e_k
linf_monomial      MonomialLinf x_0 = 1, x_n = t^n - t^(n-1)
torus_fourier      TorusTrig    e^{i n theta} / (n+1)^s
=================  ===========  ==========================================
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .convergence import BOUNDED, STRONG, UNCONDITIONAL, WEAK
from .series import SIGNS, CoefficientSeq, FormalSeries
from .space_core import (MONOMIAL_LINF, SEQ_C0, SEQ_L1, SEQ_L2, TORUS_TRIG, ContractError,
                         Space, Vector)

FAMILY_NAMES = ("l2_diagonal", "l1_absolute", "c0_basis", "c0_paired", "linf_monomial",
                "torus_fourier")

DEFAULT_PARAMS = {"l2_diagonal": {"alpha": 1}, "torus_fourier": {"s": 1}}

CONVERGES = "Converges"
DIVERGES = "Diverges"
ALWAYS_CONVERGES = "AlwaysConverges"
ALWAYS_DIVERGES = "AlwaysDiverges"


class OracleIncomplete(LookupError):
    """The family's closed form does not decide this predicate/coefficient pair."""


@dataclass(frozen=True)
class FamilySpec:
    name: str
    params: tuple
    space: Space
    unconditional: bool
    strong_as: str
    weak_as: str
    bounded_as: bool

    def __post_init__(self):
        # strong => weak => bounded
        if self.strong_as == ALWAYS_CONVERGES and self.weak_as != ALWAYS_CONVERGES:
            raise ContractError("oracle claims strong without weak summability")
        if self.weak_as == ALWAYS_CONVERGES and not self.bounded_as:
            raise ContractError("oracle claims weak summability without boundedness")

    @property
    def param_dict(self) -> dict:
        return dict(self.params)

    def to_dict(self) -> dict:
        return {"name": self.name, "params": {k: str(v) for k, v in self.params},
                "space": self.space.to_dict(),
                "oracle": {"unconditional": self.unconditional, "strong_as": self.strong_as,
                           "weak_as": self.weak_as, "bounded_as": self.bounded_as}}


def _power(n: int, a, exact: bool):
    if exact:
        if Fraction(a).denominator != 1:
            raise ContractError("exact mode needs an integer exponent")
        return Fraction(1, (n + 1) ** int(a))
    return (n + 1) ** (-float(a))


def _l2_term(space, alpha, n):
    return Vector.make(space, {n: _power(n, alpha, space.exact)})


def _l1_term(space, n):
    return Vector.make(space, {n: Fraction(1, 2 ** n) if space.exact else 2.0 ** -n})


def _c0_term(space, n):
    return Vector.make(space, {n: 1})


def _paired_term(space, n):
    return Vector.make(space, {n // 2: 1 if n % 2 == 0 else -1})


def _monomial_term(space, n):
    if n == 0:
        return Vector.make(space, {0: 1})
    return Vector.make(space, {n: 1, n - 1: -1})


def _torus_term(space, s, n):
    return Vector.make(space, {n: _power(n, s, space.exact)})


def _normalize(name: str, params) -> tuple:
    if name not in FAMILY_NAMES:
        raise ContractError(f"unknown family {name!r}; known: {', '.join(FAMILY_NAMES)}")
    merged = dict(DEFAULT_PARAMS.get(name, {}))
    for k, v in dict(params or {}).items():
        if k not in merged:
            raise ContractError(f"family {name} takes no parameter {k!r}")
        merged[k] = Fraction(v) if not isinstance(v, float) else Fraction(v).limit_denominator(10 ** 6)
    for k in merged:
        merged[k] = Fraction(merged[k])
        if merged[k] <= 0:
            raise ContractError(f"{k} must be positive")
    return tuple(sorted(merged.items()))


def catalog(name: str, params=None, precision: str = "float64") -> tuple[FormalSeries, FamilySpec]:
    """The family's series and oracle spec (cached, so repeated calls share objects)."""
    return _catalog(name, _normalize(name, params), precision)


@functools.lru_cache(maxsize=None)
def _catalog(name: str, params: tuple, precision: str):
    p = dict(params)
    if name == "l2_diagonal":
        space = Space(SEQ_L2, precision)
        conv = 2 * p["alpha"] > 1
        term = functools.partial(_l2_term, space, p["alpha"])
        if space.exact:
            _power(1, p["alpha"], True)
        spec = FamilySpec(name, params, space, conv, _always(conv), _always(conv), conv)
    elif name == "l1_absolute":
        space = Space(SEQ_L1, precision)
        term = functools.partial(_l1_term, space)
        spec = FamilySpec(name, params, space, True, ALWAYS_CONVERGES, ALWAYS_CONVERGES, True)
    elif name == "c0_basis":
        space = Space(SEQ_C0, precision)
        term = functools.partial(_c0_term, space)
        spec = FamilySpec(name, params, space, False, ALWAYS_DIVERGES, ALWAYS_DIVERGES, True)
    elif name == "c0_paired":
        space = Space(SEQ_C0, precision)
        term = functools.partial(_paired_term, space)
        spec = FamilySpec(name, params, space, False, ALWAYS_DIVERGES, ALWAYS_DIVERGES, True)
    elif name == "linf_monomial":
        space = Space(MONOMIAL_LINF, precision)
        term = functools.partial(_monomial_term, space)
        spec = FamilySpec(name, params, space, False, ALWAYS_DIVERGES, ALWAYS_CONVERGES, True)
    else:
        space = Space(TORUS_TRIG, precision)
        conv = 2 * p["s"] > 1
        term = functools.partial(_torus_term, space, p["s"])
        if space.exact:
            _power(1, p["s"], True)
        spec = FamilySpec(name, params, space, conv, _always(conv), _always(conv), conv)

    def oracle(predicate, coeffs, restriction=None):
        try:
            return oracle_verdict(spec, predicate, coeffs, restriction) == CONVERGES
        except OracleIncomplete:
            return None

    series = FormalSeries(space, term, name=_label(name, params), oracle=oracle)
    return series, spec


def _always(conv: bool) -> str:
    return ALWAYS_CONVERGES if conv else ALWAYS_DIVERGES


def _label(name: str, params: tuple) -> str:
    if not params:
        return name
    return f"{name}(" + ", ".join(f"{k}={v}" for k, v in params) + ")"


def _coeff_class(c: CoefficientSeq) -> str:
    """'finite', 'constant', 'random' (haar/coarse) or 'unknown'."""
    if c.origin == "constant":
        return "finite" if c.rule(0) == 0 else "constant"
    if c.origin in ("haar", "coarse"):
        return "random"
    if c.kind != SIGNS:
        return "finite"
    return "unknown"


def oracle_verdict(spec: FamilySpec, predicate: str, coeffs: CoefficientSeq,
                   restriction=None) -> str:
    """Closed-form answer for ``sum coeffs_n x_n`` (optionally restricted to f(n) in T)."""
    if predicate == UNCONDITIONAL:
        return CONVERGES if spec.unconditional else DIVERGES
    if predicate not in (STRONG, WEAK, BOUNDED):
        raise OracleIncomplete(f"unknown predicate {predicate!r}")
    if restriction is not None:
        _, T = restriction
        if T not in ("all", None):
            if callable(T):
                raise OracleIncomplete("restriction to an arbitrary id predicate")
            return CONVERGES  # finitely many block ids, hence finitely many terms
    cls = _coeff_class(coeffs)
    if cls == "finite":
        return CONVERGES
    if predicate == BOUNDED and spec.bounded_as:
        return CONVERGES
    name = spec.name
    if name in ("l2_diagonal", "torus_fourier", "l1_absolute", "c0_basis"):
        # one coordinate per term: everything depends on |c_n| only
        if coeffs.kind == SIGNS or cls in ("constant", "random"):
            verdict = spec.strong_as if predicate == STRONG else spec.weak_as
            if predicate == BOUNDED:
                verdict = _always(spec.bounded_as)
            return CONVERGES if verdict == ALWAYS_CONVERGES else DIVERGES
        raise OracleIncomplete(f"{name} with explicit {coeffs.kind}")
    if name == "c0_paired":
        if cls == "unknown":
            raise OracleIncomplete("c0_paired with an explicit sign prefix")
        if predicate == STRONG:
            # the dangling c_2K e_K never shrinks
            return DIVERGES
        if cls == "constant":
            return CONVERGES  # c_2k - c_2k+1 = 0 for every k
        # random signs/selectors: c_2k != c_2k+1 infinitely often, unless pairs
        # are tied by a partition with infinitely many blocks (never the case here)
        return DIVERGES
    if name == "linf_monomial":
        if predicate == WEAK:
            return CONVERGES
        if cls == "unknown":
            raise OracleIncomplete("linf_monomial strong summability for explicit signs")
        # the pointwise limit jumps at t = 1: Abel means of c tend to E[c] != c_0
        return DIVERGES
    raise OracleIncomplete(name)


def family_params(name: str) -> dict:
    return dict(DEFAULT_PARAMS.get(name, {}))


def terms(name: str, n: int, params=None, precision: str = "exact") -> list[Vector]:
    """The first n terms x_0, ..., x_{n-1} of a family."""
    s, _ = catalog(name, params, precision)
    return s.terms(n - 1)
