"""Formal series, coefficient sequences, block partitions and the sign/selector algebra."""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .space_core import ContractError, Space, Vector

SIGNS = "Signs"
SELECTORS = "Selectors"
SCALARS = "Scalars"


@dataclass(frozen=True)
class FormalSeries:
    """n -> x_n as a pure generator.

    ``oracle`` is an optional callable ``(predicate, coeffs) -> bool | None``
    answering whether the coefficient-weighted series has the predicate
    (``None`` when it cannot decide).
    """

    space: Space
    term: Callable[[int], Vector]
    name: str = "series"
    oracle: Callable | None = field(default=None, compare=False)
    max_index_hint: int | None = None

    def terms(self, n: int) -> list[Vector]:
        """x_0, ..., x_n."""
        return [self.term(k) for k in range(n + 1)]

    def __hash__(self):
        return hash((self.space, self.term, self.name, self.max_index_hint))


@dataclass(frozen=True)
class CoefficientSeq:
    """Coefficients c_n, from an explicit prefix or a rule.

    ``origin`` records how the sequence arose ("explicit", "constant",
    "haar", "coarse"), which is what the catalog oracles key on; ``partition``
    is set for coarse-grained samples.
    """

    kind: str
    values: tuple | None = None
    rule: Callable[[int], object] | None = field(default=None, compare=False)
    origin: str = "explicit"
    partition: "BlockPartition | None" = None

    def __post_init__(self):
        if self.kind not in (SIGNS, SELECTORS, SCALARS):
            raise ContractError(f"unknown coefficient kind {self.kind!r}")
        if (self.values is None) == (self.rule is None):
            raise ContractError("give exactly one of values / rule")
        if self.values is not None:
            allowed = {SIGNS: (-1, 1), SELECTORS: (0, 1)}.get(self.kind)
            if allowed and any(v not in allowed for v in self.values):
                raise ContractError(f"{self.kind} must take values in {allowed}")

    @classmethod
    def signs(cls, values: Iterable, origin="explicit", partition=None) -> "CoefficientSeq":
        return cls(SIGNS, tuple(int(v) for v in values), origin=origin, partition=partition)

    @classmethod
    def selectors(cls, values: Iterable, origin="explicit", partition=None) -> "CoefficientSeq":
        return cls(SELECTORS, tuple(int(v) for v in values), origin=origin, partition=partition)

    @classmethod
    def constant(cls, kind: str, value) -> "CoefficientSeq":
        return cls(kind, rule=lambda n: value, origin="constant")

    @property
    def length(self) -> int | None:
        return None if self.values is None else len(self.values)

    @property
    def finite_support(self) -> bool:
        """True when only finitely many coefficients are nonzero."""
        if self.values is not None:
            return self.origin == "explicit" and self.kind != SIGNS
        return self.rule(0) == 0

    def value(self, n: int):
        if self.values is not None:
            if n >= len(self.values):
                if self.origin == "explicit" and self.kind != SIGNS:
                    return 0
                raise ContractError(f"coefficient {n} beyond sampled length {len(self.values)}")
            return self.values[n]
        return self.rule(n)

    def array(self, n: int) -> np.ndarray:
        """Float array of c_0, ..., c_{n-1}."""
        if self.values is not None and n <= len(self.values):
            return np.asarray(self.values[:n], dtype=float)
        return np.array([float(self.value(k)) for k in range(n)])


@dataclass(frozen=True)
class BlockPartition:
    """Pairwise disjoint finite blocks N_0, N_1, ... and the induced map f.

    Block ids are list positions; an index outside every block gets a fresh
    singleton id ``len(blocks) + (its rank among unclaimed indices)``.
    ``delta`` and ``block_norms`` are filled in by block extraction.
    """

    blocks: tuple = ()
    delta: float | None = None
    block_norms: tuple = ()

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        seen = set()
        for b in blocks:
            if not b:
                raise ContractError("blocks must be nonempty")
            if seen.intersection(b) or len(set(b)) != len(b):
                raise ContractError("blocks must be pairwise disjoint")
            if min(b) < 0:
                raise ContractError("negative index in block")
            seen.update(b)
        object.__setattr__(self, "_claimed", tuple(sorted(seen)))
        object.__setattr__(self, "_owner", {i: k for k, b in enumerate(blocks) for i in b})

    @classmethod
    def singletons(cls) -> "BlockPartition":
        return cls(())

    def f(self, n: int) -> int:
        if n in self._owner:
            return self._owner[n]
        rank = n - bisect.bisect_left(self._claimed, n)
        return len(self.blocks) + rank

    def fiber(self, block_id: int) -> tuple:
        if block_id < len(self.blocks):
            return self.blocks[block_id]
        rank = block_id - len(self.blocks)
        # the rank-th unclaimed index
        lo, hi = rank, rank + len(self._claimed)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid - bisect.bisect_right(self._claimed, mid) < rank:
                lo = mid + 1
            else:
                hi = mid
        return (lo,)

    def ids(self, n: int) -> np.ndarray:
        """f(0), ..., f(n-1)."""
        return np.array([self.f(k) for k in range(n)], dtype=np.int64)

    def to_list(self) -> list:
        return [list(b) for b in self.blocks]

    @classmethod
    def from_list(cls, blocks: Sequence[Sequence[int]]) -> "BlockPartition":
        return cls(tuple(tuple(b) for b in blocks))


def partial_sum(s: FormalSeries, c: CoefficientSeq, N: int) -> Vector:
    """sum_{n=0}^N c(n) x_n in canonical form."""
    if N < 0:
        raise ContractError("N must be >= 0")
    return range_sum(s, c, 0, N)


def range_sum(s: FormalSeries, c: CoefficientSeq, M: int, N: int) -> Vector:
    """sum_{n=M}^N c(n) x_n (zero when M > N)."""
    coords: list = []
    for n in range(max(M, 0), N + 1):
        a = c.value(n)
        if a != 0:
            coords.extend((i, s.space.scalar(a) * x) for i, x in s.term(n).coords)
    return Vector.make(s.space, coords)


def sigma_from_s(eps: CoefficientSeq, N: int) -> tuple[CoefficientSeq, CoefficientSeq]:
    """Selectors (1+e)/2 and (1-e)/2, so that Sigma_N(e) = S_N(plus) - S_N(minus)."""
    if eps.kind != SIGNS:
        raise ContractError("sigma_from_s needs signs")
    vals = [eps.value(n) for n in range(N + 1)]
    plus = CoefficientSeq.selectors([(1 + e) // 2 for e in vals])
    minus = CoefficientSeq.selectors([(1 - e) // 2 for e in vals])
    return plus, minus


def s_from_sigma(chi: CoefficientSeq, N: int) -> tuple[CoefficientSeq, CoefficientSeq]:
    """All-one signs and 2 chi - 1, so that S_N(chi) = (Sigma_N(1) + Sigma_N(2 chi - 1)) / 2."""
    if chi.kind != SELECTORS:
        raise ContractError("s_from_sigma needs selectors")
    ones = CoefficientSeq.signs([1] * (N + 1))
    signs = CoefficientSeq.signs([2 * chi.value(n) - 1 for n in range(N + 1)])
    return ones, signs


def chi_from_eps(eps: CoefficientSeq) -> CoefficientSeq:
    """chi_n = (1 - eps_n) / 2."""
    if eps.kind != SIGNS:
        raise ContractError("chi_from_eps needs signs")
    if eps.values is None:
        return CoefficientSeq(SELECTORS, rule=lambda n: (1 - eps.value(n)) // 2,
                              origin=eps.origin)
    return CoefficientSeq.selectors([(1 - e) // 2 for e in eps.values],
                                    origin=eps.origin, partition=eps.partition)


def coarse_coefficients(c: CoefficientSeq, part: BlockPartition, n: int | None = None) -> CoefficientSeq:
    """n -> c(f(n)); materialized to length ``n`` when given."""
    if n is None:
        return CoefficientSeq(c.kind, rule=lambda k: c.value(part.f(k)), origin="coarse",
                              partition=part)
    vals = tuple(c.value(int(k)) for k in part.ids(n))
    return CoefficientSeq(c.kind, vals, origin="coarse", partition=part)


def restrict(s: FormalSeries, part: BlockPartition, T) -> FormalSeries:
    """Keep x_n when f(n) is in T (a set of block ids, a predicate, or "all")."""
    keep = _membership(T)

    def term(n):
        return s.term(n) if keep(part.f(n)) else Vector.zero(s.space)

    def oracle(predicate, coeffs):
        if s.oracle is None:
            return None
        return s.oracle(predicate, coeffs, restriction=(part, T))

    return FormalSeries(s.space, term, name=f"{s.name}|T", oracle=oracle if s.oracle else None,
                        max_index_hint=s.max_index_hint)


def _membership(T) -> Callable[[int], bool]:
    if T == "all" or T is None:
        return lambda k: True
    if callable(T):
        return T
    T = frozenset(T)
    return T.__contains__
