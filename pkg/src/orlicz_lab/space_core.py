"""Concrete separable Banach spaces, finitely supported vectors and functionals.

Every space kind except ``MonomialLinf`` ships an explicit countable norming
family of functionals of norm at most one.  ``MonomialLinf`` is a pairing-only
model of polynomials on ``[0, 1]`` under the sup norm, paired against
indicators and polynomial densities by exact closed-form integrals.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

import numpy as np

SEQ_L1 = "SeqL1"
SEQ_L2 = "SeqL2"
SEQ_C0 = "SeqC0"
FINITE_DIM = "FiniteDim"
MONOMIAL_LINF = "MonomialLinf"
TORUS_TRIG = "TorusTrig"

KINDS = (SEQ_L1, SEQ_L2, SEQ_C0, FINITE_DIM, MONOMIAL_LINF, TORUS_TRIG)
PRECISIONS = ("float64", "exact")

# grid size for the sup-norm scan of high-degree polynomials
SCAN_RESOLUTION = 4096
# below this degree the derivative's roots are located directly
ROOT_DEGREE_LIMIT = 64


class ContractError(ValueError):
    """Raised when an operation is called outside its contract."""


class NotNorming(ContractError):
    pass


@dataclass(frozen=True)
class Space:
    kind: str
    precision: str = "float64"
    dim: int | None = None
    p: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractError(f"unknown space kind {self.kind!r}")
        if self.precision not in PRECISIONS:
            raise ContractError(f"unknown precision {self.precision!r}")
        if self.kind == FINITE_DIM:
            if self.dim is None or self.dim < 1:
                raise ContractError("FiniteDim needs dim >= 1")
            if self.p is None or not (self.p >= 1):
                raise ContractError("FiniteDim needs p >= 1 (math.inf allowed)")
        elif self.dim is not None or self.p is not None:
            raise ContractError(f"{self.kind} takes no dim/p")

    @property
    def exact(self) -> bool:
        return self.precision == "exact"

    def scalar(self, x):
        """Coerce ``x`` to this space's scalar type."""
        if self.exact:
            if isinstance(x, (float, np.floating)) and not math.isfinite(x):
                raise ContractError("non-finite scalar in exact mode")
            return Fraction(x) if not isinstance(x, Fraction) else x
        return float(x)

    def with_precision(self, precision: str) -> "Space":
        return Space(self.kind, precision, self.dim, self.p)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "precision": self.precision}
        if self.kind == FINITE_DIM:
            d["dim"] = self.dim
            d["p"] = "inf" if math.isinf(self.p) else self.p
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "Space":
        p = d.get("p")
        if p == "inf":
            p = math.inf
        return cls(d["kind"], d.get("precision", "float64"), d.get("dim"), p)

    def __str__(self):
        if self.kind == FINITE_DIM:
            return f"FiniteDim({self.dim}, {self.p})"
        return self.kind


def _canonical(space: Space, coords) -> tuple:
    items = coords.items() if isinstance(coords, Mapping) else coords
    acc: dict[int, object] = {}
    for i, x in items:
        i = int(i)
        if space.kind == FINITE_DIM and not 0 <= i < space.dim:
            raise ContractError(f"index {i} outside FiniteDim({space.dim})")
        if space.kind in (SEQ_L1, SEQ_L2, SEQ_C0, MONOMIAL_LINF) and i < 0:
            raise ContractError(f"negative index {i} in {space.kind}")
        acc[i] = acc.get(i, 0) + space.scalar(x)
    return tuple((i, acc[i]) for i in sorted(acc) if acc[i] != 0)


@dataclass(frozen=True)
class Vector:
    """Finitely supported vector in canonical form (sorted, no zeros).

    For ``MonomialLinf`` the index is the power of ``t``; for ``TorusTrig``
    it is the Fourier mode ``k`` of ``e^{ik theta}``.
    """

    space: Space
    coords: tuple = ()

    @classmethod
    def make(cls, space: Space, coords=()) -> "Vector":
        return cls(space, _canonical(space, coords))

    @classmethod
    def zero(cls, space: Space) -> "Vector":
        return cls(space, ())

    def as_dict(self) -> dict:
        return dict(self.coords)

    @property
    def support(self) -> tuple:
        return tuple(i for i, _ in self.coords)

    def _check(self, other: "Vector"):
        if not isinstance(other, Vector) or other.space != self.space:
            raise ContractError("vectors live in different spaces")

    def __add__(self, other: "Vector") -> "Vector":
        self._check(other)
        return Vector.make(self.space, itertools.chain(self.coords, other.coords))

    def __neg__(self) -> "Vector":
        return Vector(self.space, tuple((i, -x) for i, x in self.coords))

    def __sub__(self, other: "Vector") -> "Vector":
        return self + (-other)

    def scale(self, a) -> "Vector":
        a = self.space.scalar(a)
        if a == 0:
            return Vector.zero(self.space)
        return Vector(self.space, tuple((i, a * x) for i, x in self.coords))

    __rmul__ = scale

    def to_dict(self) -> dict:
        key = "repr" if self.space.kind in (MONOMIAL_LINF, TORUS_TRIG) else "coords"
        return {"space": self.space.to_dict(), key: {str(i): _jsonable(x) for i, x in self.coords}}

    @classmethod
    def from_dict(cls, d: Mapping) -> "Vector":
        space = Space.from_dict(d["space"])
        raw = d.get("coords", d.get("repr", {}))
        return cls.make(space, {int(i): _parse_scalar(x, space) for i, x in raw.items()})


@dataclass(frozen=True)
class Functional:
    """Finitely supported functional.

    On ``MonomialLinf`` a functional is either the indicator of ``interval``
    (then ``coeffs`` is empty) or a polynomial density given by ``coeffs``,
    acting by integration over ``[0, 1]``.
    """

    space: Space
    coeffs: tuple = ()
    interval: tuple | None = None

    @classmethod
    def make(cls, space: Space, coeffs=(), interval=None, check: bool = True) -> "Functional":
        coeffs = _canonical(space, coeffs)
        if interval is not None:
            if space.kind != MONOMIAL_LINF:
                raise ContractError("indicator functionals only exist on MonomialLinf")
            a, b = (space.scalar(x) if space.exact else Fraction(x) for x in interval)
            if not 0 <= a <= b <= 1:
                raise ContractError("indicator interval must lie in [0, 1]")
            interval = (a, b)
            coeffs = ()
        L = cls(space, coeffs, interval)
        if check and operator_norm_bound(L) > 1 + 1e-12:
            raise ContractError(f"functional has operator norm > 1: {L}")
        return L

    @classmethod
    def indicator(cls, space: Space, a, b) -> "Functional":
        return cls.make(space, interval=(a, b))

    def to_dict(self) -> dict:
        d = {"space": self.space.to_dict(),
             "coeffs": {str(i): _jsonable(x) for i, x in self.coeffs}}
        if self.interval is not None:
            d["interval"] = [_jsonable(x) for x in self.interval]
        return d


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return float(x)


def _parse_scalar(x, space: Space):
    if isinstance(x, str):
        return Fraction(x)
    return x


# --- norms ----------------------------------------------------------------

def _dual_exponent(p: float) -> float:
    if p == 1:
        return math.inf
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


def _sqrt(q):
    """Square root, exact when ``q`` is the square of a rational."""
    if isinstance(q, Fraction) and q >= 0:
        rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if rn * rn == q.numerator and rd * rd == q.denominator:
            return Fraction(rn, rd)
    return math.sqrt(q)


def _p_norm(values: Sequence, p: float):
    if not values:
        return 0
    if p == 1:
        return sum(abs(x) for x in values)
    if math.isinf(p):
        return max(abs(x) for x in values)
    if p == 2:
        return _sqrt(sum(x * x for x in values))
    return float(sum(abs(float(x)) ** p for x in values)) ** (1.0 / p)


def norm(v: Vector):
    """Norm of ``v`` in its ambient space.

    Exact (a ``Fraction``) for l1/sup norms in exact mode and for l2 norms
    whose square is a rational square; float otherwise.
    """
    kind = v.space.kind
    vals = [x for _, x in v.coords]
    if kind == SEQ_L1:
        return _p_norm(vals, 1)
    if kind == SEQ_C0:
        return _p_norm(vals, math.inf)
    if kind in (SEQ_L2, TORUS_TRIG):
        return _p_norm(vals, 2)
    if kind == FINITE_DIM:
        return _p_norm(vals, v.space.p)
    if kind == MONOMIAL_LINF:
        return poly_sup_abs(v.as_dict())
    raise ContractError(f"norm unsupported for {kind}")


def norm_at_least(v: Vector, R) -> bool:
    """Decide ``norm(v) >= R`` exactly (rational arithmetic, no square roots)."""
    R = Fraction(R)
    if R <= 0:
        return True
    kind = v.space.kind
    vals = [Fraction(x) for _, x in v.coords]
    p = v.space.p if kind == FINITE_DIM else {SEQ_L1: 1, SEQ_C0: math.inf}.get(kind, 2)
    if kind == MONOMIAL_LINF:
        poly = v.as_dict()
        return _poly_reaches(poly, R) or _poly_reaches({k: -c for k, c in poly.items()}, R)
    if not vals:
        return False
    if p == 1:
        return sum(abs(x) for x in vals) >= R
    if math.isinf(p):
        return max(abs(x) for x in vals) >= R
    if float(p).is_integer():
        k = int(p)
        return sum(abs(x) ** k for x in vals) >= R ** k
    return float(norm(v)) >= float(R)


def operator_norm_bound(L: Functional) -> float:
    """Operator norm of ``L`` (exact per kind; numeric L1 norm of polynomial densities)."""
    kind = L.space.kind
    vals = [x for _, x in L.coeffs]
    if kind == SEQ_L1:
        return float(_p_norm(vals, math.inf))
    if kind == SEQ_C0:
        return float(_p_norm(vals, 1))
    if kind in (SEQ_L2, TORUS_TRIG):
        return float(_p_norm(vals, 2))
    if kind == FINITE_DIM:
        return float(_p_norm(vals, _dual_exponent(L.space.p)))
    if L.interval is not None:
        a, b = L.interval
        return float(b - a)
    return _poly_l1(L.coeffs)


def density_sup(L: Functional) -> float:
    """Sup of the density of a MonomialLinf functional on [0, 1]."""
    if L.interval is not None:
        return 1.0 if L.interval[1] > L.interval[0] else 0.0
    return float(poly_sup_abs(dict(L.coeffs)))


# --- polynomials on [0, 1] ------------------------------------------------

def _poly_eval(coeffs: Mapping[int, object], t):
    return sum(c * t ** k for k, c in coeffs.items())


def _critical_points(coeffs: Mapping[int, float]) -> list[float]:
    deg = max(coeffs)
    arr = np.zeros(deg + 1)
    for k, c in coeffs.items():
        arr[k] = float(c)
    d = np.polynomial.Polynomial(arr).deriv()
    # negligible leading terms only add roots far outside [0, 1]
    d = d.trim(1e-14 * float(np.abs(d.coef).max()))
    roots = d.roots()
    return [float(r.real) for r in roots if abs(r.imag) < 1e-9 and 0 < r.real < 1]


# grid points per degree; the relative grid error is at most (pi / GRID_PER_DEGREE)^2 / 8
GRID_PER_DEGREE = 36


def sup_grid(degree: int) -> tuple[np.ndarray, float]:
    """Grid t = (1 - cos u) / 2 on [0, 1] and its slack for degree-``degree`` polynomials.

    In u a polynomial of degree d in t is a trigonometric polynomial of
    degree d, so by Bernstein's inequality the grid maximum of |p| is at
    least ``slack`` times the sup over [0, 1].
    """
    d = max(degree, 1)
    G = GRID_PER_DEGREE * d + 1
    u = np.linspace(0.0, np.pi, G)
    return (1 - np.cos(u)) / 2, 1.0 - (np.pi / (G - 1) * d) ** 2 / 8


def poly_sup_abs(coeffs: Mapping[int, object]):
    """sup over [0, 1] of |sum_k c_k t^k|.

    Exact for a single monomial and for the two-term form c t^a + d t^b;
    critical points of the derivative for moderate degree; a grid scan
    refined near 1 at :data:`SCAN_RESOLUTION` otherwise.
    """
    coeffs = {k: c for k, c in coeffs.items() if c != 0}
    if not coeffs:
        return 0
    if len(coeffs) == 1:
        (_, c), = coeffs.items()
        return abs(c)
    ends = [abs(_poly_eval(coeffs, 0)), abs(_poly_eval(coeffs, 1))]
    if len(coeffs) == 2:
        (a, c), (b, d) = sorted(coeffs.items())
        # derivative a c t^(a-1) + b d t^(b-1) vanishes at t^(b-a) = -a c / (b d)
        ratio = -a * float(c) / (b * float(d))
        pts = [ratio ** (1.0 / (b - a))] if 0 < ratio < 1 else []
    elif max(coeffs) <= ROOT_DEGREE_LIMIT:
        pts = _critical_points(coeffs)
    else:
        pts = _grid_peaks(coeffs)
    best = max([float(x) for x in ends] + [abs(_poly_eval_float(coeffs, t)) for t in pts])
    return best


def _poly_eval_float(coeffs: Mapping[int, object], t: float) -> float:
    return float(sum(float(c) * t ** k for k, c in coeffs.items()))


def _grid_peaks(coeffs: Mapping[int, object]) -> list[float]:
    from scipy.optimize import minimize_scalar

    n = SCAN_RESOLUTION
    grid = np.unique(np.concatenate([np.linspace(0, 1, n + 1),
                                     1 - np.logspace(-10, 0, n)]))
    ks = np.array(list(coeffs), dtype=float)
    cs = np.array([float(c) for c in coeffs.values()])
    vals = np.abs((grid[:, None] ** ks[None, :]) @ cs)
    i = int(np.argmax(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    if hi <= lo:
        return [float(grid[i])]
    res = minimize_scalar(lambda t: -abs(_poly_eval_float(coeffs, t)), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-14})
    return [float(grid[i]), float(res.x)]


def _poly_l1(coeffs: tuple) -> float:
    """Integral of |g| over [0, 1] for a polynomial density g."""
    g = dict(coeffs)
    if not g:
        return 0.0
    cuts = [0.0] + sorted(_roots_in_unit(g)) + [1.0]

    def antider(t):
        return sum(float(c) * t ** (k + 1) / (k + 1) for k, c in g.items())

    return float(sum(abs(antider(b) - antider(a)) for a, b in zip(cuts, cuts[1:])))


def _roots_in_unit(g: Mapping[int, object]) -> list[float]:
    deg = max(g)
    if deg == 0:
        return []
    arr = np.zeros(deg + 1)
    for k, c in g.items():
        arr[k] = float(c)
    roots = np.polynomial.Polynomial(arr).roots()
    return [float(r.real) for r in roots if abs(r.imag) < 1e-9 and 0 < r.real < 1]


# Sturm sequences over the rationals, for exact sup-norm comparisons.

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _polyrem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and a:
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
        _trim(a)
    return a


def _sign_changes(chain: list, t: Fraction) -> int:
    signs = []
    for p in chain:
        val = sum(c * t ** k for k, c in enumerate(p))
        if val != 0:
            signs.append(val > 0)
    return sum(1 for x, y in zip(signs, signs[1:]) if x != y)


def _sturm_roots_open_unit(p: list) -> int:
    """Number of distinct real roots of p in (0, 1), p nonzero at 0 and 1."""
    p = _trim(list(p))
    if len(p) <= 1:
        return 0
    dp = _trim([k * c for k, c in enumerate(p)][1:])
    chain = [p, dp]
    while len(chain[-1]) > 1:
        r = _polyrem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-c for c in r])
    return _sign_changes(chain, Fraction(0)) - _sign_changes(chain, Fraction(1))


def _poly_reaches(coeffs: Mapping[int, object], R: Fraction) -> bool:
    """Exact test of max over [0, 1] of the polynomial >= R."""
    deg = max(coeffs, default=0)
    q = [Fraction(0)] * (deg + 1)
    for k, c in coeffs.items():
        q[k] += Fraction(c)
    q[0] -= R
    if _poly_eval(dict(enumerate(q)), Fraction(0)) >= 0 or sum(q) >= 0:
        return True
    return _sturm_roots_open_unit(q) > 0


# --- pairing --------------------------------------------------------------

def pair(L: Functional, v: Vector):
    """Bilinear pairing of a functional with a vector of the same space."""
    if L.space.kind != v.space.kind or L.space.dim != v.space.dim or L.space.p != v.space.p:
        raise ContractError("functional and vector live in different spaces")
    if v.space.kind != MONOMIAL_LINF:
        lc = dict(L.coeffs)
        return sum((lc[i] * x for i, x in v.coords if i in lc), v.space.scalar(0))
    return sum((c * monomial_weight(L, k) for k, c in v.coords), v.space.scalar(0))


def monomial_weight(L: Functional, k: int):
    """Integral over [0, 1] of the functional's density times t^k."""
    if L.interval is not None:
        a, b = L.interval
        w = (b ** (k + 1) - a ** (k + 1)) / (k + 1)
    else:
        w = sum(Fraction(1, j + k + 1) * (g if isinstance(g, Fraction) else Fraction(g))
                for j, g in L.coeffs)
    return w if L.space.exact else float(w)


# --- norming families -----------------------------------------------------

@dataclass(frozen=True)
class NormingFamily:
    """A fixed, reproducible enumeration of norm-one-bounded functionals.

    Enumeration proceeds by level ``L = 1, 2, ...``; inside a level by support
    size, then lexicographic support, then numerators.  Level ``L`` holds the
    members supported in ``{0, ..., L-1}`` not listed at earlier levels
    (for l2-type families, numerators over the denominator ``2**L``).
    """

    space: Space
    description: str = ""
    norming: bool = True

    def _generate(self) -> Iterator[Functional]:
        raise NotImplementedError

    def enumerate(self, k: int) -> Functional:
        """The k-th functional (0-based)."""
        return self.first(k + 1)[k]

    def first(self, K: int) -> tuple:
        return _first_cached(self, K)

    def contains(self, L: Functional) -> bool:
        raise NotImplementedError

    def norming_functional(self, v: Vector) -> Functional:
        """A member of the family whose pairing with ``v`` (nearly) attains ``norm(v)``."""
        if not v.coords:
            return self.enumerate(0)
        cols = np.array(v.support, dtype=np.int64)
        vals = np.array([float(x) for _, x in v.coords])
        w = self.norming_dense(vals)
        return Functional.make(self.space, {int(i): _as_scalar(self.space, x)
                                            for i, x in zip(cols, w) if x != 0})

    def norming_dense(self, vals: np.ndarray) -> np.ndarray:
        """Coefficients (on the same coordinates) of a norming member for ``vals``."""
        raise NotImplementedError


def _as_scalar(space: Space, x: float):
    return Fraction(x) if space.exact else float(x)


@functools.lru_cache(maxsize=64)
def _first_cached(fam: NormingFamily, K: int) -> tuple:
    if K < 0:
        raise ContractError("K must be >= 0")
    out = tuple(itertools.islice(fam._generate(), K))
    if len(out) < K:
        raise ContractError("family exhausted")
    return out


def _dyadic_toward_zero(x: np.ndarray, bits: int) -> np.ndarray:
    scale = float(2 ** bits)
    return np.trunc(x * scale) / scale


@dataclass(frozen=True)
class CoordinateFamily(NormingFamily):
    """Coordinate functionals e_n* (the norming family of c0)."""

    def _generate(self):
        for n in itertools.count():
            yield Functional.make(self.space, {n: 1}, check=False)

    def contains(self, L):
        return L.space == self.space and len(L.coeffs) == 1 and abs(L.coeffs[0][1]) == 1

    def norming_dense(self, vals):
        w = np.zeros_like(vals)
        if len(vals):
            i = int(np.argmax(np.abs(vals)))
            w[i] = 1.0 if vals[i] >= 0 else -1.0
        return w


@dataclass(frozen=True)
class SignPatternFamily(NormingFamily):
    """Finitely supported {-1, 0, +1} patterns (the norming family of l1)."""

    def _generate(self):
        for L in itertools.count(1):
            last = L - 1
            for size in range(1, L + 1):
                for rest in itertools.combinations(range(last), size - 1):
                    supp = rest + (last,)
                    for signs in itertools.product((1, -1), repeat=size):
                        yield Functional.make(self.space, dict(zip(supp, signs)), check=False)

    def contains(self, L):
        return L.space == self.space and all(abs(x) == 1 for _, x in L.coeffs)

    def norming_dense(self, vals):
        return np.sign(vals)


@dataclass(frozen=True)
class RationalBallFamily(NormingFamily):
    """Dyadic-rational vectors of l2 norm <= 1 (the norming family of l2).

    For ``TorusTrig`` coordinates are Fourier modes listed in the order
    0, 1, -1, 2, -2, ...
    """

    def _index(self, j: int) -> int:
        if self.space.kind != TORUS_TRIG:
            return j
        return (j + 1) // 2 if j % 2 else -(j // 2)

    def _position(self, i: int) -> int:
        if self.space.kind != TORUS_TRIG:
            return i
        return 2 * i - 1 if i > 0 else -2 * i

    def _generate(self):
        for L in itertools.count(1):
            den = 2 ** L
            for size in range(1, L + 1):
                for supp in itertools.combinations(range(L), size):
                    for nums in itertools.product(range(-den, den + 1), repeat=size):
                        if 0 in nums or sum(a * a for a in nums) > den * den:
                            continue
                        # already listed at level L - 1
                        if supp[-1] < L - 1 and all(a % 2 == 0 for a in nums):
                            continue
                        yield Functional.make(
                            self.space,
                            {self._index(j): Fraction(a, den) for j, a in zip(supp, nums)},
                            check=False)

    def contains(self, L):
        if L.space != self.space:
            return False
        vals = [Fraction(x) for _, x in L.coeffs]
        if sum(x * x for x in vals) > 1:
            return False
        return all((x.denominator & (x.denominator - 1)) == 0 for x in vals)

    def norming_dense(self, vals):
        nrm = float(np.sqrt(np.sum(vals * vals)))
        if nrm == 0:
            return np.zeros_like(vals)
        return _dyadic_toward_zero(vals / nrm, 40)


@dataclass(frozen=True)
class DualSphereFamily(NormingFamily):
    """Dyadic-rational points of the dual unit ball of FiniteDim(d, p)."""

    def _generate(self):
        d, q = self.space.dim, _dual_exponent(self.space.p)
        seen = set()
        for L in itertools.count(1):
            den = 2 ** L
            for nums in itertools.product(range(-den, den + 1), repeat=d):
                if not any(nums):
                    continue
                key = tuple(Fraction(a, den) for a in nums)
                if key in seen or _p_norm(key, q) > 1:
                    continue
                seen.add(key)
                yield Functional.make(self.space, dict(enumerate(key)), check=False)

    def contains(self, L):
        if L.space != self.space:
            return False
        vals = [x for _, x in L.coeffs]
        return float(_p_norm(vals, _dual_exponent(self.space.p))) <= 1 + 1e-12

    def norming_dense(self, vals):
        p = self.space.p
        if not np.any(vals):
            return np.zeros_like(vals)
        if p == 1:
            return np.sign(vals)
        if math.isinf(p):
            w = np.zeros_like(vals)
            i = int(np.argmax(np.abs(vals)))
            w[i] = np.sign(vals[i])
            return w
        nrm = float(np.sum(np.abs(vals) ** p) ** (1 / p))
        w = np.sign(vals) * (np.abs(vals) / nrm) ** (p - 1)
        return _dyadic_toward_zero(w, 40)


@dataclass(frozen=True)
class FunctionalList(NormingFamily):
    """An explicit finite list of functionals; not assumed norming."""

    functionals: tuple = ()
    norming: bool = False

    def _generate(self):
        yield from self.functionals

    def contains(self, L):
        return L in self.functionals

    def norming_dense(self, vals):
        raise NotNorming("an explicit functional list is not a norming family")


def norming_family(space: Space) -> NormingFamily:
    kind = space.kind
    if kind == SEQ_C0:
        return CoordinateFamily(space, "coordinate functionals e_n*")
    if kind == SEQ_L1:
        return SignPatternFamily(space, "finitely supported sign patterns")
    if kind == SEQ_L2:
        return RationalBallFamily(space, "dyadic-rational vectors in the l2 unit ball")
    if kind == TORUS_TRIG:
        return RationalBallFamily(space, "dyadic-rational mode combinations in the L2 unit ball")
    if kind == FINITE_DIM:
        return DualSphereFamily(space, f"dyadic points of the dual l^{space.p} unit ball")
    raise NotNorming(f"{kind} has no norming family: its functionals are pairing-only")


def norming_sup(v: Vector, fam: NormingFamily, K: int):
    if K < 1:
        raise ContractError("K must be >= 1")
    return max(abs(pair(L, v)) for L in fam.first(K))


def monomial_functionals(space: Space) -> FunctionalList:
    """The four test functionals used with the monomial model."""
    fs = (Functional.indicator(space, 0, 1),
          Functional.indicator(space, 0, Fraction(1, 2)),
          Functional.make(space, {1: 1}),
          Functional.make(space, {2: 1}))
    return FunctionalList(space, "1_[0,1], 1_[0,1/2], t, t^2", functionals=fs)
