"""Exact scalar layer: rationals, extended rationals, open intervals,
type decompositions and the closed-form genus-0 formulas.

Everything here is integer or ``Fraction`` arithmetic. The genus symbol
``g`` only survives in comments; all formulas are specialised to g = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Optional, Sequence, Tuple, Union

Rat = Fraction


@total_ordering
class _Infinity:
    """The +inf sentinel. Compares greater than every rational."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("+inf")

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
ExtRat = Union[Fraction, _Infinity]


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"not an exact rational: {x!r}")


def parse_rat(text: str) -> Fraction:
    """Parse ``"p/q"`` or an integer string. Floats are refused."""
    s = text.strip()
    if not s:
        raise ValueError("empty rational")
    if any(c in s for c in ".eE"):
        raise ValueError(f"floating-point literal not allowed: {text!r}")
    return Fraction(s)


def parse_ext(text: str) -> ExtRat:
    s = text.strip().lower()
    if s in ("inf", "+inf", "infinity"):
        return INF
    return parse_rat(s)


def fmt_ext(x: Optional[ExtRat]) -> str:
    """Serialise as ``"p/q"``, an integer string, or ``"inf"``."""
    if x is None:
        return ""
    if x is INF:
        return "inf"
    x = as_rat(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class OpenInterval:
    """Open interval ]lo, hi[ with ``hi`` possibly +inf. Empty iff lo >= hi."""

    lo: ExtRat
    hi: ExtRat

    def __post_init__(self):
        if self.lo is INF:
            raise ValueError("lower endpoint cannot be +inf")

    @property
    def empty(self) -> bool:
        return not (self.lo < self.hi)

    def __contains__(self, x) -> bool:
        if self.empty:
            return False
        return self.lo < x and (self.hi is INF or x < self.hi)

    def hull(self, other: "OpenInterval") -> "OpenInterval":
        if self.empty:
            return other
        if other.empty:
            return self
        return OpenInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __str__(self):
        return f"]{fmt_ext(self.lo)}, {fmt_ext(self.hi)}["


@dataclass(frozen=True)
class SystemType:
    """A type (n, d, k) with its decomposition d = a*n - t, 0 <= t < n."""

    n: int
    d: int
    k: int

    def __post_init__(self):
        for name in ("n", "d", "k"):
            if not isinstance(getattr(self, name), int):
                raise TypeError(f"{name} must be an int")
        if self.n < 1:
            raise ValueError("rank n must be positive")
        if self.k < 0:
            raise ValueError("k must be nonnegative")

    @property
    def a(self) -> int:
        return decompose(self.n, self.d)[0]

    @property
    def t(self) -> int:
        return decompose(self.n, self.d)[1]

    @property
    def lm(self) -> Optional[Tuple[int, int]]:
        if 0 < self.k < self.n:
            return lm_decompose(self)
        return None

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.n, self.d, self.k)

    def __str__(self):
        return f"({self.n},{self.d},{self.k})"


def decompose(n: int, d: int) -> Tuple[int, int]:
    """Return (a, t) with d = a*n - t and 0 <= t <= n-1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = -((-d) // n)  # ceil(d/n)
    return a, a * n - d


def lm_decompose(st: SystemType) -> Tuple[int, int]:
    """Return (l, m) with k*a - t = l*(n-k) + m and 0 <= m < n-k."""
    n, k = st.n, st.k
    if not 0 < k < n:
        raise ValueError("l, m are only defined for 0 < k < n")
    a, t = decompose(n, st.d)
    l, m = divmod(k * a - t, n - k)
    return l, m


def beta(st: SystemType) -> int:
    # n^2(g-1) + 1 - k(k - d + n(g-1)) at g = 0
    return st.k * (st.d + st.n - st.k) - st.n ** 2 + 1


def alpha_c(st: SystemType) -> Fraction:
    """max{t/k, (n-t)/(an-k)}."""
    a, t = decompose(st.n, st.d)
    n, k = st.n, st.k
    if t < 1:
        raise ValueError("alpha_c needs t >= 1")
    if k < 1:
        raise ValueError("alpha_c needs k >= 1")
    if k >= a * n:
        raise ValueError("alpha_c needs k < a*n (the moduli space is empty otherwise)")
    return max(Fraction(t, k), Fraction(n - t, a * n - k))


def h0_split(degrees: Sequence[int]) -> int:
    return sum(max(0, b + 1) for b in degrees)


def gcd_alpha_bound(st: SystemType) -> Fraction:
    """t(n-t)/gcd(n,k): above this, large-alpha stability already holds."""
    a, t = decompose(st.n, st.d)
    if t < 1:
        raise ValueError("gcd bound needs t >= 1")
    if st.k < 1:
        raise ValueError("gcd bound needs k >= 1")
    return Fraction(t * (st.n - t), math.gcd(st.n, st.k))


Triple = Tuple[int, int, int]


def c21(t2: Triple, t1: Triple) -> int:
    """Euler-characteristic part of dim Ext^1((E2,V2),(E1,V1)) at g = 0."""
    n2, d2, k2 = t2
    n1, d1, k1 = t1
    # n1 n2 (g-1) + d2 n1 - d1 n2 + k2 (d1 - n1 (g-1) - k1)
    return -n1 * n2 + d2 * n1 - d1 * n2 + k2 * (d1 + n1 - k1)


def ext1_dim(t2: Triple, t1: Triple, hom_dim: int = 0) -> int:
    """dim Ext^1 assuming Ext^2 = 0; ``hom_dim`` is dim Hom((E2,V2),(E1,V1)).

    A negative value means the caller's vanishing hypotheses are violated.
    """
    if hom_dim < 0:
        raise ValueError("hom_dim must be nonnegative")
    value = c21(t2, t1) + hom_dim
    if value < 0:
        raise ValueError(f"negative Ext^1 dimension {value}: inconsistent hypotheses")
    return value


def alpha_slope(n: int, d: int, k: int, alpha) -> Fraction:
    return (Fraction(d) + as_rat(alpha) * k) / n
