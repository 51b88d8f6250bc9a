"""Certificates for existence at large alpha and for emptiness at all alpha.

Two mechanisms:

* a parameter count over every candidate subsystem type (n1, d1, k1) with
  k1/n1 >= k/n; if each count is negative a general V admits no such
  subsystem and is therefore stable for all large alpha;
* an Ext^1 dimension count over the canonical extension of a general
  element; too few extension classes forces emptiness for every alpha.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional

from .core import SystemType, c21, decompose


class CertKind(str, Enum):
    LARGE_ALPHA_EXISTENCE = "LargeAlphaExistence"
    EMPTY_ALL_ALPHA = "EmptyAllAlpha"


@dataclass(frozen=True)
class SubsystemTriple:
    n1: int
    d1: int
    k1: int
    lhs: int

    def as_tuple(self):
        return (self.n1, self.d1, self.k1)


@dataclass(frozen=True)
class ExtCount:
    """Ext^1 dimension of the classifying group against the number of
    independent classes the extension needs."""

    quotient: tuple
    sub: tuple
    ext1: int
    needed: int


@dataclass
class Certificate:
    kind: CertKind
    ok: bool
    citation: str
    witness: List[SubsystemTriple] = field(default_factory=list)
    ext: Optional[ExtCount] = None
    reason: str = ""

    def to_dict(self) -> dict:
        out = {
            "kind": self.kind.value,
            "ok": self.ok,
            "citation": self.citation,
            "reason": self.reason,
            "witness": [
                {"n1": w.n1, "d1": w.d1, "k1": w.k1, "lhs": w.lhs} for w in self.witness
            ],
        }
        if self.ext is not None:
            out["ext"] = {
                "quotient": list(self.ext.quotient),
                "sub": list(self.ext.sub),
                "ext1": self.ext.ext1,
                "needed": self.ext.needed,
            }
        return out


def _ceil_div(p: int, q: int) -> int:
    return -((-p) // q)


def count_value(st: SystemType, tr) -> int:
    """Parameter count of subsystems of type tr minus dim Gr(k, h0(E)).

    Negative means a general V avoids every subsystem of that type.
    """
    n, k = st.n, st.k
    a, t = decompose(n, st.d)
    n1, d1, k1 = tr if isinstance(tr, tuple) else tr.as_tuple()
    return (
        n * ((a + 1) * n1 - d1)
        - t * n1
        - n1 * n1
        + k1 * (d1 + n1 - (a + 1) * n + t + k - k1)
    )


def lemma_bracket(st: SystemType, tr) -> int:
    """The factor d1 + n1 - (a+1)n + t + k - k1 multiplying k1 in the count."""
    a, t = decompose(st.n, st.d)
    n1, d1, k1 = tr if isinstance(tr, tuple) else tr.as_tuple()
    return d1 + n1 - (a + 1) * st.n + t + st.k - k1


def enumerate_subtypes(st: SystemType) -> List[SubsystemTriple]:
    """All (n1, d1, k1) with 1 <= n1 <= n-1, n1 <= d1 <= min{a n1, (a-1) n1 + n - t}
    and ceil(k n1 / n) <= k1 <= min(d1 + n1, k)."""
    n, k = st.n, st.k
    if k < n:
        raise ValueError("subtype enumeration needs k >= n")
    a, t = decompose(n, st.d)
    out = []
    for n1 in range(1, n):
        k1_lo = _ceil_div(k * n1, n)
        for d1 in range(n1, min(a * n1, (a - 1) * n1 + n - t) + 1):
            for k1 in range(k1_lo, min(d1 + n1, k) + 1):
                out.append(SubsystemTriple(n1, d1, k1, count_value(st, (n1, d1, k1))))
    return out


def _reducible(st: SystemType, tr: SubsystemTriple) -> bool:
    # t = 0, k > an: a factor O(b) with b < a can be split off and the
    # rank n1-1 remainder still has k1'/(n1-1) > k/n, so the smaller
    # stratum (enumerated on its own) already accounts for it.
    a, t = decompose(st.n, st.d)
    if t != 0 or st.k <= a * st.n:
        return False
    return tr.d1 < a * tr.n1 and (tr.k1 - a) * st.n > st.k * (tr.n1 - 1)


def certify_large_alpha(st: SystemType) -> Certificate:
    n, k = st.n, st.k
    a, t = decompose(n, st.d)
    cite = "prop2" if t == 0 or k <= a * n - t else "prop4"
    if t == 0 and k > a * n:
        cite = "prop3"
    if k <= n:
        raise ValueError("large-alpha certificate needs k > n")
    if st.d <= 0 or a < 1:
        raise ValueError("large-alpha certificate needs d > 0")
    if t > 0 and k >= a * n:
        return Certificate(
            CertKind.LARGE_ALPHA_EXISTENCE, False, "prop1",
            reason="k >= a*n with t > 0: the moduli space is empty for every alpha",
        )
    bad = [
        tr for tr in enumerate_subtypes(st)
        if tr.lhs >= 0 and not _reducible(st, tr)
    ]
    reason = "" if not bad else "nonnegative parameter count (not a proof of emptiness)"
    return Certificate(CertKind.LARGE_ALPHA_EXISTENCE, not bad, cite, witness=bad, reason=reason)


def _check_ext_hyp(st: SystemType):
    a, t = decompose(st.n, st.d)
    if a < 2:
        raise ValueError("Ext certificate needs a >= 2")
    if not 1 <= t <= st.n - 1:
        raise ValueError("Ext certificate needs 1 <= t <= n-1")
    return a, t


def certify_empty_ext_high(st: SystemType) -> Certificate:
    """Extension 0 -> (O(a)^{n-t}, W) -> (E,V) -> (O(a-1), H^0)^t -> 0
    needs t independent classes; fewer are available when
    (a-1)t > a(an-k) + (a-2)n."""
    a, t = _check_ext_hyp(st)
    n, k = st.n, st.k
    if k < a * t:
        raise ValueError("high-k Ext certificate needs k >= a*t")
    quot = (1, a - 1, a)
    sub = (n - t, a * (n - t), k - a * t)
    ext = c21(quot, sub)
    ok = ext < t
    # both forms of the criterion must agree
    assert ok == ((a - 1) * t > a * (a * n - k) + (a - 2) * n)
    return Certificate(
        CertKind.EMPTY_ALL_ALPHA, ok, "prop5", ext=ExtCount(quot, sub, ext, t),
        reason="" if ok else f"Ext^1 dimension {ext} >= {t}",
    )


def certify_empty_ext_low(st: SystemType) -> Certificate:
    """Extension 0 -> (O(a)^{n-t}, 0) -> (E,V) -> (O(a-1)^t, V') -> 0
    needs n-t independent classes; fewer when t > (a+1)k - n."""
    a, t = _check_ext_hyp(st)
    n, k = st.n, st.k
    if k > a * t:
        raise ValueError("low-k Ext certificate needs k <= a*t")
    quot = (t, (a - 1) * t, k)
    sub = (1, a, 0)
    ext = c21(quot, sub)
    ok = ext < n - t
    assert ok == (t > (a + 1) * k - n)
    return Certificate(
        CertKind.EMPTY_ALL_ALPHA, ok, "prop9", ext=ExtCount(quot, sub, ext, n - t),
        reason="" if ok else f"Ext^1 dimension {ext} >= {n - t}",
    )


def certify_empty_special(st: SystemType) -> Certificate:
    """G(alpha; n, 2n-t, t) is empty for n >= 2t, t >= 2."""
    a, t = decompose(st.n, st.d)
    ok = a == 2 and st.k == t and t >= 2 and st.n >= 2 * t
    return Certificate(
        CertKind.EMPTY_ALL_ALPHA, ok, "ex2",
        reason="" if ok else "not of the form (n, 2n-t, t) with n >= 2t >= 4",
    )


def certify_empty(st: SystemType) -> Certificate:
    """First successful emptiness certificate among the applicable ones,
    else the last failure."""
    last = None
    for fn in (certify_empty_ext_high, certify_empty_ext_low, certify_empty_special):
        try:
            cert = fn(st)
        except ValueError as exc:
            last = last or Certificate(CertKind.EMPTY_ALL_ALPHA, False, "", reason=str(exc))
            continue
        if cert.ok:
            return cert
        if last is None or not last.citation:
            last = cert
    return last
