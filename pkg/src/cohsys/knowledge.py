"""Theorem battery and interval reasoner for I(n,d,k).

Each rule is a guarded producer of ``Evidence``. ``merge`` folds evidence
into an ``AlphaKnowledge``: the convex hull of certified-nonempty alpha,
the certified-empty rays (0, L] and [U, inf), and a status. Convexity of
I(n,d,k) is what lets isolated pieces of evidence pin an exact interval.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Callable, Dict, List, Optional, Tuple

from . import certify
from .core import (
    INF,
    ExtRat,
    OpenInterval,
    SystemType,
    alpha_c,
    beta,
    decompose,
    fmt_ext,
    lm_decompose,
)

ENGINE_VERSION = "1.0.0"


@lru_cache(maxsize=None)
def statement_table() -> Dict[str, dict]:
    raw = resources.files("cohsys").joinpath("statements.json").read_text("utf-8")
    return json.loads(raw)["statements"]


class EvKind(str, Enum):
    NONEMPTY_ON = "NonemptyOn"
    NONEMPTY_RIGHT_OF = "NonemptyRightOf"  # G(c^+) != empty
    SUPREMUM = "Supremum"  # I is nonempty with sup I = c
    NONEMPTY_LARGE = "NonemptyLargeAlpha"
    NONEMPTY_SOME = "NonemptySomeAlpha"
    EMPTY_BELOW = "EmptyBelow"  # empty for alpha <= c
    EMPTY_ABOVE = "EmptyAbove"  # empty for alpha >= c
    EMPTY_ALL = "EmptyAll"
    ANNOTATION = "Annotation"


_NONEMPTY_KINDS = {
    EvKind.NONEMPTY_ON, EvKind.NONEMPTY_RIGHT_OF, EvKind.SUPREMUM,
    EvKind.NONEMPTY_LARGE, EvKind.NONEMPTY_SOME,
}


@dataclass(frozen=True)
class Evidence:
    kind: EvKind
    citation: str
    rule: str = ""
    value: Optional[ExtRat] = None
    interval: Optional[OpenInterval] = None
    note: str = ""

    def __post_init__(self):
        if self.citation not in statement_table():
            raise KeyError(f"unknown citation {self.citation!r}")

    @property
    def quote(self) -> str:
        return statement_table()[self.citation]["quote"]

    def to_dict(self) -> dict:
        out = {"kind": self.kind.value, "citation": self.citation, "rule": self.rule}
        if self.value is not None:
            out["value"] = fmt_ext(self.value)
        if self.interval is not None:
            out["interval"] = [fmt_ext(self.interval.lo), fmt_ext(self.interval.hi)]
        if self.note:
            out["note"] = self.note
        return out

    def __str__(self):
        body = ""
        if self.interval is not None:
            body = str(self.interval)
        elif self.value is not None:
            body = fmt_ext(self.value)
        return f"{self.rule}:{self.kind.value}({body}) [{self.citation}]"


class Status(str, Enum):
    EMPTY_ALL = "EMPTY_ALL"
    EXACT = "EXACT"
    PARTIAL = "PARTIAL"
    UNKNOWN = "UNKNOWN"


class InconsistentEvidence(RuntimeError):
    pass


@dataclass(frozen=True)
class AlphaKnowledge:
    st: SystemType
    status: Status
    nonempty_hull: Optional[OpenInterval]
    empty_below: Fraction  # empty for 0 < alpha <= empty_below
    empty_above: ExtRat  # empty for alpha >= empty_above
    evidence: Tuple[Evidence, ...]
    inf_known: Optional[ExtRat] = None
    sup_known: Optional[ExtRat] = None

    @property
    def interval(self) -> Optional[OpenInterval]:
        if self.status is Status.EXACT:
            return OpenInterval(self.inf_known, self.sup_known)
        return None

    @property
    def exists(self) -> bool:
        return self.status in (Status.EXACT, Status.PARTIAL)

    @property
    def dimension(self) -> Optional[int]:
        return beta(self.st) if self.exists else None

    @property
    def citations(self) -> List[str]:
        """Citations of the evidence that decides the status."""
        if self.status is Status.UNKNOWN:
            return []
        keep = []
        for ev in self.evidence:
            if ev.kind is EvKind.ANNOTATION:
                continue
            if self.status is Status.EMPTY_ALL and ev.kind in _NONEMPTY_KINDS:
                continue
            if ev.citation not in keep:
                keep.append(ev.citation)
        return keep

    def contains(self, alpha) -> Optional[bool]:
        """True if alpha is certified nonempty, False if certified empty,
        None if undecided."""
        if self.status is Status.EMPTY_ALL:
            return False
        if alpha <= self.empty_below or alpha >= self.empty_above:
            return False
        hull = self.interval or self.nonempty_hull
        if hull is not None and alpha in hull:
            return True
        return None


def merge(evidence: List[Evidence], st: Optional[SystemType] = None) -> AlphaKnowledge:
    """Fold evidence into knowledge. Raises ``InconsistentEvidence`` when a
    certified-nonempty piece meets a certified-empty one."""
    evidence = list(evidence)
    empty_all = any(ev.kind is EvKind.EMPTY_ALL for ev in evidence)
    lower = max([ev.value for ev in evidence if ev.kind is EvKind.EMPTY_BELOW], default=Fraction(0))
    upper = min([ev.value for ev in evidence if ev.kind is EvKind.EMPTY_ABOVE], default=INF)

    intervals = [ev.interval for ev in evidence if ev.kind is EvKind.NONEMPTY_ON]
    for ev in evidence:
        if ev.kind is EvKind.NONEMPTY_LARGE:
            if st is None:
                raise ValueError("large-alpha evidence needs the system type")
            intervals.append(large_alpha_interval(st))
    hull = None
    for iv in intervals:
        if iv.empty:
            continue
        hull = iv if hull is None else hull.hull(iv)
    rights = [ev.value for ev in evidence if ev.kind is EvKind.NONEMPTY_RIGHT_OF]
    sups = {ev.value for ev in evidence if ev.kind is EvKind.SUPREMUM}
    exists = hull is not None or bool(rights) or bool(sups) or any(
        ev.kind is EvKind.NONEMPTY_SOME for ev in evidence
    )

    def fail(msg):
        where = f" for {st}" if st is not None else ""
        raise InconsistentEvidence(msg + where + ": " + "; ".join(map(str, evidence)))

    if exists and (empty_all or lower >= upper):
        fail("nonempty evidence against emptiness for all alpha")
    if hull is not None and (hull.lo < lower or hull.hi > upper):
        fail(f"nonempty hull {hull} meets empty rays (0,{fmt_ext(lower)}] / [{fmt_ext(upper)},inf)")
    for r in rights:
        if r < lower or r >= upper:
            fail(f"nonempty right of {fmt_ext(r)} meets an empty ray")
    if len(sups) > 1:
        fail("conflicting suprema")
    if sups:
        s = next(iter(sups))
        if s > upper or s <= lower or (hull is not None and s < hull.hi):
            fail(f"supremum {fmt_ext(s)} conflicts with other evidence")

    inf_known = sup_known = None
    if exists:
        lows = rights + ([hull.lo] if hull is not None else [])
        if lows and min(lows) == lower:
            inf_known = lower
        if sups:
            sup_known = next(iter(sups))
        elif hull is not None and hull.hi == upper:
            sup_known = upper

    if empty_all or (not exists and lower >= upper):
        status = Status.EMPTY_ALL
    elif exists and inf_known is not None and sup_known is not None:
        status = Status.EXACT
        hull = OpenInterval(inf_known, sup_known)
    elif exists:
        status = Status.PARTIAL
    else:
        status = Status.UNKNOWN
    return AlphaKnowledge(
        st=st, status=status, nonempty_hull=hull, empty_below=lower,
        empty_above=upper, evidence=tuple(evidence),
        inf_known=inf_known, sup_known=sup_known,
    )


def large_alpha_interval(st: SystemType) -> OpenInterval:
    """Where nonemptiness for large alpha already holds."""
    a, t = decompose(st.n, st.d)
    if t > 0 and a >= 2 and st.k >= 1:
        return OpenInterval(Fraction(t * (st.n - t), math.gcd(st.n, st.k)), INF)
    return OpenInterval(Fraction(max(st.d * (st.n - 1), 0)), INF)


# ---------------------------------------------------------------- rules

@dataclass(frozen=True)
class Rule:
    id: str
    citations: Tuple[str, ...]
    summary: str
    fn: Callable[[SystemType, "Ctx"], List[Evidence]]


class Ctx:
    """Rule context: memoised lookups of smaller types."""

    def nonempty_at(self, n: int, d: int, k: int, alpha) -> Optional[bool]:
        return nonempty_at(n, d, k, alpha)


def _iff(rule: str, cite: str, lo, hi) -> List[Evidence]:
    """Evidence for 'nonempty iff lo < alpha < hi'."""
    lo = Fraction(lo)
    out = [
        Evidence(EvKind.NONEMPTY_ON, cite, rule, interval=OpenInterval(lo, hi)),
        Evidence(EvKind.EMPTY_BELOW, cite, rule, value=lo),
    ]
    if hi is not INF:
        out.append(Evidence(EvKind.EMPTY_ABOVE, cite, rule, value=Fraction(hi)))
    return out


def _empty(rule: str, cite: str, note: str = "") -> List[Evidence]:
    return [Evidence(EvKind.EMPTY_ALL, cite, rule, note=note)]


def _ineq61(n, a, t, k) -> bool:
    return (a - 1) * t <= a * (a * n - k) + (a - 2) * n


def r_basic(st: SystemType, ctx) -> List[Evidence]:
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    out = []
    if d <= 0:
        out += _empty("R0", "def_alpha", "d <= 0")
    if beta(st) < 0:
        out += _empty("R0", "t01", f"beta = {beta(st)} < 0")
    if n >= 2 and d > 0 and t > 0 and a - 1 <= 0:
        out += _empty("R0", "l01", "generic splitting type has a factor of degree <= 0")
    if t > 0:
        out.append(Evidence(EvKind.EMPTY_BELOW, "prop04", "R0", value=Fraction(t, k)))
    if 0 < k < n:
        l, m = lm_decompose(st)
        hi = Fraction(d, n - k) - Fraction(m * n, k * (n - k))
        out.append(Evidence(EvKind.EMPTY_ABOVE, "prop04", "R0", value=hi))
    return out


def r_rank_one(st, ctx):
    n, d, k = st.as_tuple()
    if n == 1 and d >= 1 and k <= d + 1:
        return [Evidence(EvKind.NONEMPTY_ON, "rank1", "R0b", interval=OpenInterval(Fraction(0), INF))]
    return []


def r1_t02(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if not (0 < k < n and t == 0 and a >= 1):
        return []
    if k * ((a + 1) * n - k) >= n * n - 1:
        return [Evidence(EvKind.NONEMPTY_RIGHT_OF, "t02", "R1", value=Fraction(0))]
    return _empty("R1", "t02")


def r2_t03_k1(st, ctx):
    n, d, k = st.as_tuple()
    if k != 1 or n < 2:
        return []
    a, t = decompose(n, d)
    l, m = lm_decompose(st)
    if l >= 1:
        return _iff("R2", "t03_k1", t, Fraction(d - m * n, n - 1))
    return _empty("R2", "t03_k1", "l < 1")


def r3_t03_k2(st, ctx):
    n, d, k = st.as_tuple()
    if k != 2 or n < 3:
        return []
    a, t = decompose(n, d)
    l, m = lm_decompose(st)
    if l >= 1 and 2 * d >= n * (n - 2) + 3 and (n, d) != (4, 6):
        return _iff("R3", "t03_k2", Fraction(t, 2), Fraction(2 * d - m * n, 2 * (n - 2)))
    return _empty("R3", "t03_k2")


_K3_EXCEPTIONS = {
    (4, 7): (Fraction(3, 5), Fraction(7)),
    (5, 9): (Fraction(3, 4), Fraction(11, 3)),
    (6, 11): (Fraction(1), Fraction(7, 3)),
    (7, 13): (Fraction(3, 2), Fraction(8, 3)),
}


def r4_t03_k3(st, ctx):
    n, d, k = st.as_tuple()
    if k != 3 or n < 4:
        return []
    a, t = decompose(n, d)
    l, m = lm_decompose(st)
    if not (l >= 1 and 3 * d >= n * (n - 3) + 8 and (n, d) != (6, 9)):
        return _empty("R4", "t03_k3")
    if (n, d) in _K3_EXCEPTIONS:
        return _iff("R4", "t03_k3", *_K3_EXCEPTIONS[(n, d)])
    return _iff("R4", "t03_k3", Fraction(t, 3), Fraction(3 * d - m * n, 3 * (n - 3)))


def r5_t04(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if (n, k) == (2, 2):
        return _iff("R5", "t04_n2k2", Fraction(t, 2), INF) if d > 2 else _empty("R5", "t04_n2k2")
    if (n, k) == (2, 3):
        if d < 2:
            return _empty("R5", "t04_n2k3")
        lo = Fraction(1) if d == 3 else Fraction(t, 3)
        return _iff("R5", "t04_n2k3", lo, INF)
    if (n, k) == (3, 3):
        if d < 4:
            return _empty("R5", "t04_n3k3")
        lo = Fraction(2, 3) if d == 5 else Fraction(t, 3)
        return _iff("R5", "t04_n3k3", lo, INF)
    return []


def r6_prop08_km1(st, ctx):
    n, d, k = st.as_tuple()
    if n < 2 or k != n - 1:
        return []
    if d < n:
        return _empty("R6", "prop08_km1")
    return [
        Evidence(EvKind.SUPREMUM, "prop08_km1", "R6", value=Fraction(d)),
        Evidence(EvKind.EMPTY_ABOVE, "prop08_km1", "R6", value=Fraction(d)),
    ]


def r7_prop08_k0(st, ctx):
    n, d, k = st.as_tuple()
    if n < 2 or k != n:
        return []
    if d <= n:
        return _empty("R7", "prop08_k0")
    out = [Evidence(EvKind.NONEMPTY_LARGE, "prop08_k0", "R7")]
    a, t = decompose(n, d)
    if t == 0 and a >= 2:
        out.append(Evidence(EvKind.NONEMPTY_ON, "r1", "R7", interval=OpenInterval(Fraction(0), INF)))
    return out


def r8_prop08_kp1(st, ctx):
    n, d, k = st.as_tuple()
    if n < 2 or k != n + 1:
        return []
    if d < n:
        return _empty("R8", "prop08_kp1")
    a, t = decompose(n, d)
    return [Evidence(EvKind.NONEMPTY_ON, "prop08_kp1", "R8", interval=OpenInterval(Fraction(t), INF))]


def r9_t1(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if n < 2 or k <= n or t != 0 or a < 1:
        return []
    if k * ((a + 1) * n - k) >= n * n - 1:
        return _iff("R9", "t1", 0, INF)
    return _empty("R9", "t1")


def r10_necessity(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if n < 2 or t == 0 or k < 1:
        return []
    if k >= a * n:
        return _empty("R10", "prop1", "k >= an")
    return [Evidence(EvKind.EMPTY_BELOW, "prop1", "R10", value=alpha_c(st))]


def r11_large_alpha(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if n < 2 or k < n or t == 0 or k >= a * n:
        return []
    if k == n or k <= a * n - t or a >= t:
        return [Evidence(EvKind.NONEMPTY_LARGE, "t2", "R11")]
    return []


def r12_t3(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if a < 2 or not 1 <= t <= n - 1 or k < 1:
        return []
    out = []
    if k >= a * t and certify.certify_empty_ext_high(st).ok:
        out += _empty("R12", "prop5")
    if k <= a * t and certify.certify_empty_ext_low(st).ok:
        out += _empty("R12", "prop9")
    return out


def r13_t4a(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if a < 2 or not 1 <= t <= n - 1 or not a * t <= k < a * n or not _ineq61(n, a, t, k):
        return []
    ac = Fraction(n - t, a * n - k)
    child = (n - t, a * (n - t), k - a * t)
    if ctx.nonempty_at(*child, ac):
        return [Evidence(EvKind.NONEMPTY_RIGHT_OF, "t4a", "R13", value=ac,
                         note=f"child {child} nonempty at {fmt_ext(ac)}")]
    return []


def r14_t4b(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if a < 2 or not 1 <= t <= n - 1 or not 1 <= k <= a * t or t > (a + 1) * k - n:
        return []
    ac = Fraction(t, k)
    child = (t, (a - 1) * t, k)
    if ctx.nonempty_at(*child, ac):
        return [Evidence(EvKind.NONEMPTY_RIGHT_OF, "t4b", "R14", value=ac,
                         note=f"child {child} nonempty at {fmt_ext(ac)}")]
    return []


def r15_t5(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if a < 2 or not 1 <= t <= n - 1 or k < n or k >= a * n:
        return []
    hit = []
    if (a - 1) * t + n <= k <= a * n - t:
        hit.append("a")
    if (a - 1) * t + n <= k < a * n and a >= t and _ineq61(n, a, t, k):
        hit.append("b")
    if k == a * t + 1 and a >= max(n - t - 1, t) and _ineq61(n, a, t, k):
        hit.append("c")
    if k < a * t and k * (a * t - k) >= t * t - 1:
        hit.append("d")
    if not hit:
        return []
    ev = _iff("R15", "t5", alpha_c(st), INF)
    return [Evidence(e.kind, e.citation, e.rule, e.value, e.interval, note="case " + ",".join(hit)) for e in ev]


def r16_prop8(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if t != 1 or n < 2 or a < 2 or not 1 <= k < a * n:
        return []
    out = []
    if n == 2 and 2 <= k < 2 * a:
        out += _iff("R16", "c4", max(Fraction(1, k), Fraction(1, 2 * a - k)), INF)
    ac = alpha_c(st)
    case = None
    if k <= a and (a + 1) * k >= n + 1:
        case = "a"
    elif k >= n + a - 1:
        case = "b"
    elif a < k < n + a - 1 and ctx.nonempty_at(n - 1, a * (n - 1), k - a, ac):
        case = "c"
    if case is None:
        return out
    if k >= n:
        out += [Evidence(e.kind, e.citation, e.rule, e.value, e.interval, note=f"case {case}")
                for e in _iff("R16", "prop8", ac, INF)]
    else:
        out.append(Evidence(EvKind.NONEMPTY_RIGHT_OF, "prop8", "R16", value=ac, note=f"case {case}"))
    return out


def r17_c5(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if n < 2 or t != n - 1 or a < n - 1 or not a * (n - 1) < k < a * n:
        return []
    return _iff("R17", "c5", Fraction(1, a * n - k), INF)


def r18_c3(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if a < 2 or not 1 <= t <= n - 1 or k != a * t + 1 or k < n:
        return []
    if a < max(n - t - 1, t) or not _ineq61(n, a, t, k):
        return []
    return _iff("R18", "c3", Fraction(n - t, a * (n - t) - 1), INF)


def r19_c1(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if n < 2 or t != 1 or a < 2:
        return []
    h = a * n - k
    if h < 1 or n % h:
        return []
    return _iff("R19", "c1", Fraction(n - 1, h), INF)


def r20_ex2(st, ctx):
    if certify.certify_empty_special(st).ok:
        return _empty("R20", "ex2")
    return []


def r21_prop07(st, ctx):
    if st.as_tuple() == (6, 7, 4):
        return _iff("R21", "prop07", Fraction(5, 4), Fraction(2))
    return []


def r22_prop05(st, ctx):
    n, d, k = st.as_tuple()
    if not 0 < k < n:
        return []
    a, t = decompose(n, d)
    l, m = lm_decompose(st)
    iv = OpenInterval(Fraction(t, k), Fraction(l * n + t, k))
    return [Evidence(EvKind.ANNOTATION, "prop05", "R22", interval=iv,
                     note="expected interval outside a finite exceptional set")]


def r23_prop06(st, ctx):
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if n < 2 or k < 2 or (a + 1) * k < n + t:
        return []
    if (t == 1 and a >= k) or (t == k - 1 and a >= 2) or (t == k and a >= 3):
        return [Evidence(EvKind.NONEMPTY_RIGHT_OF, "prop06", "R23", value=Fraction(t, k))]
    return []


RULES: Tuple[Rule, ...] = (
    Rule("R0", ("def_alpha", "t01", "l01", "prop04"), "global necessary conditions", r_basic),
    Rule("R0b", ("rank1",), "rank one systems", r_rank_one),
    Rule("R1", ("t02",), "k<n, t=0: existence at 0+", r1_t02),
    Rule("R2", ("t03_k1",), "k=1 exact interval", r2_t03_k1),
    Rule("R3", ("t03_k2",), "k=2 exact interval", r3_t03_k2),
    Rule("R4", ("t03_k3",), "k=3 exact interval with exceptions", r4_t03_k3),
    Rule("R5", ("t04_n2k2", "t04_n2k3", "t04_n3k3"), "n=2,3 with k=2,3", r5_t04),
    Rule("R6", ("prop08_km1",), "k=n-1", r6_prop08_km1),
    Rule("R7", ("prop08_k0", "r1"), "k=n", r7_prop08_k0),
    Rule("R8", ("prop08_kp1",), "k=n+1", r8_prop08_kp1),
    Rule("R9", ("t1",), "k>n, t=0 complete answer", r9_t1),
    Rule("R10", ("prop1",), "t>0 necessity: k<an, alpha>alpha_c", r10_necessity),
    Rule("R11", ("t2", "c0"), "large-alpha existence", r11_large_alpha),
    Rule("R12", ("prop5", "prop9"), "emptiness by Ext counts", r12_t3),
    Rule("R13", ("t4a",), "alpha_c+ existence, high k", r13_t4a),
    Rule("R14", ("t4b",), "alpha_c+ existence, low k", r14_t4b),
    Rule("R15", ("t5",), "all alpha > alpha_c", r15_t5),
    Rule("R16", ("prop8", "c4"), "t=1 refinements", r16_prop8),
    Rule("R17", ("c5",), "t=n-1 refinement", r17_c5),
    Rule("R18", ("c3",), "k=at+1 refinement", r18_c3),
    Rule("R19", ("c1",), "t=1, k=an-h with h|n", r19_c1),
    Rule("R20", ("ex2",), "(n,2n-t,t) with n>=2t", r20_ex2),
    Rule("R21", ("prop07",), "the (6,7,4) case", r21_prop07),
    Rule("R22", ("prop05",), "expected interval annotation", r22_prop05),
    Rule("R23", ("prop06",), "small-alpha existence at (t/k)+", r23_prop06),
)


def rule_table() -> List[Rule]:
    return list(RULES)


def gather_evidence(st: SystemType) -> List[Evidence]:
    ctx = Ctx()
    out: List[Evidence] = []
    for rule in RULES:
        out.extend(rule.fn(st, ctx))
    return out


@lru_cache(maxsize=None)
def _classify(n: int, d: int, k: int) -> AlphaKnowledge:
    st = SystemType(n, d, k)
    return merge(gather_evidence(st), st)


def classify(st: SystemType) -> AlphaKnowledge:
    if st.k == 0:
        raise ValueError("classification needs k > 0")
    return _classify(st.n, st.d, st.k)


def nonempty_at(n: int, d: int, k: int, alpha) -> Optional[bool]:
    """Is G(alpha; n, d, k) certified nonempty (True), certified empty
    (False), or undecided (None)? Accepts k = 0."""
    if k < 0:
        return False
    if k == 0:
        # (E, 0) is alpha-stable iff E is stable: only line bundles qualify
        return n == 1
    return _classify(n, d, k).contains(alpha)


def clear_cache() -> None:
    _classify.cache_clear()


# ---------------------------------------------------------- conjectures

class Verdict(str, Enum):
    CONFIRMED = "CONFIRMED"
    CONTRADICTED = "CONTRADICTED"
    OPEN = "OPEN"
    NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass(frozen=True)
class ConjectureReport:
    st: SystemType
    conj1_applicable: bool
    conj1_prediction: Optional[bool]
    conj1_verdict: Verdict
    conj2_verdict: Verdict
    ex1_candidate: bool
    status: Status
    flags: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "n": self.st.n, "d": self.st.d, "k": self.st.k,
            "conj1_applicable": self.conj1_applicable,
            "conj1_prediction": self.conj1_prediction,
            "conj1_verdict": self.conj1_verdict.value,
            "conj2_verdict": self.conj2_verdict.value,
            "ex1_candidate": self.ex1_candidate,
            "status": self.status.value,
            "flags": list(self.flags),
        }


def is_ex1_candidate(st: SystemType) -> bool:
    a, t = decompose(st.n, st.d)
    n = st.n
    return a >= 2 and t == n - 1 and st.k == a * (n - 1) and a + 1 < n <= a * a + a - 1


def conjecture_scan(st: SystemType) -> ConjectureReport:
    n, d, k = st.as_tuple()
    a, t = decompose(n, d)
    if k < n or not 1 <= t <= n - 1 or a < 2:
        raise ValueError("conjecture scan needs k >= n, 1 <= t <= n-1, a >= 2")
    know = classify(st)
    applicable = k * ((a + 1) * n - t - k) >= n * n - 1
    prediction = None
    verdict1 = Verdict.NOT_APPLICABLE
    if applicable:
        prediction = (a * t < k < a * n and _ineq61(n, a, t, k)) or k <= a * t
        if know.status is Status.EMPTY_ALL:
            verdict1 = Verdict.CONTRADICTED if prediction else Verdict.CONFIRMED
        elif know.exists:
            verdict1 = Verdict.CONFIRMED if prediction else Verdict.CONTRADICTED
        else:
            verdict1 = Verdict.OPEN
    # monotonicity: contradicted only by a certified finite upper endpoint
    if not know.exists:
        verdict2 = Verdict.NOT_APPLICABLE
    elif know.empty_above is not INF:
        verdict2 = Verdict.CONTRADICTED
    elif know.sup_known is INF:
        verdict2 = Verdict.CONFIRMED
    else:
        verdict2 = Verdict.OPEN
    ex1 = is_ex1_candidate(st)
    flags = []
    if ex1:
        flags.append("ex1_candidate")
    if verdict1 is Verdict.CONTRADICTED:
        flags.append("conj1_contradicted")
    if verdict2 is Verdict.CONTRADICTED:
        flags.append("conj2_contradicted")
    return ConjectureReport(st, applicable, prediction, verdict1, verdict2, ex1, know.status, tuple(flags))
