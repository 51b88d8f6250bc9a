from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cohsys import knowledge as kn
from cohsys.core import INF, OpenInterval, SystemType, alpha_c, decompose
from cohsys.knowledge import EvKind, Evidence, Status

from . import oracles


def K(n, d, k):
    return kn.classify(SystemType(n, d, k))


def exact(n, d, k):
    know = K(n, d, k)
    assert know.status is Status.EXACT, (n, d, k, know.status, [str(e) for e in know.evidence])
    return know.interval.lo, know.interval.hi


@pytest.mark.parametrize("typ,lo,hi", [
    ((6, 7, 4), Fraction(5, 4), 2),
    ((2, 3, 3), 1, INF),
    ((5, 8, 9), 3, INF),
    ((4, 7, 3), Fraction(3, 5), 7),
    ((3, 5, 3), Fraction(2, 3), INF),
])
def test_exact_examples(typ, lo, hi):
    assert exact(*typ) == (lo, hi)


@pytest.mark.parametrize("typ", [(5, 7, 9), (4, 6, 2), (6, 9, 3), (3, 0, 1), (3, 5, 6)])
def test_empty_examples(typ):
    know = K(*typ)
    assert know.status is Status.EMPTY_ALL and not know.exists
    assert know.dimension is None and know.citations


def test_dimension_when_nonempty():
    assert K(6, 7, 4).dimension == 1


def test_classify_rejects_k0():
    with pytest.raises(ValueError):
        K(3, 5, 0)


def test_nonempty_at():
    assert kn.nonempty_at(1, 4, 0, 1) is True
    assert kn.nonempty_at(2, 4, 0, 1) is False
    assert kn.nonempty_at(6, 7, 4, Fraction(3, 2)) is True
    assert kn.nonempty_at(6, 7, 4, 2) is False
    assert kn.nonempty_at(6, 7, 4, Fraction(5, 4)) is False


def test_merge_examples():
    ev = [
        Evidence(EvKind.NONEMPTY_ON, "prop07", interval=OpenInterval(Fraction(5, 4), 2)),
        Evidence(EvKind.EMPTY_BELOW, "prop07", value=Fraction(5, 4)),
        Evidence(EvKind.EMPTY_ABOVE, "prop07", value=Fraction(2)),
    ]
    know = kn.merge(ev)
    assert know.status is Status.EXACT and know.interval == OpenInterval(Fraction(5, 4), 2)
    ev = [
        Evidence(EvKind.NONEMPTY_ON, "t5", interval=OpenInterval(Fraction(3), INF)),
        Evidence(EvKind.EMPTY_BELOW, "t2", value=Fraction(3)),
    ]
    assert kn.merge(ev).interval == OpenInterval(3, INF)
    assert kn.merge([]).status is Status.UNKNOWN


def test_merge_partial_and_inconsistent():
    ev = [Evidence(EvKind.NONEMPTY_ON, "t5", interval=OpenInterval(Fraction(4), INF)),
          Evidence(EvKind.EMPTY_BELOW, "t2", value=Fraction(3))]
    know = kn.merge(ev)
    assert know.status is Status.PARTIAL and know.contains(Fraction(7, 2)) is None
    assert know.contains(5) is True and know.contains(3) is False
    with pytest.raises(kn.InconsistentEvidence):
        kn.merge(ev + [Evidence(EvKind.EMPTY_ALL, "prop1")])
    with pytest.raises(kn.InconsistentEvidence):
        kn.merge(ev + [Evidence(EvKind.EMPTY_ABOVE, "prop08_km1", value=Fraction(5))])


def test_unknown_citation_rejected():
    with pytest.raises(KeyError):
        Evidence(EvKind.EMPTY_ALL, "no_such_key")


def test_rule_table_citations_resolve():
    table = kn.statement_table()
    rules = kn.rule_table()
    assert len({r.id for r in rules}) == len(rules) >= 23
    for r in rules:
        assert r.citations and all(c in table for c in r.citations)
        assert all(table[c]["quote"] for c in r.citations)


def _rule(rid):
    return next(r for r in kn.rule_table() if r.id == rid)


def test_r19_guard_failure_gives_nothing():
    assert _rule("R19").fn(SystemType(4, 7, 2), kn.Ctx()) == []


def test_r13_recursion_fires_on_589():
    out = _rule("R13").fn(SystemType(5, 8, 9), kn.Ctx())
    assert any(e.kind is EvKind.NONEMPTY_RIGHT_OF and e.value == 3 for e in out)
    assert kn.nonempty_at(3, 6, 5, 3) is True


def test_annotation_never_decides():
    know = K(7, 10, 5)
    assert all(c != "prop05" for c in know.citations)


@pytest.mark.parametrize("d", range(3, 9))
def test_rank_two_k2(d):
    a, t = decompose(2, d)
    assert exact(2, d, 2) == (Fraction(t, 2), INF)


def test_conjecture_scan_examples():
    rep = kn.conjecture_scan(SystemType(5, 6, 8))
    assert rep.ex1_candidate and "ex1_candidate" in rep.flags
    rep = kn.conjecture_scan(SystemType(5, 9, 8))
    assert not rep.ex1_candidate
    assert rep.conj1_verdict in (kn.Verdict.CONFIRMED, kn.Verdict.OPEN)
    with pytest.raises(ValueError):
        kn.conjecture_scan(SystemType(3, 6, 4))
    assert rep.to_dict()["n"] == 5


lattice = st.integers(1, 9).flatmap(
    lambda n: st.tuples(st.just(n), st.integers(-2, 6), st.integers(0, n - 1)).flatmap(
        lambda nat: st.tuples(st.just(nat), st.integers(1, max(1, (nat[1] + 1) * nat[0])))))


@settings(max_examples=300, deadline=None)
@given(lattice)
def test_classify_invariants(pt):
    (n, a, t), k = pt
    d = a * n - t
    know = K(n, d, k)
    if know.exists:
        assert oracles.expected_dim(n, d, k) >= 0
        hull = know.interval or know.nonempty_hull
        if hull is not None:
            assert hull.lo >= know.empty_below and hull.hi <= know.empty_above
            if t > 0 and 0 < k < a * n:
                assert hull.lo >= oracles.critical_alpha(n, d, k)
    if know.status is Status.EXACT:
        assert know.interval.lo == know.empty_below
        assert know.interval.hi == know.empty_above or know.interval.hi == know.sup_known
    assert (know.status is Status.UNKNOWN) == (not know.citations)


@settings(max_examples=150, deadline=None)
@given(lattice, st.data())
def test_adding_evidence_is_monotone(pt, data):
    (n, a, t), k = pt
    stype = SystemType(n, a * n - t, k)
    full = kn.gather_evidence(stype)
    keep = data.draw(st.lists(st.booleans(), min_size=len(full), max_size=len(full)))
    part = [e for e, b in zip(full, keep) if b]
    big, small = kn.merge(full, stype), kn.merge(part, stype)
    assert small.empty_below <= big.empty_below and small.empty_above >= big.empty_above
    if small.nonempty_hull is not None:
        h = big.nonempty_hull
        assert h is not None and h.lo <= small.nonempty_hull.lo and small.nonempty_hull.hi <= h.hi


def test_partial_respects_alpha_c():
    for n in range(2, 8):
        for a in range(1, 5):
            for t in range(1, n):
                for k in range(1, a * n):
                    know = K(n, a * n - t, k)
                    if know.status is Status.PARTIAL and know.nonempty_hull is not None:
                        assert know.nonempty_hull.lo >= alpha_c(SystemType(n, a * n - t, k))


def test_clear_cache():
    K(6, 7, 4)
    kn.clear_cache()
    assert exact(6, 7, 4) == (Fraction(5, 4), 2)
