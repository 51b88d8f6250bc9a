from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cohsys.core import (
    INF, OpenInterval, SystemType, alpha_c, alpha_slope, beta, c21, decompose,
    ext1_dim, fmt_ext, gcd_alpha_bound, h0_split, lm_decompose, parse_ext, parse_rat,
)

from . import oracles


def test_decompose_examples():
    assert decompose(6, 7) == (2, 5)
    assert decompose(3, 6) == (2, 0)
    assert decompose(2, 3) == (2, 1)
    assert decompose(4, -1) == (0, 1)


def test_lm_examples():
    assert lm_decompose(SystemType(4, 6, 2)) == (1, 0)
    assert lm_decompose(SystemType(4, 7, 3)) == (5, 0)
    with pytest.raises(ValueError):
        lm_decompose(SystemType(4, 7, 4))
    with pytest.raises(ValueError):
        lm_decompose(SystemType(4, 7, 0))


def test_beta_alpha_c_examples():
    assert beta(SystemType(6, 7, 4)) == 1
    assert alpha_c(SystemType(6, 7, 4)) == Fraction(5, 4)
    assert alpha_c(SystemType(5, 8, 9)) == 3
    assert alpha_c(SystemType(2, 3, 3)) == 1
    assert gcd_alpha_bound(SystemType(6, 7, 4)) == Fraction(5, 2)


@pytest.mark.parametrize("bad", [(3, 6, 2), (3, 5, 0), (3, 5, 6)])
def test_alpha_c_rejects(bad):
    with pytest.raises(ValueError):
        alpha_c(SystemType(*bad))


def test_system_type_validation():
    with pytest.raises(ValueError):
        SystemType(0, 1, 1)
    with pytest.raises(ValueError):
        SystemType(2, 1, -1)
    with pytest.raises(TypeError):
        SystemType(2, 1.0, 1)


def test_c21_and_ext1():
    assert c21((1, 1, 2), (1, 2, 0)) == oracles.ext_euler((1, 1, 2), (1, 2, 0))
    assert ext1_dim((1, 1, 2), (1, 2, 0), hom_dim=1) == c21((1, 1, 2), (1, 2, 0)) + 1
    with pytest.raises(ValueError):
        ext1_dim((3, 0, 0), (1, 5, 0))
    with pytest.raises(ValueError):
        ext1_dim((1, 1, 1), (1, 1, 1), hom_dim=-1)


def test_rational_parsing():
    assert parse_rat("5/4") == Fraction(5, 4)
    assert parse_rat(" 7 ") == 7
    assert parse_ext("inf") is INF
    for bad in ("1.25", "1e3", "", "1E2"):
        with pytest.raises(ValueError):
            parse_rat(bad)
    assert fmt_ext(Fraction(10, 4)) == "5/2"
    assert fmt_ext(Fraction(4, 2)) == "2"
    assert fmt_ext(INF) == "inf"
    assert fmt_ext(None) == ""


def test_open_interval():
    iv = OpenInterval(Fraction(5, 4), 2)
    assert Fraction(3, 2) in iv and Fraction(5, 4) not in iv and 2 not in iv
    assert OpenInterval(1, 1).empty
    assert 10 ** 9 in OpenInterval(0, INF)
    assert str(OpenInterval(Fraction(1, 2), INF)) == "]1/2, inf["
    assert INF > 10 ** 100 and not INF < 3 and INF == INF
    assert OpenInterval(0, 1).hull(OpenInterval(3, INF)) == OpenInterval(0, INF)


def test_h0_split():
    assert h0_split([2, 1]) == 5
    assert h0_split([2, -3]) == 3


@given(st.integers(1, 30), st.integers(-60, 200))
def test_decompose_matches_oracle(n, d):
    a, t = decompose(n, d)
    assert (a, t) == oracles.split(n, d)
    assert 0 <= t < n and a * n - t == d


@given(st.integers(1, 20), st.integers(-10, 80), st.integers(0, 40))
def test_beta_matches_oracle(n, d, k):
    assert beta(SystemType(n, d, k)) == oracles.expected_dim(n, d, k)


@given(st.integers(2, 20), st.integers(1, 60), st.integers(1, 80))
def test_alpha_c_matches_oracle(n, d, k):
    stype = SystemType(n, d, k)
    a, t = decompose(n, d)
    if t == 0 or k >= a * n:
        with pytest.raises(ValueError):
            alpha_c(stype)
    else:
        assert alpha_c(stype) == oracles.critical_alpha(n, d, k)


@given(st.integers(1, 10), st.integers(-5, 30), st.integers(0, 10),
       st.integers(1, 10), st.integers(-5, 30), st.integers(0, 10))
def test_c21_matches_oracle(n2, d2, k2, n1, d1, k1):
    assert c21((n2, d2, k2), (n1, d1, k1)) == oracles.ext_euler((n2, d2, k2), (n1, d1, k1))


@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 10 ** 6))
def test_fmt_parse_roundtrip(p, q):
    x = Fraction(p, q)
    assert parse_ext(fmt_ext(x)) == x


@given(st.integers(1, 9), st.integers(-20, 40), st.integers(0, 20),
       st.fractions(min_value=0, max_value=50))
def test_alpha_slope(n, d, k, alpha):
    assert alpha_slope(n, d, k, alpha) == (d + alpha * k) / Fraction(n)
