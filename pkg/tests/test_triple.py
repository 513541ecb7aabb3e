from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypermaps.triple import HyperbolicType, NonHyperbolicType, hyperbolic_types


def test_parse_keeps_order():
    t = HyperbolicType.parse("7,2,3")
    assert tuple(t) == (7, 2, 3)
    assert tuple(t.sorted()) == (2, 3, 7)
    assert t != t.sorted()


@pytest.mark.parametrize("text", ["2,3,6", "2,4,4", "3,3,3", "2,2,9", "1,7,7", "7,7", "a,b,c"])
def test_rejects_non_hyperbolic(text):
    with pytest.raises(NonHyperbolicType):
        HyperbolicType.parse(text)


def test_conductor():
    assert HyperbolicType(7, 7, 7).k == 14
    assert HyperbolicType(7, 2, 3).k == 84
    assert HyperbolicType(2, 4, 5).k == 40


def test_families():
    assert HyperbolicType(7, 7, 7).families() == ("doubled", "odd")
    assert HyperbolicType(3, 3, 4).families() == ("doubled",)
    assert HyperbolicType(3, 5, 5).root_orders("odd") == (3, 5, 5)
    with pytest.raises(ValueError):
        HyperbolicType(3, 3, 4).root_orders("odd")


def test_sweep_size_and_order():
    types = hyperbolic_types(13)
    assert all(t.mu < 1 for t in types)
    assert all(t.l <= t.m <= t.n for t in types)
    assert len(types) == len(set(types)) == 346


@given(st.integers(2, 40), st.integers(2, 40), st.integers(2, 40))
def test_hyperbolic_iff_mu_below_one(l, m, n):
    mu = Fraction(1, l) + Fraction(1, m) + Fraction(1, n)
    if mu < 1:
        assert HyperbolicType(l, m, n).mu == mu
    else:
        with pytest.raises(NonHyperbolicType):
            HyperbolicType(l, m, n)
