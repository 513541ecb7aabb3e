import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from hypermaps.ff import (
    DivisionByZero,
    Fp2Elem,
    FpElem,
    OrderUnavailable,
    is_prime,
    legendre,
    legendre_int,
    multiplicative_order,
    prime_field,
    root_of_unity,
    root_of_unity_fp2,
    root_with_rational_trace,
    sqrt_int,
    sqrt_mod,
)

SMALL_PRIMES = [3, 5, 7, 11, 13, 17, 29, 31, 41, 73, 97, 101, 113, 1009]
primes = st.sampled_from(SMALL_PRIMES)


def test_is_prime_matches_sympy():
    for n in range(-5, 5000):
        assert is_prime(n) == sympy.isprime(n), n
    for n in (2**31 - 1, 1_000_000_007, 999_999_999_989, 3_215_031_751, 3_825_123_056_546_413_051 % 10**14):
        assert is_prime(n) == sympy.isprime(n), n


def test_is_prime_refuses_beyond_deterministic_range():
    with pytest.raises(ValueError):
        is_prime(2**61 - 1)


def test_legendre_table_mod_29():
    """Exhaustive comparison against the table of squares."""
    p = 29
    squares = {x * x % p for x in range(1, p)}
    for a in range(p):
        expected = 0 if a == 0 else (1 if a in squares else -1)
        assert legendre(FpElem(a, p)) == expected


def test_legendre_small_examples():
    assert legendre(FpElem(2, 7)) == 1
    assert legendre(FpElem(3, 7)) == -1
    assert legendre(FpElem(0, 7)) == 0


@given(primes, st.integers(0, 10**6))
def test_sqrt_brute_force(p, a):
    a %= p
    roots = [x for x in range(p) if x * x % p == a]
    r = sqrt_int(a, p)
    if roots:
        assert r in roots
        assert r == min(roots)
    else:
        assert r is None


def test_sqrt_examples():
    assert sqrt_mod(FpElem(4, 13)).value == 2
    assert sqrt_mod(FpElem(5, 13)) is None
    # p = 1 mod 8 exercises the full Tonelli-Shanks loop
    for p in (17, 41, 73, 97, 113, 257):
        for a in range(1, p):
            r = sqrt_int(a, p)
            assert (r is not None) == (legendre_int(a, p) == 1)


def test_root_of_unity_examples():
    assert root_of_unity(1, 29).value == 1
    assert root_of_unity(2, 29).value == 28
    w = root_of_unity(14, 29)
    assert multiplicative_order(w.value, 29) == 14
    with pytest.raises(OrderUnavailable):
        root_of_unity(14, 31)


@given(primes, st.integers(1, 200))
def test_root_of_unity_exact_order(p, r):
    if (p - 1) % r:
        with pytest.raises(OrderUnavailable):
            root_of_unity(r, p)
        return
    w = root_of_unity(r, p)
    assert w**r == 1
    for q in sympy.primefactors(r):
        assert w ** (r // q) != 1


def test_root_of_unity_uses_least_primitive_root():
    for p in SMALL_PRIMES:
        g = sympy.primitive_root(p)
        assert prime_field(p).g == g
        assert root_of_unity(p - 1, p).value == g


def test_least_non_residue():
    for p in SMALL_PRIMES:
        nu = prime_field(p).nu
        assert legendre_int(nu, p) == -1
        assert all(legendre_int(a, p) == 1 for a in range(1, nu))


def test_not_a_prime():
    with pytest.raises(ValueError):
        prime_field(15)
    with pytest.raises(ValueError):
        prime_field(2)


@given(primes, st.integers(), st.integers(), st.integers())
def test_fp_field_axioms(p, a, b, c):
    x, y, z = FpElem(a, p), FpElem(b, p), FpElem(c, p)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == 0
    if not x.is_zero():
        assert x * x.inv() == 1
        assert x ** (p - 1) == 1


def test_fp_division_by_zero():
    with pytest.raises(DivisionByZero):
        FpElem(0, 7).inv()
    with pytest.raises(DivisionByZero):
        Fp2Elem(0, 0, 7).inv()


def _all_fp2(p):
    return [Fp2Elem(a, b, p) for a in range(p) for b in range(p)]


def test_gf169_exhaustive_sqrt():
    p = 13
    elems = _all_fp2(p)
    squares = {}
    for x in elems:
        squares.setdefault(x * x, []).append(x)
    for x in elems:
        r = x.sqrt()
        if x in squares:
            assert r is not None and r * r == x
            assert (r.c0, r.c1) == min((s.c0, s.c1) for s in squares[x])
        else:
            assert r is None
    # every element of GF(p) is a square in GF(p^2)
    for a in range(p):
        assert Fp2Elem(a, 0, p).sqrt() is not None


def test_gf169_frobenius_and_norm():
    p = 13
    for x in _all_fp2(p):
        assert x**p == x.conjugate()
        assert (x * x.conjugate()).in_base_field()
        assert (x * x.conjugate()).c0 == x.norm()
        if not x.is_zero():
            assert x ** (p * p - 1) == 1
            assert x * x.inv() == 1


@given(primes, st.integers(), st.integers(), st.integers(), st.integers())
def test_fp2_multiplicative(p, a, b, c, d):
    x, y = Fp2Elem(a, b, p), Fp2Elem(c, d, p)
    assert (x * y).norm() == x.norm() * y.norm() % p
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()


def test_fp_embeds_in_fp2():
    x = FpElem(5, 11)
    assert x.to_fp2() == x
    assert hash(x.to_fp2()) == hash(x)
    assert x.to_fp2().to_fp() == x
    with pytest.raises(ValueError):
        Fp2Elem(1, 1, 11).to_fp()


@given(primes, st.integers(3, 60))
def test_root_with_rational_trace(p, r):
    if (p - 1) % r and (p + 1) % r:
        with pytest.raises(OrderUnavailable):
            root_with_rational_trace(r, p)
        return
    w = root_with_rational_trace(r, p)
    assert w**r == 1
    for q in sympy.primefactors(r):
        assert w ** (r // q) != 1
    t = w + w.inv()
    assert isinstance(t, FpElem) or t.in_base_field()


def test_root_of_unity_fp2_norm_one():
    w = root_of_unity_fp2(6, 29)
    assert w.norm() == 1
    assert not w.in_base_field()
