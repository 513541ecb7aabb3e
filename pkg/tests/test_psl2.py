import itertools
import random
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypermaps.ff import FpElem, OrderUnavailable, prime_field
from hypermaps.psl2 import (
    BadIndex,
    BoundExceeded,
    CapExceeded,
    DegenerateD,
    ProjMat2,
    all_index_choices,
    build_generators,
    compute_d,
    element_order,
    enumerate_group,
    index_classes,
    is_full_psl,
    psl2_order,
    verify_type,
)
from hypermaps.triple import HyperbolicType

T777 = HyperbolicType(7, 7, 7)


def _sl2(p):
    for a, b, c, d in itertools.product(range(p), repeat=4):
        if (a * d - b * c) % p == 1:
            yield a, b, c, d


# ------------------------------------------------------------ canonical form


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_canonical_form_exhaustive(p):
    seen = set()
    count = 0
    for a, b, c, d in _sl2(p):
        count += 1
        M = ProjMat2.from_ints(a, b, c, d, p)
        N = ProjMat2.from_ints(-a, -b, -c, -d, p)
        assert M == N and hash(M) == hash(N)
        first = next(x for x in M.entries if not x.is_zero())
        assert first.value <= (p - 1) // 2
        seen.add(M)
    assert count == p * (p * p - 1)
    assert len(seen) == psl2_order(p)


def test_distinct_classes_differ():
    p = 7
    M = ProjMat2.from_ints(1, 1, 0, 1, p)
    assert M != ProjMat2.identity(p)
    assert M != ProjMat2.from_ints(1, 2, 0, 1, p)


def test_fp2_and_fp_forms_compare_equal():
    M = ProjMat2.from_ints(2, 3, 1, 2, 5)
    assert M.as_fp2() == M
    assert M.as_fp2().reduced().field == "p"


# ------------------------------------------------------------ d and orders


def test_compute_d_examples():
    p = 29
    f = lambda v: FpElem(v, p)  # noqa: E731
    assert compute_d(f(0), f(0), f(0)) == p - 4
    assert compute_d(f(2), f(2), f(2)) == 0
    for xs in range(p):
        assert compute_d(f(xs), f(0), f(1)) == (xs * xs - 3) % p


def test_element_order_examples():
    data = build_generators(T777, 29)
    assert element_order(ProjMat2.identity(29)) == 1
    assert element_order(data.Z) == 2
    assert element_order(data.R) == 7


def test_element_order_bound():
    M = ProjMat2.from_ints(1, 1, 0, 1, 29)
    assert element_order(M) == 29
    with pytest.raises(BoundExceeded):
        element_order(M, bound=10)


def _plain_generators(l, m, n, p):
    """R and S from closed forms, with plain modular integers.

    R = YZ is -diag(xi, 1/xi) and S = ZX is
    -theta [[eta* - zeta*/xi, -d], [1, zeta* xi - eta*]], both free of delta.
    """
    g = prime_field(p).g
    xi, zeta, eta = (pow(g, (p - 1) // (2 * j), p) for j in (l, m, n))
    inv = lambda x: pow(x, p - 2, p)  # noqa: E731
    xs, zs, es = ((x + inv(x)) % p for x in (xi, zeta, eta))
    d = (xs * xs + zs * zs + es * es - xs * zs * es - 4) % p
    theta = inv((xi - inv(xi)) % p)
    R = (-xi, 0, 0, -inv(xi))
    S = tuple(
        (-theta * v) % p
        for v in ((es - zs * inv(xi)) % p, (-d) % p, 1, (zs * xi - es) % p)
    )
    return R, S


@pytest.mark.parametrize("t,p", [((7, 7, 7), 29), ((2, 4, 5), 41), ((3, 3, 4), 73), ((2, 3, 7), 337)])
def test_generators_match_closed_forms(t, p):
    data = build_generators(HyperbolicType(*t), p)
    R, S = _plain_generators(*t, p)
    assert data.R == ProjMat2.from_ints(*R, p)
    assert data.S == ProjMat2.from_ints(*S, p)
    assert data.T == (data.R * data.S).inverse()


def test_seven_two_three_forced_traces():
    data = build_generators(HyperbolicType(7, 2, 3), 29)
    assert data.zeta_s == 0 and data.eta_s == 1
    assert data.d == data.xi_s * data.xi_s - 3
    assert verify_type(data).ok


def test_build_generators_errors():
    with pytest.raises(OrderUnavailable):
        build_generators(T777, 31)
    with pytest.raises(BadIndex):
        build_generators(T777, 29, indices=(2, 1, 1))
    with pytest.raises(DegenerateD):
        build_generators(T777, 29, family="odd", indices=(1, 1, 2))


def test_orientable_matrices_live_in_fp2():
    data = build_generators(T777, 29)
    assert data.orientable
    assert not data.X.in_base_field()
    assert data.R.in_base_field() and data.S.in_base_field() and data.T.in_base_field()
    assert data.delta * data.delta == -1 / data.d


def test_verify_type_catches_corrupted_R():
    data = build_generators(HyperbolicType(3, 3, 4), 73)
    assert verify_type(data).ok
    a, b, c, d = (x.value for x in data.R.entries)
    # right-multiply by [[1, 1], [0, 1]]: still det 1, but a different element
    bad = ProjMat2.from_ints(a, b + a, c, d + c, 73)
    rep = verify_type(replace(data, R=bad))
    assert not rep.ok
    assert "RST_identity" in rep.failures()


CASES = [
    ((7, 7, 7), 29), ((2, 4, 5), 41), ((3, 3, 4), 73), ((2, 3, 7), 337),
    ((3, 5, 5), 31), ((7, 2, 3), 29), ((2, 3, 8), 97), ((3, 3, 5), 61), ((4, 5, 5), 89),
]


@given(st.sampled_from(CASES), st.data())
def test_verify_type_for_every_index_choice(case, draw):
    t, p = case
    htype = HyperbolicType(*t)
    family = draw.draw(st.sampled_from(htype.families()))
    try:
        idx = draw.draw(st.sampled_from(all_index_choices(htype, family)))
        data = build_generators(htype, p, family, idx)
    except (DegenerateD, OrderUnavailable):
        return
    rep = verify_type(data)
    assert rep.ok, rep.failures()
    for M in (data.X, data.Y, data.Z):
        assert M.det() == 1
        assert (M * M).is_identity()


def test_index_classes():
    assert index_classes(14) == [1, 3, 5]
    assert index_classes(4) == [1]
    assert index_classes(7) == [1, 2, 3]
    assert len(all_index_choices(T777, "doubled")) == 27


# ------------------------------------------------------------ enumeration


def test_enumerate_trivial_and_cyclic():
    assert len(enumerate_group([ProjMat2.identity(11)])) == 1
    data = build_generators(T777, 29)
    assert len(enumerate_group([data.Z])) == 2
    assert len(enumerate_group([data.R])) == 7


def test_enumerate_standard_generators_give_psl():
    for p in (5, 7, 13, 29):
        gens = [ProjMat2.from_ints(1, 1, 0, 1, p), ProjMat2.from_ints(0, p - 1, 1, 0, p)]
        assert len(enumerate_group(gens)) == psl2_order(p)


def test_full_psl_examples():
    assert is_full_psl(build_generators(T777, 29))
    assert is_full_psl(build_generators(HyperbolicType(2, 4, 5), 41))


def test_enumeration_closed_under_products():
    data = build_generators(T777, 29)
    H = enumerate_group([data.R, data.S, data.T])
    elems = list(H)
    rng = random.Random(0)
    for _ in range(1000):
        A, B = rng.choice(elems), rng.choice(elems)
        assert A * B in H
        assert A.inverse() in H


def test_enumerate_over_fp2():
    data = build_generators(T777, 29)
    full = enumerate_group([data.X, data.Y, data.Z], cap=10**6)
    assert len(full) == 2 * psl2_order(29)
    assert data.X in full and data.X not in enumerate_group([data.R, data.S, data.T])


def test_cap_exceeded():
    data = build_generators(T777, 29)
    with pytest.raises(CapExceeded):
        enumerate_group([data.R, data.S], cap=1000)
    with pytest.raises(CapExceeded):
        is_full_psl(data, cap=1000)


def test_right_multiply_is_a_permutation():
    data = build_generators(HyperbolicType(2, 3, 7), 29)
    H = enumerate_group([data.R, data.S])
    perm = H.right_multiply(data.R)
    assert np.array_equal(np.sort(perm), np.arange(len(H)))


def test_three_three_five_at_31_default_generates_icosahedral_group():
    """At p = 31 the default (3,3,5) traces (1, 1, golden ratio) generate A5.

    The odd family at the same prime does give all of PSL(2, 31).
    """
    htype = HyperbolicType(3, 3, 5)
    for idx in all_index_choices(htype, "doubled"):
        data = build_generators(htype, 31, "doubled", idx)
        assert verify_type(data).ok
        assert len(enumerate_group([data.R, data.S, data.T])) == 60
    odd = build_generators(htype, 31, "odd", (1, 1, 1))
    assert is_full_psl(odd)
