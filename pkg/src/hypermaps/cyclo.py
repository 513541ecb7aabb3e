"""Exact arithmetic in the cyclotomic field Q(zeta_k) and the d-value set.

Elements are integer coefficient vectors in the power basis
1, zeta, ..., zeta^(phi(k)-1).  Everything here is exact; the only
heuristic is the squareness test, which samples degree-one primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterable, Sequence

import numpy as np
import sympy

from .ff import is_prime, legendre_int, prime_factors, root_of_unity_int
from .psl2 import BadIndex, index_classes
from .triple import HyperbolicType


class LemmaCaseFailure(RuntimeError):
    """The constructive non-vanishing choice produced d = 0 (a bug)."""


# ------------------------------------------------------------ integer polynomials
# Coefficient lists are low-to-high.


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mul(f: Sequence[int], g: Sequence[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def poly_divexact(f: Sequence[int], g: Sequence[int]) -> list[int]:
    """f / g for monic g dividing f exactly."""
    f = list(f)
    dg = len(g) - 1
    if g[-1] != 1:
        raise ValueError("divisor must be monic")
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i]
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                f[i - dg + j] -= c * g[j]
    if any(f[:dg]):
        raise ArithmeticError("division is not exact")
    return q


def _substitute_power(f: Sequence[int], e: int) -> list[int]:
    """f(x^e)."""
    out = [0] * ((len(f) - 1) * e + 1)
    for i, c in enumerate(f):
        out[i * e] = c
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Phi_n, built up prime by prime on the squarefree kernel."""
    if n < 1:
        raise ValueError("n must be positive")
    primes = prime_factors(n) if n > 1 else []
    f = [-1, 1]
    m = 1
    for q in primes:
        f = poly_divexact(_substitute_power(f, q), f)
        m *= q
    return tuple(_substitute_power(f, n // m))


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    e = len(a) - len(b) + 1
    while len(a) - 1 >= db and a:
        c = a[-1]
        shift = len(a) - 1 - db
        a = [lb * x for x in a]
        for j in range(db + 1):
            a[shift + j] -= c * b[j]
        a.pop()
        _trim(a)
        e -= 1
    return [lb**e * x for x in a] if e > 0 else a


def _content(f: Sequence[int]) -> int:
    c = 0
    for x in f:
        c = gcd(c, x)
    return c


def resultant(f: Sequence[int], g: Sequence[int]) -> int:
    """Res(f, g) over Z by the subresultant pseudo-remainder sequence."""
    A, B = _trim(list(f)), _trim(list(g))
    if not A or not B:
        return 0
    a, b = _content(A), _content(B)
    A = [x // a for x in A]
    B = [x // b for x in B]
    dA, dB = len(A) - 1, len(B) - 1
    t = a**dB * b**dA
    s = 1
    if dA < dB:
        A, B = B, A
        dA, dB = dB, dA
        if dA % 2 and dB % 2:
            s = -1
    g_, h = 1, 1
    # all divisions below are exact (subresultant theorem)
    while dB > 0:
        delta = dA - dB
        if dA % 2 and dB % 2:
            s = -s
        R = _pseudo_rem(A, B)
        if not R:
            return 0
        divisor = g_ * h**delta
        A, B = B, [x // divisor for x in R]
        dA, dB = dB, len(B) - 1
        g_ = A[-1]
        if delta == 0:
            pass
        elif delta == 1:
            h = g_
        else:
            h = g_**delta // h ** (delta - 1)
    lb = B[-1]
    if dA == 0:
        hh = 1
    else:
        hh = lb**dA // h ** (dA - 1)
    return s * t * hh


# ------------------------------------------------------------ the field


def _int64_safe(bound: int) -> bool:
    return bound < (1 << 62)


class CycloField:
    """Q(zeta_k) with a precomputed table of zeta^e reduced mod Phi_k."""

    def __init__(self, k: int):
        self.k = k
        self.modulus = cyclotomic_poly(k)
        self.phi = len(self.modulus) - 1
        self.table = self._build_table()
        self.table_max = int(np.abs(self.table).max()) if self.phi else 0
        self._exponents = {tuple(int(v) for v in row): e for e, row in enumerate(self.table)}

    def _build_table(self) -> np.ndarray:
        phi, k = self.phi, self.k
        low = [-c for c in self.modulus[:-1]]
        rows = []
        cur = [0] * phi
        cur[0] = 1
        for _ in range(k):
            rows.append(cur)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [x + top * c for x, c in zip(cur, low)]
        mx = max(abs(v) for row in rows for v in row)
        dtype = np.int64 if mx < (1 << 31) else object
        return np.array(rows, dtype=dtype)

    def __repr__(self):
        return f"CycloField(k={self.k})"

    def __reduce__(self):
        return (cyclo_field, (self.k,))

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Reduce a polynomial in zeta (any length) to the power basis."""
        return self.reduce_sparse(dict(enumerate(vec)))

    def reduce_sparse(self, terms: dict[int, int]) -> tuple[int, ...]:
        """Reduce sum(c * zeta^e) given as {e: c}; exponents may be negative."""
        folded: dict[int, int] = {}
        for e, c in terms.items():
            if c:
                folded[e % self.k] = folded.get(e % self.k, 0) + c
        folded = {e: c for e, c in folded.items() if c}
        if not folded:
            return (0,) * self.phi
        exps = np.fromiter(folded.keys(), dtype=np.int64, count=len(folded))
        coefs = list(folded.values())
        rows = self.table[exps]
        bound = max(abs(c) for c in coefs) * self.table_max * len(coefs)
        if _int64_safe(bound) and rows.dtype != object:
            out = np.asarray(coefs, dtype=np.int64) @ rows
        else:
            out = np.asarray(coefs, dtype=object) @ rows.astype(object)
        return tuple(int(v) for v in out)

    def elem(self, coeffs: Sequence[int]) -> CycloElem:
        return CycloElem(self, self.reduce(coeffs))

    def zero(self) -> CycloElem:
        return CycloElem(self, (0,) * self.phi)

    def one(self) -> CycloElem:
        return self.root(0)

    def scalar(self, c: int) -> CycloElem:
        return CycloElem(self, (c,) + (0,) * (self.phi - 1))

    def root(self, e: int) -> CycloElem:
        """zeta_k^e."""
        return CycloElem(self, tuple(int(v) for v in self.table[e % self.k]))

    def root_exponent(self, x: CycloElem) -> int | None:
        """e with x = zeta_k^e, or None when x is not a k-th root of unity."""
        return self._exponents.get(x.coeffs)


@lru_cache(maxsize=8)
def cyclo_field(k: int) -> CycloField:
    return CycloField(k)


class CycloElem:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: CycloField, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    @property
    def k(self) -> int:
        return self.field.k

    def _check(self, other: CycloElem):
        if other.field.k != self.field.k:
            raise ValueError("elements of different cyclotomic fields")

    def _lift(self, other) -> CycloElem:
        if isinstance(other, int):
            return self.field.scalar(other)
        if isinstance(other, CycloElem):
            self._check(other)
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CycloElem(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return CycloElem(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return CycloElem(self.field, tuple(-a for a in self.coeffs))

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        a, b = self.coeffs, o.coeffs
        ma, mb = max(map(abs, a)), max(map(abs, b))
        if ma == 0 or mb == 0:
            return self.field.zero()
        if _int64_safe(ma * mb * len(a)):
            prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
            prod = [int(v) for v in prod]
        else:
            prod = poly_mul(a, b)
        return CycloElem(self.field, self.field.reduce_sparse(dict(enumerate(prod))))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse_root() ** (-e)
        result, base = self.field.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse_root(self) -> CycloElem:
        """Inverse of a root of unity (the only inverses this module needs)."""
        e = self.field.root_exponent(self)
        if e is None:
            raise ValueError("inverse is only available for roots of unity")
        return self.field.root(-e)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.scalar(other)
        if not isinstance(other, CycloElem):
            return NotImplemented
        return self.field.k == other.field.k and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.k, self.coeffs))

    def __repr__(self):
        return f"CycloElem(k={self.k}, {list(self.coeffs)})"

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def star(self) -> CycloElem:
        """x + x^-1 for a root of unity x."""
        return self + self.inverse_root()

    def mod_p(self, p: int, omega: int) -> int:
        """Image under zeta_k -> omega in GF(p)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * omega + c) % p
        return acc

    def to_complex(self, e: int = 1) -> complex:
        """Floating image under zeta_k -> exp(2 pi i e / k), for cross-checks."""
        z = np.exp(2j * np.pi * e / self.k)
        return complex(sum(c * z**i for i, c in enumerate(self.coeffs)))


def norm(f: CycloElem) -> int:
    """|N(f)| = |Res(Phi_k, f)|, exact."""
    if f.is_zero():
        return 0
    return abs(resultant(f.field.modulus, list(f.coeffs)))


# ------------------------------------------------------------ d-values


def embed_root(K: CycloField, r: int, a: int) -> CycloElem:
    """zeta_k^(a k / r), a primitive r-th root of unity in K."""
    if K.k % r:
        raise BadIndex(f"root order {r} does not divide k = {K.k}")
    if gcd(a, r) != 1:
        raise BadIndex(f"index {a} is not coprime to {r}")
    return K.root(a * (K.k // r))


def d_value_cyclo(alpha: CycloElem, beta: CycloElem, gamma: CycloElem) -> CycloElem:
    a, b, c = alpha.star(), beta.star(), gamma.star()
    return a * a + b * b + c * c - a * b * c - 4


def factorization_rhs(alpha: CycloElem, beta: CycloElem, gamma: CycloElem) -> CycloElem:
    """(a - bc)(a - b^-1 c)(a - b c^-1)(a - b^-1 c^-1), equal to a^2 d."""
    bi, ci = beta.inverse_root(), gamma.inverse_root()
    return (alpha - beta * gamma) * (alpha - bi * gamma) * (alpha - beta * ci) * (alpha - bi * ci)


@dataclass(frozen=True)
class DValue:
    value: CycloElem
    family: str
    indices: tuple[int, int, int]


@dataclass(frozen=True)
class LemmaChoice:
    indices: tuple[int, int, int]
    case: str
    d: CycloElem


def _units(r: int) -> list[int]:
    return [a for a in range(1, r) if gcd(a, r) == 1] or [1]


def choose_nonzero_roots(htype: HyperbolicType) -> LemmaChoice:
    """Primitive (2l, 2m, 2n)-th roots with d != 0, following the case split
    of the non-vanishing argument (entries sorted descending internally)."""
    K = cyclo_field(htype.k)
    k = K.k
    orders = htype.root_orders("doubled")
    perm = sorted(range(3), key=lambda i: -tuple(htype)[i])
    L, M, N = (tuple(htype)[i] for i in perm)
    rL, rM, rN = (orders[i] for i in perm)
    # exponents of zeta_k for each candidate index
    ex = lambda r, a: (a * (k // r)) % k  # noqa: E731

    def avoid(a_exp: int, bad: set[int]) -> bool:
        return a_exp % k not in {b % k for b in bad}

    choice = None
    if L > 6:
        case = "l>6"
        b, c = 1, 1
        eb, ec = ex(rM, b), ex(rN, c)
        bad = {eb + ec, -eb + ec, eb - ec, -eb - ec}
        for a in _units(rL):
            if avoid(ex(rL, a), bad):
                choice = (a, b, c)
                break
    elif M == N:
        case = "m=n"
        b = c = 1
        eb = ex(rM, b)
        bad = {2 * eb, 0, -2 * eb}
        for a in _units(rL):
            if avoid(ex(rL, a), bad):
                choice = (a, b, c)
                break
    elif L == M:
        case = "l=m>n"
        for c in _units(rN):
            ec = ex(rN, c)
            for a in _units(rL):
                if avoid(2 * ex(rL, a), {ec, -ec}):
                    choice = (a, a, c)
                    break
            if choice:
                break
    else:
        case = "l>m>n"
        c = 1
        for a in _units(rL):
            for b in _units(rM):
                ea, eb = ex(rL, a), ex(rM, b)
                if avoid(2 * ea, {2 * eb, -2 * eb}):
                    choice = (a, b, c)
                    break
            if choice:
                break
    if choice is None:
        # The l = m > n recipe is unsatisfiable when l = 2n, i.e. (6, 6, 3):
        # alpha^2 and gamma are then both primitive 6th roots.
        return _exhaustive_choice(htype, case + " (unsatisfiable; exhaustive search)")
    indices = [0, 0, 0]
    for slot, i in enumerate(perm):
        indices[i] = choice[slot]
    roots = [embed_root(K, r, a) for r, a in zip(orders, indices)]
    d = d_value_cyclo(*roots)
    if d.is_zero():
        raise LemmaCaseFailure(f"case {case} gave d = 0 for {htype}, indices {indices}")
    return LemmaChoice(tuple(indices), case, d)


def _exhaustive_choice(htype: HyperbolicType, case: str) -> LemmaChoice:
    K = cyclo_field(htype.k)
    orders = htype.root_orders("doubled")
    for a in _units(orders[0]):
        for b in _units(orders[1]):
            for c in _units(orders[2]):
                roots = [embed_root(K, r, i) for r, i in zip(orders, (a, b, c))]
                d = d_value_cyclo(*roots)
                if not d.is_zero():
                    return LemmaChoice((a, b, c), case, d)
    raise LemmaCaseFailure(f"every root choice gives d = 0 for {htype}")


def enumerate_D(htype: HyperbolicType) -> list[DValue]:
    """Distinct nonzero d-values over all trace choices, both families when all odd."""
    K = cyclo_field(htype.k)
    seen: dict[CycloElem, DValue] = {}
    for family in htype.families():
        orders = htype.root_orders(family)
        classes = [index_classes(r) for r in orders]
        stars = [{a: embed_root(K, r, a).star() for a in cl} for r, cl in zip(orders, classes)]
        for a in classes[0]:
            for b in classes[1]:
                for c in classes[2]:
                    x, y, z = stars[0][a], stars[1][b], stars[2][c]
                    d = x * x + y * y + z * z - x * y * z - 4
                    if not d.is_zero() and d not in seen:
                        seen[d] = DValue(d, family, (a, b, c))
    return list(seen.values())


# ------------------------------------------------------------ exclusions


def condition_a_primes(htype: HyperbolicType) -> frozenset[int]:
    """Primes dividing some N(1 - w^i), w a primitive 2j-th root, i | 2j, i < 2j."""
    K = cyclo_field(htype.k)
    exps = set()
    for family in htype.families():
        for r in htype.root_orders(family):
            divisors = [i for i in range(1, r) if r % i == 0]
            for a in _units(r):
                base = a * (K.k // r)
                exps.update((base * i) % K.k for i in divisors)
    primes: set[int] = set()
    for e in sorted(exps):
        n = norm(K.one() - K.root(e))
        primes.update(sympy.factorint(n).keys())
    return frozenset(primes)


# ------------------------------------------------------------ squareness sampling


def split_primes(k: int, start: int = 0) -> Iterable[int]:
    """Primes p = 1 mod k in increasing order, skipping the first `start`."""
    p, seen = 1, 0
    while True:
        p += k
        if is_prime(p):
            if seen >= start:
                yield p
            seen += 1


def _sample_ideals(k: int, values: Sequence[CycloElem], trials: int, skip: int = 0):
    """(p, omega, residues) for `trials` degree-one primes where no value vanishes."""
    out = []
    for p in split_primes(k):
        omega = root_of_unity_int(k, p)
        res = [v.mod_p(p, omega) for v in values]
        if any(r == 0 for r in res):
            continue
        if skip:
            skip -= 1
            continue
        out.append((p, omega, res))
        if len(out) == trials:
            return out
    return out


def is_square_in_L(f: CycloElem, trials: int = 40, skip: int = 0) -> bool:
    """Heuristic: f is a square at `trials` degree-one primes (error ~ 2^-trials)."""
    if f.is_zero():
        raise ValueError("f must be nonzero")
    samples = _sample_ideals(f.k, [f], trials, skip)
    return all(legendre_int(res[0], p) == 1 for p, _, res in samples)


def gf2_rank(rows: Iterable[int]) -> int:
    basis: list[int] = []
    for v in rows:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def field_degree_Lstar(
    K: CycloField, D: Sequence[CycloElem], trials: int = 40, skip: int = 0
) -> tuple[int, int]:
    """(h, e) with h = 2^e phi(k), e the GF(2)-rank of the classes of -d.

    A subset of D has square product exactly when its indicator vector is
    orthogonal to every sampled Legendre row, so e is the rank of the
    sampled bit matrix (one row per degree-one prime).
    """
    negs = [-d for d in D]
    rows = []
    for p, _, res in _sample_ideals(K.k, negs, trials, skip):
        bits = 0
        for i, r in enumerate(res):
            if legendre_int(r, p) == -1:
                bits |= 1 << i
        rows.append(bits)
    e = gf2_rank(rows)
    return (2**e) * K.phi, e


# ------------------------------------------------------------ context


class CycloContext:
    """Everything the prime scan needs about one hyperbolic type."""

    def __init__(self, htype: HyperbolicType, trials: int = 40):
        self.type = htype
        self.k = htype.k
        self.field = cyclo_field(self.k)
        self.trials = trials
        self.D: tuple[DValue, ...] = tuple(enumerate_D(htype))
        if not self.D:
            raise LemmaCaseFailure(f"empty d-value set for {htype}")
        self.cond_a = condition_a_primes(htype)
        self.h, self.e = field_degree_Lstar(self.field, [dv.value for dv in self.D], trials)

    @property
    def phi(self) -> int:
        return self.field.phi

    @cached_property
    def d_norms(self) -> tuple[int, ...]:
        return tuple(norm(dv.value) for dv in self.D)

    def exclusion_reason(self, p: int) -> str | None:
        if p in self.cond_a:
            return "norm(1-w^i)"
        if any(n % p == 0 for n in self.d_norms):
            return "norm(d)"
        return None

    def __getstate__(self):
        state = self.__dict__.copy()
        state["d_norms"] = self.d_norms
        return state
