"""Arithmetic in GF(p) and GF(p^2).

GF(p^2) is modelled as GF(p)[t]/(t^2 - nu) with nu the least quadratic
non-residue mod p, so the same prime always yields the same model.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

# Deterministic Miller-Rabin witnesses, valid for n < 3.4e14.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17)
_MR_LIMIT = 341_550_071_728_321


class OrderUnavailable(ValueError):
    """No element of the requested multiplicative order exists mod p."""


class DivisionByZero(ZeroDivisionError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} is beyond the deterministic Miller-Rabin range")
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of a positive integer, by trial division."""
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1 if q == 2 else 2
    if n > 1:
        out.append(n)
    return out


@dataclass(frozen=True)
class PrimeField:
    """Per-prime constants: the modulus, least non-residue and least primitive root."""

    p: int
    nu: int
    g: int


@lru_cache(maxsize=4096)
def prime_field(p: int) -> PrimeField:
    if p == 2 or not is_prime(p):
        raise ValueError(f"{p} is not an odd prime")
    nu = 2
    while pow(nu, (p - 1) // 2, p) != p - 1:
        nu += 1
    factors = prime_factors(p - 1)
    g = 2
    while any(pow(g, (p - 1) // q, p) == 1 for q in factors):
        g += 1
    return PrimeField(p, nu, g)


# ---------------------------------------------------------------- integers


def legendre_int(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def sqrt_int(a: int, p: int) -> int | None:
    """Tonelli-Shanks; returns the root r <= (p-1)/2, or None for non-residues."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
    else:
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = prime_field(p).nu
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
    return min(r, p - r)


def root_of_unity_int(r: int, p: int) -> int:
    if r < 1 or (p - 1) % r:
        raise OrderUnavailable(f"no element of order {r} mod {p}")
    return pow(prime_field(p).g, (p - 1) // r, p)


def multiplicative_order(x: int, p: int) -> int:
    x %= p
    if x == 0:
        raise ValueError("zero has no multiplicative order")
    n = p - 1
    for q in prime_factors(p - 1):
        while n % q == 0 and pow(x, n // q, p) == 1:
            n //= q
    return n


# ---------------------------------------------------------------- GF(p)


class FpElem:
    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.p = p
        self.value = value % p

    def _coerce(self, other) -> int:
        if isinstance(other, FpElem):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return FpElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElem(-self.value, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        return FpElem(pow(self.value, e, self.p), self.p)

    def inv(self) -> FpElem:
        if self.value == 0:
            raise DivisionByZero(f"inverse of 0 mod {self.p}")
        return FpElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = FpElem(other, self.p)
        return self * other.inv()

    def __rtruediv__(self, other):
        return FpElem(other, self.p) * self.inv()

    def __eq__(self, other):
        if isinstance(other, FpElem):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        if isinstance(other, Fp2Elem):
            return other == self
        return NotImplemented

    def __hash__(self):
        return hash((self.value, 0, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElem({self.value}, p={self.p})"

    def is_zero(self) -> bool:
        return self.value == 0

    def to_fp2(self) -> Fp2Elem:
        return Fp2Elem(self.value, 0, self.p)


def legendre(a: FpElem) -> int:
    return legendre_int(a.value, a.p)


def sqrt_mod(a: FpElem) -> FpElem | None:
    r = sqrt_int(a.value, a.p)
    return None if r is None else FpElem(r, a.p)


def root_of_unity(r: int, p: int) -> FpElem:
    """g^((p-1)/r) for the least primitive root g; exact order r."""
    return FpElem(root_of_unity_int(r, p), p)


# ---------------------------------------------------------------- GF(p^2)


class Fp2Elem:
    """c0 + c1*t with t^2 = nu."""

    __slots__ = ("c0", "c1", "p")

    def __init__(self, c0: int, c1: int, p: int):
        self.p = p
        self.c0 = c0 % p
        self.c1 = c1 % p

    @property
    def nu(self) -> int:
        return prime_field(self.p).nu

    def _coerce(self, other) -> Fp2Elem:
        if isinstance(other, Fp2Elem):
            if other.p != self.p:
                raise ValueError("mixed moduli")
            return other
        if isinstance(other, FpElem):
            return Fp2Elem(other.value, 0, self.p)
        if isinstance(other, int):
            return Fp2Elem(other, 0, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp2Elem(self.c0 + o.c0, self.c1 + o.c1, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return Fp2Elem(self.c0 - o.c0, self.c1 - o.c1, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        a, b, c, d = self.c0, self.c1, o.c0, o.c1
        return Fp2Elem(a * c + self.nu * b * d, a * d + b * c, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp2Elem(-self.c0, -self.c1, self.p)

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result, base = Fp2Elem(1, 0, self.p), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def norm(self) -> int:
        return (self.c0 * self.c0 - self.nu * self.c1 * self.c1) % self.p

    def conjugate(self) -> Fp2Elem:
        return Fp2Elem(self.c0, -self.c1, self.p)

    def inv(self) -> Fp2Elem:
        n = self.norm()
        if n == 0:
            raise DivisionByZero(f"inverse of 0 in GF({self.p}^2)")
        ninv = pow(n, -1, self.p)
        return Fp2Elem(self.c0 * ninv, -self.c1 * ninv, self.p)

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def __eq__(self, other):
        if isinstance(other, Fp2Elem):
            return (self.p, self.c0, self.c1) == (other.p, other.c0, other.c1)
        if isinstance(other, FpElem):
            return self.p == other.p and self.c1 == 0 and self.c0 == other.value
        if isinstance(other, int):
            return self.c1 == 0 and self.c0 == other % self.p
        return NotImplemented

    def __hash__(self):
        if self.c1 == 0:
            return hash((self.c0, 0, self.p))
        return hash((self.c0, self.c1, self.p))

    def __repr__(self):
        return f"Fp2Elem({self.c0}, {self.c1}, p={self.p})"

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0

    def in_base_field(self) -> bool:
        return self.c1 == 0

    def to_fp(self) -> FpElem:
        if self.c1:
            raise ValueError(f"{self!r} is not in GF({self.p})")
        return FpElem(self.c0, self.p)

    def sqrt(self) -> Fp2Elem | None:
        """Lexicographically least square root, or None if not a square."""
        p, nu = self.p, self.nu
        if self.c1 == 0:
            r = sqrt_int(self.c0, p)
            if r is not None:
                return Fp2Elem(r, 0, p)
            # a/nu is a residue, and (c*t)^2 = c^2 * nu
            c = sqrt_int(self.c0 * pow(nu, -1, p), p)
            return Fp2Elem(0, c, p)
        n = sqrt_int(self.norm(), p)
        if n is None:
            return None
        inv2 = (p + 1) // 2
        for sign in (1, -1):
            x0 = sqrt_int((self.c0 + sign * n) * inv2, p)
            if x0:
                x1 = self.c1 * pow(2 * x0, -1, p)
                root = Fp2Elem(x0, x1, p)
                if root * root == self:
                    other = -root
                    return min(root, other, key=lambda z: (z.c0, z.c1))
        return None


def root_of_unity_fp2(r: int, p: int) -> Fp2Elem:
    """An element of exact order r in GF(p^2), for r dividing p + 1.

    The first candidate c + t (c = 0, 1, ...) whose ((p^2-1)/r)-th power has
    exact order r; deterministic for a given p.
    """
    if r < 1 or (p + 1) % r:
        raise OrderUnavailable(f"no element of order {r} in the norm-one subgroup mod {p}")
    q = p * p - 1
    factors = prime_factors(r)
    for c in range(p):
        w = Fp2Elem(c, 1, p) ** (q // r)
        if all(w ** (r // f) != 1 for f in factors):
            return w
    raise OrderUnavailable(f"no element of order {r} in GF({p}^2)")


def root_with_rational_trace(r: int, p: int) -> FpElem | Fp2Elem:
    """A primitive r-th root whose trace w + 1/w lies in GF(p).

    Lives in GF(p) when r | p - 1 and in the norm-one subgroup of GF(p^2)
    when r | p + 1.
    """
    if (p - 1) % r == 0:
        return root_of_unity(r, p)
    if (p + 1) % r == 0:
        return root_of_unity_fp2(r, p)
    raise OrderUnavailable(f"p = {p} is neither 1 nor -1 mod {r}")
