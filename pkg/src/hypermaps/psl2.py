"""Projective 2x2 matrices over GF(p) / GF(p^2) and the rotation-group generators.

Scalar work goes through :class:`ProjMat2`.  Group enumeration runs
breadth-first on numpy batches of canonical matrices, keyed by a single
integer per element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Union

import numpy as np

from .ff import (
    Fp2Elem,
    FpElem,
    OrderUnavailable,
    legendre,
    prime_field,
    root_of_unity,
    root_with_rational_trace,
    sqrt_mod,
)
from .triple import HyperbolicType

Elem = Union[FpElem, Fp2Elem]

DEFAULT_CAP = 500_000


class DegenerateD(ValueError):
    """d = 0: the generator construction does not apply."""


class BadIndex(ValueError):
    """Root index not coprime to the root order."""


class BoundExceeded(RuntimeError):
    pass


class CapExceeded(RuntimeError):
    pass


def psl2_order(p: int) -> int:
    return p * (p * p - 1) // 2


def _entry_key(x: Elem) -> tuple[int, int]:
    if isinstance(x, FpElem):
        return (x.value, 0)
    return (x.c0, x.c1)


class ProjMat2:
    """An element of PSL(2, q), stored via its canonical representative.

    Of the pair {M, -M}, the representative kept is the one whose first
    nonzero entry (in order a, b, c, d) is lexicographically least as a
    (c0, c1) pair; over GF(p) that means the value is <= (p-1)/2.
    """

    __slots__ = ("entries", "p", "field")

    def __init__(self, a: Elem, b: Elem, c: Elem, d: Elem):
        entries = (a, b, c, d)
        self.p = a.p
        self.field = "p2" if any(isinstance(x, Fp2Elem) for x in entries) else "p"
        if self.field == "p2":
            entries = tuple(x if isinstance(x, Fp2Elem) else x.to_fp2() for x in entries)
        for x in entries:
            if not x.is_zero():
                if _entry_key(-x) < _entry_key(x):
                    entries = tuple(-y for y in entries)
                break
        self.entries = entries

    @classmethod
    def from_ints(cls, a: int, b: int, c: int, d: int, p: int) -> ProjMat2:
        return cls(*(FpElem(x, p) for x in (a, b, c, d)))

    @classmethod
    def identity(cls, p: int) -> ProjMat2:
        return cls.from_ints(1, 0, 0, 1, p)

    def __mul__(self, other: ProjMat2) -> ProjMat2:
        a, b, c, d = self.entries
        e, f, g, h = other.entries
        return ProjMat2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __pow__(self, n: int) -> ProjMat2:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ProjMat2.identity(self.p), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> ProjMat2:
        a, b, c, d = self.entries
        return ProjMat2(d, -b, -c, a)

    def __neg__(self) -> ProjMat2:
        return ProjMat2(*(-x for x in self.entries))

    def det(self) -> Elem:
        a, b, c, d = self.entries
        return a * d - b * c

    def trace(self) -> Elem:
        """Trace of the canonical representative (defined only up to sign)."""
        return self.entries[0] + self.entries[3]

    def key(self) -> tuple:
        return (self.p, tuple(_entry_key(x) for x in self.entries))

    def __eq__(self, other):
        if not isinstance(other, ProjMat2):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        vals = [x.value if isinstance(x, FpElem) else (x.c0, x.c1) for x in self.entries]
        return f"ProjMat2({vals}, p={self.p})"

    def is_identity(self) -> bool:
        return self == ProjMat2.identity(self.p)

    def in_base_field(self) -> bool:
        return self.field == "p" or all(x.c1 == 0 for x in self.entries)

    def reduced(self) -> ProjMat2:
        """Same element with GF(p) entries when all entries lie in GF(p)."""
        if self.field == "p" or not self.in_base_field():
            return self
        return ProjMat2(*(x.to_fp() for x in self.entries))

    def as_fp2(self) -> ProjMat2:
        if self.field == "p2":
            return self
        return ProjMat2(*(x.to_fp2() for x in self.entries))


def element_order(M: ProjMat2, bound: int | None = None) -> int:
    """Least n >= 1 with M^n = +-I, by repeated multiplication."""
    if bound is None:
        bound = M.p + 1 if M.field == "p" else M.p * M.p + 1
    ident = ProjMat2.identity(M.p)
    X = M
    for n in range(1, bound + 1):
        if X == ident:
            return n
        X = X * M
    raise BoundExceeded(f"order of {M!r} exceeds {bound}")


# ------------------------------------------------------------ generators


def _base(x: Elem) -> FpElem:
    return x.to_fp() if isinstance(x, Fp2Elem) else x


def compute_d(xs: FpElem, zs: FpElem, es: FpElem) -> FpElem:
    """xs^2 + zs^2 + es^2 - xs*zs*es - 4 on the three traces."""
    return xs * xs + zs * zs + es * es - xs * zs * es - 4


@dataclass(frozen=True)
class GeneratorData:
    type: HyperbolicType
    p: int
    family: str
    indices: tuple[int, int, int]
    xi: FpElem
    zeta: Elem
    eta: Elem
    xi_s: FpElem
    zeta_s: FpElem
    eta_s: FpElem
    d: FpElem
    delta: Elem
    theta: FpElem
    X: ProjMat2
    Y: ProjMat2
    Z: ProjMat2
    R: ProjMat2
    S: ProjMat2
    T: ProjMat2

    @property
    def orientable(self) -> bool:
        """True iff -d is a non-square, i.e. X, Y, Z need GF(p^2)."""
        return legendre(-self.d) != 1

    @property
    def root_orders(self) -> tuple[int, int, int]:
        return self.type.root_orders(self.family)


def index_classes(r: int) -> list[int]:
    """Representatives a of units mod r up to a <-> r - a."""
    return [a for a in range(1, r // 2 + 1) if gcd(a, r) == 1 and (a < r - a or r <= 2)]


def all_index_choices(htype: HyperbolicType, family: str) -> list[tuple[int, int, int]]:
    r1, r2, r3 = htype.root_orders(family)
    return [(a, b, c) for a in index_classes(r1) for b in index_classes(r2) for c in index_classes(r3)]


def build_generators(
    htype: HyperbolicType,
    p: int,
    family: str = "doubled",
    indices: tuple[int, int, int] = (1, 1, 1),
) -> GeneratorData:
    orders = htype.root_orders(family)
    for a, r in zip(indices, orders):
        if gcd(a, r) != 1:
            raise BadIndex(f"index {a} is not coprime to root order {r}")
    prime_field(p)
    if (p - 1) % orders[0]:
        raise OrderUnavailable(f"p = {p} is not 1 mod {orders[0]}; no primitive {orders[0]}th root")
    # zeta and eta only enter through their traces, so p = -1 mod their
    # orders is enough (the roots then live in GF(p^2), the traces in GF(p)).
    xi = root_of_unity(orders[0], p) ** indices[0]
    zeta, eta = (root_with_rational_trace(r, p) ** a for r, a in zip(orders[1:], indices[1:]))
    xi_s, zeta_s, eta_s = (_base(x + x.inv()) for x in (xi, zeta, eta))
    d = compute_d(xi_s, zeta_s, eta_s)
    if d.is_zero():
        raise DegenerateD(f"d = 0 for type {htype}, p = {p}, indices {indices}")

    root = sqrt_mod(-d)
    if root is None:
        root = (-d).to_fp2().sqrt()
    delta = -1 / root
    theta = (xi - xi.inv()).inv()
    zero, one = FpElem(0, p), FpElem(1, p)

    dt = delta * theta
    X = ProjMat2(dt * d, dt * d * (zeta_s * xi - eta_s), dt * (eta_s - zeta_s * xi.inv()), dt * -d)
    Y = ProjMat2(delta * zero, delta * xi * d, delta * xi.inv(), delta * zero)
    Z = ProjMat2(delta * zero, delta * d, delta * one, delta * zero)
    R, S, T = (Y * Z).reduced(), (Z * X).reduced(), (X * Y).reduced()
    return GeneratorData(
        htype, p, family, tuple(indices), xi, zeta, eta, xi_s, zeta_s, eta_s,
        d, delta, theta, X, Y, Z, R, S, T,
    )


@dataclass
class TypeReport:
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, passed in self.checks.items() if not passed]


def verify_type(data: GeneratorData) -> TypeReport:
    """Itemised check that R, S, T realise the (l, m, n) presentation."""
    report = TypeReport()
    expected = dict(R=data.type.l, S=data.type.m, T=data.type.n)
    traces = dict(R=data.xi_s, S=data.zeta_s, T=data.eta_s)
    for name in "RST":
        M = getattr(data, name)
        try:
            report.checks[f"order_{name}"] = element_order(M) == expected[name]
        except BoundExceeded:
            report.checks[f"order_{name}"] = False
        tr = M.trace()
        report.checks[f"trace_{name}"] = tr == traces[name] or tr == -traces[name]
    report.checks["RST_identity"] = (data.R * data.S * data.T).is_identity()
    for name in "XYZRST":
        report.checks[f"det_{name}"] = getattr(data, name).det() == 1
    return report


# ------------------------------------------------------------ enumeration


class _Batch:
    """Vectorised PSL(2, q) arithmetic on arrays of canonical matrices.

    GF(p) batches have shape (N, 4); GF(p^2) batches have shape (N, 4, 2).
    """

    def __init__(self, p: int, field: str):
        self.p = p
        self.field = field
        self.nu = prime_field(p).nu
        self.dtype = np.int64 if p < (1 << 20) else object
        q = p if field == "p" else p * p
        self.q = q
        self.key_dtype = np.int64 if q ** 4 < (1 << 62) else object

    def encode(self, mats: Iterable[ProjMat2]) -> np.ndarray:
        rows = []
        for M in mats:
            M = M.as_fp2() if self.field == "p2" else M
            if self.field == "p":
                rows.append([x.value for x in M.entries])
            else:
                rows.append([[x.c0, x.c1] for x in M.entries])
        shape = (0, 4) if self.field == "p" else (0, 4, 2)
        return np.array(rows, dtype=self.dtype).reshape(-1, *shape[1:])

    def decode(self, row) -> ProjMat2:
        if self.field == "p":
            return ProjMat2.from_ints(*(int(v) for v in row), self.p)
        return ProjMat2(*(Fp2Elem(int(c0), int(c1), self.p) for c0, c1 in row))

    def _fmul(self, x, y):
        p = self.p
        if self.field == "p":
            return x * y % p
        x0, x1, y0, y1 = x[..., 0], x[..., 1], y[..., 0], y[..., 1]
        c0 = (x0 * y0 % p + self.nu * (x1 * y1 % p)) % p
        c1 = (x0 * y1 % p + x1 * y0 % p) % p
        return np.stack([c0, c1], axis=-1)

    def mul(self, A: np.ndarray, G: np.ndarray) -> np.ndarray:
        """Row-wise A @ G for a single matrix G (broadcast)."""
        p = self.p
        a, b, c, d = (A[:, i] for i in range(4))
        e, f, g, h = (G[i] for i in range(4))
        out = np.stack(
            [
                (self._fmul(a, e) + self._fmul(b, g)) % p,
                (self._fmul(a, f) + self._fmul(b, h)) % p,
                (self._fmul(c, e) + self._fmul(d, g)) % p,
                (self._fmul(c, f) + self._fmul(d, h)) % p,
            ],
            axis=1,
        )
        return self.canonicalize(out)

    def canonicalize(self, A: np.ndarray) -> np.ndarray:
        p, half = self.p, (self.p - 1) // 2
        if self.field == "p":
            nz = A != 0
            first = np.argmax(nz, axis=1)
            lead = A[np.arange(len(A)), first]
            flip = lead > half
        else:
            codes = A[..., 0] + A[..., 1] * p
            nz = codes != 0
            first = np.argmax(nz, axis=1)
            lead = A[np.arange(len(A)), first]
            c0, c1 = lead[:, 0], lead[:, 1]
            flip = np.where(c0 != 0, c0 > half, c1 > half)
        A = A.copy()
        A[flip] = (p - A[flip]) % p
        return A

    def keys(self, A: np.ndarray) -> np.ndarray:
        if self.field == "p":
            codes = A.astype(self.key_dtype)
        else:
            codes = A[..., 0].astype(self.key_dtype) + A[..., 1].astype(self.key_dtype) * self.p
        q = self.q
        return ((codes[:, 0] * q + codes[:, 1]) * q + codes[:, 2]) * q + codes[:, 3]


class ElementSet:
    """A finite subset of PSL(2, q), stored sorted by integer key."""

    def __init__(self, batch: _Batch, elems: np.ndarray, keys: np.ndarray):
        order = np.argsort(keys, kind="stable")
        self.batch = batch
        self.keys = keys[order]
        self.elems = elems[order]

    @property
    def p(self) -> int:
        return self.batch.p

    @property
    def field(self) -> str:
        return self.batch.field

    def __len__(self) -> int:
        return len(self.keys)

    def __iter__(self) -> Iterator[ProjMat2]:
        for row in self.elems:
            yield self.batch.decode(row)

    def __contains__(self, M: ProjMat2) -> bool:
        if M.p != self.p:
            return False
        if self.field == "p":
            if not M.in_base_field():
                return False
            M = M.reduced()
        key = self.batch.keys(self.batch.encode([M]))[0]
        i = np.searchsorted(self.keys, key)
        return bool(i < len(self.keys) and self.keys[i] == key)

    def index_of(self, A: np.ndarray) -> np.ndarray:
        """Positions of canonical batch rows A in this set; raises if absent."""
        keys = self.batch.keys(A)
        idx = np.searchsorted(self.keys, keys)
        idx = np.minimum(idx, len(self.keys) - 1)
        if not np.array_equal(self.keys[idx], keys):
            raise KeyError("batch contains elements outside the set")
        return idx

    def right_multiply(self, M: ProjMat2) -> np.ndarray:
        """Permutation i -> index of (element_i * M)."""
        G = self.batch.encode([M])[0]
        return self.index_of(self.batch.mul(self.elems, G))


def enumerate_group(generators: list[ProjMat2], cap: int = DEFAULT_CAP) -> ElementSet:
    """Breadth-first closure of <generators> under right multiplication."""
    if not generators:
        raise ValueError("need at least one generator")
    p = generators[0].p
    field_ = "p" if all(M.in_base_field() for M in generators) else "p2"
    gens = [M.reduced() if field_ == "p" else M.as_fp2() for M in generators]
    gens = gens + [M.inverse() for M in gens]
    batch = _Batch(p, field_)
    G = batch.encode(gens)

    start = batch.encode([ProjMat2.identity(p)])
    seen_keys = batch.keys(start)
    all_elems = [start]
    frontier = start
    while len(frontier):
        cand = np.concatenate([batch.mul(frontier, g) for g in G])
        ckeys = batch.keys(cand)
        ckeys, first = np.unique(ckeys, return_index=True)
        cand = cand[first]
        pos = np.searchsorted(seen_keys, ckeys)
        pos = np.minimum(pos, len(seen_keys) - 1)
        new = seen_keys[pos] != ckeys
        frontier = cand[new]
        if len(seen_keys) + len(frontier) > cap:
            raise CapExceeded(f"group exceeds cap of {cap} elements")
        seen_keys = np.sort(np.concatenate([seen_keys, ckeys[new]]))
        all_elems.append(frontier)
    elems = np.concatenate(all_elems)
    return ElementSet(batch, elems, batch.keys(elems))


def is_full_psl(data: GeneratorData, cap: int = DEFAULT_CAP) -> bool:
    target = psl2_order(data.p)
    if target > cap:
        raise CapExceeded(f"|PSL(2,{data.p})| = {target} exceeds cap {cap}")
    return len(enumerate_group([data.R, data.S, data.T], cap)) == target
