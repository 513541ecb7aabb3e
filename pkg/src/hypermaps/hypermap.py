"""Flag-level hypermaps, orientability and Euler characteristic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .ff import FpElem, legendre
from .psl2 import DEFAULT_CAP, DegenerateD, GeneratorData, enumerate_group, psl2_order
from .triple import HyperbolicType


class NonIntegralChi(ValueError):
    pass


class ParityError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


class OracleDisagreement(RuntimeError):
    """Two routes that must agree did not; always a bug signal."""


def orientability_by_residue(d: FpElem) -> bool:
    """True when the hypermap is NON-orientable, i.e. -d is a nonzero square."""
    if d.is_zero():
        raise DegenerateD("d = 0")
    return legendre(-d) == 1


@dataclass(frozen=True)
class OracleReport:
    rotation_order: int
    full_order: int
    x_in_rotation_group: bool

    @property
    def index(self) -> int:
        return self.full_order // self.rotation_order


def oracle_report(data: GeneratorData, cap: int = DEFAULT_CAP) -> OracleReport:
    H = enumerate_group([data.R, data.S, data.T], cap)
    full = enumerate_group([data.X, data.Y, data.Z], 2 * cap)
    return OracleReport(len(H), len(full), data.X in H)


def orientability_by_oracle(data: GeneratorData, cap: int = DEFAULT_CAP) -> bool:
    """True when NON-orientable: X lies in <R, S, T> (index 1 in <X, Y, Z>)."""
    rep = oracle_report(data, cap)
    if rep.full_order not in (rep.rotation_order, 2 * rep.rotation_order):
        raise OracleDisagreement(f"index of rotation group is not 1 or 2: {rep}")
    if rep.x_in_rotation_group != (rep.index == 1):
        raise OracleDisagreement(f"membership and index disagree: {rep}")
    return rep.x_in_rotation_group


def euler_characteristic(order: int, htype: HyperbolicType) -> int:
    """chi = -|Aut| (1 - 1/l - 1/m - 1/n) / 2."""
    chi = -Fraction(order) * (1 - htype.mu) / 2
    if chi.denominator != 1:
        raise NonIntegralChi(f"|Aut| = {order} gives chi = {chi} for {htype}")
    return int(chi)


def genus(chi: int, orientable: bool) -> int:
    if orientable:
        if chi % 2:
            raise ParityError(f"orientable surface with odd chi = {chi}")
        return (2 - chi) // 2
    return 2 - chi


def _orbits(perms: list[np.ndarray]) -> tuple[int, np.ndarray]:
    n = len(perms[0])
    src = np.concatenate([np.arange(n)] * len(perms))
    dst = np.concatenate(perms)
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    return connected_components(graph, directed=True, connection="weak")


@dataclass
class FlagStructure:
    type: HyperbolicType
    flags: int
    px: np.ndarray
    py: np.ndarray
    pz: np.ndarray
    face_counts: tuple[int, int, int] = (0, 0, 0)
    face_sizes: tuple[frozenset, frozenset, frozenset] = field(default_factory=tuple)

    @property
    def vertices(self) -> int:
        # James graph: one trivalent vertex per flag
        return self.flags

    @property
    def edges(self) -> int:
        return 3 * self.flags // 2

    @property
    def faces(self) -> int:
        return sum(self.face_counts)

    @property
    def chi(self) -> int:
        return self.vertices - self.edges + self.faces


def build_flag_structure(data: GeneratorData, cap: int = DEFAULT_CAP) -> FlagStructure:
    """Flags = elements of <X, Y, Z>, acted on by right multiplication."""
    group = enumerate_group([data.X, data.Y, data.Z], cap)
    px, py, pz = (group.right_multiply(M) for M in (data.X, data.Y, data.Z))
    n = len(group)
    ident = np.arange(n)
    for name, perm in (("x", px), ("y", py), ("z", pz)):
        if not np.array_equal(perm[perm], ident):
            raise InvariantViolation(f"pi_{name} is not an involution")
        if np.any(perm == ident):
            raise InvariantViolation(f"pi_{name} has fixed points")
    ncomp, _ = _orbits([px, py, pz])
    if ncomp != 1:
        raise InvariantViolation(f"flag action is not transitive ({ncomp} orbits)")

    counts, sizes = [], []
    pairs = ((py, pz), (pz, px), (px, py))
    for (a, b), j in zip(pairs, data.type):
        count, labels = _orbits([a, b])
        orbit_sizes = frozenset(np.bincount(labels).tolist())
        if any((2 * j) % s for s in orbit_sizes):
            raise InvariantViolation(f"face orbit sizes {sorted(orbit_sizes)} do not divide {2 * j}")
        counts.append(count)
        sizes.append(orbit_sizes)
    fs = FlagStructure(data.type, n, px, py, pz, tuple(counts), tuple(sizes))
    expected = euler_characteristic(n, data.type)
    if fs.chi != expected:
        raise InvariantViolation(f"V - E + F = {fs.chi} but the order formula gives {expected}")
    return fs


@dataclass(frozen=True)
class HypermapRecord:
    type: HyperbolicType
    p: int
    family: str
    indices: tuple[int, int, int]
    d: int
    orientable: bool
    group_order: int
    chi: int
    genus: int
    verified: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "type": list(self.type),
            "p": self.p,
            "family": self.family,
            "indices": list(self.indices),
            "d": self.d,
            "orientable": self.orientable,
            "group_order": self.group_order,
            "chi": self.chi,
            "genus": self.genus,
            "verified": dict(self.verified),
        }


def make_record(
    data: GeneratorData, verified: dict | None = None, rotation_order: int | None = None
) -> HypermapRecord:
    """Record from the residue verdict.

    |Aut| is |<R,S,T>| (PSL(2,p) unless an enumerated order is supplied),
    doubled in the orientable case.
    """
    nonor = orientability_by_residue(data.d)
    rot = psl2_order(data.p) if rotation_order is None else rotation_order
    order = rot * (1 if nonor else 2)
    chi = euler_characteristic(order, data.type)
    return HypermapRecord(
        data.type, data.p, data.family, data.indices, data.d.value,
        not nonor, order, chi, genus(chi, not nonor), dict(verified or {}),
    )
