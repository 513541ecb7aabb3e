"""Prime scans: per-prime membership in S, density estimates, the (7,2,3) example."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .cyclo import CycloContext
from .ff import legendre_int, multiplicative_order, root_of_unity_int
from .hypermap import OracleDisagreement, euler_characteristic, genus
from .psl2 import all_index_choices, psl2_order

MAX_BOUND = 2**32


class BoundTooLarge(ValueError):
    pass


class CubicDoesNotSplit(ValueError):
    pass


class TheoremViolation(AssertionError):
    """A prime in S admits an orientable hypermap.  Never expected."""


class IoFailure(OSError):
    pass


# ------------------------------------------------------------ sieve


def primes_up_to(bound: int, segment: int = 1 << 20) -> np.ndarray:
    """Segmented sieve of Eratosthenes; all primes <= bound."""
    if bound > MAX_BOUND:
        raise BoundTooLarge(f"bound {bound} exceeds {MAX_BOUND}")
    if bound < 2:
        return np.zeros(0, dtype=np.int64)
    root = math.isqrt(bound)
    small = np.ones(root + 1, dtype=bool)
    small[:2] = False
    for q in range(2, math.isqrt(root) + 1):
        if small[q]:
            small[q * q :: q] = False
    base = np.flatnonzero(small)
    out = [base]
    lo = root + 1
    while lo <= bound:
        hi = min(lo + segment, bound + 1)
        mask = np.ones(hi - lo, dtype=bool)
        for q in base:
            start = max(q * q, -(-lo // q) * q)
            if start >= hi:
                continue
            mask[start - lo :: q] = False
        out.append(lo + np.flatnonzero(mask))
        lo = hi
    return np.concatenate(out).astype(np.int64)


# ------------------------------------------------------------ classification


@dataclass
class PrimeClassification:
    p: int
    p_mod_k: int
    excluded: bool
    reason: str
    residues: list[int]
    in_S: bool
    any_nonorientable: bool
    all_nonorientable: bool

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> PrimeClassification:
        return cls(**data)


def _direct_residues(ctx: CycloContext, p: int) -> list[int]:
    """Legendre(-d) for d built from GF(p) roots of unity, over all trace choices."""
    out = []
    for family in ctx.type.families():
        orders = ctx.type.root_orders(family)
        roots = [root_of_unity_int(r, p) for r in orders]
        stars = []
        for r, w in zip(orders, roots):
            stars.append({})
            for a in range(1, r):
                if math.gcd(a, r) == 1:
                    x = pow(w, a, p)
                    stars[-1][a] = (x + pow(x, p - 2, p)) % p
        for a, b, c in all_index_choices(ctx.type, family):
            x, y, z = stars[0][a], stars[1][b], stars[2][c]
            d = (x * x + y * y + z * z - x * y * z - 4) % p
            if d:
                out.append(legendre_int(-d, p))
    return out


def classify_prime(ctx: CycloContext, p: int) -> PrimeClassification:
    k = ctx.k
    if p % k != 1:
        return PrimeClassification(p, p % k, True, "congruence", [], False, False, False)
    omega = root_of_unity_int(k, p)
    residues = [legendre_int(-dv.value.mod_p(p, omega), p) for dv in ctx.D]
    reason = ctx.exclusion_reason(p) or ""
    excluded = bool(reason)
    direct = _direct_residues(ctx, p)
    any_nonor = any(r == 1 for r in direct)
    all_nonor = bool(direct) and all(r == 1 for r in direct)
    in_S = not excluded and all(r == 1 for r in residues)

    if not excluded and set(residues) != set(direct):
        raise OracleDisagreement(
            f"p={p}: cyclotomic residues {sorted(set(residues))} vs direct {sorted(set(direct))}"
        )
    if in_S:
        if not all_nonor:
            raise TheoremViolation(f"p={p} is in S but some hypermap of type {ctx.type} is orientable")
        for family in ctx.type.families():
            for r in ctx.type.root_orders(family):
                w = pow(omega, k // r, p)
                if multiplicative_order(w, p) != r:
                    raise TheoremViolation(f"p={p}: embedded root has order != {r}")
    return PrimeClassification(p, p % k, excluded, reason, residues, in_S, any_nonor, all_nonor)


@dataclass
class ScanResult:
    type: tuple[int, int, int]
    bound: int
    primes_seen: int
    n_congruent: int
    classifications: list[PrimeClassification] = field(default_factory=list)

    @property
    def S(self) -> list[int]:
        return [c.p for c in self.classifications if c.in_S]


def _classify_block(ctx: CycloContext, ps: list[int]) -> list[PrimeClassification]:
    return [classify_prime(ctx, p) for p in ps]


def scan(ctx: CycloContext, bound: int, jobs: int | None = 1, block: int = 2000) -> ScanResult:
    """Classify every prime p <= bound with p = 1 mod k, in ascending order."""
    primes = primes_up_to(bound)
    congruent = [int(p) for p in primes[primes % ctx.k == 1]]
    blocks = [congruent[i : i + block] for i in range(0, len(congruent), block)]
    jobs = jobs or os.cpu_count() or 1
    if jobs > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_classify_block, [ctx] * len(blocks), blocks))
    else:
        parts = [_classify_block(ctx, b) for b in blocks]
    out = [c for part in parts for c in part]
    return ScanResult(tuple(ctx.type), bound, len(primes), len(congruent), out)


# ------------------------------------------------------------ density


@dataclass(frozen=True)
class DensityReport:
    type: tuple[int, int, int]
    bound: int
    primes_seen: int
    n_congruent: int
    n_S: int
    empirical: float
    predicted: float
    h: int
    e: int
    h_provenance: str
    anchor_empirical: float
    anchor_predicted: float

    @property
    def ratio(self) -> float:
        return self.empirical / self.predicted

    @property
    def sigma(self) -> float:
        """Binomial standard deviation of |S| under the predicted density."""
        q = self.predicted
        return math.sqrt(self.primes_seen * q * (1 - q))

    @property
    def z_score(self) -> float:
        return (self.n_S - self.primes_seen * self.predicted) / self.sigma

    @property
    def anchor_rel_error(self) -> float:
        return abs(self.anchor_empirical / self.anchor_predicted - 1)

    def to_dict(self) -> dict:
        out = asdict(self)
        out.update(ratio=self.ratio, sigma=self.sigma, z_score=self.z_score)
        return out


def density_report(ctx: CycloContext, result: ScanResult) -> DensityReport:
    n_S = len(result.S)
    return DensityReport(
        type=tuple(ctx.type),
        bound=result.bound,
        primes_seen=result.primes_seen,
        n_congruent=result.n_congruent,
        n_S=n_S,
        empirical=n_S / result.primes_seen,
        predicted=1 / ctx.h,
        h=ctx.h,
        e=ctx.e,
        h_provenance=f"heuristic: GF(2) rank from {ctx.trials} sampled degree-one primes",
        anchor_empirical=result.n_congruent / result.primes_seen,
        anchor_predicted=1 / ctx.phi,
    )


# ------------------------------------------------------------ the (7,2,3) example

TRACE_CUBIC = (-1, -2, 1, 1)  # t^3 + t^2 - 2t - 1, low to high
NEG_D_CUBIC = (1, 3, -4, 1)  # t^3 - 4t^2 + 3t + 1


def _eval(poly, t, p):
    acc = 0
    for c in reversed(poly):
        acc = (acc * t + c) % p
    return acc


@dataclass(frozen=True)
class HallReport:
    p: int
    traces: tuple[int, int, int]
    d: tuple[int, int, int]
    neg_d_legendre: tuple[int, int, int]
    product_is_minus_one: bool
    neg_d_are_cubic_roots: bool
    d_nonzero: bool
    p_is_1_mod_4: bool

    @property
    def n_squares(self) -> int:
        return sum(1 for s in self.neg_d_legendre if s == 1)

    @property
    def index_two_deduction(self) -> bool | None:
        """p = 1 mod 4 forces one or three squares; None when not applicable."""
        if not self.p_is_1_mod_4:
            return None
        return self.n_squares in (1, 3)

    @property
    def ok(self) -> bool:
        checks = [self.product_is_minus_one, self.neg_d_are_cubic_roots, self.d_nonzero]
        if self.p_is_1_mod_4:
            checks.append(bool(self.index_two_deduction))
        return all(checks)


def hall_723(p: int) -> HallReport:
    if p in (2, 3, 7):
        raise ValueError("p must avoid 2, 3 and 7")
    if p % 7 not in (1, 6):
        raise CubicDoesNotSplit(f"t^3 + t^2 - 2t - 1 does not split mod {p}")
    t = np.arange(p, dtype=np.int64)
    t2 = t * t % p
    vals = (t2 * t % p + t2 - 2 * t - 1) % p
    roots = tuple(int(r) for r in np.flatnonzero(vals == 0))
    if len(roots) != 3:
        raise CubicDoesNotSplit(f"found roots {roots} mod {p}")
    d = tuple((r * r - 3) % p for r in roots)
    neg = tuple((-x) % p for x in d)
    prod = neg[0] * neg[1] % p * neg[2] % p
    return HallReport(
        p=p,
        traces=roots,
        d=d,
        neg_d_legendre=tuple(legendre_int(x, p) for x in neg),
        product_is_minus_one=prod == p - 1,
        neg_d_are_cubic_roots=all(_eval(NEG_D_CUBIC, x, p) == 0 for x in neg)
        and len(set(neg)) == 3,
        d_nonzero=all(d),
        p_is_1_mod_4=p % 4 == 1,
    )


def hall_density(bound: int) -> tuple[int, int, float]:
    """(#primes = 1 or 13 mod 28, #primes, ratio) up to bound."""
    primes = primes_up_to(bound)
    hits = int(np.count_nonzero(np.isin(primes % 28, (1, 13))))
    return hits, len(primes), hits / len(primes)


# ------------------------------------------------------------ output

CSV_COLUMNS = (
    "type", "family_set", "p", "p_mod_k", "excluded", "reason", "d_index",
    "neg_d_residue", "in_S", "any_nonor", "all_nonor", "chi", "genus",
)


def csv_rows(ctx: CycloContext, records: list[PrimeClassification]) -> list[dict]:
    rows = []
    type_str = ",".join(map(str, ctx.type))
    families = "+".join(ctx.type.families())
    for c in records:
        for i, res in enumerate(c.residues):
            chi = gen = ""
            if c.p_mod_k == 1 and res != 0:
                nonor = res == 1
                order = psl2_order(c.p) * (1 if nonor else 2)
                chi = euler_characteristic(order, ctx.type)
                gen = genus(chi, not nonor)
            rows.append(
                dict(
                    type=type_str, family_set=families, p=c.p, p_mod_k=c.p_mod_k,
                    excluded=int(c.excluded), reason=c.reason, d_index=i,
                    neg_d_residue=res, in_S=int(c.in_S), any_nonor=int(c.any_nonorientable),
                    all_nonor=int(c.all_nonorientable), chi=chi, genus=gen,
                )
            )
    return rows


def render(ctx: CycloContext, records: list[PrimeClassification], fmt: str = "csv") -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(csv_rows(ctx, records))
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([c.to_dict() for c in records], indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(ctx: CycloContext, records: list[PrimeClassification], fmt: str, destination) -> None:
    text = render(ctx, records, fmt)
    try:
        Path(destination).write_text(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {destination}: {exc}") from exc


def parse_json(text: str) -> list[PrimeClassification]:
    return [PrimeClassification.from_dict(d) for d in json.loads(text)]
