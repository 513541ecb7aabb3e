from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm


class NonHyperbolicType(ValueError):
    pass


@dataclass(frozen=True)
class HyperbolicType:
    """An ordered triple (l, m, n) with 1/l + 1/m + 1/n < 1.

    Order matters: (7, 2, 3) and (2, 3, 7) present different generators.
    """

    l: int
    m: int
    n: int

    def __post_init__(self):
        for j in self:
            if not isinstance(j, int) or j < 2:
                raise NonHyperbolicType(f"type entries must be integers >= 2, got {tuple(self)}")
        if self.mu >= 1:
            raise NonHyperbolicType(f"{tuple(self)} is not hyperbolic (mu = {self.mu})")

    @classmethod
    def parse(cls, text: str) -> HyperbolicType:
        parts = [s for s in text.replace(" ", "").split(",") if s]
        if len(parts) != 3:
            raise NonHyperbolicType(f"expected three comma-separated integers, got {text!r}")
        try:
            return cls(*(int(s) for s in parts))
        except ValueError as exc:
            if isinstance(exc, NonHyperbolicType):
                raise
            raise NonHyperbolicType(f"bad type {text!r}") from exc

    def __iter__(self):
        return iter((self.l, self.m, self.n))

    def __str__(self):
        return f"({self.l},{self.m},{self.n})"

    @property
    def mu(self) -> Fraction:
        return Fraction(1, self.l) + Fraction(1, self.m) + Fraction(1, self.n)

    @property
    def k(self) -> int:
        """Conductor 2*lcm(l, m, n)."""
        return 2 * lcm(self.l, self.m, self.n)

    @property
    def all_odd(self) -> bool:
        return all(j % 2 for j in self)

    def families(self) -> tuple[str, ...]:
        return ("doubled", "odd") if self.all_odd else ("doubled",)

    def root_orders(self, family: str = "doubled") -> tuple[int, int, int]:
        if family == "doubled":
            return (2 * self.l, 2 * self.m, 2 * self.n)
        if family == "odd":
            if not self.all_odd:
                raise ValueError(f"odd family needs all entries odd, got {self}")
            return (self.l, self.m, self.n)
        raise ValueError(f"unknown family {family!r}")

    def sorted(self) -> HyperbolicType:
        return HyperbolicType(*sorted(self))


def hyperbolic_types(max_entry: int) -> list[HyperbolicType]:
    """All ordered-ascending hyperbolic triples with entries <= max_entry."""
    out = []
    for l in range(2, max_entry + 1):
        for m in range(l, max_entry + 1):
            for n in range(m, max_entry + 1):
                if Fraction(1, l) + Fraction(1, m) + Fraction(1, n) < 1:
                    out.append(HyperbolicType(l, m, n))
    return out
