"""How many of the three -d_j are squares, split by p mod 28.

For p = 1 or 13 mod 28 the count is always 1 or 3; the other classes
(p = 15 or 27 mod 28) may show 0 or 2.
"""

from __future__ import annotations

import argparse
from collections import Counter, defaultdict
from dataclasses import dataclass

from hypermaps.survey import hall_723, primes_up_to


@dataclass
class Config:
    bound: int = 100_000


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-prime", type=int, default=Config.bound)
    cfg = Config(ap.parse_args().max_prime)

    table: dict[int, Counter] = defaultdict(Counter)
    for p in primes_up_to(cfg.bound):
        p = int(p)
        if p % 7 not in (1, 6) or p in (2, 3, 7):
            continue
        table[p % 28][hall_723(p).n_squares] += 1
    print(f"{'p mod 28':>8} " + " ".join(f"{k} sq".rjust(7) for k in range(4)))
    for residue in sorted(table):
        print(f"{residue:>8} " + " ".join(f"{table[residue][k]:7d}" for k in range(4)))


if __name__ == "__main__":
    main()
