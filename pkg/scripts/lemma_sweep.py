"""Which branch of the non-vanishing argument each hyperbolic type uses.

Checks d != 0 and the four-factor identity exactly, and prints a per-case
tally followed by any type that needed the exhaustive fallback.
"""

from __future__ import annotations

import argparse
import time
from collections import Counter
from dataclasses import dataclass

from hypermaps.cyclo import choose_nonzero_roots, cyclo_field, embed_root, factorization_rhs
from hypermaps.triple import hyperbolic_types


@dataclass
class Config:
    max_entry: int = 13


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-entry", type=int, default=Config.max_entry)
    cfg = Config(ap.parse_args().max_entry)

    t0 = time.perf_counter()
    cases: Counter[str] = Counter()
    fallback = []
    for htype in hyperbolic_types(cfg.max_entry):
        choice = choose_nonzero_roots(htype)
        K = cyclo_field(htype.k)
        roots = [embed_root(K, r, a) for r, a in zip(htype.root_orders(), choice.indices)]
        assert roots[0] * roots[0] * choice.d == factorization_rhs(*roots)
        cases[choice.case] += 1
        if "exhaustive" in choice.case:
            fallback.append((tuple(htype), choice.indices))
    elapsed = time.perf_counter() - t0
    for case, n in cases.most_common():
        print(f"{n:5d}  {case}")
    print(f"total {sum(cases.values())} types in {elapsed:.1f} s")
    for t, idx in fallback:
        print(f"fallback: {t} with indices {idx}")


if __name__ == "__main__":
    main()
