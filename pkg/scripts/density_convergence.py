"""Empirical density of S against 1/h at a ladder of bounds.

    python3 scripts/density_convergence.py --type 7,7,7 --bounds 1e4,1e5,1e6
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass

from hypermaps.cyclo import CycloContext
from hypermaps.survey import density_report, scan
from hypermaps.triple import HyperbolicType


@dataclass
class Config:
    type: HyperbolicType
    bounds: tuple[int, ...]
    trials: int = 40
    jobs: int = 1


def run(cfg: Config) -> list[dict]:
    ctx = CycloContext(cfg.type, cfg.trials)
    rows = []
    for bound in cfg.bounds:
        rep = density_report(ctx, scan(ctx, bound, cfg.jobs))
        rows.append(
            dict(
                bound=bound,
                primes=rep.primes_seen,
                congruent=rep.n_congruent,
                n_S=rep.n_S,
                empirical=f"{rep.empirical:.6f}",
                predicted=f"{rep.predicted:.6f}",
                ratio=f"{rep.ratio:.4f}",
                z=f"{rep.z_score:+.2f}",
            )
        )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--type", default="7,7,7")
    ap.add_argument("--bounds", default="1e4,3e4,1e5,3e5,1e6")
    ap.add_argument("--trials", type=int, default=40)
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()
    cfg = Config(
        HyperbolicType.parse(args.type),
        tuple(int(float(b)) for b in args.bounds.split(",")),
        args.trials,
        args.jobs,
    )
    rows = run(cfg)
    writer = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)


if __name__ == "__main__":
    main()
