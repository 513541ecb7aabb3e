"""Residue verdict against full enumeration, for every root choice.

For each (type, prime) pair with |PSL(2,p)| under the cap, builds every
construction, enumerates <R,S,T> and <X,Y,Z>, and prints one CSV row per
construction.  Rows with rotation_order below |PSL(2,p)| flag choices whose
generators fall into a proper subgroup.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass, field

from hypermaps.hypermap import oracle_report, orientability_by_residue
from hypermaps.psl2 import DEFAULT_CAP, DegenerateD, all_index_choices, build_generators, psl2_order
from hypermaps.triple import HyperbolicType

DEFAULT_CASES = "7,7,7:29;2,4,5:41;3,3,5:31;3,3,5:61;3,3,4:73;3,5,5:31;2,3,7:337"


@dataclass
class Config:
    cases: list[tuple[HyperbolicType, int]] = field(default_factory=list)
    cap: int = DEFAULT_CAP


def parse_cases(text: str) -> list[tuple[HyperbolicType, int]]:
    out = []
    for item in text.split(";"):
        t, p = item.split(":")
        out.append((HyperbolicType.parse(t), int(p)))
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cases", default=DEFAULT_CASES, help="type:prime pairs separated by ';'")
    ap.add_argument("--cap", type=int, default=DEFAULT_CAP)
    args = ap.parse_args()
    cfg = Config(parse_cases(args.cases), args.cap)

    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(
        ["type", "p", "family", "indices", "d", "nonor_residue", "nonor_oracle",
         "rotation_order", "psl_order", "full_order"]
    )
    for htype, p in cfg.cases:
        if psl2_order(p) > cfg.cap:
            print(f"# skipping {htype}/{p}: above cap", file=sys.stderr)
            continue
        for family in htype.families():
            for idx in all_index_choices(htype, family):
                try:
                    data = build_generators(htype, p, family, idx)
                except DegenerateD:
                    continue
                rep = oracle_report(data, cfg.cap)
                writer.writerow(
                    [",".join(map(str, htype)), p, family, ",".join(map(str, idx)), data.d.value,
                     int(orientability_by_residue(data.d)), int(rep.x_in_rotation_group),
                     rep.rotation_order, psl2_order(p), rep.full_order]
                )


if __name__ == "__main__":
    main()
