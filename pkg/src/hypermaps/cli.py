"""Command-line front end: ``hypermaps construct|verify|scan|density|hall723``.

Exit codes
----------
0  success
1  a verification check failed, or bad input not covered below
2  non-hyperbolic type (argparse usage errors share this code)
3  the prime does not carry the required roots of unity
4  degenerate d = 0
5  enumeration cap exceeded
6  two independent routes disagreed (a bug signal)
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from .cyclo import CycloContext
from .ff import OrderUnavailable
from .hypermap import (
    InvariantViolation,
    OracleDisagreement,
    build_flag_structure,
    make_record,
    oracle_report,
    orientability_by_residue,
)
from .psl2 import (
    DEFAULT_CAP,
    CapExceeded,
    DegenerateD,
    all_index_choices,
    build_generators,
    psl2_order,
    verify_type,
)
from .survey import (
    TheoremViolation,
    density_report,
    emit,
    hall_723,
    hall_density,
    primes_up_to,
    render,
    scan,
)
from .triple import HyperbolicType, NonHyperbolicType

EXIT_CHECK_FAILED = 1
EXIT_NON_HYPERBOLIC = 2
EXIT_CONGRUENCE = 3
EXIT_DEGENERATE = 4
EXIT_CAP = 5
EXIT_DISAGREEMENT = 6


@dataclass
class CliConfig:
    subcommand: str
    type: HyperbolicType | None = None
    prime: int | None = None
    family: str = "doubled"
    indices: tuple[int, int, int] = (1, 1, 1)
    bound: int = 2000
    fmt: str = "csv"
    out: str | None = None
    cap: int = DEFAULT_CAP
    trials: int = 40
    jobs: int = 1
    json: bool = False
    oracle: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> CliConfig:
        htype = getattr(args, "type", None)
        if htype is not None and getattr(args, "sort", False):
            htype = htype.sorted()
        return cls(
            subcommand=args.command,
            type=htype,
            prime=getattr(args, "prime", None),
            family=getattr(args, "family", "doubled"),
            indices=tuple(getattr(args, "indices", (1, 1, 1))),
            bound=getattr(args, "max_prime", 2000),
            fmt=getattr(args, "format", "csv"),
            out=getattr(args, "out", None),
            cap=getattr(args, "cap", DEFAULT_CAP),
            trials=getattr(args, "trials", 40),
            jobs=getattr(args, "jobs", None) or os.cpu_count() or 1,
            json=args.json if args.json is not None else args.command == "construct",
            oracle=getattr(args, "oracle", False),
        )


# ------------------------------------------------------------ argument types


def _type_arg(text: str) -> HyperbolicType:
    try:
        return HyperbolicType.parse(text)
    except NonHyperbolicType as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _indices_arg(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(s) for s in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad indices {text!r}") from exc
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("indices take three comma-separated integers")
    return parts


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypermaps",
        description="Regular hypermaps with rotation group PSL(2, p).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, needs_type: bool = True) -> None:
        if needs_type:
            p.add_argument("--type", type=_type_arg, required=True, metavar="L,M,N")
            p.add_argument("--sort", action="store_true", help="reorder the type as l <= m <= n")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--json", dest="json", action="store_true", default=None)
        mode.add_argument("--text", dest="json", action="store_false")

    for name, helptext in (
        ("construct", "build generators and report the hypermap"),
        ("verify", "check a construction against full enumeration"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--prime", type=int, required=True)
        p.add_argument("--family", choices=("doubled", "odd"), default="doubled")
        p.add_argument("--indices", type=_indices_arg, default=(1, 1, 1), metavar="A,B,C")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)

    for name, helptext in (
        ("scan", "classify primes up to a bound"),
        ("density", "compare the density of S with 1/h"),
    ):
        p = sub.add_parser(name, help=helptext)
        common(p)
        p.add_argument("--max-prime", type=int, default=2000)
        p.add_argument("--trials", type=int, default=40)
        p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
        p.add_argument("--cap", type=int, default=DEFAULT_CAP)
        if name == "scan":
            p.add_argument("--out", default=None, help="output file (default: stdout)")
            p.add_argument("--format", choices=("csv", "json"), default="csv")
            p.add_argument(
                "--oracle",
                action="store_true",
                help="re-check primes in S by enumeration when |PSL(2,p)| <= cap",
            )

    p = sub.add_parser("hall723", help="the (7,2,3) example with its two cubics")
    common(p, needs_type=False)
    p.add_argument("--max-prime", type=int, default=100_000)
    return parser


# ------------------------------------------------------------ subcommands


def _print(cfg: CliConfig, payload: dict, lines: list[str]) -> None:
    if cfg.json:
        print(json.dumps(payload, indent=1, sort_keys=False))
    else:
        print("\n".join(lines))


def cmd_construct(cfg: CliConfig) -> int:
    data = build_generators(cfg.type, cfg.prime, cfg.family, cfg.indices)
    report = verify_type(data)
    record = make_record(data, verified=report.checks)
    payload = record.to_dict()
    payload["traces"] = [data.xi_s.value, data.zeta_s.value, data.eta_s.value]
    lines = [f"{k:>12}: {v}" for k, v in payload.items() if k != "verified"]
    lines += [f"{'check ' + k:>24}: {'ok' if v else 'FAIL'}" for k, v in report.checks.items()]
    _print(cfg, payload, lines)
    return 0 if report.ok else EXIT_CHECK_FAILED


def cmd_verify(cfg: CliConfig) -> int:
    order = psl2_order(cfg.prime)
    if order > cfg.cap:
        raise CapExceeded(f"|PSL(2,{cfg.prime})| = {order} exceeds cap {cfg.cap}")
    data = build_generators(cfg.type, cfg.prime, cfg.family, cfg.indices)
    checks = dict(verify_type(data).checks)

    oracle = oracle_report(data, cfg.cap)
    nonor_residue = orientability_by_residue(data.d)
    nonor_oracle = oracle.x_in_rotation_group
    if oracle.index not in (1, 2) or nonor_oracle != (oracle.index == 1):
        raise OracleDisagreement(f"inconsistent oracle report {oracle}")
    if nonor_residue != nonor_oracle:
        raise OracleDisagreement(
            f"residue says non-orientable={nonor_residue}, enumeration says {nonor_oracle}"
        )
    checks["full_psl"] = oracle.rotation_order == order
    checks["orientability_agrees"] = True

    flags = build_flag_structure(data, 2 * cfg.cap)
    checks["euler_consistent"] = True
    record = make_record(data, verified=checks, rotation_order=oracle.rotation_order)
    payload = record.to_dict()
    payload.update(
        rotation_order=oracle.rotation_order,
        full_order=oracle.full_order,
        index=oracle.index,
        V=flags.vertices,
        E=flags.edges,
        F=flags.faces,
        face_counts=list(flags.face_counts),
    )
    lines = [
        f"type {cfg.type}  p = {cfg.prime}  family {cfg.family}  indices {cfg.indices}",
        f"|<R,S,T>| = {oracle.rotation_order}  (|PSL(2,{cfg.prime})| = {order})",
        f"|<X,Y,Z>| = {oracle.full_order}  index {oracle.index}",
        f"V - E + F = {flags.vertices} - {flags.edges} + {flags.faces} = {flags.chi}",
        f"orientable: {record.orientable}  chi = {record.chi}  genus = {record.genus}",
    ]
    lines += [f"  {k:<22} {'ok' if v else 'FAIL'}" for k, v in checks.items()]
    _print(cfg, payload, lines)
    return 0 if all(checks.values()) else EXIT_CHECK_FAILED


def _oracle_recheck(cfg: CliConfig, primes: list[int]) -> list[int]:
    """Enumerate every construction at each small prime in S; return the primes checked."""
    checked = []
    for p in primes:
        if psl2_order(p) > cfg.cap:
            continue
        for family in cfg.type.families():
            for idx in all_index_choices(cfg.type, family):
                try:
                    data = build_generators(cfg.type, p, family, idx)
                except DegenerateD:
                    continue
                rep = oracle_report(data, cfg.cap)
                if not rep.x_in_rotation_group:
                    raise TheoremViolation(f"p={p} in S but {family} {idx} is orientable")
        checked.append(p)
    return checked


def cmd_scan(cfg: CliConfig) -> int:
    t0 = time.perf_counter()
    ctx = CycloContext(cfg.type, cfg.trials)
    result = scan(ctx, cfg.bound, cfg.jobs)
    checked = _oracle_recheck(cfg, result.S) if cfg.oracle else []
    summary = dict(
        type=list(cfg.type),
        bound=cfg.bound,
        primes_seen=result.primes_seen,
        n_congruent=result.n_congruent,
        n_S=len(result.S),
        S_head=result.S[:20],
        oracle_checked=checked,
        seconds=round(time.perf_counter() - t0, 3),
    )
    if cfg.out is None:
        sys.stdout.write(render(ctx, result.classifications, cfg.fmt))
    else:
        emit(ctx, result.classifications, cfg.fmt, cfg.out)
        _print(cfg, summary, [f"{k}: {v}" for k, v in summary.items()])
    return 0


def cmd_density(cfg: CliConfig) -> int:
    ctx = CycloContext(cfg.type, cfg.trials)
    rep = density_report(ctx, scan(ctx, cfg.bound, cfg.jobs))
    payload = rep.to_dict()
    lines = [
        f"type {cfg.type}  k = {ctx.k}  phi(k) = {ctx.phi}  |D| = {len(ctx.D)}",
        f"h = 2^{rep.e} * {ctx.phi} = {rep.h}  ({rep.h_provenance})",
        f"{'':<24}{'count':>10}{'empirical':>12}{'predicted':>12}",
        f"{'primes <= bound':<24}{rep.primes_seen:>10}",
        f"{'p = 1 mod k':<24}{rep.n_congruent:>10}{rep.anchor_empirical:>12.6f}{rep.anchor_predicted:>12.6f}",
        f"{'S':<24}{rep.n_S:>10}{rep.empirical:>12.6f}{rep.predicted:>12.6f}",
        f"ratio {rep.ratio:.4f}  z = {rep.z_score:+.2f}",
    ]
    if tuple(cfg.type) == (7, 2, 3):
        hits, total, frac = hall_density(cfg.bound)
        payload["p_1_or_13_mod_28"] = dict(count=hits, empirical=frac, predicted=1 / 6)
        lines.append(f"{'p = 1, 13 mod 28':<24}{hits:>10}{frac:>12.6f}{1 / 6:>12.6f}")
    _print(cfg, payload, lines)
    return 0


def cmd_hall723(cfg: CliConfig) -> int:
    primes = [int(p) for p in primes_up_to(cfg.bound) if p % 7 in (1, 6) and p not in (2, 3, 7)]
    failures = []
    n_deduction = 0
    for p in primes:
        rep = hall_723(p)
        if not rep.ok:
            failures.append(p)
        if rep.index_two_deduction is not None:
            n_deduction += 1
    hits, total, frac = hall_density(cfg.bound)
    payload = dict(
        bound=cfg.bound,
        primes_tested=len(primes),
        failures=failures,
        primes_1_mod_4_checked=n_deduction,
        p_1_or_13_mod_28=hits,
        primes_seen=total,
        density=frac,
        predicted_density=1 / 6,
    )
    lines = [
        f"primes p = +-1 mod 7 up to {cfg.bound}: {len(primes)}",
        f"product of -d_j = -1, -d_j roots of t^3-4t^2+3t+1, d_j != 0: "
        f"{'all hold' if not failures else f'fails at {failures[:10]}'}",
        f"one or three -d_j square whenever p = 1 mod 4: checked at {n_deduction} primes",
        f"density of p = 1, 13 mod 28: {hits}/{total} = {frac:.6f} (1/6 = {1 / 6:.6f})",
    ]
    _print(cfg, payload, lines)
    return 0 if not failures else EXIT_CHECK_FAILED


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "scan": cmd_scan,
    "density": cmd_density,
    "hall723": cmd_hall723,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = CliConfig.from_args(args)
    try:
        return COMMANDS[cfg.subcommand](cfg)
    except NonHyperbolicType as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NON_HYPERBOLIC
    except OrderUnavailable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONGRUENCE
    except DegenerateD as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (OracleDisagreement, TheoremViolation, InvariantViolation) as exc:
        print(f"BUG: {exc}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
