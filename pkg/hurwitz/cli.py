"""`hurwitz` command line: expansions, geometry, enumeration, constructions, diagnostics."""
from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

from loguru import logger
from pydantic import BaseModel, validator

from hurwitz import config
from hurwitz.approx.quality import legendre_bounds, legendre_test
from hurwitz.approx.rates import parse_rate
from hurwitz.arith.tokens import parse_gauss_int, parse_gauss_rat
from hurwitz.constructions import small_o, tau
from hurwitz.constructions.manifest import build_manifest, failed_assertions, write_run
from hurwitz.constructions.schedules import (
    ScheduleMode,
    load_overrides,
    schedule_build,
    schedule_build_tau,
)
from hurwitz.constructions.tree import (
    Assertion,
    AuditRegime,
    LambdaFamily,
    Status,
    audit,
    measure_build,
    sample_point,
)
from hurwitz.dimension import dimension_run
from hurwitz.enumeration.annulus import digit_annulus
from hurwitz.enumeration.families import enumerate_full, enumerate_relative
from hurwitz.exceptions import (
    EXIT_CODES,
    ErrorKind,
    HurwitzError,
    PreconditionViolated,
    exit_code_for,
)
from hurwitz.geometry.cylinders import cylinder_metrics
from hurwitz.geometry.prototypes import is_full, prototype_set
from hurwitz.geometry.templates import render_region_svg
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.expansion import hcf_expand
from hurwitz.hcf.qpairs import evaluate, qpair_of
from hurwitz.suites import run_suite
from hurwitz.utils.files import atomic_write_text, write_json
from hurwitz.utils.slugify import run_slug

LOG_FORMAT = (
    "<green>{time:YYYY-MM-DD HH:mm:ss.SSS}</green> | "
    "<level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
RUNS_DIR = Path("runs")
EXACTNESS_SAMPLES = 3


class RunConfig(BaseModel):
    """Everything that determines a run; the seed fixes every random choice."""

    command: str
    kind: Optional[str] = None
    rate: Optional[str] = None
    depth: int = 2
    seed: int = config.DEFAULT_SEED
    budget: int = config.DEFAULT_BUDGET
    precision: int = config.PRECISION_START_BITS
    mode: ScheduleMode = ScheduleMode.DESK
    epsilon: str = "1/5"
    overrides: Optional[Path] = None
    out: Optional[Path] = None
    workers: int = config.WORKERS

    @validator("depth", "budget", "precision", "workers")
    def positive(cls, value):
        if value <= 0:
            raise ValueError("must be positive")
        return value

    @validator("epsilon")
    def epsilon_in_range(cls, value):
        if not 0 < Fraction(value) < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        return value

    def recorded(self) -> dict[str, str]:
        """Fields stored in manifests; the output location is left out."""
        return {
            key: str(value.value if isinstance(value, ScheduleMode) else value)
            for key, value in self.dict(exclude={"out"}).items()
            if value is not None
        }


def configure_logging(verbose: bool = False) -> None:
    logger.remove()
    logger.add(sys.stderr, format=LOG_FORMAT, level="DEBUG" if verbose else config.LOG_LEVEL)


def _digits(token: str) -> DigitSeq:
    return DigitSeq.parse(token)


def _emit(document: dict, out: Path | None) -> None:
    if out is not None:
        write_json(out, document)
    print(json.dumps(document, indent=2, default=str))


def cmd_expand(args: argparse.Namespace) -> int:
    z = parse_gauss_rat(args.z)
    expansion = hcf_expand(z, max_depth=args.depth)
    rows = [
        {
            "n": n,
            "digit": str(expansion.digits[n - 1]),
            "p": str(p),
            "q": str(q),
            "convergent": str(convergent),
            "tail": str(expansion.tails[n]),
        }
        for n, (p, q, convergent) in enumerate(expansion.convergents(), start=1)
    ]
    document = {
        "z": str(z),
        "digits": [str(b) for b in expansion.digits],
        "terminated": expansion.terminated,
        "convergents": rows,
    }
    print(f"z = {z}  [{expansion.digits}]")
    for row in rows:
        print(
            f"{row['n']:>3}  {row['digit']:>8}  {row['convergent']:>20}"
            f"  q={row['q']}  T={row['tail']}"
        )
    if args.out is not None:
        write_json(args.out, document)
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    seq = _digits(args.digits)
    _emit({"digits": str(seq), "value": str(evaluate(seq))}, args.out)
    return 0


def cmd_convergents(args: argparse.Namespace) -> int:
    seq = _digits(args.digits)
    trace = qpair_of(seq)
    rows = [
        {
            "n": n,
            "p": str(trace.p[n]),
            "q": str(trace.q[n]),
            "q_norm": trace.q[n].norm(),
            "convergent": str(trace.convergent(n)),
        }
        for n in range(1, len(seq) + 1)
    ]
    _emit({"digits": str(seq), "convergents": rows}, args.out)
    return 0


def cmd_legendre(args: argparse.Namespace) -> int:
    z = parse_gauss_rat(args.z)
    p, q = parse_gauss_int(args.p), parse_gauss_int(args.q)
    expansion = hcf_expand(z)
    result = legendre_test(expansion, p, q)
    bounds = legendre_bounds(z, expansion, p, q)
    document = {
        "z": str(z),
        "p": str(p),
        "q": str(q),
        "claim": result.claim.value,
        "is_convergent": result.is_convergent,
        "sound": result.sound,
        "bounds": None
        if bounds is None
        else {"n": bounds.n, "quadratic": bounds.quadratic_bound, "half_t": bounds.half_t_bound},
    }
    _emit(document, args.out)
    return 0


def cmd_cylinder(args: argparse.Namespace) -> int:
    seq = _digits(args.digits)
    metrics = cylinder_metrics(seq)
    document = {
        "digits": str(seq),
        "full": is_full(seq).value,
        "q_norm": metrics.q_norm,
        "diameter": [str(metrics.diameter_lower), str(metrics.diameter_upper)],
        "diameter_bound": str(metrics.diameter_bound),
        "within_bound": metrics.within_bound,
        "c0": str(metrics.c0),
        "area": [str(metrics.area_inner), str(metrics.area_outer)],
    }
    if args.svg is not None:
        svg = render_region_svg(prototype_set(seq), title=f"prototype of [{seq}]")
        atomic_write_text(args.svg, svg)
    _emit(document, args.out)
    return 0


def cmd_enumerate(args: argparse.Namespace, run: RunConfig) -> int:
    q = Fraction(args.q)
    if args.prefix:
        family = enumerate_relative(
            _digits(args.prefix), args.m, q, run.budget, run.workers, args.total
        )
    else:
        family = enumerate_full(args.m, q, run.budget, run.workers)
    if args.dump is not None:
        family.write(args.dump)
    document = {
        "m": family.m,
        "q": str(family.q),
        "prefix": str(family.prefix),
        "members": len(family.members),
        "visited": family.visited,
        "policy_log": family.policy_log,
        "diagnostics": family.diagnostics,
    }
    _emit(document, run.out)
    return 0


def cmd_annulus(args: argparse.Namespace, run: RunConfig) -> int:
    annulus = digit_annulus(
        _digits(args.u), args.k, parse_rate(run.rate or "x^-3"), args.cap, random.Random(run.seed)
    )
    document = {**annulus.summary(), "digits": [str(b) for b in annulus.certified]}
    _emit(document, run.out)
    return 0


def _exactness_assertion(family: LambdaFamily, seed: int) -> list[Assertion]:
    module = tau if family.construction == "tau" else small_o
    outcomes = []
    for i in range(EXACTNESS_SAMPLES):
        point = sample_point(family, seed + i)
        report = module.exactness_report(family, point)
        outcomes.extend(entry.regime is not AuditRegime.UNRESOLVED for entry in report)
    on_failure = Status.FAILED if family.construction == "tau" else Status.OUT_OF_RANGE
    detail = f"{EXACTNESS_SAMPLES} sampled points"
    return [audit("exactness_regimes", family.depth, outcomes, on_failure, detail)]


def cmd_construct(args: argparse.Namespace, run: RunConfig) -> int:
    if run.rate is None:
        raise PreconditionViolated("construct needs --rate")
    rate = parse_rate(run.rate)
    overrides = load_overrides(run.overrides) if run.overrides is not None else {}
    if run.kind == "tau":
        schedule = schedule_build_tau(rate, run.depth, run.mode, overrides, run.budget)
        family = tau.build_lambda_tau(schedule, run.depth, run.budget, run.seed, run.workers)
        measure = tau.measure_build_tau(family)
        extra = tau.mass_identities(measure)
    else:
        schedule = schedule_build(rate, run.epsilon, run.depth, run.mode, overrides)
        family = small_o.build_lambda(schedule, run.depth, run.budget, run.seed, run.workers)
        measure = measure_build(family)
        extra = small_o.mass_bounds(measure)
    extra += _exactness_assertion(family, run.seed)
    manifest = build_manifest(family, measure, run.seed, extra, run.recorded())
    run_dir = run.out or RUNS_DIR / run_slug(run.kind, run.rate, run.depth, run.seed)
    write_run(run_dir, family, manifest)
    failed = failed_assertions(manifest)
    summary = {
        "run_dir": str(run_dir),
        "family_sizes": manifest["family_sizes"],
        "failed": len(failed),
    }
    print(json.dumps(summary))
    return EXIT_CODES[ErrorKind.INTERNAL] if failed else 0


def cmd_dimension(args: argparse.Namespace, run: RunConfig) -> int:
    scales = [Fraction(s) for s in args.scales.split(",")] if args.scales else None
    report, sweep = dimension_run(args.run_dir, scales, args.points, args.seed)
    _emit({"box_counting": report.to_document(), "local_exponents": sweep.to_document()}, run.out)
    return 0


def cmd_verify(args: argparse.Namespace, run: RunConfig) -> int:
    options: dict[str, Any] = {}
    if args.qmax is not None:
        options["qmax"] = args.qmax
    report = run_suite(args.suite, run.seed, args.size, run.workers, **options)
    _emit(report.to_document(), run.out)
    return 0 if report.passed else EXIT_CODES[ErrorKind.INTERNAL]


def _common(parser: argparse.ArgumentParser, depth: int | None = 2) -> None:
    parser.add_argument("--rate", help='rate such as "x^-4", "1/32*x^-2" or "table:psi.csv"')
    parser.add_argument("--depth", type=int, default=depth)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--budget", type=int, default=config.DEFAULT_BUDGET)
    parser.add_argument("--precision", type=int, default=config.PRECISION_START_BITS)
    parser.add_argument(
        "--mode", choices=[m.value for m in ScheduleMode], default=ScheduleMode.DESK.value
    )
    parser.add_argument("--workers", type=int, default=config.WORKERS)
    parser.add_argument("--out", type=Path)
    parser.add_argument("--verbose", "-v", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hurwitz", description=config.PROJECT_SUMMARY.strip())
    parser.add_argument("--version", action="version", version=config.VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="HCF digits, convergents and tails of a Gaussian rational")
    p.add_argument("z")
    _common(p, depth=None)
    p = sub.add_parser("eval", help="value of [0; a_1, ..., a_n]")
    p.add_argument("digits")
    _common(p)
    p = sub.add_parser("convergents", help="Q-pairs of a digit word")
    p.add_argument("digits")
    _common(p)
    p = sub.add_parser("legendre", help="Legendre claim for p/q against z")
    p.add_argument("z")
    p.add_argument("p")
    p.add_argument("q")
    _common(p)
    p = sub.add_parser("cylinder", help="certified cylinder metrics, optional prototype SVG")
    p.add_argument("digits")
    p.add_argument("--svg", type=Path)
    _common(p)
    p = sub.add_parser("enumerate", help="full sequences first crossing Q")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--q", default="5")
    p.add_argument("--prefix", default="")
    p.add_argument("--total", type=int)
    p.add_argument("--dump", type=Path)
    _common(p)
    p = sub.add_parser("annulus", help="digit annulus below a full word")
    p.add_argument("u")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--cap", type=int)
    _common(p)
    p = sub.add_parser("construct", help="build a Cantor family and its manifest")
    p.add_argument("kind", choices=["small-o", "tau"])
    p.add_argument("--epsilon", default="1/5")
    p.add_argument("--overrides", type=Path, help="JSON schedule overrides")
    _common(p)
    p = sub.add_parser("dimension", help="box counts and local exponents of a run")
    p.add_argument("run_dir", type=Path)
    p.add_argument("--scales", help="comma separated dyadic scales, e.g. 1/2,1/16,1/256")
    p.add_argument("--points", type=int, default=3)
    _common(p)
    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("suite")
    p.add_argument("--size", type=int, default=100)
    p.add_argument("--qmax", type=int)
    _common(p)
    return parser


HANDLERS: dict[str, Callable[..., int]] = {
    "enumerate": cmd_enumerate,
    "annulus": cmd_annulus,
    "construct": cmd_construct,
    "dimension": cmd_dimension,
    "verify": cmd_verify,
}
PLAIN_HANDLERS: dict[str, Callable[[argparse.Namespace], int]] = {
    "expand": cmd_expand,
    "eval": cmd_eval,
    "convergents": cmd_convergents,
    "legendre": cmd_legendre,
    "cylinder": cmd_cylinder,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and not argv[0].startswith("-") and argv[0] not in {*HANDLERS, *PLAIN_HANDLERS}:
        configure_logging()
        logger.error(f"Unknown command {argv[0]!r}")
        return EXIT_CODES[ErrorKind.UNKNOWN]
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    exc: BaseException | None = None
    try:
        run = RunConfig(
            command=args.command,
            kind=getattr(args, "kind", None),
            rate=args.rate,
            depth=args.depth if args.depth is not None else 2,
            seed=args.seed if args.seed is not None else config.DEFAULT_SEED,
            budget=args.budget,
            precision=args.precision,
            mode=args.mode,
            epsilon=getattr(args, "epsilon", "1/5"),
            overrides=getattr(args, "overrides", None),
            out=args.out,
            workers=args.workers,
        )
        config.PRECISION_START_BITS = run.precision
        if args.command in PLAIN_HANDLERS:
            return PLAIN_HANDLERS[args.command](args)
        return HANDLERS[args.command](args, run)
    except (HurwitzError, ValueError) as error:
        exc = error
        logger.error(f"{type(error).__name__}: {error}")
    except Exception as error:
        exc = error
        logger.exception(f"Unexpected error in {args.command}")
    return exit_code_for(exc)
