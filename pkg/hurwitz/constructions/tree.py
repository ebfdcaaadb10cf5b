"""Nested families of full words, their uniform Cantor measure and local estimates on it.

Both constructions store their levels in one `LambdaFamily`: a rooted tree whose
nodes carry the word, the level k, the kind of family the word belongs to and the
length of the marked prefix whose convergent is pinned in the rate window.
"""
from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Iterable

from loguru import logger

from hurwitz.approx.rates import ApproxRate
from hurwitz.arith.gaussian import GaussInt, GaussRat
from hurwitz.arith.intervals import Interval, sqrt_interval
from hurwitz.exceptions import DepthExhausted, PreconditionViolated
from hurwitz.geometry.cylinders import distance_enclosure
from hurwitz.hcf.digits import EMPTY, DigitSeq
from hurwitz.hcf.qpairs import q_pair
from hurwitz.utils.files import atomic_write_text

ROOT_RADIUS = Fraction(3, 4)  # the square of side 1 fits in |z| <= 3/4
HALF_DIAGONAL = sqrt_interval(Fraction(1, 2))


class Status(str, enum.Enum):
    CERTIFIED = "certified"
    OUT_OF_RANGE = "out-of-range"
    INFEASIBLE = "infeasible-at-desk-scale"
    FAILED = "failed"


class NodeKind(str, enum.Enum):
    ROOT = "root"
    LAMBDA = "lambda"
    LAMBDA_PRIME = "lambda-prime"


@dataclass(frozen=True, kw_only=True)
class Assertion:
    name: str
    k: int
    status: Status
    checked: int = 0
    failures: int = 0
    detail: str = ""

    def to_document(self) -> dict:
        return {
            "name": self.name,
            "k": self.k,
            "status": self.status.value,
            "checked": self.checked,
            "failures": self.failures,
            "detail": self.detail,
        }


def audit(
    name: str,
    k: int,
    outcomes: Iterable[bool],
    on_failure: Status = Status.FAILED,
    detail: str = "",
) -> Assertion:
    """Fold per-node outcomes into one assertion record."""
    outcomes = list(outcomes)
    failures = outcomes.count(False)
    status = Status.CERTIFIED if not failures else on_failure
    if failures and on_failure is Status.FAILED:
        logger.error(f"k={k} {name}: {failures} of {len(outcomes)} nodes fail {detail}")
    elif failures:
        logger.warning(f"k={k} {name}: {failures} of {len(outcomes)} nodes {status.value} {detail}")
    return Assertion(
        name=name,
        k=k,
        status=status,
        checked=len(outcomes),
        failures=failures,
        detail=detail,
    )


@dataclass(frozen=True, kw_only=True)
class Node:
    word: DigitSeq
    k: int
    kind: NodeKind
    parent: int | None = None
    # the convergent of word[:marked] sits in the window; 0 when nothing is marked
    marked: int = 0
    gamma: DigitSeq = EMPTY
    digit: GaussInt | None = None
    padding: DigitSeq = EMPTY

    def ball(self) -> tuple[GaussRat, Fraction]:
        """Center p/q and radius 2/|q|^2 of a disk holding the cylinder."""
        if not self.word:
            return GaussRat(0), ROOT_RADIUS
        p, q, _, _ = q_pair(self.word)
        return GaussRat.ratio(p, q), Fraction(2, q.norm())


@dataclass(kw_only=True)
class LambdaFamily:
    """The family tree; built once by a construction and read-only afterwards."""

    construction: str
    schedule: Any
    nodes: list[Node] = field(default_factory=list)
    children: list[list[int]] = field(default_factory=list)
    assertions: list[Assertion] = field(default_factory=list)
    gamma_sizes: dict[int, int] = field(default_factory=dict)

    def add(self, node: Node) -> int:
        index = len(self.nodes)
        self.nodes.append(node)
        self.children.append([])
        if node.parent is not None:
            self.children[node.parent].append(index)
        return index

    @property
    def root(self) -> int:
        return 0

    @property
    def depth(self) -> int:
        return max(node.k for node in self.nodes)

    def level(self, k: int, kind: NodeKind | None = None) -> list[int]:
        return [
            i
            for i, node in enumerate(self.nodes)
            if node.k == k and (kind is None or node.kind is kind)
        ]

    def members(self, k: int) -> list[int]:
        """Indices of Lambda_k."""
        if k == 1:
            return [self.root]
        return self.level(k, NodeKind.LAMBDA)

    def leaves(self) -> list[int]:
        return [i for i, kids in enumerate(self.children) if not kids]

    def family_sizes(self) -> list[int]:
        return [len(self.members(k)) for k in range(1, self.depth + 1)]

    def chain(self, index: int) -> list[int]:
        path = [index]
        while self.nodes[path[-1]].parent is not None:
            path.append(self.nodes[path[-1]].parent)
        return path[::-1]

    def dump(self) -> str:
        lines = [f"# construction={self.construction} nodes={len(self.nodes)}"]
        for i, node in enumerate(self.nodes):
            parent = "-" if node.parent is None else node.parent
            lines.append(f"{i}\t{parent}\t{node.k}\t{node.kind.value}\t{node.marked}\t{node.word}")
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path) -> Path:
        return atomic_write_text(path, self.dump())


def load_family_dump(path: str | Path) -> list[Node]:
    """Nodes of a family dump, in index order."""
    nodes = []
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        _, parent, k, kind, marked, *word = line.split("\t")
        nodes.append(
            Node(
                word=DigitSeq.parse(word[0] if word else ""),
                k=int(k),
                kind=NodeKind(kind),
                parent=None if parent == "-" else int(parent),
                marked=int(marked),
            )
        )
    return nodes


@dataclass(frozen=True, kw_only=True)
class CantorMeasure:
    family: LambdaFamily
    masses: tuple[Fraction, ...]

    def conserves_mass(self) -> bool:
        return all(
            sum((self.masses[c] for c in kids), Fraction(0)) == self.masses[i]
            for i, kids in enumerate(self.family.children)
            if kids
        )

    def level_mass(self, k: int) -> Fraction:
        return sum((self.masses[i] for i in self.family.members(k)), Fraction(0))

    def to_document(self) -> dict:
        return {
            "conserves_mass": self.conserves_mass(),
            "level_masses": [str(self.level_mass(k)) for k in range(1, self.family.depth + 1)],
            "leaf_mass_range": [
                str(min(self.masses[i] for i in self.family.leaves())),
                str(max(self.masses[i] for i in self.family.leaves())),
            ],
        }


def measure_build(family: LambdaFamily) -> CantorMeasure:
    """Split each node's mass evenly among its children, starting from 1 at the root."""
    masses = [Fraction(0)] * len(family.nodes)
    masses[family.root] = Fraction(1)
    for i in range(len(family.nodes)):
        kids = family.children[i]
        for c in kids:
            masses[c] = masses[i] / len(kids)
    measure = CantorMeasure(family=family, masses=tuple(masses))
    logger.debug(f"Measure over {len(masses)} nodes, conserved={measure.conserves_mass()}")
    return measure


def measure_of(measure: CantorMeasure, node: int | DigitSeq) -> Fraction:
    if isinstance(node, DigitSeq):
        for i, candidate in enumerate(measure.family.nodes):
            if candidate.word == node:
                return measure.masses[i]
        raise PreconditionViolated(f"{node} is not a node of the family")
    return measure.masses[node]


@dataclass(frozen=True, kw_only=True)
class SampledPoint:
    chain: tuple[int, ...]
    prefix: DigitSeq
    center: GaussRat
    radius: Fraction
    marked: tuple[tuple[int, int], ...]  # (prefix length, level k)

    def to_document(self) -> dict:
        return {
            "prefix": str(self.prefix),
            "center": str(self.center),
            "radius": str(self.radius),
            "marked": [list(pair) for pair in self.marked],
        }


def sample_point(family: LambdaFamily, selector: str | int = "first") -> SampledPoint:
    """Walk from the root to a leaf, taking the least child or a seeded random one."""
    if selector == "first":
        pick: Callable[[list[int]], int] = lambda kids: min(
            kids, key=lambda c: family.nodes[c].word.sort_key()
        )
    else:
        rng = random.Random(int(selector))
        pick = lambda kids: rng.choice(sorted(kids, key=lambda c: family.nodes[c].word.sort_key()))
    chain = [family.root]
    while family.children[chain[-1]]:
        chain.append(pick(family.children[chain[-1]]))
    leaf = family.nodes[chain[-1]]
    center, radius = leaf.ball()
    marked = tuple(
        (family.nodes[i].marked, family.nodes[i].k) for i in chain if family.nodes[i].marked
    )
    return SampledPoint(
        chain=tuple(chain), prefix=leaf.word, center=center, radius=radius, marked=marked
    )


@dataclass(frozen=True, kw_only=True)
class ProbeSample:
    radius: Fraction
    mass: Interval
    exponent: tuple[float, float]
    level: int | None
    regime: str

    def to_document(self) -> dict:
        return {
            "radius": str(self.radius),
            "mass": [str(self.mass.lo), str(self.mass.hi)],
            "exponent": list(self.exponent),
            "level": self.level,
            "regime": self.regime,
        }


def _ball_mass(measure: CantorMeasure, z: GaussRat, r: Fraction) -> Interval:
    family = measure.family
    lower = upper = Fraction(0)
    stack = [family.root]
    while stack:
        i = stack.pop()
        center, rho = family.nodes[i].ball()
        d_sq = (center - z).norm()
        if d_sq >= (r + rho) ** 2:
            continue
        if rho <= r and d_sq <= (r - rho) ** 2:
            lower += measure.masses[i]
            upper += measure.masses[i]
        elif family.children[i]:
            stack.extend(family.children[i])
        else:
            upper += measure.masses[i]
    return Interval(lower, upper)


def _exponent(mass: Interval, r: Fraction) -> tuple[float, float]:
    if mass.lo == 1:
        return 0.0, 0.0
    log_r = math.log(r)
    if log_r == 0:
        return math.nan, math.nan
    bounds = [
        math.log(m) / log_r if m > 0 else (math.inf if log_r < 0 else -math.inf)
        for m in (mass.lo, mass.hi)
    ]
    return min(bounds), max(bounds)


def resolution(family: LambdaFamily) -> Fraction:
    """Radii below the largest leaf ball cannot be resolved by the built tree."""
    return max(family.nodes[i].ball()[1] for i in family.leaves())


def local_dimension_estimates(
    measure: CantorMeasure, z: GaussRat, radii: Iterable[Fraction | int], schedule: Any = None
) -> list[ProbeSample]:
    """log mu(B(z, r)) / log r for each r, bracketed where leaves straddle the ball."""
    schedule = schedule if schedule is not None else measure.family.schedule
    floor = resolution(measure.family)
    samples = []
    for r in radii:
        r = Fraction(r)
        if r < floor:
            raise DepthExhausted(r, floor)
        mass = _ball_mass(measure, z, r)
        level, regime = schedule.regime(r) if schedule is not None else (None, "outside")
        samples.append(
            ProbeSample(
                radius=r, mass=mass, exponent=_exponent(mass, r), level=level, regime=regime
            )
        )
    return samples


class AuditRegime(str, enum.Enum):
    WINDOW = "window"
    BOUNDED = "bounded-digit"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True, kw_only=True)
class ConvergentAudit:
    n: int
    regime: AuditRegime
    margin: float  # lower bound over the relevant threshold, above 1 when certified

    def to_document(self) -> dict:
        return {"n": self.n, "regime": self.regime.value, "margin": self.margin}


def exactness_audit(
    point: SampledPoint,
    rate: ApproxRate,
    digit_bound: Fraction | int,
    factor: Fraction = Fraction(1),
) -> list[ConvergentAudit]:
    """Place every convergent of the sampled prefix but the last in one of two regimes.

    Marked convergents must sit in their window (1 - 1/k) psi <= |z - p/q| < psi over
    the whole leaf cylinder. Any other convergent is followed by a digit b with
    |b| <= `digit_bound`, and then |z - p/q| |q|^2 >= 1/(|b| + 1 + sqrt(2)/2) must beat
    `factor` times |q|^2 psi(|q|).
    """
    marked = dict(point.marked)
    report = []
    for n in range(1, len(point.prefix)):
        p, q, _, _ = q_pair(point.prefix[:n])
        psi = rate.at_norm(q.norm())
        if n in marked:
            k = marked[n]
            distance = distance_enclosure(point.prefix, GaussRat.ratio(p, q))
            inside = distance.ge(psi * Fraction(k - 1, k)) is True and distance.lt(psi) is True
            margin = float(distance.lo / psi.hi) if psi.hi else math.inf
            regime = AuditRegime.WINDOW if inside else AuditRegime.UNRESOLVED
            report.append(ConvergentAudit(n=n, regime=regime, margin=margin))
            continue
        b = point.prefix[n]
        lower = (sqrt_interval(b.norm()) + 1 + HALF_DIAGONAL).inverse()
        threshold = psi * q.norm() * factor
        margin = float(lower.lo / threshold.hi) if threshold.hi else math.inf
        bounded = b.norm() <= Fraction(digit_bound) ** 2 and lower.gt(threshold) is True
        regime = AuditRegime.BOUNDED if bounded else AuditRegime.UNRESOLVED
        report.append(ConvergentAudit(n=n, regime=regime, margin=margin))
    unresolved = sum(1 for entry in report if entry.regime is AuditRegime.UNRESOLVED)
    if unresolved:
        logger.warning(f"{unresolved} of {len(report)} convergents of {point.prefix} unresolved")
    return report
