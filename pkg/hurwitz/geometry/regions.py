"""Regions of the fundamental square cut out by generalized circle constraints."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from hurwitz.arith.gaussian import GaussRat, in_fundamental_domain
from hurwitz.geometry.circles import HALF, SQUARE_EDGES, GenCircle, MobiusMap

WITNESS_LEVELS = 6

Box = tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass(frozen=True, slots=True)
class Region:
    """[-1/2,1/2)^2 intersected with every constraint."""

    constraints: tuple[GenCircle, ...] = ()
    empty: bool = False
    canonical: bool = False

    @classmethod
    def square(cls) -> Region:
        return cls(canonical=True)

    @classmethod
    def nothing(cls) -> Region:
        return cls(empty=True, canonical=True)

    @classmethod
    def build(cls, constraints: Iterable[GenCircle]) -> Region:
        """Canonical form: constraints implied by the square dropped, deduplicated, sorted."""
        kept: dict[tuple, GenCircle] = {}
        for constraint in constraints:
            constraint = constraint.normalized()
            if constraint.excludes_square():
                return cls.nothing()
            if constraint.contains_square():
                continue
            kept[constraint.key()] = constraint
        ordered = tuple(kept[key] for key in sorted(kept))
        return cls(constraints=ordered, canonical=True)

    @property
    def is_square(self) -> bool:
        return not self.empty and not self.constraints

    def intersect(self, other: Region | Iterable[GenCircle]) -> Region:
        if isinstance(other, Region):
            if self.empty or other.empty:
                return Region.nothing()
            other = other.constraints
        if self.empty:
            return self
        return Region.build((*self.constraints, *other))

    def push(self, mobius: MobiusMap) -> Region:
        """The image of the region under `mobius`, again intersected with the square."""
        if self.empty:
            return self
        return Region.build(mobius.push(c) for c in (*SQUARE_EDGES, *self.constraints))

    def image_constraints(self, mobius: MobiusMap) -> tuple[GenCircle, ...]:
        """Constraints describing mobius(region) in the whole plane."""
        return tuple(mobius.push(c) for c in (*SQUARE_EDGES, *self.constraints))

    def contains(self, z: GaussRat) -> bool:
        if self.empty or not in_fundamental_domain(z):
            return False
        return all(c.holds(z) for c in self.constraints)

    def classify_box(self, box: Box, closure: bool = False) -> bool | None:
        """True if the closed box lies inside, False if it misses the region, else None.

        The box must lie within the closed square. With `closure` the open edges of the
        square count as part of it, which is enough for measuring areas.
        """
        if self.empty:
            return False
        x0, x1, y0, y1 = box
        if any(c.box_min(box) > 0 for c in self.constraints):
            return False
        if not closure and (x1 >= HALF or y1 >= HALF):
            # touches an open edge, so never entirely inside
            return None
        if all(c.box_max(box) < 0 for c in self.constraints):
            return True
        return None

    def _candidates(self) -> Iterator[GaussRat]:
        for constraint in self.constraints:
            if constraint.a > 0:
                center = constraint.center()
                yield GaussRat(
                    min(max(center.re, -HALF), HALF), min(max(center.im, -HALF), HALF)
                )
        for level in range(1, WITNESS_LEVELS + 1):
            steps = 2**level
            for i in range(1, steps):
                for j in range(1, steps):
                    if level > 1 and i % 2 == 0 and j % 2 == 0:
                        continue
                    yield GaussRat(Fraction(i, steps) - HALF, Fraction(j, steps) - HALF)

    def find_witness(self) -> GaussRat | None:
        """A rational interior point of the region on a shrinking dyadic grid."""
        if self.empty:
            return None
        if not self.constraints:
            return GaussRat(0)
        for z in self._candidates():
            if not (-HALF < z.re < HALF and -HALF < z.im < HALF):
                continue
            if all(c.value(z) < 0 for c in self.constraints):
                return z
        return None

    def to_document(self) -> dict:
        return {
            "base": "[-1/2,1/2)^2",
            "empty": self.empty,
            "constraints": [
                {
                    "A": str(c.a),
                    "B": str(c.b),
                    "C": str(c.c),
                    "side": c.side(),
                }
                for c in self.constraints
            ],
        }
