from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence, overload

from hurwitz.arith.gaussian import GaussInt
from hurwitz.arith.tokens import format_digits, parse_digits
from hurwitz.exceptions import PreconditionViolated


def is_digit(b: GaussInt) -> bool:
    """Membership in the alphabet I = Z[i] minus {0, +-1, +-i}."""
    return b.norm() > 1


def check_digit(b: GaussInt) -> GaussInt:
    if not is_digit(b):
        raise PreconditionViolated(f"{b} is not an HCF digit")
    return b


@dataclass(frozen=True, slots=True)
class DigitSeq:
    digits: tuple[GaussInt, ...] = ()

    def __post_init__(self) -> None:
        for b in self.digits:
            check_digit(b)

    @classmethod
    def of(cls, digits: Iterable[GaussInt | int]) -> DigitSeq:
        return cls(tuple(GaussInt.coerce(b) for b in digits))

    @classmethod
    def parse(cls, token: str) -> DigitSeq:
        return cls(parse_digits(token))

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self) -> Iterator[GaussInt]:
        return iter(self.digits)

    @overload
    def __getitem__(self, index: int) -> GaussInt: ...

    @overload
    def __getitem__(self, index: slice) -> DigitSeq: ...

    def __getitem__(self, index):
        if isinstance(index, slice):
            return DigitSeq(self.digits[index])
        return self.digits[index]

    def __add__(self, other: DigitSeq | Sequence[GaussInt]) -> DigitSeq:
        other_digits = other.digits if isinstance(other, DigitSeq) else tuple(other)
        return DigitSeq(self.digits + other_digits)

    def append(self, b: GaussInt | int) -> DigitSeq:
        return DigitSeq(self.digits + (GaussInt.coerce(b),))

    @property
    def parent(self) -> DigitSeq:
        """u^- : the word with its last digit removed."""
        return DigitSeq(self.digits[:-1])

    @property
    def last(self) -> GaussInt:
        return self.digits[-1]

    def reversed(self) -> DigitSeq:
        return DigitSeq(self.digits[::-1])

    def is_prefix_of(self, other: DigitSeq) -> bool:
        return other.digits[: len(self.digits)] == self.digits

    def is_real(self) -> bool:
        return all(b.im == 0 for b in self.digits)

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_real():
            raise PreconditionViolated(f"{self} has non-real digits")
        return tuple(b.re for b in self.digits)

    def max_norm(self) -> int:
        return max((b.norm() for b in self.digits), default=0)

    def sort_key(self) -> tuple:
        return tuple(b.sort_key() for b in self.digits)

    def __str__(self) -> str:
        return format_digits(self.digits)

    def __repr__(self) -> str:
        return f"DigitSeq({self})"


EMPTY = DigitSeq(())
