import enum
from typing import Any


class HurwitzError(Exception):
    pass


class ParseError(HurwitzError):
    def __init__(self, token: str, reason: str = "") -> None:
        reason_part = f": {reason}" if reason else ""
        super().__init__(f"Failed to parse {token!r}{reason_part}")
        self.token = token
        self.reason = reason


class OutsideFundamentalDomain(HurwitzError):
    def __init__(self, value: Any) -> None:
        super().__init__(f"{value} is outside the fundamental square [-1/2,1/2)^2")
        self.value = value


class DivisionByZero(HurwitzError, ZeroDivisionError):
    pass


class BallContainsZero(DivisionByZero):
    def __init__(self, ball: Any) -> None:
        super().__init__(f"Cannot invert {ball}, it may contain 0")
        self.ball = ball


class DegenerateFraction(HurwitzError):
    def __init__(self, digits: Any, index: int) -> None:
        super().__init__(f"Vanishing denominator at level {index} of {digits}")
        self.digits = digits
        self.index = index


class AmbiguousRounding(HurwitzError):
    def __init__(self, value: Any, partial: Any | None = None) -> None:
        super().__init__(f"Nearest Gaussian integer of {value} is not certified")
        self.value = value
        self.partial = partial


class PrecisionExhausted(HurwitzError):
    def __init__(self, bits: int, what: str = "") -> None:
        what_part = f" deciding {what}" if what else ""
        super().__init__(f"Precision cap of {bits} bits exhausted{what_part}")
        self.bits = bits
        self.what = what


class NotAdmissible(HurwitzError):
    def __init__(self, digits: Any) -> None:
        super().__init__(f"{digits} is not certified admissible")
        self.digits = digits


class MembershipUndecided(HurwitzError):
    def __init__(self, point: Any, digits: Any) -> None:
        super().__init__(f"Cannot certify that {point} lies outside C({digits})")
        self.point = point
        self.digits = digits


class BudgetExceeded(HurwitzError):
    def __init__(self, budget: int, partial: Any | None = None) -> None:
        super().__init__(f"Budget of {budget} steps exceeded")
        self.budget = budget
        self.partial = partial


class RateTooLarge(HurwitzError):
    def __init__(self, rho: Any) -> None:
        super().__init__(f"Annulus needs rho > 6, got rho = {rho}")
        self.rho = rho


class RateNotSmallO(HurwitzError):
    def __init__(self, rate: Any) -> None:
        super().__init__(f"{rate} is not o(x^-2)")
        self.rate = rate


class TauOutOfRange(HurwitzError):
    def __init__(self, tau: Any, reason: str = "") -> None:
        reason_part = f" ({reason})" if reason else ""
        super().__init__(f"tau = {tau} is out of range{reason_part}")
        self.tau = tau
        self.reason = reason


class Infeasible(HurwitzError):
    def __init__(self, condition: str, bits: int | None = None) -> None:
        bits_part = f", needs about {bits} bits" if bits is not None else ""
        super().__init__(f"Schedule condition {condition} is infeasible{bits_part}")
        self.condition = condition
        self.bits = bits


class AnnulusUnavailable(HurwitzError):
    def __init__(self, node: Any, rho: Any) -> None:
        super().__init__(f"No certified annulus below {node}: rho = {rho} <= 6")
        self.node = node
        self.rho = rho


class WindowUnreachable(HurwitzError):
    def __init__(self, target: Any, ratio: Any | None = None) -> None:
        super().__init__(f"No {{3,4}}-padding reaches the window at {target}")
        self.target = target
        self.ratio = ratio


class SearchExhausted(HurwitzError):
    def __init__(self, value: Any, budget: int) -> None:
        super().__init__(f"Decomposition search for {value} exhausted {budget} steps")
        self.value = value
        self.budget = budget


class PreconditionViolated(HurwitzError, ValueError):
    pass


class DepthExhausted(HurwitzError):
    def __init__(self, radius: Any, resolution: Any) -> None:
        super().__init__(f"Radius {radius} is below the built resolution {resolution}")
        self.radius = radius
        self.resolution = resolution


class DegenerateScales(HurwitzError):
    pass


class UnknownSuite(HurwitzError):
    def __init__(self, name: str) -> None:
        super().__init__(f"Unknown suite {name!r}")
        self.name = name


class MissingInput(HurwitzError):
    def __init__(self, path: Any) -> None:
        super().__init__(f"Missing input {path}")
        self.path = path


class ValidationError(HurwitzError):
    def __init__(self, raw_data: Any | None = None, errors: Any | None = None) -> None:
        errors_part = ", got schema validation errors" if errors else ""
        super().__init__(f"Invalid document{errors_part}")
        self.raw_data = raw_data
        self.errors = errors


class ErrorKind(str, enum.Enum):
    OK = "OK"
    INTERNAL = "INTERNAL"
    BAD_INPUT = "BAD_INPUT"
    UNKNOWN = "UNKNOWN"


EXIT_CODES = {
    ErrorKind.OK: 0,
    ErrorKind.INTERNAL: 1,
    ErrorKind.BAD_INPUT: 2,
    ErrorKind.UNKNOWN: 3,
}


def classify_error(exc: BaseException | None) -> ErrorKind:
    if exc is None:
        return ErrorKind.OK
    if isinstance(exc, UnknownSuite):
        return ErrorKind.UNKNOWN
    if isinstance(exc, SearchExhausted):
        # never expected for a correct search
        return ErrorKind.INTERNAL
    if isinstance(exc, (HurwitzError, ValueError)):
        return ErrorKind.BAD_INPUT
    return ErrorKind.INTERNAL


def exit_code_for(exc: BaseException | None) -> int:
    return EXIT_CODES[classify_error(exc)]
