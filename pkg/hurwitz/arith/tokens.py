import re

from hurwitz.arith.gaussian import GaussInt, GaussRat, format_gauss
from hurwitz.exceptions import DivisionByZero, ParseError

_GAUSS_RE = re.compile(
    r"""^\s*
    (?:
        (?P<re>[+-]?\d+)(?:(?P<sign>[+-])(?P<im>\d*)i)?   # a, a+bi, a-bi, a+i
      | (?P<pure>[+-]?\d*)i                               # bi, -i, i
    )\s*$""",
    re.VERBOSE,
)


def parse_gauss_int(token: str) -> GaussInt:
    """Parse "a", "a+bi", "a-bi", "bi" or "i" (e.g. "-2+3i")."""
    token = token.strip().strip("()").replace(" ", "")
    m = _GAUSS_RE.match(token)
    if not m:
        raise ParseError(token, "expected a Gaussian integer like -2+3i")
    if m.group("pure") is not None:
        pure = m.group("pure")
        im = {"": 1, "+": 1, "-": -1}.get(pure)
        return GaussInt(0, im if im is not None else int(pure))
    re_part = int(m.group("re"))
    if m.group("sign") is None:
        return GaussInt(re_part, 0)
    im = int(m.group("im")) if m.group("im") else 1
    return GaussInt(re_part, im if m.group("sign") == "+" else -im)


def parse_gauss_rat(token: str) -> GaussRat:
    """Parse "num/den" of Gaussian integer tokens, or a bare Gaussian integer."""
    parts = token.split("/")
    if len(parts) > 2:
        raise ParseError(token, "more than one '/'")
    num = parse_gauss_int(parts[0])
    if len(parts) == 1:
        return GaussRat.from_parts(num)
    den = parse_gauss_int(parts[1])
    if not den:
        raise DivisionByZero(f"{token} has a zero denominator")
    return GaussRat.ratio(num, den)


def parse_digits(token: str) -> tuple[GaussInt, ...]:
    """Comma separated digit word, e.g. "2,3,-2" or "-2+3i,4"; "" is the empty word."""
    token = token.strip()
    if not token:
        return ()
    return tuple(parse_gauss_int(t) for t in token.split(","))


def format_digits(digits) -> str:
    return ",".join(format_gauss(d.re, d.im) for d in digits)
