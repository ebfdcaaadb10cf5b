"""Exact checks of the continuant identities on expansion prefixes.

Every inequality on ``|q|`` is decided on squared norms, which are integers, so the
checks never round.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Union

from hurwitz.arith.gaussian import GaussInt, GaussRat
from hurwitz.hcf.digits import DigitSeq
from hurwitz.hcf.expansion import Expansion
from hurwitz.hcf.qpairs import QPairTrace, qpair_of

Number = Union[int, Fraction]


def lt_sqrt(x: Number, y: Number) -> bool:
    """x < sqrt(y), for y >= 0."""
    if x < 0:
        return True
    return x * x < y


def gt_sqrt(x: Number, y: Number) -> bool:
    """x > sqrt(y), for y >= 0."""
    return x >= 0 and x * x > y


def ge_phi_multiple(x: Number, a: int, b: int, y: Number) -> bool:
    """x >= (a*phi + b) * y for phi the golden ratio and y >= 0.

    With phi = (1 + sqrt 5)/2 this is L = 2x - (a + 2b)y >= a*y*sqrt 5.
    """
    lhs = 2 * x - (a + 2 * b) * y
    return lhs >= 0 and lhs * lhs >= 5 * a * a * y * y


def phi_power(m: int) -> tuple[int, int]:
    """(a, b) with phi**m = a*phi + b, from phi**2 = phi + 1."""
    a, b = 0, 1
    for _ in range(m):
        a, b = a + b, a
    return a, b


def determinant_holds(trace: QPairTrace) -> bool:
    return all(
        trace.determinant(n) == GaussInt((-1) ** n, 0) for n in range(1, len(trace.q))
    )


def strict_growth_holds(trace: QPairTrace) -> bool:
    norms = [q.norm() for q in trace.q]
    return all(x < y for x, y in zip(norms, norms[1:]))


def phi_growth_holds(trace: QPairTrace) -> bool:
    """N(q_{n+k}) >= phi^{2 floor(n/2)} N(q_k) for all admissible n, k."""
    norms = [q.norm() for q in trace.q]
    for k in range(len(norms)):
        for n in range(len(norms) - k):
            a, b = phi_power(2 * (n // 2))
            if not ge_phi_multiple(norms[n + k], a, b, norms[k]):
                return False
    return True


def bracket_holds(trace: QPairTrace) -> bool:
    """(|a_n|-1)|q(u^-)| < |q(u)| < (|a_n|+1)|q(u^-)| on every prefix."""
    for n, a in enumerate(trace.seq, start=1):
        na, nq, nprev = a.norm(), trace.q[n].norm(), trace.q[n - 1].norm()
        # (|a|-1)^2 N' < N  <=>  (N(a)+1)N' - N < 2|a|N'
        lower = (na + 1) * nprev - nq
        # N < (|a|+1)^2 N'  <=>  N - (N(a)+1)N' < 2|a|N'
        upper = nq - (na + 1) * nprev
        bound = 4 * na * nprev * nprev
        if not (lt_sqrt(lower, bound) and lt_sqrt(upper, bound)):
            return False
    return True


def concat_bounds_hold(u: DigitSeq, v: DigitSeq) -> bool:
    """|q(u)q(v)|/5 < |q(uv)| < 3|q(u)q(v)| on squared norms."""
    nu = qpair_of(u).q_last.norm()
    nv = qpair_of(v).q_last.norm()
    nuv = qpair_of(u + v).q_last.norm()
    return nu * nv < 25 * nuv and nuv < 9 * nu * nv


def convergence_bound_holds(z: GaussRat, trace: QPairTrace) -> bool:
    """|z - p_n/q_n| <= |q_n|^-2 for every n >= 1."""
    for n in range(1, len(trace.q)):
        q = trace.q[n]
        if (z - GaussRat.ratio(trace.p[n], q)).norm() * q.norm() ** 2 > 1:
            return False
    return True


def convergence_identity(expansion: Expansion, n: int) -> bool:
    """|z - p_n/q_n| = |q_n^2 (a_{n+1} + T^{n+1}z + q_{n-1}/q_n)|^-1.

    Defined for 0 <= n < len(expansion); a terminated expansion has z = p_m/q_m at the end.
    """
    z = GaussRat.from_parts(expansion.source)
    trace = expansion.trace
    q, q_prev = trace.q[n], trace.q[n - 1] if n > 0 else GaussInt(0, 0)
    w = (
        GaussRat.from_parts(expansion.digits[n])
        + GaussRat.from_parts(expansion.tails[n + 1])
        + GaussRat.ratio(q_prev, q)
    )
    error = z - GaussRat.ratio(trace.p[n], q)
    return error.norm() * (w * q * q).norm() == 1


def check_prefix(z: GaussRat, expansion: Expansion) -> dict[str, bool]:
    """Run every identity on one rational expansion; keys name the identities."""
    trace = expansion.trace
    results = {
        "determinant": determinant_holds(trace),
        "growth": strict_growth_holds(trace),
        "phi_growth": phi_growth_holds(trace),
        "bracket": bracket_holds(trace),
        "convergence": convergence_bound_holds(z, trace),
        "convergence_identity": all(
            convergence_identity(expansion, n) for n in range(len(expansion))
        ),
    }
    seq = expansion.digits
    results["concat"] = all(
        concat_bounds_hold(seq[:j], seq[j:]) for j in range(1, len(seq))
    )
    return results
