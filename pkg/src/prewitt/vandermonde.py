"""p-power Vandermonde matrices and the nonvanishing-point search.

``M(c_1..c_n)`` has entry ``(j, i) = c_i^(p^j)``.  For p odd its columns are
Z-linearly independent when the c_i are positive and distinct, or when the
``|c_i|`` are distinct.  The point search picks an integer vector where a
family of distinct, non-opposite polynomials takes distinct, non-opposite,
nonzero values, so the Teichmuller elements of those values are independent.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import InvalidInput, NotSquare, RingMismatch
from .rings import RingElem, poly_eval_int


INDEPENDENT = "Independent"
DEPENDENT = "Dependent"
HYPOTHESIS_VIOLATED = "HypothesisViolated"


@dataclass(frozen=True)
class PVandermonde:
    p: int
    c: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, p: int, c: Sequence[int]) -> PVandermonde:
        c = tuple(int(x) for x in c)
        rows = tuple(tuple(x ** (p**j) for x in c) for j in range(len(c)))
        return cls(p, c, rows)

    def det(self) -> int:
        return det_exact(self.matrix)

    def to_text(self) -> str:
        cells = [[str(v) for v in row] for row in self.matrix]
        width = max((len(s) for row in cells for s in row), default=1)
        return "\n".join(" ".join(s.rjust(width) for s in row) for row in cells)


def det_exact(M: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination, with row pivoting."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise NotSquare(f"matrix is not square ({n} rows, row lengths {[len(r) for r in M]})")
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k]:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                # exact by Sylvester's identity
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class IndependenceResult:
    status: str
    det: int
    case: int | None = None
    reason: str | None = None

    def to_json(self) -> dict:
        out = {"status": self.status, "det": str(self.det)}
        if self.case is not None:
            out["case"] = self.case
        if self.reason is not None:
            out["reason"] = self.reason
        return out


def independence_check(p: int, c: Sequence[int]) -> IndependenceResult:
    """Check the two sufficient conditions and confirm them with the exact det.

    ``Dependent`` is only reported if a hypothesis holds but the determinant
    still vanishes, which would contradict the independence criterion.  For
    p = 2 case (2) is never claimed.
    """
    c = [int(x) for x in c]
    if not c:
        raise InvalidInput("need at least one entry")
    if any(x == 0 for x in c):
        raise InvalidInput("entries must be nonzero")
    if len(set(c)) != len(c):
        raise InvalidInput("entries must be distinct")
    det = PVandermonde.build(p, c).det()
    case = None
    if all(x > 0 for x in c):
        case = 1
    elif p != 2 and len({abs(x) for x in c}) == len(c):
        case = 2
    if case is None:
        if p == 2:
            reason = "entries are not all positive, and the |c_i| criterion needs p odd"
        else:
            reason = "entries are not all positive and the |c_i| are not distinct"
        return IndependenceResult(HYPOTHESIS_VIOLATED, det, None, reason)
    if det == 0:
        return IndependenceResult(DEPENDENT, det, case, "hypothesis holds but the determinant vanishes")
    return IndependenceResult(INDEPENDENT, det, case)


def _check_family(fs: Sequence[RingElem]):
    if not fs:
        raise InvalidInput("need at least one polynomial")
    ring = fs[0].ring
    if not ring.is_poly or not ring.torsion_free:
        raise InvalidInput(f"polynomials must have integer coefficients, got {ring}")
    for f in fs:
        if f.ring != ring:
            raise RingMismatch(f"{f} is not in {ring}")
        if f.is_zero():
            raise InvalidInput("polynomials must be nonzero")
    for i, j in itertools.combinations(range(len(fs)), 2):
        if fs[i] == fs[j]:
            raise InvalidInput(f"polynomials {i} and {j} coincide: {fs[i]}")
        if fs[i] == -fs[j]:
            raise InvalidInput(f"polynomials {i} and {j} are opposite: {fs[i]}, {fs[j]}")


def g_value(values: Sequence[int]) -> int:
    """``prod_{i<j} (v_i - v_j)(v_i + v_j) * prod_i v_i``."""
    out = 1
    for i, j in itertools.combinations(range(len(values)), 2):
        out *= (values[i] - values[j]) * (values[i] + values[j])
    for v in values:
        out *= v
    return out


def g_polynomial(fs: Sequence[RingElem]) -> RingElem:
    _check_family(fs)
    out = fs[0].ring.one
    for i, j in itertools.combinations(range(len(fs)), 2):
        out = out * (fs[i] - fs[j]) * (fs[i] + fs[j])
    for f in fs:
        out = out * f
    return out


def box_points(nvars: int) -> Iterator[tuple[int, ...]]:
    """Integer points by growing l-infinity radius, lexicographic within a shell."""
    if nvars == 0:
        yield ()
        return
    radius = 0
    while True:
        rng = range(-radius, radius + 1)
        for pt in itertools.product(rng, repeat=nvars):
            if max(abs(x) for x in pt) == radius:
                yield pt
        radius += 1


def find_nonvanishing_point(fs: Sequence[RingElem]) -> tuple[int, ...]:
    _check_family(fs)
    for pt in box_points(fs[0].ring.nvars):
        if g_value([poly_eval_int(f, pt) for f in fs]):
            return pt
    raise AssertionError("unreachable")  # the enumeration is infinite


__all__ = [
    "PVandermonde",
    "NotSquare",
    "IndependenceResult",
    "det_exact",
    "independence_check",
    "find_nonvanishing_point",
    "g_value",
    "g_polynomial",
    "box_points",
    "INDEPENDENT",
    "DEPENDENT",
    "HYPOTHESIS_VIOLATED",
]
