"""Truncated p-typical Witt vectors W_n(R) for odd p.

Coordinates follow the classical Witt model: ``x = (x_0, ..., x_{n-1})`` with
ghost components ``w_k = sum_{i<=k} p^i x_i^(p^(k-i))``.

Group operations have two exact routes:

``"universal"``
    evaluate the universal sum / Frobenius polynomials (see
    :mod:`prewitt.universal`) at the coordinates;
``"ghost"``
    lift to a torsion-free ring, or to Z/(m p^(n-1)) when the base is Z/m,
    move to ghost components, operate componentwise, and come back by exact
    division.  Both routes agree because the universal polynomials have
    integer coefficients.

``"auto"`` picks the universal route for scalar base rings while the
polynomials are small, and the ghost route otherwise (evaluating thousands
of monomials at polynomial arguments loses badly to a handful of ghost
powers).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .errors import (
    ContextMismatch,
    InternalDivisionFailure,
    NotDivisible,
    NotInImage,
    TooShort,
    UnsupportedRing,
)
from .rings import RingDescriptor, RingElem, Zmod, exact_div_int

# auto mode uses universal polynomials while p^(n-1) stays at or below this
UNIVERSAL_AUTO_WEIGHT = 9


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class WittContext:
    p: int
    n: int
    ring: RingDescriptor

    def __post_init__(self):
        if not isinstance(self.p, int) or self.p < 3 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"truncation length must be >= 1, got {self.n!r}")

    def with_length(self, n: int) -> WittContext:
        return WittContext(self.p, n, self.ring)

    @property
    def zero(self) -> WittVector:
        return WittVector(self, (self.ring.zero,) * self.n)

    def vector(self, coords: Sequence[RingElem | int | str]) -> WittVector:
        return WittVector(self, tuple(_as_elem(self.ring, c) for c in coords))

    def ghost_vector(self, comps: Sequence[RingElem | int | str]) -> GhostVector:
        return GhostVector(self, tuple(_as_elem(self.ring, c) for c in comps))


def _as_elem(ring: RingDescriptor, c) -> RingElem:
    if isinstance(c, RingElem):
        return c
    if isinstance(c, int):
        return ring.from_int(c)
    return ring.parse(str(c))


def _check_coords(ctx: WittContext, items: tuple, what: str):
    if len(items) != ctx.n:
        raise ValueError(f"{what} needs {ctx.n} entries, got {len(items)}")
    for c in items:
        if not isinstance(c, RingElem) or c.ring != ctx.ring:
            raise ContextMismatch(f"{what} entry {c!r} is not in {ctx.ring}")


@dataclass(frozen=True)
class WittVector:
    ctx: WittContext
    coords: tuple[RingElem, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        _check_coords(self.ctx, self.coords, "Witt vector")

    def __add__(self, other: WittVector) -> WittVector:
        return witt_add(self, other)

    def __sub__(self, other: WittVector) -> WittVector:
        return witt_add(self, witt_neg(other))

    def __neg__(self) -> WittVector:
        return witt_neg(self)

    def __rmul__(self, c: int) -> WittVector:
        if not isinstance(c, int):
            return NotImplemented
        return int_scale(c, self)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(c.to_text() for c in self.coords) + ")"

    def to_json(self) -> dict:
        return _vector_json(self.ctx, self.coords)

    @classmethod
    def from_json(cls, obj: dict) -> WittVector:
        ctx, items = _vector_from_json(obj)
        return ctx.vector(items)


@dataclass(frozen=True)
class GhostVector:
    """A truncated sequence ``(w_0, ..., w_{n-1})`` in R^n, added componentwise."""

    ctx: WittContext
    comps: tuple[RingElem, ...]

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(self.comps))
        _check_coords(self.ctx, self.comps, "ghost vector")

    def _same(self, other: GhostVector):
        if not isinstance(other, GhostVector) or other.ctx != self.ctx:
            raise ContextMismatch("ghost vectors live in different contexts")

    def __add__(self, other: GhostVector) -> GhostVector:
        self._same(other)
        return GhostVector(self.ctx, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other: GhostVector) -> GhostVector:
        self._same(other)
        return GhostVector(self.ctx, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self) -> GhostVector:
        return GhostVector(self.ctx, tuple(-a for a in self.comps))

    def __rmul__(self, c: int) -> GhostVector:
        if not isinstance(c, int):
            return NotImplemented
        return GhostVector(self.ctx, tuple(a * c for a in self.comps))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __str__(self) -> str:
        return "(" + ", ".join(c.to_text() for c in self.comps) + ")"

    def to_json(self) -> dict:
        d = _vector_json(self.ctx, self.comps)
        d["model"] = "ghost"
        return d

    @classmethod
    def from_json(cls, obj: dict) -> GhostVector:
        ctx, items = _vector_from_json(obj)
        return ctx.ghost_vector(items)


def _vector_json(ctx: WittContext, items) -> dict:
    scalar = not ctx.ring.is_poly
    return {
        "p": ctx.p,
        "len": ctx.n,
        "ring": ctx.ring.to_json(),
        "coords": [c.value if scalar else c.to_text() for c in items],
    }


def _vector_from_json(obj: dict):
    ring = RingDescriptor.from_json(obj["ring"])
    ctx = WittContext(int(obj["p"]), int(obj["len"]), ring)
    return ctx, list(obj["coords"])


def _same_ctx(x: WittVector, y: WittVector):
    if x.ctx != y.ctx:
        raise ContextMismatch(f"Witt vectors in different contexts: {x.ctx} vs {y.ctx}")


# ---------------------------------------------------------------------------
# ghost components


def _p_power_tower(x: RingElem, p: int, depth: int) -> list[RingElem]:
    """``[x, x^p, x^(p^2), ..., x^(p^(depth-1))]``."""
    out = [x]
    for _ in range(depth - 1):
        out.append(out[-1] ** p)
    return out


def ghost_components(coords: Sequence[RingElem], p: int) -> list[RingElem]:
    n = len(coords)
    towers = [_p_power_tower(x, p, n - i) for i, x in enumerate(coords)]
    comps = []
    for k in range(n):
        w = towers[0][k]
        for i in range(1, k + 1):
            w = w + towers[i][k - i] * (p**i)
        comps.append(w)
    return comps


def _coords_from_ghost(comps: Sequence[RingElem], p: int, divide: Callable[[RingElem, int], RingElem]):
    """Inverse recursion; ``divide`` raises NotDivisible on failure."""
    coords: list[RingElem] = []
    towers: list[list[RingElem]] = []
    n = len(comps)
    for k in range(n):
        num = comps[k]
        for i in range(k):
            tower = towers[i]
            while len(tower) <= k - i:
                tower.append(tower[-1] ** p)
            num = num - tower[k - i] * (p**i)
        try:
            x = divide(num, p**k) if k else num
        except NotDivisible:
            raise NotInImage(k) from None
        coords.append(x)
        towers.append([x])
    return coords


def ghost_map(x: WittVector) -> GhostVector:
    """Ghost components of ``x``; defined over every base ring."""
    return GhostVector(x.ctx, tuple(ghost_components(x.coords, x.ctx.p)))


def ghost_inverse(g: GhostVector) -> WittVector:
    """The Witt vector with ghost components ``g`` (torsion-free rings only).

    Raises :class:`NotInImage` carrying the first index whose division fails.
    """
    if not g.ctx.ring.torsion_free:
        raise UnsupportedRing(f"ghost components do not determine Witt vectors over {g.ctx.ring}")
    return WittVector(g.ctx, tuple(_coords_from_ghost(g.comps, g.ctx.p, exact_div_int)))


# ---------------------------------------------------------------------------
# the lifted ghost route


def _work_ring(ring: RingDescriptor, p: int, n: int) -> RingDescriptor:
    m = ring.char_modulus
    if m is None:
        return ring
    return ring.with_base(Zmod(m * p ** max(n - 1, 0)))


def _lifted_divide(num: RingElem, d: int) -> RingElem:
    if num.ring.torsion_free:
        return exact_div_int(num, d)
    return num._divide_representative(d)


def _via_ghost(ctx_out: WittContext, p: int, inputs: Sequence[Sequence[RingElem]], combine, n_in: int):
    """Lift ``inputs`` (coordinate lists), combine their ghost vectors, invert.

    ``combine`` maps a list of ghost-component lists to the length-``ctx_out.n``
    ghost components of the result.
    """
    ring = ctx_out.ring
    work = _work_ring(ring, p, n_in)
    lifted = [[work.convert(c) for c in coords] for coords in inputs]
    ghosts = [ghost_components(c, p) for c in lifted]
    out = combine(ghosts)
    try:
        coords = _coords_from_ghost(out, p, _lifted_divide)
    except NotInImage as exc:  # the algebra guarantees integrality here
        raise InternalDivisionFailure(f"ghost route failed at index {exc.index}") from None
    return WittVector(ctx_out, tuple(ring.convert(c) for c in coords))


def _pick(method: str, ctx: WittContext) -> str:
    if method == "auto":
        small = ctx.p ** (ctx.n - 1) <= UNIVERSAL_AUTO_WEIGHT
        return "universal" if small and not ctx.ring.is_poly else "ghost"
    if method not in ("universal", "ghost"):
        raise ValueError(f"unknown method {method!r}")
    return method


# ---------------------------------------------------------------------------
# group structure and operators


def teichmuller(ctx: WittContext, r: RingElem | int) -> WittVector:
    r = _as_elem(ctx.ring, r)
    return WittVector(ctx, (r,) + (ctx.ring.zero,) * (ctx.n - 1))


def witt_add(x: WittVector, y: WittVector, method: str = "auto") -> WittVector:
    _same_ctx(x, y)
    ctx = x.ctx
    if _pick(method, ctx) == "universal":
        from .universal import generate_universal_polys

        polys = generate_universal_polys(ctx.p, ctx.n)
        return WittVector(ctx, tuple(polys.evaluate_sums(x.coords, y.coords)))
    return _via_ghost(
        ctx, ctx.p, [x.coords, y.coords], lambda g: [a + b for a, b in zip(*g)], ctx.n
    )


def witt_neg(x: WittVector) -> WittVector:
    """Coordinatewise negation, valid because p is odd (w_k is an odd function)."""
    return WittVector(x.ctx, tuple(-c for c in x.coords))


def witt_sub(x: WittVector, y: WittVector, method: str = "auto") -> WittVector:
    return witt_add(x, witt_neg(y), method)


def int_scale(c: int, x: WittVector, method: str = "auto") -> WittVector:
    """``c * x`` by double-and-add on :func:`witt_add`."""
    if c < 0:
        return int_scale(-c, witt_neg(x), method)
    result = x.ctx.zero
    base = x
    while c:
        if c & 1:
            result = base if result.is_zero() else witt_add(result, base, method)
        c >>= 1
        if c:
            base = witt_add(base, base, method)
    return result


def verschiebung(x: WittVector) -> WittVector:
    """Right shift on Witt coordinates (p times the shift on ghost components)."""
    return WittVector(x.ctx, (x.ctx.ring.zero,) + x.coords[:-1])


def frobenius(x: WittVector, method: str = "auto") -> WittVector:
    """Frobenius W_n -> W_{n-1}, with F<r> = <r^p> and FV = p."""
    ctx = x.ctx
    if ctx.n < 2:
        raise TooShort("Frobenius needs truncation length at least 2")
    out_ctx = ctx.with_length(ctx.n - 1)
    if _pick(method, ctx) == "universal":
        from .universal import generate_universal_polys

        polys = generate_universal_polys(ctx.p, ctx.n)
        return WittVector(out_ctx, tuple(polys.evaluate_frobs(x.coords)))
    return _via_ghost(out_ctx, ctx.p, [x.coords], lambda g: g[0][1:], ctx.n)


def truncate(x: WittVector, n: int) -> WittVector:
    if not 1 <= n <= x.ctx.n:
        raise ValueError(f"cannot truncate length {x.ctx.n} to {n}")
    return WittVector(x.ctx.with_length(n), x.coords[:n])


def phi(ctx: WittContext, x: RingElem | int, method: str = "auto") -> WittVector:
    """The additive map x -> V<x^p> - p<x>."""
    x = _as_elem(ctx.ring, x)
    first = verschiebung(teichmuller(ctx, x**ctx.p))
    second = int_scale(ctx.p, teichmuller(ctx, x), method)
    return witt_add(first, witt_neg(second), method)


def v_power(x: WittVector, k: int) -> WittVector:
    for _ in range(k):
        x = verschiebung(x)
    return x


def teich_v_decompose(x: WittVector, method: str = "auto") -> list[RingElem]:
    """``(b_0, ..., b_{n-1})`` with ``x = sum_k V^k <b_k>``, found greedily.

    Peel off ``<x_0>``, the remainder starts with 0 so it is V of something
    one shorter; repeat.  Uses only the group law, so any base ring works.
    """
    out = []
    cur = x
    while True:
        b = cur.coords[0]
        out.append(b)
        if cur.ctx.n == 1:
            return out
        rest = witt_add(cur, teichmuller(cur.ctx, -b), method)
        if not rest.coords[0].is_zero():
            raise InternalDivisionFailure("remainder after removing <x_0> does not start with 0")
        cur = WittVector(cur.ctx.with_length(cur.ctx.n - 1), rest.coords[1:])


def recompose(ctx: WittContext, parts: Sequence[RingElem | int], method: str = "auto") -> WittVector:
    """``sum_k V^k <parts[k]>`` in W_n."""
    total = ctx.zero
    for k, b in enumerate(parts):
        if k >= ctx.n:
            break
        term = v_power(teichmuller(ctx, b), k)
        total = term if total.is_zero() else witt_add(total, term, method)
    return total
