"""The sequence model X(R) and the presentation map into W(R).

An element of X(R) is a ghost-style sequence in R^n generated by the
``V^k<r> = p^k (0,...,0, r, r^p, r^(p^2), ...)``.  Over a torsion-free ring a
sequence lies in X(R) exactly when the ghost inverse recursion divides
cleanly, and then its Witt coordinates are the ``a_k`` of the decomposition
``sum_k V^k<a_k>``.

For a quotient ring R, :class:`Presentation` records a polynomial ring A over
Z together with images of its variables in R; :func:`project_to_W` pushes a
sum of generators over A down to W_n(R).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidInput, LevelOutOfRange, NotInImage, NotMember, RingMismatch, UnsupportedRing
from .rings import RingDescriptor, RingElem, evaluate
from .witt import (
    GhostVector,
    WittContext,
    WittVector,
    ghost_inverse,
    int_scale,
    teich_v_decompose,
    teichmuller,
    v_power,
    witt_add,
)


@dataclass(frozen=True)
class XElement:
    ctx: WittContext
    seq: GhostVector
    # known decomposition (a_0, ..., a_{n-1}); dropped by arithmetic
    decomposition: tuple[RingElem, ...] | None = field(default=None, compare=False)

    def __add__(self, other: XElement) -> XElement:
        return XElement(self.ctx, self.seq + other.seq)

    def __sub__(self, other: XElement) -> XElement:
        return XElement(self.ctx, self.seq - other.seq)

    def __neg__(self) -> XElement:
        return XElement(self.ctx, -self.seq)

    def __rmul__(self, c: int) -> XElement:
        if not isinstance(c, int):
            return NotImplemented
        return XElement(self.ctx, c * self.seq)

    def verschiebung(self) -> XElement:
        """``V(r_0, r_1, ...) = p (0, r_0, r_1, ...)``, truncated."""
        p = self.ctx.p
        comps = (self.ctx.ring.zero,) + tuple(c * p for c in self.seq.comps[:-1])
        return XElement(self.ctx, GhostVector(self.ctx, comps))

    def is_zero(self) -> bool:
        return self.seq.is_zero()

    def to_json(self) -> dict:
        return self.seq.to_json()


def x_generator(ctx: WittContext, k: int, r: RingElem | int) -> XElement:
    """``V^k<r>`` as a length-n sequence."""
    if not 0 <= k < ctx.n:
        raise LevelOutOfRange(f"level {k} outside 0..{ctx.n - 1}")
    ring = ctx.ring
    r = ring.from_int(r) if isinstance(r, int) else r
    if r.ring != ring:
        raise RingMismatch(f"{r} is not in {ring}")
    p = ctx.p
    comps = [ring.zero] * k
    cur = r
    for _ in range(ctx.n - k):
        comps.append(cur * p**k)
        cur = cur**p
    decomposition = tuple(r if i == k else ring.zero for i in range(ctx.n))
    return XElement(ctx, GhostVector(ctx, tuple(comps)), decomposition)


def x_membership(seq: GhostVector | XElement) -> list[RingElem]:
    """Decompose a sequence as ``sum_k V^k<a_k>``, or raise :class:`NotMember`.

    Only torsion-free base rings are supported; there X(R) is exactly the
    image of the ghost map.
    """
    if isinstance(seq, XElement):
        seq = seq.seq
    if not seq.ctx.ring.torsion_free:
        raise UnsupportedRing(f"membership in X(R) is only decided over torsion-free rings, not {seq.ctx.ring}")
    try:
        x = ghost_inverse(seq)
    except NotInImage as exc:
        raise NotMember(exc.index) from None
    return teich_v_decompose(x)


def first_nonzero_index(seq: GhostVector | XElement) -> int | None:
    comps = (seq.seq if isinstance(seq, XElement) else seq).comps
    for i, c in enumerate(comps):
        if not c.is_zero():
            return i
    return None


@dataclass(frozen=True)
class GeneratorTerm:
    """``coeff * V^level <elem>``."""

    level: int
    elem: RingElem
    coeff: int = 1

    def to_json(self) -> dict:
        return {"level": self.level, "elem": self.elem.to_text(), "coeff": self.coeff}

    @classmethod
    def from_json(cls, obj: dict, ring: RingDescriptor) -> GeneratorTerm:
        elem = obj["elem"]
        elem = ring.from_int(elem) if isinstance(elem, int) else ring.parse(elem)
        return cls(int(obj["level"]), elem, int(obj.get("coeff", 1)))


def generators_to_json(terms: Iterable[GeneratorTerm]) -> list[dict]:
    return [t.to_json() for t in terms]


def generators_from_json(items: Sequence[dict], ring: RingDescriptor) -> list[GeneratorTerm]:
    return [GeneratorTerm.from_json(d, ring) for d in items]


def sequence_of(ctx: WittContext, terms: Iterable[GeneratorTerm]) -> XElement:
    """``sum c V^k<a>`` as a sequence; terms at level >= n vanish."""
    total = XElement(ctx, GhostVector(ctx, (ctx.ring.zero,) * ctx.n))
    for t in terms:
        if t.level < ctx.n and t.coeff:
            total = total + t.coeff * x_generator(ctx, t.level, t.elem)
    return total


@dataclass(frozen=True)
class Presentation:
    """A polynomial ring ``lift`` over Z mapping onto (a fragment of) ``target``.

    ``images[i]`` is where the i-th variable of ``lift`` goes.
    """

    target: RingDescriptor
    lift: RingDescriptor
    images: tuple[RingElem, ...]

    def __post_init__(self):
        if not self.lift.is_poly or not self.lift.torsion_free:
            raise InvalidInput("the lift of a presentation must be a polynomial ring over Z")
        imgs = tuple(self.target.from_int(a) if isinstance(a, int) else a for a in self.images)
        if len(imgs) != self.lift.nvars:
            raise InvalidInput(f"need {self.lift.nvars} variable images, got {len(imgs)}")
        for a in imgs:
            if a.ring != self.target:
                raise RingMismatch(f"image {a} is not in {self.target}")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def standard(cls, target: RingDescriptor, extra: dict[str, RingElem | int] | None = None) -> Presentation:
        """Variables of ``target`` map to themselves; ``extra`` adds named variables."""
        extra = dict(extra or {})
        names = list(target.vars) + sorted(extra)
        from .rings import PolyRing

        lift = PolyRing(names)
        imgs = []
        for v in lift.vars:
            if v in extra:
                imgs.append(extra[v])
            else:
                imgs.append(target.gen(v))
        return cls(target, lift, tuple(imgs))

    def project(self, a: RingElem) -> RingElem:
        if a.ring != self.lift:
            raise RingMismatch(f"{a} is not in the lift ring {self.lift}")
        return evaluate(a, self.images, self.target)

    def section(self, r: RingElem) -> RingElem:
        """A preimage of ``r``, using the identity on same-named variables."""
        if r.ring != self.target:
            raise RingMismatch(f"{r} is not in {self.target}")
        if not self.target.is_poly:
            return self.lift.from_int(r.value)
        idx = []
        for v in self.target.vars:
            if v not in self.lift.vars:
                raise InvalidInput(f"target variable {v} has no same-named lift variable")
            j = self.lift.vars.index(v)
            if self.images[j] != self.target.gen(v):
                raise InvalidInput(f"lift variable {v} does not map to {v}")
            idx.append(j)
        terms = {}
        for e, c in r.terms():
            ex = [0] * self.lift.nvars
            for j, x in zip(idx, e):
                ex[j] = x
            terms[tuple(ex)] = c
        return self.lift.from_terms(terms)


def x_i_generator(pres: Presentation, level: int, a: RingElem, b: RingElem) -> list[GeneratorTerm]:
    """``V^level<a> - V^level<b>`` for ``a - b`` in the kernel of the projection."""
    if pres.project(a) != pres.project(b):
        raise InvalidInput(f"{a} - {b} is not in the kernel of the presentation")
    return [GeneratorTerm(level, a, 1), GeneratorTerm(level, b, -1)]


def project_to_W(pres: Presentation, p: int, n: int, terms: Iterable[GeneratorTerm], method: str = "auto") -> WittVector:
    """``sum c V^k<a>`` over the lift, mapped to ``sum c V^k<project(a)>`` in W_n(target)."""
    ctx = WittContext(p, n, pres.target)
    total = ctx.zero
    for t in terms:
        if t.level >= n or not t.coeff:
            continue
        gen = v_power(teichmuller(ctx, pres.project(t.elem)), t.level)
        term = int_scale(t.coeff, gen, method)
        total = term if total.is_zero() else witt_add(total, term, method)
    return total


def project_sequence(pres: Presentation, p: int, seq: GhostVector | XElement) -> WittVector:
    """X(lift) -> W(lift) -> W(target): ghost-invert, then map coordinates.

    Witt vectors are functorial in the ring, so the second step is the ring
    map applied to each coordinate.
    """
    if isinstance(seq, XElement):
        seq = seq.seq
    if seq.ctx.ring != pres.lift or seq.ctx.p != p:
        raise RingMismatch(f"sequence must live over {pres.lift} with p={p}")
    coords = x_membership(seq)
    ctx = WittContext(p, seq.ctx.n, pres.target)
    return ctx.vector([pres.project(a) for a in coords])


def lift_witt_vector(pres: Presentation, x: WittVector, method: str = "auto") -> list[GeneratorTerm]:
    """Generators over the lift whose projection is ``x`` (surjectivity witness)."""
    parts = teich_v_decompose(x, method)
    return [GeneratorTerm(k, pres.section(b), 1) for k, b in enumerate(parts) if not b.is_zero()]
