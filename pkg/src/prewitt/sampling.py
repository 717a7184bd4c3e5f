"""Seeded random inputs for the property suites and tests."""

from __future__ import annotations

import random

from .rings import PolyRing, RingDescriptor, RingElem, Zmod, ZZ
from .witt import WittContext, WittVector


def rng_for(seed: int, label: str) -> random.Random:
    """Independent deterministic stream per (seed, label)."""
    return random.Random(f"{seed}:{label}")


def random_elem(rng: random.Random, ring: RingDescriptor, bound: int = 20, max_terms: int = 3, max_deg: int = 2) -> RingElem:
    if not ring.is_poly:
        if ring.modulus:
            return ring.from_int(rng.randrange(ring.modulus))
        return ring.from_int(rng.randint(-bound, bound))
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        exps = [0] * ring.nvars
        for _ in range(rng.randint(0, max_deg)):
            if ring.nvars:
                exps[rng.randrange(ring.nvars)] += 1
        c = rng.randint(-bound, bound)
        terms[tuple(exps)] = terms.get(tuple(exps), 0) + c
    return ring.from_terms(terms)


def random_nonzero_elem(rng: random.Random, ring: RingDescriptor, **kw) -> RingElem:
    while True:
        r = random_elem(rng, ring, **kw)
        if not r.is_zero():
            return r


def random_witt(rng: random.Random, ctx: WittContext, **kw) -> WittVector:
    return ctx.vector([random_elem(rng, ctx.ring, **kw) for _ in range(ctx.n)])


# rings named by the acceptance sampling
PROPERTY_RINGS: dict[str, RingDescriptor] = {
    "Z": ZZ,
    "Z/9": Zmod(9),
    "Z/6": Zmod(6),
    "(Z/9)[t]": PolyRing(["t"], Zmod(9)),
}


def random_distinct_family(rng: random.Random, ring: RingDescriptor, count: int, **kw) -> list[RingElem]:
    """Nonzero polynomials, pairwise distinct and non-opposite."""
    out: list[RingElem] = []
    while len(out) < count:
        f = random_nonzero_elem(rng, ring, **kw)
        if all(f != g and f != -g for g in out):
            out.append(f)
    return out


def random_case1(rng: random.Random, n: int, bound: int = 50) -> list[int]:
    return rng.sample(range(1, bound + 1), n)


def random_case2(rng: random.Random, n: int, bound: int = 50) -> list[int]:
    """Distinct absolute values with at least one negative sign."""
    mags = rng.sample(range(1, bound + 1), n)
    signs = [rng.choice((1, -1)) for _ in mags]
    signs[rng.randrange(n)] = -1
    return [s * m for s, m in zip(signs, mags)]


def random_generator(rng: random.Random, ring: RingDescriptor, max_level: int = 3, **kw):
    from .cfunctor import Additivity, Sign

    if rng.random() < 0.6:
        level = rng.randint(1, max_level)
        return Additivity(level, random_elem(rng, ring, **kw), random_elem(rng, ring, **kw))
    return Sign(rng.randint(0, max_level), random_elem(rng, ring, **kw))


def random_member(rng: random.Random, ring: RingDescriptor, p: int, max_level: int = 3, max_gens: int = 6, **kw):
    """An element of the p-saturated relation group, plus the generators used.

    Integer combination of expanded generators; when every coefficient is
    divisible by p it is divided by p (once, on a coin flip).
    """
    from .cfunctor import FormalSum

    alpha = FormalSum(ring)
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        g = random_generator(rng, ring, max_level, **kw)
        c = rng.choice([x for x in range(-6, 7) if x])
        if rng.random() < 0.3:
            c *= p
        gens.append((c, g))
        alpha = alpha + c * g.expand(p)
    if not alpha.is_zero() and all(c % p == 0 for _, _, c in alpha.items()) and rng.random() < 0.5:
        alpha = alpha.divide(p)
    return alpha, gens


def perturb(rng: random.Random, alpha, ring: RingDescriptor, max_level: int = 3, **kw):
    """Change one coefficient by a nonzero amount (or add a fresh symbol)."""
    from .cfunctor import V

    items = alpha.items()
    delta = rng.choice([-2, -1, 1, 2])
    if items and rng.random() < 0.7:
        lvl, a, _ = rng.choice(items)
        return alpha + V(lvl, a, delta)
    return alpha + V(rng.randint(0, max_level), random_nonzero_elem(rng, ring, **kw), delta)

