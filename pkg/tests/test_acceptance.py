"""Acceptance checks, one test per criterion (all exact, no tolerances).

Test names are ``test_cNN_<what>`` so the summary hook in ``conftest.py`` can
print one PASS/FAIL line per criterion.  Every check is seeded.
"""

import random

from prewitt.cdrep import (
    GeneratorTerm,
    Presentation,
    lift_witt_vector,
    project_sequence,
    project_to_W,
    sequence_of,
    x_i_generator,
)
from prewitt.cfunctor import (
    InSaturation,
    NotIn,
    eta_evaluate,
    eta_is_zero,
    normalize_signs,
    reduce,
    verify_certificate,
)
from prewitt.rings import PolyRing, ZZ, Zmod, poly_eval_int
from prewitt.sampling import (
    perturb,
    random_case1,
    random_case2,
    random_distinct_family,
    random_elem,
    random_member,
    random_witt,
)
from prewitt.vandermonde import INDEPENDENT, PVandermonde, find_nonvanishing_point, independence_check
from prewitt.witt import (
    WittContext,
    frobenius,
    ghost_map,
    int_scale,
    phi,
    recompose,
    teich_v_decompose,
    teichmuller,
    truncate,
    verschiebung,
    witt_add,
    witt_neg,
)

TRIALS = 200
SAMPLE_RINGS = {
    "Z": ZZ,
    "Z/9": Zmod(9),
    "Z/6": Zmod(6),
    "(Z/9)[t]": PolyRing(["t"], Zmod(9)),
}
ALL_RINGS = dict(SAMPLE_RINGS, **{"Z[t]": PolyRing("t"), "Z[x,y]": PolyRing("x,y")})


def _rng(label):
    return random.Random(f"acceptance:{label}")


def _failures(results):
    bad = [r for r in results if r]
    assert not bad, f"{len(bad)} failures, first: {bad[0]}"


def test_c01_phi_additivity():
    out = []
    for name, ring in SAMPLE_RINGS.items():
        for p in (3, 5):
            for n in (2, 3, 4):
                rng = _rng(f"1:{name}:{p}:{n}")
                ctx = WittContext(p, n, ring)
                for _ in range(TRIALS):
                    x, y = random_elem(rng, ring), random_elem(rng, ring)
                    if phi(ctx, x + y) != witt_add(phi(ctx, x), phi(ctx, y)):
                        out.append((name, p, n, x, y))
    _failures(out)


def test_c02_teichmuller_of_negative():
    out = []
    for name, ring in SAMPLE_RINGS.items():
        for p in (3, 5):
            for n in (2, 3, 4):
                rng = _rng(f"2:{name}:{p}:{n}")
                ctx = WittContext(p, n, ring)
                for _ in range(TRIALS):
                    x = random_elem(rng, ring)
                    if teichmuller(ctx, -x) != witt_neg(teichmuller(ctx, x)):
                        out.append((name, p, n, x))
    _failures(out)


def test_c03_frobenius_relations():
    out = []
    for name, ring in ALL_RINGS.items():
        rng = _rng(f"3:{name}")
        kw = {"bound": 4, "max_terms": 2, "max_deg": 1} if ring.is_poly and ring.torsion_free else {}
        for _ in range(TRIALS):
            p = rng.choice((3, 5))
            n = rng.randint(2, 5)
            ctx = WittContext(p, n, ring)
            r = random_elem(rng, ring, **kw)
            x = random_witt(rng, ctx, **kw)
            if frobenius(teichmuller(ctx, r)) != teichmuller(ctx.with_length(n - 1), r**p):
                out.append(("F<r>", name, p, n, r))
            if frobenius(verschiebung(x)) != int_scale(p, truncate(x, n - 1)):
                out.append(("FV", name, p, n, x))
    _failures(out)


def test_c04_decomposition_recomposes():
    out = []
    for name, ring in ALL_RINGS.items():
        rng = _rng(f"4:{name}")
        for _ in range(TRIALS):
            ctx = WittContext(rng.choice((3, 5)), rng.randint(1, 4), ring)
            x = random_witt(rng, ctx, bound=6)
            parts = teich_v_decompose(x)
            if len(parts) != ctx.n or recompose(ctx, parts) != x:
                out.append((name, x))
    _failures(out)


def _int_ghost(xs, p):
    return [sum(p**i * xs[i] ** (p ** (k - i)) for i in range(k + 1)) for k in range(len(xs))]


def test_c05_ghost_homomorphism_and_torsion_freeness():
    out = []
    rng = _rng("5")
    for _ in range(TRIALS):
        p, n = rng.choice((3, 5)), rng.randint(1, 4)
        ctx = WittContext(p, n, ZZ)
        xs = [rng.randint(-40, 40) for _ in range(n)]
        ys = [rng.randint(-40, 40) for _ in range(n)]
        s = witt_add(ctx.vector(xs), ctx.vector(ys))
        # oracle: integer ghost sums by the direct formula
        if [c.value for c in ghost_map(s).comps] != [a + b for a, b in zip(_int_ghost(xs, p), _int_ghost(ys, p))]:
            out.append(("ghost", p, xs, ys))
    for _ in range(TRIALS):
        p, n = rng.choice((3, 5)), rng.randint(1, 4)
        ctx = WittContext(p, n, ZZ)
        x = ctx.zero
        while x.is_zero():
            x = random_witt(rng, ctx)
        if int_scale(p, x).is_zero():
            out.append(("torsion", p, x))
    _failures(out)


def test_c06_vandermonde_determinants():
    assert PVandermonde.build(3, [1, 2]).det() == 6
    out = []
    rng = _rng("6")
    for gen in (random_case1, random_case2):
        for _ in range(100):
            p = rng.choice((3, 5, 7))
            c = gen(rng, rng.randint(1, 6), 50)
            assert max(abs(v) for v in c) <= 50
            if PVandermonde.build(p, c).det() == 0:
                out.append((gen.__name__, p, c))
    _failures(out)


def test_c07_nonvanishing_point_pipeline():
    out = []
    rng = _rng("7")
    for _ in range(50):
        nvars = rng.randint(1, 3)
        ring = PolyRing([f"x{i}" for i in range(nvars)])
        fs = random_distinct_family(rng, ring, rng.randint(1, 5), bound=6, max_terms=3, max_deg=2)
        pt = find_nonvanishing_point(fs)
        vals = [poly_eval_int(f, pt) for f in fs]
        if independence_check(rng.choice((3, 5, 7)), vals).status != INDEPENDENT:
            out.append((fs, pt, vals))
    _failures(out)


C_RING = PolyRing("x,y")
C_KW = {"bound": 5, "max_terms": 2, "max_deg": 2}


def _eta_vanishes(alpha, p, length):
    """Exact decision, plus literal evaluation at an integer point when affordable."""
    if not eta_is_zero(alpha, p, length):
        return False
    if p ** (length - 1) <= 3**8:
        return not any(eta_evaluate(alpha, p, length, point=(2, -3)))
    return True


def test_c08_reduce_sound_complete_and_separating():
    out = []
    rng = _rng("8")
    certs = 0
    for _ in range(TRIALS):
        p = rng.choice((3, 5))
        alpha, gens = random_member(rng, C_RING, p, max_level=3, max_gens=6, **C_KW)
        res = reduce(alpha, p, check=False)
        if not isinstance(res, InSaturation):
            out.append(("complete", p, alpha))
            continue
        certs += 1
        top = alpha.max_level() if not alpha.is_zero() else 0
        if not verify_certificate(alpha, res.certificate) or not _eta_vanishes(alpha, p, top + 6):
            out.append(("sound", p, alpha))
    for _ in range(TRIALS):
        p = rng.choice((3, 5))
        alpha, _ = random_member(rng, C_RING, p, max_level=3, max_gens=6, **C_KW)
        beta = perturb(rng, alpha, C_RING, max_level=3, **C_KW)
        res = reduce(beta, p, check=False)
        if not isinstance(res, NotIn):
            out.append(("nonmember certified", p, beta))
            continue
        bases = {a for _, a, _ in normalize_signs(beta).items()}
        length = beta.max_level() + len(bases)
        if not res.witness.check(beta, p) or eta_is_zero(beta, p, max(length, res.witness.index + 1)):
            out.append(("separating", p, beta))
    assert certs == TRIALS
    _failures(out)


def _kernel_pair(rng, pres, m):
    """(a, b) over the lift with a - b in the kernel of the projection."""
    lift = pres.lift
    u, w = lift.gen("u"), lift.gen("w")
    kernel = [lift.from_int(m), u - 2, w - (m + 1)]
    a = random_elem(rng, lift, bound=6)
    b = a
    for k in kernel:
        b = b + k * random_elem(rng, lift, bound=3, max_terms=2, max_deg=1)
    return a, b


def test_c09_sequence_and_witt_models_agree():
    out = []
    for m in (9, 6, 5):
        target = Zmod(m)
        pres = Presentation.standard(target, {"u": 2, "w": m + 1})
        rng = _rng(f"9:{m}")
        lift_ctx = WittContext(3, 3, pres.lift)
        for _ in range(TRIALS // 2):
            terms = []
            for _ in range(rng.randint(1, 3)):
                a, b = _kernel_pair(rng, pres, m)
                c = rng.choice([-3, -2, -1, 1, 2, 3])
                terms += [GeneratorTerm(t.level, t.elem, c * t.coeff) for t in x_i_generator(pres, rng.randrange(3), a, b)]
            if not project_to_W(pres, 3, 3, terms).is_zero():
                out.append(("generators", m, terms))
            # the same element through X(lift) -> W(lift) -> W(target)
            if not project_sequence(pres, 3, sequence_of(lift_ctx, terms)).is_zero():
                out.append(("sequence", m, terms))
    pres = Presentation.standard(Zmod(9))
    ctx = WittContext(3, 3, Zmod(9))
    rng = _rng("9:onto")
    for _ in range(TRIALS):
        x = random_witt(rng, ctx)
        terms = lift_witt_vector(pres, x)
        if project_to_W(pres, 3, 3, terms) != x:
            out.append(("onto", x))
    _failures(out)


def test_c10_truncation_compatibility():
    out = []
    for name, ring in SAMPLE_RINGS.items():
        rng = _rng(f"10:{name}")
        for n in range(1, 5):
            for p in (3, 5):
                big = WittContext(p, n + 1, ring)
                small = big.with_length(n)
                for _ in range(TRIALS // 8):
                    x, y = random_witt(rng, big), random_witt(rng, big)
                    r = random_elem(rng, ring)
                    tx, ty = truncate(x, n), truncate(y, n)
                    checks = {
                        "add": truncate(witt_add(x, y), n) == witt_add(tx, ty),
                        "neg": truncate(witt_neg(x), n) == witt_neg(tx),
                        "V": truncate(verschiebung(x), n) == verschiebung(tx),
                        "teich": truncate(teichmuller(big, r), n) == teichmuller(small, r),
                        "phi": truncate(phi(big, r), n) == phi(small, r),
                    }
                    out += [(k, name, p, n) for k, ok in checks.items() if not ok]
    _failures(out)
