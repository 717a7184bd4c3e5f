"""Seeded property suites behind ``verify``.

Each check draws from its own random stream, derived from the seed and the
check's name, so a check's outcome does not depend on which other checks ran.
Reports are sorted by check name.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from . import cfunctor as cf
from .cdrep import (
    GeneratorTerm,
    Presentation,
    lift_witt_vector,
    project_sequence,
    project_to_W,
    sequence_of,
    x_i_generator,
    x_membership,
)
from .errors import NotMember
from .rings import PolyRing, Zmod, ZZ
from .sampling import (
    PROPERTY_RINGS,
    perturb,
    random_case1,
    random_case2,
    random_distinct_family,
    random_elem,
    random_member,
    random_witt,
    rng_for,
)
from .vandermonde import INDEPENDENT, PVandermonde, find_nonvanishing_point, g_value, independence_check
from .witt import (
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

SUITES = ("properties", "cd", "c-functor", "vandermonde")


@dataclass
class CheckResult:
    name: str
    trials: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials

    def summary(self) -> str:
        return f"{self.name}: {'PASS' if self.ok else 'FAIL'}"

    def to_json(self, repro: str) -> dict:
        out = {"name": self.name, "trials": self.trials, "passed": self.passed, "status": "PASS" if self.ok else "FAIL"}
        if not self.ok:
            out["failures"] = self.failures[:5]
            out["repro"] = repro
        return out


Trial = Callable[[random.Random], str | None]


def _run(name: str, seed: int, trials: int, trial: Trial) -> CheckResult:
    """Run ``trial`` repeatedly; it returns None on success or a failure note."""
    res = CheckResult(name)
    rng = rng_for(seed, name)
    for i in range(trials):
        res.trials += 1
        try:
            note = trial(rng)
        except Exception as exc:  # a crash is a failure, with its message
            note = f"{type(exc).__name__}: {exc}"
        if note is None:
            res.passed += 1
        else:
            res.failures.append(f"trial {i}: {note}")
    return res


def _ctx(rng: random.Random, ring, ps=(3, 5), ns=(2, 3, 4)) -> WittContext:
    return WittContext(rng.choice(ps), rng.choice(ns), ring)


# -- properties ---------------------------------------------------------------


def _phi_additivity(ring):
    def trial(rng):
        ctx = _ctx(rng, ring)
        x, y = random_elem(rng, ring), random_elem(rng, ring)
        lhs, rhs = phi(ctx, x + y), witt_add(phi(ctx, x), phi(ctx, y))
        return None if lhs == rhs else f"p={ctx.p} n={ctx.n} x={x} y={y}: {lhs} != {rhs}"

    return trial


def _teich_sign(ring):
    def trial(rng):
        ctx = _ctx(rng, ring)
        x = random_elem(rng, ring)
        ok = teichmuller(ctx, -x) == witt_neg(teichmuller(ctx, x))
        return None if ok else f"p={ctx.p} n={ctx.n} x={x}"

    return trial


def _frobenius(ring):
    def trial(rng):
        ctx = _ctx(rng, ring, ns=(2, 3, 4, 5))
        r = random_elem(rng, ring)
        x = random_witt(rng, ctx)
        short = ctx.with_length(ctx.n - 1)
        if frobenius(teichmuller(ctx, r)) != teichmuller(short, r**ctx.p):
            return f"F<r> != <r^p> for p={ctx.p} n={ctx.n} r={r}"
        if frobenius(verschiebung(x)) != truncate(int_scale(ctx.p, x), ctx.n - 1):
            return f"FV != p for p={ctx.p} n={ctx.n} x={x}"
        return None

    return trial


def _decomposition(ring):
    def trial(rng):
        ctx = _ctx(rng, ring)
        x = random_witt(rng, ctx)
        parts = teich_v_decompose(x)
        return None if recompose(ctx, parts) == x else f"p={ctx.p} n={ctx.n} x={x}"

    return trial


def _truncation(ring):
    def trial(rng):
        ctx = _ctx(rng, ring, ns=(2, 3, 4, 5))
        short = ctx.n - 1
        x, y = random_witt(rng, ctx), random_witt(rng, ctx)
        r = random_elem(rng, ring)
        t = lambda v: truncate(v, short)  # noqa: E731
        sctx = ctx.with_length(short)
        pairs = {
            "add": (t(witt_add(x, y)), witt_add(t(x), t(y))),
            "neg": (t(witt_neg(x)), witt_neg(t(x))),
            "V": (t(verschiebung(x)), verschiebung(t(x))),
            "teichmuller": (t(teichmuller(ctx, r)), teichmuller(sctx, r)),
            "phi": (t(phi(ctx, r)), phi(sctx, r)),
        }
        bad = [k for k, (a, b) in pairs.items() if a != b]
        return None if not bad else f"p={ctx.p} n={ctx.n}: {', '.join(bad)}"

    return trial


def _ghost_hom(rng):
    ctx = _ctx(rng, ZZ)
    x, y = random_witt(rng, ctx), random_witt(rng, ctx)
    ok = ghost_map(witt_add(x, y)) == ghost_map(x) + ghost_map(y)
    return None if ok else f"p={ctx.p} n={ctx.n} x={x} y={y}"


def _torsion_free(rng):
    ctx = _ctx(rng, ZZ)
    while True:
        x = random_witt(rng, ctx)
        if not x.is_zero():
            break
    return None if not int_scale(ctx.p, x).is_zero() else f"p x = 0 for x={x}"


def properties_suite(seed: int, trials: int) -> list[CheckResult]:
    out = []
    for label, ring in PROPERTY_RINGS.items():
        out.append(_run(f"phi additivity over {label}", seed, trials, _phi_additivity(ring)))
        out.append(_run(f"teichmuller sign over {label}", seed, trials, _teich_sign(ring)))
        out.append(_run(f"frobenius relations over {label}", seed, trials, _frobenius(ring)))
        out.append(_run(f"decomposition over {label}", seed, trials, _decomposition(ring)))
        out.append(_run(f"truncation compatibility over {label}", seed, trials, _truncation(ring)))
    out.append(_run("ghost homomorphism over Z", seed, trials, _ghost_hom))
    out.append(_run("p-torsion freeness over Z", seed, trials, _torsion_free))
    return out


# -- cd -----------------------------------------------------------------------


def kernel_presentation(m: int) -> Presentation:
    """``Z[u] -> Z/m`` with ``u -> 2``; its kernel is ``(m, u - 2)``."""
    return Presentation.standard(Zmod(m), {"u": 2})


def random_kernel_pair(rng: random.Random, pres: Presentation):
    lift = pres.lift
    u = lift.gen("u")
    m = pres.target.modulus
    a = random_elem(rng, lift, bound=6)
    k = random_elem(rng, lift, bound=3) * m + random_elem(rng, lift, bound=3) * (u - 2)
    return a, a + k


def _xi_kernel(m: int):
    pres = kernel_presentation(m)

    def trial(rng):
        terms: list[GeneratorTerm] = []
        for _ in range(rng.randint(1, 3)):
            level = rng.randrange(3)
            a, b = random_kernel_pair(rng, pres)
            c = rng.choice([-2, -1, 1, 2])
            terms += [GeneratorTerm(t.level, t.elem, c * t.coeff) for t in x_i_generator(pres, level, a, b)]
        via_seq = project_sequence(pres, 3, sequence_of(WittContext(3, 3, pres.lift), terms))
        via_terms = project_to_W(pres, 3, 3, terms)
        if not via_seq.is_zero() or not via_terms.is_zero():
            return f"terms={[t.to_json() for t in terms]}: {via_seq}, {via_terms}"
        return None

    return trial


def _projection_agrees(rng):
    pres = kernel_presentation(rng.choice((9, 6, 5)))
    terms = [GeneratorTerm(rng.randrange(3), random_elem(rng, pres.lift, bound=6), rng.choice([-2, -1, 1, 2])) for _ in range(rng.randint(1, 3))]
    a = project_sequence(pres, 3, sequence_of(WittContext(3, 3, pres.lift), terms))
    b = project_to_W(pres, 3, 3, terms)
    return None if a == b else f"terms={[t.to_json() for t in terms]}: {a} != {b}"


def _surjectivity(rng):
    pres = kernel_presentation(9)
    ctx = WittContext(3, 3, Zmod(9))
    x = random_witt(rng, ctx)
    terms = lift_witt_vector(pres, x)
    return None if project_to_W(pres, 3, 3, terms) == x else f"x={x}"


def _x_membership(rng):
    ring = PolyRing(["t"])
    ctx = WittContext(3, 3, ring)
    terms = [GeneratorTerm(k, random_elem(rng, ring, bound=5), rng.randint(-3, 3)) for k in range(3)]
    seq = sequence_of(ctx, terms)
    parts = x_membership(seq)
    if sequence_of(ctx, [GeneratorTerm(k, b) for k, b in enumerate(parts)]).seq != seq.seq:
        return f"decomposition does not rebuild {seq.seq}"
    bumped = list(seq.seq.comps)
    bumped[1] = bumped[1] + 1
    try:
        x_membership(ctx.ghost_vector(bumped))
    except NotMember as exc:
        return None if exc.index == 1 else f"wrong failing index {exc.index}"
    return "perturbed sequence accepted"


def cd_suite(seed: int, trials: int) -> list[CheckResult]:
    out = [_run(f"X_I generators vanish in W_3(Z/{m})", seed, trials, _xi_kernel(m)) for m in (9, 6, 5)]
    out.append(_run("surjectivity onto W_3(Z/9)", seed, trials, _surjectivity))
    out.append(_run("sequence and generator projections agree", seed, trials, _projection_agrees))
    out.append(_run("X membership over Z[t]", seed, trials, _x_membership))
    return out


# -- c-functor ----------------------------------------------------------------

C_RING = PolyRing(["x", "y"])
C_KW = dict(bound=5, max_terms=2, max_deg=2)


def _c_complete(rng):
    p = rng.choice((3, 5))
    alpha, _ = random_member(rng, C_RING, p, **C_KW)
    res = cf.reduce(alpha, p)
    if not isinstance(res, cf.InSaturation):
        return f"p={p} member reported NotIn: {alpha}"
    if not cf.verify_certificate(alpha, res.certificate):
        return f"p={p} certificate does not verify: {alpha}"
    top = alpha.max_level() if not alpha.is_zero() else 0
    if not cf.eta_is_zero(alpha, p, top + 6):
        return f"p={p} eta does not vanish: {alpha}"
    return None


def _c_nonmember(rng):
    p = rng.choice((3, 5))
    alpha, _ = random_member(rng, C_RING, p, **C_KW)
    beta = perturb(rng, alpha, C_RING, **C_KW)
    res = cf.reduce(beta, p)
    if not isinstance(res, cf.NotIn):
        return f"p={p} perturbed element certified: {beta}"
    r = len(cf.normalize_signs(beta).elements())
    if cf.eta_nonzero_index(beta, p, beta.max_level() + r) is None:
        return f"p={p} eta vanishes on a NotIn element: {beta}"
    return None


def _c_base_case(rng):
    p = rng.choice((3, 5))
    fs = random_distinct_family(rng, C_RING, rng.randint(1, 4), **C_KW)
    alpha = cf.FormalSum(C_RING)
    for f in fs:
        alpha = alpha + cf.V(0, f.sign_canonical()[0], rng.choice([-3, -2, -1, 1, 2, 3]))
    res = cf.reduce(alpha, p)
    if alpha.is_zero():
        return None if isinstance(res, cf.InSaturation) else "zero sum not certified"
    return None if isinstance(res, cf.NotIn) else f"level-0 sum certified: {alpha}"


def cfunctor_suite(seed: int, trials: int) -> list[CheckResult]:
    return [
        _run("reduce completeness on relation combinations", seed, trials, _c_complete),
        _run("reduce non-membership on perturbed sums", seed, trials, _c_nonmember),
        _run("level-0 independence", seed, trials, _c_base_case),
    ]


# -- vandermonde --------------------------------------------------------------


def _vdm_case(case: int):
    draw = random_case1 if case == 1 else random_case2

    def trial(rng):
        p = rng.choice((3, 5, 7))
        c = draw(rng, rng.randint(1, 6))
        det = PVandermonde.build(p, c).det()
        return None if det != 0 else f"p={p} c={c}"

    return trial


def _vdm_sign(rng):
    p = rng.choice((3, 5, 7))
    c = random_case2(rng, rng.randint(1, 5))
    d1 = PVandermonde.build(p, c).det()
    d2 = PVandermonde.build(p, [abs(x) for x in c]).det()
    return None if abs(d1) == abs(d2) else f"p={p} c={c}"


def _vdm_pipeline(rng):
    nv = rng.randint(1, 3)
    ring = PolyRing(["x", "y", "z"][:nv])
    fs = random_distinct_family(rng, ring, rng.randint(1, 4), bound=5, max_terms=3, max_deg=2)
    pt = find_nonvanishing_point(fs)
    from .rings import poly_eval_int

    vals = [poly_eval_int(f, pt) for f in fs]
    if g_value(vals) == 0:
        return f"g vanishes at {pt}"
    res = independence_check(rng.choice((3, 5, 7)), vals)
    return None if res.status == INDEPENDENT else f"{vals}: {res.status}"


def vandermonde_suite(seed: int, trials: int) -> list[CheckResult]:
    return [
        _run("case(1) nonzero det", seed, trials, _vdm_case(1)),
        _run("case(2) nonzero det", seed, trials, _vdm_case(2)),
        _run("det sign invariance", seed, trials, _vdm_sign),
        _run("nonvanishing point pipeline", seed, trials, _vdm_pipeline),
    ]


_SUITE_FUNCS = {
    "properties": properties_suite,
    "cd": cd_suite,
    "c-functor": cfunctor_suite,
    "vandermonde": vandermonde_suite,
}


def run_suite(name: str, seed: int = 0, trials: int = 100) -> list[CheckResult]:
    names = SUITES if name == "all" else (name,)
    results = []
    for n in names:
        results.extend(_SUITE_FUNCS[n](seed, trials))
    return sorted(results, key=lambda r: r.name)


def report(name: str, seed: int, trials: int) -> dict:
    results = run_suite(name, seed, trials)
    repro = f"python3 -m prewitt verify {name} --seed {seed} --trials {trials}"
    return {
        "suite": name,
        "seed": seed,
        "trials": trials,
        "ok": all(r.ok for r in results),
        "results": [dict(r.to_json(repro), summary=r.summary()) for r in results],
    }
