"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (or a negative answer such as
NotIn or a failing suite), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import cdrep, cfunctor as cf, suites, vandermonde as vdm, witt
from .errors import DomainError, ParseError
from .rings import PolyRing, RingDescriptor
from .universal import generate_universal_polys


class UsageError(Exception):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


# -- argument parsing ---------------------------------------------------------


def split_list(text: str) -> list[str]:
    """``[a, b, c]`` (or ``a, b, c``) split on top-level commas."""
    body = text.strip()
    if body.startswith("[") and body.endswith("]"):
        body = body[1:-1]
    items, depth, cur = [], 0, []
    for ch in body:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == "," and depth == 0:
            items.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        items.append("".join(cur).strip())
    return [s[1:-1] if len(s) >= 2 and s[0] == s[-1] == '"' else s for s in items]


def _ring(args) -> RingDescriptor:
    try:
        return RingDescriptor.from_spec(args.ring)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _ctx(args, n: int | None = None) -> witt.WittContext:
    try:
        return witt.WittContext(args.p, n if n is not None else args.len, _ring(args))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _vector(ctx: witt.WittContext, text: str, what: str = "Witt vector") -> list:
    items = split_list(text)
    if len(items) != ctx.n:
        raise UsageError(f"{what} {text!r} has {len(items)} entries, expected --len {ctx.n}")
    return [ctx.ring.parse(s) for s in items]


def _read_json_arg(text: str):
    if text.startswith("@"):
        text = Path(text[1:]).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _coords_out(items, ring: RingDescriptor):
    return [c.value if not ring.is_poly else c.to_text() for c in items]


def _emit_vector(args, v, out):
    if args.format == "text":
        print(str(v), file=out)
    elif args.full:
        print(_dump(v.to_json()), file=out)
    else:
        print(_dump(_coords_out(v.coords if isinstance(v, witt.WittVector) else v.comps, v.ctx.ring)), file=out)


# -- witt ---------------------------------------------------------------------


def cmd_witt(args, out) -> int:
    ctx = _ctx(args)
    m = args.method
    op = args.op
    if op == "add":
        x, y = ctx.vector(_vector(ctx, args.x)), ctx.vector(_vector(ctx, args.y))
        res = witt.witt_add(x, y, m)
    elif op == "neg":
        res = witt.witt_neg(ctx.vector(_vector(ctx, args.x)))
    elif op == "scale":
        res = witt.int_scale(args.c, ctx.vector(_vector(ctx, args.x)), m)
    elif op == "v":
        res = witt.verschiebung(ctx.vector(_vector(ctx, args.x)))
    elif op == "f":
        res = witt.frobenius(ctx.vector(_vector(ctx, args.x)), m)
    elif op == "teich":
        res = witt.teichmuller(ctx, ctx.ring.parse(args.r))
    elif op == "ghost":
        res = witt.ghost_map(ctx.vector(_vector(ctx, args.x)))
    elif op == "from-ghost":
        res = witt.ghost_inverse(ctx.ghost_vector(_vector(ctx, args.g, "ghost vector")))
    elif op == "decompose":
        parts = witt.teich_v_decompose(ctx.vector(_vector(ctx, args.x)), m)
        if args.format == "text":
            terms = " + ".join(f"V^{k}<{b.to_text()}>" for k, b in enumerate(parts) if not b.is_zero())
            print(terms or "0", file=out)
        else:
            print(_dump(_coords_out(parts, ctx.ring)), file=out)
        return 0
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(op)
    _emit_vector(args, res, out)
    return 0


# -- univ-poly ----------------------------------------------------------------


def cmd_univ(args, out) -> int:
    if args.len < 1:
        raise UsageError("--len must be >= 1")
    try:
        polys = generate_universal_polys(args.p, args.len, use_cache=not args.no_cache)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.op == "sum":
        named = [(f"S_{k}", f) for k, f in enumerate(polys.sums)]
    else:
        named = [(f"F_{k}", f) for k, f in enumerate(polys.frobs)]
    if args.format == "text":
        for name, f in named:
            print(f"{name} = {f.to_text()}", file=out)
    else:
        print(_dump([{"name": name, "poly": f.to_text()} for name, f in named]), file=out)
    return 0


# -- cd -------------------------------------------------------------------------


def _presentation(args) -> cdrep.Presentation:
    target = _ring(args)
    extra = {}
    for item in args.map or []:
        if "=" not in item:
            raise UsageError(f"--map expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        extra[name.strip()] = target.parse(value)
    return cdrep.Presentation.standard(target, extra)


def cmd_cd(args, out) -> int:
    if args.op == "gen":
        ctx = _ctx(args)
        x = cdrep.x_generator(ctx, args.k, ctx.ring.parse(args.r))
        _emit_vector(args, x.seq, out)
        return 0
    if args.op == "member":
        ctx = _ctx(args)
        parts = cdrep.x_membership(ctx.ghost_vector(_vector(ctx, args.seq, "sequence")))
        if args.format == "text":
            terms = " + ".join(f"V^{k}<{b.to_text()}>" for k, b in enumerate(parts) if not b.is_zero())
            print(terms or "0", file=out)
        else:
            print(_dump(_coords_out(parts, ctx.ring)), file=out)
        return 0
    # project
    pres = _presentation(args)
    alpha = cf.FormalSum.parse(args.terms, pres.lift)
    terms = [cdrep.GeneratorTerm(lvl, a, c) for lvl, a, c in alpha.items()]
    res = cdrep.project_to_W(pres, args.p, args.len, terms, args.method)
    _emit_vector(args, res, out)
    return 0


# -- c ----------------------------------------------------------------------


def _formal_sum(text: str) -> cf.FormalSum:
    return cf.FormalSum.parse(text)


def cmd_c(args, out) -> int:
    alpha = _formal_sum(args.expr)
    if args.op == "normalize":
        res = cf.normalize_signs(alpha)
        print(res.to_text() if args.format == "text" else _dump(res.to_json()), file=out)
        return 0
    if args.op == "eta":
        if args.point:
            point = [int(s) for s in split_list(args.point)]
            vals = cf.eta_evaluate(alpha, args.p, args.len, point)
            print(_dump([str(v) for v in vals]) if args.format == "json" else "(" + ", ".join(map(str, vals)) + ")", file=out)
        else:
            g = cf.eta_evaluate(alpha, args.p, args.len)
            print(str(g) if args.format == "text" else _dump([c.to_text() for c in g.comps]), file=out)
        return 0
    if args.op == "reduce":
        res = cf.reduce(alpha, args.p)
        if args.format == "text":
            print(_reduce_text(res), file=out)
        else:
            print(_dump(res.to_json()), file=out)
        return 0 if isinstance(res, cf.InSaturation) else 1
    # verify-cert
    cert = cf.RelationCertificate.from_json(_cert_object(_read_json_arg(args.cert)), alpha.ring)
    ok = cf.verify_certificate(alpha, cert)
    print("valid" if ok and args.format == "text" else ("invalid" if args.format == "text" else _dump({"valid": ok})), file=out)
    return 0 if ok else 1


def _cert_object(obj):
    if isinstance(obj, dict) and "certificate" in obj:
        return obj["certificate"]
    return obj


def _reduce_text(res) -> str:
    if isinstance(res, cf.NotIn):
        w = res.witness
        lines = [f"NotIn: component {w.index} of eta is nonzero", f"  at point {list(w.point)}: {w.value}"]
        if w.component is not None:
            lines.append(f"  component = {w.component.to_text()}")
        return "\n".join(lines)
    cert = res.certificate
    lines = [f"InSaturation: k={cert.k}, {len(cert.combo)} generators"]
    lines += [f"  {c:+d} * {g}" for c, g in cert.combo]
    return "\n".join(lines)


# -- vdm ------------------------------------------------------------------------


def _ints(items: Sequence[str]) -> list[int]:
    try:
        return [int(s) for s in items]
    except ValueError as exc:
        raise UsageError(f"expected integers: {exc}") from None


def cmd_vdm(args, out) -> int:
    if args.op == "det":
        matrix = _read_json_arg(args.matrix)
        if not isinstance(matrix, list) or not all(isinstance(r, list) for r in matrix):
            raise ParseError("matrix must be a JSON list of rows")
        d = vdm.det_exact(matrix)
        print(str(d) if args.format == "text" else _dump({"det": str(d)}), file=out)
        return 0
    if args.op == "check":
        c = _ints(args.c)
        res = vdm.independence_check(args.p, c)
        if args.format == "text":
            print(vdm.PVandermonde.build(args.p, c).to_text(), file=out)
            extra = f" (case {res.case})" if res.case else (f" ({res.reason})" if res.reason else "")
            print(f"{res.status}{extra}; det = {res.det}", file=out)
        else:
            print(_dump(res.to_json()), file=out)
        return 0
    # point
    names: list[str] = []
    from .parsing import variables_in

    for f in args.f:
        for v in variables_in(f):
            if v not in names:
                names.append(v)
    ring = PolyRing(names)
    fs = [ring.parse(f) for f in args.f]
    pt = vdm.find_nonvanishing_point(fs)
    if args.format == "text":
        print(", ".join(f"{v}={x}" for v, x in zip(ring.vars, pt)) or "()", file=out)
    else:
        print(_dump({"vars": list(ring.vars), "point": list(pt)}), file=out)
    return 0


# -- verify ----------------------------------------------------------------------


def cmd_verify(args, out) -> int:
    rep = suites.report(args.suite, args.seed, args.trials)
    if args.format == "text":
        for r in rep["results"]:
            print(f"{r['summary']} ({r['passed']}/{r['trials']})", file=out)
            if r["status"] == "FAIL":
                for note in r["failures"]:
                    print(f"    {note}", file=out)
                print(f"    reproduce: {r['repro']}", file=out)
    else:
        print(_dump(rep), file=out)
    return 0 if rep["ok"] else 1


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="odd prime (default 3)")
    common.add_argument("--len", type=int, default=2, help="truncation length (default 2)")
    common.add_argument("--ring", default="int", help="int | mod:<m> | poly:<vars>[:mod:<m>]")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=100)
    common.add_argument("--method", choices=("auto", "universal", "ghost"), default="auto", help="Witt arithmetic route")
    common.add_argument("--full", action="store_true", help="JSON documents with p, len and ring")

    ap = argparse.ArgumentParser(prog="prewitt", description="Exact p-typical Witt vector toolkit")
    sub = ap.add_subparsers(dest="group", required=True)

    def leaf(parent, name, help_text):
        return parent.add_parser(name, parents=[common], help=help_text)

    w = sub.add_parser("witt", help="Witt vector arithmetic").add_subparsers(dest="op", required=True)
    for name in ("add",):
        q = leaf(w, name, "x + y")
        q.add_argument("x")
        q.add_argument("y")
    for name, text in (("neg", "-x"), ("v", "Verschiebung"), ("f", "Frobenius W_n -> W_(n-1)"), ("ghost", "ghost components"), ("decompose", "x = sum V^k<b_k>")):
        leaf(w, name, text).add_argument("x")
    q = leaf(w, "scale", "c * x")
    q.add_argument("c", type=int)
    q.add_argument("x")
    leaf(w, "teich", "Teichmuller representative").add_argument("r")
    leaf(w, "from-ghost", "Witt vector with the given ghost components").add_argument("g")

    u = sub.add_parser("univ-poly", help="universal sum / Frobenius polynomials").add_subparsers(dest="op", required=True)
    for name in ("sum", "frob"):
        q = leaf(u, name, f"universal {name} polynomials")
        q.add_argument("--no-cache", action="store_true", help="ignore and do not write the on-disk cache")

    c = sub.add_parser("cd", help="the sequence model X(R)").add_subparsers(dest="op", required=True)
    q = leaf(c, "gen", "V^k<r> as a sequence")
    q.add_argument("k", type=int)
    q.add_argument("r")
    leaf(c, "member", "decompose a sequence in X(R)").add_argument("seq")
    q = leaf(c, "project", "project generators over Z[vars] to W_n of the target ring")
    q.add_argument("terms", help="generator sum such as '2*V[0]{u} - V[1]{3}'")
    q.add_argument("--map", action="append", metavar="NAME=VALUE", help="extra lift variable and its image")

    cc = sub.add_parser("c", help="formal sums and the relation subgroup").add_subparsers(dest="op", required=True)
    for name, text in (("normalize", "canonical signs"), ("reduce", "membership with certificate or witness")):
        leaf(cc, name, text).add_argument("expr")
    q = leaf(cc, "eta", "image as a ghost sequence")
    q.add_argument("expr")
    q.add_argument("--point", help="evaluate elements at this integer point first")
    q = leaf(cc, "verify-cert", "check a certificate")
    q.add_argument("expr")
    q.add_argument("cert", help="certificate JSON or @file")

    v = sub.add_parser("vdm", help="p-power Vandermonde matrices").add_subparsers(dest="op", required=True)
    leaf(v, "det", "exact determinant").add_argument("matrix", help="JSON rows or @file")
    leaf(v, "check", "independence hypotheses").add_argument("c", nargs="+")
    leaf(v, "point", "integer point where the separating product is nonzero").add_argument("f", nargs="+")

    vs = sub.add_parser("verify", help="seeded property suites").add_subparsers(dest="suite", required=True)
    for name in suites.SUITES + ("all",):
        leaf(vs, name, f"run the {name} suite")
    return ap


_HANDLERS = {"witt": cmd_witt, "univ-poly": cmd_univ, "cd": cmd_cd, "c": cmd_c, "vdm": cmd_vdm, "verify": cmd_verify}


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.group](args, out)
    except DomainError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=err)
        return 1
    except (UsageError, ParseError) as exc:
        print(f"usage error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
