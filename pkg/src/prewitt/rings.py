"""Exact base rings: Z, Z/m, and sparse multivariate polynomials over either.

Ring elements are immutable and always stored in canonical form (residues in
``[0, m)``, no zero coefficients), so ``==`` is exact mathematical equality.

Polynomials are dictionaries from exponent tuples to integer coefficients.
Products of dense-ish operands go through Kronecker substitution: both
operands are packed into one big integer each, multiplied with CPython's
bignum multiply, and unpacked.  Sparse products fall back to the schoolbook
double loop.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import prod
from operator import add
from typing import Iterable, Mapping, Sequence

from .errors import ArityMismatch, NotDivisible, RingMismatch, UnsupportedRing

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_CHUNK_RE = re.compile(r"\d+|\D+")


def _name_key(name: str):
    # natural order, so X2 sorts before X10
    return tuple((1, "", int(c)) if c.isdigit() else (0, c, 0) for c in _CHUNK_RE.findall(name))


@dataclass(frozen=True)
class RingDescriptor:
    """Which ring an element lives in.

    ``kind`` is ``"int"``, ``"mod"`` (with ``modulus``) or ``"poly"`` (with
    ``vars`` and a non-polynomial ``coeff`` ring).  Variables are stored in
    natural sorted order regardless of the order given.
    """

    kind: str
    modulus: int | None = None
    vars: tuple[str, ...] = ()
    coeff: RingDescriptor | None = None

    def __post_init__(self):
        if self.kind == "int":
            if self.modulus is not None or self.vars or self.coeff is not None:
                raise ValueError("Integers take no parameters")
        elif self.kind == "mod":
            if not isinstance(self.modulus, int) or self.modulus < 2:
                raise ValueError(f"modulus must be an integer >= 2, got {self.modulus!r}")
            if self.vars or self.coeff is not None:
                raise ValueError("IntegersMod takes only a modulus")
        elif self.kind == "poly":
            coeff = self.coeff if self.coeff is not None else RingDescriptor("int")
            if coeff.kind == "poly":
                raise ValueError("coefficient ring of a polynomial ring cannot itself be polynomial")
            names = tuple(self.vars)
            for v in names:
                if not isinstance(v, str) or not _NAME_RE.match(v):
                    raise ValueError(f"invalid variable name {v!r}")
            if len(set(names)) != len(names):
                raise ValueError(f"duplicate variable names in {names}")
            object.__setattr__(self, "vars", tuple(sorted(names, key=_name_key)))
            object.__setattr__(self, "coeff", coeff)
            if self.modulus is not None:
                raise ValueError("polynomial rings carry their modulus on the coefficient ring")
        else:
            raise ValueError(f"unknown ring kind {self.kind!r}")

    # -- structure ---------------------------------------------------------

    @property
    def is_poly(self) -> bool:
        return self.kind == "poly"

    @property
    def base(self) -> RingDescriptor:
        """Coefficient ring (the ring itself when it is not polynomial)."""
        return self.coeff if self.kind == "poly" else self

    @property
    def char_modulus(self) -> int | None:
        """``m`` if the base is Z/m, ``None`` if it is Z."""
        return self.base.modulus

    @property
    def torsion_free(self) -> bool:
        return self.base.kind == "int"

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def with_base(self, base: RingDescriptor) -> RingDescriptor:
        """Same shape (same variables) over a different coefficient ring."""
        if self.kind == "poly":
            return RingDescriptor("poly", vars=self.vars, coeff=base)
        return base

    # -- element construction ---------------------------------------------

    def from_int(self, n: int) -> RingElem:
        n = int(n)
        m = self.char_modulus
        if m is not None:
            n %= m
        if self.kind == "poly":
            return RingElem(self, {(0,) * self.nvars: n} if n else {})
        return RingElem(self, n)

    @property
    def zero(self) -> RingElem:
        return self.from_int(0)

    @property
    def one(self) -> RingElem:
        return self.from_int(1)

    def gen(self, name: str) -> RingElem:
        if self.kind != "poly" or name not in self.vars:
            raise ValueError(f"{name!r} is not a variable of {self}")
        i = self.vars.index(name)
        e = tuple(1 if j == i else 0 for j in range(self.nvars))
        return RingElem(self, {e: 1})

    def gens(self) -> tuple[RingElem, ...]:
        return tuple(self.gen(v) for v in self.vars)

    def from_terms(self, terms: Mapping[tuple[int, ...], int] | Iterable[tuple[tuple[int, ...], int]]) -> RingElem:
        """Build a polynomial from ``{exps: coeff}``; zero and repeated terms are merged."""
        if self.kind != "poly":
            raise UnsupportedRing(f"{self} is not a polynomial ring")
        items = terms.items() if isinstance(terms, Mapping) else terms
        m = self.char_modulus
        out: dict[tuple[int, ...], int] = {}
        for e, c in items:
            e = tuple(int(x) for x in e)
            if len(e) != self.nvars or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {self}")
            out[e] = out.get(e, 0) + int(c)
        return RingElem(self, _clean(out, m))

    def convert(self, x: RingElem) -> RingElem:
        """Map ``x`` into this ring through its integer representatives.

        The source must have the same variables (or both be scalar rings).
        Z/M -> Z/m is the reduction homomorphism when m | M; Z/m -> Z or
        Z/m -> Z/M picks the representative in ``[0, m)``.
        """
        if x.ring == self:
            return x
        if x.ring.vars != self.vars or x.ring.is_poly != self.is_poly:
            raise RingMismatch(f"cannot convert {x.ring} to {self}")
        m = self.char_modulus
        if self.is_poly:
            return RingElem(self, _clean(dict(x._v), m))
        return RingElem(self, x._v % m if m is not None else x._v)

    def parse(self, text: str) -> RingElem:
        from .parsing import parse_element

        return parse_element(text, self)

    # -- naming and serialization ----------------------------------------

    def __str__(self) -> str:
        if self.kind == "int":
            return "Z"
        if self.kind == "mod":
            return f"Z/{self.modulus}"
        inner = str(self.coeff)
        if self.coeff.kind == "mod":
            inner = f"({inner})"
        return f"{inner}[{','.join(self.vars)}]"

    def spec(self) -> str:
        """The CLI spelling: ``int``, ``mod:9``, ``poly:x,y`` or ``poly:x,y:mod:9``."""
        if self.kind == "int":
            return "int"
        if self.kind == "mod":
            return f"mod:{self.modulus}"
        s = "poly:" + ",".join(self.vars)
        if self.coeff.kind == "mod":
            s += f":mod:{self.coeff.modulus}"
        return s

    @classmethod
    def from_spec(cls, text: str) -> RingDescriptor:
        text = text.strip()
        if text == "int":
            return ZZ
        if text.startswith("mod:"):
            return Zmod(int(text[4:]))
        if text.startswith("poly:"):
            rest = text[5:]
            coeff = ZZ
            if ":mod:" in rest:
                rest, m = rest.split(":mod:", 1)
                coeff = Zmod(int(m))
            names = [v.strip() for v in rest.split(",") if v.strip()] if rest else []
            return PolyRing(names, coeff)
        raise ValueError(f"unrecognised ring spec {text!r}")

    def to_json(self) -> dict:
        if self.kind == "int":
            return {"kind": "int"}
        if self.kind == "mod":
            return {"kind": "mod", "m": self.modulus}
        return {"kind": "poly", "vars": list(self.vars), "coeff": self.coeff.to_json()}

    @classmethod
    def from_json(cls, obj: Mapping) -> RingDescriptor:
        kind = obj["kind"]
        if kind == "int":
            return ZZ
        if kind == "mod":
            return Zmod(int(obj["m"]))
        if kind == "poly":
            return PolyRing(list(obj["vars"]), cls.from_json(obj.get("coeff", {"kind": "int"})))
        raise ValueError(f"unknown ring kind {kind!r}")


ZZ = RingDescriptor("int")


def Zmod(m: int) -> RingDescriptor:
    return RingDescriptor("mod", modulus=m)


def PolyRing(vars: Sequence[str], coeff: RingDescriptor = ZZ) -> RingDescriptor:
    if isinstance(vars, str):
        vars = [v.strip() for v in vars.split(",") if v.strip()]
    return RingDescriptor("poly", vars=tuple(vars), coeff=coeff)


# ---------------------------------------------------------------------------
# polynomial kernels; f, g are {exps: coeff} dicts, m is None or a modulus


def _clean(f: dict, m: int | None) -> dict:
    if m is None:
        return {e: c for e, c in f.items() if c}
    out = {}
    for e, c in f.items():
        c %= m
        if c:
            out[e] = c
    return out


def _padd(f: dict, g: dict, m: int | None, sign: int = 1) -> dict:
    if len(g) > len(f) and sign == 1:
        f, g = g, f
    r = dict(f)
    for e, c in g.items():
        v = r.get(e, 0) + sign * c
        if m is not None:
            v %= m
        if v:
            r[e] = v
        else:
            r.pop(e, None)
    return r


def _pscale(f: dict, c: int, m: int | None) -> dict:
    if m is not None:
        c %= m
    if not c:
        return {}
    if c == 1:
        return f
    return _clean({e: c * v for e, v in f.items()}, m)


# Kronecker substitution kicks in above this many schoolbook products.
_KRONECKER_MIN_WORK = 200


def _pmul(f: dict, g: dict, m: int | None) -> dict:
    if not f or not g:
        return {}
    if len(f) < len(g):
        f, g = g, f
    if len(g) == 1:
        ((e2, c2),) = g.items()
        return _clean({tuple(map(add, e1, e2)): c1 * c2 for e1, c1 in f.items()}, m)
    if len(f) * len(g) >= _KRONECKER_MIN_WORK:
        r = _kronecker_mul(f, g, m)
        if r is not None:
            return r
    return _schoolbook_mul(f, g, m)


def _schoolbook_mul(f: dict, g: dict, m: int | None) -> dict:
    r: dict = {}
    get = r.get
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(map(add, e1, e2))
            r[e] = get(e, 0) + c1 * c2
    return _clean(r, m)


def _kronecker_mul(f: dict, g: dict, m: int | None) -> dict | None:
    nv = len(next(iter(f)))
    df = [0] * nv
    dg = [0] * nv
    for e in f:
        for i, x in enumerate(e):
            if x > df[i]:
                df[i] = x
    for e in g:
        for i, x in enumerate(e):
            if x > dg[i]:
                dg[i] = x
    bounds = [a + b + 1 for a, b in zip(df, dg)]
    slots = prod(bounds)
    # unpacking walks every slot in Python: only worth it when the box is dense
    if slots > len(f) * len(g):
        return None
    strides = [1] * nv
    for i in range(1, nv):
        strides[i] = strides[i - 1] * bounds[i - 1]
    cmax = min(len(f), len(g)) * max(map(abs, f.values())) * max(map(abs, g.values()))
    nbytes = (cmax.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)
    pattern = half.to_bytes(nbytes, "little")
    offset = int.from_bytes(pattern * slots, "little")

    def pack(h: dict) -> int:
        buf = bytearray(pattern * slots)
        for e, c in h.items():
            i = sum(x * s for x, s in zip(e, strides)) * nbytes
            buf[i : i + nbytes] = (c + half).to_bytes(nbytes, "little")
        return int.from_bytes(buf, "little") - offset

    a = pack(f)
    prod_int = a * a if f is g else a * pack(g)
    data = (prod_int + offset).to_bytes(slots * nbytes, "little")
    out = {}
    for idx in range(slots):
        j = idx * nbytes
        chunk = data[j : j + nbytes]
        if chunk == pattern:
            continue
        c = int.from_bytes(chunk, "little") - half
        if m is not None:
            c %= m
            if not c:
                continue
        if nv == 1:
            e = (idx,)
        else:
            rest = idx
            ex = []
            for b in bounds:
                rest, r = divmod(rest, b)
                ex.append(r)
            e = tuple(ex)
        out[e] = c
    return out


def _ppow(f: dict, k: int, m: int | None, nv: int) -> dict:
    if k == 0:
        return _clean({(0,) * nv: 1}, m)
    if not f:
        return {}
    if len(f) == 1:
        ((e, c),) = f.items()
        return _clean({tuple(x * k for x in e): pow(c, k, m) if m else c**k}, m)
    result = None
    base = f
    while True:
        if k & 1:
            result = base if result is None else _pmul(result, base, m)
        k >>= 1
        if not k:
            return result
        base = _pmul(base, base, m)


def _print_key(e: tuple[int, ...]):
    # ascending degree, lexicographically descending inside a degree
    return (sum(e), tuple(-x for x in e))


def _grlex_key(e: tuple[int, ...]):
    return (sum(e), e)


# ---------------------------------------------------------------------------


class RingElem:
    """An immutable element of a :class:`RingDescriptor` ring."""

    __slots__ = ("ring", "_v", "_hash")

    def __init__(self, ring: RingDescriptor, payload):
        # payload must already be canonical; use the ring's constructors
        self.ring = ring
        self._v = payload
        self._hash = None

    # -- inspection --------------------------------------------------------

    @property
    def value(self) -> int:
        """Integer value (or residue) of a scalar-ring element."""
        if self.ring.is_poly:
            if not self._v:
                return 0
            if len(self._v) == 1 and not any(next(iter(self._v))):
                return next(iter(self._v.values()))
            raise UnsupportedRing(f"{self} is not a constant")
        return self._v

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """``(exps, coeff)`` pairs in printing order."""
        if not self.ring.is_poly:
            return [((), self._v)] if self._v else []
        return sorted(self._v.items(), key=lambda t: _print_key(t[0]))

    def coefficient_map(self) -> dict[tuple[int, ...], int]:
        if not self.ring.is_poly:
            raise UnsupportedRing(f"{self.ring} is not a polynomial ring")
        return dict(self._v)

    def is_zero(self) -> bool:
        return not self._v

    def __bool__(self) -> bool:
        return bool(self._v)

    def degree(self) -> int:
        if not self.ring.is_poly:
            return 0 if self._v else -1
        return max((sum(e) for e in self._v), default=-1)

    def leading_term(self) -> tuple[tuple[int, ...], int]:
        """Largest term under graded-lex order."""
        if not self._v:
            raise ValueError("zero has no leading term")
        if not self.ring.is_poly:
            return ((), self._v)
        e = max(self._v, key=_grlex_key)
        return e, self._v[e]

    def sign_canonical(self) -> tuple[RingElem, int]:
        """``(r, s)`` with ``self == s*r``, ``s`` = ±1 and r's leading coefficient positive.

        Only meaningful over torsion-free rings.
        """
        if not self.ring.torsion_free:
            raise UnsupportedRing("sign representatives need a torsion-free ring")
        if self._v and self.leading_term()[1] < 0:
            return -self, -1
        return self, 1

    def sort_key(self):
        if not self.ring.is_poly:
            return ((0, (), self._v),)
        return tuple((*_print_key(e), c) for e, c in self.terms())

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> RingElem:
        if isinstance(other, RingElem):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.char_modulus
        if self.ring.is_poly:
            return RingElem(self.ring, _padd(self._v, other._v, m))
        v = self._v + other._v
        return RingElem(self.ring, v % m if m else v)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.char_modulus
        if self.ring.is_poly:
            return RingElem(self.ring, _padd(self._v, other._v, m, sign=-1))
        v = self._v - other._v
        return RingElem(self.ring, v % m if m else v)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        m = self.ring.char_modulus
        if self.ring.is_poly:
            return RingElem(self.ring, _clean({e: -c for e, c in self._v.items()}, m))
        return RingElem(self.ring, (-self._v) % m if m else -self._v)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        m = self.ring.char_modulus
        if self.ring.is_poly:
            return RingElem(self.ring, _pmul(self._v, other._v, m))
        v = self._v * other._v
        return RingElem(self.ring, v % m if m else v)

    __rmul__ = __mul__

    def scale(self, c: int) -> RingElem:
        m = self.ring.char_modulus
        if self.ring.is_poly:
            return RingElem(self.ring, _pscale(self._v, c, m))
        v = self._v * c
        return RingElem(self.ring, v % m if m else v)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"exponent must be a non-negative integer, got {k!r}")
        m = self.ring.char_modulus
        if self.ring.is_poly:
            return RingElem(self.ring, _ppow(self._v, k, m, self.ring.nvars))
        return RingElem(self.ring, pow(self._v, k, m) if m else self._v**k)

    # -- equality and hashing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.from_int(other)
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring == other.ring and self._v == other._v

    def __hash__(self):
        if self._hash is None:
            payload = frozenset(self._v.items()) if self.ring.is_poly else self._v
            self._hash = hash((self.ring, payload))
        return self._hash

    # -- text and JSON -----------------------------------------------------

    def to_text(self) -> str:
        if not self.ring.is_poly:
            return str(self._v)
        if not self._v:
            return "0"
        names = self.ring.vars
        parts = []
        for e, c in self.terms():
            mono = "*".join(n if x == 1 else f"{n}^{x}" for n, x in zip(names, e) if x)
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if not parts:
                parts.append(body if c > 0 else "-" + body)
            else:
                parts.append(("+ " if c > 0 else "- ") + body)
        return " ".join(parts)

    __str__ = to_text

    def __repr__(self) -> str:
        return f"RingElem({self.ring}, {self.to_text()!r})"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "terms": [{"coeffs": c, "exps": list(e)} for e, c in self.terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> RingElem:
        ring = RingDescriptor.from_json(obj["ring"])
        terms = obj["terms"]
        if ring.is_poly:
            return ring.from_terms([(tuple(t["exps"]), t["coeffs"]) for t in terms])
        total = 0
        for t in terms:
            if t.get("exps"):
                raise ValueError("scalar ring terms carry no exponents")
            total += int(t["coeffs"])
        return ring.from_int(total)

    def _divide_representative(self, d: int) -> RingElem:
        """Divide the integer representative(s) by ``d``, staying in the same ring.

        Used by the lifted ghost computations over Z/M, where the caller knows
        the true value is divisible and only needs it modulo ``M/d``.
        """
        if self.ring.is_poly:
            out = {}
            for e, c in self._v.items():
                q, r = divmod(c, d)
                if r:
                    raise NotDivisible(f"{self} is not divisible by {d}")
                if q:
                    out[e] = q
            return RingElem(self.ring, out)
        q, r = divmod(self._v, d)
        if r:
            raise NotDivisible(f"{self} is not divisible by {d}")
        return RingElem(self.ring, q)


# ---------------------------------------------------------------------------
# operations with names the rest of the package uses


def ring_arith(op: str, x: RingElem, y: RingElem | int | None = None) -> RingElem:
    """Dispatch ``add | sub | mul | neg | pow`` by name."""
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "neg":
        return -x
    if op == "pow":
        return x**y
    raise ValueError(f"unknown ring operation {op!r}")


def exact_div_int(x: RingElem, d: int) -> RingElem:
    """Return ``q`` with ``d*q == x`` exactly, or raise :class:`NotDivisible`."""
    if not x.ring.torsion_free:
        raise UnsupportedRing(f"exact division is not defined over {x.ring}")
    if d == 0:
        raise ZeroDivisionError("division by zero")
    return x._divide_representative(d) if d > 0 else (-x)._divide_representative(-d)


def poly_eval_int(f: RingElem, point: Sequence[int]) -> int:
    """Evaluate a polynomial over Z at an integer point."""
    if not f.ring.is_poly or not f.ring.torsion_free:
        if f.ring == ZZ:
            if len(point):
                raise ArityMismatch("Z has no variables")
            return f.value
        raise UnsupportedRing(f"poly_eval_int needs a polynomial ring over Z, got {f.ring}")
    if len(point) != f.ring.nvars:
        raise ArityMismatch(f"expected {f.ring.nvars} coordinates, got {len(point)}")
    point = [int(a) for a in point]
    cache: dict[tuple[int, int], int] = {}
    total = 0
    for e, c in f._v.items():
        t = c
        for i, x in enumerate(e):
            if x:
                key = (i, x)
                v = cache.get(key)
                if v is None:
                    v = cache[key] = point[i] ** x
                t *= v
        total += t
    return total


def evaluate(f: RingElem, images: Sequence[RingElem | int], target: RingDescriptor) -> RingElem:
    """Ring homomorphism Z[vars] -> target sending the i-th variable to ``images[i]``.

    ``f`` may also be an integer-ring element (sent to its image in ``target``).
    """
    if not f.ring.torsion_free:
        raise UnsupportedRing("evaluation homomorphisms start from a ring over Z")
    imgs = [target.from_int(a) if isinstance(a, int) else a for a in images]
    for a in imgs:
        if a.ring != target:
            raise RingMismatch(f"image {a} is not in {target}")
    if not f.ring.is_poly:
        return target.from_int(f.value)
    if len(imgs) != f.ring.nvars:
        raise ArityMismatch(f"expected {f.ring.nvars} images, got {len(imgs)}")
    cache: dict[tuple[int, int], RingElem] = {}
    total = target.zero
    for e, c in f._v.items():
        t = target.from_int(c)
        for i, x in enumerate(e):
            if x:
                key = (i, x)
                v = cache.get(key)
                if v is None:
                    v = cache[key] = imgs[i] ** x
                t = t * v
        total = total + t
    return total
