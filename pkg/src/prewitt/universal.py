"""Universal Witt sum and Frobenius polynomials, with an on-disk cache.

For a prime p and length n the sum polynomials S_0..S_{n-1} live in
Z[X0..X{n-1}, Y0..Y{n-1}] and the Frobenius polynomials F_0..F_{n-2} in
Z[X0..X{n-1}].  They are produced by exact division,

    S_k = (w_k(X) + w_k(Y) - sum_{i<k} p^i S_i^(p^(k-i))) / p^k,

and analogously F_k from w_{k+1}(X).  A failed division can only mean a bug.

Cache files are ``univ-p{p}-n{n}.json`` under ``$WITT_CACHE_DIR`` (default
``.witt-cache``).  Loaded sets are checked against the ghost identities; a
file that fails the check is regenerated.
"""

from __future__ import annotations

import json
import logging
import os
import random
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .errors import InternalDivisionFailure, NotDivisible
from .rings import PolyRing, RingDescriptor, RingElem, exact_div_int, poly_eval_int

log = logging.getLogger(__name__)

_lock = threading.Lock()
_memo: dict[tuple[int, int], UniversalPolySet] = {}


def cache_dir() -> Path:
    return Path(os.environ.get("WITT_CACHE_DIR", ".witt-cache"))


def sum_ring(n: int) -> RingDescriptor:
    return PolyRing([f"X{i}" for i in range(n)] + [f"Y{i}" for i in range(n)])


def frob_ring(n: int) -> RingDescriptor:
    return PolyRing([f"X{i}" for i in range(n)])


def _ghost_polys(xs: Sequence[RingElem], p: int, count: int) -> list[RingElem]:
    out = []
    for k in range(count):
        w = xs[0] ** (p**k)
        for i in range(1, k + 1):
            w = w + (xs[i] ** (p ** (k - i))) * (p**i)
        out.append(w)
    return out


def _divide_out(targets: Sequence[RingElem], p: int) -> list[RingElem]:
    found: list[RingElem] = []
    towers: list[list[RingElem]] = []
    for k, target in enumerate(targets):
        num = target
        for i in range(k):
            tw = towers[i]
            while len(tw) <= k - i:
                tw.append(tw[-1] ** p)
            num = num - tw[k - i] * (p**i)
        try:
            q = exact_div_int(num, p**k) if k else num
        except NotDivisible:
            raise InternalDivisionFailure(f"universal polynomial {k} is not integral (p={p})") from None
        found.append(q)
        towers.append([q])
    return found


@dataclass(frozen=True)
class UniversalPolySet:
    p: int
    n: int
    sums: tuple[RingElem, ...]
    frobs: tuple[RingElem, ...]

    @property
    def sum_ring(self) -> RingDescriptor:
        return sum_ring(self.n)

    @property
    def frob_ring(self) -> RingDescriptor:
        return frob_ring(self.n)

    # -- evaluation ----------------------------------------------------------

    def evaluate_sums(self, xs: Sequence[RingElem], ys: Sequence[RingElem]) -> list[RingElem]:
        return _evaluate_all(self.sums, list(xs) + list(ys), xs[0].ring)

    def evaluate_frobs(self, xs: Sequence[RingElem]) -> list[RingElem]:
        return _evaluate_all(self.frobs, list(xs), xs[0].ring)

    # -- checks ---------------------------------------------------------------

    def check_symbolic(self) -> bool:
        """Both ghost identities as exact polynomial equalities."""
        p, n = self.p, self.n
        g = self.sum_ring.gens()
        wx = _ghost_polys(g[:n], p, n)
        wy = _ghost_polys(g[n:], p, n)
        ws = _ghost_polys(self.sums, p, n)
        if any(ws[k] != wx[k] + wy[k] for k in range(n)):
            return False
        if n < 2:
            return not self.frobs
        fx = _ghost_polys(frob_ring(n).gens(), p, n)
        wf = _ghost_polys(self.frobs, p, n - 1)
        return all(wf[k] == fx[k + 1] for k in range(n - 1))

    def check_points(self, trials: int = 4, seed: int = 0) -> bool:
        """Ghost identities at random integer points (exact integer arithmetic)."""
        p, n = self.p, self.n
        rng = random.Random(seed)
        for _ in range(trials):
            pt = [rng.randint(-5, 5) for _ in range(2 * n)]
            s = [poly_eval_int(f, pt) for f in self.sums]
            if _int_ghost(s, p) != [a + b for a, b in zip(_int_ghost(pt[:n], p), _int_ghost(pt[n:], p))]:
                return False
            if len(self.frobs) != max(n - 1, 0):
                return False
            if n >= 2:
                f = [poly_eval_int(q, pt[:n]) for q in self.frobs]
                if _int_ghost(f, p) != _int_ghost(pt[:n], p)[1:]:
                    return False
        return True

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "sums": [f.to_text() for f in self.sums],
            "frobs": [f.to_text() for f in self.frobs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> UniversalPolySet:
        p, n = int(obj["p"]), int(obj["n"])
        rs, rf = sum_ring(n), frob_ring(n)
        return cls(
            p,
            n,
            tuple(rs.parse(t) for t in obj["sums"]),
            tuple(rf.parse(t) for t in obj["frobs"]),
        )


def _int_ghost(xs: Sequence[int], p: int) -> list[int]:
    return [sum(p**i * xs[i] ** (p ** (k - i)) for i in range(k + 1)) for k in range(len(xs))]


def _evaluate_all(polys: Sequence[RingElem], images: Sequence[RingElem], target: RingDescriptor) -> list[RingElem]:
    if not target.is_poly:
        return _evaluate_scalar(polys, [a.value for a in images], target)
    # shared power cache across the whole family
    cache: dict[tuple[int, int], RingElem] = {}
    out = []
    for f in polys:
        total = target.zero
        for e, c in f.terms():
            t = target.from_int(c)
            for i, x in enumerate(e):
                if x:
                    v = cache.get((i, x))
                    if v is None:
                        v = cache[(i, x)] = images[i] ** x
                    t = t * v
            total = total + t
        out.append(total)
    return out


def _evaluate_scalar(polys: Sequence[RingElem], values: Sequence[int], target: RingDescriptor) -> list[RingElem]:
    m = target.modulus
    cache: dict[tuple[int, int], int] = {}
    out = []
    for f in polys:
        total = 0
        for e, c in f.coefficient_map().items():
            t = c
            for i, x in enumerate(e):
                if x:
                    v = cache.get((i, x))
                    if v is None:
                        v = cache[(i, x)] = pow(values[i], x, m) if m else values[i] ** x
                    t *= v
            total += t
        out.append(target.from_int(total))
    return out


def _generate(p: int, n: int) -> UniversalPolySet:
    rs = sum_ring(n)
    g = rs.gens()
    wx = _ghost_polys(g[:n], p, n)
    wy = _ghost_polys(g[n:], p, n)
    sums = _divide_out([a + b for a, b in zip(wx, wy)], p)
    frobs: list[RingElem] = []
    if n >= 2:
        fx = _ghost_polys(frob_ring(n).gens(), p, n)
        frobs = _divide_out(fx[1:], p)
    return UniversalPolySet(p, n, tuple(sums), tuple(frobs))


def _cache_path(p: int, n: int) -> Path:
    return cache_dir() / f"univ-p{p}-n{n}.json"


def _load(path: Path, p: int, n: int) -> UniversalPolySet | None:
    try:
        obj = json.loads(path.read_text())
        polys = UniversalPolySet.from_json(obj)
    except (OSError, ValueError, KeyError, TypeError):
        return None
    if polys.p != p or polys.n != n or len(polys.sums) != n or not polys.check_points():
        log.warning("universal polynomial cache %s failed verification; regenerating", path)
        return None
    return polys


def _store(path: Path, polys: UniversalPolySet):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump(polys.to_json(), fh)
        os.replace(tmp, path)
    except OSError as exc:  # an unwritable cache is not fatal
        log.warning("could not write universal polynomial cache %s: %s", path, exc)


def generate_universal_polys(p: int, n: int, use_cache: bool = True) -> UniversalPolySet:
    """The universal polynomial set for ``(p, n)``, from memory, disk, or scratch."""
    if p < 3 or n < 1:
        raise ValueError("need an odd prime p and n >= 1")
    key = (p, n)
    polys = _memo.get(key)
    if polys is not None:
        return polys
    with _lock:
        polys = _memo.get(key)
        if polys is not None:
            return polys
        path = _cache_path(p, n)
        if use_cache:
            polys = _load(path, p, n)
        if polys is None:
            polys = _generate(p, n)
            if not polys.check_points():
                raise InternalDivisionFailure(f"generated universal polynomials fail ghost identities (p={p}, n={n})")
            if use_cache:
                _store(path, polys)
        _memo[key] = polys
        return polys


def clear_memo():
    with _lock:
        _memo.clear()


__all__ = ["UniversalPolySet", "generate_universal_polys", "cache_dir", "sum_ring", "frob_ring"]
