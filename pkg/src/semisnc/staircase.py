"""Diagrams of initial exponents, local standard bases and Hilbert-Samuel functions.

The local order compares ``(|a|, a1, ..., an)`` lexicographically and the
initial exponent of a series is the *smallest* support element.  Standard
bases are computed with Mora's tangent-cone normal form (ecart strategy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import ceil, comb
from typing import Sequence

from .algebra import (
    DEFAULT_CAPS,
    CapExceeded,
    Caps,
    Ideal,
    Monomial,
    Poly,
    graded_key,
)

EQUAL, LESS, GREATER, INCOMPARABLE = "equal", "less", "greater", "incomparable"
DEFAULT_ORACLE_CAP = 8


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def minimal_monomials(monos) -> list[Monomial]:
    uniq = sorted(set(monos), key=graded_key)
    out: list[Monomial] = []
    for m in uniq:
        if not any(_divides(v, m) for v in out):
            out.append(m)
    return out


# -------------------------------------------------------------- staircase

@dataclass(frozen=True)
class Staircase:
    """Monomial diagram ``vertices + N^n`` given by its minimal vertex set."""

    n: int
    vertices: tuple[Monomial, ...]

    def __post_init__(self):
        verts = minimal_monomials(self.vertices)
        if any(len(v) != self.n for v in verts):
            raise ValueError("vertex length differs from dimension")
        object.__setattr__(self, "vertices", tuple(verts))

    def contains(self, alpha: Monomial) -> bool:
        return any(_divides(v, alpha) for v in self.vertices)

    def is_everything(self) -> bool:
        return any(not any(v) for v in self.vertices)

    def degrees(self) -> list[int]:
        return [sum(v) for v in self.vertices]

    def hilbert_function(self) -> "HilbertFunction":
        return hilbert_function(self)

    def dump(self, chart: Sequence[str] | None = None) -> list[str]:
        out = []
        for v in sorted(self.vertices, key=graded_key, reverse=True):
            if chart is None:
                out.append(str(list(v)))
            else:
                out.append(str(Poly.monomial(chart, v)))
        return out


# ------------------------------------------------------- Hilbert functions

def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_eval(c: list[Fraction], k: int) -> Fraction:
    v = Fraction(0)
    for a in reversed(c):
        v = v * k + a
    return v


def _trim(c: list[Fraction]) -> list[Fraction]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _binom_poly(shift: int, n: int) -> list[Fraction]:
    """Coefficients in ``k`` of ``binomial(k + shift, n)`` as a polynomial."""
    out = [Fraction(1)]
    for j in range(n):
        out = _poly_mul(out, [Fraction(shift - j), Fraction(1)])
    fact = Fraction(1)
    for j in range(2, n + 1):
        fact *= j
    return [c / fact for c in out]


@dataclass(frozen=True)
class HilbertFunction:
    """Exact eventually polynomial function ``N -> N``.

    ``prefix[k]`` holds the values for ``k < tail_start``; from ``tail_start``
    on the value is the polynomial ``tail`` (coefficients in increasing degree).
    """

    n: int
    prefix: tuple[int, ...]
    tail: tuple[Fraction, ...]
    tail_start: int
    staircase: Staircase | None = field(default=None, compare=False)

    def __call__(self, k: int) -> int:
        if k < 0:
            raise ValueError("negative argument")
        if k < self.tail_start:
            return self.prefix[k]
        v = _poly_eval(list(self.tail), k)
        if v.denominator != 1:
            raise ArithmeticError("tail polynomial produced a non-integer")
        return int(v)

    def values(self, upto: int) -> list[int]:
        return [self(k) for k in range(upto + 1)]

    def dump(self, upto: int = 5) -> list[str]:
        lines = [f"{k}: {self(k)}" for k in range(upto + 1)]
        lines.append(f"tail (k >= {self.tail_start}): {format_tail(self.tail)}")
        return lines


def format_tail(coeffs) -> str:
    coeffs = _trim(list(coeffs))
    if not coeffs:
        return "0"
    return str(Poly(("k",), {(i,): c for i, c in enumerate(coeffs)}))


@lru_cache(maxsize=65536)
def _numerator(gens: frozenset) -> tuple[tuple[int, int], ...]:
    """Hilbert series numerator of ``K[x]/(gens)`` as ``((degree, coeff), ...)``."""
    gens_l = minimal_monomials(gens)
    if not gens_l:
        return ((0, 1),)
    if any(not any(g) for g in gens_l):
        return ()
    # split off the last generator: N(I) = N(rest) - t^|g| N(rest : g)
    pivot = gens_l[-1]
    rest = gens_l[:-1]
    n1 = dict(_numerator(frozenset(rest)))
    quot = frozenset(tuple(max(a - b, 0) for a, b in zip(g, pivot)) for g in rest)
    n2 = _numerator(quot)
    d = sum(pivot)
    for deg, c in n2:
        n1[deg + d] = n1.get(deg + d, 0) - c
    return tuple(sorted((k, v) for k, v in n1.items() if v))


def hilbert_function(S: Staircase) -> HilbertFunction:
    """Exact Hilbert-Samuel function of the monomial diagram ``S``."""
    n = S.n
    num = _numerator(frozenset(S.vertices))
    tail = [Fraction(0)]
    for deg, c in num:
        b = _binom_poly(n - deg, n)
        if len(b) > len(tail):
            tail += [Fraction(0)] * (len(b) - len(tail))
        for i, v in enumerate(b):
            tail[i] += c * v
    top = max((deg for deg, _ in num), default=0)
    start = max(0, top - n)
    prefix = []
    for k in range(start):
        prefix.append(sum(c * comb(k - deg + n, n) for deg, c in num if deg <= k))
    return HilbertFunction(n, tuple(prefix), tuple(_trim(tail)), start, S)


def hpq(p: int, q: int, n: int) -> HilbertFunction:
    """Hilbert-Samuel function of ``(x1...xp, y1...yq)`` in ``n`` variables.

    ``q = 0`` stands for the principal ideal ``(x1...xp)``.
    """
    if p < 1 or q < 0 or p + q > n:
        raise ValueError(f"invalid parameters p={p}, q={q}, n={n}")
    xs = tuple(1 if i < p else 0 for i in range(n))
    verts = [xs]
    if q:
        verts.append(tuple(1 if p <= i < p + q else 0 for i in range(n)))
    return hilbert_function(Staircase(n, tuple(verts)))


def support_hs(p: int, q: int, n: int) -> HilbertFunction:
    """Function of ``Supp D`` expected at a semi-snc point of the stratum ``(p, q)``.

    For ``q >= 1`` this is ``hpq``; for ``q = 0`` the divisor is empty near the
    point, the ideal is the unit ideal and the function vanishes identically.
    """
    if q == 0:
        if p < 1 or p > n:
            raise ValueError(f"invalid parameters p={p}, q={q}, n={n}")
        return hilbert_function(Staircase(n, ((0,) * n,)))
    return hpq(p, q, n)


def _cauchy_bound(c: list[Fraction]) -> int:
    lead = c[-1]
    return 1 + int(ceil(max((abs(x / lead) for x in c[:-1]), default=Fraction(0))))


def compare_hs(H1: HilbertFunction, H2: HilbertFunction) -> str:
    """Exact comparison over all ``k`` in the partial order of pointwise domination."""
    if H1.n != H2.n:
        raise ValueError("Hilbert functions live in different dimensions")
    start = max(H1.tail_start, H2.tail_start)
    diff = _trim([a - b for a, b in _zip_pad(H1.tail, H2.tail)])
    upto = start
    if diff:
        upto = max(start, _cauchy_bound(diff))
    ge = le = True
    for k in range(upto + 1):
        a, b = H1(k), H2(k)
        ge &= a >= b
        le &= a <= b
    if diff:
        if diff[-1] > 0:
            le = False
        else:
            ge = False
    if ge and le:
        return EQUAL
    if ge:
        return GREATER
    if le:
        return LESS
    return INCOMPARABLE


def _zip_pad(a, b):
    m = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (m - len(a))
    b = list(b) + [Fraction(0)] * (m - len(b))
    return zip(a, b)


# --------------------------------------------------- Mora standard bases

def _lm(f: dict) -> Monomial:
    return min(f, key=graded_key)


def _ecart(f: dict, lm: Monomial) -> int:
    return max(sum(m) for m in f) - sum(lm)


def _sub_multiple(h: dict, g: dict, t: Monomial, c: Fraction) -> dict:
    h = dict(h)
    for m, v in g.items():
        mm = tuple(a + b for a, b in zip(m, t))
        s = h.get(mm, 0) - c * v
        if s:
            h[mm] = s
        else:
            h.pop(mm, None)
    return h


def _mora_nf(f: dict, basis: list[dict], caps: Caps) -> dict:
    """Weak normal form of ``f`` with respect to ``basis`` in the local order."""
    h = dict(f)
    T = [(g, _lm(g), _ecart(g, _lm(g))) for g in basis]
    while h:
        lmh = _lm(h)
        best = None
        for g, lm, e in T:
            if _divides(lm, lmh) and (best is None or e < best[2]):
                best = (g, lm, e)
        if best is None:
            break
        g, lm, eg = best
        eh = _ecart(h, lmh)
        if eg > eh:
            T.append((h, lmh, eh))
        t = tuple(a - b for a, b in zip(lmh, lm))
        h = _sub_multiple(h, g, t, h[lmh] / g[lm])
        if h:
            deg = max(sum(m) for m in h)
            if deg > caps.max_degree:
                raise CapExceeded("degree", caps.max_degree, deg)
    return h


def _monic_local(f: dict) -> dict:
    c = f[_lm(f)]
    return {m: v / c for m, v in f.items()}


def _spoly_local(f: dict, g: dict) -> dict:
    lf, lg = _lm(f), _lm(g)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    tf = tuple(a - b for a, b in zip(lcm, lf))
    tg = tuple(a - b for a, b in zip(lcm, lg))
    out: dict[Monomial, Fraction] = {}
    for m, v in f.items():
        out[tuple(a + b for a, b in zip(m, tf))] = v / f[lf]
    for m, v in g.items():
        mm = tuple(a + b for a, b in zip(m, tg))
        s = out.get(mm, 0) - v / g[lg]
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    return out


def _mora_basis(polys: list[dict], caps: Caps) -> list[dict]:
    G = [_monic_local(p) for p in polys if p]
    if any(not any(_lm(g)) for g in G):
        return G
    pairs = [(i, j) for i in range(len(G)) for j in range(i + 1, len(G))]
    while pairs:
        pairs.sort(key=lambda ij: graded_key(tuple(max(a, b) for a, b in zip(_lm(G[ij[0]]), _lm(G[ij[1]])))))
        i, j = pairs.pop(0)
        li, lj = _lm(G[i]), _lm(G[j])
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        h = _mora_nf(_spoly_local(G[i], G[j]), G, caps)
        if h:
            G.append(_monic_local(h))
            if len(G) > caps.max_basis:
                raise CapExceeded("basis size", caps.max_basis, len(G))
            if not any(_lm(h)):
                return G
            k = len(G) - 1
            pairs.extend((a, k) for a in range(k))
    return G


@lru_cache(maxsize=4096)
def _local_basis_cached(I: Ideal, point: tuple, caps: Caps) -> tuple:
    J = I.translate(point)
    return tuple(_mora_basis([dict(g.terms) for g in J.gens], caps))


def standard_basis_local(I: Ideal, point: Sequence | None = None,
                         caps: Caps = DEFAULT_CAPS) -> tuple[Ideal, Staircase]:
    """Local standard basis of ``I`` at ``point`` and the diagram of initial exponents.

    The basis is returned in coordinates centred at ``point``.
    """
    n = len(I.chart)
    point = tuple(Fraction(v) for v in (point if point is not None else (0,) * n))
    if len(point) != n:
        raise ValueError("point dimension does not match chart")
    G = _local_basis_cached(I, point, caps)
    basis = Ideal(I.chart, [Poly(I.chart, g) for g in G])
    return basis, Staircase(n, tuple(minimal_monomials(_lm(g) for g in G)))


def local_normal_form(f: Poly, I: Ideal, point: Sequence | None = None,
                      caps: Caps = DEFAULT_CAPS) -> Poly:
    """Mora normal form of ``f`` at ``point`` (in centred coordinates)."""
    n = len(I.chart)
    point = tuple(Fraction(v) for v in (point if point is not None else (0,) * n))
    G = list(_local_basis_cached(I, point, caps))
    g = f.translate(point)
    return Poly(I.chart, _mora_nf(dict(g.terms), G, caps))


def diagram(I: Ideal, point: Sequence | None = None, caps: Caps = DEFAULT_CAPS) -> Staircase:
    return standard_basis_local(I, point, caps)[1]


def hilbert_of_ideal(I: Ideal, point: Sequence | None = None, caps: Caps = DEFAULT_CAPS) -> HilbertFunction:
    return hilbert_function(diagram(I, point, caps))


# ---------------------------------------------------------------- oracle

def brute_force_hs(I: Ideal, point: Sequence | None, k: int, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """``dim K[x]/(I + m^(k+1))`` at ``point`` by linear algebra on monomials of degree <= k.

    Deliberately independent of the standard-basis machinery.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k > cap:
        raise CapExceeded("oracle degree", cap, k)
    n = len(I.chart)
    point = tuple(point) if point is not None else (0,) * n
    gens = [g.translate(point) for g in I.gens]
    monos = []
    for d in range(k + 1):
        for combo in combinations_with_replacement(range(n), d):
            m = [0] * n
            for i in combo:
                m[i] += 1
            monos.append(tuple(m))
    index = {m: i for i, m in enumerate(monos)}
    pivots: dict[int, dict[int, Fraction]] = {}
    for g in gens:
        low = g.order()
        for m in monos:
            if sum(m) + low > k:
                continue
            row = {}
            for gm, c in g.terms.items():
                mm = tuple(a + b for a, b in zip(gm, m))
                if sum(mm) <= k:
                    row[index[mm]] = c
            _eliminate_into(pivots, row)
    return len(monos) - len(pivots)


def _eliminate_into(pivots: dict[int, dict[int, Fraction]], row: dict[int, Fraction]) -> None:
    row = dict(row)
    while row:
        col = min(row)
        if col in pivots:
            piv = pivots[col]
            c = row[col]
            for j, v in piv.items():
                s = row.get(j, 0) - c * v
                if s:
                    row[j] = s
                else:
                    row.pop(j, None)
        else:
            c = row[col]
            pivots[col] = {j: v / c for j, v in row.items()}
            return
