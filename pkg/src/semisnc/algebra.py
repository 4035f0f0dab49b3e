"""Exact polynomials and ideals over the rationals in named coordinates.

Polynomials are immutable maps from exponent tuples to nonzero
``Fraction`` coefficients.  Every polynomial carries its chart, the tuple of
coordinate names, and binary operations refuse to mix charts.

The global term order is graded, ties broken lexicographically on
``(a1, ..., an)``; the leading term is the largest one.  Ideal operations
(intersection, quotient, saturation) are built on a reduced Buchberger basis
with an auxiliary elimination variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence

Monomial = tuple[int, ...]
Chart = tuple[str, ...]

DEFAULT_MAX_DEGREE = 32
DEFAULT_MAX_BASIS = 4096


class AlgebraError(Exception):
    """Base class for algebra failures."""


class ChartMismatch(AlgebraError):
    pass


class CapExceeded(AlgebraError):
    """Raised when a computation would exceed a configured size guard."""

    def __init__(self, what: str, limit: int, value: int):
        super().__init__(f"{what} cap exceeded: {value} > {limit}")
        self.what = what
        self.limit = limit
        self.value = value


class InconsistencyError(AlgebraError):
    """An exactness check failed; the computation must not continue."""


@dataclass(frozen=True)
class Caps:
    max_degree: int = DEFAULT_MAX_DEGREE
    max_basis: int = DEFAULT_MAX_BASIS


DEFAULT_CAPS = Caps()


# ---------------------------------------------------------------- orders

def graded_key(m: Monomial) -> tuple:
    return (sum(m), m)


def elimination_key(k: int) -> Callable[[Monomial], tuple]:
    """Block order: the first ``k`` coordinates dominate, graded inside each block."""

    def key(m: Monomial) -> tuple:
        head, tail = m[:k], m[k:]
        return (sum(head), head, sum(tail), tail)

    return key


# ------------------------------------------------------------ polynomials

def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_div(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x - y for x, y in zip(a, b))


def _mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


class Poly:
    __slots__ = ("chart", "terms", "_hash")

    def __init__(self, chart: Sequence[str], terms: Mapping[Monomial, object] | None = None):
        self.chart: Chart = tuple(chart)
        n = len(self.chart)
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            if len(mono) != n:
                raise ValueError("exponent length does not match chart dimension")
            if any(e < 0 for e in mono):
                raise ValueError("negative exponent")
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = clean.get(tuple(mono), Fraction(0)) + c
        self.terms: dict[Monomial, Fraction] = {m: c for m, c in clean.items() if c}
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, chart: Sequence[str], c) -> "Poly":
        return cls(chart, {(0,) * len(chart): c})

    @classmethod
    def var(cls, chart: Sequence[str], name: str) -> "Poly":
        chart = tuple(chart)
        if name not in chart:
            raise ChartMismatch(f"unknown coordinate {name!r}")
        mono = tuple(1 if v == name else 0 for v in chart)
        return cls(chart, {mono: 1})

    @classmethod
    def monomial(cls, chart: Sequence[str], mono: Monomial, c=1) -> "Poly":
        return cls(chart, {tuple(mono): c})

    @classmethod
    def _raw(cls, chart: Chart, terms: dict) -> "Poly":
        p = object.__new__(cls)
        p.chart = chart
        p.terms = terms
        p._hash = None
        return p

    # basic queries
    @property
    def nvars(self) -> int:
        return len(self.chart)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree of a term (the order at the origin)."""
        return min((sum(m) for m in self.terms), default=-1)

    def support(self) -> list[Monomial]:
        return sorted(self.terms, key=graded_key, reverse=True)

    def exp(self) -> Monomial:
        """Initial exponent: the smallest support element in the graded order."""
        if not self.terms:
            raise ValueError("zero polynomial has no initial exponent")
        return min(self.terms, key=graded_key)

    def initial_monomial(self) -> "Poly":
        m = self.exp()
        return Poly._raw(self.chart, {m: self.terms[m]})

    def leading_monomial(self, key=graded_key) -> Monomial:
        return max(self.terms, key=key)

    def leading_coefficient(self, key=graded_key) -> Fraction:
        return self.terms[self.leading_monomial(key)]

    def variables(self) -> list[str]:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return [self.chart[i] for i in sorted(used)]

    def homogeneous_part(self, d: int) -> "Poly":
        return Poly._raw(self.chart, {m: c for m, c in self.terms.items() if sum(m) == d})

    def linear_part(self) -> dict[str, Fraction]:
        out = {}
        for m, c in self.terms.items():
            if sum(m) == 1:
                out[self.chart[m.index(1)]] = c
        return out

    def truncate(self, k: int) -> "Poly":
        return Poly._raw(self.chart, {m: c for m, c in self.terms.items() if sum(m) <= k})

    def as_monomial(self) -> Monomial | None:
        if len(self.terms) == 1:
            return next(iter(self.terms))
        return None

    def monic(self, key=graded_key) -> "Poly":
        if not self.terms:
            return self
        lc = self.leading_coefficient(key)
        return self.scale(1 / lc)

    # arithmetic
    def _check(self, other: "Poly") -> None:
        if self.chart != other.chart:
            raise ChartMismatch(f"chart mismatch: {self.chart} vs {other.chart}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.constant(self.chart, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Poly._raw(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.chart, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                s = terms.get(m, 0) + c1 * c2
                if s:
                    terms[m] = s
                else:
                    terms.pop(m, None)
        return Poly._raw(self.chart, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Poly.constant(self.chart, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly._raw(self.chart, {})
        return Poly._raw(self.chart, {m: v * c for m, v in self.terms.items()})

    def mul_monomial(self, mono: Monomial, c=1) -> "Poly":
        c = Fraction(c)
        return Poly._raw(self.chart, {_mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.constant(self.chart, other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # evaluation and substitution
    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError("point dimension does not match chart")
        pt = [Fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v *= x ** e
            total += v
        return total

    def substitute(self, mapping: Mapping[str, "Poly"], target: Sequence[str] | None = None) -> "Poly":
        """Ring homomorphism sending each coordinate to its image.

        Coordinates absent from ``mapping`` are sent to the coordinate of the
        same name in ``target`` (default: this chart).
        """
        target = tuple(target) if target is not None else self.chart
        images = []
        for name in self.chart:
            if name in mapping:
                img = mapping[name]
                if img.chart != target:
                    raise ChartMismatch("substitution image lives in another chart")
            elif name in target:
                img = Poly.var(target, name)
            else:
                img = None
            images.append(img)
        powers: dict[tuple[int, int], Poly] = {}

        def power(i: int, e: int) -> Poly:
            if (i, e) not in powers:
                if images[i] is None:
                    raise ChartMismatch(f"coordinate {self.chart[i]!r} has no image")
                powers[(i, e)] = images[i] ** e
            return powers[(i, e)]

        result = Poly(target)
        for m, c in self.terms.items():
            t = Poly.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    t = t * power(i, e)
            result = result + t
        return result

    def translate(self, point: Sequence) -> "Poly":
        """Rewrite in coordinates centred at ``point`` (so the point becomes the origin)."""
        mapping = {}
        for name, v in zip(self.chart, point):
            v = Fraction(v)
            if v:
                mapping[name] = Poly.var(self.chart, name) + v
        if not mapping:
            return self
        return self.substitute(mapping)

    def restrict(self, name: str, value=0) -> "Poly":
        """Set one coordinate to a constant."""
        i = self.chart.index(name)
        value = Fraction(value)
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            e = m[i]
            if e and not value:
                continue
            c = c * value ** e if e else c
            mm = m[:i] + (0,) + m[i + 1:]
            s = terms.get(mm, 0) + c
            if s:
                terms[mm] = s
            else:
                terms.pop(mm, None)
        return Poly._raw(self.chart, terms)

    def rechart(self, chart: Sequence[str]) -> "Poly":
        """Same polynomial expressed in a chart that contains all used coordinates."""
        chart = tuple(chart)
        idx = []
        for v in self.chart:
            idx.append(chart.index(v) if v in chart else None)
        terms = {}
        for m, c in self.terms.items():
            new = [0] * len(chart)
            for i, e in enumerate(m):
                if e:
                    if idx[i] is None:
                        raise ChartMismatch(f"coordinate {self.chart[i]!r} missing from target chart")
                    new[idx[i]] = e
            terms[tuple(new)] = c
        return Poly._raw(chart, terms)

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        return Poly._raw(tuple(mapping.get(v, v) for v in self.chart), dict(self.terms))

    def monomial_content(self) -> Monomial:
        """Largest monomial dividing every term."""
        if not self.terms:
            return (0,) * self.nvars
        it = iter(self.terms)
        g = list(next(it))
        for m in it:
            g = [min(a, b) for a, b in zip(g, m)]
        return tuple(g)

    def div_monomial(self, mono: Monomial) -> "Poly":
        out = {}
        for m, c in self.terms.items():
            if not _mono_divides(mono, m):
                raise InconsistencyError("monomial does not divide polynomial")
            out[_mono_div(m, mono)] = c
        return Poly._raw(self.chart, out)

    def exact_div(self, other: "Poly") -> "Poly":
        """Exact quotient; raises ``InconsistencyError`` if ``other`` does not divide."""
        self._check(other)
        if not other.terms:
            raise ZeroDivisionError("division by zero polynomial")
        lm = other.leading_monomial()
        lc = other.terms[lm]
        q: dict[Monomial, Fraction] = {}
        r = Poly._raw(self.chart, dict(self.terms))
        while r.terms:
            m = r.leading_monomial()
            if not _mono_divides(lm, m):
                raise InconsistencyError("exact division failed")
            t = _mono_div(m, lm)
            c = r.terms[m] / lc
            q[t] = c
            r = r - other.mul_monomial(t, c)
        return Poly._raw(self.chart, q)

    def divides(self, other: "Poly") -> bool:
        try:
            other.exact_div(self)
        except InconsistencyError:
            return False
        return True

    # text
    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def format_poly(f: Poly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for m in f.support():
        c = f.terms[m]
        names = []
        for name, e in zip(f.chart, m):
            if e == 1:
                names.append(name)
            elif e > 1:
                names.append(f"{name}^{e}")
        mono = "*".join(names)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if not mono:
            body = _format_rational(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_format_rational(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def _format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_rational(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


# ------------------------------------------------------------------ parser

class ParseError(AlgebraError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.message = message
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<num>\d+(?:\s*/\s*\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^(),])"
)


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", *_position(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.text = text
        self.chart = chart
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg: str, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, *_position(self.text, tok[2]))

    def expect(self, value: str):
        tok = self.take()
        if tok[1] != value:
            self.fail(f"expected {value!r}", tok)

    def expr(self) -> Poly:
        sign = 1
        tok = self.peek()
        if tok[1] in "+-" and tok[0] == "op":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        result = self.term().scale(sign)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            result = result + t if op == "+" else result - t
        return result

    def term(self) -> Poly:
        result = self.factor()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            result = result * self.factor()
        return result

    def factor(self) -> Poly:
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            self.take()
            tok = self.take()
            if tok[0] != "num" or "/" in tok[1]:
                self.fail("exponent must be a non-negative integer", tok)
            base = base ** int(tok[1])
        return base

    def atom(self) -> Poly:
        tok = self.take()
        kind, value, _ = tok
        if kind == "num":
            num, _, den = value.partition("/")
            if den and int(den) == 0:
                self.fail("zero denominator", tok)
            return Poly.constant(self.chart, Fraction(int(num), int(den) if den else 1))
        if kind == "id":
            if value not in self.chart:
                self.fail(f"unknown coordinate {value!r}", tok)
            return Poly.var(self.chart, value)
        if value == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        if value == "-":
            return -self.factor()
        self.fail(f"unexpected token {value!r}" if value else "unexpected end of input", tok)


def parse_poly(text: str, chart: Sequence[str]) -> Poly:
    """Parse a polynomial in the canonical grammar over ``chart``."""
    p = _Parser(text, tuple(chart))
    if p.peek()[0] == "end":
        p.fail("empty polynomial")
    result = p.expr()
    if p.peek()[0] != "end":
        p.fail(f"unexpected token {p.peek()[1]!r}")
    return result


def parse_poly_list(text: str, chart: Sequence[str]) -> list[Poly]:
    """Parse a comma separated generator list, e.g. ``"x1*x2, y"``."""
    p = _Parser(text, tuple(chart))
    out = [p.expr()]
    while p.peek()[1] == "," and p.peek()[0] == "op":
        p.take()
        out.append(p.expr())
    if p.peek()[0] != "end":
        p.fail(f"unexpected token {p.peek()[1]!r}")
    return out


def ring_ops(f: Poly, g: Poly, kind: str) -> Poly:
    if kind == "add":
        return f + g
    if kind == "mul":
        return f * g
    raise ValueError(f"unknown operation {kind!r}")


def substitute(f: Poly, mapping: Mapping[str, Poly], target: Sequence[str] | None = None) -> Poly:
    return f.substitute(mapping, target)


# ----------------------------------------------------------- Buchberger

def _lead(terms: dict, key) -> Monomial:
    return max(terms, key=key)


def _reduce_full(f: dict, basis: list[tuple[Monomial, dict]], key) -> dict:
    """Full reduction of ``f`` modulo monic polynomials with known leads."""
    f = dict(f)
    rem: dict[Monomial, Fraction] = {}
    while f:
        m = _lead(f, key)
        c = f[m]
        for lm, g in basis:
            if _mono_divides(lm, m):
                t = _mono_div(m, lm)
                for gm, gc in g.items():
                    mm = _mono_mul(gm, t)
                    s = f.get(mm, 0) - c * gc
                    if s:
                        f[mm] = s
                    else:
                        f.pop(mm, None)
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def _monic(f: dict, key) -> dict:
    lc = f[_lead(f, key)]
    if lc == 1:
        return f
    return {m: c / lc for m, c in f.items()}


def _spoly(f: dict, lf: Monomial, g: dict, lg: Monomial) -> dict:
    lcm = _mono_lcm(lf, lg)
    tf = _mono_div(lcm, lf)
    tg = _mono_div(lcm, lg)
    out: dict[Monomial, Fraction] = {}
    for m, c in f.items():
        out[_mono_mul(m, tf)] = c
    for m, c in g.items():
        mm = _mono_mul(m, tg)
        s = out.get(mm, 0) - c
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    return out


def buchberger(polys: Iterable[dict], n: int, key, caps: Caps = DEFAULT_CAPS) -> list[dict]:
    """Reduced Groebner basis of monic dict polynomials for the order ``key``."""
    basis: list[tuple[Monomial, dict]] = []
    pairs: list[tuple[int, int]] = []
    gens = [p for p in polys if p]
    for f in gens:
        r = _reduce_full(f, basis, key)
        if r:
            _insert(basis, pairs, _monic(r, key), key, caps)
    while pairs:
        pairs.sort(key=lambda ij: key(_mono_lcm(basis[ij[0]][0], basis[ij[1]][0])))
        i, j = pairs.pop(0)
        li, fi = basis[i]
        lj, fj = basis[j]
        if fi is None or fj is None:
            continue
        live = [(lm, g) for lm, g in basis if g is not None]
        r = _reduce_full(_spoly(fi, li, fj, lj), live, key)
        if r:
            _insert(basis, pairs, _monic(r, key), key, caps)
    live = [(lm, g) for lm, g in basis if g is not None]
    # minimalise then interreduce
    minimal = []
    for idx, (lm, g) in enumerate(live):
        if any(_mono_divides(lm2, lm) and (lm2 != lm or idx2 < idx)
               for idx2, (lm2, _) in enumerate(live) if idx2 != idx):
            continue
        minimal.append((lm, g))
    reduced = []
    for idx, (lm, g) in enumerate(minimal):
        others = [b for k, b in enumerate(minimal) if k != idx]
        tail = {m: c for m, c in g.items() if m != lm}
        rt = _reduce_full(tail, others, key)
        rt[lm] = Fraction(1)
        reduced.append(rt)
    # low degree first, then the larger monomial first: (x1, x2, z^2)
    reduced.sort(key=lambda p: (sum(_lead(p, key)), tuple(-e for e in _lead(p, key))))
    return reduced


def _insert(basis, pairs, f: dict, key, caps: Caps) -> None:
    deg = max(sum(m) for m in f)
    if deg > caps.max_degree:
        raise CapExceeded("degree", caps.max_degree, deg)
    lf = _lead(f, key)
    new = len(basis)
    if new + 1 > caps.max_basis:
        raise CapExceeded("basis size", caps.max_basis, new + 1)
    # Gebauer-Moeller style pruning: chain criterion on pending pairs
    kept = []
    for i, j in pairs:
        li, lj = basis[i][0], basis[j][0]
        lij = _mono_lcm(li, lj)
        if (_mono_divides(lf, lij) and _mono_lcm(li, lf) != lij and _mono_lcm(lj, lf) != lij):
            continue
        kept.append((i, j))
    pairs[:] = kept
    basis.append((lf, f))
    candidates = []
    for i, (li, g) in enumerate(basis[:-1]):
        if g is None:
            continue
        candidates.append((i, _mono_lcm(li, lf)))
    # drop pairs whose lcm is a proper multiple of another new lcm
    chosen = []
    for i, lcm in candidates:
        if any(_mono_divides(l2, lcm) and l2 != lcm for _, l2 in candidates):
            continue
        if any(l2 == lcm for _, l2 in chosen):
            continue
        chosen.append((i, lcm))
    for i, lcm in chosen:
        li = basis[i][0]
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(li, lf)):
            continue
        pairs.append((i, new))


# ----------------------------------------------------------------- ideals

class Ideal:
    """A finitely generated ideal with a nonempty list of nonzero generators."""

    __slots__ = ("chart", "gens", "_hash")

    def __init__(self, chart: Sequence[str], gens: Iterable[Poly]):
        self.chart: Chart = tuple(chart)
        out: list[Poly] = []
        for g in gens:
            if not isinstance(g, Poly):
                raise TypeError("generators must be polynomials")
            if g.chart != self.chart:
                raise ChartMismatch("generator chart differs from ideal chart")
            if g.is_zero():
                raise ValueError("zero polynomial is not allowed as a generator")
            if g not in out:
                out.append(g)
        if not out:
            raise ValueError("an ideal presentation needs at least one generator")
        self.gens: tuple[Poly, ...] = tuple(out)
        self._hash = None

    @classmethod
    def parse(cls, text: str, chart: Sequence[str]) -> "Ideal":
        return cls(chart, parse_poly_list(text, chart))

    @classmethod
    def unit(cls, chart: Sequence[str]) -> "Ideal":
        return cls(chart, [Poly.constant(chart, 1)])

    @classmethod
    def of_coordinates(cls, chart: Sequence[str], names: Iterable[str]) -> "Ideal":
        return cls(chart, [Poly.var(chart, v) for v in names])

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.chart == other.chart and set(self.gens) == set(other.gens)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.chart, frozenset(self.gens)))
        return self._hash

    def __iter__(self):
        return iter(self.gens)

    def __len__(self):
        return len(self.gens)

    def __str__(self):
        return "(" + ", ".join(str(g) for g in self.gens) + ")"

    def __repr__(self):
        return f"Ideal{self}"

    def _check(self, other: "Ideal"):
        if self.chart != other.chart:
            raise ChartMismatch(f"chart mismatch: {self.chart} vs {other.chart}")

    # combination
    def __add__(self, other: "Ideal") -> "Ideal":
        return ideal_combine(self, other, "sum")

    def __mul__(self, other: "Ideal") -> "Ideal":
        return ideal_combine(self, other, "product")

    # bases and membership
    def groebner(self, order: str = "graded", caps: Caps = DEFAULT_CAPS) -> "Ideal":
        return groebner_basis_global(self, order, caps=caps)

    def contains(self, f: Poly, caps: Caps = DEFAULT_CAPS) -> bool:
        if f.chart != self.chart:
            raise ChartMismatch("polynomial chart differs from ideal chart")
        if f.is_zero():
            return True
        basis = _graded_basis(self, caps)
        lead = [(_lead(g, graded_key), g) for g in basis]
        return not _reduce_full(f.terms, lead, graded_key)

    def contains_ideal(self, other: "Ideal", caps: Caps = DEFAULT_CAPS) -> bool:
        self._check(other)
        return all(self.contains(g, caps) for g in other.gens)

    def same_as(self, other: "Ideal", caps: Caps = DEFAULT_CAPS) -> bool:
        """Equality of ideals by mutual membership."""
        return self.contains_ideal(other, caps) and other.contains_ideal(self, caps)

    def is_unit(self, caps: Caps = DEFAULT_CAPS) -> bool:
        return self.contains(Poly.constant(self.chart, 1), caps)

    def normal_form(self, f: Poly, caps: Caps = DEFAULT_CAPS) -> Poly:
        basis = _graded_basis(self, caps)
        lead = [(_lead(g, graded_key), g) for g in basis]
        return Poly._raw(self.chart, _reduce_full(f.terms, lead, graded_key))

    def translate(self, point: Sequence) -> "Ideal":
        return Ideal(self.chart, [g.translate(point) for g in self.gens])

    def substitute(self, mapping: Mapping[str, Poly], target: Sequence[str]) -> "Ideal":
        images = [g.substitute(mapping, target) for g in self.gens]
        images = [g for g in images if not g.is_zero()]
        if not images:
            raise ValueError("substitution killed every generator")
        return Ideal(target, images)


@lru_cache(maxsize=8192)
def _cached_basis(chart: Chart, gens: frozenset, order: str, caps: Caps) -> tuple:
    n = len(chart)
    key = graded_key
    polys = [dict(g.terms) for g in sorted(gens, key=lambda g: format_poly(g))]
    polys = [_monic(p, key) for p in polys]
    return tuple(buchberger(polys, n, key, caps))


def _graded_basis(I: Ideal, caps: Caps) -> tuple:
    return _cached_basis(I.chart, frozenset(I.gens), "graded", caps)


def ideal_combine(I: Ideal, J: Ideal, kind: str) -> Ideal:
    I._check(J)
    if kind == "sum":
        return Ideal(I.chart, list(I.gens) + list(J.gens))
    if kind == "product":
        return Ideal(I.chart, [f * g for f in I.gens for g in J.gens])
    raise ValueError(f"unknown combination {kind!r}")


def groebner_basis_global(I: Ideal, order: str = "graded", prefix: int = 0,
                          caps: Caps = DEFAULT_CAPS) -> Ideal:
    """Reduced Groebner basis.

    ``order`` is ``"graded"`` or ``"elimination"``; the latter treats the
    first ``prefix`` coordinates as a dominating block.
    """
    if order == "graded":
        basis = _graded_basis(I, caps)
    elif order == "elimination":
        key = elimination_key(prefix)
        polys = [_monic(dict(g.terms), key) for g in I.gens]
        basis = buchberger(polys, len(I.chart), key, caps)
    else:
        raise ValueError(f"unknown order {order!r}")
    return Ideal(I.chart, [Poly._raw(I.chart, dict(b)) for b in basis])


_AUX = "_t"


def _aux_name(chart: Chart) -> str:
    name = _AUX
    while name in chart:
        name += "_"
    return name


def _eliminate_first(polys: list[Poly], chart: Chart, caps: Caps) -> list[Poly]:
    """Given polynomials in ``(aux,) + chart``, return a basis of the aux-free part."""
    key = elimination_key(1)
    basis = buchberger([_monic(dict(p.terms), key) for p in polys if p], len(chart) + 1, key, caps)
    out = []
    for b in basis:
        if all(m[0] == 0 for m in b):
            out.append(Poly._raw(chart, {m[1:]: c for m, c in b.items()}))
    return out


def ideal_intersection(I: Ideal, J: Ideal, caps: Caps = DEFAULT_CAPS) -> Ideal:
    I._check(J)
    return _intersection_cached(I, J, caps)


@lru_cache(maxsize=4096)
def _intersection_cached(I: Ideal, J: Ideal, caps: Caps) -> Ideal:
    chart = I.chart
    t = _aux_name(chart)
    big = (t,) + chart
    tv = Poly.var(big, t)
    polys = [tv * g.rechart(big) for g in I.gens]
    polys += [(1 - tv) * g.rechart(big) for g in J.gens]
    out = _eliminate_first(polys, chart, caps)
    if not out:
        raise InconsistencyError("intersection of nonzero ideals came out zero")
    return Ideal(chart, out)


def quotient_by_element(I: Ideal, g: Poly, caps: Caps = DEFAULT_CAPS) -> Ideal:
    """``[I : g]`` computed as ``(I intersect (g)) / g`` with an exact division check."""
    if g.is_zero():
        raise ValueError("quotient by zero")
    inter = ideal_intersection(I, Ideal(I.chart, [g]), caps)
    return Ideal(I.chart, [h.exact_div(g) for h in inter.gens])


def ideal_quotient(I: Ideal, J: Ideal, caps: Caps = DEFAULT_CAPS) -> Ideal:
    I._check(J)
    return _quotient_cached(I, J, caps)


@lru_cache(maxsize=4096)
def _quotient_cached(I: Ideal, J: Ideal, caps: Caps) -> Ideal:
    result: Ideal | None = None
    for g in J.gens:
        part = quotient_by_element(I, g, caps)
        result = part if result is None else ideal_intersection(result, part, caps)
    return groebner_basis_global(result, caps=caps)


def saturation(I: Ideal, g: Poly, caps: Caps = DEFAULT_CAPS) -> Ideal:
    """``[I : g^infinity]`` via the auxiliary relation ``t*g - 1``."""
    chart = I.chart
    t = _aux_name(chart)
    big = (t,) + chart
    tv = Poly.var(big, t)
    polys = [h.rechart(big) for h in I.gens] + [tv * g.rechart(big) - 1]
    out = _eliminate_first(polys, chart, caps)
    if not out:
        raise InconsistencyError("saturation came out zero")
    return Ideal(chart, out)


def contains_unit_at(I: Ideal, point: Sequence, caps: Caps = DEFAULT_CAPS) -> bool:
    """True iff the localisation of ``I`` at ``point`` is the whole local ring."""
    if len(point) != len(I.chart):
        raise ValueError("point dimension does not match chart")
    if any(g.evaluate(point) != 0 for g in I.gens):
        return True
    from .staircase import standard_basis_local

    basis, diagram = standard_basis_local(I, point, caps=caps)
    return diagram.is_everything()


def local_member(f: Poly, I: Ideal, point: Sequence, caps: Caps = DEFAULT_CAPS) -> bool:
    """Membership of ``f`` in the localisation of ``I`` at ``point``."""
    from .staircase import local_normal_form

    return local_normal_form(f, I, point, caps=caps).is_zero()


def monomial_in_coordinates(chart: Sequence[str], exps: Mapping[str, int]) -> Poly:
    chart = tuple(chart)
    return Poly.monomial(chart, tuple(exps.get(v, 0) for v in chart))


def coordinate_set_of(I: Ideal, caps: Caps = DEFAULT_CAPS) -> list[str] | None:
    """If the radical of ``I`` is generated by coordinates, return them in chart order.

    Accepts ideals whose reduced basis consists of pure powers of single
    coordinates; returns ``None`` otherwise.
    """
    basis = groebner_basis_global(I, caps=caps)
    names = set()
    for g in basis.gens:
        m = g.as_monomial()
        if m is None or sum(1 for e in m if e) != 1:
            return None
        names.add(I.chart[next(i for i, e in enumerate(m) if e)])
    return [v for v in I.chart if v in names]


def pairwise(it):
    return combinations(it, 2)
