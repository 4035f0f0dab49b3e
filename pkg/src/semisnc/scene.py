"""Triples ``(X, D, E)`` on one affine chart, strata and the stratum order.

X-components are coordinate hyperplanes ``x_i = 0``.  A D-component lives on
one host ``X_i`` (or, before singular-locus removal, on a pair of hosts) and
is given by its declared irreducible factors and a rational multiplicity.
E-components are coordinate hyperplanes with an origin tag.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import reduce
from itertools import combinations, product
from math import isqrt
from typing import Iterable, Sequence

from .algebra import ParseError, Poly, format_rational, parse_poly
from .staircase import GREATER, HilbertFunction, compare_hs, support_hs

SCENE_VERSION = 1
Point = tuple[Fraction, ...]


class SceneError(ValueError):
    """Malformed scene data (bad JSON shape, unknown names, unparsable polynomials)."""


@dataclass(frozen=True)
class DComponent:
    host: int | tuple[int, int]
    factors: tuple[Poly, ...]
    mult: Fraction = Fraction(1)
    poly: Poly | None = None

    @property
    def pair_host(self) -> bool:
        return isinstance(self.host, tuple)

    def hosts(self) -> tuple[int, ...]:
        return self.host if isinstance(self.host, tuple) else (self.host,)


@dataclass(frozen=True)
class EComponent:
    name: str
    origin: str


@dataclass(frozen=True)
class StratumLabel:
    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 0:
            raise ValueError(f"invalid stratum label ({self.p}, {self.q})")

    def __iter__(self):
        return iter((self.p, self.q))

    def __lt__(self, other: "StratumLabel") -> bool:
        return (self.p, self.q) < (other.p, other.q)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class LocalComponent:
    """A D- or E-component through a point, seen on one host."""

    host: int
    poly: Poly
    mult: Fraction
    kind: str
    label: str


@dataclass(frozen=True)
class Scene:
    coords: tuple[str, ...]
    X: tuple[str, ...]
    D: tuple[DComponent, ...] = ()
    E: tuple[EComponent, ...] = ()
    probes: tuple[Point, ...] = ()
    _restricted: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    # ------------------------------------------------------------ basics
    @property
    def n(self) -> int:
        return len(self.coords)

    def pos(self, name: str) -> int:
        return self.coords.index(name)

    def var(self, name: str) -> Poly:
        return Poly.var(self.coords, name)

    def origin(self) -> Point:
        return (Fraction(0),) * self.n

    def on_X(self, a: Sequence) -> bool:
        return any(a[self.pos(x)] == 0 for x in self.X)

    def x_through(self, a: Sequence) -> list[int]:
        return [i for i, x in enumerate(self.X) if a[self.pos(x)] == 0]

    def restricted_factors(self, comp: DComponent) -> tuple[Poly, ...]:
        """Factors with the host coordinate set to zero (their trace on the host)."""
        key = id(comp)
        hit = self._restricted.get(key)
        if hit is not None and hit[0] is comp:
            return hit[1]
        if comp.pair_host:
            out = tuple(comp.factors)
        else:
            out = tuple(f.restrict(self.X[comp.host]) for f in comp.factors)
        self._restricted[key] = (comp, out)
        return out

    def components_at(self, a: Sequence, include_E: bool = True,
                      hosts: Iterable[int] | None = None) -> dict[int, list[LocalComponent]]:
        """Components through ``a`` grouped by host, in host order."""
        through = self.x_through(a) if hosts is None else list(hosts)
        out: dict[int, list[LocalComponent]] = {i: [] for i in through}
        for ci, comp in enumerate(self.D):
            if comp.pair_host or comp.host not in out:
                continue
            for fi, f in enumerate(self.restricted_factors(comp)):
                if f.evaluate(a) == 0 and all(f != c.poly for c in out[comp.host]):
                    out[comp.host].append(LocalComponent(comp.host, f, comp.mult, "D", f"D{ci}.{fi}"))
        if include_E:
            for e in self.E:
                if a[self.pos(e.name)] == 0:
                    for i in out:
                        out[i].append(LocalComponent(i, self.var(e.name), Fraction(1), "E", e.name))
        return out

    # ------------------------------------------------------------ views
    def truncated(self, k: int) -> "Scene":
        """``X^k`` with ``D^k``; the dropped X-components join E as boundary."""
        D = tuple(c for c in self.D if all(h < k for h in c.hosts()))
        E = self.E + tuple(EComponent(x, "boundary") for x in self.X[k:])
        return Scene(self.coords, self.X[:k], D, E, self.probes)

    def reduced(self) -> "Scene":
        return replace(self, D=tuple(replace(c, mult=Fraction(1)) for c in self.D),
                       _restricted={})

    def renamed(self, mapping: dict[str, str]) -> "Scene":
        def rn(v):
            return mapping.get(v, v)

        D = tuple(replace(c, factors=tuple(f.rename(mapping) for f in c.factors),
                          poly=c.poly.rename(mapping) if c.poly is not None else None)
                  for c in self.D)
        return Scene(tuple(rn(v) for v in self.coords), tuple(rn(v) for v in self.X), D,
                     tuple(EComponent(rn(e.name), e.origin) for e in self.E), self.probes)

    def with_dummy(self, name: str) -> "Scene":
        """Append an unused coordinate (probes get value 0 there)."""
        if name in self.coords:
            raise SceneError(f"coordinate {name!r} already present")
        coords = self.coords + (name,)
        D = tuple(replace(c, factors=tuple(f.rechart(coords) for f in c.factors),
                          poly=c.poly.rechart(coords) if c.poly is not None else None)
                  for c in self.D)
        probes = tuple(p + (Fraction(0),) for p in self.probes)
        return Scene(coords, self.X, D, self.E, probes)

    # ------------------------------------------------------------ IO
    def to_json(self) -> dict:
        D = []
        for c in self.D:
            rec = {"host": list(c.host) if c.pair_host else c.host,
                   "factors": [str(f) for f in c.factors],
                   "mult": format_rational(c.mult)}
            if c.poly is not None:
                rec["poly"] = str(c.poly)
            D.append(rec)
        return {
            "version": SCENE_VERSION,
            "coords": list(self.coords),
            "X": list(self.X),
            "D": D,
            "E": [{"name": e.name, "origin": e.origin} for e in self.E],
            "probes": [[format_rational(v) for v in p] for p in self.probes],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "Scene":
        if not isinstance(data, dict):
            raise SceneError("scene must be a JSON object")
        version = data.get("version", SCENE_VERSION)
        if version != SCENE_VERSION:
            raise SceneError(f"unsupported scene version {version!r}")
        coords = _names(data.get("coords"), "coords")
        X = _names(data.get("X", []), "X")
        D = []
        for i, rec in enumerate(data.get("D", [])):
            where = f"D[{i}]"
            if not isinstance(rec, dict):
                raise SceneError(f"{where}: expected an object")
            host = rec.get("host")
            if isinstance(host, list) and len(host) == 2 and all(isinstance(h, int) for h in host):
                host = (host[0], host[1])
            elif not isinstance(host, int) or isinstance(host, bool):
                raise SceneError(f"{where}: host must be an index or a pair of indices")
            factors = tuple(_parse(t, coords, f"{where}.factors[{j}]")
                            for j, t in enumerate(rec.get("factors", [])))
            poly = _parse(rec["poly"], coords, f"{where}.poly") if "poly" in rec else None
            D.append(DComponent(host, factors, _rational(rec.get("mult", "1"), f"{where}.mult"), poly))
        E = []
        for i, rec in enumerate(data.get("E", [])):
            if not isinstance(rec, dict) or not isinstance(rec.get("name"), str):
                raise SceneError(f"E[{i}]: expected {{name, origin}}")
            E.append(EComponent(rec["name"], str(rec.get("origin", ""))))
        probes = []
        for i, pt in enumerate(data.get("probes", [])):
            if not isinstance(pt, list) or len(pt) != len(coords):
                raise SceneError(f"probes[{i}]: expected {len(coords)} coordinates")
            probes.append(tuple(_rational(v, f"probes[{i}]") for v in pt))
        return cls(coords, X, tuple(D), tuple(E), tuple(probes))

    @classmethod
    def loads(cls, text: str) -> "Scene":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, exc.lineno, exc.colno) from None
        return cls.from_json(data)

    @classmethod
    def load(cls, path) -> "Scene":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read())

    def __hash__(self):
        return hash((self.coords, self.X, self.D, self.E, self.probes))


def _names(value, what: str) -> tuple[str, ...]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SceneError(f"{what}: expected a list of names")
    return tuple(value)


def _parse(text, coords, where: str) -> Poly:
    if not isinstance(text, str):
        raise SceneError(f"{where}: expected a polynomial string")
    try:
        return parse_poly(text, coords)
    except ParseError as exc:
        raise SceneError(f"{where}: {exc}") from None


def _rational(value, where: str) -> Fraction:
    try:
        if isinstance(value, bool):
            raise ValueError
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise SceneError(f"{where}: not a rational number: {value!r}") from None


# ---------------------------------------------------------------- validation

def _is_rational_square(r: Fraction) -> bool:
    if r < 0:
        return False
    a, b = r.numerator, r.denominator
    return isqrt(a) ** 2 == a and isqrt(b) ** 2 == b


def quadratic_is_reducible(f: Poly) -> bool:
    """Whether a degree-2 polynomial splits into two linear factors over Q."""
    used = [i for i in range(f.nvars) if any(m[i] for m in f.terms)]
    k = len(used) + 1
    M = [[Fraction(0)] * k for _ in range(k)]
    for m, c in f.terms.items():
        idx = [j for j, i in enumerate(used) for _ in range(m[i])]
        while len(idx) < 2:
            idx.append(k - 1)
        a, b = idx
        if a == b:
            M[a][a] += c
        else:
            M[a][b] += c / 2
            M[b][a] += c / 2
    diag = []
    for i in range(k):
        if M[i][i] == 0:
            for j in range(i + 1, k):
                if M[i][j] != 0:
                    s = 1 if M[i][i] + 2 * M[i][j] + M[j][j] != 0 else -1
                    for r in range(k):
                        M[i][r] += s * M[j][r]
                    for r in range(k):
                        M[r][i] += s * M[r][j]
                    break
        piv = M[i][i]
        if piv == 0:
            continue
        diag.append(piv)
        for j in range(i + 1, k):
            if M[j][i] != 0:
                t = M[j][i] / piv
                for r in range(i, k):
                    M[j][r] -= t * M[i][r]
                for r in range(i, k):
                    M[r][j] = M[j][r]
    if len(diag) <= 1:
        return True
    if len(diag) == 2:
        return _is_rational_square(-diag[0] / diag[1])
    return False


def validate_scene(s: Scene, allow_pair_hosts: bool = True) -> list[str]:
    out: list[str] = []
    if len(set(s.coords)) != len(s.coords):
        out.append("duplicate coordinate names")
    names = set(s.coords)
    if len(set(s.X)) != len(s.X):
        out.append("duplicate X-component names")
    for x in s.X:
        if x not in names:
            out.append(f"X-component {x!r} is not a coordinate")
    enames = [e.name for e in s.E]
    if len(set(enames)) != len(enames):
        out.append("duplicate E-component names")
    for e in enames:
        if e not in names:
            out.append(f"E-component {e!r} is not a coordinate")
        if e in s.X:
            out.append(f"E-component {e!r} is also an X-component")
    if out:
        return out
    m = len(s.X)
    for ci, c in enumerate(s.D):
        tag = f"D[{ci}]"
        if c.mult <= 0:
            out.append(f"{tag}: multiplicity must be positive")
        if any(not (0 <= h < m) for h in c.hosts()):
            out.append(f"{tag}: host index out of range")
            continue
        if c.pair_host:
            if not allow_pair_hosts:
                out.append(f"{tag}: component lies in the singular locus of X")
            if c.host[0] == c.host[1]:
                out.append(f"{tag}: pair host needs two distinct components")
            if c.factors:
                out.append(f"{tag}: a singular-locus component carries no factors")
            continue
        if not c.factors:
            out.append(f"{tag}: no factors")
            continue
        restricted = s.restricted_factors(c)
        for fi, (f, r) in enumerate(zip(c.factors, restricted)):
            if r.is_zero():
                out.append(f"{tag}.factors[{fi}]: factor in host ideal")
            elif r.is_constant():
                out.append(f"{tag}.factors[{fi}]: factor is a unit on the host")
            elif r.degree() == 2 and quadratic_is_reducible(r):
                out.append(f"{tag}.factors[{fi}]: factor is reducible")
        if len(set(restricted)) != len(restricted):
            out.append(f"{tag}: repeated factor")
        if c.poly is not None:
            prod = reduce(lambda a, b: a * b, c.factors)
            host = s.X[c.host]
            if prod.restrict(host) != c.poly.restrict(host):
                out.append(f"{tag}: factorization mismatch")
    for pi, p in enumerate(s.probes):
        if len(p) != s.n:
            out.append(f"probes[{pi}]: wrong dimension")
        elif not s.on_X(p):
            out.append(f"probes[{pi}]: point is not on X")
    return out


def scene_warnings(s: Scene) -> list[str]:
    out = []
    for ci, c in enumerate(s.D):
        if c.pair_host:
            continue
        for fi, r in enumerate(s.restricted_factors(c)):
            if r.degree() > 2:
                out.append(f"D[{ci}].factors[{fi}]: irreducibility of a degree-{r.degree()} factor is trusted")
    return out


# ---------------------------------------------------------------- strata

def stratum_at(s: Scene, a: Sequence) -> StratumLabel:
    """``(p, q)`` at ``a``: X-components through ``a`` and the minimal per-host D count."""
    if len(a) != s.n:
        raise ValueError("point dimension does not match chart")
    comps = s.components_at(a, include_E=False)
    if not comps:
        raise ValueError("point is not on X")
    return StratumLabel(len(comps), min(len(v) for v in comps.values()))


def delta(p: int) -> int:
    return 3 if p >= 3 else p


def stratum_order_key(label: StratumLabel, n: int) -> tuple[int, HilbertFunction]:
    p, q = label
    return delta(p), support_hs(p, q, n)


def precedes(a: StratumLabel, b: StratumLabel, n: int) -> bool:
    """Strict stratum order: ``(delta, H)`` of ``a`` lexicographically above that of ``b``."""
    da, ha = stratum_order_key(a, n)
    db, hb = stratum_order_key(b, n)
    if da != db:
        return da > db
    return compare_hs(ha, hb) == GREATER


def all_labels(n: int) -> list[StratumLabel]:
    return [StratumLabel(p, q) for p in range(1, n + 1) for q in range(0, n - p + 1)]


class MonotoneSet:
    """Up-closed set of labels, stored by generators and tested lazily."""

    def __init__(self, gens: Iterable[StratumLabel], n: int):
        self.n = n
        self.gens = tuple(sorted(set(gens)))

    def __contains__(self, x: StratumLabel) -> bool:
        return any(x == y or precedes(x, y, self.n) for y in self.gens)

    def members(self) -> list[StratumLabel]:
        return [x for x in all_labels(self.n) if x in self]

    def __eq__(self, other) -> bool:
        return isinstance(other, MonotoneSet) and self.n == other.n and self.members() == other.members()

    def __or__(self, other: "MonotoneSet") -> "MonotoneSet":
        return MonotoneSet(self.gens + other.gens, self.n)

    def __repr__(self) -> str:
        return "MonotoneSet{" + ", ".join(map(str, self.gens)) + "}"


def closure(labels: Iterable[StratumLabel], n: int) -> MonotoneSet:
    return MonotoneSet(labels, n)


def maximal_elements(labels: Iterable[StratumLabel], n: int) -> list[StratumLabel]:
    labels = sorted(set(labels))
    return [x for x in labels if not any(precedes(y, x, n) for y in labels if y != x)]


GRID_LIMIT = 10


def candidate_points(s: Scene) -> list[Point]:
    """Probe points plus the 0/1 grid on X (grid skipped above ``GRID_LIMIT`` coordinates)."""
    pts = set(probe_points(s))
    if s.n <= GRID_LIMIT:
        for v in product((Fraction(0), Fraction(1)), repeat=s.n):
            if s.on_X(v):
                pts.add(v)
    return sorted(pts)


def nonempty_strata(s: Scene) -> set[StratumLabel]:
    return {stratum_at(s, a) for a in candidate_points(s)}


def K_set(s: Scene, I: MonotoneSet | None = None) -> list[StratumLabel]:
    """Maximal nonempty strata outside ``I``, listed by ``(p, q)``."""
    present = [x for x in nonempty_strata(s) if I is None or x not in I]
    return maximal_elements(present, s.n)


# ---------------------------------------------------------------- probes

def _hyperplanes(s: Scene) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    out = []
    seen = set()

    def add(coef, const):
        lead = next((c for c in coef if c), None)
        if lead is None:
            return
        key = (tuple(c / lead for c in coef), const / lead)
        if key not in seen:
            seen.add(key)
            out.append(key)

    unit = [Fraction(0)] * s.n
    for name in list(s.X) + [e.name for e in s.E]:
        v = list(unit)
        v[s.pos(name)] = Fraction(1)
        add(tuple(v), Fraction(0))
    for c in s.D:
        cands = list(c.factors) + ([] if c.pair_host else list(s.restricted_factors(c)))
        for f in cands:
            if f.degree() != 1:
                continue
            v = list(unit)
            for name, coef in f.linear_part().items():
                v[s.pos(name)] = coef
            add(tuple(v), f.constant_term())
    return out


def _solve(rows: list[tuple[tuple[Fraction, ...], Fraction]], n: int, free_value: Fraction):
    """Solve ``coef . v + const = 0``; free coordinates take ``free_value``."""
    mat = [list(c) + [-k] for c, k in rows]
    piv_cols = []
    r = 0
    for col in range(n):
        pr = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        pv = mat[r][col]
        mat[r] = [v / pv for v in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                t = mat[i][col]
                mat[i] = [a - t * b for a, b in zip(mat[i], mat[r])]
        piv_cols.append(col)
        r += 1
    if any(all(v == 0 for v in row[:n]) and row[n] != 0 for row in mat):
        return None
    sol = [free_value] * n
    for i, col in enumerate(piv_cols):
        sol[col] = mat[i][n] - sum(mat[i][j] * free_value for j in range(n)
                                   if j != col and j not in piv_cols)
    return tuple(sol)


MAX_SUBSETS = 20000


def probe_points(s: Scene) -> list[Point]:
    """Deterministic certification locus: structural intersection points plus user probes."""
    planes = _hyperplanes(s)
    pts = {s.origin()}
    budget = MAX_SUBSETS
    for size in range(1, min(len(planes), s.n) + 1):
        for subset in combinations(planes, size):
            budget -= 1
            if budget < 0:
                break
            for fv in (Fraction(0), Fraction(1)):
                sol = _solve(list(subset), s.n, fv)
                if sol is not None:
                    pts.add(sol)
    pts.update(tuple(Fraction(v) for v in p) for p in s.probes)
    return sorted(p for p in pts if s.on_X(p))
