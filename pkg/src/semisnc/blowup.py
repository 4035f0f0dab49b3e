"""Blow-ups along coordinate subspaces: chart maps, strict transforms, scene transforms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import DEFAULT_CAPS, Caps, ChartMismatch, Ideal, Poly, saturation
from .scene import DComponent, EComponent, Scene


class AdmissibilityError(ValueError):
    pass


@dataclass(frozen=True)
class CenterSpec:
    coords: tuple[str, ...]

    def __post_init__(self):
        if not self.coords:
            raise ValueError("a center needs at least one coordinate")
        if len(set(self.coords)) != len(self.coords):
            raise ValueError("repeated coordinate in center")

    @classmethod
    def of(cls, chart: Sequence[str], names) -> "CenterSpec":
        names = set(names)
        unknown = names - set(chart)
        if unknown:
            raise ChartMismatch(f"unknown center coordinates {sorted(unknown)}")
        return cls(tuple(v for v in chart if v in names))

    def contains_point(self, chart: Sequence[str], a: Sequence) -> bool:
        return all(a[list(chart).index(v)] == 0 for v in self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(self.coords) + ")"


@dataclass(frozen=True)
class ChartMap:
    parent: tuple[str, ...]
    child: tuple[str, ...]
    chart_coord: str
    exceptional: str
    substitution: tuple[tuple[str, Poly], ...]

    @property
    def mapping(self) -> dict[str, Poly]:
        return dict(self.substitution)

    def apply(self, f: Poly) -> Poly:
        if f.chart != self.parent:
            raise ChartMismatch("polynomial is not in the parent chart")
        return f.substitute(self.mapping, self.child)

    def exceptional_var(self) -> Poly:
        return Poly.var(self.child, self.exceptional)

    def to_json(self) -> dict:
        return {"chart": self.chart_coord,
                "exceptional": self.exceptional,
                "substitution": {k: str(v) for k, v in self.substitution}}


def blow_up_chart(chart: Sequence[str], center: CenterSpec, exceptional: str = "e1",
                  rename: dict[str, str] | None = None) -> list[ChartMap]:
    """One chart map per center coordinate, in center order.

    In the ``c``-chart the coordinate ``c`` is renamed ``exceptional`` and every
    other center coordinate ``c'`` pulls back to ``exceptional * c'``.
    """
    chart = tuple(chart)
    for v in center.coords:
        if v not in chart:
            raise ChartMismatch(f"unknown center coordinate {v!r}")
    rename = dict(rename or {})
    out = []
    for c in center.coords:
        child = tuple(exceptional if v == c else rename.get(v, v) for v in chart)
        if len(set(child)) != len(child):
            raise ValueError(f"exceptional name {exceptional!r} clashes with the chart")
        u = Poly.var(child, exceptional)
        subst = []
        for v in chart:
            if v == c:
                subst.append((v, u))
            elif v in center.coords:
                subst.append((v, u * Poly.var(child, rename.get(v, v))))
            elif rename.get(v, v) != v:
                subst.append((v, Poly.var(child, rename[v])))
        out.append(ChartMap(chart, child, c, exceptional, tuple(subst)))
    return out


def strict_transform(f: Poly, m: ChartMap) -> tuple[Poly, int]:
    """``f o sigma = u^d * f'`` with ``f'`` not divisible by the exceptional ``u``."""
    if f.is_zero():
        raise ValueError("strict transform of the zero polynomial")
    g = m.apply(f)
    i = m.child.index(m.exceptional)
    d = g.monomial_content()[i]
    mono = tuple(d if k == i else 0 for k in range(len(m.child)))
    fp = g.div_monomial(mono)
    assert fp.mul_monomial(mono) == g
    return fp, d


def strict_transform_ideal(I: Ideal, m: ChartMap, fast: bool = True, caps: Caps = DEFAULT_CAPS) -> Ideal:
    """Saturation of the pulled-back ideal by the exceptional coordinate.

    Principal ideals and ideals ``(x_i, f)`` take a generator-wise fast path.
    """
    if fast:
        gens = I.gens
        if len(gens) == 1:
            return Ideal(m.child, [strict_transform(gens[0], m)[0]])
        if len(gens) == 2:
            for k in (0, 1):
                xi = gens[k].as_monomial()
                if xi is not None and sum(xi) == 1 and gens[k].terms[xi] == 1:
                    name = I.chart[xi.index(1)]
                    if name == m.chart_coord:
                        return Ideal.unit(m.child)
                    fbar = gens[1 - k].restrict(name)
                    if fbar.is_zero():
                        break
                    fp = strict_transform(fbar, m)[0]
                    return Ideal(m.child, [Poly.var(m.child, name), fp])
    pulled = [m.apply(g) for g in I.gens]
    return saturation(Ideal(m.child, [g for g in pulled if not g.is_zero()]), m.exceptional_var(), caps)


def check_admissible(center: CenterSpec, s: Scene, allow_codim_one: bool = False) -> bool:
    """Coordinate subspaces are smooth and snc with every coordinate hyperplane."""
    if any(v not in s.coords for v in center.coords):
        return False
    return allow_codim_one or len(center.coords) >= 2


def _preimage(a: Sequence[Fraction], s: Scene, center: CenterSpec, m: ChartMap):
    idx = {v: s.pos(v) for v in center.coords}
    if all(a[i] == 0 for i in idx.values()):
        return tuple(Fraction(0) if v in center.coords else a[k] for k, v in enumerate(s.coords))
    ac = a[idx[m.chart_coord]]
    if ac == 0:
        return None
    out = []
    for k, v in enumerate(s.coords):
        if v == m.chart_coord:
            out.append(ac)
        elif v in center.coords:
            out.append(a[k] / ac)
        else:
            out.append(a[k])
    return tuple(out)


def default_exceptional(s: Scene) -> str:
    k = 1
    while f"e{k}" in s.coords:
        k += 1
    return f"e{k}"


def transform_scene(s: Scene, center: CenterSpec, exceptional: str | None = None,
                    allow_codim_one: bool = False) -> list[tuple[ChartMap, Scene]]:
    """Strict transforms of X, D and E in every chart, plus the new exceptional component."""
    if not check_admissible(center, s, allow_codim_one):
        raise AdmissibilityError(f"center {center} is not admissible")
    exceptional = exceptional or default_exceptional(s)
    out = []
    for m in blow_up_chart(s.coords, center, exceptional):
        c = m.chart_coord
        keep = [i for i, x in enumerate(s.X) if x != c]
        new_index = {old: new for new, old in enumerate(keep)}
        X = tuple(s.X[i] for i in keep)
        D = []
        for comp in s.D:
            if any(h not in new_index for h in comp.hosts()):
                continue
            if comp.pair_host:
                D.append(DComponent((new_index[comp.host[0]], new_index[comp.host[1]]), (), comp.mult))
                continue
            factors = []
            for fbar in s.restricted_factors(comp):
                fp, _ = strict_transform(fbar, m)
                if not fp.is_constant() and fp not in factors:
                    factors.append(fp)
            if factors:
                D.append(DComponent(new_index[comp.host], tuple(factors), comp.mult))
        E = tuple(e for e in s.E if e.name != c) + (EComponent(exceptional, f"blowup {center}"),)
        probes = {(Fraction(0),) * len(m.child)}
        for a in s.probes:
            b = _preimage(a, s, center, m)
            if b is not None:
                probes.add(b)
        child = Scene(m.child, X, tuple(D), E, ())
        child = Scene(m.child, X, tuple(D), E, tuple(sorted(p for p in probes if child.on_X(p))))
        out.append((m, child))
    return out
