"""Semi-snc verdicts at rational points, the obstruction ideal J and factor rewriting."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .algebra import (
    DEFAULT_CAPS,
    AlgebraError,
    CapExceeded,
    Caps,
    Ideal,
    Poly,
    contains_unit_at,
    format_rational,
    ideal_intersection,
    ideal_quotient,
)
from .scene import LocalComponent, Scene, StratumLabel, stratum_at
from .staircase import EQUAL, compare_hs, hilbert_of_ideal, support_hs

SEMI_SNC = "semi-snc"
NOT_SEMI_SNC = "not-semi-snc"
OUT_OF_CLASS = "out-of-class"


class DetectorError(ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    point: tuple[Fraction, ...]
    answer: str
    stratum: StratumLabel
    failed_condition: str | None = None
    witness: dict | None = None
    certificate: str | None = None
    iota: tuple[int, int] | None = None
    J: Ideal | None = field(default=None, compare=False)

    @property
    def ok(self) -> bool:
        return self.answer == SEMI_SNC

    @property
    def reduced_ok(self) -> bool:
        return self.ok or self.failed_condition == "multiplicity"

    def to_json(self) -> dict:
        out = {"point": [format_rational(v) for v in self.point],
               "answer": self.answer,
               "stratum": [self.stratum.p, self.stratum.q]}
        if self.failed_condition is not None:
            out["failed_condition"] = self.failed_condition
        if self.witness is not None:
            out["witness"] = self.witness
        if self.certificate is not None:
            out["certificate"] = self.certificate
        return out


# ------------------------------------------------------------------ helpers

def _product(polys: Sequence[Poly], chart) -> Poly:
    return reduce(lambda a, b: a * b, polys, Poly.constant(chart, 1))


def _host_ideal(s: Scene, host: int, comps: list[LocalComponent]) -> Ideal | None:
    if not comps:
        return None
    return Ideal(s.coords, [s.var(s.X[host]), _product([c.poly for c in comps], s.coords)])


def support_ideal(s: Scene, comps: dict[int, list[LocalComponent]], caps: Caps = DEFAULT_CAPS) -> Ideal | None:
    """Ideal of the union of the given components (``None`` when there are none)."""
    parts = [I for h, cs in comps.items() if (I := _host_ideal(s, h, cs)) is not None]
    if not parts:
        return None
    return reduce(lambda a, b: ideal_intersection(a, b, caps), parts)


def _J_local(s: Scene, comps: dict[int, list[LocalComponent]], caps: Caps) -> Ideal:
    hosts = list(comps)
    last, rest = hosts[-1], hosts[:-1]
    unit = Ideal.unit(s.coords)
    num = _host_ideal(s, last, comps[last]) or unit
    num = num + Ideal(s.coords, [_product([s.var(s.X[h]) for h in rest], s.coords)])
    den = support_ideal(s, {h: comps[h] for h in rest}, caps) or unit
    den = den + Ideal(s.coords, [s.var(s.X[last])])
    return ideal_quotient(num, den, caps)


def compute_J(s: Scene, a: Sequence, caps: Caps = DEFAULT_CAPS, include_E: bool = True) -> Ideal:
    """``[I_{D_m} + I_{X^{m-1}} : I_{D^{m-1}} + I_{X_m}]`` for the components through ``a``.

    The last X-component through ``a`` plays the role of ``X_m``.
    """
    comps = s.components_at(a, include_E=include_E)
    if len(comps) < 2:
        raise DetectorError("J is not defined at a point on a single component")
    return _J_local(s, comps, caps)


def _linear_vector(s: Scene, f: Poly, a: Sequence) -> tuple[Fraction, ...]:
    lin = f.translate(a).linear_part()
    return tuple(lin.get(v, Fraction(0)) for v in s.coords)


def _rank(rows: list[tuple[Fraction, ...]]) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pr = next((i for i in range(rank, len(mat)) if mat[i][col] != 0), None)
        if pr is None:
            continue
        mat[rank], mat[pr] = mat[pr], mat[rank]
        for i in range(rank + 1, len(mat)):
            if mat[i][col] != 0:
                t = mat[i][col] / mat[rank][col]
                mat[i] = [x - t * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def _snc_on_host(s: Scene, host: int, comps: list[LocalComponent], a: Sequence):
    """Smoothness plus transversality of ``comps`` (and the host) at ``a``."""
    rows = [_linear_vector(s, s.var(s.X[host]), a)]
    for c in comps:
        v = _linear_vector(s, c.poly, a)
        if not any(v):
            return False, {"singular": str(c.poly)}
        rows.append(v)
    if _rank(rows) < len(rows):
        return False, {"dependent": [str(c.poly) for c in comps]}
    return True, None


def is_snc_at(s: Scene, a: Sequence, include_E: bool = True) -> bool:
    comps = s.components_at(a, include_E=include_E)
    if len(comps) != 1:
        raise DetectorError("snc test needs a point on exactly one X-component")
    (host, cs), = comps.items()
    return _snc_on_host(s, host, cs, a)[0]


# ------------------------------------------------------------------ verdict

def _reduced_check(s: Scene, a: Sequence, comps: dict[int, list[LocalComponent]], caps: Caps):
    """Inductive characterization on the local ordering of the hosts through ``a``.

    Returns ``(failed_condition, witness, J)`` with ``failed_condition`` None on success.
    """
    hosts = list(comps)
    if len(hosts) == 1:
        ok, wit = _snc_on_host(s, hosts[0], comps[hosts[0]], a)
        return (None, None, None) if ok else ("snc", wit, None)
    inner = {h: comps[h] for h in hosts[:-1]}
    failed, wit, _ = _reduced_check(s, a, inner, caps)
    if failed is not None:
        return "1", {"inner": failed, **({"detail": wit} if wit else {})}, None
    p = len(hosts)
    q = min(len(cs) for cs in comps.values())
    if p + q > s.n:
        return "2", {"reason": "stratum does not fit the chart", "p": p, "q": q}, None
    supp = support_ideal(s, comps, caps)
    expected = support_hs(p, q, s.n)
    if supp is None:
        actual = expected
    else:
        actual = hilbert_of_ideal(supp, a, caps)
    if compare_hs(actual, expected) != EQUAL:
        return "2", {"H": actual.values(6), "expected": expected.values(6),
                     "support": str(supp.groebner(caps=caps)) if supp else "(1)"}, None
    J = _J_local(s, comps, caps)
    if not contains_unit_at(J, a, caps):
        return "3", {"J": str(J)}, J
    return None, None, J


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            self.parent[max(ri, rj)] = min(ri, rj)


def _proportional(u, v) -> bool:
    if not any(u) or not any(v):
        return False
    i = next(k for k, x in enumerate(u) if x)
    if not v[i]:
        return False
    r = v[i] / u[i]
    return all(y == r * x for x, y in zip(u, v))


def equivalence_classes(s: Scene, a: Sequence, comps: dict[int, list[LocalComponent]]) -> list[list[LocalComponent]]:
    """Group D-components through ``a`` that share their trace on a double locus."""
    flat = [c for cs in comps.values() for c in cs if c.kind == "D"]
    vecs = [_linear_vector(s, c.poly, a) for c in flat]
    uf = _UnionFind(len(flat))
    for i in range(len(flat)):
        for j in range(i + 1, len(flat)):
            hi, hj = flat[i].host, flat[j].host
            if hi == hj:
                continue
            drop = {s.pos(s.X[hi]), s.pos(s.X[hj])}
            u = tuple(x for k, x in enumerate(vecs[i]) if k not in drop)
            v = tuple(x for k, x in enumerate(vecs[j]) if k not in drop)
            if _proportional(u, v):
                uf.union(i, j)
    groups: dict[int, list[LocalComponent]] = {}
    for i, c in enumerate(flat):
        groups.setdefault(uf.find(i), []).append(c)
    return [groups[k] for k in sorted(groups)]


def iota_at(s: Scene, a: Sequence) -> tuple[int, int]:
    comps = s.components_at(a, include_E=False)
    return len(comps), len(equivalence_classes(s, a, comps))


def is_semisnc_at(s: Scene, a: Sequence, caps: Caps = DEFAULT_CAPS) -> Verdict:
    """Verdict for the triple (D and E together) at ``a``; multiplicities checked last."""
    a = tuple(Fraction(v) for v in a)
    label = stratum_at(s, a)
    for ci, c in enumerate(s.D):
        if c.pair_host and all(a[s.pos(s.X[h])] == 0 for h in c.host):
            wit = {"component": f"D{ci}", "hosts": [s.X[h] for h in c.host]}
            return Verdict(a, NOT_SEMI_SNC, label, "singular-locus", wit)
    comps = s.components_at(a)
    try:
        failed, wit, J = _reduced_check(s, a, comps, caps)
    except (CapExceeded, AlgebraError) as exc:
        return Verdict(a, OUT_OF_CLASS, label, None, {"reason": str(exc)})
    if failed is not None:
        return Verdict(a, NOT_SEMI_SNC, label, failed, wit, J=J)
    d_comps = {h: [c for c in cs if c.kind == "D"] for h, cs in comps.items()}
    classes = equivalence_classes(s, a, d_comps)
    iota = (len(comps), len(classes))
    for cls in classes:
        mults = sorted({c.mult for c in cls})
        if len(mults) > 1:
            wit = {"class": [f"{s.X[c.host]}: {c.poly}" for c in cls],
                   "multiplicities": [format_rational(m) for m in mults]}
            return Verdict(a, NOT_SEMI_SNC, label, "multiplicity", wit, iota=iota, J=J)
    cert = "snc" if len(comps) == 1 else "conditions 1-3"
    return Verdict(a, SEMI_SNC, label, certificate=cert, iota=iota, J=J)


# ------------------------------------------------------------------ rewriting

@dataclass(frozen=True)
class FactorPresentation:
    g1: Poly
    g2: Poly
    association: tuple[str | None, ...]
    rewritten: tuple[Poly, ...]
    g2_in_parameter_ideal: bool


def _in_monomial_ideal(f: Poly, idx: Sequence[int]) -> bool:
    return all(any(m[i] for i in idx) for m in f.terms)


def _split(f: Poly, i: int) -> tuple[Poly, Poly]:
    """``f = v_i * m + a`` with no term of ``a`` divisible by ``v_i``."""
    unit = tuple(1 if k == i else 0 for k in range(f.nvars))
    div = Poly(f.chart, {m: c for m, c in f.terms.items() if m[i]})
    rest = f - div
    return div.div_monomial(unit), rest


def _content_in(f: Poly, idx: Sequence[int]) -> tuple[int, ...]:
    g = f.monomial_content()
    return tuple(e if k in idx else 0 for k, e in enumerate(g))


def normalize_factorization(factors: Sequence[Poly], p: int, q: int,
                            coords: Sequence[str]) -> FactorPresentation:
    """Write ``prod(factors) = x1...x_{p-1} g1 + y1...yq g2``.

    ``coords[:p]`` are ``x1..xp`` and ``coords[p:p+q]`` are ``y1..yq``; the
    factors are grouped by association and rewritten until every pair
    ``(i, j)`` satisfies the star condition.
    """
    coords = tuple(coords)
    if p < 3:
        raise DetectorError("normalize_factorization requires p>=3")
    if not factors:
        raise DetectorError("no factors given")
    xs = list(range(p - 1))
    ys = list(range(p, p + q))
    for h in factors:
        if h.chart != coords:
            raise DetectorError("factor chart differs from coords")
        if h.order() != 1:
            raise DetectorError(f"factor {h} does not have order 1")
    f = _product(list(factors), coords)
    X = Poly.monomial(coords, tuple(1 if k in xs else 0 for k in range(len(coords))))
    Y = Poly.monomial(coords, tuple(1 if k in ys else 0 for k in range(len(coords))))
    xmono, ymono = X.as_monomial(), Y.as_monomial()
    g1_terms, g2_terms = {}, {}
    for m, c in f.terms.items():
        if all(e >= d for e, d in zip(m, xmono)):
            g1_terms[tuple(e - d for e, d in zip(m, xmono))] = c
        elif all(e >= d for e, d in zip(m, ymono)):
            g2_terms[tuple(e - d for e, d in zip(m, ymono))] = c
        else:
            raise DetectorError("product is not in (x1...x_{p-1}, y1...yq)")

    association: list[str | None] = []
    x_groups: dict[int, list[Poly]] = {}
    y_groups: dict[int, list[Poly]] = {}
    rest: list[Poly] = []
    for h in factors:
        lin = {coords.index(v): c for v, c in h.linear_part().items()}
        tag = None
        if len(lin) == 1 and next(iter(lin)) in ys:
            j = next(iter(lin))
            tag = coords[j]
            y_groups.setdefault(j, []).append(h)
        else:
            owners = sorted({i for i in xs for j in ys if _in_monomial_ideal(h, (i, j))})
            if len(owners) > 1:
                raise DetectorError(f"factor {h} is associated to two x-coordinates")
            if owners:
                tag = coords[owners[0]]
                x_groups.setdefault(owners[0], []).append(h)
            else:
                rest.append(h)
        association.append(tag)

    one = Poly.constant(coords, 1)
    ms, as_ = {}, {}
    for i in xs:
        ms[i], as_[i] = _split(_product(x_groups.get(i, []), coords), i)
    rs = sorted(y_groups)
    ns, bs = {}, {}
    for j in rs:
        ns[j], bs[j] = _split(_product(y_groups[j], coords), j)

    def var(k):
        return Poly.var(coords, coords[k])

    # pairs in reverse-lexicographic order: the last index varies slowest
    for j in ys:
        for i in xs:
            if _in_monomial_ideal(as_[i], (j,)) or as_[i].is_zero():
                continue
            if j in rs and (bs[j].is_zero() or _in_monomial_ideal(bs[j], (i,))):
                continue
            if _in_monomial_ideal(as_[i], (i, j)):
                ycont = _content_in(as_[i], ys)
                a = as_[i].div_monomial(ycont)
                g_1, g_2 = _split(a, i)
                g_2 = g_2.div_monomial(tuple(1 if k == j else 0 for k in range(len(coords))))
                ymon = Poly.monomial(coords, ycont)
                ms[i] = ms[i] + ymon * g_1
                as_[i] = ymon * var(j) * g_2
            elif j in rs and _in_monomial_ideal(bs[j], (i, j)):
                xcont = _content_in(bs[j], xs)
                b = bs[j].div_monomial(xcont)
                g_1, g_2 = _split(b, i)
                g_2 = g_2.div_monomial(tuple(1 if k == j else 0 for k in range(len(coords))))
                xmon = Poly.monomial(coords, xcont)
                ns[j] = ns[j] + xmon * g_2
                bs[j] = var(i) * xmon * g_1
            else:
                raise DetectorError(f"star condition cannot be restored at ({coords[i]}, {coords[j]})")

    rewritten = [var(i) * ms[i] + as_[i] for i in xs if x_groups.get(i)]
    rewritten += [var(j) * ns[j] + bs[j] for j in rs]
    if rest:
        rewritten.append(_product(rest, coords))
    g1 = Poly(coords, g1_terms)
    g2 = Poly(coords, g2_terms)
    if _product(rewritten, coords) != X * g1 + Y * g2:
        raise DetectorError("rewritten factors do not reproduce the product")
    in_param = g2.is_zero() or _in_monomial_ideal(g2, xs + ys)
    return FactorPresentation(g1, g2, tuple(association), tuple(rewritten), in_param)
