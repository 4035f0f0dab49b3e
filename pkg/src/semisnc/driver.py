"""Resolution driver: repeatedly pick a coordinate center and blow it up until
every probe point of every leaf chart is semi-snc.

Centers are chosen from probe data only.  Whenever the local shape falls
outside the restricted class handled here, a Diagnostic is returned in place of a
guessed center and the run stops with the partial tree kept.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain
from typing import Sequence

from .algebra import DEFAULT_CAPS, AlgebraError, Caps, CapExceeded, Ideal, coordinate_set_of, format_rational
from .blowup import AdmissibilityError, CenterSpec, ChartMap, transform_scene
from .detector import OUT_OF_CLASS, Verdict, compute_J, is_semisnc_at
from .scene import Scene, StratumLabel, delta, maximal_elements, probe_points, stratum_at

NEEDS_LOG_RESOLUTION = "needs-general-log-resolution"
NEEDS_DESING_INVARIANT = "needs-general-desing-invariant"
CAP_EXCEEDED = "cap-exceeded"
FACTORIZATION_NEEDED = "factorization-needed"


@dataclass
class Limits:
    max_blowups: int = 256
    max_depth: int = 32
    caps: Caps = DEFAULT_CAPS


@dataclass(frozen=True)
class Diagnostic:
    phase: str
    reason: str
    location: str
    message: str = ""

    def to_json(self) -> dict:
        return {"phase": self.phase, "reason": self.reason,
                "location": self.location, "message": self.message}


@dataclass(frozen=True)
class Selection:
    center: CenterSpec
    phase: str
    point: tuple[Fraction, ...]
    measures: dict
    allow_codim_one: bool = False


@dataclass
class DriverState:
    """Per-phase measures seen along one root-to-node path."""

    phase: str | None = None
    measure: object = None
    history: tuple = ()

    def advanced(self, phase: str, measure) -> "DriverState":
        return DriverState(phase, measure, self.history + ((phase, measure),))


@dataclass
class BlowupNode:
    scene: Scene
    path: str
    depth: int
    verdicts: list[Verdict] = field(default_factory=list)
    center: CenterSpec | None = None
    phase: str | None = None
    measures: dict = field(default_factory=dict)
    children: list[tuple[ChartMap, "BlowupNode"]] = field(default_factory=list)
    diagnostic: Diagnostic | None = None
    state: DriverState = field(default_factory=DriverState, repr=False)

    def nodes(self):
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed([c for _, c in node.children]))

    def leaves(self) -> list["BlowupNode"]:
        return [n for n in self.nodes() if not n.children]

    def blowups(self) -> int:
        return sum(1 for n in self.nodes() if n.children)

    def height(self) -> int:
        return max(n.depth for n in self.nodes())

    def to_json(self) -> dict:
        out = {"path": self.path,
               "depth": self.depth,
               "scene": self.scene.to_json(),
               "verdicts": [v.to_json() for v in self.verdicts]}
        if self.center is not None:
            out["center"] = list(self.center.coords)
            out["phase"] = self.phase
            out["measures"] = self.measures
        if self.diagnostic is not None:
            out["diagnostic"] = self.diagnostic.to_json()
        out["children"] = [{"map": m.to_json(), "node": c.to_json()} for m, c in self.children]
        return out


@dataclass
class Certification:
    certified: bool
    blowups: int
    leaves: int
    depth: int
    failures: list[str]
    diagnostic: Diagnostic | None

    def to_json(self) -> dict:
        return {"certified": self.certified, "blowups": self.blowups, "leaves": self.leaves,
                "depth": self.depth, "failures": self.failures,
                "diagnostic": self.diagnostic.to_json() if self.diagnostic else None}


# ------------------------------------------------------------------ helpers

def _pt(a: Sequence[Fraction]) -> str:
    return "(" + ", ".join(format_rational(v) for v in a) + ")"


def _center(s: Scene, gens, phase: str, where: str, reason: str) -> CenterSpec | Diagnostic:
    names = coordinate_set_of(Ideal(s.coords, gens))
    if names is None:
        return Diagnostic(phase, reason, where, "center is not a coordinate subspace")
    return CenterSpec.of(s.coords, names)


def _x_vars(s: Scene, hosts) -> list:
    return [s.var(s.X[h]) for h in hosts]


def _pick_maximal(s: Scene, bad: list[Verdict]) -> Verdict:
    labels = sorted({v.stratum for v in bad})
    top = maximal_elements(labels, s.n)[0] if len(labels) > 1 else labels[0]
    return next(v for v in bad if v.stratum == top)


def verdicts_for(s: Scene, caps: Caps = DEFAULT_CAPS) -> list[Verdict]:
    return [is_semisnc_at(s, a, caps) for a in s.probes]


# ------------------------------------------------------------------ phases

def step2_remove_singular_components(s: Scene) -> Selection | None:
    """Blow up the intersection of all singular-locus components first."""
    zs = [frozenset(s.X[h] for h in c.host) for c in s.D if c.pair_host]
    if not zs:
        return None
    union = frozenset().union(*zs)
    center = CenterSpec.of(s.coords, union)
    return Selection(center, "step2", s.origin(), {"components": len(set(zs))})


def case_A(T: Scene, bad: list[Verdict], caps: Caps) -> Selection | Diagnostic:
    v = _pick_maximal(T, bad)
    a = v.point
    comps = T.components_at(a, include_E=False)
    hosts = list(comps)
    where = _pt(a)
    if v.failed_condition == "2":
        phase = "A-hs"
        use = hosts
    else:
        phase = "A-center"
        use = hosts[:-1]
    gens = _x_vars(T, hosts) + [c.poly for h in use for c in comps[h]]
    c = _center(T, gens, phase, where, NEEDS_DESING_INVARIANT)
    if isinstance(c, Diagnostic):
        return c
    return Selection(c, phase, a, {"stratum": [v.stratum.p, v.stratum.q]})


def _clean_shape(T: Scene, a, J: Ideal, hosts: list[int]):
    xs = {T.X[h] for h in hosts}
    rest = []
    for g in J.groebner().gens:
        for x in xs:
            g = g.restrict(x)
        if not g.is_zero() and g not in rest:
            rest.append(g)
    if len(rest) != 1:
        return None
    g3 = rest[0].translate(a)
    mono = g3.monomial_content()
    if g3.div_monomial(mono).constant_term() == 0:
        return None
    vars_ = [(T.coords[i], e) for i, e in enumerate(mono) if e]
    if not vars_ or any(a[T.pos(v)] != 0 for v, _ in vars_):
        return None
    return rest[0], dict(vars_)


def case_B(T: Scene, bad: list[Verdict], caps: Caps) -> Selection | Diagnostic:
    e_names = [e.name for e in T.E]
    for v in bad:
        if v.failed_condition != "3":
            continue
        a = v.point
        hosts = T.x_through(a)
        J = v.J if v.J is not None else compute_J(T, a, caps)
        shape = _clean_shape(T, a, J, hosts)
        where = _pt(a)
        if shape is None:
            return Diagnostic("B", NEEDS_LOG_RESOLUTION, where, f"J = {J} is not monomial times a unit")
        g3, exps = shape
        xs = [T.X[h] for h in hosts]
        plain = [w for w in T.coords if w in exps and w not in e_names]
        if plain:
            return Selection(CenterSpec.of(T.coords, xs + [plain[0]]), "B-VJ", a,
                             {"J": str(J)})
        u = next(w for w in e_names if w in exps)
        return Selection(CenterSpec.of(T.coords, xs + [u]), "B-clean", a,
                         {"J": str(J), "exponent": {u: exps[u]}})
    best = None
    for v in bad:
        comps = T.components_at(v.point, include_E=False)
        counts = {h: len(cs) for h, cs in comps.items()}
        host = max(counts, key=lambda h: (counts[h], -h))
        key = (counts[host], sum(counts.values()))
        if best is None or key > best[0]:
            best = (key, v, comps, host)
    key, v, comps, host = best
    where = _pt(v.point)
    if key[0] == 0:
        return Diagnostic("B-r", NEEDS_LOG_RESOLUTION, where, "no D-component through the point")
    gens = _x_vars(T, comps) + [c.poly for c in comps[host]]
    c = _center(T, gens, "B-r", where, NEEDS_LOG_RESOLUTION)
    if isinstance(c, Diagnostic):
        return c
    return Selection(c, "B-r", v.point, {"r": key[0], "total": key[1], "host": T.X[host]})


def case_C(T: Scene, bad: list[Verdict], caps: Caps) -> Selection | Diagnostic:
    v = bad[0]
    a = v.point
    comps = T.components_at(a)
    (h, cs), = comps.items()
    where = _pt(a)
    for c in cs:
        lin = c.poly.translate(a).linear_part()
        if not any(v for k, v in lin.items() if k != T.X[h]):
            return Diagnostic("C", NEEDS_LOG_RESOLUTION, where, f"{c.poly} is singular here")
    gens = [T.var(T.X[h])] + [c.poly for c in cs]
    c = _center(T, gens, "C", where, NEEDS_LOG_RESOLUTION)
    if isinstance(c, Diagnostic):
        return c
    return Selection(c, "C", a, {"components": len(cs)})


def step4_fix_multiplicities(s: Scene, bad: list[Verdict]) -> Selection | Diagnostic:
    v = max(bad, key=lambda w: w.iota)
    a = v.point
    comps = s.components_at(a, include_E=False)
    gens = _x_vars(s, comps) + [c.poly for cs in comps.values() for c in cs]
    c = _center(s, gens, "step4", _pt(a), NEEDS_DESING_INVARIANT)
    if isinstance(c, Diagnostic):
        return c
    return Selection(c, "step4", a, {"iota": list(v.iota)})


def select_center(s: Scene, verdicts: list[Verdict], caps: Caps = DEFAULT_CAPS) -> Selection | Diagnostic | None:
    """Next center for ``s``, None when every probe is semi-snc."""
    for v in verdicts:
        if v.answer == OUT_OF_CLASS:
            return Diagnostic("analyze", CAP_EXCEEDED, _pt(v.point), v.witness.get("reason", ""))
    if all(v.ok for v in verdicts):
        return None
    sel = step2_remove_singular_components(s)
    if sel is not None:
        return sel
    if any(not v.reduced_ok for v in verdicts):
        for k in range(1, len(s.X) + 1):
            T = s.truncated(k) if k < len(s.X) else s
            pts = [a for a in s.probes if T.on_X(a)]
            vs = verdicts if T is s else [is_semisnc_at(T, a, caps) for a in pts]
            for v in vs:
                if v.answer == OUT_OF_CLASS:
                    return Diagnostic("analyze", CAP_EXCEEDED, _pt(v.point), v.witness.get("reason", ""))
            bad = [v for v in vs if not v.reduced_ok]
            if not bad:
                continue
            labels = [stratum_at(T, v.point) for v in bad]
            d = max(delta(lab.p) for lab in labels)
            bad = [v for v, lab in zip(bad, labels) if delta(lab.p) == d]
            tops = [str(lab) for lab in maximal_elements(sorted(set(labels)), T.n)]
            if d == 3:
                sel = case_A(T, bad, caps)
            elif d == 2:
                sel = case_B(T, bad, caps)
            else:
                sel = case_C(T, bad, caps)
            if isinstance(sel, Selection):
                sel.measures.update({"component": k, "K": tops})
            return sel
        raise AssertionError("reduced failure vanished under truncation")
    return step4_fix_multiplicities(s, [v for v in verdicts if not v.ok])


# ------------------------------------------------------------------ driver

def _exceptional(counter: list[int], s: Scene) -> str:
    while True:
        counter[0] += 1
        name = f"e{counter[0]}"
        if name not in s.coords:
            return name


def _check_descent(node: BlowupNode, sel: Selection) -> None:
    # only consecutive blow-ups of one phase are comparable
    if node.state.phase != sel.phase:
        return
    prev = node.state.measure
    if sel.phase == "B-clean":
        (u, e), = sel.measures["exponent"].items()
        if u in prev and e >= prev[u]:
            raise AssertionError(f"cleaning exponent did not drop at {node.path}")
    elif sel.phase == "B-r" and (sel.measures["r"], sel.measures["total"]) >= prev:
        raise AssertionError(f"r did not drop at {node.path}")


def _measure(sel: Selection):
    if sel.phase == "B-clean":
        return dict(sel.measures["exponent"])
    if sel.phase == "B-r":
        return sel.measures["r"], sel.measures["total"]
    if sel.phase == "step4":
        return tuple(sel.measures["iota"])
    return sel.measures.get("stratum")


def resolve(s: Scene, limits: Limits | None = None) -> tuple[BlowupNode, Certification]:
    """Depth-first resolution; stops at the first diagnostic, keeping the partial tree."""
    limits = limits or Limits()
    if not s.probes:
        s = Scene(s.coords, s.X, s.D, s.E, tuple(probe_points(s)))
    root = BlowupNode(s, "root", 0)
    counter = [0]
    done = 0
    diag = None
    stack = [root]
    while stack:
        node = stack.pop()
        node.verdicts = verdicts_for(node.scene, limits.caps)
        try:
            sel = select_center(node.scene, node.verdicts, limits.caps)
        except CapExceeded as exc:
            sel = Diagnostic("select", CAP_EXCEEDED, node.path, str(exc))
        if sel is None:
            continue
        if isinstance(sel, Selection):
            hit = [v for v in node.verdicts if v.ok and sel.center.contains_point(node.scene.coords, v.point)]
            if hit:
                sel = Diagnostic(sel.phase, NEEDS_DESING_INVARIANT, f"{node.path} {_pt(hit[0].point)}",
                                 f"center {sel.center} contains a semi-snc probe point")
            elif done >= limits.max_blowups:
                sel = Diagnostic(sel.phase, CAP_EXCEEDED, node.path, f"more than {limits.max_blowups} blow-ups")
            elif node.depth >= limits.max_depth:
                sel = Diagnostic(sel.phase, CAP_EXCEEDED, node.path, f"depth above {limits.max_depth}")
        if isinstance(sel, Diagnostic):
            node.diagnostic = sel
            diag = sel
            break
        _check_descent(node, sel)
        try:
            charts = transform_scene(node.scene, sel.center, _exceptional(counter, node.scene),
                                     allow_codim_one=sel.allow_codim_one)
        except (AdmissibilityError, AlgebraError) as exc:
            node.diagnostic = diag = Diagnostic(sel.phase, NEEDS_LOG_RESOLUTION, node.path, str(exc))
            break
        done += 1
        node.center, node.phase, node.measures = sel.center, sel.phase, sel.measures
        for m, child_scene in charts:
            child = BlowupNode(child_scene, f"{node.path}/{m.chart_coord}", node.depth + 1,
                               state=node.state.advanced(sel.phase, _measure(sel)))
            node.children.append((m, child))
        stack.extend(reversed([c for _, c in node.children]))
    leaves = root.leaves()
    failures = [f"{leaf.path} {_pt(v.point)}" for leaf in leaves for v in leaf.verdicts if not v.ok]
    cert = Certification(diag is None and not failures, root.blowups(), len(leaves), root.height(),
                         failures, diag)
    return root, cert


def centers(root: BlowupNode) -> list[tuple[str, tuple[str, ...], str]]:
    return [(n.path, n.center.coords, n.phase) for n in root.nodes() if n.center is not None]


def all_verdicts(root: BlowupNode):
    return chain.from_iterable(n.verdicts for n in root.nodes())
