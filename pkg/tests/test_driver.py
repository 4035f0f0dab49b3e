import json

import pytest

from semisnc.detector import compute_J, iota_at
from semisnc.driver import (
    CAP_EXCEEDED,
    NEEDS_LOG_RESOLUTION,
    Limits,
    centers,
    resolve,
    select_center,
    step2_remove_singular_components,
    verdicts_for,
)
from semisnc.algebra import contains_unit_at
from semisnc.scene import Scene, probe_points, stratum_at

from conftest import FIXTURE_NAMES, load

EXPECTED = {
    # name: (blow-ups, leaves, root center, root phase)
    "semisnc_normal_form": (0, 1, None, None),
    "vj_center": (1, 3, ("x1", "x2", "z"), "B-VJ"),
    "host_excess": (2, 5, ("x1", "x2", "y"), "B-r"),
    "multiplicity": (1, 3, ("x", "y", "z"), "step4"),
    "cleaning": (2, 5, ("x1", "x2", "u1"), "B-clean"),
    "case_a": (23, 55, ("x1", "x2", "x3", "y1", "y2"), "A-center"),
    "tangency": (2, 5, ("x1", "y1", "y2"), "C"),
    "pair_host": (1, 2, ("x1", "x2"), "step2"),
}


@pytest.fixture(scope="module")
def runs():
    return {name: resolve(load(name)) for name in FIXTURE_NAMES}


def test_every_fixture_has_an_expectation():
    assert set(EXPECTED) == set(FIXTURE_NAMES)


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_fixture_outcome(runs, name):
    root, cert = runs[name]
    blowups, leaves, center, phase = EXPECTED[name]
    assert cert.certified and cert.diagnostic is None and cert.failures == []
    assert (cert.blowups, cert.leaves) == (blowups, leaves)
    assert (root.center.coords if root.center else None) == center
    assert root.phase == phase


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_leaves_certified_and_centers_hygienic(runs, name):
    root, _ = runs[name]
    for node in root.nodes():
        if node.center is not None:
            for v in node.verdicts:
                if v.ok:
                    assert not node.center.contains_point(node.scene.coords, v.point)
    for leaf in root.leaves():
        assert all(v.ok for v in leaf.verdicts)


def test_cleaning_rounds(runs):
    root, _ = runs["cleaning"]
    path = [root, dict((m.chart_coord, c) for m, c in root.children)["u1"]]
    assert [n.phase for n in path] == ["B-clean", "B-clean"]
    assert [n.measures["exponent"] for n in path] == [{"u1": 2}, {"e1": 1}]
    last = dict((m.chart_coord, c) for m, c in path[1].children)["e1"]
    origin = (0,) * last.scene.n
    assert contains_unit_at(compute_J(last.scene, origin), origin)


def test_case_a_children_drop_stratum(runs):
    root, _ = runs["case_a"]
    for m, child in root.children:
        e = child.scene.pos(m.exceptional)
        over = [a for a in child.scene.probes if a[e] == 0]
        assert over
        for a in over:
            p, q = stratum_at(child.scene, a)
            assert p <= 3 and q <= 2 and (p, q) != (3, 2)


def test_step4_iota_drops(runs):
    root, _ = runs["multiplicity"]
    assert root.measures["iota"] == [2, 1]
    for _, child in root.children:
        for a in child.scene.probes:
            i = iota_at(child.scene, a)
            assert i[0] <= 2 and i[1] <= 1 and i != (2, 1)


def test_tangency_needs_two_rounds(runs):
    root, _ = runs["tangency"]
    assert [c[1:] for c in centers(root)] == [(("x1", "y1", "y2"), "C"), (("x1", "y1", "e1"), "C")]


def test_step2_selection():
    s = load("pair_host")
    sel = step2_remove_singular_components(s)
    assert sel.center.coords == ("x1", "x2")
    assert step2_remove_singular_components(load("vj_center")) is None
    two = Scene.from_json({"coords": ["x1", "x2", "x3", "y"], "X": ["x1", "x2", "x3"],
                           "D": [{"host": [0, 1]}, {"host": [1, 2]}]})
    assert step2_remove_singular_components(two).center.coords == ("x1", "x2", "x3")
    root, cert = resolve(two)
    assert cert.certified
    assert [c[1] for c in centers(root)][0] == ("x1", "x2", "x3")


def test_no_center_for_semisnc_scene():
    s = load("semisnc_normal_form")
    s = Scene(s.coords, s.X, s.D, s.E, tuple(probe_points(s)))
    assert select_center(s, verdicts_for(s)) is None


def test_singular_factor_gives_diagnostic():
    s = Scene.from_json({"coords": ["x", "y", "z"], "X": ["x"], "D": [{"host": 0, "factors": ["y^2 - z^3"]}]})
    root, cert = resolve(s)
    assert not cert.certified
    assert cert.diagnostic.reason == NEEDS_LOG_RESOLUTION and cert.diagnostic.phase == "C"
    assert root.diagnostic == cert.diagnostic and root.children == []


def test_blowup_cap():
    root, cert = resolve(load("vj_center"), Limits(max_blowups=0))
    assert cert.diagnostic.reason == CAP_EXCEEDED and cert.blowups == 0


def test_depth_cap_keeps_partial_tree():
    root, cert = resolve(load("cleaning"), Limits(max_depth=1))
    assert cert.diagnostic.reason == CAP_EXCEEDED
    assert cert.blowups == 1 and root.center is not None


def test_exceptional_names_follow_tree_order(runs):
    root, _ = runs["case_a"]
    seen = [n.children[0][0].exceptional for n in root.nodes() if n.children]
    assert seen == [f"e{k}" for k in range(1, len(seen) + 1)]


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_tree_serialization_is_deterministic(runs, name):
    a = json.dumps(runs[name][0].to_json())
    b = json.dumps(resolve(load(name))[0].to_json())
    assert a == b
