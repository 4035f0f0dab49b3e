import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semisnc.algebra import ParseError, parse_poly
from semisnc.scene import (
    DComponent,
    EComponent,
    MonotoneSet,
    Scene,
    SceneError,
    StratumLabel,
    K_set,
    all_labels,
    closure,
    delta,
    maximal_elements,
    precedes,
    probe_points,
    quadratic_is_reducible,
    scene_warnings,
    stratum_at,
    validate_scene,
)

from conftest import FIXTURE_NAMES, load

L = StratumLabel
O4 = (0, 0, 0, 0)


def scene(d) -> Scene:
    return Scene.from_json(d)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_roundtrip_and_valid(name):
    s = load(name)
    assert validate_scene(s) == []
    assert Scene.loads(s.dumps()) == s
    raw = (__import__("conftest").FIXTURES / f"{name}.scene").read_text()
    assert s.dumps() == raw


class TestValidation:
    base = {"coords": ["x1", "x2", "y"], "X": ["x1", "x2"]}

    def errs(self, **kw):
        return validate_scene(scene({**self.base, **kw}))

    def test_factor_in_host_ideal(self):
        assert any("host ideal" in e for e in self.errs(D=[{"host": 0, "factors": ["x1*y"]}]))

    def test_reducible_quadratic(self):
        assert any("reducible" in e for e in self.errs(D=[{"host": 0, "factors": ["y*x2 + x1"]}]))

    def test_factorization_mismatch(self):
        errs = self.errs(D=[{"host": 0, "factors": ["y"], "poly": "y + x2"}])
        assert any("mismatch" in e for e in errs)
        assert self.errs(D=[{"host": 0, "factors": ["y"], "poly": "y + x1"}]) == []

    def test_pair_host_rules(self):
        assert self.errs(D=[{"host": [0, 1], "factors": []}]) == []
        assert any("no factors" in e for e in self.errs(D=[{"host": [0, 1], "factors": ["y"]}]))
        s = scene({**self.base, "D": [{"host": [0, 1]}]})
        assert any("singular locus" in e for e in validate_scene(s, allow_pair_hosts=False))

    def test_probe_off_X(self):
        assert any("not on X" in e for e in self.errs(probes=[["1", "1", "0"]]))

    def test_bad_names(self):
        assert self.errs(X=["x1", "w"]) == ["X-component 'w' is not a coordinate"]
        assert any("also an X" in e for e in self.errs(E=[{"name": "x1", "origin": ""}]))

    def test_degree_three_warning(self):
        s = load("cleaning")
        assert scene_warnings(s) == ["D[1].factors[0]: irreducibility of a degree-3 factor is trusted"]


class TestParsing:
    def test_json_error_has_position(self):
        with pytest.raises(ParseError) as err:
            Scene.loads('{"coords": [\n  "x", ]}')
        assert err.value.line == 2

    def test_polynomial_error_names_field(self):
        with pytest.raises(SceneError, match=r"D\[0\]\.factors\[0\]"):
            Scene.from_json({"coords": ["x", "y"], "X": ["x"], "D": [{"host": 0, "factors": ["y +"]}]})

    def test_bad_host(self):
        with pytest.raises(SceneError):
            Scene.from_json({"coords": ["x", "y"], "X": ["x"], "D": [{"host": "0", "factors": ["y"]}]})


def test_quadratic_reducibility():
    ch = ("y1", "y2")
    assert quadratic_is_reducible(parse_poly("y1*y2", ch))
    assert quadratic_is_reducible(parse_poly("y1^2 - 4*y2^2", ch))
    assert not quadratic_is_reducible(parse_poly("y1 + y2^2", ch))
    assert not quadratic_is_reducible(parse_poly("y1^2 - 2*y2^2", ch))


class TestStrata:
    def test_example_strata(self):
        s = load("vj_center")
        assert stratum_at(s, O4) == L(2, 1)
        assert stratum_at(s, (0, 0, 1, 1)) == L(2, 0)
        assert stratum_at(s, (0, 1, 0, 1)) == L(1, 1)

    def test_delta(self):
        assert [delta(p) for p in (1, 2, 3, 7)] == [1, 2, 3, 3]

    def test_precedes(self):
        assert precedes(L(3, 2), L(3, 1), 6)
        assert precedes(L(3, 0), L(2, 4), 8)
        assert not precedes(L(2, 1), L(2, 1), 4)
        assert precedes(L(2, 1), L(2, 0), 4)

    def test_closure_contents(self):
        m = closure([L(3, 1)], 6)
        assert {L(3, 2), L(3, 3), L(4, 1), L(4, 2), L(5, 1)} <= set(m.members())
        assert L(2, 3) not in m

    def test_K_sets(self):
        assert K_set(load("vj_center")) == [L(2, 1)]
        assert K_set(load("host_excess")) == [L(2, 1)]
        assert K_set(load("vj_center"), closure([L(2, 1)], 4)) == [L(2, 0)]

    def test_maximal_elements(self):
        assert maximal_elements([L(1, 0), L(2, 1), L(2, 0), L(1, 1)], 4) == [L(2, 1)]

    @given(st.integers(2, 6), st.data())
    def test_precedes_is_a_strict_order(self, n, data):
        labels = all_labels(n)
        a, b, c = (data.draw(st.sampled_from(labels)) for _ in range(3))
        assert not (precedes(a, b, n) and precedes(b, a, n))
        if precedes(a, b, n) and precedes(b, c, n):
            assert precedes(a, c, n)

    @given(st.integers(2, 5), st.data())
    def test_closure_is_monotone(self, n, data):
        labels = all_labels(n)
        gens = data.draw(st.lists(st.sampled_from(labels), max_size=3))
        m = closure(gens, n)
        for x in m.members():
            for y in labels:
                if precedes(y, x, n):
                    assert y in m
        assert closure(m.members(), n) == m


class TestProbes:
    def test_example_probes(self):
        pts = probe_points(load("vj_center"))
        assert pts[0] == (0, 0, 0, 0)
        assert len(pts) == 7
        assert all(load("vj_center").on_X(p) for p in pts)

    def test_truncation_moves_components_to_boundary(self):
        s = load("case_a").truncated(2)
        assert s.X == ("x1", "x2")
        assert [e.name for e in s.E] == ["x3"] and s.E[0].origin == "boundary"
        assert len(s.D) == 2

    def test_rename_and_dummy(self):
        s = load("vj_center")
        t = s.renamed({"y": "w", "z": "y"}).with_dummy("q")
        assert t.coords == ("x1", "x2", "w", "y", "q")
        assert str(t.D[1].factors[0]) == "w*y + x1"
        with pytest.raises(SceneError):
            t.with_dummy("q")
