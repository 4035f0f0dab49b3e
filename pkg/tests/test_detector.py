import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semisnc.algebra import Ideal, Poly, contains_unit_at, ideal_intersection, parse_poly
from semisnc.detector import (
    NOT_SEMI_SNC,
    SEMI_SNC,
    DetectorError,
    compute_J,
    equivalence_classes,
    iota_at,
    is_semisnc_at,
    is_snc_at,
    normalize_factorization,
)
from semisnc.scene import Scene, StratumLabel
from semisnc.staircase import EQUAL, GREATER, INCOMPARABLE, compare_hs, hilbert_of_ideal, hpq

from conftest import FIXTURE_NAMES, load
from generators import hs_family

O4 = (0, 0, 0, 0)


def normal_form(p: int, q: int, extra: int) -> Scene:
    """X = (x1...xp), D = (x1...xp = y1...yq = 0) with every y on every host."""
    coords = [f"x{i}" for i in range(1, p + 1)] + [f"y{j}" for j in range(1, q + 1)] + [f"w{k}" for k in range(extra)]
    D = [{"host": h, "factors": [f"y{j}" for j in range(1, q + 1)]} for h in range(p)] if q else []
    return Scene.from_json({"coords": coords, "X": coords[:p], "D": D})


class TestExamples:
    def test_example_4_8(self):
        v = is_semisnc_at(load("vj_center"), O4)
        assert v.answer == NOT_SEMI_SNC and v.failed_condition == "3"
        assert v.witness == {"J": "(x1, x2, z)"}
        assert v.stratum == StratumLabel(2, 1)

    def test_example_4_6(self):
        v = is_semisnc_at(load("host_excess"), O4)
        assert v.failed_condition == "2"
        assert v.witness["H"][:4] == [1, 5, 11, 19]
        assert v.witness["expected"][:4] == [1, 4, 9, 16]

    def test_normal_form_scene(self):
        s = load("semisnc_normal_form")
        assert all(is_semisnc_at(s, a).ok for a in [(0, 0, 0), (0, 0, 1), (0, 1, 0)])
        assert contains_unit_at(compute_J(s, (0, 0, 0)), (0, 0, 0))

    def test_cleaning_J(self):
        J = compute_J(load("cleaning"), O4)
        assert [str(g) for g in J.gens] == ["x1", "x2", "u1^2"]

    def test_case_a_fails_condition_3(self):
        v = is_semisnc_at(load("case_a"), (0,) * 5)
        assert (v.failed_condition, v.stratum) == ("3", StratumLabel(3, 2))

    def test_multiplicity_scene(self):
        s = load("multiplicity")
        v = is_semisnc_at(s, (0, 0, 0))
        assert v.failed_condition == "multiplicity" and v.iota == (2, 1)
        assert v.reduced_ok
        assert is_semisnc_at(s.reduced(), (0, 0, 0)).ok
        assert iota_at(s, (0, 0, 0)) == (2, 1)

    def test_singular_locus_point(self):
        v = is_semisnc_at(load("pair_host"), (0, 0, 1))
        assert v.failed_condition == "singular-locus"

    def test_J_needs_two_components(self):
        with pytest.raises(DetectorError):
            compute_J(load("tangency"), (0, 0, 0))


class TestSnc:
    def test_coordinate_divisor(self):
        s = Scene.from_json({"coords": ["x1", "y1", "y2"], "X": ["x1"],
                             "D": [{"host": 0, "factors": ["y1"]}, {"host": 0, "factors": ["y2"]}]})
        assert is_snc_at(s, (0, 0, 0))

    def test_tangent_components(self):
        assert not is_snc_at(load("tangency"), (0, 0, 0))
        assert is_snc_at(load("tangency"), (0, 0, 1))

    def test_singular_factor(self):
        s = Scene.from_json({"coords": ["x", "y", "z"], "X": ["x"], "D": [{"host": 0, "factors": ["y^2 - z^3"]}]})
        assert not is_snc_at(s, (0, 0, 0))
        assert is_snc_at(s, (0, 1, 1))


class TestNormalize:
    ch = ("x1", "x2", "x3", "y1", "y2")

    def test_two_factor_example(self):
        fs = [parse_poly("x1 + y1*y2", self.ch), parse_poly("x2 + y1*y2", self.ch)]
        r = normalize_factorization(fs, 3, 2, self.ch)
        assert r.g1 == Poly.constant(self.ch, 1)
        assert str(r.g2) == "y1*y2 + x1 + x2"
        assert r.association == ("x1", "x2")
        assert r.g2_in_parameter_ideal

    def test_single_y(self):
        ch = ("x1", "x2", "x3", "y1")
        r = normalize_factorization([parse_poly("y1", ch)], 3, 1, ch)
        assert r.g1.is_zero() and r.g2 == Poly.constant(ch, 1) and r.association == ("y1",)

    def test_rejections(self):
        with pytest.raises(DetectorError, match="p>=3"):
            normalize_factorization([parse_poly("y1", self.ch)], 2, 2, self.ch)
        with pytest.raises(DetectorError, match="order"):
            normalize_factorization([parse_poly("y1^2", self.ch)], 3, 2, self.ch)
        with pytest.raises(DetectorError):
            normalize_factorization([parse_poly("y1 + 1", self.ch)], 3, 2, self.ch)

    @given(st.lists(st.sampled_from(["x1", "x2", "y1", "y2"]), min_size=1, max_size=3, unique=True),
           st.integers(-2, 2))
    def test_product_identity(self, heads, c):
        tails = ["y1*y2", "x1*y2", "y1^2"]
        fs = [parse_poly(f"{h} + {c}*{tails[i % 3]}", self.ch) for i, h in enumerate(heads)]
        try:
            r = normalize_factorization(fs, 3, 2, self.ch)
        except DetectorError:
            return
        prod = Poly.constant(self.ch, 1)
        for f in r.rewritten:
            prod = prod * f
        x12 = parse_poly("x1*x2", self.ch)
        y12 = parse_poly("y1*y2", self.ch)
        assert prod - (x12 * r.g1 + y12 * r.g2) == Poly(self.ch)


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2))
def test_normal_forms_are_semisnc(p, q, extra):
    s = normal_form(p, q, extra)
    a = (0,) * s.n
    v = is_semisnc_at(s, a)
    assert v.ok
    if p >= 2:
        assert contains_unit_at(compute_J(s, a), a)


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_verdicts_survive_renaming_and_dummy(name):
    s = load(name)
    m = {c: f"t{i}" for i, c in enumerate(reversed(s.coords))}
    t = s.renamed(m).with_dummy("dummy")
    for a in [(0,) * s.n, (0,) * (s.n - 1) + (1,)]:
        if not s.on_X(a):
            continue
        u, v = is_semisnc_at(s, a), is_semisnc_at(t, a + (0,))
        assert (u.answer, u.failed_condition, u.stratum) == (v.answer, v.failed_condition, v.stratum)


@pytest.mark.parametrize("branch", ["a", "b", "c"])
def test_hs_lemma_bad_branches(branch):
    rng = random.Random(f"detector-{branch}")
    for _ in range(5):
        A, B, p, q, n = hs_family(branch, rng)
        assert compare_hs(hilbert_of_ideal(ideal_intersection(A, B)), hpq(p, q, n)) in (GREATER, INCOMPARABLE)


def test_hs_lemma_if_branch():
    rng = random.Random("detector-if")
    for _ in range(5):
        A, B, p, q, n = hs_family("if", rng)
        assert compare_hs(hilbert_of_ideal(ideal_intersection(A, B)), hpq(p, q, n)) == EQUAL


def test_corollary_on_generated_instances():
    rng = random.Random("corollary")
    for branch in ["if", "a", "b", "c"] * 3:
        A, B, p, q, n = hs_family(branch, rng)
        H = hilbert_of_ideal(ideal_intersection(A, B))
        for p2 in range(1, n + 1):
            for q2 in range(0, n - p2 + 1):
                if compare_hs(hpq(p2, q2, n), H) in (GREATER, EQUAL):
                    assert compare_hs(hpq(p2, q2, n), hpq(p, q, n)) in (GREATER, EQUAL)


def test_equivalence_classes_merge_shared_y():
    s = load("multiplicity")
    comps = s.components_at((0, 0, 0), include_E=False)
    assert len(equivalence_classes(s, (0, 0, 0), comps)) == 1
