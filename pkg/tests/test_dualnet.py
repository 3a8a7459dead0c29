from fractions import Fraction
from itertools import combinations, cycle

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosmkit.core.config import CosmConfig
from cosmkit.core.errors import ParameterError
from cosmkit.dualnet import (
    DISTANCE,
    FuzzySet,
    LossyFrontier,
    coherence_degree,
    fixed_point_iteration,
    fuzzy_tanimoto,
    lmi_distance,
    lmi_intension,
    lossy_frontier,
    proximity,
)
from cosmkit.metric import MetricTable, tanimoto_tables
from cosmkit.structure import build_subpattern_graph
from cosmkit.system import system_from_dict

F = Fraction


@pytest.fixture
def single():
    """반응 하나 cat(a,b) → ab"""
    return system_from_dict({
        "entities": ["e", "a", "b", "ab"],
        "atoms": ["a", "b"],
        "operators": ["cat"],
        "reactions": [{"op": "cat", "left": "a", "right": "b", "products": ["ab"]}],
        "measures": [
            {"id": "m1", "operators": ["cat"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"cat": 1}},
            {"id": "m2", "operators": ["cat"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"cat": "1/2"}},
        ],
    })


@pytest.fixture
def two_ways():
    """x 의 분해가 둘: f(a,b) 와 g(b,a)"""
    return system_from_dict({
        "entities": ["e", "a", "b", "x"],
        "atoms": ["a", "b"],
        "operators": ["f", "g"],
        "reactions": [
            {"op": "f", "left": "a", "right": "b", "products": ["x"]},
            {"op": "g", "left": "b", "right": "a", "products": ["x"]},
        ],
        "measures": [
            {"id": "m1", "operators": ["f", "g"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"f": 1, "g": 1}},
            {"id": "m2", "operators": ["f", "g"], "atom_costs": {"a": 1, "b": 1},
             "op_costs": {"f": 1, "g": "1/2"}},
        ],
    })


@pytest.fixture
def three_tables():
    """순서쌍 여섯 개 중 (a,b) 하나만 0 대 1/2, 나머지는 모두 1/2"""
    entities = ("a", "b", "c")
    d_i = MetricTable(entities, {pair: F(1, 2) for pair in combinations(entities, 2)})
    d_lmi = MetricTable(entities, {("a", "b"): F(0), ("b", "a"): F(1, 2), ("a", "c"): F(1, 2), ("b", "c"): F(1, 2)})
    return d_lmi, d_i


def pair_table(value):
    return MetricTable(("a", "b"), {("a", "b"): F(value)})


class TestCoherence:
    def test_hand_tables(self):
        assert coherence_degree(pair_table(F(1, 2)), pair_table(F(3, 5))) == F(5, 6)

    def test_three_entities(self, three_tables):
        d_lmi, d_i = three_tables
        assert d_lmi.get("a", "b") == 0
        assert d_lmi.get("b", "a") == F(1, 2)
        # 1 − (1/2)/3
        assert coherence_degree(d_lmi, d_i) == F(5, 6)
        assert coherence_degree(d_lmi, d_i, {(x, y): F(1, 6) for x in "abc" for y in "abc" if x != y}) == F(5, 6)

    @settings(max_examples=1000, deadline=None)
    @given(
        values=st.lists(st.fractions(min_value=0, max_value=1, max_denominator=12), min_size=12, max_size=12),
        weights=st.lists(st.fractions(min_value=0, max_value=3, max_denominator=6), min_size=12, max_size=12),
    )
    def test_degree_is_in_unit_interval(self, values, weights):
        entities = ("a", "b", "c", "d")
        pairs = list(combinations(entities, 2))
        d_lmi = MetricTable(entities, dict(zip(pairs, values[:6])))
        d_i = MetricTable(entities, dict(zip(pairs, values[6:])))
        ordered = [(x, y) for x in entities for y in entities if x != y]
        for measure in (None, dict(zip(ordered, weights))):
            assert 0 <= coherence_degree(d_lmi, d_i, measure) <= 1

    def test_identical_tables(self, str1):
        d_i, _ = tanimoto_tables(build_subpattern_graph(str1))
        assert coherence_degree(d_i, d_i) == 1

    def test_zero_tables(self):
        assert coherence_degree(pair_table(0), pair_table(0)) == 1

    def test_weights(self):
        weights = {("a", "b"): F(2), ("b", "a"): F(0)}
        assert coherence_degree(pair_table(F(1, 2)), pair_table(F(3, 5)), weights) == F(5, 6)
        with pytest.raises(ParameterError):
            coherence_degree(pair_table(1), pair_table(1), {("a", "b"): F(-1)})

    def test_mismatched_entities(self):
        other = MetricTable(("a", "c"), {("a", "c"): F(1)})
        with pytest.raises(ParameterError):
            coherence_degree(pair_table(1), other)


class TestFixedPoint:
    def test_single_reaction_converges(self, single):
        report = fixed_point_iteration(single)
        assert report.converged
        assert report.iterations == 2
        assert report.trajectory == [F(0), F(1)]
        assert report.degree == 1

    def test_zero_tolerance_single_step(self, single):
        report = fixed_point_iteration(single, max_iter=1, tolerance=0)
        assert not report.converged
        assert report.iterations == 1
        assert report.to_dict()["trajectory"] == ["0"]

    def test_oscillation_does_not_converge(self, two_ways, monkeypatch):
        steps = cycle([F(1, 7), F(6, 7)])

        def alternating(system, current, *args, **kwargs):
            value = next(steps)
            return MetricTable(current.entities, {pair: value for pair in current.pairs()}, "lmi")

        monkeypatch.setattr("cosmkit.dualnet.coherence.lmi_distance", alternating)
        report = fixed_point_iteration(two_ways, max_iter=6, tolerance=F(1, 100))
        assert report.converged is False
        assert report.iterations == 6
        assert len(report.trajectory) == 6
        # 1/7 과 6/7 사이를 오가는 동안 정합도는 1 − (5/7)/(6/7)
        assert report.trajectory[1:] == [F(1, 6)] * 5
        assert report.d_lmi.get("a", "x") == F(6, 7)

    def test_two_decompositions_iterate(self, two_ways):
        report = fixed_point_iteration(two_ways, max_iter=3, tolerance=0)
        assert report.iterations <= 3
        assert len(report.trajectory) == report.iterations
        assert all(0 <= v <= 1 for v in report.trajectory)
        assert report.converged or report.iterations == 3

    def test_lmi_start(self, single):
        config = CosmConfig(dualnet={"initial_d_i": "lmi"})
        report = fixed_point_iteration(single, config)
        assert report.converged
        assert report.trajectory[0] == 1

    def test_rejects_bad_parameters(self, single):
        with pytest.raises(ParameterError):
            fixed_point_iteration(single, k=0)
        with pytest.raises(ParameterError):
            fixed_point_iteration(single, max_iter=0)


class TestLossy:
    def test_proximity(self):
        assert proximity(F(1), F(1)) == F(1, 2)
        assert proximity(F(1000), F(0)) == 1

    def test_square_is_on_frontier(self, str1):
        d_i, d_e = tanimoto_tables(build_subpattern_graph(str1))
        frontier = lossy_frontier(str1, "aaaa", metrics=(d_i, d_e))
        assert ("sq", "aa", "aa", "aaaa") in {m.key for m in frontier.members}
        assert len(frontier.candidates) == len(str1.reactions)

    def test_large_k_flattens_proximity(self, str1):
        d_i, d_e = tanimoto_tables(build_subpattern_graph(str1))
        near = lossy_frontier(str1, "aaaa", k=F(1), metrics=(d_i,))
        far = lossy_frontier(str1, "aaaa", k=F(1000), metrics=(d_i,))
        for a, b in zip(near.candidates, far.candidates):
            assert a.proximities[0] <= b.proximities[0]
        assert all(m.proximities[0] > F(99, 100) for m in far.candidates)

    def test_rejects_nonpositive_k(self, str1):
        with pytest.raises(ParameterError):
            lossy_frontier(str1, "aaaa", k=F(0))

    def test_empty_frontier(self):
        ground = pair_table(1)
        assert lmi_intension("a", LossyFrontier("a", "e", F(1)), ground).empty_frontier

    def test_membership_polarity(self, single):
        d_i, d_e = tanimoto_tables(build_subpattern_graph(single))
        frontier = lossy_frontier(single, "ab", metrics=(d_i, d_e))
        similarity = lmi_intension("ab", frontier, d_i)
        distance = lmi_intension("ab", frontier, d_i, DISTANCE)
        key = ("cat", "a", "b", "ab")
        assert similarity.memberships[key] == 1
        assert distance.memberships[key] == 0
        with pytest.raises(ParameterError):
            lmi_intension("ab", frontier, d_i, "both")

    def test_fuzzy_tanimoto(self):
        first = FuzzySet("x", {("cat", "a", "b", "ab"): F(1), ("cat", "b", "a", "ba"): F(1, 2)})
        second = FuzzySet("y", {("cat", "a", "b", "ab"): F(1, 2)})
        assert fuzzy_tanimoto(first, second) == F(2, 3)
        assert fuzzy_tanimoto(FuzzySet("x"), FuzzySet("y")) == 0

    def test_lmi_distance_is_symmetric(self, str1):
        d_i, d_e = tanimoto_tables(build_subpattern_graph(str1))
        d_lmi = lmi_distance(str1, d_i, d_e, F(1))
        for x, y in d_lmi.pairs():
            assert d_lmi.get(x, y) == d_lmi.get(y, x)
            assert 0 <= d_lmi.get(x, y) <= 1
