from fractions import Fraction
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosmkit.core.errors import ParameterError, UnknownEntityError
from cosmkit.dualnet import lmi_distance
from cosmkit.metric import (
    EXTENSION,
    INTENSION,
    MetricTable,
    QDistribution,
    composite,
    hutchinson_distance,
    hutchinson_metrics,
    intension_extension,
    q_distribution,
    rank_correlation,
    tanimoto_distance,
    tanimoto_metrics,
    tanimoto_tables,
)
from cosmkit.structure import SubpatternEdge, SubpatternGraph, build_subpattern_graph

F = Fraction


@pytest.fixture
def small_graph():
    """a ≤ ab (1/4), b ≤ ab (1/2)"""
    scores = {
        ("a", "ab"): SubpatternEdge("a", "ab", "b", "cat", F(1, 4)),
        ("b", "ab"): SubpatternEdge("b", "ab", "a", "cat", F(1, 2)),
    }
    return SubpatternGraph(("e", "a", "b", "ab"), "e", "both", "subpattern", scores)


def assert_metric(table):
    for x in table.entities:
        assert table.get(x, x) == 0
    for x, y in table.pairs():
        assert table.get(x, y) == table.get(y, x) >= 0
    for x, y, z in permutations(table.entities, 3):
        assert table.get(x, z) <= table.get(x, y) + table.get(y, z)


def splits(total, caps):
    if not caps:
        if total == 0:
            yield ()
        return
    for v in range(min(total, caps[0]) + 1):
        for rest in splits(total - v, caps[1:]):
            yield (v,) + rest


def integer_couplings(rows, cols):
    """행 합 rows, 열 합 cols 인 음이 아닌 정수 행렬 전부"""
    if not rows:
        yield ()
        return
    for row in splits(rows[0], cols):
        remaining = tuple(c - v for c, v in zip(cols, row))
        for rest in integer_couplings(rows[1:], remaining):
            yield (row,) + rest


def random_masses(rng, names, total):
    """names 중 최대 4개에 정수 질량 total 을 양수로 나눔"""
    k = int(rng.integers(1, min(4, total) + 1))
    support = [names[i] for i in rng.choice(len(names), size=k, replace=False)]
    if k == 1:
        return support, [total]
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, total), size=k - 1, replace=False))
    bounds = [0] + cuts + [total]
    return support, [b - a for a, b in zip(bounds, bounds[1:])]


class TestTanimoto:
    def test_distance(self):
        assert tanimoto_distance({"p", "q"}, {"q", "r"}) == F(2, 3)
        assert tanimoto_distance(set(), set()) == 0
        assert tanimoto_distance({"p"}, {"p"}) == 0

    def test_intension_extension(self, small_graph):
        assert intension_extension(small_graph, "a") == ({"a", "ab"}, {"a"})
        assert intension_extension(small_graph, "ab") == ({"ab"}, {"a", "b", "ab"})
        with pytest.raises(UnknownEntityError):
            intension_extension(small_graph, "zz")

    def test_tables(self, small_graph):
        d_i, d_e = tanimoto_tables(small_graph)
        assert d_i.get("a", "b") == F(2, 3)
        assert d_e.get("a", "ab") == F(2, 3)
        assert d_i.construction == INTENSION
        assert d_e.construction == EXTENSION

    def test_composite_alpha(self, small_graph):
        d_i, d_e = tanimoto_tables(small_graph)
        assert composite(d_i, d_e, F(1)).get("a", "b") == d_i.get("a", "b")
        assert composite(d_i, d_e, F(0)).get("a", "b") == d_e.get("a", "b")
        with pytest.raises(ParameterError):
            composite(d_i, d_e, F(3, 2))

    def test_metric_properties(self, str1):
        assert_metric(tanimoto_metrics(build_subpattern_graph(str1)))

    @pytest.mark.parametrize("name", ["toy2", "str1", pytest.param("gamma3", marks=pytest.mark.slow)])
    def test_metric_properties_across_fixtures(self, request, name):
        system = request.getfixturevalue(name)
        graph = build_subpattern_graph(system)
        d_i, d_e = tanimoto_tables(graph)
        for table in (d_i, d_e, composite(d_i, d_e, F(1, 2)), lmi_distance(system, d_i, d_e, F(1)),
                      hutchinson_metrics(graph)):
            assert_metric(table)

    def test_single_measure_has_no_graph(self, toy1):
        # 서브패턴 강도에는 확장 측도가 필요
        with pytest.raises(ParameterError):
            build_subpattern_graph(toy1)

    def test_removing_unrelated_entity_keeps_distance(self, str1):
        graph = build_subpattern_graph(str1)
        full = tanimoto_metrics(graph)
        cases = 0
        for x, y in full.pairs():
            related = set()
            for u in (x, y):
                intension, extension = intension_extension(graph, u)
                related |= intension | extension
            witnesses = {e.witness for e in graph.edges if e.x in (x, y) or e.y in (x, y)}
            for z in graph.nodes:
                if z in related or z in witnesses:
                    continue
                assert tanimoto_metrics(graph.without(z)).get(x, y) == full.get(x, y)
                cases += 1
        assert cases > 0

    def test_removing_related_entity_moves_distance(self, str1):
        graph = build_subpattern_graph(str1)
        assert tanimoto_tables(graph)[0].get("a", "aa") == F(2, 3)
        # int(aa) 에서 aaaa 가 빠짐
        assert tanimoto_tables(graph.without("aaaa"))[0].get("a", "aa") == F(1, 2)

    def test_unknown_entity(self, small_graph):
        with pytest.raises(UnknownEntityError):
            tanimoto_metrics(small_graph).get("a", "zz")

    def test_csv(self, small_graph):
        lines = tanimoto_metrics(small_graph).to_csv().splitlines()
        assert lines[0] == ",e,a,b,ab"
        assert lines[1].startswith("e,0,")

    def test_rank_correlation(self, small_graph):
        table = tanimoto_metrics(small_graph)
        assert rank_correlation(table, table) > 0
        pair = MetricTable(("a", "b"), {("a", "b"): F(1)})
        assert rank_correlation(pair, pair) == 0


class TestQDistribution:
    def test_extension(self, small_graph):
        dist = q_distribution(small_graph, "ab")
        assert dist.weights == {"a": F(1, 3), "b": F(2, 3)}
        assert not dist.degenerate

    def test_degenerate_is_uniform(self, small_graph):
        dist = q_distribution(small_graph, "a")
        assert dist.weights == {"a": F(1)}
        assert dist.degenerate

    def test_intension(self, small_graph):
        assert q_distribution(small_graph, "b", INTENSION).weights == {"ab": F(1)}

    def test_unknown_side(self, small_graph):
        with pytest.raises(ParameterError):
            q_distribution(small_graph, "a", "sideways")


class TestTransport:
    def test_point_masses(self):
        ground = MetricTable(("a", "b", "c"), {("a", "b"): F(1, 3), ("a", "c"): F(1), ("b", "c"): F(2, 3)})
        assert hutchinson_distance(QDistribution("x", {"a": F(1)}), QDistribution("y", {"b": F(1)}), ground) == F(1, 3)

    def test_split_mass(self):
        ground = MetricTable(("a", "b", "c"), {("a", "b"): F(1), ("a", "c"): F(1), ("b", "c"): F(2, 3)})
        p = QDistribution("x", {"a": F(1, 2), "b": F(1, 2)})
        q = QDistribution("y", {"a": F(1, 2), "c": F(1, 2)})
        assert hutchinson_distance(p, q, ground) == F(1, 3)

    def test_empty_distribution(self):
        ground = MetricTable(("a",), {})
        with pytest.raises(ParameterError):
            hutchinson_distance(QDistribution("x"), QDistribution("y", {"a": F(1)}), ground)

    @settings(max_examples=300, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_matches_coupling_enumeration(self, seed):
        rng = np.random.default_rng(seed)
        names = [f"p{i}" for i in range(6)]
        # 직선 위의 유리수 점: 바닥 거리는 |s − t|
        points = {n: F(int(rng.integers(0, 13)), int(rng.integers(1, 5))) for n in names}
        ground = MetricTable(tuple(names), {(a, b): abs(points[a] - points[b]) for a, b in combinations(names, 2)})
        total = int(rng.integers(1, 7))
        p_support, p_mass = random_masses(rng, names, total)
        q_support, q_mass = random_masses(rng, names, total)
        p = QDistribution("x", {a: F(m, total) for a, m in zip(p_support, p_mass)})
        q = QDistribution("y", {b: F(m, total) for b, m in zip(q_support, q_mass)})

        # 정수 질량이면 정수 결합 중에 최적해가 있다 (수송 행렬은 완전 단모듈)
        best = min(
            sum((v * ground.get(a, b) for row, a in zip(coupling, p_support) for v, b in zip(row, q_support)), F(0))
            for coupling in integer_couplings(tuple(p_mass), tuple(q_mass))
        )
        assert hutchinson_distance(p, q, ground) == best / total

    def test_metric_properties(self, str1):
        table = hutchinson_metrics(build_subpattern_graph(str1))
        assert table.construction == "hutchinson"
        assert_metric(table)
