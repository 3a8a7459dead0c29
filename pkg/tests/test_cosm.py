from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cosmkit.core.errors import CapExceededError, ExpressionError, ParameterError, UnknownEntityError
from cosmkit.core.rational import INF
from cosmkit.cosm import (
    EXACT,
    FREE,
    GREEDY,
    LITERAL,
    SEQUENCE,
    CosmEngine,
    Expression,
    multiset_union,
    oracle_plan_cost,
    parse_expression,
    parse_multiset,
    random_expression,
)
from cosmkit.cosm.expression import postorder_addresses
from cosmkit.system import generate_builtin, system_from_dict
from cosmkit.system.fixtures import FIXTURES


def corpus(count, measures=1):
    """≤ 12 엔티티, ≤ 3 연산자, 분모 ≤ 16 의 시드 고정 무작위 시스템"""
    for seed in range(count):
        yield generate_builtin("random", {
            "seed": seed,
            "atoms": 2 + seed % 2,
            "composites": 4 + seed % 6,
            "operators": 1 + seed % 3,
            "measures": measures,
            "reactions": 10,
            "max_denominator": 16,
            "context_overrides": seed % 3,
        })


class TestSimplicity:
    def test_toy1_values(self, toy1):
        engine = CosmEngine(toy1)
        assert engine.simplicity(1, "ab") == 3
        assert engine.simplicity("m1", "aba") == 5
        assert engine.simplicity(1, "e") == 0

    def test_relative_modes(self, toy1):
        engine = CosmEngine(toy1)
        assert engine.relative_simplicity(1, "aba", "ab", FREE) == 2
        assert engine.relative_simplicity(1, "aba", "ab", LITERAL) == 5
        assert engine.relative_simplicity(1, "ab", "ab", FREE) == 0

    def test_str1_powers(self, str1):
        engine = CosmEngine(str1)
        for n in range(1, 9):
            assert engine.simplicity(1, "a" * n) == 2 * n - 1

    def test_str1_extended_measure_uses_squaring(self, str1):
        engine = CosmEngine(str1)
        # aa = sq(a,a) = 5/2, aaaa = sq(aa,aa) = 11/2
        assert engine.simplicity(2, "aa") == Fraction(5, 2)
        assert engine.simplicity(2, "aaaa") == Fraction(11, 2)
        assert engine.simplicity(2, "a" * 8) == Fraction(23, 2)

    def test_operator_outside_measure_is_unreachable(self):
        system = system_from_dict({
            "entities": ["e", "a", "b", "ab"],
            "atoms": ["a", "b"],
            "operators": ["cat", "sq"],
            "reactions": [{"op": "sq", "left": "a", "right": "b", "products": ["ab"]}],
            "measures": [
                {"id": "m1", "operators": ["cat"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"cat": 1}},
                {"id": "m2", "operators": ["cat", "sq"], "atom_costs": {"a": 1, "b": 1},
                 "op_costs": {"cat": 1, "sq": 2}},
            ],
        })
        engine = CosmEngine(system)
        assert engine.simplicity(1, "ab") == INF
        assert engine.simplicity(2, "ab") == 4
        assert engine.witness(1, "ab") is None

    def test_context_is_validated(self, toy1):
        with pytest.raises(UnknownEntityError):
            CosmEngine(toy1).relative_simplicity(1, "ab", "zz")

    def test_unknown_mode(self, toy1):
        with pytest.raises(ParameterError):
            CosmEngine(toy1).relative_simplicity(1, "ab", "a", "loose")

    @pytest.mark.parametrize("name", sorted(FIXTURES))
    @pytest.mark.parametrize("mode", [FREE, LITERAL])
    def test_identity_context_is_absolute(self, name, mode):
        system = FIXTURES[name]()
        engine = CosmEngine(system)
        for j in range(1, system.measure_count + 1):
            for x in system.entities:
                assert engine.relative_simplicity(j, x, "e", mode) == engine.simplicity(j, x)

    def test_tree_context_pays_per_use(self, str1):
        # a 를 두 번 쓰므로 트리 비용은 a 경유 우회보다 비싸다
        engine = CosmEngine(str1)
        assert engine.simplicity(1, "aa") == 3
        assert engine.relative_simplicity(1, "aa", "a") + engine.simplicity(1, "a") == 2

    def test_sequence_values(self, str1):
        engine = CosmEngine(str1)
        for n in range(1, 9):
            assert engine.relative_simplicity(1, "a" * n, "e", SEQUENCE) == n
        assert engine.relative_simplicity(2, "aa", "e", SEQUENCE) == Fraction(3, 2)
        assert engine.relative_simplicity(2, "aaaa", "e", SEQUENCE) == 2
        plan = engine.sequence_plan(2, "aaaa")
        assert plan.value == 2
        assert [r.op for r in plan.plan] == ["sq", "sq"]

    def test_sequence_context_triangle(self, str1):
        engine = CosmEngine(str1)
        for j in (1, 2):
            for y, w, z in product(str1.entities, repeat=3):
                assert (engine.relative_simplicity(j, y, z, SEQUENCE)
                        <= engine.relative_simplicity(j, y, w, SEQUENCE)
                        + engine.relative_simplicity(j, w, z, SEQUENCE))

    def test_sequence_mode_never_exceeds_tree_cost(self, toy2):
        engine = CosmEngine(toy2)
        for j in (1, 2):
            for x in toy2.entities:
                assert engine.relative_simplicity(j, x, "e", SEQUENCE) <= engine.simplicity(j, x)

    def test_memo_is_reused(self, toy1):
        engine = CosmEngine(toy1)
        engine.simplicity(1, "ab")
        engine.simplicity(1, "aba")
        assert engine.stats["fixpoint_runs"] == 1
        assert engine.stats["memo_hits"] >= 1

    def test_disk_cache_round_trip(self, toy1, tmp_path):
        from cosmkit.core.config import CosmConfig
        config = CosmConfig(engine={"cache_dir": str(tmp_path)})
        CosmEngine(toy1, config).simplicity(1, "aba")
        second = CosmEngine(toy1, config)
        assert second.simplicity(1, "aba") == 5
        assert second.stats["disk_hits"] == 1
        assert second.stats["fixpoint_runs"] == 0


class TestWitness:
    def test_witness_reproduces_value(self, toy1):
        engine = CosmEngine(toy1)
        witness = engine.witness(1, "aba")
        assert engine.evaluate(witness) == "aba"
        assert engine.expression_cost(1, witness) == 5
        assert str(witness) in ("cat(cat(a,b),a)", "cat(a,cat(b,a))")

    def test_witness_addresses(self, toy1):
        witness = CosmEngine(toy1).witness(1, "ab")
        assert postorder_addresses(witness) == ["cat(a,b)#1"]

    def test_literal_witness_uses_context_leaf(self, toy1):
        witness = CosmEngine(toy1).witness(1, "aba", "ab", LITERAL)
        assert "ab" in list(witness.leaves())
        assert "aba" == CosmEngine(toy1).evaluate(witness)

    def test_no_witness_in_sequence_mode(self, toy1):
        assert CosmEngine(toy1).witness(1, "ab", "e", SEQUENCE) is None


class TestExpressions:
    def test_parse_and_print(self):
        expr = parse_expression("cat(cat(a,b),a)")
        assert str(expr) == "cat(cat(a,b),a)"
        assert expr.size == 5
        assert list(expr.leaves()) == ["a", "b", "a"]

    def test_product_selection(self):
        expr = parse_expression("f(c, c)#2")
        assert expr.select == 2
        assert str(expr) == "f(c,c)#2"

    @pytest.mark.parametrize("bad", ["cat(a,b", "cat(a)", "cat(a,b)#0", "cat(a,b)x", ""])
    def test_parse_errors(self, bad):
        with pytest.raises(ExpressionError):
            parse_expression(bad)

    def test_evaluation_errors(self, toy1):
        with pytest.raises(ExpressionError):
            CosmEngine(toy1).evaluate(parse_expression("cat(b,b)"))

    def test_identity_leaf_is_free(self, toy1):
        engine = CosmEngine(toy1)
        expr = Expression.node("cat", Expression.leaf("e"), Expression.leaf("ab"))
        assert engine.evaluate(expr) == "ab"
        assert engine.expression_cost(1, expr) == 3

    def test_expression_cost_counts_duplicates(self, anomaly):
        engine = CosmEngine(anomaly)
        assert engine.evaluate(parse_expression("f(c,c)#2")) == "q"
        assert engine.expression_cost(1, parse_expression("h(f(c,c)#1,f(c,c)#2)")) == 7

    @pytest.mark.parametrize("name", ["toy1", "str1"])
    @settings(max_examples=500, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_expression_cost_bounds_simplicity(self, name, seed):
        system = FIXTURES[name]()
        engine = CosmEngine(system)
        expr = random_expression(system, np.random.default_rng(seed), max_depth=5)
        x = engine.evaluate(expr)
        for j in range(1, system.measure_count + 1):
            assert engine.simplicity(j, x) <= engine.expression_cost(j, expr)

    def test_minimal_trees_achieve_equality(self, toy1, str1):
        concat = generate_builtin("string-concat", {"alphabet": ["a", "b"], "max_length": 4})
        cases = 0
        for system in (toy1, str1, concat):
            engine = CosmEngine(system)
            for j in range(1, system.measure_count + 1):
                for x in system.non_identity_entities:
                    witness = engine.witness(j, x)
                    if witness is None:
                        continue
                    assert engine.evaluate(witness) == x
                    assert engine.expression_cost(j, witness) == engine.simplicity(j, x)
                    cases += 1
        assert cases >= 50


class TestMultiset:
    def test_parse(self):
        assert parse_multiset("ab:1, aba:2") == {"ab": 1, "aba": 2}
        assert parse_multiset("a") == {"a": 1}
        with pytest.raises(ParameterError):
            parse_multiset("a:0")
        with pytest.raises(ParameterError):
            parse_multiset("")

    def test_shared_plan(self, toy1):
        engine = CosmEngine(toy1)
        result = engine.multiset_simplicity(1, {"ab": 1, "aba": 1})
        assert result.value == 5
        assert not result.approximate

    def test_duplicates_are_free(self, toy1):
        engine = CosmEngine(toy1)
        result = engine.multiset_simplicity(1, {"ab": 3})
        assert result.value == 3
        assert result.free_duplicates == 2
        assert result.normalized == 1

    def test_atoms_cost_per_support_element(self, toy1):
        assert CosmEngine(toy1).multiset_simplicity(1, {"a": 2, "b": 1}).value == 2

    def test_greedy_upper_bounds_exact(self, toy2):
        engine = CosmEngine(toy2)
        for j in (1, 2):
            exact = engine.multiset_simplicity(j, {"aaaa": 1, "ab": 1}, EXACT)
            greedy = engine.multiset_simplicity(j, {"aaaa": 1, "ab": 1}, GREEDY)
            assert exact.value <= greedy.value
            assert greedy.approximate

    def test_vector(self, toy2):
        # aa 를 한 번 만들어 두 번 쓴다
        assert CosmEngine(toy2).multiset_vector({"aa": 1, "aaaa": 1}) == (Fraction(4), Fraction(5))

    def test_exact_cap(self, gamma3):
        with pytest.raises(CapExceededError):
            CosmEngine(gamma3).multiset_simplicity(1, {"[p.q]": 1})

    def test_unknown_solver(self, toy1):
        with pytest.raises(ParameterError):
            CosmEngine(toy1).multiset_simplicity(1, {"ab": 1}, "annealing")

    @pytest.mark.slow
    @pytest.mark.parametrize("name", ["toy1", "toy2"])
    def test_subadditivity(self, name):
        system = FIXTURES[name]()
        engine = CosmEngine(system)
        universe = system.non_identity_entities[:5]
        # 공집합이 아닌 모든 지지집합, 중복도 1 또는 2
        multisets = []
        for counts in product((0, 1, 2), repeat=len(universe)):
            elements = {x: n for x, n in zip(universe, counts) if n}
            if elements:
                multisets.append(elements)
        assert len(multisets) == 3 ** len(universe) - 1
        memo = {}

        def plan(j, elements):
            key = (j, tuple(sorted(elements.items())))
            if key not in memo:
                memo[key] = engine.multiset_simplicity(j, elements)
            return memo[key]

        for j in range(1, system.measure_count + 1):
            for s in multisets:
                for t in multisets:
                    union, left, right = plan(j, multiset_union(s, t)), plan(j, s), plan(j, t)
                    assert union.value <= left.value + right.value
                    assert union.size == left.size + right.size
                    assert union.normalized <= max(left.normalized, right.normalized)


class TestOracle:
    def test_toy1(self, toy1):
        engine = CosmEngine(toy1)
        for x in toy1.entities:
            assert engine.oracle_simplicity(1, x) == engine.simplicity(1, x)
            assert engine.oracle_simplicity(1, x, "ab", LITERAL) == engine.relative_simplicity(1, x, "ab", LITERAL)

    def test_anomaly_contexts(self, anomaly):
        engine = CosmEngine(anomaly)
        for mode in (FREE, LITERAL):
            for j in (1, 2):
                for x in anomaly.entities:
                    assert engine.oracle_simplicity(j, x, "c", mode) == engine.relative_simplicity(j, x, "c", mode)

    def test_sequence_mode(self, toy2, str1):
        for system in (toy2, str1):
            engine = CosmEngine(system)
            for x in system.entities:
                assert engine.oracle_simplicity(1, x, "e", SEQUENCE) == engine.relative_simplicity(1, x, "e", SEQUENCE)

    def test_oracle_cap(self, gamma3):
        with pytest.raises(CapExceededError):
            CosmEngine(gamma3).oracle_simplicity(1, "p")

    def test_plan_oracle_reaction_cap(self, str1):
        with pytest.raises(CapExceededError) as info:
            oracle_plan_cost(str1, str1.measure(1), ["aaaa"], reaction_cap=1)
        assert info.value.path == "solver.oracle_reaction_cap"

        from cosmkit.core.config import CosmConfig
        engine = CosmEngine(str1, CosmConfig(solver={"oracle_reaction_cap": 1}))
        with pytest.raises(CapExceededError) as info:
            engine.oracle_simplicity(1, "aaaa", "e", SEQUENCE)
        assert info.value.path == "solver.oracle_reaction_cap"

    def test_random_corpus(self):
        for system in corpus(40):
            engine = CosmEngine(system)
            context = system.entities[-1]
            for x in system.entities:
                assert engine.simplicity(1, x) == engine.oracle_simplicity(1, x)
                for mode in (FREE, LITERAL):
                    assert (engine.relative_simplicity(1, x, context, mode)
                            == engine.oracle_simplicity(1, x, context, mode))

    @pytest.mark.slow
    def test_full_random_corpus(self):
        for system in corpus(200, measures=2):
            engine = CosmEngine(system)
            for j in (1, 2):
                for x in system.entities:
                    assert engine.simplicity(j, x) == engine.oracle_simplicity(j, x)
