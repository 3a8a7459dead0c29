import json
from fractions import Fraction

import pytest

from cosmkit.core.errors import NoSuchDecompositionError, ParameterError, UndefinedIntensityError
from cosmkit.core.rational import GeometricMean
from cosmkit.cosmos import pareto_front_max
from cosmkit.pattern import FULL, MIXED, NONE, UNDEFINED, PatternEngine, classify_multipattern, oracle_frontier
from cosmkit.pattern.intensity import submultipattern_score
from cosmkit.system import generate_builtin, serialize_system, system_from_dict

F = Fraction


@pytest.fixture
def str1_three(str1):
    """STR1 에 sq 비용 4/11 인 세 번째 측도를 더한 시스템"""
    doc = json.loads(serialize_system(str1))
    doc["measures"].append({
        "id": "m3",
        "operators": ["cat", "sq"],
        "atom_costs": {"a": 1},
        "op_costs": {"cat": 1, "sq": "4/11"},
        "reaction_cost_overrides": [],
        "context_cost_overrides": [],
    })
    return system_from_dict(doc)


class TestIntensity:
    def test_squaring_pattern(self, str1):
        assert PatternEngine(str1).pattern_intensity("aa", "aa", "sq", "aaaa") == F(1, 14)

    def test_longer_square(self, str1):
        assert PatternEngine(str1).pattern_intensity("aaaa", "aaaa", "sq", "a" * 8) == F(1, 30)

    def test_plain_concatenation_is_no_pattern(self, str1):
        assert PatternEngine(str1).pattern_intensity("aaa", "a", "cat", "aaaa") == 0

    def test_requires_decomposition(self, str1):
        with pytest.raises(NoSuchDecompositionError):
            PatternEngine(str1).pattern_intensity("aa", "a", "sq", "aaaa")

    def test_requires_two_measures(self, toy1):
        with pytest.raises(ParameterError):
            PatternEngine(toy1).pattern_intensity("a", "b", "cat", "ab")

    def test_zero_base_is_undefined(self, str1):
        with pytest.raises(UndefinedIntensityError):
            PatternEngine(str1).pattern_intensity("aa", "aa", "sq", "aaaa", w="aaaa")

    def test_per_measure_denominator(self, str1):
        engine = PatternEngine(str1)
        assert engine.pattern_vector("aa", "aa", "sq", "aaaa", denominator="per-measure") == [F(1, 11)]
        assert engine.pattern_vector("aa", "aa", "sq", "aaaa", denominator="base") == [F(1, 14)]

    def test_unknown_denominator(self, str1):
        with pytest.raises(ParameterError):
            PatternEngine(str1).pattern_vector("aa", "aa", "sq", "aaaa", denominator="median")


class TestClassification:
    def test_full(self):
        label, mean = classify_multipattern((F(1, 14), F(1, 11)))
        assert label == FULL
        assert mean == GeometricMean(F(1, 154), 2)

    def test_mixed(self):
        assert classify_multipattern((F(1, 14), F(-1, 7))) == (MIXED, None)

    def test_none(self):
        assert classify_multipattern((F(0), F(-1, 2))) == (NONE, None)

    def test_undefined(self):
        assert classify_multipattern((F(1, 2), None)) == (UNDEFINED, None)

    def test_record(self, str1_three):
        records = {r.op: r for r in PatternEngine(str1_three).records("aaaa", denominator="base")}
        square = records["sq"]
        assert square.intensities == (F(1, 14), F(1, 11))
        assert square.classification == FULL
        assert square.pattern_in == [2, 3]
        assert submultipattern_score(square) == F(1, 14)
        assert records["cat"].classification == NONE

    def test_record_json(self, str1):
        record = PatternEngine(str1).records("aaaa", denominator="base")[-1]
        data = record.to_dict()
        assert data["intensities"] == ["1/14"]
        assert data["classification"] == FULL
        assert data["geometricMean"] == {"radicand": "1/14", "root": 1}


class TestFrontier:
    def test_square_dominates_concatenation(self, str1, str1_three):
        for system in (str1, str1_three):
            front = PatternEngine(system).multipattern_frontier("aaaa")
            assert [(r.y, r.z, r.op) for r in front] == [("aa", "aa", "sq")]

    def test_atom_has_empty_frontier(self, str1):
        assert PatternEngine(str1).multipattern_frontier("a") == []

    def test_single_decomposition(self, str1):
        front = PatternEngine(str1).multipattern_frontier("aaa")
        assert [(r.y, r.z, r.op) for r in front] == [("aa", "a", "cat")]

    def test_members_are_decompositions(self, str1):
        engine = PatternEngine(str1)
        for x in str1.entities:
            for record in engine.multipattern_frontier(x):
                assert x in str1.react(record.op, record.y, record.z)

    def test_removing_a_member_keeps_the_rest(self, str1_three):
        engine = PatternEngine(str1_three)
        for x in str1_three.entities:
            front = engine.multipattern_frontier(x)
            for i in range(len(front)):
                rest = front[:i] + front[i + 1:]
                assert pareto_front_max(rest, key=lambda r: r.intensities) == rest

    def test_oracle_agreement(self, str1, str1_three, anomaly):
        for system in (str1, str1_three, anomaly):
            engine = PatternEngine(system)
            for x in system.entities:
                assert engine.multipattern_frontier(x) == oracle_frontier(system, x)

    def test_random_corpus(self):
        for seed in range(20):
            system = generate_builtin("random", {"seed": seed, "measures": 3, "reactions": 8})
            engine = PatternEngine(system)
            for x in system.entities:
                assert engine.multipattern_frontier(x) == oracle_frontier(system, x)
