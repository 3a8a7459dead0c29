import json
from fractions import Fraction

import pytest

from cosmkit.core.errors import CapExceededError, ParameterError, SystemValidationError, UnknownEntityError, UnknownMeasureError
from cosmkit.core.rational import INF
from cosmkit.system import (
    generate_builtin,
    load_system,
    load_system_file,
    serialize_system,
    system_fingerprint,
    system_from_dict,
    validate_filtration,
)
from cosmkit.system.fixtures import FIXTURES, write_fixtures


def minimal(**overrides):
    doc = {
        "entities": ["e", "a", "b", "ab"],
        "atoms": ["a", "b"],
        "operators": ["cat"],
        "reactions": [{"op": "cat", "left": "a", "right": "b", "products": ["ab"]}],
        "measures": [{"id": "m1", "operators": ["cat"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"cat": 1}}],
    }
    doc.update(overrides)
    return doc


def violation_codes(doc):
    with pytest.raises(SystemValidationError) as info:
        system_from_dict(doc)
    return {v["code"] for v in info.value.violations}


class TestLoader:
    def test_minimal_system(self):
        system = system_from_dict(minimal())
        assert system.entities == ("e", "a", "b", "ab")
        assert system.react("cat", "a", "b") == ("ab",)
        assert system.react("cat", "e", "ab") == ("ab",)
        assert system.react("cat", "b", "a") is None
        assert system.producers("ab")[0].key == ("cat", "a", "b")

    def test_unknown_operator(self):
        doc = minimal(reactions=[{"op": "mul", "left": "a", "right": "b", "products": ["ab"]}])
        assert "unknown_operator" in violation_codes(doc)

    def test_atom_producible(self):
        doc = minimal(reactions=[{"op": "cat", "left": "ab", "right": "ab", "products": ["a"]}])
        assert "atom_producible" in violation_codes(doc)

    def test_operand_atom_is_not_producible(self):
        doc = minimal(reactions=[{"op": "cat", "left": "a", "right": "b", "products": ["a"]}])
        assert "atom_producible" in violation_codes(doc)
        doc = minimal(reactions=[{"op": "cat", "left": "a", "right": "a", "products": ["a"]}])
        assert "atom_producible" in violation_codes(doc)

    def test_filtration_idempotence_may_return_atom(self):
        doc = minimal(operators=[{"id": "cat", "tags": ["filtration"]}],
                      reactions=[{"op": "cat", "left": "a", "right": "a", "products": ["a"]}])
        assert system_from_dict(doc).react("cat", "a", "a") == ("a",)
        doc["reactions"] = [{"op": "cat", "left": "a", "right": "b", "products": ["a"]}]
        assert "atom_producible" in violation_codes(doc)

    def test_duplicate_reaction(self):
        r = {"op": "cat", "left": "a", "right": "b", "products": ["ab"]}
        assert "duplicate_reaction" in violation_codes(minimal(reactions=[r, r]))

    def test_identity_operand_is_implicit(self):
        doc = minimal(reactions=[{"op": "cat", "left": "e", "right": "a", "products": ["a"]}])
        assert "identity_operand" in violation_codes(doc)

    def test_missing_costs_are_all_reported(self):
        doc = minimal(measures=[{"id": "m1", "operators": ["cat"], "atom_costs": {"a": 1}, "op_costs": {}}])
        assert {"missing_atom_cost", "missing_op_cost"} <= violation_codes(doc)

    def test_base_measure_containment(self):
        doc = minimal(
            operators=["cat", "sq"],
            measures=[
                {"id": "m1", "operators": ["cat", "sq"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"cat": 1, "sq": 1}},
                {"id": "m2", "operators": ["cat"], "atom_costs": {"a": 1, "b": 1}, "op_costs": {"cat": 1}},
            ])
        assert "base_measure_containment" in violation_codes(doc)

    def test_schema_violation_on_extra_key(self):
        doc = minimal(colour="blue")
        with pytest.raises(SystemValidationError) as info:
            system_from_dict(doc)
        assert info.value.code == "schema_violation"

    def test_malformed_json(self):
        with pytest.raises(SystemValidationError) as info:
            load_system("{not json")
        assert info.value.code == "malformed_json"

    def test_float_cost_rejected(self):
        doc = minimal(measures=[{"id": "m1", "operators": ["cat"], "atom_costs": {"a": 0.5, "b": 1},
                                 "op_costs": {"cat": 1}}])
        with pytest.raises(SystemValidationError):
            system_from_dict(doc)

    def test_measure_lookup(self, toy2):
        assert toy2.measure_index("m2") == 2
        assert toy2.measure_index("1") == 1
        with pytest.raises(UnknownMeasureError):
            toy2.measure("m9")

    def test_unknown_entity(self, toy1):
        with pytest.raises(UnknownEntityError):
            toy1.require_entity("zz")

    def test_reaction_cost_outside_measure_is_infinite(self, str1):
        assert str1.measure("m1").reaction_cost("sq", "a", "a") == INF
        assert str1.measure("m2").reaction_cost("sq", "a", "a") == Fraction(1, 2)

    def test_context_override(self, anomaly):
        m1 = anomaly.measure("m1")
        assert m1.reaction_cost("f", "c", "c") == 1
        assert m1.reaction_cost("f", "c", "c", "c") == 10


class TestSerialization:
    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_shipped_fixture_matches_builder(self, name, fixture_dir):
        shipped = load_system_file(fixture_dir / f"{name}.json")
        assert shipped == FIXTURES[name]()
        assert system_fingerprint(shipped) == system_fingerprint(FIXTURES[name]())

    def test_serialization_is_canonical(self, toy2):
        text = serialize_system(toy2)
        assert load_system(text) == toy2
        assert serialize_system(load_system(text)) == text
        assert list(json.loads(text)) == sorted(json.loads(text))

    def test_write_fixtures(self, tmp_path):
        written = write_fixtures(tmp_path)
        assert {p.name for p in written} == {f"{name}.json" for name in FIXTURES}

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_system_file(tmp_path / "none.json")


class TestGenerators:
    def test_string_concat_size(self):
        system = generate_builtin("string-concat", {"alphabet": ["a", "b"], "max_length": 4})
        assert len(system.entities) == 31
        assert system.react("cat", "ab", "ba") == ("abba",)
        assert system.react("cat", "abb", "ab") is None

    def test_gamma_system_size(self, gamma3):
        assert len(gamma3.entities) == 54
        assert gamma3.gamma.combinator == "G"
        assert gamma3.react("ap", "p", "{G|q|[p.q]}") == ("[[p.q].[p.q]]",)

    def test_perturbed_concat_is_deterministic(self):
        a = generate_builtin("perturbed-concat", {"amplitude": "1/4", "seed": 3})
        b = generate_builtin("perturbed-concat", {"amplitude": "1/4", "seed": 3})
        assert system_fingerprint(a) == system_fingerprint(b)
        offsets = a.measure("m2").reaction_cost_overrides.values()
        assert all(abs(v - Fraction(1, 2)) <= Fraction(1, 4) for v in offsets)

    def test_random_is_seeded(self):
        a = generate_builtin("random", {"seed": 11, "measures": 2})
        b = generate_builtin("random", {"seed": 11, "measures": 2})
        assert a == b
        assert a.measure(1).operators <= a.measure(2).operators

    def test_unknown_family(self):
        with pytest.raises(ParameterError):
            generate_builtin("fractal")

    def test_bad_params(self):
        with pytest.raises(ParameterError) as info:
            generate_builtin("string-concat", {"colour": "blue"})
        assert info.value.path.startswith("params")

    def test_entity_cap(self):
        with pytest.raises(CapExceededError):
            generate_builtin("string-concat", {"alphabet": ["a", "b", "c"], "max_length": 6})


class TestFiltration:
    def filtration_system(self, complete=True):
        reactions = [
            {"op": "meet", "left": "a", "right": "a", "products": ["a"]},
            {"op": "meet", "left": "a", "right": "b", "products": ["e"]},
            {"op": "meet", "left": "b", "right": "b", "products": ["b"]},
        ]
        if complete:
            reactions.append({"op": "meet", "left": "b", "right": "a", "products": ["e"]})
        return system_from_dict({
            "entities": ["e", "a", "b"],
            "atoms": ["a", "b"],
            "operators": [{"id": "meet", "tags": ["filtration"]}],
            "reactions": reactions,
            "measures": [{"id": "m1", "operators": ["meet"], "atom_costs": {"a": 1, "b": 1},
                          "op_costs": {"meet": 1}}],
        })

    def test_complete_filtration(self):
        report = validate_filtration(self.filtration_system())
        assert report.ok
        assert report.checked_pairs == 4

    def test_incomplete_filtration(self):
        report = validate_filtration(self.filtration_system(complete=False))
        assert not report.ok
        assert report.violations[0]["pair"] == ["b", "a"]

    def test_no_filtration_operator(self, toy1):
        report = validate_filtration(toy1)
        assert not report.ok
        assert report.violations[0]["code"] == "no_filtration_operator"
