#   Copyright 2024 The tannakit Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.

import json

import pytest
from sympy.polys.domains import GF, QQ

from tannakit.errors import SpecError
from tannakit.spec_schema import (AlgebraSpec, Condition, FormsSpec, _create_rules, bundled_fixtures, emit_spec, parse_spec,
                                  spec_schema_engine)

BUNDLED = ["forms_bq3.json", "jordan.json", "kxy.json", "kxyz.json", "qplane2.json", "xy_monomial.json"]


def algebra_text(relations, dim_v=2, names=("x", "y"), field="Q") -> str:
    document = {"field": field, "dim_v": dim_v, "relations": relations}
    if names is not None:
        document["names"] = list(names)
    return json.dumps(document, indent=2)


def test_bundled_fixtures_parse():
    assert bundled_fixtures() == BUNDLED
    for fixture in BUNDLED:
        spec = parse_spec(fixture)
        expected = FormsSpec if fixture.startswith("forms") else AlgebraSpec
        assert isinstance(spec, expected)


def test_algebra_spec_content():
    spec = parse_spec("kxy.json")
    assert spec.field == QQ
    assert spec.dim_v == 2
    assert spec.names == ("x", "y")
    assert spec.relations == ((("1", (0, 1)), ("-1", (1, 0))),)
    assert spec.to_algebra().relations.dim == 1


def test_forms_spec_content():
    spec = parse_spec("forms_bq3.json")
    forms = spec.to_forms()
    assert [bf.n for bf in forms] == [2, 3, 2]
    assert spec.forms[0] == (("0", "1"), ("-1/3", "0"))


def test_emit_then_parse_gives_the_same_spec():
    for fixture in BUNDLED:
        spec = parse_spec(fixture)
        assert parse_spec(emit_spec(spec)) == spec


def test_coefficients_are_normalized():
    spec = parse_spec(algebra_text([[{"coef": "2/4", "word": [0, 1]}, {"coef": -1, "word": [1, 0]}]]))
    assert spec.relations == ((("1/2", (0, 1)), ("-1", (1, 0))),)


def test_field_override_and_descriptor():
    assert parse_spec("kxy.json", GF(7)).field == GF(7)
    spec = parse_spec(algebra_text([[{"coef": "1/3", "word": [0, 1]}]], field={"Fp": 7}))
    assert spec.field == GF(7)
    assert spec.relations == ((("5", (0, 1)),),)


def test_zero_denominator_is_rejected():
    text = algebra_text([[{"coef": "1/0", "word": [0, 1]}]])
    with pytest.raises(SpecError) as e:
        parse_spec(text)
    assert e.value.field == "relations[].coef"
    assert e.value.line == text.splitlines().index('  "relations": [') + 1


def test_non_quadratic_word_is_rejected():
    with pytest.raises(SpecError) as e:
        parse_spec(algebra_text([[{"coef": "1", "word": [0, 1, 1]}]]))
    assert e.value.field == "relations[].word"


def test_out_of_range_index_is_rejected():
    with pytest.raises(SpecError):
        parse_spec(algebra_text([[{"coef": "1", "word": [0, 2]}]]))


def test_names_must_match_dimension():
    with pytest.raises(SpecError) as e:
        parse_spec(algebra_text([[{"coef": "1", "word": [0, 1]}]], names=("x",)))
    assert e.value.field == "names"
    assert isinstance(parse_spec(algebra_text([[{"coef": "1", "word": [0, 1]}]], names=None)), AlgebraSpec)


def test_dimension_must_be_positive():
    with pytest.raises(SpecError) as e:
        parse_spec(algebra_text([], dim_v=0))
    assert e.value.field == "dim_v"


def test_composite_modulus_is_rejected():
    with pytest.raises(SpecError):
        parse_spec(algebra_text([[{"coef": "1", "word": [0, 1]}]], field={"Fp": 8}))


def test_non_square_form_is_rejected():
    with pytest.raises(SpecError) as e:
        parse_spec(json.dumps({"field": "Q", "forms": [[["1", "0"], ["0"]]]}))
    assert e.value.field == "forms[]"


def test_empty_forms_are_rejected():
    with pytest.raises(SpecError):
        parse_spec(json.dumps({"field": "Q", "forms": []}))


def test_malformed_json():
    with pytest.raises(SpecError) as e:
        parse_spec('{\n  "dim_v": 2,\n')
    assert e.value.line > 0


def test_missing_spec_file():
    with pytest.raises(SpecError):
        parse_spec("no_such_spec.json")


def test_rule_sets_are_loaded():
    engine = spec_schema_engine()
    assert set(engine.rule_sets) == {"algebra", "forms"}
    assert [rule.key for rule in engine.rule_sets["algebra"]][:2] == ["field", "dim_v"]


def test_conditions():
    assert Condition("$eq('true')").check(True)
    assert Condition("$type('string','object')").check({"Fp": 7})
    assert not Condition("$type('string','object')").check(7)
    assert Condition("$positive()").check(3)
    assert not Condition("$positive()").check(0)
    assert not Condition("$positive()").check(True)
    assert Condition("$empty()").check([])
    assert Condition("$nonempty()").check([1])


def test_invalid_conditions():
    assert not Condition("$unknown('x')").valid
    assert not Condition("$eq()").valid
    assert Condition("$positive()").valid


def test_invalid_rules_are_skipped():
    rules = _create_rules({"rules": [
        {"key": "dim_v", "pattern": "dim_v", "condition": "$positive()"},
        {"key": "dim_v", "condition": "$positive()"},
        {"key": "dim_v", "pattern": "dim_v", "condition": "$bogus()"},
    ]})
    assert len(rules) == 1
