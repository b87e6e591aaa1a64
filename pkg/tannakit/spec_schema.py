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

"""Rule-driven validation of the JSON inputs, and the algebra and form specs built from them.

Rule files in config/ hold named rule sets. Each rule extracts a value with a jmespath pattern and
checks it with a condition macro such as $eq('true'), $type('array'), $positive() or $empty().
"""

import json
import os
import re
from dataclasses import dataclass
from os import listdir
from os.path import isfile
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import jmespath
from jmespath.exceptions import JMESPathError

from . import logging
from .bilform import BilinearForm
from .errors import SpecError, TannakitError
from .exactlin import Field, MatrixExact, field_descriptor, field_from_descriptor, format_scalar, parse_scalar
from .jmespath import JMESPATH_OPTIONS
from .quadalg import QuadraticAlgebra

FIXTURES_DIRECTORY = os.path.join(os.path.dirname(os.path.realpath(__file__)), "fixtures")


def _json_type(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "boolean"
    if isinstance(value, (int, float)):
        return "number"
    if isinstance(value, str):
        return "string"
    if isinstance(value, list):
        return "array"
    return "object"


_CONDITION_CHECKER_MAP: Dict[str, Callable[[Any, List[str]], bool]] = {
    "$eq": lambda value, operands: str(value).casefold() == operands[0].casefold(),
    "$type": lambda value, operands: _json_type(value) in operands,
    "$positive": lambda value, operands: _json_type(value) == "number" and isinstance(value, int) and value > 0,
    "$empty": lambda value, operands: not value,
    "$nonempty": lambda value, operands: bool(value),
}

_OPERAND_FREE_CONDITIONS = {"$positive", "$empty", "$nonempty"}


class Condition:
    condition: str
    valid = True

    _checker = None
    _operands: List[str] = []

    def __init__(self, condition: str):
        self.condition = condition
        name = condition.split("(", 1)[0].strip()
        self._checker = _CONDITION_CHECKER_MAP.get(name, None)
        self._operands = re.findall(r"'(.*?)'", condition, re.DOTALL)

        if not self._checker:
            logging.warning(f"Unsupported condition macro: '{condition}'", "unsupported-condition-warning")
            self.valid = False
        elif not self._operands and name not in _OPERAND_FREE_CONDITIONS:
            logging.warning(f"Failed to parse condition operands for expression: '{condition}'", "condition-macro-parsing-warning")
            self.valid = False

    def check(self, value: Any) -> bool:
        return self._checker(value, self._operands)


@dataclass(frozen=True)
class SchemaRule:
    key: str
    pattern: str
    condition: Condition


class SpecSchemaEngine:
    rule_sets: Dict[str, List[SchemaRule]]

    def __init__(self):
        self.rule_sets = {}
        self._load_configs()

    def _load_configs(self):
        working_directory = os.path.dirname(os.path.realpath(__file__))
        config_directory = os.path.join(working_directory, "config")
        config_files = [
            file for file
            in listdir(config_directory)
            if isfile(os.path.join(config_directory, file)) and _is_json_file(file)
        ]
        for file in sorted(config_files):
            config_file_path = os.path.join(config_directory, file)
            try:
                with open(config_file_path, encoding="utf-8") as config_file:
                    config_json = json.load(config_file)
                    self.rule_sets[config_json.get("name", file[:-len(".json")])] = _create_rules(config_json)
            except Exception:
                logging.exception(f"Failed to load configuration file: '{config_file_path}'", "config-file-loading-exception")

    def validate(self, kind: str, document: Dict, text: str = ""):
        if kind not in self.rule_sets:
            raise SpecError(f"No validation rules loaded for '{kind}' specs")
        if not isinstance(document, dict):
            raise SpecError(f"A {kind} spec must be a JSON object")
        for rule in self.rule_sets[kind]:
            try:
                value = jmespath.search(rule.pattern, document, JMESPATH_OPTIONS)
            except JMESPathError as e:
                raise SpecError(f"Could not evaluate '{rule.pattern}': {e}", rule.key, _line_of(text, rule.key)) from e
            if not rule.condition.check(value):
                raise SpecError(f"Value {value!r} fails {rule.condition.condition}", rule.key, _line_of(text, rule.key))


def _create_rules(config_json: Dict) -> List[SchemaRule]:
    result = []
    for rule_json in config_json.get("rules", []):
        key = rule_json.get("key", None)
        pattern = rule_json.get("pattern", None)
        condition = rule_json.get("condition", None)
        if not (key and pattern and condition):
            logging.warning(f"Encountered invalid rule with missing parameter, parameters were: key = {key}, pattern = {pattern}, "
                            f"condition = {condition}", "rule-missing-parameter-warning")
            continue
        parsed_condition = Condition(condition)
        if parsed_condition.valid:
            result.append(SchemaRule(key, pattern, parsed_condition))
    return result


def _is_json_file(file: str) -> bool:
    return file.endswith(".json")


def _line_of(text: str, key: str) -> int:
    top_level = key.split("[", 1)[0].split(".", 1)[0]
    for number, line in enumerate(text.splitlines(), start=1):
        if f'"{top_level}"' in line:
            return number
    return 0


# Specs

RelationTerm = Tuple[str, Tuple[int, int]]


@dataclass(frozen=True)
class AlgebraSpec:
    field: Field
    dim_v: int
    names: Tuple[str, ...]
    relations: Tuple[Tuple[RelationTerm, ...], ...]

    def to_algebra(self) -> QuadraticAlgebra:
        return QuadraticAlgebra.from_relations(self.dim_v, self.relations, self.names, self.field)

    def to_json(self) -> Dict:
        document = {"field": field_descriptor(self.field), "dim_v": self.dim_v}
        if self.names:
            document["names"] = list(self.names)
        document["relations"] = [[{"coef": coefficient, "word": list(indices)} for coefficient, indices in relation]
                                 for relation in self.relations]
        return document


@dataclass(frozen=True)
class FormsSpec:
    field: Field
    forms: Tuple[Tuple[Tuple[str, ...], ...], ...]

    def to_forms(self) -> List[BilinearForm]:
        return [BilinearForm(MatrixExact.from_rows(rows, self.field)) for rows in self.forms]

    def to_json(self) -> Dict:
        return {"field": field_descriptor(self.field), "forms": [[list(row) for row in rows] for rows in self.forms]}


Spec = Union[AlgebraSpec, FormsSpec]

_spec_schema_engine: Optional[SpecSchemaEngine] = None


def spec_schema_engine() -> SpecSchemaEngine:
    global _spec_schema_engine  # pylint: disable=W0603
    if _spec_schema_engine is None:
        _spec_schema_engine = SpecSchemaEngine()
    return _spec_schema_engine


def read_spec_text(source: str) -> str:
    """`source` is JSON text, a path, or the file name of a bundled fixture such as kxy.json."""
    if source.lstrip().startswith("{"):
        return source
    for path in (source, os.path.join(FIXTURES_DIRECTORY, source)):
        if os.path.isfile(path):
            with open(path, encoding="utf-8") as spec_file:
                return spec_file.read()
    raise SpecError(f"No such spec file or bundled fixture: '{source}'")


def bundled_fixtures() -> List[str]:
    return sorted(file for file in listdir(FIXTURES_DIRECTORY) if _is_json_file(file))


def parse_spec(source: str, field_override: Optional[Field] = None) -> Spec:
    text = read_spec_text(source)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"Malformed JSON: {e.msg}", line=e.lineno) from e
    kind = "forms" if isinstance(document, dict) and "forms" in document else "algebra"
    spec_schema_engine().validate(kind, document, text)
    try:
        field = field_override or field_from_descriptor(document.get("field", "Q"))
        if kind == "forms":
            return _forms_spec(document, field)
        return _algebra_spec(document, field, text)
    except SpecError:
        raise
    except TannakitError as e:
        raise SpecError(str(e)) from e


def _normalized(coefficient: Union[str, int], field: Field) -> str:
    return format_scalar(parse_scalar(coefficient, field), field)


def _algebra_spec(document: Dict, field: Field, text: str) -> AlgebraSpec:
    dim_v = document["dim_v"]
    relations = []
    for relation in document["relations"]:
        terms = []
        for term in relation:
            i, j = term["word"]
            if not all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < dim_v for x in (i, j)):
                raise SpecError(f"Variable index out of range in word {term['word']}", "relations[].word", _line_of(text, "relations"))
            terms.append((_normalized(term["coef"], field), (i, j)))
        relations.append(tuple(terms))
    return AlgebraSpec(field, dim_v, tuple(document.get("names", ())), tuple(relations))


def _forms_spec(document: Dict, field: Field) -> FormsSpec:
    return FormsSpec(field, tuple(tuple(tuple(_normalized(entry, field) for entry in row) for row in rows) for rows in document["forms"]))


def emit_spec(spec: Spec) -> str:
    return json.dumps(spec.to_json(), indent=2)