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

import re

import jmespath
from jmespath import functions

_RATIONAL_PATTERN = re.compile(r"^\s*[+-]?\d+\s*(?:/\s*[+-]?\d+\s*)?$")


class SpecCustomFunctions(functions.Functions):

    @functions.signature({'types': ['string', 'number', 'boolean', 'null', 'array', 'object']})
    def _func_is_rational(self, value):
        if isinstance(value, bool):
            return False
        if isinstance(value, int):
            return True
        if not isinstance(value, str) or not _RATIONAL_PATTERN.match(value):
            return False
        # "p/0" parses but is not a number
        return not re.search(r"/\s*[+-]?0+\s*$", value)

    @functions.signature({'types': ['array']})
    def _func_is_square(self, rows):
        return all(isinstance(row, list) and len(row) == len(rows) for row in rows)

    @functions.signature({'types': []},
                         {'types': ['expref']},
                         {'types': ['expref']},
                         {'types': []})
    def _func_if(self, condition, if_true_expression, if_false_expression, node_scope):
        if condition:
            return if_true_expression.visit(if_true_expression.expression, node_scope)
        else:
            return if_false_expression.visit(if_false_expression.expression, node_scope)


JMESPATH_OPTIONS = jmespath.Options(custom_functions=SpecCustomFunctions())
