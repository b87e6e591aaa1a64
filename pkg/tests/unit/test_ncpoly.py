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

import pytest
from sympy.polys.domains import QQ

from tannakit import logging as tannakit_logging
from tannakit.coendc import uend_direct
from tannakit.errors import DimensionMismatchError, NonGradedError, ScalarFormatError
from tannakit.ncpoly import (NCPoly, NCTensor, PresentedAlgebra, apply_to_tensor, bounded_span, format_poly, graded_dims,
                             outside_bounded_span, parse_signed_terms, reduce_with_stats, reduces_to_zero, rewrite_reduce,
                             rules_from_relations, signed_terms, signed_text, span_equal)
from tannakit.quadalg import QuadraticAlgebra

x, y = NCPoly.symbol("x"), NCPoly.symbol("y")
commutator = x * y - y * x

kxy = QuadraticAlgebra.from_relations(2, [[("1", (0, 1)), ("-1", (1, 0))]], ("x", "y"))


def test_noncommutative_product():
    assert x * y != y * x
    assert commutator.coefficient(["x", "y"]) == 1
    assert commutator.coefficient(["y", "x"]) == -1
    assert (commutator - commutator).is_zero()


def test_scalars_and_degree():
    p = NCPoly.from_terms([("1/2", ["x", "y", "y"]), ("3", [])])
    assert p.degree() == 3
    assert p.lengths() == (0, 3)
    assert p.symbols() == ("x", "y")
    assert p.scale(QQ(2)).coefficient(["x", "y", "y"]) == 1


def test_substitute_and_evaluate():
    p = commutator.substitute({"x": y + NCPoly.one()})
    assert p.is_zero()
    assert (x * x + y).evaluate({"x": QQ(3), "y": QQ(-1)}) == 8


def test_format_poly():
    p = NCPoly.from_terms([("1", ["a", "d"]), ("-1", ["c", "b"]), ("-1", ["delta"])])
    assert format_poly(p, ["a", "b", "c", "d", "delta"]) == "a*d - c*b - delta"
    assert format_poly(NCPoly.from_terms([("-1/3", ["x"]), ("2", [])])) == "-1/3*x + 2"
    assert format_poly(NCPoly.zero()) == "0"


def test_signed_terms():
    p = NCPoly.from_terms([("1", ["a", "d"]), ("-1", ["c", "b"]), ("-1", ["delta"])])
    terms = signed_terms(p, ["a", "b", "c", "d", "delta"])
    assert terms == [["1", ["a", "d"]], ["-1", ["c", "b"]], ["-1", ["delta"]]]
    assert parse_signed_terms(terms) == p
    assert signed_text(p, ["a", "b", "c", "d", "delta"]) == "+1 a d -1 c b -1 delta"


def test_parse_signed_terms_rejects_garbage():
    with pytest.raises(ScalarFormatError):
        parse_signed_terms([["1/0", ["a"]]])
    with pytest.raises(ScalarFormatError):
        parse_signed_terms([["1"]])


def test_tensor_product_and_comultiplication():
    images = {"x": NCTensor.tensor(x, x), "y": NCTensor.tensor(y, y)}
    expected = NCTensor.tensor(x * y, x * y) + NCTensor.tensor(y * x, y * x).scale(QQ(-1))
    assert apply_to_tensor(commutator, images) == expected
    assert apply_to_tensor(NCPoly.one(), images) == NCTensor.one()


def test_presented_algebra_validation():
    with pytest.raises(DimensionMismatchError):
        PresentedAlgebra(("x",), (1,), (commutator,))
    with pytest.raises(NonGradedError):
        PresentedAlgebra(("x", "y"), (1, 1), (x * y - y,))
    with pytest.raises(DimensionMismatchError):
        PresentedAlgebra(("x", "x"), (1, 1), ())


def test_graded_dims_of_polynomial_ring():
    algebra = PresentedAlgebra(("x", "y"), (1, 1), (commutator,))
    assert graded_dims(algebra, 3) == (1, 2, 3, 4)


def test_graded_dims_needs_length_grading():
    algebra = PresentedAlgebra(("x", "y"), (1, 0), (x * y - x,))
    with pytest.raises(NonGradedError):
        graded_dims(algebra, 2)


def test_uend_graded_dims():
    assert graded_dims(uend_direct(kxy), 3) == (1, 4, 13, 40)


def test_rules_orient_to_smaller_monomials():
    rules = rules_from_relations([commutator], ["x", "y"])
    assert len(rules) == 1
    assert rules[0].lhs == ("y", "x")
    assert rules[0].rhs == x * y
    assert str(rules[0]) == "y*x -> x*y"


def test_rewrite_reduce_sorts_words():
    rules = rules_from_relations([commutator], ["x", "y"])
    assert rewrite_reduce(y * y * x * x, rules) == x * x * y * y
    assert reduces_to_zero(y * x * y - y * y * x, rules)
    reduction = reduce_with_stats(y * y * x * x, rules)
    assert reduction.passes == 4
    assert not reduction.exhausted


def test_rewrite_pass_cap_warns(monkeypatch):
    warnings = []
    monkeypatch.setattr(tannakit_logging, "warning", lambda msg, caller, *args, **kwargs: warnings.append(caller))
    rules = rules_from_relations([commutator], ["x", "y"])
    reduction = reduce_with_stats(y * y * x * x, rules, max_passes=2)
    assert reduction.exhausted
    assert reduction.passes == 2
    assert warnings == ["rewrite-pass-cap-warning"]


def test_bounded_span():
    span = bounded_span([commutator], ["x", "y"], 3)
    # x·(xy - yx), (xy - yx)·x, y·(xy - yx), (xy - yx)·y and the relation itself
    assert span[0].dim == 5
    weighted = bounded_span([commutator], ["x", "y"], 3, {"x": 1, "y": 1})
    assert weighted[2].dim == 1
    assert weighted[3].dim == 4


def test_outside_bounded_span():
    inside = x * x * y - y * x * x
    outside = x * x - y * y
    assert outside_bounded_span([commutator, inside, outside], [commutator], ["x", "y"], 2) == [outside]
    assert outside_bounded_span([inside], [commutator], ["x", "y"], 3, {"x": 1, "y": 1}) == []
    mixed = x * y * x - y * x * x + outside
    assert outside_bounded_span([mixed], [commutator], ["x", "y"], 3, {"x": 1, "y": 1}) == [mixed]


def test_span_equal():
    assert span_equal([commutator], [commutator.scale(QQ(-2))], 3)
    assert not span_equal([commutator], [x * y], 3)
    assert span_equal([commutator, x * y], [x * y, y * x], 3)
