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
import os
import random

import pytest

from tannakit.bilform import (SNAKE_NORMALIZED, BilinearForm, bilinear_algebra, comorita_components, form_of_algebra, hb_presentation,
                              matrix_form_relations, quantum_dimension, snake_composites, tl_functor)
from tannakit.errors import DimensionMismatchError, NotASRegularError, SingularFormError
from tannakit.exactlin import MatrixExact, format_scalar, inverse, is_invertible
from tannakit.main import RunConfig
from tannakit.ncpoly import NCPoly, parse_signed_terms, span_equal
from tannakit.quadalg import QuadraticAlgebra

GOLDEN_DIRECTORY = os.path.join(os.path.dirname(os.path.realpath(__file__)), "golden")

seed = RunConfig.seed

b_q = BilinearForm.from_rows([["0", "1"], ["-1/3", "0"]])
b_3 = BilinearForm.from_rows([["1", "-16/3", "0"], ["1", "1", "0"], ["0", "0", "1"]])
identity_2 = BilinearForm.from_rows([[1, 0], [0, 1]])
identity_3 = BilinearForm.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])


def load_golden(name: str) -> dict:
    with open(os.path.join(GOLDEN_DIRECTORY, name), encoding="utf-8") as golden_file:
        return json.load(golden_file)


def random_invertible(generator: random.Random, n: int) -> MatrixExact:
    while True:
        g = MatrixExact.from_rows([[generator.randint(-2, 2) for _ in range(n)] for _ in range(n)])
        if is_invertible(g):
            return g


def test_tl_functor():
    functor = tl_functor(b_q)
    assert functor.matrices["psi"] == MatrixExact.from_rows([["0", "1", "-1/3", "0"]])
    assert functor.matrices["phi"] == MatrixExact.from_rows([["0"], ["-3"], ["1"], ["0"]])
    assert tl_functor(identity_2).matrices["phi"] == MatrixExact.from_rows([[1], [0], [0], [1]])


def test_snake_identities():
    for bf in (b_q, b_3, identity_2):
        first, second = snake_composites(bf)
        assert first == MatrixExact.identity(bf.n)
        assert second == MatrixExact.identity(bf.n)


def test_quantum_dimension():
    assert str(quantum_dimension(identity_2)) == "2"
    assert str(quantum_dimension(b_q)) == "-10/3"
    assert str(quantum_dimension(b_q).negated()) == "10/3"
    assert quantum_dimension(b_q).convention == SNAKE_NORMALIZED


def test_quantum_dimension_is_a_congruence_invariant():
    generator = random.Random(seed)
    for bf in (b_q, b_3):
        q = quantum_dimension(bf).value
        assert quantum_dimension(BilinearForm(bf.matrix.transpose())).value == q
        for _ in range(3):
            g = random_invertible(generator, bf.n)
            assert quantum_dimension(BilinearForm(g.transpose() @ bf.matrix @ g)).value == q


def test_hb_relations():
    golden = load_golden("hb_bq3.json")
    b = hb_presentation(BilinearForm.from_rows(golden["form"]), with_antipode_table=False)
    assert b.generators == tuple(golden["generators"])
    expected = [parse_signed_terms(terms) for terms in golden["relations"]]
    assert span_equal(b.relations, expected, 3, b.generators)
    assert format_scalar(quantum_dimension(BilinearForm.from_rows(golden["form"])).value) == golden["q"]


def test_hb_antipode():
    b = hb_presentation(b_q)
    a, b_, c, d = (NCPoly.symbol(s) for s in ("v_1_1", "v_1_2", "v_2_1", "v_2_2"))
    assert b.antipode["v_1_1"] == d
    assert b.antipode["v_1_2"] == b_.scale(b_.field.convert(-3))
    assert b.antipode["v_2_1"] == c.scale(c.field.convert(-1) / c.field.convert(3))
    assert b.antipode["v_2_2"] == a


def test_hb_antipode_of_identity_form():
    b = hb_presentation(identity_2)
    assert b.antipode["v_1_2"] == NCPoly.symbol("v_2_1")
    assert b.antipode["v_2_1"] == NCPoly.symbol("v_1_2")


def test_matrix_form_agrees_when_inverse_is_proportional():
    for bf in (b_q, identity_2):
        b = hb_presentation(bf, with_antipode_table=False)
        assert span_equal(b.relations, matrix_form_relations(bf), 3, b.generators)


def test_comorita_classes():
    classes = comorita_components([b_q, b_3, identity_2, identity_3])
    assert [c.members for c in classes] == [(0, 1), (2,), (3,)]
    assert [str(c.q) for c in classes] == ["-10/3", "2", "3"]
    single = comorita_components([b_3])
    assert len(single) == 1
    assert single[0].members == (0,)


def test_degenerate_forms_are_rejected():
    with pytest.raises(SingularFormError):
        BilinearForm.from_rows([[1, 1], [1, 1]])
    with pytest.raises(DimensionMismatchError):
        BilinearForm.from_rows([[1, 0, 0], [0, 1, 0]])
    with pytest.raises(DimensionMismatchError):
        BilinearForm.from_rows([[1]])


def test_coevaluation():
    assert b_q.coevaluation == inverse(b_q.matrix)


def test_form_of_polynomial_ring():
    kxy = QuadraticAlgebra.from_relations(2, [[("1", (0, 1)), ("-1", (1, 0))]])
    bf = form_of_algebra(kxy)
    assert bf.matrix == MatrixExact.from_rows([[0, 1], [-1, 0]])
    assert bilinear_algebra(bf) == kxy


def test_form_of_algebra_needs_two_generators():
    kxyz = QuadraticAlgebra.from_relations(3, [[("1", (0, 1)), ("-1", (1, 0))],
                                               [("1", (0, 2)), ("-1", (2, 0))],
                                               [("1", (1, 2)), ("-1", (2, 1))]])
    with pytest.raises(NotASRegularError):
        form_of_algebra(kxyz)
