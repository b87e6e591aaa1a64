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

from tannakit.errors import DimensionMismatchError, NotASRegularError, NotFiniteTypeError
from tannakit.exactlin import MatrixExact
from tannakit.quadalg import (QuadraticAlgebra, as_regular_check, graded_dims, hilbert_series_product, koszul_dual, relation_space_direct,
                              relation_spaces, require_as_regular, tensor_ideal)

kxy = QuadraticAlgebra.from_relations(2, [[("1", (0, 1)), ("-1", (1, 0))]], ("x", "y"))
jordan = QuadraticAlgebra.from_relations(2, [[("1", (0, 1)), ("-1", (1, 0)), ("-1", (1, 1))]], ("x", "y"))
qplane = QuadraticAlgebra.from_relations(2, [[("1", (0, 1)), ("-2", (1, 0))]], ("x", "y"))
xy_monomial = QuadraticAlgebra.from_relations(2, [[("1", (0, 1))]], ("x", "y"))
kxyz = QuadraticAlgebra.from_relations(3, [[("1", (0, 1)), ("-1", (1, 0))],
                                           [("1", (0, 2)), ("-1", (2, 0))],
                                           [("1", (1, 2)), ("-1", (2, 1))]], ("x", "y", "z"))
all_monomials = QuadraticAlgebra.from_relations(2, [[("1", (i, j))] for i in range(2) for j in range(2)])


def test_polynomial_ring_graded_dims():
    assert graded_dims(kxy, 4) == (1, 2, 3, 4, 5)
    assert graded_dims(kxyz, 3) == (1, 3, 6, 10)


def test_koszul_dual_of_polynomial_ring_is_exterior():
    dual = koszul_dual(kxy)
    assert dual.relations.dim == 3
    assert graded_dims(dual, 3) == (1, 2, 1, 0)
    assert dual.names == ("x*", "y*")
    assert koszul_dual(dual) == kxy


def test_hilbert_series_product():
    assert hilbert_series_product((1, 2, 3, 4), (1, 2, 1, 0)) == (1, 0, 0, 0)


def test_relation_spaces_of_polynomial_rings():
    assert tuple(space.dim for space in relation_spaces(kxy, 4)) == (2, 1, 0, 0)
    assert tuple(space.dim for space in relation_spaces(kxyz, 4)) == (3, 3, 1, 0)


def test_relation_space_recursion_matches_definition():
    for algebra in (kxy, jordan, kxyz):
        spaces = relation_spaces(algebra, 4)
        for l in range(1, 5):
            assert spaces[l - 1] == relation_space_direct(algebra, l)


def test_tensor_ideal_degree_three():
    assert tensor_ideal(kxy, 3).dim == 8 - 4


def test_as_regular_polynomial_ring():
    report = as_regular_check(kxy)
    assert report.as_regular
    assert report.d == 2
    assert report.dims == (2, 1, 0)
    assert report.pairing(1) == MatrixExact.from_rows([[0, 1], [-1, 0]])


def test_as_regular_three_variables():
    report = as_regular_check(kxyz)
    assert report.as_regular
    assert report.d == 3
    assert report.dims == (3, 3, 1, 0)
    assert len(report.pairings) == 2


def test_jordan_plane_pairing():
    report = require_as_regular(jordan)
    assert report.pairing(1) == MatrixExact.from_rows([[0, 1], [-1, -1]])


def test_quantum_plane_pairing():
    assert require_as_regular(qplane).pairing(1) == MatrixExact.from_rows([[0, 1], [-2, 0]])


def test_monomial_relation_has_degenerate_pairing():
    report = as_regular_check(xy_monomial)
    assert report.frobenius_top_one
    assert report.koszul_series_consistent
    assert not report.pairings_nondegenerate
    assert not report.as_regular
    assert report.pairing(1) == MatrixExact.from_rows([[0, 1], [0, 0]])
    with pytest.raises(NotASRegularError):
        require_as_regular(xy_monomial)


def test_infinite_type_is_reported():
    with pytest.raises(NotFiniteTypeError):
        as_regular_check(all_monomials, nmax=4)


def test_relations_live_in_v_tensor_v():
    with pytest.raises(DimensionMismatchError):
        QuadraticAlgebra.from_relations(2, [[("1", (0, 2))]])
    with pytest.raises(DimensionMismatchError):
        QuadraticAlgebra.from_relations(2, [[("1", (0, 1))]], ("x",))


def test_relation_strings():
    assert kxy.relation_strings() == ["x*y - y*x"]
    assert QuadraticAlgebra.from_relations(2, [[("2", (0, 0))]]).relation_strings() == ["x1*x1"]
