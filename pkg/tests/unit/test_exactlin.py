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

import random

import pytest
from sympy.polys.domains import GF, QQ

from tannakit.errors import DimensionMismatchError, FieldError, RankDeficientError, ScalarFormatError
from tannakit.exactlin import (MatrixExact, Subspace, column_space, express_in_rows, field_descriptor, field_from_descriptor,
                               format_scalar, intersect_many, inverse, is_invertible, kernel, kron, parse_scalar, rank,
                               right_inverse, subspace_kron)
from tannakit.main import RunConfig

seed = RunConfig.seed


def random_matrix(generator: random.Random, rows: int, cols: int) -> MatrixExact:
    return MatrixExact.from_rows([[generator.randint(-3, 3) for _ in range(cols)] for _ in range(rows)])


# scalars and fields

def test_parse_and_format_rationals():
    assert format_scalar(parse_scalar("2/4")) == "1/2"
    assert format_scalar(parse_scalar("-16/3")) == "-16/3"
    assert format_scalar(parse_scalar(7)) == "7"


def test_parse_scalar_rejects_zero_denominator():
    with pytest.raises(ScalarFormatError):
        parse_scalar("1/0")


def test_parse_scalar_rejects_garbage():
    with pytest.raises(ScalarFormatError):
        parse_scalar("x/2")
    with pytest.raises(ScalarFormatError):
        parse_scalar(True)


def test_parse_scalar_modulo_prime():
    field = GF(7)
    assert format_scalar(parse_scalar("1/3", field), field) == "5"
    with pytest.raises(ScalarFormatError):
        parse_scalar("1/7", field)


def test_field_descriptors():
    assert field_from_descriptor("Q") == QQ
    assert field_from_descriptor(None) == QQ
    assert field_from_descriptor({"Fp": 101}) == GF(101)
    assert field_descriptor(GF(101)) == {"Fp": 101}
    assert field_descriptor(QQ) == "Q"


def test_field_descriptor_rejects_composite_modulus():
    with pytest.raises(FieldError):
        field_from_descriptor({"Fp": 12})
    with pytest.raises(FieldError):
        field_from_descriptor("R")


# matrices

def test_kron_index_convention():
    a = MatrixExact.from_rows([[1, 2]])
    b = MatrixExact.from_rows([[0], [1]])
    assert kron(a, b) == MatrixExact.from_rows([[0, 0], [1, 2]])


def test_matmul_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        _ = MatrixExact.identity(2) @ MatrixExact.identity(3)


def test_inverse_of_q_form():
    b = MatrixExact.from_rows([["0", "1"], ["-1/3", "0"]])
    assert inverse(b) == MatrixExact.from_rows([["0", "-3"], ["1", "0"]])


def test_inverse_of_singular_matrix():
    with pytest.raises(RankDeficientError):
        inverse(MatrixExact.from_rows([[1, 2], [2, 4]]))
    assert not is_invertible(MatrixExact.from_rows([[1, 2], [2, 4]]))


def test_right_inverse():
    generator = random.Random(seed)
    for _ in range(10):
        m = random_matrix(generator, 2, 4)
        if rank(m) < 2:
            continue
        assert m @ right_inverse(m) == MatrixExact.identity(2)


def test_right_inverse_needs_full_row_rank():
    with pytest.raises(RankDeficientError):
        right_inverse(MatrixExact.from_rows([[1, 1], [1, 1]]))


def test_reshape_and_flatten():
    m = MatrixExact.from_rows([[1, 2, 3, 4]])
    assert m.reshape(2, 2) == MatrixExact.from_rows([[1, 2], [3, 4]])
    assert m.reshape(2, 2).flatten() == m.flatten()
    with pytest.raises(DimensionMismatchError):
        m.reshape(3, 1)


def test_to_strings():
    assert MatrixExact.from_rows([["1/2", "-3"]]).to_strings() == [["1/2", "-3"]]


# subspaces

def test_subspace_is_canonical():
    first = Subspace.from_vectors([[1, 1, 0], [0, 1, 1]], 3)
    second = Subspace.from_vectors([[1, 2, 1], [1, 0, -1]], 3)
    assert first == second
    assert first.dim == 2


def test_kernel_and_rank_nullity():
    generator = random.Random(seed)
    for _ in range(10):
        m = random_matrix(generator, 3, 5)
        null_space = kernel(m)
        assert null_space.dim + rank(m) == 5
        assert (m @ null_space.basis.transpose()).is_zero()


def test_column_space():
    m = MatrixExact.from_rows([[1, 0], [0, 0], [0, 1]])
    assert column_space(m) == Subspace.from_vectors([[1, 0, 0], [0, 0, 1]], 3)


def test_intersection():
    u = Subspace.from_vectors([[1, 0, 0], [0, 1, 0]], 3)
    w = Subspace.from_vectors([[0, 1, 0], [0, 0, 1]], 3)
    assert intersect_many([u, w]) == Subspace.from_vectors([[0, 1, 0]], 3)


def test_intersection_needs_common_ambient():
    with pytest.raises(DimensionMismatchError):
        intersect_many([Subspace.full(2), Subspace.full(3)])


def test_subspace_kron_dimension():
    u = Subspace.from_vectors([[1, -1]], 2)
    assert subspace_kron(u, Subspace.full(2)).dim == 2
    assert subspace_kron(u, Subspace.full(2)).ambient == 4


def test_contains_and_annihilator():
    u = Subspace.from_vectors([[0, 1, -1, 0]], 4)
    assert u.contains([0, 2, -2, 0])
    assert not u.contains([1, 0, 0, 0])
    assert u.annihilator().dim == 3


def test_express_in_rows():
    basis = MatrixExact.from_rows([[1, 0, 0], [0, 1, 1]])
    coordinates = express_in_rows(basis, MatrixExact.from_rows([[2, 3, 3]]))
    assert coordinates == MatrixExact.from_rows([[2, 3]])
    with pytest.raises(DimensionMismatchError):
        express_in_rows(basis, MatrixExact.from_rows([[0, 0, 1]]))
