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

"""Exact dense linear algebra over QQ and GF(p).

Matrices are immutable tuples of sympy domain elements. Row reduction, inversion and products are
delegated to sympy's DomainMatrix. Subspaces are stored by their reduced row-echelon basis, so two
subspaces are equal exactly when their dataclasses compare equal.

Kronecker convention, fixed for the whole package: the composite row index (i, k) of kron(a, b)
is i * rows(b) + k, and the composite column index (j, l) is j * cols(b) + l.
"""

import re
from dataclasses import dataclass
from functools import reduce
from typing import Any, Dict, Iterable, List, NamedTuple, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from .errors import DimensionMismatchError, FieldError, RankDeficientError, ScalarFormatError
from .util.util_misc import get_int_environment_value

DEFAULT_PRIME = get_int_environment_value("TANNAKIT_PRIME", 32003)

_SCALAR_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")

Field = Any
Scalar = Any


def field_from_descriptor(descriptor: Union[str, Dict, None]) -> Field:
    if descriptor is None or descriptor in ("Q", "QQ"):
        return QQ
    if isinstance(descriptor, dict) and "Fp" in descriptor:
        prime = descriptor["Fp"]
        if not isinstance(prime, int) or isinstance(prime, bool) or not isprime(prime):
            raise FieldError(f"Fp modulus must be a prime integer, got {prime!r}")
        return GF(prime)
    raise FieldError(f"Unsupported field descriptor: {descriptor!r}")


def field_descriptor(field: Field) -> Union[str, Dict]:
    return "Q" if field == QQ else {"Fp": int(field.mod)}


def is_rational_field(field: Field) -> bool:
    return field == QQ


def parse_scalar(text: Union[str, int], field: Field = QQ) -> Scalar:
    if isinstance(text, bool):
        raise ScalarFormatError(f"Not a scalar: {text!r}")
    if isinstance(text, int):
        return field.convert(text)
    match = _SCALAR_PATTERN.match(str(text))
    if not match:
        raise ScalarFormatError(f"Malformed rational '{text}', expected 'p' or 'p/q'")
    numerator = int(match.group(1))
    denominator = int(match.group(2)) if match.group(2) is not None else 1
    if denominator == 0:
        raise ScalarFormatError(f"Zero denominator in '{text}'")
    converted = field.convert(denominator)
    if not converted:
        raise ScalarFormatError(f"Denominator of '{text}' vanishes in {field}")
    return field.convert(numerator) / converted


def format_scalar(value: Scalar, field: Field = QQ) -> str:
    if is_rational_field(field):
        numerator = int(field.numer(value))
        denominator = int(field.denom(value))
        return str(numerator) if denominator == 1 else f"{numerator}/{denominator}"
    return str(int(value) % int(field.mod))


def _coerce(value: Any, field: Field) -> Scalar:
    if isinstance(value, str):
        return parse_scalar(value, field)
    return field.convert(value)


@dataclass(frozen=True)
class MatrixExact:
    rows: int
    cols: int
    entries: Tuple[Tuple[Scalar, ...], ...]
    field: Field = QQ

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(row) != self.cols for row in self.entries):
            raise DimensionMismatchError(f"Entry table does not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], field: Field = QQ, cols: int = None) -> "MatrixExact":
        converted = tuple(tuple(_coerce(x, field) for x in row) for row in rows)
        width = cols if cols is not None else (len(converted[0]) if converted else 0)
        return cls(len(converted), width, converted, field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Field = QQ) -> "MatrixExact":
        return cls(rows, cols, tuple(tuple(field.zero for _ in range(cols)) for _ in range(rows)), field)

    @classmethod
    def identity(cls, n: int, field: Field = QQ) -> "MatrixExact":
        return cls(n, n, tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n)), field)

    @classmethod
    def from_domain_matrix(cls, dm: DomainMatrix, field: Field) -> "MatrixExact":
        rows, cols = dm.shape
        if rows == 0 or cols == 0:
            return cls.zeros(rows, cols, field)
        return cls(rows, cols, tuple(tuple(field.convert(x) for x in row) for row in dm.to_list()), field)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def to_domain_matrix(self) -> DomainMatrix:
        sparse = {}
        for i, row in enumerate(self.entries):
            nonzero = {j: x for j, x in enumerate(row) if x}
            if nonzero:
                sparse[i] = nonzero
        return DomainMatrix(sparse, (self.rows, self.cols), self.field)

    def transpose(self) -> "MatrixExact":
        return MatrixExact(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else
                           tuple(() for _ in range(self.cols)), self.field)

    def __matmul__(self, other: "MatrixExact") -> "MatrixExact":
        if self.cols != other.rows:
            raise DimensionMismatchError(f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if 0 in (self.rows, self.cols, other.cols):
            return MatrixExact.zeros(self.rows, other.cols, self.field)
        product = self.to_domain_matrix().matmul(other.to_domain_matrix())
        return MatrixExact.from_domain_matrix(product, self.field)

    def __add__(self, other: "MatrixExact") -> "MatrixExact":
        self._check_same_shape(other)
        return MatrixExact(self.rows, self.cols, tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)),
                           self.field)

    def __sub__(self, other: "MatrixExact") -> "MatrixExact":
        self._check_same_shape(other)
        return MatrixExact(self.rows, self.cols, tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(self.entries, other.entries)),
                           self.field)

    def scale(self, factor: Scalar) -> "MatrixExact":
        return MatrixExact(self.rows, self.cols, tuple(tuple(factor * x for x in row) for row in self.entries), self.field)

    def is_zero(self) -> bool:
        return not any(x for row in self.entries for x in row)

    def row(self, i: int) -> Tuple[Scalar, ...]:
        return self.entries[i]

    def column(self, j: int) -> Tuple[Scalar, ...]:
        return tuple(row[j] for row in self.entries)

    def select_rows(self, indices: Iterable[int]) -> "MatrixExact":
        selected = tuple(self.entries[i] for i in indices)
        return MatrixExact(len(selected), self.cols, selected, self.field)

    def select_columns(self, indices: Iterable[int]) -> "MatrixExact":
        indices = list(indices)
        return MatrixExact(self.rows, len(indices), tuple(tuple(row[j] for j in indices) for row in self.entries), self.field)

    def flatten(self) -> Tuple[Scalar, ...]:
        return tuple(x for row in self.entries for x in row)

    def reshape(self, rows: int, cols: int) -> "MatrixExact":
        flat = self.flatten()
        if rows * cols != len(flat):
            raise DimensionMismatchError(f"Cannot reshape {self.rows}x{self.cols} into {rows}x{cols}")
        return MatrixExact(rows, cols, tuple(flat[i * cols:(i + 1) * cols] for i in range(rows)), self.field)

    def to_strings(self) -> List[List[str]]:
        return [[format_scalar(x, self.field) for x in row] for row in self.entries]

    def _check_same_shape(self, other: "MatrixExact"):
        if self.shape != other.shape:
            raise DimensionMismatchError(f"Shape mismatch {self.shape} vs {other.shape}")


class RowEchelon(NamedTuple):
    matrix: MatrixExact
    pivots: Tuple[int, ...]
    rank: int


def rref(m: MatrixExact) -> RowEchelon:
    if m.rows == 0 or m.cols == 0 or m.is_zero():
        return RowEchelon(MatrixExact.zeros(m.rows, m.cols, m.field), (), 0)
    reduced, pivots = m.to_domain_matrix().rref()
    return RowEchelon(MatrixExact.from_domain_matrix(reduced, m.field), tuple(pivots), len(pivots))


def rank(m: MatrixExact) -> int:
    return rref(m).rank


def hstack(*blocks: MatrixExact) -> MatrixExact:
    if len({b.rows for b in blocks}) > 1:
        raise DimensionMismatchError("hstack needs equal row counts")
    rows = blocks[0].rows
    return MatrixExact(rows, sum(b.cols for b in blocks), tuple(sum((b.entries[i] for b in blocks), ()) for i in range(rows)),
                       blocks[0].field)


def vstack(*blocks: MatrixExact) -> MatrixExact:
    if len({b.cols for b in blocks}) > 1:
        raise DimensionMismatchError("vstack needs equal column counts")
    return MatrixExact(sum(b.rows for b in blocks), blocks[0].cols, sum((b.entries for b in blocks), ()), blocks[0].field)


def kron(a: MatrixExact, b: MatrixExact) -> MatrixExact:
    entries = []
    for a_row in a.entries:
        for b_row in b.entries:
            entries.append(tuple(x * y for x in a_row for y in b_row))
    return MatrixExact(a.rows * b.rows, a.cols * b.cols, tuple(entries), a.field)


def kron_many(factors: Sequence[MatrixExact], field: Field = QQ) -> MatrixExact:
    return reduce(kron, factors, MatrixExact.identity(1, factors[0].field if factors else field))


def inverse(m: MatrixExact) -> MatrixExact:
    if m.rows != m.cols:
        raise RankDeficientError(f"Only square matrices are invertible, got {m.rows}x{m.cols}")
    if m.rows == 0:
        return m
    try:
        return MatrixExact.from_domain_matrix(m.to_domain_matrix().inv(), m.field)
    except DMNonInvertibleMatrixError as e:
        raise RankDeficientError("Matrix is singular") from e


def is_invertible(m: MatrixExact) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def right_inverse(m: MatrixExact) -> MatrixExact:
    echelon = rref(m)
    if echelon.rank != m.rows:
        raise RankDeficientError(f"Right inverse needs full row rank, rank is {echelon.rank} of {m.rows}")
    square_inverse = inverse(m.select_columns(echelon.pivots))
    rows = [[m.field.zero] * m.rows for _ in range(m.cols)]
    for position, column in enumerate(echelon.pivots):
        rows[column] = list(square_inverse.entries[position])
    return MatrixExact(m.cols, m.rows, tuple(tuple(row) for row in rows), m.field)


@dataclass(frozen=True)
class Subspace:
    ambient: int
    basis: MatrixExact

    @classmethod
    def span(cls, vectors: MatrixExact) -> "Subspace":
        echelon = rref(vectors)
        return cls(vectors.cols, echelon.matrix.select_rows(range(echelon.rank)))

    @classmethod
    def from_vectors(cls, vectors: Sequence[Sequence[Any]], ambient: int, field: Field = QQ) -> "Subspace":
        return cls.span(MatrixExact.from_rows(vectors, field, cols=ambient))

    @classmethod
    def full(cls, ambient: int, field: Field = QQ) -> "Subspace":
        return cls(ambient, MatrixExact.identity(ambient, field))

    @classmethod
    def zero(cls, ambient: int, field: Field = QQ) -> "Subspace":
        return cls(ambient, MatrixExact.zeros(0, ambient, field))

    @property
    def dim(self) -> int:
        return self.basis.rows

    @property
    def field(self) -> Field:
        return self.basis.field

    def __add__(self, other: "Subspace") -> "Subspace":
        _check_ambient([self, other])
        return Subspace.span(vstack(self.basis, other.basis))

    def contains(self, vector: Sequence[Scalar]) -> bool:
        candidate = MatrixExact(1, self.ambient, (tuple(_coerce(x, self.field) for x in vector),), self.field)
        return rank(vstack(self.basis, candidate)) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        return (self + other).dim == self.dim

    def annihilator(self) -> "Subspace":
        return kernel(self.basis)

    def coordinates(self, vectors: MatrixExact) -> MatrixExact:
        return express_in_rows(self.basis, vectors)


def kernel(m: MatrixExact) -> Subspace:
    """Null space {x : m x = 0} as a subspace of the column space of m."""
    echelon = rref(m)
    pivots = echelon.pivots
    free_columns = [j for j in range(m.cols) if j not in set(pivots)]
    vectors = []
    for free in free_columns:
        vector = [m.field.zero] * m.cols
        vector[free] = m.field.one
        for row_index, pivot in enumerate(pivots):
            vector[pivot] = -echelon.matrix.entries[row_index][free]
        vectors.append(tuple(vector))
    return Subspace.span(MatrixExact(len(vectors), m.cols, tuple(vectors), m.field))


def column_space(m: MatrixExact) -> Subspace:
    return Subspace.span(m.transpose())


def subspace_kron(u: Subspace, w: Subspace) -> Subspace:
    return Subspace.span(kron(u.basis, w.basis))


def _check_ambient(subspaces: Sequence[Subspace]):
    if len({s.ambient for s in subspaces}) > 1:
        raise DimensionMismatchError(f"Subspaces live in different ambient spaces: {sorted({s.ambient for s in subspaces})}")


def _intersect_pair(u: Subspace, w: Subspace) -> Subspace:
    if u.dim == 0 or w.dim == 0:
        return Subspace.zero(u.ambient, u.field)
    # (alpha, beta) with alpha U + beta W = 0 gives alpha U in both spaces
    relations = kernel(vstack(u.basis, w.basis).transpose())
    alphas = relations.basis.select_columns(range(u.dim))
    return Subspace.span(alphas @ u.basis) if alphas.rows else Subspace.zero(u.ambient, u.field)


def intersect_many(subspaces: Sequence[Subspace]) -> Subspace:
    if not subspaces:
        raise DimensionMismatchError("intersect_many needs at least one subspace")
    _check_ambient(subspaces)
    return reduce(_intersect_pair, subspaces[1:], subspaces[0])


def express_in_rows(basis: MatrixExact, vectors: MatrixExact) -> MatrixExact:
    """Rows of the result express each row of `vectors` in the independent rows of `basis`."""
    if vectors.rows == 0:
        return MatrixExact.zeros(0, basis.rows, basis.field)
    if basis.rows == 0:
        if not vectors.is_zero():
            raise DimensionMismatchError("Vector does not lie in the zero subspace")
        return MatrixExact.zeros(vectors.rows, 0, basis.field)
    coordinates = vectors @ right_inverse(basis)
    if coordinates @ basis != vectors:
        raise DimensionMismatchError("Vector does not lie in the span of the given rows")
    return coordinates
