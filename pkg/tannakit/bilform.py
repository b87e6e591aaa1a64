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

"""The universal quantum group H(b) of a non-degenerate bilinear form, its quantum dimension and co-Morita classes."""

from dataclasses import dataclass
from typing import List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from . import logging
from .coendc import DualityDatum, FiberFunctorData, PresentedBialgebra, antipode_derive, compile_coend, with_antipode
from .errors import DimensionMismatchError, NotASRegularError, SingularFormError
from .exactlin import Field, MatrixExact, Scalar, Subspace, format_scalar, inverse, is_invertible, kron
from .moncat import Letter, build_category, word
from .ncpoly import NCPoly
from .quadalg import QuadraticAlgebra, require_as_regular
from .self_monitoring import SelfMonitoring

SNAKE_NORMALIZED = "snake-normalized"


@dataclass(frozen=True)
class BilinearForm:
    """b(e_i, e_j) = matrix[i][j]."""
    matrix: MatrixExact

    def __post_init__(self):
        if self.matrix.rows != self.matrix.cols or self.matrix.rows < 2:
            raise DimensionMismatchError(f"A form needs a square matrix of size at least 2, got {self.matrix.shape}")
        if not is_invertible(self.matrix):
            raise SingularFormError("The form is degenerate")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], field: Field = QQ) -> "BilinearForm":
        return cls(MatrixExact.from_rows(rows, field))

    @property
    def n(self) -> int:
        return self.matrix.rows

    @property
    def field(self) -> Field:
        return self.matrix.field

    @property
    def coevaluation(self) -> MatrixExact:
        return inverse(self.matrix)


class QDim(NamedTuple):
    value: Scalar
    field: Field
    convention: str = SNAKE_NORMALIZED

    def negated(self) -> "QDim":
        return QDim(-self.value, self.field, self.convention)

    def __str__(self):
        return format_scalar(self.value, self.field)


def tl_functor(bf: BilinearForm) -> FiberFunctorData:
    """F(v) = V, F(psi) = b as a 1 x n² row and F(phi) = B⁻¹ as an n² x 1 column."""
    n = bf.n
    return FiberFunctorData({"v": n}, {"phi": bf.coevaluation.reshape(n * n, 1), "psi": bf.matrix.reshape(1, n * n)}, bf.field)


def snake_composites(bf: BilinearForm) -> Tuple[MatrixExact, MatrixExact]:
    n = bf.n
    cup, cap = bf.coevaluation.reshape(n * n, 1), bf.matrix.reshape(1, n * n)
    identity = MatrixExact.identity(n, bf.field)
    return kron(cap, identity) @ kron(identity, cup), kron(identity, cap) @ kron(cup, identity)


def quantum_dimension(bf: BilinearForm) -> QDim:
    """F(psi o phi) = Σ (B⁻¹)_ij B_ij."""
    c = bf.coevaluation
    value = bf.field.zero
    for i in range(bf.n):
        for j in range(bf.n):
            value += c.entries[i][j] * bf.matrix.entries[i][j]
    return QDim(value, bf.field)


def hb_presentation(bf: BilinearForm, with_antipode_table: bool = True, max_passes: int = 10000,
                    self_monitoring: Optional[SelfMonitoring] = None) -> PresentedBialgebra:
    b = compile_coend(build_category("TL"), tl_functor(bf))
    if not with_antipode_table:
        return b
    table = antipode_derive(b, [DualityDatum("v", word(Letter("v")), bf.matrix)], max_passes, self_monitoring)
    return with_antipode(b, table)


def _symbol_matrix(n: int, field: Field) -> List[List[NCPoly]]:
    return [[NCPoly.symbol(f"v_{i + 1}_{j + 1}", field) for j in range(n)] for i in range(n)]


def _product(left: List[List[object]], right: List[List[object]], field: Field) -> List[List[NCPoly]]:
    def as_poly(x):
        return x if isinstance(x, NCPoly) else NCPoly.constant(x, field)

    n = len(left)
    result = []
    for i in range(n):
        row = []
        for j in range(n):
            total = NCPoly.zero(field)
            for k in range(n):
                total = total + as_poly(left[i][k]) * as_poly(right[k][j])
            row.append(total)
        result.append(row)
    return result


def matrix_form_relations(bf: BilinearForm) -> List[NCPoly]:
    """Entries of B⁻¹ZᵀBZ - I and ZB⁻¹ZᵀB - I, the usual matrix form of the H(b) relations."""
    field, n = bf.field, bf.n
    z = _symbol_matrix(n, field)
    z_transposed = [list(column) for column in zip(*z)]
    b = [list(row) for row in bf.matrix.entries]
    b_inverse = [list(row) for row in bf.coevaluation.entries]
    first = _product(_product(_product(b_inverse, z_transposed, field), b, field), z, field)
    second = _product(_product(_product(z, b_inverse, field), z_transposed, field), b, field)
    relations = []
    for m in (first, second):
        for i in range(n):
            for j in range(n):
                relations.append(m[i][j] - NCPoly.one(field) if i == j else m[i][j])
    return [relation for relation in relations if not relation.is_zero()]


class CoMoritaClass(NamedTuple):
    q: QDim
    members: Tuple[int, ...]


def comorita_components(forms: Sequence[BilinearForm]) -> List[CoMoritaClass]:
    """Groups the forms (by position) by exact equality of q(b), in order of first appearance."""
    classes: List[Tuple[QDim, List[int]]] = []
    for index, bf in enumerate(forms):
        q = quantum_dimension(bf)
        for value, members in classes:
            if value.field == q.field and value.value == q.value:
                members.append(index)
                break
        else:
            classes.append((q, [index]))
    logging.debug(f"{len(forms)} forms fall into {len(classes)} co-Morita classes")
    return [CoMoritaClass(q, tuple(members)) for q, members in classes]


def bilinear_algebra(bf: BilinearForm) -> QuadraticAlgebra:
    """TV/(b) with the single relation Σ B_ij x_i x_j."""
    relation = Subspace.from_vectors([bf.matrix.flatten()], bf.n * bf.n, bf.field)
    return QuadraticAlgebra(bf.n, relation)


def form_of_algebra(a: QuadraticAlgebra, nmax: int = 6) -> BilinearForm:
    """The form whose coefficient matrix is the pairing C^(1) of an AS-regular algebra with d = 2."""
    report = require_as_regular(a, nmax)
    if report.d != 2:
        raise NotASRegularError(f"Only algebras with d = 2 come from a bilinear form, got d = {report.d}")
    return BilinearForm(report.pairing(1))
