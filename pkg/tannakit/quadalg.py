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

"""Quadratic algebras A = TV/(R), their Koszul duals, the spaces R_l and the AS-regularity test."""

from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Iterator, List, Sequence, Tuple

from sympy.polys.domains import QQ

from . import logging
from .errors import DimensionMismatchError, InvariantViolationError, NotASRegularError, NotFiniteTypeError
from .exactlin import (Field, MatrixExact, Subspace, express_in_rows, format_scalar, intersect_many, is_invertible, kernel,
                       kron, parse_scalar, subspace_kron)

GradedDims = Tuple[int, ...]

# (coefficient, (i, j)) terms of one relation, meaning sum of coefficient * x_i x_j
RelationTerms = Sequence[Tuple[object, Tuple[int, int]]]


@dataclass(frozen=True)
class QuadraticAlgebra:
    dim_v: int
    relations: Subspace
    names: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.dim_v < 1:
            raise DimensionMismatchError(f"dim V must be positive, got {self.dim_v}")
        if self.relations.ambient != self.dim_v ** 2:
            raise DimensionMismatchError(f"Relations must live in V⊗V of dimension {self.dim_v ** 2}, got {self.relations.ambient}")
        if self.names and len(self.names) != self.dim_v:
            raise DimensionMismatchError(f"Expected {self.dim_v} variable names, got {len(self.names)}")

    @classmethod
    def from_relations(cls, dim_v: int, relations: Sequence[RelationTerms], names: Sequence[str] = (), field: Field = QQ) -> "QuadraticAlgebra":
        vectors = []
        for relation in relations:
            vector = [field.zero] * dim_v ** 2
            for coefficient, (i, j) in relation:
                if not (0 <= i < dim_v and 0 <= j < dim_v):
                    raise DimensionMismatchError(f"Variable index out of range in relation word ({i}, {j})")
                vector[i * dim_v + j] += _to_scalar(coefficient, field)
            vectors.append(vector)
        return cls(dim_v, Subspace.from_vectors(vectors, dim_v ** 2, field), tuple(names))

    @property
    def field(self) -> Field:
        return self.relations.field

    @property
    def variable_names(self) -> Tuple[str, ...]:
        return self.names or tuple(f"x{i + 1}" for i in range(self.dim_v))

    def relation_strings(self) -> List[str]:
        return [_format_quadratic(row, self.variable_names, self.dim_v, self.field) for row in self.relations.basis.entries]


def _to_scalar(value, field: Field):
    if isinstance(value, (str, int)):
        return parse_scalar(value, field)
    return field.convert(value)


def _format_quadratic(vector, names, dim_v, field) -> str:
    terms = []
    for index, coefficient in enumerate(vector):
        if not coefficient:
            continue
        word = f"{names[index // dim_v]}*{names[index % dim_v]}"
        text = format_scalar(coefficient, field)
        sign = "-" if text.startswith("-") else "+"
        magnitude = text.lstrip("-")
        terms.append((sign, word if magnitude == "1" else f"{magnitude}*{word}"))
    if not terms:
        return "0"
    first_sign, first = terms[0]
    rendered = ("-" if first_sign == "-" else "") + first
    return rendered + "".join(f" {sign} {body}" for sign, body in terms[1:])


@dataclass(frozen=True)
class ASReport:
    d: int
    dims: Tuple[int, ...]
    pairings: Tuple[MatrixExact, ...]
    frobenius_top_one: bool
    pairings_nondegenerate: bool
    koszul_series_consistent: bool
    as_regular: bool
    spaces: Tuple[Subspace, ...] = dataclass_field(default=(), compare=False, repr=False)

    def pairing(self, a: int) -> MatrixExact:
        return self.pairings[a - 1]


def _dual_name(name: str) -> str:
    return name[:-1] if name.endswith("*") else f"{name}*"


def koszul_dual(a: QuadraticAlgebra) -> QuadraticAlgebra:
    # the dual basis pairing of V⊗V with V*⊗V* is the standard dot product, so R^⊥ is the kernel of R's basis
    return QuadraticAlgebra(a.dim_v, kernel(a.relations.basis), tuple(_dual_name(n) for n in a.names))


def _full(a: QuadraticAlgebra) -> Subspace:
    return Subspace.full(a.dim_v, a.field)


@lru_cache(maxsize=64)
def relation_spaces(a: QuadraticAlgebra, lmax: int) -> Tuple[Subspace, ...]:
    """R_1 = V, R_2 = R and R_l = (R_{l-1} ⊗ V) ∩ (V ⊗ R_{l-1}), which equals the intersection of all V^i R V^j with i+j+2 = l."""
    if lmax < 1:
        raise DimensionMismatchError(f"lmax must be at least 1, got {lmax}")
    spaces = [_full(a)]
    if lmax >= 2:
        spaces.append(a.relations)
    for l in range(3, lmax + 1):
        previous = spaces[-1]
        spaces.append(intersect_many([subspace_kron(previous, _full(a)), subspace_kron(_full(a), previous)]))
        logging.debug(f"dim R_{l} = {spaces[-1].dim}")
    return tuple(spaces)


def relation_space_direct(a: QuadraticAlgebra, l: int) -> Subspace:
    """R_l straight from its definition as an intersection over all placements of R; slow, used to cross-check."""
    if l == 1:
        return _full(a)
    placements = []
    for i in range(l - 1):
        j = l - 2 - i
        left = Subspace.full(a.dim_v ** i, a.field)
        right = Subspace.full(a.dim_v ** j, a.field)
        placements.append(subspace_kron(subspace_kron(left, a.relations), right))
    return intersect_many(placements)


def _ideal_components(a: QuadraticAlgebra, nmax: int) -> Iterator[Subspace]:
    # I_n = I_{n-1} ⊗ V + V^{n-2} ⊗ R
    for n in range(min(nmax + 1, 2)):
        yield Subspace.zero(a.dim_v ** n, a.field)
    ideal = a.relations
    for n in range(2, nmax + 1):
        if n > 2:
            ideal = subspace_kron(ideal, _full(a)) + subspace_kron(Subspace.full(a.dim_v ** (n - 2), a.field), a.relations)
        yield ideal


def tensor_ideal(a: QuadraticAlgebra, n: int) -> Subspace:
    """Degree-n part of the two-sided ideal (R), that is the sum of all V^i R V^j inside V^n."""
    *_, last = _ideal_components(a, n)
    return last


def graded_dims(a: QuadraticAlgebra, nmax: int) -> GradedDims:
    if nmax < 0:
        raise DimensionMismatchError(f"nmax must be non-negative, got {nmax}")
    return tuple(a.dim_v ** n - ideal.dim for n, ideal in enumerate(_ideal_components(a, nmax)))


def hilbert_series_product(h_a: Sequence[int], h_dual: Sequence[int]) -> Tuple[int, ...]:
    """Coefficients of h_A(t) * h_{A!}(-t) up to the common length."""
    length = min(len(h_a), len(h_dual))
    return tuple(sum(h_a[i] * h_dual[n - i] * (-1) ** (n - i) for i in range(n + 1)) for n in range(length))


def pairing_matrix(spaces: Sequence[Subspace], d: int, a: int) -> MatrixExact:
    """C^(a): coefficients of the generator of R_d in the basis of R_a ⊗ R_{d-a}; rows index R_a."""
    top = _space(spaces, d)
    left, right = _space(spaces, a), _space(spaces, d - a)
    try:
        coefficients = express_in_rows(kron(left.basis, right.basis), top.basis)
    except DimensionMismatchError as e:
        raise InvariantViolationError(f"R_{d} is not contained in R_{a} ⊗ R_{d - a}") from e
    return coefficients.reshape(left.dim, right.dim)


def _space(spaces: Sequence[Subspace], l: int) -> Subspace:
    if l == 0:
        return Subspace.full(1, spaces[0].field)
    return spaces[l - 1]


def as_regular_check(a: QuadraticAlgebra, nmax: int = 6) -> ASReport:
    if nmax < 2:
        raise DimensionMismatchError(f"nmax must be at least 2, got {nmax}")
    spaces = relation_spaces(a, nmax)
    if spaces[-1].dim != 0:
        raise NotFiniteTypeError(f"R_{nmax} is nonzero: increase nmax or A is not of finite type")
    d = max(l for l in range(1, nmax + 1) if spaces[l - 1].dim > 0)
    dims = tuple(space.dim for space in spaces[:d + 1])
    frobenius_top_one = spaces[d - 1].dim == 1

    pairings = ()
    pairings_nondegenerate = False
    if frobenius_top_one:
        pairings = tuple(pairing_matrix(spaces, d, i) for i in range(1, d))
        pairings_nondegenerate = all(is_invertible(c) for c in pairings)

    dual = koszul_dual(a)
    product = hilbert_series_product(graded_dims(a, nmax), graded_dims(dual, nmax))
    koszul_series_consistent = all(coefficient == (1 if n == 0 else 0) for n, coefficient in enumerate(product))

    as_regular = frobenius_top_one and pairings_nondegenerate and koszul_series_consistent
    logging.debug(f"AS check: d={d}, dims={dims}, frobenius={frobenius_top_one}, nondegenerate={pairings_nondegenerate}, "
                  f"series={koszul_series_consistent}")
    return ASReport(d=d, dims=dims, pairings=pairings, frobenius_top_one=frobenius_top_one,
                    pairings_nondegenerate=pairings_nondegenerate, koszul_series_consistent=koszul_series_consistent,
                    as_regular=as_regular, spaces=spaces)


def require_as_regular(a: QuadraticAlgebra, nmax: int = 6) -> ASReport:
    report = as_regular_check(a, nmax)
    if not report.as_regular:
        raise NotASRegularError(f"Algebra is not AS-regular (d={report.d}, dims={report.dims}, "
                                f"frobenius={report.frobenius_top_one}, nondegenerate={report.pairings_nondegenerate})")
    return report
