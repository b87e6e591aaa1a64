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

"""Comodules over uaut(A): the spaces M(λ), the maps Φ and Θ, and the costandard, standard and simple comodules.

M(λ) is the tensor product over the letters of λ, with R_i for r_i and the 1-dim dual of R_d for r_d^-1.
∇(λ) is M(λ) modulo the images of the whiskered φ-maps into λ, Δ(λ) is the joint kernel of the
whiskered θ-maps out of λ and L(λ) is the image of Δ(λ) in ∇(λ).
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import List, NamedTuple, Optional, Sequence, Tuple

from . import logging
from .errors import DimensionMismatchError, InvariantViolationError, UnsupportedFieldError
from .exactlin import MatrixExact, Subspace, column_space, express_in_rows, intersect_many, inverse, is_rational_field, kernel, kron, \
    kron_many
from .moncat import ObjectWord, elementary_maps, enumerate_words, format_word, is_dominant, letter_index
from .quadalg import ASReport, QuadraticAlgebra, pairing_matrix, require_as_regular
from .util.util_misc import get_positive_int_environment_value

number_of_worker_threads = get_positive_int_environment_value("TANNAKIT_THREADS", 1)

FAMILIES = ("phi", "theta")


class StructureMaps:
    """Φ and Θ for one AS-regular algebra, in the canonical row-reduced bases of the R_l."""

    def __init__(self, a: QuadraticAlgebra, nmax: int = 6):
        self.algebra = a
        self.report: ASReport = require_as_regular(a, nmax)
        self.d = self.report.d
        self.spaces = self.report.spaces[:self.d]

    def dim(self, l: int) -> int:
        return 1 if l == 0 else self.spaces[l - 1].dim

    def basis(self, l: int) -> MatrixExact:
        return MatrixExact.identity(1, self.algebra.field) if l == 0 else self.spaces[l - 1].basis

    def identity(self, l: int) -> MatrixExact:
        return MatrixExact.identity(self.dim(l), self.algebra.field)

    def _check(self, i: int, j: int):
        if not (0 <= i <= self.d and 0 <= j <= self.d):
            raise DimensionMismatchError(f"Indices ({i}, {j}) out of range for d = {self.d}")

    @lru_cache(maxsize=None)
    def phi(self, i: int, j: int) -> MatrixExact:
        """R_{i+j} ⊆ R_i ⊗ R_j, columns indexed by the basis of R_{i+j}."""
        self._check(i, j)
        if i + j > self.d:
            raise DimensionMismatchError(f"Φ_{i},{j} needs i + j <= {self.d}")
        try:
            return express_in_rows(kron(self.basis(i), self.basis(j)), self.basis(i + j)).transpose()
        except DimensionMismatchError as e:
            raise InvariantViolationError(f"R_{i + j} is not contained in R_{i} ⊗ R_{j}") from e

    @lru_cache(maxsize=None)
    def pairing(self, j: int) -> MatrixExact:
        return pairing_matrix(self.spaces, self.d, j)

    @lru_cache(maxsize=None)
    def ev(self, j: int) -> MatrixExact:
        """R_{d-j} ⊗ R_d* ⊗ R_j -> K as a row; the inverse of C^(j) is already laid out as n_{d-j} x n_j."""
        beta = inverse(self.pairing(j))
        return beta.reshape(1, beta.rows * beta.cols)

    @lru_cache(maxsize=None)
    def theta(self, i: int, j: int) -> MatrixExact:
        """R_i ⊗ R_d* ⊗ R_j -> R_{i+j-d}: split R_i through Φ_{i+j-d, d-j}, then contract the last two factors."""
        self._check(i, j)
        if i + j < self.d:
            raise DimensionMismatchError(f"Θ_{i},{j} needs i + j >= {self.d}")
        low = i + j - self.d
        split = kron(self.phi(low, self.d - j), self.identity(j))
        return kron(self.identity(low), self.ev(j)) @ split

    def letter_dim(self, letter) -> int:
        return 1 if letter.exp == -1 else self.dim(letter_index(letter))

    def module_dim(self, w: ObjectWord) -> int:
        dim = 1
        for letter in w:
            dim *= self.letter_dim(letter)
        return dim


@lru_cache(maxsize=32)
def structure_maps(a: QuadraticAlgebra, nmax: int = 6) -> StructureMaps:
    return StructureMaps(a, nmax)


def structure_map(a: QuadraticAlgebra, family: str, i: int, j: int) -> MatrixExact:
    maps = structure_maps(a)
    if family == "phi":
        return maps.phi(i, j)
    if family == "theta":
        return maps.theta(i, j)
    raise DimensionMismatchError(f"Unknown structure map family '{family}', expected one of {FAMILIES}")


# Comodules

class ComoduleSpace(NamedTuple):
    word: ObjectWord
    dim: int
    factors: Tuple[int, ...]


def module_space(maps: StructureMaps, w: ObjectWord) -> ComoduleSpace:
    factors = tuple(maps.letter_dim(letter) for letter in w)
    dim = 1
    for factor in factors:
        dim *= factor
    return ComoduleSpace(w, dim, factors)


@dataclass(frozen=True)
class ComoduleWitness:
    word: ObjectWord
    kind: str
    subspace: Subspace
    dim: int


def _whiskered(maps: StructureMaps, left: ObjectWord, core: MatrixExact, right: ObjectWord) -> MatrixExact:
    field = maps.algebra.field
    return kron_many([MatrixExact.identity(maps.module_dim(left), field), core, MatrixExact.identity(maps.module_dim(right), field)],
                     field)


def incoming_image(maps: StructureMaps, w: ObjectWord) -> Subspace:
    dim = maps.module_dim(w)
    image = Subspace.zero(dim, maps.algebra.field)
    for step in elementary_maps(w, maps.d, "into"):
        x, y = step.generator.params
        image = image + column_space(_whiskered(maps, step.left, maps.phi(x, y), step.right))
    return image


def outgoing_kernel(maps: StructureMaps, w: ObjectWord) -> Subspace:
    kernels = [kernel(_whiskered(maps, step.left, maps.theta(*step.generator.params), step.right))
               for step in elementary_maps(w, maps.d, "outof")]
    if not kernels:
        return Subspace.full(maps.module_dim(w), maps.algebra.field)
    return intersect_many(kernels)


def nabla_delta(a: QuadraticAlgebra, w: ObjectWord, maps: Optional[StructureMaps] = None) -> Tuple[ComoduleWitness, ComoduleWitness]:
    maps = maps or structure_maps(a)
    dim = maps.module_dim(w)
    image = incoming_image(maps, w)
    joint_kernel = outgoing_kernel(maps, w)
    if is_dominant(w) and joint_kernel.dim != dim:
        raise InvariantViolationError(f"Dominant word {format_word(w)} has a θ-map out of it")
    return (ComoduleWitness(w, "costandard", image, dim - image.dim),
            ComoduleWitness(w, "standard", joint_kernel, joint_kernel.dim))


def simple_rank(a: QuadraticAlgebra, w: ObjectWord, maps: Optional[StructureMaps] = None) -> ComoduleWitness:
    """Rank of Δ(λ) -> ∇(λ) over any field; only over QQ is this the dimension of the simple comodule."""
    maps = maps or structure_maps(a)
    nabla, delta = nabla_delta(a, w, maps)
    combined = delta.subspace + nabla.subspace
    return ComoduleWitness(w, "simple", delta.subspace, combined.dim - nabla.subspace.dim)


def simple_dim(a: QuadraticAlgebra, w: ObjectWord, maps: Optional[StructureMaps] = None) -> int:
    if not is_rational_field(a.field):
        raise UnsupportedFieldError("Simple comodule dimensions are certified over QQ only; use simple_rank for a rank")
    return simple_rank(a, w, maps).dim


# Torus weights for d = 2

class TorusWeight(NamedTuple):
    """The Laurent monomial a^p d^q."""
    p: int = 0
    q: int = 0

    def __add__(self, other: "TorusWeight") -> "TorusWeight":
        return TorusWeight(self.p + other.p, self.q + other.q)

    def __str__(self):
        return f"a^{self.p} d^{self.q}"


_LETTER_WEIGHTS = {("r1", 1): TorusWeight(0, 1), ("r2", 1): TorusWeight(1, 1), ("r2", -1): TorusWeight(-1, -1)}


def wt(w: ObjectWord) -> TorusWeight:
    total = TorusWeight()
    for letter in w:
        if (letter.gen, letter.exp) not in _LETTER_WEIGHTS:
            raise DimensionMismatchError(f"Torus weights are defined for d = 2 words only, got letter {letter}")
        total = total + _LETTER_WEIGHTS[(letter.gen, letter.exp)]
    return total


def weight_fiber(t: TorusWeight, maxlen: int) -> List[ObjectWord]:
    return [w for w in enumerate_words(2, maxlen) if wt(w) == t]


def induced_dim(a: QuadraticAlgebra, t: TorusWeight, maxlen: int) -> int:
    """Σ dim ∇(λ) over the weight fiber: the truncated dimension of the induced module of K_t."""
    maps = structure_maps(a)
    if maps.d != 2:
        raise DimensionMismatchError(f"Induced modules are tracked for d = 2 only, got d = {maps.d}")
    return sum(nabla_delta(a, w, maps)[0].dim for w in weight_fiber(t, maxlen))


# The defining relations of the category, checked on Φ and Θ

def _triples(low: int, high: int):
    return ((x, y, z) for x in range(low, high + 1) for y in range(low, high + 1) for z in range(low, high + 1))


def relation_defects(maps: StructureMaps) -> List[str]:
    """Names of the instances of the four relation families that fail as exact matrix identities."""
    d = maps.d

    def kron_id(l: int, m: MatrixExact) -> MatrixExact:
        return kron(maps.identity(l), m)

    def id_kron(m: MatrixExact, l: int) -> MatrixExact:
        return kron(m, maps.identity(l))

    failures = []
    for a, b, c in _triples(1, d):
        if a + b + c <= d:
            if kron_id(a, maps.phi(b, c)) @ maps.phi(a, b + c) != id_kron(maps.phi(a, b), c) @ maps.phi(a + b, c):
                failures.append(f"rel1({a},{b},{c})")
    for a, b, c in _triples(1, d - 1):
        if a + b + c >= 2 * d:
            if maps.theta(a + b - d, c) @ id_kron(maps.theta(a, b), c) != maps.theta(a, b + c - d) @ kron_id(a, maps.theta(b, c)):
                failures.append(f"rel2({a},{b},{c})")
        if a + b <= d <= b + c:
            if kron_id(a, maps.theta(b, c)) @ id_kron(maps.phi(a, b), c) != maps.phi(a, b + c - d) @ maps.theta(a + b, c):
                failures.append(f"rel3({a},{b},{c})")
        if b + c <= d <= a + b:
            if id_kron(maps.theta(a, b), c) @ kron_id(a, maps.phi(b, c)) != maps.phi(a + b - d, c) @ maps.theta(a, b + c):
                failures.append(f"rel4({a},{b},{c})")
    if failures:
        logging.debug(f"Structure map relation failures: {failures}")
    return failures


# Tables

class ComoduleRow(NamedTuple):
    word: ObjectWord
    dim_m: int
    dim_nabla: int
    dim_delta: int
    dim_simple: int
    weight: Optional[TorusWeight]

    def as_dict(self) -> dict:
        row = {"word": format_word(self.word), "M": self.dim_m, "nabla": self.dim_nabla,
               "delta": self.dim_delta, "L": self.dim_simple}
        if self.weight is not None:
            row["wt"] = [self.weight.p, self.weight.q]
        return row


def comodule_row(a: QuadraticAlgebra, w: ObjectWord, maps: Optional[StructureMaps] = None) -> ComoduleRow:
    maps = maps or structure_maps(a)
    nabla, delta = nabla_delta(a, w, maps)
    simple = simple_rank(a, w, maps)
    return ComoduleRow(w, maps.module_dim(w), nabla.dim, delta.dim, simple.dim, wt(w) if maps.d == 2 else None)


def comodule_table(a: QuadraticAlgebra, words: Sequence[ObjectWord], threads: Optional[int] = None) -> List[ComoduleRow]:
    """One row per word in the given order; rows are computed on a thread pool."""
    maps = structure_maps(a)
    if not is_rational_field(a.field):
        logging.info("Field is not QQ: the L column is a rank only, not a certified simple dimension")
    with ThreadPoolExecutor(max_workers=threads or number_of_worker_threads) as executor:
        rows = list(executor.map(lambda w: comodule_row(a, w, maps), words))
    logging.debug(f"Computed {len(rows)} comodule table rows")
    return rows
