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

"""The coend compiler: presentations of coend(F) for a presented monoidal category with a fiber functor.

Matrix convention: F(φ)(e_j) = Σ_i P_ij e_i, so the columns of P are indexed by the basis of the
source. A morphism X -> Y then contributes the entries of Pᵀ·Z_Y - Z_X·Pᵀ as relations, where Z_W is
the Kronecker product over the letters of W of the generator matrices (an inverse letter contributes
its 1x1 inverse symbol). Coaction: δ(e_ki) = Σ_j z_kij ⊗ e_kj.
"""

from dataclasses import dataclass, field as dataclass_field, replace
from functools import reduce
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from . import logging
from .errors import (DimensionMismatchError, EliminationError, InvariantViolationError, ShapeMismatchError, SnakeIdentityError,
                     VerificationInconclusiveError)
from .exactlin import (Field, MatrixExact, Scalar, Subspace, express_in_rows, format_scalar, inverse, is_invertible, kron, rank,
                       right_inverse)
from .moncat import Letter, ObjectWord, PresentedMonoidalCategory, build_category, r, word
from .ncpoly import (NCPoly, NCTensor, PresentedAlgebra, apply_to_tensor, format_poly, outside_bounded_span, poly_sum,
                     reduce_with_stats, rules_from_relations, signed_terms)
from .quadalg import ASReport, QuadraticAlgebra, koszul_dual, pairing_matrix, require_as_regular
from .self_monitoring import SelfMonitoring

PolyMatrix = Tuple[Tuple[NCPoly, ...], ...]

GL2_NAMES = {"r1_1_1": "a", "r1_1_2": "b", "r1_2_1": "c", "r1_2_2": "d", "r2": "delta", "r2^-1": "delta^-1", "r2_1_1": "delta"}


def z_symbol(gen: str, i: int, j: int) -> str:
    return f"{gen}_{i}_{j}"


def inverse_symbol(gen: str) -> str:
    return f"{gen}^-1"


@dataclass(frozen=True)
class FiberFunctorData:
    dims: Dict[str, int]
    matrices: Dict[str, MatrixExact]
    field: Field = QQ
    labels: Dict[str, Tuple[str, ...]] = dataclass_field(default_factory=dict)

    def word_dim(self, w: ObjectWord) -> int:
        dim = 1
        for letter in w:
            dim *= 1 if letter.exp == -1 else self.dims[letter.gen]
        return dim

    def validate(self, cat: PresentedMonoidalCategory):
        for generator in cat.objects:
            if generator.name not in self.dims:
                raise ShapeMismatchError(f"No dimension given for object generator {generator.name}")
            if self.dims[generator.name] < 1:
                raise ShapeMismatchError(f"Dimension of {generator.name} must be positive")
            if generator.invertible and self.dims[generator.name] != 1:
                raise ShapeMismatchError(f"Invertible generator {generator.name} must map to a 1-dim space (group-like inversion only), "
                                         f"got dim {self.dims[generator.name]}")
        for morphism in cat.morphisms:
            if morphism.name not in self.matrices:
                raise ShapeMismatchError(f"No matrix given for morphism generator {morphism.name}")
            expected = (self.word_dim(morphism.target), self.word_dim(morphism.source))
            if self.matrices[morphism.name].shape != expected:
                raise ShapeMismatchError(f"Matrix of {morphism} has shape {self.matrices[morphism.name].shape}, expected {expected}")


@dataclass(frozen=True)
class PresentedBialgebra:
    algebra: PresentedAlgebra
    comultiplication: Dict[str, NCTensor]
    counit: Dict[str, Scalar]
    object_symbols: Dict[str, Tuple[Tuple[str, ...], ...]]
    inverse_of: Dict[str, str] = dataclass_field(default_factory=dict)
    antipode: Optional[Dict[str, NCPoly]] = None
    category: Optional[PresentedMonoidalCategory] = dataclass_field(default=None, compare=False)
    functor: Optional[FiberFunctorData] = dataclass_field(default=None, compare=False)

    @property
    def generators(self) -> Tuple[str, ...]:
        return self.algebra.generators

    @property
    def relations(self) -> Tuple[NCPoly, ...]:
        return self.algebra.relations

    @property
    def field(self) -> Field:
        return self.algebra.field


# Polynomial matrices

def _poly_matrix(symbols: Sequence[Sequence[str]], field: Field) -> PolyMatrix:
    return tuple(tuple(NCPoly.symbol(s, field) for s in row) for row in symbols)


def _poly_kron(a: PolyMatrix, b: PolyMatrix, reverse: bool = False) -> PolyMatrix:
    rows = []
    for a_row in a:
        for b_row in b:
            rows.append(tuple((y * x if reverse else x * y) for x in a_row for y in b_row))
    return tuple(rows)


def _scalar_times(m: MatrixExact, z: PolyMatrix, field: Field) -> PolyMatrix:
    return tuple(tuple(_dot((m.entries[i][k] for k in range(m.cols)), (z[k][j] for k in range(m.cols)), field)
                       for j in range(len(z[0]))) for i in range(m.rows))


def _times_scalar(z: PolyMatrix, m: MatrixExact, field: Field) -> PolyMatrix:
    return tuple(tuple(_dot((m.entries[k][j] for k in range(m.rows)), (z[i][k] for k in range(m.rows)), field)
                       for j in range(m.cols)) for i in range(len(z)))


def _dot(scalars, polys, field: Field) -> NCPoly:
    coefficients = {}
    for scalar, poly in zip(scalars, polys):
        if not scalar:
            continue
        for monomial, c in poly.terms:
            coefficients[monomial] = coefficients.get(monomial, field.zero) + scalar * c
    return NCPoly.from_dict(coefficients, field)


def _poly_product(a: PolyMatrix, b: PolyMatrix, field: Field) -> PolyMatrix:
    return tuple(tuple(poly_sum((a[i][k] * b[k][j] for k in range(len(b))), field) for j in range(len(b[0]))) for i in range(len(a)))


def _transpose(z: PolyMatrix) -> PolyMatrix:
    return tuple(zip(*z))


def _minus_identity(z: PolyMatrix, field: Field) -> List[NCPoly]:
    return [entry - NCPoly.one(field) if i == j else entry for i, row in enumerate(z) for j, entry in enumerate(row)]


def word_matrix(w: ObjectWord, matrices: Dict[str, PolyMatrix], inverses: Dict[str, str], field: Field) -> PolyMatrix:
    result: PolyMatrix = ((NCPoly.one(field),),)
    for letter in w:
        factor = ((NCPoly.symbol(inverses[letter.gen], field),),) if letter.exp == -1 else matrices[letter.gen]
        result = _poly_kron(result, factor)
    return result


def _dedupe(relations: Sequence[NCPoly]) -> Tuple[NCPoly, ...]:
    seen = set()
    kept = []
    for relation in relations:
        if relation.is_zero() or relation in seen:
            continue
        seen.add(relation)
        kept.append(relation)
    return tuple(kept)


def _morphism_relations(p: MatrixExact, source: ObjectWord, target: ObjectWord, matrices: Dict[str, PolyMatrix],
                        inverses: Dict[str, str], field: Field) -> List[NCPoly]:
    p_transposed = p.transpose()
    left = _scalar_times(p_transposed, word_matrix(target, matrices, inverses, field), field)
    right = _times_scalar(word_matrix(source, matrices, inverses, field), p_transposed, field)
    return [left[i][j] - right[i][j] for i in range(len(left)) for j in range(len(left[0]))]


def compile_coend(cat: PresentedMonoidalCategory, f: FiberFunctorData) -> PresentedBialgebra:
    f.validate(cat)
    field = f.field
    generators, weights = [], []
    object_symbols: Dict[str, Tuple[Tuple[str, ...], ...]] = {}
    inverses: Dict[str, str] = {}
    inverse_of: Dict[str, str] = {}
    comultiplication: Dict[str, NCTensor] = {}
    counit: Dict[str, Scalar] = {}

    for generator in cat.objects:
        n = f.dims[generator.name]
        if generator.invertible:
            symbols = ((generator.name,),)
            inverses[generator.name] = inverse_symbol(generator.name)
            inverse_of[inverse_symbol(generator.name)] = generator.name
        else:
            symbols = tuple(tuple(z_symbol(generator.name, i + 1, j + 1) for j in range(n)) for i in range(n))
        object_symbols[generator.name] = symbols
        for i, row in enumerate(symbols):
            for j, symbol in enumerate(row):
                generators.append(symbol)
                weights.append(generator.weight)
                comultiplication[symbol] = reduce(lambda s, t: s + t, (NCTensor.tensor(NCPoly.symbol(symbols[i][p], field),
                                                                                     NCPoly.symbol(symbols[p][j], field))
                                                                       for p in range(n)), NCTensor((), field))
                counit[symbol] = field.one if i == j else field.zero
        if generator.invertible:
            symbol = inverses[generator.name]
            generators.append(symbol)
            weights.append(-generator.weight)
            comultiplication[symbol] = NCTensor.tensor(NCPoly.symbol(symbol, field), NCPoly.symbol(symbol, field))
            counit[symbol] = field.one

    matrices = {name: _poly_matrix(symbols, field) for name, symbols in object_symbols.items()}
    relations: List[NCPoly] = []
    for morphism in cat.morphisms:
        entries = _morphism_relations(f.matrices[morphism.name], morphism.source, morphism.target, matrices, inverses, field)
        relations.extend(entries)
        logging.debug(f"{morphism} contributes {len(entries)} relation entries")
    for gen, symbol in inverses.items():
        g, g_inverse = NCPoly.symbol(gen, field), NCPoly.symbol(symbol, field)
        relations.append(g * g_inverse - NCPoly.one(field))
        relations.append(g_inverse * g - NCPoly.one(field))

    algebra = PresentedAlgebra(tuple(generators), tuple(weights), _dedupe(relations), field)
    return PresentedBialgebra(algebra, comultiplication, counit, object_symbols, inverse_of, category=cat, functor=f)


# Fiber functors of the named categories

def uend_functor(a: QuadraticAlgebra) -> FiberFunctorData:
    """F for C = <r1, r2 | r2 -> r1 r1>: F(r1) = V, F(r2) = R, and the inclusion R ⊆ V⊗V."""
    return FiberFunctorData({"r1": a.dim_v, "r2": a.relations.dim}, {"incl_2": a.relations.basis.transpose()}, a.field)


def aut_functor(a: QuadraticAlgebra, report: ASReport, a_index: int) -> FiberFunctorData:
    """G for D(d, a): G(r_i) = R_i, G(r_d) = R_d, the inclusions R_i ⊆ V^i and the pairing R_a R_d^-1 R_{d-a} -> K."""
    d = report.d
    dims = {f"r{i}": report.spaces[i - 1].dim for i in range(1, d + 1)}
    matrices = {f"incl_{i}": report.spaces[i - 1].basis.transpose() for i in range(2, d + 1)}
    pairing = inverse(pairing_matrix(report.spaces, d, d - a_index))
    matrices[f"ev_{a_index}"] = pairing.reshape(1, pairing.rows * pairing.cols)
    return FiberFunctorData(dims, matrices, a.field)


def uend_direct(a: QuadraticAlgebra) -> PresentedAlgebra:
    """Relations Σ r_ik f_jl z_ij z_kl for r in R and f in R^⊥: the image of R ⊗ R^⊥ under the middle transposition."""
    n = a.dim_v
    field = a.field
    symbols = [z_symbol("r1", i + 1, j + 1) for i in range(n) for j in range(n)]
    dual = koszul_dual(a).relations
    vectors = []
    for r_row in a.relations.basis.entries:
        for f_row in dual.basis.entries:
            vector = [field.zero] * n ** 4
            for i in range(n):
                for k in range(n):
                    if not r_row[i * n + k]:
                        continue
                    for j in range(n):
                        for l in range(n):
                            vector[(i * n + j) * n * n + k * n + l] += r_row[i * n + k] * f_row[j * n + l]
            vectors.append(vector)
    relations = []
    if vectors:
        for row in Subspace.from_vectors(vectors, n ** 4, field).basis.entries:
            relations.append(NCPoly.from_dict({(symbols[index // (n * n)], symbols[index % (n * n)]): c
                                               for index, c in enumerate(row) if c}, field))
    return PresentedAlgebra(tuple(symbols), (1,) * len(symbols), tuple(relations), field)


# Generator elimination

def eliminate_defined_generators(b: PresentedBialgebra, cat: Optional[PresentedMonoidalCategory] = None,
                                 f: Optional[FiberFunctorData] = None, eliminate: Optional[Sequence[str]] = None) -> PresentedAlgebra:
    """Replaces Z_X by Pᵀ·Z_Y·S for every object X that is the one-letter source of an injective morphism X -> Y."""
    cat = cat or b.category
    f = f or b.functor
    if cat is None or f is None:
        raise EliminationError("Elimination needs the category and fiber functor the bialgebra was compiled from")
    field = b.field
    matrices = {name: _poly_matrix(symbols, field) for name, symbols in b.object_symbols.items()}
    inverses = {gen: symbol for symbol, gen in b.inverse_of.items()}

    candidates: Dict[str, List] = {}
    for morphism in cat.morphisms:
        if len(morphism.source) == 1 and morphism.source[0].exp == 1:
            gen = morphism.source[0].gen
            if all(letter.gen != gen for letter in morphism.target):
                candidates.setdefault(gen, []).append(morphism)
    targets = list(eliminate) if eliminate is not None else list(candidates)
    definitions: Dict[str, NCPoly] = {}
    for gen in targets:
        if gen not in candidates:
            raise EliminationError(f"No eliminating morphism found for generator {gen}")
        if len(candidates[gen]) > 1:
            raise EliminationError(f"Generator {gen} is the source of several morphisms: {[m.name for m in candidates[gen]]}")
        morphism = candidates[gen][0]
        p = f.matrices[morphism.name]
        if rank(p) != p.cols:
            raise EliminationError(f"Matrix of {morphism} is not injective")
        p_transposed = p.transpose()
        defined = _times_scalar(_scalar_times(p_transposed, word_matrix(morphism.target, matrices, inverses, field), field),
                                right_inverse(p_transposed), field)
        for i, row in enumerate(b.object_symbols[gen]):
            for j, symbol in enumerate(row):
                definitions[symbol] = defined[i][j]

    for _ in range(len(definitions)):
        pending = {s for poly in definitions.values() for s in poly.symbols()} & set(definitions)
        if not pending:
            break
        definitions = {s: poly.substitute(definitions) for s, poly in definitions.items()}
    else:
        if {s for poly in definitions.values() for s in poly.symbols()} & set(definitions):
            raise EliminationError("Definitions of eliminated generators are cyclic")

    kept = [(s, w) for s, w in zip(b.algebra.generators, b.algebra.weights) if s not in definitions]
    relations = _dedupe([relation.substitute(definitions) for relation in b.relations])
    logging.debug(f"Eliminated {len(definitions)} generators, {len(relations)} relations remain")
    return PresentedAlgebra(tuple(s for s, _ in kept), tuple(w for _, w in kept), relations, field, tuple(definitions.items()))


# Antipode

class DualityDatum(NamedTuple):
    """ev: X ⊗ Y -> K for the one-letter word X = generator, with pairing[a][m] = ev(e_a ⊗ f_m)."""
    generator: str
    dual: ObjectWord
    pairing: MatrixExact


def _check_snakes(datum: DualityDatum, f: FiberFunctorData):
    e = datum.pairing
    n_x, n_y = f.dims[datum.generator], f.word_dim(datum.dual)
    if e.shape != (n_x, n_y):
        raise SnakeIdentityError(f"Pairing for {datum.generator} has shape {e.shape}, expected {(n_x, n_y)}")
    if not is_invertible(e):
        raise SnakeIdentityError(f"Pairing for {datum.generator} is degenerate, so no coevaluation exists")
    coevaluation = inverse(e)
    ev_row = e.reshape(1, n_x * n_y)
    coev_column = coevaluation.reshape(n_y * n_x, 1)
    identity_x, identity_y = MatrixExact.identity(n_x, e.field), MatrixExact.identity(n_y, e.field)
    if kron(ev_row, identity_x) @ kron(identity_x, coev_column) != identity_x:
        raise SnakeIdentityError(f"First snake identity fails for {datum.generator}")
    if kron(identity_y, ev_row) @ kron(coev_column, identity_y) != identity_y:
        raise SnakeIdentityError(f"Second snake identity fails for {datum.generator}")


def factorization_relations(b: PresentedBialgebra) -> Tuple[NCPoly, ...]:
    """Relations of φ: r_(i+j) -> r_i r_j, the inclusions R_{i+j} ⊆ R_i ⊗ R_j, for a presentation compiled over D.

    Each one lies in the ideal: composed with the injective incl_i ⊗ incl_j it is incl_(i+j).
    """
    cat, f = b.category, b.functor
    if cat is None or f is None or cat.kind != "D":
        return ()
    field = b.field
    bases = {1: MatrixExact.identity(f.dims["r1"], field)}
    bases.update({i: f.matrices[f"incl_{i}"].transpose() for i in range(2, cat.d + 1)})
    matrices = {name: _poly_matrix(symbols, field) for name, symbols in b.object_symbols.items()}
    inverses = {gen: symbol for symbol, gen in b.inverse_of.items()}
    relations: List[NCPoly] = []
    for i in range(1, cat.d):
        for j in range(1, cat.d - i + 1):
            try:
                coefficients = express_in_rows(kron(bases[i], bases[j]), bases[i + j])
            except DimensionMismatchError as e:
                raise InvariantViolationError(f"R_{i + j} is not contained in R_{i} ⊗ R_{j}") from e
            relations += _morphism_relations(coefficients.transpose(), word(r(i + j)), word(r(i), r(j)), matrices, inverses, field)
    return _dedupe(relations)


def antipode_derive(b: PresentedBialgebra, duality: Sequence[DualityDatum], max_passes: int = 10000,
                    self_monitoring: Optional[SelfMonitoring] = None) -> Dict[str, NCPoly]:
    """S(Z_X) = E·Z_Yᵀ·E⁻¹ from an evaluation X ⊗ Y -> K; group-like letters get S(g) = g⁻¹; generators that
    include into a word whose antipode is known get S(Z_X) = Pᵀ·S(Z_Y)·S' with the product order reversed.
    Both antipode identities are then checked by rewriting to zero, with the factorization relations added to the
    rule set; a generator with a derived antipode is defined by the letters of its target, so its identities follow."""
    field = b.field
    f, cat = b.functor, b.category
    matrices = {name: _poly_matrix(symbols, field) for name, symbols in b.object_symbols.items()}
    inverses = {gen: symbol for symbol, gen in b.inverse_of.items()}
    antipode_matrices: Dict[str, PolyMatrix] = {}

    for gen, symbol in inverses.items():
        antipode_matrices[gen] = ((NCPoly.symbol(symbol, field),),)
    for datum in duality:
        _check_snakes(datum, f)
        e = datum.pairing
        z_dual = word_matrix(datum.dual, matrices, inverses, field)
        antipode_matrices[datum.generator] = _times_scalar(_scalar_times(e, _transpose(z_dual), field), inverse(e), field)

    def antipode_of_letter(letter: Letter) -> PolyMatrix:
        if letter.exp == -1:
            return matrices[letter.gen]
        return antipode_matrices[letter.gen]

    missing = [name for name in b.object_symbols if name not in antipode_matrices]
    derived = set(missing)
    while missing:
        progress = False
        for gen in list(missing):
            for morphism in cat.morphisms if cat else ():
                if morphism.source == word(Letter(gen)) and all(l.gen in antipode_matrices for l in morphism.target):
                    p_transposed = f.matrices[morphism.name].transpose()
                    s_target = reduce(lambda x, y: _poly_kron(x, y, reverse=True), (antipode_of_letter(l) for l in morphism.target),
                                      ((NCPoly.one(field),),))
                    antipode_matrices[gen] = _times_scalar(_scalar_times(p_transposed, s_target, field), right_inverse(p_transposed),
                                                           field)
                    missing.remove(gen)
                    progress = True
                    break
        if not progress:
            raise SnakeIdentityError(f"No duality data or defining morphism for generators {missing}")

    table: Dict[str, NCPoly] = {}
    for gen, symbols in b.object_symbols.items():
        for i, row in enumerate(symbols):
            for j, symbol in enumerate(row):
                table[symbol] = antipode_matrices[gen][i][j]
    for gen, symbol in inverses.items():
        table[symbol] = NCPoly.symbol(gen, field)

    verified = {gen: z for gen, z in matrices.items() if gen not in derived}
    _verify_antipode(b, verified, antipode_matrices, inverses, max_passes, self_monitoring)
    return table


def _verify_antipode(b: PresentedBialgebra, matrices, antipode_matrices, inverses, max_passes: int,
                     self_monitoring: Optional[SelfMonitoring]):
    field = b.field
    rules = rules_from_relations(b.relations + factorization_relations(b), b.generators)
    identities: List[NCPoly] = []
    for gen, z in matrices.items():
        s = antipode_matrices[gen]
        identities += _minus_identity(_poly_product(s, z, field), field)
        identities += _minus_identity(_poly_product(z, s, field), field)
    for gen, symbol in inverses.items():
        g, g_inverse = NCPoly.symbol(gen, field), NCPoly.symbol(symbol, field)
        identities += [g_inverse * g - NCPoly.one(field), g * g_inverse - NCPoly.one(field)]
    for identity in identities:
        reduction = reduce_with_stats(identity, rules, max_passes)
        if self_monitoring is not None:
            self_monitoring.record_reduction(reduction.passes, reduction.exhausted)
        if not reduction.poly.is_zero():
            reason = "pass cap reached" if reduction.exhausted else f"normal form {format_poly(reduction.poly, b.generators)}"
            raise VerificationInconclusiveError(f"Antipode identity {format_poly(identity, b.generators)} did not reduce to 0 ({reason})")


def with_antipode(b: PresentedBialgebra, table: Dict[str, NCPoly]) -> PresentedBialgebra:
    return replace(b, antipode=table)


def uaut_presentation(a: QuadraticAlgebra, a_index: int = 1, nmax: int = 6, with_antipode_table: bool = True,
                      max_passes: int = 10000, self_monitoring: Optional[SelfMonitoring] = None) -> PresentedBialgebra:
    """uaut(A) as coend of G over D(d, a), with the antipode derived from the pairing r_a r_d^-1 r_{d-a} -> 1."""
    report = require_as_regular(a, nmax)
    d = report.d
    cat = build_category("D", d=d, a=a_index)
    functor = aut_functor(a, report, a_index)
    b = compile_coend(cat, functor)
    if not with_antipode_table:
        return b
    ev = functor.matrices[f"ev_{a_index}"]
    pairing = ev.reshape(functor.dims[f"r{a_index}"], ev.cols // functor.dims[f"r{a_index}"])
    duality = [DualityDatum(f"r{a_index}", word(r(d, -1), r(d - a_index)), pairing)]
    return with_antipode(b, antipode_derive(b, duality, max_passes, self_monitoring))


def uend_presentation(a: QuadraticAlgebra) -> PresentedBialgebra:
    return compile_coend(build_category("C"), uend_functor(a))


# Renaming, quotients and checks

def rename_algebra(p: PresentedAlgebra, mapping: Dict[str, str]) -> PresentedAlgebra:
    polys = {s: NCPoly.symbol(mapping.get(s, s), p.field) for s in p.generators}
    return PresentedAlgebra(tuple(mapping.get(s, s) for s in p.generators), p.weights,
                            tuple(rel.substitute(polys) for rel in p.relations), p.field,
                            tuple((mapping.get(s, s), poly.substitute(polys)) for s, poly in p.definitions))


def rename_bialgebra(b: PresentedBialgebra, mapping: Dict[str, str]) -> PresentedBialgebra:
    field = b.field
    polys = {s: NCPoly.symbol(mapping.get(s, s), field) for s in b.generators}

    def rename_tensor(t: NCTensor) -> NCTensor:
        return NCTensor.from_dict({(tuple(mapping.get(s, s) for s in left), tuple(mapping.get(s, s) for s in right)): c
                                   for (left, right), c in t.terms}, field)

    return replace(b, algebra=rename_algebra(b.algebra, mapping),
                   comultiplication={mapping.get(s, s): rename_tensor(t) for s, t in b.comultiplication.items()},
                   counit={mapping.get(s, s): c for s, c in b.counit.items()},
                   object_symbols={gen: tuple(tuple(mapping.get(s, s) for s in row) for row in rows)
                                   for gen, rows in b.object_symbols.items()},
                   inverse_of={mapping.get(s, s): mapping.get(g, g) for s, g in b.inverse_of.items()},
                   antipode={mapping.get(s, s): p.substitute(polys) for s, p in b.antipode.items()} if b.antipode else None)


def gl2_rename(b: PresentedBialgebra) -> PresentedBialgebra:
    """Names a, b, c, d, delta, delta^-1 for presentations built from a 2-dim V with d = 2."""
    return rename_bialgebra(b, {s: GL2_NAMES[s] for s in b.generators if s in GL2_NAMES})


def quotient(p: PresentedAlgebra, killed: Sequence[str]) -> PresentedAlgebra:
    """Adds the listed generators as relations, e.g. b for the Borel quotient and b, c for the torus."""
    unknown = set(killed) - set(p.generators)
    if unknown:
        raise ShapeMismatchError(f"Cannot kill unknown generators {sorted(unknown)}")
    return replace(p, relations=_dedupe(list(p.relations) + [NCPoly.symbol(s, p.field) for s in killed]))


def in_bounded_span(candidates: Sequence[NCPoly], p: PresentedAlgebra, length_bound: int) -> List[NCPoly]:
    """The candidates that do not lie in the two-sided span of the relations at the given length bound."""
    return outside_bounded_span(candidates, p.relations, p.generators, length_bound, p.weight_map, p.field)


def torus_is_commutative(b: PresentedBialgebra, length_bound: int = 3) -> bool:
    """In the torus quotient (b = c = 0) of a GL2-named presentation, a, d and delta commute and delta = ad."""
    torus = quotient(b.algebra, ["b", "c"])
    a, d, delta = (NCPoly.symbol(s, b.field) for s in ("a", "d", "delta"))
    checks = [a * d - d * a, a * delta - delta * a, d * delta - delta * d, a * d - delta]
    return not in_bounded_span(checks, torus, length_bound)


def uend_into_uaut_check(a: QuadraticAlgebra, uaut: PresentedBialgebra, length_bound: int = 3) -> List[NCPoly]:
    """uend(A) relations that fail to vanish in uaut(A) under z_ij -> z_ij; empty when uend(A) maps into uaut(A)."""
    return in_bounded_span(list(uend_direct(a).relations), uaut.algebra, length_bound)


def counit_defects(b: PresentedBialgebra) -> List[NCPoly]:
    return [relation for relation in b.relations if relation.evaluate(b.counit)]


def homogeneity_defects(b: PresentedBialgebra) -> List[NCPoly]:
    weights = b.algebra.weight_map
    return [relation for relation in b.relations if len(relation.weights(weights)) > 1]


def comultiplication_defects(b: PresentedBialgebra, max_passes: int = 10000) -> List[NCPoly]:
    """Relations ρ whose Δ(ρ) does not rewrite to 0 factor by factor; exact only for confluent rule sets."""
    rules = b.algebra.rules
    return [relation for relation in b.relations
            if not apply_to_tensor(relation, b.comultiplication).reduce_factors(rules, max_passes).is_zero()]


# Emitters

def to_json(b: PresentedBialgebra) -> Dict:
    order = b.generators
    field = b.field
    document = {
        "generators": [dict({"name": s, "weight": w}, **({"inverse_of": b.inverse_of[s]} if s in b.inverse_of else {}))
                       for s, w in zip(b.generators, b.algebra.weights)],
        "relations": [signed_terms(relation, order) for relation in b.relations],
        "comultiplication": {s: [[format_scalar(c, field), list(left), list(right)] for (left, right), c in b.comultiplication[s].terms]
                             for s in order},
        "counit": {s: format_scalar(b.counit[s], field) for s in order},
    }
    if b.antipode is not None:
        document["antipode"] = {s: signed_terms(b.antipode[s], order) for s in order}
    return document


def algebra_to_json(p: PresentedAlgebra) -> Dict:
    document = {
        "generators": [{"name": s, "weight": w} for s, w in zip(p.generators, p.weights)],
        "relations": [signed_terms(relation, p.generators) for relation in p.relations],
    }
    if p.definitions:
        document["definitions"] = {s: signed_terms(poly, p.generators) for s, poly in p.definitions}
    return document


def _latex_symbol(symbol: str) -> str:
    base, inverse_mark = (symbol[:-3], "^{-1}") if symbol.endswith("^-1") else (symbol, "")
    parts = base.split("_")
    if base == "delta":
        base = r"\delta"
    elif len(parts) == 3:
        base = f"z^{{{parts[0]}}}_{{{parts[1]}{parts[2]}}}"
    return base + inverse_mark


def _latex_poly(p: NCPoly, order: Sequence[str]) -> str:
    pieces = []
    for position, (coefficient, monomial) in enumerate(signed_terms(p, order)):
        negative = coefficient.startswith("-")
        magnitude = coefficient.lstrip("-")
        body = " ".join(_latex_symbol(s) for s in monomial)
        if "/" in magnitude:
            numerator, denominator = magnitude.split("/")
            magnitude = f"\\tfrac{{{numerator}}}{{{denominator}}}"
        if not body:
            body = magnitude
        elif magnitude != "1":
            body = f"{magnitude} {body}"
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces) or "0"


def to_latex(relations: Sequence[NCPoly], order: Sequence[str]) -> str:
    lines = [f"{_latex_poly(relation, order)} &= 0" for relation in relations]
    return "\\begin{aligned}\n" + " \\\\\n".join(lines) + "\n\\end{aligned}"


def describe(b: PresentedBialgebra) -> str:
    lines = [f"generators: {', '.join(b.generators)}", "relations:"]
    lines += [f"  {text} = 0" for text in b.algebra.relation_strings()]
    if b.antipode is not None:
        lines.append("antipode:")
        lines += [f"  S({s}) = {format_poly(b.antipode[s], b.generators)}" for s in b.generators]
    return "\n".join(lines)