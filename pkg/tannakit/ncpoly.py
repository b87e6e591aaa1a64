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

"""Noncommutative polynomials over QQ or GF(p), presented algebras, bounded ideal spans and rewriting.

Monomials are tuples of generator symbols. Polynomials keep their terms sorted by (length, symbols)
so that equality is structural. The monomial order used to orient rewrite rules is degree-lex on
generator indices in declaration order: longer monomials are larger, and among equal lengths the
lexicographically larger index tuple is larger.
"""

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Any, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from . import logging
from .errors import DimensionMismatchError, NonGradedError, ScalarFormatError
from .exactlin import Field, MatrixExact, Scalar, Subspace, format_scalar, parse_scalar, rref, subspace_kron

Monomial = Tuple[str, ...]

DEFAULT_MAX_PASSES = 10000


def _coerce(value: Any, field: Field) -> Scalar:
    if isinstance(value, (str, int)):
        return parse_scalar(value, field)
    return field.convert(value)


def _sorted_terms(coefficients: Dict[Monomial, Scalar]) -> Tuple[Tuple[Monomial, Scalar], ...]:
    return tuple(sorted(((m, c) for m, c in coefficients.items() if c), key=lambda term: (len(term[0]), term[0])))


@dataclass(frozen=True)
class NCPoly:
    terms: Tuple[Tuple[Monomial, Scalar], ...] = ()
    field: Field = QQ

    @classmethod
    def from_dict(cls, coefficients: Dict[Monomial, Scalar], field: Field = QQ) -> "NCPoly":
        return cls(_sorted_terms(coefficients), field)

    @classmethod
    def from_terms(cls, terms: Iterable[Tuple[Any, Sequence[str]]], field: Field = QQ) -> "NCPoly":
        coefficients: Dict[Monomial, Scalar] = {}
        for coefficient, monomial in terms:
            monomial = tuple(monomial)
            coefficients[monomial] = coefficients.get(monomial, field.zero) + _coerce(coefficient, field)
        return cls.from_dict(coefficients, field)

    @classmethod
    def zero(cls, field: Field = QQ) -> "NCPoly":
        return cls((), field)

    @classmethod
    def constant(cls, value: Any, field: Field = QQ) -> "NCPoly":
        return cls.from_dict({(): _coerce(value, field)}, field)

    @classmethod
    def one(cls, field: Field = QQ) -> "NCPoly":
        return cls.constant(1, field)

    @classmethod
    def symbol(cls, name: str, field: Field = QQ) -> "NCPoly":
        return cls((((name,), field.one),), field)

    def as_dict(self) -> Dict[Monomial, Scalar]:
        return dict(self.terms)

    def coefficient(self, monomial: Sequence[str]) -> Scalar:
        return self.as_dict().get(tuple(monomial), self.field.zero)

    @property
    def monomials(self) -> Tuple[Monomial, ...]:
        return tuple(m for m, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((len(m) for m, _ in self.terms), default=0)

    def lengths(self) -> Tuple[int, ...]:
        return tuple(sorted({len(m) for m, _ in self.terms}))

    def symbols(self) -> Tuple[str, ...]:
        return tuple(sorted({s for m, _ in self.terms for s in m}))

    def weights(self, weights: Dict[str, int]) -> Tuple[int, ...]:
        return tuple(sorted({sum(weights[s] for s in m) for m, _ in self.terms}))

    def __add__(self, other: "NCPoly") -> "NCPoly":
        coefficients = self.as_dict()
        for monomial, coefficient in other.terms:
            coefficients[monomial] = coefficients.get(monomial, self.field.zero) + coefficient
        return NCPoly.from_dict(coefficients, self.field)

    def __neg__(self) -> "NCPoly":
        return NCPoly(tuple((m, -c) for m, c in self.terms), self.field)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def __mul__(self, other: "NCPoly") -> "NCPoly":
        coefficients: Dict[Monomial, Scalar] = {}
        for left, a in self.terms:
            for right, b in other.terms:
                monomial = left + right
                coefficients[monomial] = coefficients.get(monomial, self.field.zero) + a * b
        return NCPoly.from_dict(coefficients, self.field)

    def scale(self, factor: Scalar) -> "NCPoly":
        return NCPoly.from_dict({m: factor * c for m, c in self.terms}, self.field)

    def substitute(self, mapping: Dict[str, "NCPoly"]) -> "NCPoly":
        result = NCPoly.zero(self.field)
        for monomial, coefficient in self.terms:
            term = NCPoly.constant(coefficient, self.field) if coefficient != self.field.one else NCPoly.one(self.field)
            for symbol in monomial:
                term = term * mapping.get(symbol, NCPoly.symbol(symbol, self.field))
            result = result + term
        return result

    def evaluate(self, values: Dict[str, Scalar]) -> Scalar:
        total = self.field.zero
        for monomial, coefficient in self.terms:
            value = coefficient
            for symbol in monomial:
                value = value * values[symbol]
            total += value
        return total

    def __str__(self):
        return format_poly(self)


def poly_sum(polys: Iterable[NCPoly], field: Field = QQ) -> NCPoly:
    result = NCPoly.zero(field)
    for poly in polys:
        result = result + poly
    return result


def monomial_key(monomial: Monomial, order: Dict[str, int]) -> Tuple[int, Tuple[int, ...]]:
    return len(monomial), tuple(order.get(s, len(order)) for s in monomial)


def _symbol_order(order: Optional[Sequence[str]], symbols: Iterable[str]) -> Dict[str, int]:
    names = list(order) if order else []
    names += sorted(set(symbols) - set(names))
    return {name: index for index, name in enumerate(names)}


def _render_monomial(monomial: Monomial) -> str:
    return "*".join(monomial) if monomial else "1"


def format_poly(p: NCPoly, order: Optional[Sequence[str]] = None) -> str:
    """Pretty form such as "a*d - c*b - delta": longer monomials first, then by generator index."""
    if p.is_zero():
        return "0"
    index = _symbol_order(order, p.symbols())
    terms = sorted(p.terms, key=lambda term: (-len(term[0]), monomial_key(term[0], index)[1]))
    pieces = []
    for position, (monomial, coefficient) in enumerate(terms):
        text = format_scalar(coefficient, p.field)
        negative = text.startswith("-") and p.field == QQ
        magnitude = text.lstrip("-") if negative else text
        if monomial:
            body = _render_monomial(monomial) if magnitude == "1" else f"{magnitude}*{_render_monomial(monomial)}"
        else:
            body = magnitude
        if position == 0:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f" - {body}" if negative else f" + {body}")
    return "".join(pieces)


def signed_terms(p: NCPoly, order: Optional[Sequence[str]] = None) -> List[List[Any]]:
    """JSON form: [["1", ["a", "d"]], ["-1", ["c", "b"]], ...] in the pretty-print order."""
    index = _symbol_order(order, p.symbols())
    terms = sorted(p.terms, key=lambda term: (-len(term[0]), monomial_key(term[0], index)[1]))
    return [[format_scalar(c, p.field), list(m)] for m, c in terms]


def signed_text(p: NCPoly, order: Optional[Sequence[str]] = None) -> str:
    """Flat text form such as "+1 a d -1 c b -1 delta"."""
    parts = []
    for coefficient, monomial in signed_terms(p, order):
        sign = "" if coefficient.startswith("-") else "+"
        parts.append(" ".join([f"{sign}{coefficient}"] + monomial))
    return " ".join(parts)


def parse_signed_terms(terms: Sequence[Sequence[Any]], field: Field = QQ) -> NCPoly:
    try:
        return NCPoly.from_terms(((coefficient, monomial) for coefficient, monomial in terms), field)
    except (TypeError, ValueError) as e:
        raise ScalarFormatError(f"Malformed signed-term list: {terms!r}") from e


@dataclass(frozen=True)
class NCTensor:
    """Elements of T ⊗ T, used for comultiplication tables."""
    terms: Tuple[Tuple[Tuple[Monomial, Monomial], Scalar], ...] = ()
    field: Field = QQ

    @classmethod
    def from_dict(cls, coefficients: Dict[Tuple[Monomial, Monomial], Scalar], field: Field = QQ) -> "NCTensor":
        return cls(tuple(sorted(((k, c) for k, c in coefficients.items() if c), key=lambda t: (len(t[0][0]) + len(t[0][1]), t[0]))),
                   field)

    @classmethod
    def tensor(cls, left: NCPoly, right: NCPoly) -> "NCTensor":
        return cls.from_dict({(l, r): a * b for l, a in left.terms for r, b in right.terms}, left.field)

    @classmethod
    def one(cls, field: Field = QQ) -> "NCTensor":
        return cls(((((), ()), field.one),), field)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "NCTensor") -> "NCTensor":
        coefficients = dict(self.terms)
        for key, coefficient in other.terms:
            coefficients[key] = coefficients.get(key, self.field.zero) + coefficient
        return NCTensor.from_dict(coefficients, self.field)

    def __mul__(self, other: "NCTensor") -> "NCTensor":
        coefficients = {}
        for (l1, r1), a in self.terms:
            for (l2, r2), b in other.terms:
                key = (l1 + l2, r1 + r2)
                coefficients[key] = coefficients.get(key, self.field.zero) + a * b
        return NCTensor.from_dict(coefficients, self.field)

    def scale(self, factor: Scalar) -> "NCTensor":
        return NCTensor.from_dict({k: factor * c for k, c in self.terms}, self.field)

    def reduce_factors(self, rules: Sequence["RewriteRule"], max_passes: int = DEFAULT_MAX_PASSES) -> "NCTensor":
        """Normal form of both tensor factors; a zero result certifies membership in I ⊗ T + T ⊗ I."""
        cache: Dict[Monomial, NCPoly] = {}

        def normal(monomial: Monomial) -> NCPoly:
            if monomial not in cache:
                cache[monomial] = rewrite_reduce(NCPoly.from_dict({monomial: self.field.one}, self.field), rules, max_passes)
            return cache[monomial]

        left_reduced: Dict[Tuple[Monomial, Monomial], Scalar] = {}
        for (left, right), coefficient in self.terms:
            for m, c in normal(left).terms:
                left_reduced[(m, right)] = left_reduced.get((m, right), self.field.zero) + coefficient * c
        both_reduced: Dict[Tuple[Monomial, Monomial], Scalar] = {}
        for (left, right), coefficient in left_reduced.items():
            for m, c in normal(right).terms:
                both_reduced[(left, m)] = both_reduced.get((left, m), self.field.zero) + coefficient * c
        return NCTensor.from_dict(both_reduced, self.field)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for (left, right), coefficient in self.terms:
            parts.append(f"{format_scalar(coefficient, self.field)}*({_render_monomial(left)} ⊗ {_render_monomial(right)})")
        return " + ".join(parts)


def apply_to_tensor(p: NCPoly, images: Dict[str, NCTensor]) -> NCTensor:
    """Extends `images` multiplicatively to p, as for the comultiplication of a bialgebra."""
    result = NCTensor((), p.field)
    for monomial, coefficient in p.terms:
        term = NCTensor.one(p.field)
        for symbol in monomial:
            term = term * images[symbol]
        result = result + term.scale(coefficient)
    return result


@dataclass(frozen=True)
class PresentedAlgebra:
    generators: Tuple[str, ...]
    weights: Tuple[int, ...]
    relations: Tuple[NCPoly, ...]
    field: Field = QQ
    definitions: Tuple[Tuple[str, NCPoly], ...] = ()

    def __post_init__(self):
        if len(self.weights) != len(self.generators):
            raise DimensionMismatchError(f"Expected {len(self.generators)} weights, got {len(self.weights)}")
        if len(set(self.generators)) != len(self.generators):
            raise DimensionMismatchError(f"Duplicate generator symbols in {self.generators}")
        known = set(self.generators)
        weight_map = self.weight_map
        for relation in self.relations:
            unknown = set(relation.symbols()) - known
            if unknown:
                raise DimensionMismatchError(f"Relation {format_poly(relation)} uses unknown symbols {sorted(unknown)}")
            if len(relation.weights(weight_map)) > 1:
                raise NonGradedError(f"Relation {format_poly(relation, self.generators)} is not homogeneous for the declared weights")

    @property
    def weight_map(self) -> Dict[str, int]:
        return dict(zip(self.generators, self.weights))

    @cached_property
    def rules(self) -> Tuple["RewriteRule", ...]:
        return rules_from_relations(self.relations, self.generators)

    def is_length_graded(self) -> bool:
        return all(w == 1 for w in self.weights) and all(len(r.lengths()) <= 1 for r in self.relations)

    def relation_strings(self) -> List[str]:
        return [format_poly(r, self.generators) for r in self.relations]


def _monomial_index(monomial: Monomial, position: Dict[str, int], base: int) -> int:
    index = 0
    for symbol in monomial:
        index = index * base + position[symbol]
    return index


def _relation_vector(relation: NCPoly, position: Dict[str, int], base: int) -> Tuple[Scalar, ...]:
    vector = [relation.field.zero] * base ** relation.degree()
    for monomial, coefficient in relation.terms:
        vector[_monomial_index(monomial, position, base)] = coefficient
    return tuple(vector)


def _ideal_components(p: PresentedAlgebra, nmax: int) -> Iterator[Subspace]:
    # I_n = I_{n-1} ⊗ V + sum over relations r with |r| <= n of V^{n-|r|} ⊗ r
    base = len(p.generators)
    position = {s: i for i, s in enumerate(p.generators)}
    by_length: Dict[int, List[Tuple[Scalar, ...]]] = {}
    for relation in p.relations:
        if not relation.is_zero():
            by_length.setdefault(relation.degree(), []).append(_relation_vector(relation, position, base))
    ideal = Subspace.zero(1, p.field)
    for n in range(nmax + 1):
        if n > 0:
            ideal = subspace_kron(ideal, Subspace.full(base, p.field))
        for length, vectors in sorted(by_length.items()):
            if length > n:
                continue
            placed = subspace_kron(Subspace.full(base ** (n - length), p.field),
                                   Subspace.from_vectors(vectors, base ** length, p.field))
            ideal = ideal + placed
        yield ideal


def graded_dims(p: PresentedAlgebra, nmax: int) -> Tuple[int, ...]:
    if not p.is_length_graded():
        raise NonGradedError("graded_dim needs weight-1 generators and length-homogeneous relations")
    base = len(p.generators)
    dims = []
    for n, ideal in enumerate(_ideal_components(p, nmax)):
        dims.append(base ** n - ideal.dim)
        logging.debug(f"graded dimension in degree {n}: {dims[-1]}")
    return tuple(dims)


def graded_dim(p: PresentedAlgebra, n: int) -> int:
    return graded_dims(p, n)[n]


def enumerate_monomials(generators: Sequence[str], length_bound: int) -> List[Monomial]:
    monomials: List[Monomial] = []
    for length in range(length_bound + 1):
        monomials.extend(product(generators, repeat=length))
    return monomials


def _weight_blocks(generators: Sequence[str], length_bound: int, weights: Optional[Dict[str, int]]) -> Dict[int, Dict[Monomial, int]]:
    blocks: Dict[int, Dict[Monomial, int]] = {}
    for monomial in enumerate_monomials(generators, length_bound):
        block = blocks.setdefault(_monomial_weight(monomial, weights), {})
        block[monomial] = len(block)
    return blocks


def _monomial_weight(monomial: Monomial, weights: Optional[Dict[str, int]]) -> int:
    return sum(weights[s] for s in monomial) if weights else 0


def bounded_span(relations: Sequence[NCPoly], generators: Sequence[str], length_bound: int,
                 weights: Optional[Dict[str, int]] = None, field: Field = QQ) -> Dict[int, Subspace]:
    """Two-sided span of the relations inside the monomials of length <= length_bound.

    The result is split into blocks keyed by weight when weights are given (ideal elements of
    homogeneous relations stay homogeneous); without weights there is a single block with key 0.
    """
    return _bounded_span(relations, generators, length_bound, weights, field, _weight_blocks(generators, length_bound, weights))


def _bounded_span(relations: Sequence[NCPoly], generators: Sequence[str], length_bound: int, weights: Optional[Dict[str, int]],
                  field: Field, blocks: Dict[int, Dict[Monomial, int]]) -> Dict[int, Subspace]:
    rows: Dict[int, List[Tuple[Scalar, ...]]] = {key: [] for key in blocks}
    for relation in relations:
        if relation.is_zero():
            continue
        relation_weights = relation.weights(weights) if weights else (0,)
        if len(relation_weights) > 1:
            raise NonGradedError(f"Relation {format_poly(relation, generators)} is not homogeneous for the given weights")
        room = length_bound - relation.degree()
        for left_length in range(room + 1):
            for right_length in range(room - left_length + 1):
                for left in product(generators, repeat=left_length):
                    for right in product(generators, repeat=right_length):
                        key = _monomial_weight(left, weights) + relation_weights[0] + _monomial_weight(right, weights)
                        block = blocks[key]
                        vector = [field.zero] * len(block)
                        for monomial, coefficient in relation.terms:
                            vector[block[left + monomial + right]] = coefficient
                        rows[key].append(tuple(vector))

    return {key: Subspace.from_vectors(rows[key], len(blocks[key]), field) if rows[key] else Subspace.zero(len(blocks[key]), field)
            for key in sorted(blocks)}


def outside_bounded_span(candidates: Sequence[NCPoly], relations: Sequence[NCPoly], generators: Sequence[str], length_bound: int,
                         weights: Optional[Dict[str, int]] = None, field: Field = QQ) -> List[NCPoly]:
    """The candidates whose weight components are not vectors of the bounded span of the relations.

    The bound is raised to the length of the longest candidate, so every candidate has a vector to test.
    """
    length_bound = max([length_bound] + [c.degree() for c in candidates if not c.is_zero()])
    blocks = _weight_blocks(generators, length_bound, weights)
    span = _bounded_span(relations, generators, length_bound, weights, field, blocks)
    outside = []
    for candidate in candidates:
        components: Dict[int, Dict[Monomial, Scalar]] = {}
        for monomial, coefficient in candidate.terms:
            components.setdefault(_monomial_weight(monomial, weights), {})[monomial] = coefficient
        for key, terms in components.items():
            vector = [field.zero] * len(blocks[key])
            for monomial, coefficient in terms.items():
                vector[blocks[key][monomial]] = coefficient
            if not span[key].contains(vector):
                outside.append(candidate)
                break
    logging.debug(f"{len(outside)} of {len(candidates)} candidates lie outside the span at length {length_bound}")
    return outside


def span_equal(rels_a: Sequence[NCPoly], rels_b: Sequence[NCPoly], length_bound: int, generators: Optional[Sequence[str]] = None,
               weights: Optional[Dict[str, int]] = None, field: Field = QQ) -> bool:
    if generators is None:
        generators = sorted({s for r in list(rels_a) + list(rels_b) for s in r.symbols()})
    span_a = bounded_span(rels_a, generators, length_bound, weights, field)
    span_b = bounded_span(rels_b, generators, length_bound, weights, field)
    for key in span_a:
        if span_a[key] != span_b[key]:
            logging.debug(f"bounded spans differ in weight block {key}: dims {span_a[key].dim} vs {span_b[key].dim}")
            return False
    return True


class RewriteRule(NamedTuple):
    lhs: Monomial
    rhs: NCPoly

    def __str__(self):
        return f"{_render_monomial(self.lhs)} -> {format_poly(self.rhs)}"


class Reduction(NamedTuple):
    poly: NCPoly
    passes: int
    exhausted: bool


def rules_from_relations(relations: Sequence[NCPoly], generators: Sequence[str]) -> Tuple[RewriteRule, ...]:
    """Orients the relations by row reduction: each pivot monomial (the largest one) rewrites to the rest."""
    relations = [r for r in relations if not r.is_zero()]
    if not relations:
        return ()
    field = relations[0].field
    order = _symbol_order(generators, (s for r in relations for s in r.symbols()))
    columns = sorted({m for r in relations for m in r.monomials}, key=lambda m: monomial_key(m, order), reverse=True)
    position = {m: j for j, m in enumerate(columns)}
    rows = []
    for relation in relations:
        row = [field.zero] * len(columns)
        for monomial, coefficient in relation.terms:
            row[position[monomial]] = coefficient
        rows.append(row)
    echelon = rref(MatrixExact.from_rows(rows, field, cols=len(columns)))
    rules = []
    for row_index, pivot in enumerate(echelon.pivots):
        row = echelon.matrix.row(row_index)
        remainder = {columns[j]: -row[j] for j in range(len(columns)) if j != pivot and row[j]}
        rules.append(RewriteRule(columns[pivot], NCPoly.from_dict(remainder, field)))
    return tuple(rules)


def _rule_index(rules: Sequence[RewriteRule]) -> Dict[str, List[RewriteRule]]:
    index: Dict[str, List[RewriteRule]] = {}
    for rule in rules:
        if rule.lhs:
            index.setdefault(rule.lhs[0], []).append(rule)
    for candidates in index.values():
        candidates.sort(key=lambda rule: len(rule.lhs))
    return index


def _find_redex(monomial: Monomial, index: Dict[str, List[RewriteRule]]) -> Optional[Tuple[int, RewriteRule]]:
    for position, symbol in enumerate(monomial):
        for rule in index.get(symbol, ()):
            if monomial[position:position + len(rule.lhs)] == rule.lhs:
                return position, rule
    return None


def reduce_with_stats(p: NCPoly, rules: Sequence[RewriteRule], max_passes: int = DEFAULT_MAX_PASSES) -> Reduction:
    """Leftmost-innermost rewriting, one replacement per pass, always on the largest reducible monomial."""
    index = _rule_index(rules)
    field = p.field
    current = p.as_dict()
    passes = 0
    while True:
        redex = None
        for monomial in sorted(current, key=lambda m: (len(m), m), reverse=True):
            found = _find_redex(monomial, index)
            if found:
                redex = (monomial, found[0], found[1])
                break
        if redex is None:
            return Reduction(NCPoly.from_dict(current, field), passes, False)
        if passes >= max_passes:
            logging.warning(f"Rewriting stopped after {passes} passes", "rewrite-pass-cap-warning")
            return Reduction(NCPoly.from_dict(current, field), passes, True)
        monomial, position, rule = redex
        coefficient = current.pop(monomial)
        prefix, suffix = monomial[:position], monomial[position + len(rule.lhs):]
        for replacement, c in rule.rhs.terms:
            target = prefix + replacement + suffix
            value = current.get(target, field.zero) + coefficient * c
            if value:
                current[target] = value
            else:
                current.pop(target, None)
        passes += 1


def rewrite_reduce(p: NCPoly, rules: Sequence[RewriteRule], max_passes: int = DEFAULT_MAX_PASSES) -> NCPoly:
    return reduce_with_stats(p, rules, max_passes).poly


def reduces_to_zero(p: NCPoly, rules: Sequence[RewriteRule], max_passes: int = DEFAULT_MAX_PASSES) -> bool:
    return rewrite_reduce(p, rules, max_passes).is_zero()
