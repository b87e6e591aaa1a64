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

"""Finitely presented strict monoidal categories and the monoid of words Λ(d) = <r_1, ..., r_{d-1}, r_d^±1>.

Words are kept in normal form: no letter sits next to its own inverse. The generating inequalities of
the order on Λ(d) and the index ranges of the generators φ_{a,b} and θ_{a,b} come from one place,
`GeneratingRanges`, so they can be narrowed without touching callers.
"""

import re
from collections import deque
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache
from typing import Collection, Dict, Iterable, Iterator, List, NamedTuple, Optional, Set, Tuple

from . import logging
from .errors import DimensionMismatchError, InputError, InverseLetterError

_LETTER_PATTERN = re.compile(r"^([A-Za-z][A-Za-z_]*?)(\d*)(?:\^(-?1))?$")

CATEGORY_KINDS = ("C", "D", "U", "U_up_plus", "TL")


class Letter(NamedTuple):
    gen: str
    exp: int = 1

    def inverse(self) -> "Letter":
        return Letter(self.gen, -self.exp)

    def __str__(self):
        return self.gen if self.exp == 1 else f"{self.gen}^-1"


@dataclass(frozen=True)
class ObjectWord:
    letters: Tuple[Letter, ...] = ()

    def __len__(self):
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def __getitem__(self, item):
        if isinstance(item, slice):
            return ObjectWord(self.letters[item])
        return self.letters[item]

    def __add__(self, other: "ObjectWord") -> "ObjectWord":
        return ObjectWord(self.letters + other.letters)

    def __str__(self):
        return format_word(self)

    def is_empty(self) -> bool:
        return not self.letters


EMPTY = ObjectWord()


def r(i: int, exp: int = 1) -> Letter:
    return Letter(f"r{i}", exp)


def word(*letters: Letter) -> ObjectWord:
    return ObjectWord(tuple(letters))


def letter_index(letter: Letter) -> int:
    """i for the letter r_i or its inverse."""
    return int(letter.gen[1:])


def lambda_invertible(d: int) -> Set[str]:
    return {f"r{d}"}


def normalize(letters: Iterable[Letter], invertible: Optional[Collection[str]] = None) -> ObjectWord:
    """Cancels adjacent inverse pairs until none is left; a stack gives the unique normal form in one sweep."""
    stack: List[Letter] = []
    for letter in letters:
        if letter.exp not in (1, -1):
            raise InverseLetterError(f"Letter exponent must be +1 or -1, got {letter.exp} on {letter.gen}")
        if letter.exp == -1 and invertible is not None and letter.gen not in invertible:
            raise InverseLetterError(f"Generator {letter.gen} is not invertible")
        if stack and stack[-1] == letter.inverse():
            stack.pop()
        else:
            stack.append(letter)
    return ObjectWord(tuple(stack))


def parse_word(text: str, d: Optional[int] = None, invertible: Optional[Collection[str]] = None) -> ObjectWord:
    """Reads "r1 r2^-1 r1"; "1" and the empty string are the empty word. With d, letters must lie in Λ(d)."""
    tokens = text.split()
    if tokens == ["1"]:
        return EMPTY
    letters = []
    for token in tokens:
        match = _LETTER_PATTERN.match(token)
        if not match:
            raise InputError(f"Malformed letter '{token}' in word '{text}'")
        letter = Letter(match.group(1) + match.group(2), int(match.group(3) or 1))
        if d is not None:
            if match.group(1) != "r" or not match.group(2) or not 1 <= int(match.group(2)) <= d:
                raise InputError(f"Letter '{token}' is not in the alphabet r1..r{d}")
        letters.append(letter)
    if d is not None and invertible is None:
        invertible = lambda_invertible(d)
    return normalize(letters, invertible)


def format_word(w: ObjectWord) -> str:
    return " ".join(str(letter) for letter in w) if w.letters else "1"


def weight_ell(w: ObjectWord, d: int) -> int:
    return sum(letter_index(letter) if letter.exp == 1 else -d for letter in w)


def is_dominant(w: ObjectWord) -> bool:
    return all(letter.exp == 1 for letter in w)


def lambda_letters(d: int) -> Tuple[Letter, ...]:
    """The alphabet of Λ(d) in its fixed order: r1, ..., r_d, then r_d^-1."""
    return tuple(r(i) for i in range(1, d + 1)) + (r(d, -1),)


def word_key(w: ObjectWord, d: int) -> Tuple[int, Tuple[int, ...]]:
    rank = {letter: position for position, letter in enumerate(lambda_letters(d))}
    return len(w), tuple(rank[letter] for letter in w)


def enumerate_words(d: int, maxlen: int) -> List[ObjectWord]:
    """All normalized words of Λ(d) of length <= maxlen, by length and then lexicographically."""
    alphabet = lambda_letters(d)
    words = [EMPTY]
    layer = [EMPTY]
    for _ in range(maxlen):
        layer = [w + word(letter) for w in layer for letter in alphabet if not (w.letters and w.letters[-1] == letter.inverse())]
        words.extend(layer)
    return words


@dataclass(frozen=True)
class GeneratingRanges:
    """Index ranges of φ_{a,b} and θ_{a,b}; the boundary cases a+b = d are included by default."""
    include_boundary: bool = True

    def phi_pairs(self, d: int) -> Tuple[Tuple[int, int], ...]:
        bound = d if self.include_boundary else d - 1
        return tuple((a, b) for a in range(1, d + 1) for b in range(1, d + 1) if a + b <= bound)

    def theta_pairs(self, d: int) -> Tuple[Tuple[int, int], ...]:
        bound = d if self.include_boundary else d + 1
        return tuple((a, b) for a in range(1, d) for b in range(1, d) if a + b >= bound)


DEFAULT_RANGES = GeneratingRanges()


@dataclass(frozen=True)
class ObjectGenerator:
    name: str
    invertible: bool = False
    weight: int = 0


@dataclass(frozen=True)
class MorGen:
    name: str
    source: ObjectWord
    target: ObjectWord
    family: str
    params: Tuple[int, ...] = ()

    def __str__(self):
        return f"{self.name}: {format_word(self.source)} -> {format_word(self.target)}"


@dataclass(frozen=True)
class CategoryRelation:
    """A relation between two formal composites with a common source and target, stored for documentation."""
    name: str
    source: ObjectWord
    target: ObjectWord
    lhs: str
    rhs: str


@dataclass(frozen=True)
class PresentedMonoidalCategory:
    kind: str
    objects: Tuple[ObjectGenerator, ...]
    morphisms: Tuple[MorGen, ...]
    relations: Tuple[CategoryRelation, ...] = ()
    d: Optional[int] = None
    params: Dict[str, int] = dataclass_field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        names = [o.name for o in self.objects]
        if len(set(names)) != len(names):
            raise DimensionMismatchError(f"Duplicate object generators: {names}")
        invertible = self.invertible_names()
        for morphism in self.morphisms:
            self._check_word(morphism.source, invertible, morphism.name)
            self._check_word(morphism.target, invertible, morphism.name)
        for relation in self.relations:
            self._check_word(relation.source, invertible, relation.name)
            self._check_word(relation.target, invertible, relation.name)

    def _check_word(self, w: ObjectWord, invertible: Set[str], owner: str):
        known = {o.name for o in self.objects}
        for letter in w:
            if letter.gen not in known:
                raise DimensionMismatchError(f"{owner} uses unknown object generator {letter.gen}")
            if letter.exp == -1 and letter.gen not in invertible:
                raise InverseLetterError(f"{owner} inverts the non-invertible generator {letter.gen}")

    def invertible_names(self) -> Set[str]:
        return {o.name for o in self.objects if o.invertible}

    def object(self, name: str) -> ObjectGenerator:
        for o in self.objects:
            if o.name == name:
                return o
        raise DimensionMismatchError(f"Unknown object generator {name}")

    def morphism(self, name: str) -> MorGen:
        for m in self.morphisms:
            if m.name == name:
                return m
        raise DimensionMismatchError(f"Unknown morphism generator {name}")


def phi(a: int, b: int) -> MorGen:
    return MorGen(f"phi_{a}_{b}", word(r(a + b)), word(r(a), r(b)), "phi", (a, b))


def theta(a: int, b: int, d: int) -> MorGen:
    target = word(r(a + b - d)) if a + b > d else EMPTY
    return MorGen(f"theta_{a}_{b}", word(r(a), r(d, -1), r(b)), target, "theta", (a, b))


def inclusion(i: int) -> MorGen:
    return MorGen(f"incl_{i}", word(r(i)), word(*[r(1)] * i), "inclusion", (i,))


def pairing(a: int, d: int) -> MorGen:
    return MorGen(f"ev_{a}", word(r(a), r(d, -1), r(d - a)), EMPTY, "pairing", (a, d - a))


def _lambda_objects(d: int, with_inverse: bool = True) -> Tuple[ObjectGenerator, ...]:
    return tuple(ObjectGenerator(f"r{i}", invertible=with_inverse and i == d, weight=i) for i in range(1, d + 1))


def _phi_relations(d: int) -> List[CategoryRelation]:
    return [CategoryRelation(f"rel1_{a}_{b}_{c}", word(r(a + b + c)), word(r(a), r(b), r(c)),
                             f"(r{a} phi_{b}_{c}) o phi_{a}_{b + c}", f"(phi_{a}_{b} r{c}) o phi_{a + b}_{c}")
            for a, b, c in _triples(d) if a + b + c <= d]


def _theta_relations(d: int) -> List[CategoryRelation]:
    relations = []
    for a, b, c in _triples(d - 1):
        if a + b + c >= 2 * d:
            relations.append(CategoryRelation(
                f"rel2_{a}_{b}_{c}", word(r(a), r(d, -1), r(b), r(d, -1), r(c)), _r_or_empty(a + b + c - 2 * d),
                f"theta_{a + b - d}_{c} o (theta_{a}_{b} r{d}^-1 r{c})", f"theta_{a}_{b + c - d} o (r{a} r{d}^-1 theta_{b}_{c})"))
    return relations


def _mixed_relations(d: int) -> List[CategoryRelation]:
    relations = []
    for a, b, c in _triples(d - 1):
        if a + b <= d <= b + c:
            relations.append(CategoryRelation(
                f"rel3_{a}_{b}_{c}", normalize(word(r(a + b), r(d, -1), r(c))), normalize(word(r(a)) + _r_or_empty(b + c - d)),
                f"(r{a} theta_{b}_{c}) o (phi_{a}_{b} r{d}^-1 r{c})", f"phi_{a}_{b + c - d} o theta_{a + b}_{c}"))
        if b + c <= d <= a + b:
            relations.append(CategoryRelation(
                f"rel4_{a}_{b}_{c}", normalize(word(r(a), r(d, -1), r(b + c))), normalize(_r_or_empty(a + b - d) + word(r(c))),
                f"(theta_{a}_{b} r{c}) o (r{a} r{d}^-1 phi_{b}_{c})", f"phi_{a + b - d}_{c} o theta_{a}_{b + c}"))
    return relations


def _triples(top: int) -> Iterator[Tuple[int, int, int]]:
    for a in range(1, top + 1):
        for b in range(1, top + 1):
            for c in range(1, top + 1):
                yield a, b, c


def _r_or_empty(i: int) -> ObjectWord:
    return word(r(i)) if i > 0 else EMPTY


def build_category(kind: str, d: Optional[int] = None, a: Optional[int] = None,
                   ranges: GeneratingRanges = DEFAULT_RANGES) -> PresentedMonoidalCategory:
    if kind not in CATEGORY_KINDS:
        raise InputError(f"Unknown category kind '{kind}', expected one of {', '.join(CATEGORY_KINDS)}")

    if kind == "C":
        return PresentedMonoidalCategory("C", _lambda_objects(2, with_inverse=False), (inclusion(2),))

    if kind == "TL":
        v = Letter("v")
        cup = MorGen("phi", EMPTY, word(v, v), "cup")
        cap = MorGen("psi", word(v, v), EMPTY, "cap")
        snakes = (CategoryRelation("snake_left", word(v), word(v), "(psi v) o (v phi)", "v"),
                  CategoryRelation("snake_right", word(v), word(v), "(v psi) o (phi v)", "v"))
        return PresentedMonoidalCategory("TL", (ObjectGenerator("v"),), (cup, cap), snakes)

    if d is None or d < 2:
        raise InputError(f"Category {kind} needs d >= 2, got {d}")

    if kind == "D":
        if a is None or not 1 <= a <= d - 1:
            raise InputError(f"Category D needs 1 <= a <= d-1, got a={a} for d={d}")
        morphisms = tuple(inclusion(i) for i in range(2, d + 1)) + (pairing(a, d),)
        return PresentedMonoidalCategory("D", _lambda_objects(d), morphisms, d=d, params={"a": a})

    phis = tuple(phi(x, y) for x, y in ranges.phi_pairs(d))
    if kind == "U_up_plus":
        return PresentedMonoidalCategory("U_up_plus", _lambda_objects(d, with_inverse=False), phis, tuple(_phi_relations(d)), d=d)

    thetas = tuple(theta(x, y, d) for x, y in ranges.theta_pairs(d))
    relations = tuple(_phi_relations(d) + _theta_relations(d) + _mixed_relations(d))
    return PresentedMonoidalCategory("U", _lambda_objects(d), phis + thetas, relations, d=d)


class ElementaryMap(NamedTuple):
    left: ObjectWord
    generator: MorGen
    right: ObjectWord
    other: ObjectWord


def elementary_maps(w: ObjectWord, d: int, direction: str, ranges: GeneratingRanges = DEFAULT_RANGES) -> List[ElementaryMap]:
    """Whiskered φ-steps into w (direction "into") or θ-steps out of w (direction "outof")."""
    letters = w.letters
    maps = []
    if direction == "into":
        pairs = set(ranges.phi_pairs(d))
        for i in range(len(letters) - 1):
            first, second = letters[i], letters[i + 1]
            if first.exp == 1 and second.exp == 1 and (letter_index(first), letter_index(second)) in pairs:
                x, y = letter_index(first), letter_index(second)
                left, right = w[:i], w[i + 2:]
                maps.append(ElementaryMap(left, phi(x, y), right, normalize(left + word(r(x + y)) + right)))
    elif direction == "outof":
        pairs = set(ranges.theta_pairs(d))
        inverse = r(d, -1)
        for i in range(len(letters) - 2):
            first, middle, last = letters[i:i + 3]
            if middle == inverse and first.exp == 1 and last.exp == 1 and (letter_index(first), letter_index(last)) in pairs:
                x, y = letter_index(first), letter_index(last)
                left, right = w[:i], w[i + 3:]
                maps.append(ElementaryMap(left, theta(x, y, d), right, normalize(left + _r_or_empty(x + y - d) + right)))
    else:
        raise InputError(f"Unknown direction '{direction}', expected 'into' or 'outof'")
    return maps


def _successors(w: ObjectWord, d: int, limit: int, ranges: GeneratingRanges) -> Iterator[ObjectWord]:
    # Whiskering happens before normalization, so a hidden pair r_d^k ... r_d^-k can sit at any split
    # of w; the r_d and empty-word rewrites are therefore applied with every such conjugation.
    invertible = lambda_invertible(d)
    letters = w.letters
    for i, letter in enumerate(letters):
        if letter.exp != 1:
            continue
        c = letter_index(letter)
        left, right = w[:i], w[i + 1:]
        for x, y in ranges.phi_pairs(d):
            if x + y == c and c < d:
                yield normalize(left + word(r(x), r(y)) + right, invertible)
        for x, y in ranges.theta_pairs(d):
            if x + y - d == c:
                yield normalize(left + word(r(x), r(d, -1), r(y)) + right, invertible)
    for split in range(len(letters) + 1):
        left, right = w[:split], w[split:]
        for k in range(-limit - 1, limit + 1):
            for x, y in ranges.phi_pairs(d):
                if x + y == d:
                    yield normalize(left + _power(d, k) + word(r(x), r(y)) + _power(d, -k - 1) + right, invertible)
            for x, y in ranges.theta_pairs(d):
                if x + y == d:
                    yield normalize(left + _power(d, k) + word(r(x), r(d, -1), r(y)) + _power(d, -k) + right, invertible)


def _power(d: int, k: int) -> ObjectWord:
    return ObjectWord((r(d, 1 if k > 0 else -1),) * abs(k))


class SearchResult(NamedTuple):
    reachable: bool
    visited: int


def leq_search(lower: ObjectWord, upper: ObjectWord, d: int, ranges: GeneratingRanges = DEFAULT_RANGES) -> SearchResult:
    """Breadth-first search upwards from `lower`; every rewrite lengthens a word, so words longer than `upper` are dropped."""
    if lower == upper:
        return SearchResult(True, 1)
    if weight_ell(lower, d) != weight_ell(upper, d) or len(lower) >= len(upper):
        return SearchResult(False, 1)
    seen = {lower}
    queue = deque([lower])
    while queue:
        current = queue.popleft()
        for successor in _successors(current, d, len(upper), ranges):
            if len(successor) > len(upper) or successor in seen:
                continue
            if successor == upper:
                logging.debug(f"{format_word(lower)} <= {format_word(upper)} after visiting {len(seen)} words")
                return SearchResult(True, len(seen) + 1)
            seen.add(successor)
            queue.append(successor)
    return SearchResult(False, len(seen))


@lru_cache(maxsize=4096)
def leq(lower: ObjectWord, upper: ObjectWord, d: int, ranges: GeneratingRanges = DEFAULT_RANGES) -> bool:
    return leq_search(lower, upper, d, ranges).reachable


def upper_set(lower: ObjectWord, d: int, limit: int, ranges: GeneratingRanges = DEFAULT_RANGES) -> Set[ObjectWord]:
    """All words of length <= limit that lie above `lower`."""
    seen = {lower}
    queue = deque([lower])
    while queue:
        current = queue.popleft()
        for successor in _successors(current, d, limit, ranges):
            if len(successor) <= limit and successor not in seen:
                seen.add(successor)
                queue.append(successor)
    return seen


def interval(lower: ObjectWord, upper: ObjectWord, d: int, ranges: GeneratingRanges = DEFAULT_RANGES) -> List[ObjectWord]:
    if not leq(lower, upper, d, ranges):
        return []
    between = [w for w in upper_set(lower, d, len(upper), ranges) if leq(w, upper, d, ranges)]
    return sorted(between, key=lambda w: word_key(w, d))
