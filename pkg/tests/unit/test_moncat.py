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

from tannakit.errors import DimensionMismatchError, InputError, InverseLetterError
from tannakit.main import RunConfig
from tannakit.moncat import (EMPTY, Letter, MorGen, ObjectGenerator, PresentedMonoidalCategory, build_category, elementary_maps,
                             enumerate_words, format_word, interval, leq, leq_search, normalize, parse_word, r, weight_ell, word)

d = 2


def test_parse_and_format_word():
    w = parse_word("r1 r2^-1 r1", d)
    assert w == word(r(1), r(2, -1), r(1))
    assert format_word(w) == "r1 r2^-1 r1"
    assert parse_word("1", d) == EMPTY
    assert format_word(EMPTY) == "1"


def test_parse_word_cancels_inverse_pairs():
    assert parse_word("r2 r2^-1 r1", d) == word(r(1))
    assert parse_word("r1 r2^-1 r2 r2^-1", d) == word(r(1), r(2, -1))


def test_parse_word_rejects_bad_letters():
    with pytest.raises(InverseLetterError):
        parse_word("r1^-1", d)
    with pytest.raises(InputError):
        parse_word("r3", d)
    with pytest.raises(InputError):
        parse_word("r1 ?", d)


def test_normalize():
    assert normalize([r(1), r(1, -1)]) == EMPTY
    with pytest.raises(InverseLetterError):
        normalize([Letter("r1", 2)])
    with pytest.raises(InverseLetterError):
        normalize([r(1, -1)], {"r2"})


def test_enumerate_words():
    words = enumerate_words(d, 3)
    assert len(words) == 28
    assert words[:4] == [EMPTY, word(r(1)), word(r(2)), word(r(2, -1))]
    assert len(set(words)) == len(words)
    assert all(normalize(w.letters, {"r2"}) == w for w in words)


def test_weight_ell():
    assert weight_ell(parse_word("r1 r2^-1 r1", d), d) == 0
    assert weight_ell(parse_word("r2 r1", d), d) == 3


def test_leq_basic_moves():
    assert leq(word(r(2)), word(r(1), r(1)), d)
    assert leq(EMPTY, parse_word("r1 r2^-1 r1", d), d)
    assert not leq(word(r(1), r(1)), word(r(2)), d)
    assert not leq(word(r(1)), word(r(1), r(1)), d)


def test_leq_is_reflexive():
    for w in enumerate_words(d, 2):
        assert leq(w, w, d)


def test_leq_preserves_ell():
    words = enumerate_words(d, 3)
    for lower in words:
        for upper in words:
            if leq(lower, upper, d):
                assert weight_ell(lower, d) == weight_ell(upper, d)


def test_leq_is_antisymmetric_and_transitive():
    generator = random.Random(RunConfig.seed)
    for rank in (2, 3):
        words = enumerate_words(rank, 3)
        for lower in generator.sample(words, 12):
            above = [w for w in words if leq(lower, w, rank)]
            for middle in above:
                if leq(middle, lower, rank):
                    assert middle == lower
                for upper in words:
                    if leq(middle, upper, rank):
                        assert leq(lower, upper, rank), (format_word(lower), format_word(middle), format_word(upper))


def test_leq_search_counts_visits():
    result = leq_search(word(r(2)), word(r(1), r(1)), d)
    assert result.reachable
    assert result.visited >= 2


def test_interval():
    upper = parse_word("r1 r2^-1 r1", d)
    between = interval(EMPTY, upper, d)
    assert between[0] == EMPTY
    assert between[-1] == upper
    assert all(leq(EMPTY, w, d) and leq(w, upper, d) for w in between)
    assert interval(word(r(1)), word(r(2)), d) == []
    assert interval(word(r(2)), word(r(1), r(1)), d) == [word(r(2)), word(r(1), r(1))]


def test_elementary_maps():
    into = elementary_maps(word(r(1), r(1)), d, "into")
    assert [step.generator.name for step in into] == ["phi_1_1"]
    assert into[0].other == word(r(2))
    out = elementary_maps(parse_word("r1 r2^-1 r1", d), d, "outof")
    assert [step.generator.name for step in out] == ["theta_1_1"]
    assert out[0].other == EMPTY
    with pytest.raises(InputError):
        elementary_maps(EMPTY, d, "sideways")


def test_build_named_categories():
    assert [m.name for m in build_category("C").morphisms] == ["incl_2"]
    assert [m.name for m in build_category("TL").morphisms] == ["phi", "psi"]
    assert [m.name for m in build_category("D", d=2, a=1).morphisms] == ["incl_2", "ev_1"]
    u = build_category("U", d=2)
    assert [m.name for m in u.morphisms] == ["phi_1_1", "theta_1_1"]
    assert [rel.name for rel in u.relations] == ["rel3_1_1_1", "rel4_1_1_1"]
    up = build_category("U_up_plus", d=3)
    assert [m.name for m in up.morphisms] == ["phi_1_1", "phi_1_2", "phi_2_1"]
    assert [rel.name for rel in up.relations] == ["rel1_1_1_1"]
    assert up.invertible_names() == set()
    assert u.invertible_names() == {"r2"}


def test_build_category_errors():
    with pytest.raises(InputError):
        build_category("X")
    with pytest.raises(InputError):
        build_category("D", d=2, a=2)
    with pytest.raises(InputError):
        build_category("U", d=1)


def test_category_checks_letters():
    bad = MorGen("bad", word(r(1, -1)), EMPTY, "test")
    with pytest.raises(InverseLetterError):
        PresentedMonoidalCategory("test", (ObjectGenerator("r1"),), (bad,))
    unknown = MorGen("unknown", word(r(2)), EMPTY, "test")
    with pytest.raises(DimensionMismatchError):
        PresentedMonoidalCategory("test", (ObjectGenerator("r1"),), (unknown,))
