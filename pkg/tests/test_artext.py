import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arnlq.artext import (
    StemRules,
    StopWordList,
    light_stem,
    load_normalization,
    load_stem_rules,
    normalize,
    normalize_tokens,
    skeleton,
    strip_stopwords,
)

arabic_words = st.text(
    alphabet=st.characters(min_codepoint=0x0621, max_codepoint=0x0655),
    min_size=0,
    max_size=12,
)


class TestNormalize:
    @pytest.mark.parametrize(
        "word,expected",
        [
            ("إصابة", "اصابه"),
            ("", ""),
            ("مرض", "مرض"),
            ("أمراض", "امراض"),
            ("آلام", "الام"),
            ("مستشفى", "مستشفي"),
            ("بـ", "ب"),
            ("داء_الملوك", "داءالملوك"),
            ("مَرَض", "مرض"),
        ],
    )
    def test_rules(self, word, expected):
        assert normalize(word) == expected

    @given(arabic_words)
    def test_idempotent(self, word):
        once = normalize(word)
        assert normalize(once) == once

    def test_normalize_tokens_drops_empties(self):
        assert normalize_tokens(["ـ", "مرض", "_"]) == ["مرض"]


class TestStopWords:
    def test_relative_pronoun_removed(self, stopwords):
        assert strip_stopwords(["الذي", "يسمى"], stopwords) == ["يسمى"]

    def test_empty(self, stopwords):
        assert strip_stopwords([], stopwords) == []

    def test_no_stopwords_unchanged(self, stopwords):
        tokens = ["علاج", "المرض"]
        assert strip_stopwords(tokens, stopwords) == tokens

    def test_entries_normalized_on_load(self):
        words = StopWordList.from_text("# comment\nالتي\nإلى\n")
        assert "التي" in words
        assert "الي" in words  # normalized form of إلى

    def test_order_preserved(self, stopwords):
        tokens = ["علاج", "في", "مرض", "من", "عرض"]
        assert strip_stopwords(tokens, stopwords) == ["علاج", "مرض", "عرض"]


class TestLightStem:
    @pytest.mark.parametrize(
        "word,expected",
        [
            ("الامراض", "امراض"),
            ("مرض", "مرض"),
            ("المعديه", "معدي"),
            ("بالمضادات", "مضاد"),
            ("وتسبب", "تسبب"),
            ("الرئتين", "رئت"),
            ("القلب", "قلب"),
        ],
    )
    def test_affix_stripping(self, word, expected):
        assert light_stem(word) == expected

    @given(arabic_words)
    def test_never_shorter_than_min(self, word):
        stem = light_stem(word)
        assert len(stem) >= min(3, len(word))

    def test_custom_rules(self):
        rules = StemRules(prefixes=("ال",), suffixes=(), min_stem=2)
        assert light_stem("الدم", rules) == "دم"


class TestSkeleton:
    def test_infects_infected_stems_compare_equal(self):
        assert skeleton(light_stem("يصيب")) == skeleton(light_stem("يصاب")) == "يصب"

    def test_no_weak_letters_fixpoint(self):
        assert skeleton("مرض") == "مرض"

    def test_plural_meets_singular_after_stemming(self):
        plural = skeleton(light_stem(normalize("امراض")))
        singular = skeleton(light_stem(normalize("مرض")))
        assert plural == singular == "مرض"

    def test_edges_retained(self):
        # weak letters survive in first/last position, drop in the interior
        assert skeleton("واو") == "وو"
        assert skeleton("يي") == "يي"

    @given(arabic_words)
    def test_subsequence(self, word):
        result = skeleton(word)
        iterator = iter(word)
        assert all(ch in iterator for ch in result)


class TestRuleOverrides:
    def test_stem_rules_file(self, tmp_path):
        path = tmp_path / "stem.txt"
        path.write_text("# overrides\nprefix:ال\nsuffix:ها\nmin:2\n", encoding="utf-8")
        rules = load_stem_rules(path)
        assert rules.prefixes == ("ال",)
        assert rules.min_stem == 2
        assert light_stem("الدم", rules) == "دم"

    def test_stem_rules_bad_line(self, tmp_path):
        path = tmp_path / "stem.txt"
        path.write_text("weird:x\n", encoding="utf-8")
        with pytest.raises(ValueError):
            load_stem_rules(path)

    def test_normalization_file(self, tmp_path):
        path = tmp_path / "norm.txt"
        path.write_text("map:ك=گ\nstrip:_\n", encoding="utf-8")
        table = load_normalization(path)
        assert normalize("كت_اب", table) == "گتاب"


def test_normalize_idempotence_fuzz_corpus():
    rng = random.Random(20240817)
    pool = (
        [chr(c) for c in range(0x0621, 0x0656)]
        + list("ًٌٍَُِّْـ_")
        + list("abAB19")
    )
    for _ in range(10_000):
        word = "".join(rng.choice(pool) for _ in range(rng.randint(0, 14)))
        once = normalize(word)
        assert normalize(once) == once
