"""Arabic surface-form processing: normalization, stop words, light stemming.

Matching query words against ontology labels happens at decreasing levels of
confidence: the normalized form, the lightly stemmed form, and finally a
"skeleton" with interior long vowels dropped, which lets inflection pairs
like يصيب / يصاب compare equal.  All tables are plain data and can be
overridden from config files.
"""

from __future__ import annotations

from dataclasses import dataclass

# Harakat, tanween, sukun, shadda, dagger alif, tatweel, plus the underscore
# that ontology local names tend to carry.
_STRIP_DEFAULT = "ًٌٍَُِّْٰـ_"

_RULES_DEFAULT = (
    ("إ", "ا"),  # إ -> ا
    ("أ", "ا"),  # أ -> ا
    ("آ", "ا"),  # آ -> ا
    ("ة", "ه"),  # ة -> ه
    ("ى", "ي"),  # ى -> ي
)

WEAK_LETTERS = frozenset("اوي")  # ا و ي


@dataclass(frozen=True)
class NormalizationTable:
    rules: tuple[tuple[str, str], ...] = _RULES_DEFAULT
    strip: str = _STRIP_DEFAULT

    def translation(self) -> dict[int, str | None]:
        table: dict[int, str | None] = {ord(ch): None for ch in self.strip}
        for src, dst in self.rules:
            table[ord(src)] = dst
        return table


DEFAULT_NORMALIZATION = NormalizationTable()
_DEFAULT_TRANSLATION = DEFAULT_NORMALIZATION.translation()


def normalize(word: str, table: NormalizationTable | None = None) -> str:
    """Orthographic normalization; idempotent because rule outputs are stable."""
    if table is None:
        return word.translate(_DEFAULT_TRANSLATION)
    return word.translate(table.translation())


class StopWordList:
    """Set of normalized stop words loaded from a one-word-per-line file."""

    def __init__(self, words=()):
        self.words = frozenset(normalize(w) for w in words)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)

    @classmethod
    def from_text(cls, text: str) -> "StopWordList":
        words = []
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if line:
                words.append(line)
        return cls(words)

    @classmethod
    def from_file(cls, path) -> "StopWordList":
        with open(path, encoding="utf-8") as handle:
            return cls.from_text(handle.read())


def strip_stopwords(tokens: list[str], stopwords: StopWordList) -> list[str]:
    """Order-preserving removal; tokens are expected to be normalized already."""
    return [t for t in tokens if t not in stopwords]


@dataclass(frozen=True)
class StemRules:
    """Affix tables for the light stemmer, longest-first.

    The suffix entries are matched literally against the (normalized) word,
    so entries containing ة never fire after normalization; they are kept for
    callers that stem raw text.
    """

    prefixes: tuple[str, ...] = ("وال", "بال", "كال", "فال", "ال", "لل", "و", "ا")
    suffixes: tuple[str, ...] = ("ها", "ان", "ات", "ون", "ين", "ية", "ه", "ة", "ي")
    min_stem: int = 3

    def __post_init__(self):
        object.__setattr__(
            self, "prefixes", tuple(sorted(self.prefixes, key=len, reverse=True))
        )
        object.__setattr__(
            self, "suffixes", tuple(sorted(self.suffixes, key=len, reverse=True))
        )


DEFAULT_STEM_RULES = StemRules()


def light_stem(word: str, rules: StemRules | None = None) -> str:
    """Strip one longest prefix then one longest suffix, keeping >= min_stem chars."""
    rules = rules or DEFAULT_STEM_RULES
    stem = word
    for prefix in rules.prefixes:
        if stem.startswith(prefix) and len(stem) - len(prefix) >= rules.min_stem:
            stem = stem[len(prefix):]
            break
    for suffix in rules.suffixes:
        if stem.endswith(suffix) and len(stem) - len(suffix) >= rules.min_stem:
            stem = stem[: -len(suffix)]
            break
    return stem


def skeleton(word: str) -> str:
    """Drop interior long vowels (ا/و/ي); first and last characters stay."""
    if len(word) <= 2:
        return word
    middle = "".join(c for c in word[1:-1] if c not in WEAK_LETTERS)
    return word[0] + middle + word[-1]


def load_stem_rules(path) -> StemRules:
    """Read affix overrides: lines ``prefix:وال``, ``suffix:ها``, ``min:3``."""
    prefixes: list[str] = []
    suffixes: list[str] = []
    min_stem = 3
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition(":")
            key = key.strip()
            value = value.strip()
            if key == "prefix" and value:
                prefixes.append(value)
            elif key == "suffix" and value:
                suffixes.append(value)
            elif key == "min" and value:
                min_stem = int(value)
            else:
                raise ValueError(f"unrecognized stem-rule line: {line!r}")
    return StemRules(tuple(prefixes), tuple(suffixes), min_stem)


def load_normalization(path) -> NormalizationTable:
    """Read normalization overrides: lines ``map:إ=ا`` and ``strip:ًٌـ_``."""
    rules: list[tuple[str, str]] = []
    strip: list[str] = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition(":")
            key = key.strip()
            value = value.strip()
            if key == "map" and "=" in value:
                src, _, dst = value.partition("=")
                rules.append((src.strip(), dst.strip()))
            elif key == "strip" and value:
                strip.extend(value)
            else:
                raise ValueError(f"unrecognized normalization line: {line!r}")
    return NormalizationTable(tuple(rules), "".join(strip))


def normalize_tokens(tokens, table: NormalizationTable | None = None) -> list[str]:
    """Normalize each token, dropping any that normalize to the empty string."""
    out = []
    for token in tokens:
        normalized = normalize(token, table)
        if normalized:
            out.append(normalized)
    return out
