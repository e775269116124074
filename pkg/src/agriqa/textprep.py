"""Text normalization pipeline for farmer queries.

Fixed stage order: tokenize -> lowercase -> spell-correct -> synonym
canonicalization -> stopword removal -> stemming. Grouping, embedding and
answer ranking all consume the output of :func:`normalize`, so any change
here invalidates trained models and built indexes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import porter

_TOKEN_RE = re.compile(r"[a-z0-9]+")
_EDIT_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


class LexiconError(ValueError):
    """A lexicon file failed to parse or validate."""


def bundled_path(name: str) -> Path:
    """Filesystem path of a data file shipped inside the package."""
    return Path(str(resources.files("agriqa").joinpath("data", name)))


@dataclass(frozen=True)
class Token:
    surface: str
    position: int  # character offset of the originating token in the source text


@dataclass(frozen=True)
class NormalizedQuestion:
    tokens: tuple[Token, ...]
    source: str

    @property
    def words(self) -> list[str]:
        return [t.surface for t in self.tokens]

    @property
    def text(self) -> str:
        return " ".join(t.surface for t in self.tokens)


class SpellDictionary:
    """Word frequency table backing the spelling corrector."""

    def __init__(self, counts: dict[str, int]):
        for word, count in counts.items():
            if word != word.lower():
                raise ValueError(f"spell dictionary key not lowercase: {word!r}")
            if count < 1:
                raise ValueError(f"spell dictionary count < 1 for {word!r}")
        self.counts = dict(counts)

    def __contains__(self, word: str) -> bool:
        return word in self.counts

    def __len__(self) -> int:
        return len(self.counts)

    def count(self, word: str) -> int:
        return self.counts.get(word, 0)


class SynonymMap:
    """Maps variant words to their canonical form; canonicals are fixed points."""

    def __init__(self, variant_to_canonical: dict[str, str]):
        for variant, canonical in variant_to_canonical.items():
            resolved = variant_to_canonical.get(canonical, canonical)
            if resolved != canonical:
                raise ValueError(
                    f"canonical word {canonical!r} is itself mapped to {resolved!r}"
                )
        self.mapping = {v: c for v, c in variant_to_canonical.items() if v != c}

    def canonical(self, word: str) -> str:
        return self.mapping.get(word, word)

    def __len__(self) -> int:
        return len(self.mapping)


@dataclass
class NormalizerConfig:
    stopwords: frozenset[str] = frozenset()
    dictionary: SpellDictionary = field(default_factory=lambda: SpellDictionary({}))
    synonyms: SynonymMap = field(default_factory=lambda: SynonymMap({}))


def tokenize(text: str) -> list[Token]:
    """Split on maximal non-alphanumeric runs, lowercased; digits are tokens."""
    return [Token(m.group(), m.start()) for m in _TOKEN_RE.finditer(text.lower())]


def _edits1(word: str) -> set[str]:
    splits = [(word[:i], word[i:]) for i in range(len(word) + 1)]
    deletes = [left + right[1:] for left, right in splits if right]
    transposes = [left + right[1] + right[0] + right[2:] for left, right in splits if len(right) > 1]
    replaces = [left + ch + right[1:] for left, right in splits if right for ch in _EDIT_ALPHABET]
    inserts = [left + ch + right for left, right in splits for ch in _EDIT_ALPHABET]
    return set(deletes + transposes + replaces + inserts)


def _best_candidate(candidates: set[str], dictionary: SpellDictionary) -> str | None:
    known = [w for w in candidates if w in dictionary]
    if not known:
        return None
    # highest count wins; ties resolved by lexicographic order
    return min(known, key=lambda w: (-dictionary.count(w), w))


def spell_correct(word: str, dictionary: SpellDictionary) -> str:
    """Norvig correction: known word, else best edit-1, else best edit-2, else unchanged.

    Tokens containing digits pass through: the candidate alphabet is a-z, and
    quantities like "30ml" must not be "corrected" into words.
    """
    if word in dictionary or not word.isalpha():
        return word
    e1 = _edits1(word)
    best = _best_candidate(e1, dictionary)
    if best is not None:
        return best
    e2 = set()
    for candidate in e1:
        e2.update(_edits1(candidate))
    best = _best_candidate(e2, dictionary)
    if best is not None:
        return best
    return word


def canonicalize_synonyms(words: list[str], synonyms: SynonymMap) -> list[str]:
    return [synonyms.canonical(w) for w in words]


def remove_stopwords(words: list[str], stopwords: frozenset[str]) -> list[str]:
    return [w for w in words if w not in stopwords]


def normalize(text: str, config: NormalizerConfig) -> NormalizedQuestion:
    """Run the full pipeline in its fixed stage order."""
    tokens = tokenize(text)
    out: list[Token] = []
    for token in tokens:
        word = spell_correct(token.surface, config.dictionary)
        word = config.synonyms.canonical(word)
        if word in config.stopwords:
            continue
        out.append(Token(porter.stem(word), token.position))
    return NormalizedQuestion(tuple(out), text)


def normalize_words(text: str, config: NormalizerConfig) -> list[str]:
    return normalize(text, config).words


def build_spell_dictionary(texts, crop_words=()) -> SpellDictionary:
    """Count raw tokens across texts; crop words are injected with count 1."""
    counts: dict[str, int] = {}
    for text in texts:
        for token in tokenize(text):
            counts[token.surface] = counts.get(token.surface, 0) + 1
    for word in crop_words:
        counts.setdefault(word, 1)
    return SpellDictionary(counts)


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


def load_synonyms(path: str | Path) -> SynonymMap:
    """Parse ``canonical<TAB>variant1,variant2,...`` lines."""
    mapping: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" not in line:
            raise LexiconError(f"{path}:{lineno}: expected canonical<TAB>variants")
        canonical, variants = line.split("\t", 1)
        canonical = canonical.strip().lower()
        for variant in variants.split(","):
            variant = variant.strip().lower()
            if not variant:
                continue
            existing = mapping.get(variant)
            if existing is not None and existing != canonical:
                raise LexiconError(
                    f"{path}:{lineno}: variant {variant!r} mapped to both "
                    f"{existing!r} and {canonical!r}"
                )
            mapping[variant] = canonical
    return SynonymMap(mapping)


def load_crop_names(path: str | Path) -> list[str]:
    """One crop name per line; may be multi-word."""
    names = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        name = line.strip().lower()
        if name and not name.startswith("#"):
            names.append(name)
    return names


def crop_word_set(crop_names) -> frozenset[str]:
    """Raw lowercase words occurring in crop names (spell-dictionary injection)."""
    words = set()
    for name in crop_names:
        words.update(t.surface for t in tokenize(name))
    return frozenset(words)


def normalized_crop_tokens(crop_names, config: NormalizerConfig) -> frozenset[str]:
    """Post-pipeline token forms of the crop names (entity-boost lexicon)."""
    tokens = set()
    for name in crop_names:
        tokens.update(normalize_words(name, config))
    return frozenset(tokens)


def load_spell_dictionary(path: str | Path) -> SpellDictionary:
    counts: dict[str, int] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        try:
            word, count = line.split("\t")
            counts[word] = int(count)
        except ValueError as exc:
            raise LexiconError(f"{path}:{lineno}: expected word<TAB>count") from exc
    return SpellDictionary(counts)


def save_spell_dictionary(dictionary: SpellDictionary, path: str | Path) -> None:
    lines = [f"{w}\t{c}" for w, c in sorted(dictionary.counts.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
