"""Lexical overlap scoring between token lists, and answer selection.

Both metrics divide by the size of the *known* side plus one, so they are
asymmetric, never reach 1.0, and never divide by zero. The gloss variant
expands each token with the words of its dictionary gloss first. Scores are
exact rationals; callers that persist or serialize them cast to float at
the boundary.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from .textprep import normalize_words, tokenize


class RankingError(Exception):
    pass


class GlossLexicon:
    """word -> gloss text, with gloss token sets precomputed.

    Gloss text is tokenized like question text and stopword-filtered, but
    never stemmed.
    """

    def __init__(self, glosses: dict[str, str], stopwords: frozenset[str]):
        self.glosses = {}
        self._bags: dict[str, frozenset[str]] = {}
        for word, gloss in glosses.items():
            if word != word.lower():
                raise RankingError(f"gloss key {word!r} is not lowercase")
            tokens = [t.surface for t in tokenize(gloss) if t.surface not in stopwords]
            self.glosses[word] = gloss
            self._bags[word] = frozenset(tokens)

    def __contains__(self, word: str) -> bool:
        return word in self.glosses

    def __len__(self) -> int:
        return len(self.glosses)

    def gloss_tokens(self, word: str) -> frozenset[str]:
        return self._bags.get(word, frozenset())


def load_gloss_lexicon(path: str | Path, stopwords: frozenset[str]) -> GlossLexicon:
    """Read a `word<TAB>gloss text` file; later duplicate keys win."""
    glosses: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        if "\t" not in line:
            raise RankingError(f"{path}:{lineno}: expected word<TAB>gloss")
        word, gloss = line.split("\t", 1)
        glosses[word.strip()] = gloss.strip()
    return GlossLexicon(glosses, stopwords)


def gloss_bag(tokens: list[str], lexicon: GlossLexicon) -> set[str]:
    """Union of each token with its gloss words; glossless tokens stand alone."""
    bag: set[str] = set()
    for token in tokens:
        bag.add(token)
        bag |= lexicon.gloss_tokens(token)
    return bag


def modified_jaccard(known_tokens: list[str], predicted_tokens: list[str]) -> Fraction:
    known = set(known_tokens)
    predicted = set(predicted_tokens)
    return Fraction(len(known & predicted), len(known) + 1)


def modified_lesk(known_tokens: list[str], predicted_tokens: list[str],
                  lexicon: GlossLexicon) -> Fraction:
    known = gloss_bag(known_tokens, lexicon)
    predicted = gloss_bag(predicted_tokens, lexicon)
    return Fraction(len(known & predicted), len(known) + 1)


def score_pair(metric: str, known_tokens: list[str], predicted_tokens: list[str],
               lexicon: GlossLexicon) -> Fraction:
    if metric == "jaccard":
        return modified_jaccard(known_tokens, predicted_tokens)
    if metric == "lesk":
        return modified_lesk(known_tokens, predicted_tokens, lexicon)
    raise RankingError(f"unknown metric {metric!r} (expected jaccard or lesk)")


def rank_answers(query_tokens: list[str], answers: list[str], lexicon: GlossLexicon,
                 config=None) -> tuple[str, Fraction]:
    """Pick the answer whose normalized text best gloss-overlaps the query.

    Ties go to the earliest answer in the list, so a unanimous zero score
    returns the first answer with score 0 and the caller decides whether
    that is good enough. When ``config`` is given answers run through the
    full normalizer; otherwise they are tokenized plainly.
    """
    if not answers:
        raise RankingError("empty answer list")
    best_answer = answers[0]
    best_score = -1.0
    for answer in answers:
        if config is not None:
            tokens = normalize_words(answer, config)
        else:
            tokens = [t.surface for t in tokenize(answer)]
        score = modified_lesk(query_tokens, tokens, lexicon)
        if score > best_score:
            best_answer, best_score = answer, score
    return best_answer, best_score
