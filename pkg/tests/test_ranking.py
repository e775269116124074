"""Answer ranking: gloss bags, the two overlap metrics, argmax selection."""

from fractions import Fraction

import numpy as np
import pytest

from agriqa.ranking import (GlossLexicon, RankingError, gloss_bag,
                            load_gloss_lexicon, modified_jaccard,
                            modified_lesk, rank_answers, score_pair)
from agriqa.textprep import bundled_path, load_stopwords

NO_STOPWORDS: frozenset[str] = frozenset()


@pytest.fixture(scope="module")
def toy_lexicon() -> GlossLexicon:
    return GlossLexicon({"wheat": "cereal grain crop",
                         "paddy": "cereal grain rice"}, NO_STOPWORDS)


def test_gloss_bag_empty(toy_lexicon):
    assert gloss_bag([], toy_lexicon) == set()


def test_gloss_bag_token_plus_gloss_words(toy_lexicon):
    assert gloss_bag(["wheat"], toy_lexicon) == {"wheat", "cereal", "grain", "crop"}


def test_gloss_bag_glossless_token_stands_alone(toy_lexicon):
    assert gloss_bag(["tractor"], toy_lexicon) == {"tractor"}


def test_gloss_tokens_filtered_by_stopwords():
    lexicon = GlossLexicon({"wheat": "a cereal of the grass family"},
                           frozenset({"a", "of", "the"}))
    assert gloss_bag(["wheat"], lexicon) == {"wheat", "cereal", "grass", "family"}


def test_jaccard_identical_sets():
    tokens = ["market", "rate", "wheat"]
    assert modified_jaccard(tokens, list(tokens)) == Fraction(3, 4)


def test_jaccard_disjoint_sets():
    assert modified_jaccard(["market", "rate", "wheat"],
                            ["seed", "dose", "paddy"]) == 0.0


def test_jaccard_partial_overlap():
    assert modified_jaccard(["market", "rate", "wheat"],
                            ["market", "rate", "paddy"]) == Fraction(2, 4)


def test_jaccard_empty_inputs_guarded():
    assert modified_jaccard([], []) == 0.0
    assert modified_jaccard([], ["wheat"]) == 0.0


def test_jaccard_uses_sets_not_multisets():
    assert modified_jaccard(["wheat", "wheat", "rate"], ["wheat"]) \
        == Fraction(1, 3)


def test_lesk_both_empty(toy_lexicon):
    assert modified_lesk([], [], toy_lexicon) == 0.0


def test_lesk_identical_gloss_bags(toy_lexicon):
    assert modified_lesk(["wheat"], ["wheat"], toy_lexicon) == Fraction(4, 5)


def test_lesk_sibling_crops_share_gloss_words(toy_lexicon):
    # bags {wheat,cereal,grain,crop} vs {paddy,cereal,grain,rice}: overlap 2
    assert modified_lesk(["wheat"], ["paddy"], toy_lexicon) == Fraction(2, 5)


def test_metrics_are_asymmetric(toy_lexicon):
    a, b = ["market", "rate", "wheat"], ["market"]
    assert modified_jaccard(a, b) != modified_jaccard(b, a)
    assert modified_lesk(["wheat", "tractor"], ["wheat"], toy_lexicon) \
        != modified_lesk(["wheat"], ["wheat", "tractor"], toy_lexicon)


def test_metric_range_property(toy_lexicon):
    rng = np.random.default_rng(np.random.PCG64(17))
    pool = ["wheat", "paddy", "rate", "market", "seed", "dose", "spray",
            "tractor", "soil", "water"]
    for _ in range(300):
        known = [pool[i] for i in rng.integers(0, len(pool),
                                               size=rng.integers(0, 6))]
        predicted = [pool[i] for i in rng.integers(0, len(pool),
                                                   size=rng.integers(0, 6))]
        for score, n in ((modified_jaccard(known, predicted), len(set(known))),
                         (modified_lesk(known, predicted, toy_lexicon),
                          len(gloss_bag(known, toy_lexicon)))):
            assert 0 <= score <= Fraction(n, n + 1)
            assert score < 1


def test_adding_shared_word_never_decreases_numerator(toy_lexicon):
    known = ["market", "rate"]
    predicted = ["market", "dose"]
    before = modified_jaccard(known, predicted) * (len(set(known)) + 1)
    grown_known = known + ["wheat"]
    grown_predicted = predicted + ["wheat"]
    after = modified_jaccard(grown_known, grown_predicted) \
        * (len(set(grown_known)) + 1)
    assert after >= before

    b_known = gloss_bag(known, toy_lexicon)
    g_known = gloss_bag(grown_known, toy_lexicon)
    before_l = modified_lesk(known, predicted, toy_lexicon) * (len(b_known) + 1)
    after_l = modified_lesk(grown_known, grown_predicted, toy_lexicon) \
        * (len(g_known) + 1)
    assert after_l >= before_l


def test_score_pair_dispatch(toy_lexicon):
    assert score_pair("jaccard", ["wheat"], ["wheat"], toy_lexicon) == Fraction(1, 2)
    assert score_pair("lesk", ["wheat"], ["wheat"], toy_lexicon) == Fraction(4, 5)
    with pytest.raises(RankingError):
        score_pair("euclid", ["wheat"], ["wheat"], toy_lexicon)


def test_rank_single_answer(toy_lexicon):
    answer, score = rank_answers(["wheat"], ["use urea"], toy_lexicon)
    assert answer == "use urea"
    assert score == 0.0


def test_rank_gloss_sharing_answer_wins(toy_lexicon):
    answers = ["apply 50kg urea", "paddy needs standing water"]
    answer, score = rank_answers(["wheat"], answers, toy_lexicon)
    assert answer == "paddy needs standing water"  # shares cereal/grain gloss
    assert score > 0.0


def test_rank_all_zero_returns_first(toy_lexicon):
    answers = ["urea dose", "zinc dose"]
    answer, score = rank_answers(["tractor"], answers, toy_lexicon)
    assert answer == "urea dose"
    assert score == 0.0


def test_rank_tie_goes_to_first_position(toy_lexicon):
    # both answers contain exactly the token "wheat"; scores are equal
    answers = ["wheat first", "first wheat"]
    answer, _ = rank_answers(["wheat"], answers, toy_lexicon)
    assert answer == "wheat first"


def test_rank_invariant_under_duplicate_losing_answer(toy_lexicon):
    answers = ["wheat price today", "zinc dose"]
    baseline = rank_answers(["wheat"], answers, toy_lexicon)
    assert rank_answers(["wheat"], answers + ["zinc dose"], toy_lexicon) \
        == baseline


def test_rank_rejects_empty_list(toy_lexicon):
    with pytest.raises(RankingError):
        rank_answers(["wheat"], [], toy_lexicon)


def test_load_gloss_lexicon(tmp_path):
    path = tmp_path / "gloss.tsv"
    path.write_text("# comment\nwheat\tcereal grain crop\n"
                    "wheat\tcereal grain crop cultivated widely\n"
                    "paddy\tcereal grain rice\n", encoding="utf-8")
    lexicon = load_gloss_lexicon(path, NO_STOPWORDS)
    assert len(lexicon) == 2
    # later duplicate wins
    assert "cultivated" in lexicon.gloss_tokens("wheat")


def test_load_gloss_lexicon_rejects_malformed(tmp_path):
    path = tmp_path / "gloss.tsv"
    path.write_text("wheat cereal grain crop\n", encoding="utf-8")
    with pytest.raises(RankingError):
        load_gloss_lexicon(path, NO_STOPWORDS)


def test_gloss_keys_must_be_lowercase():
    with pytest.raises(RankingError):
        GlossLexicon({"Wheat": "cereal"}, NO_STOPWORDS)


def test_bundled_gloss_wheat_paddy_values():
    stopwords = load_stopwords(bundled_path("stopwords.txt"))
    lexicon = load_gloss_lexicon(bundled_path("gloss.tsv"), stopwords)
    assert modified_lesk(["wheat"], ["wheat"], lexicon) == Fraction(4, 5)
    assert modified_lesk(["wheat"], ["paddy"], lexicon) == Fraction(2, 5)
