"""Held-out evaluation: Top-N hit-rate tables, threshold calibration from
human-labeled pairs, and the embedding-dimension sweep."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import CanonicalEntry
from .embedding import (SifModel, TrainConfig, WordVectorTable, embed_question,
                        fit_sif_model, train_word2vec)
from .ranking import GlossLexicon, score_pair
from .retrieval import QuestionIndex, build_index, top_k
from .textprep import NormalizerConfig, normalize_words


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class LabeledPair:
    test_question: str
    predicted_question: str
    is_correct: bool


_TRUTHY = {"1", "true", "yes", "y"}
_FALSY = {"0", "false", "no", "n"}


def load_labeled_pairs(path: str | Path) -> list[LabeledPair]:
    """Read `test_question,predicted_question,is_correct` rows."""
    text = Path(path).read_text(encoding="utf-8")
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header != ["test_question", "predicted_question", "is_correct"]:
        raise EvalError(f"{path}: unexpected header {header}")
    pairs = []
    for lineno, row in enumerate(reader, 2):
        if not row:
            continue
        if len(row) != 3:
            raise EvalError(f"{path}:{lineno}: expected 3 columns, found {len(row)}")
        flag = row[2].strip().lower()
        if flag in _TRUTHY:
            is_correct = True
        elif flag in _FALSY:
            is_correct = False
        else:
            raise EvalError(f"{path}:{lineno}: bad is_correct value {row[2]!r}")
        pairs.append(LabeledPair(row[0], row[1], is_correct))
    return pairs


def calibrate_threshold(scores: list[float], labels: list[bool]) -> float:
    """Threshold t maximizing accuracy of the rule `score >= t => correct`.

    Candidates are the midpoints between consecutive distinct observed
    scores, plus the boundary choices (everything positive / everything
    negative) so the best achievable rule is always reachable. Accuracy
    ties resolve to the smallest candidate.
    """
    if len(scores) != len(labels):
        raise EvalError("scores and labels differ in length")
    if not scores:
        raise EvalError("no labeled pairs")
    if all(labels) or not any(labels):
        raise EvalError("labels are single-class; need at least one of each")
    scores = [float(s) for s in scores]
    distinct = sorted(set(scores))
    candidates = [distinct[0]]
    candidates += [(a + b) / 2.0 for a, b in zip(distinct, distinct[1:])]
    candidates.append(float(np.nextafter(distinct[-1], np.inf)))

    arr = np.asarray(scores)
    lab = np.asarray(labels)
    best_t, best_acc = None, -1.0
    for t in candidates:
        acc = float(np.mean((arr >= t) == lab))
        if acc > best_acc:
            best_t, best_acc = t, acc
    return float(best_t)


def calibrate_from_pairs(pairs: list[LabeledPair], metric: str,
                         config: NormalizerConfig, lexicon: GlossLexicon) -> float:
    scores = [score_pair(metric, normalize_words(p.test_question, config),
                         normalize_words(p.predicted_question, config), lexicon)
              for p in pairs]
    return calibrate_threshold(scores, [p.is_correct for p in pairs])


@dataclass
class MetricResult:
    metric: str
    hit_rates: dict[int, float]
    mean_top1: float


@dataclass
class EvalReport:
    threshold: float
    n_values: list[int]
    evaluated: int
    skipped: int
    results: list[MetricResult]


def evaluate_topn(index: QuestionIndex, test_entries: list[CanonicalEntry],
                  metrics: list[str], n_values: list[int], threshold: float,
                  config: NormalizerConfig, table: WordVectorTable,
                  model: SifModel, lexicon: GlossLexicon) -> EvalReport:
    """A test entry is a hit at N when any of its top-N retrieved questions
    scores at least ``threshold`` against it under the metric."""
    if not test_entries:
        raise EvalError("empty test set")
    index_ids = {e.entry_id for e in index.entries}
    overlap = index_ids & {e.entry_id for e in test_entries}
    if overlap:
        raise EvalError(f"test entries present in the index: {sorted(overlap)[:5]}")
    n_values = sorted(set(n_values))
    if not n_values or n_values[0] <= 0:
        raise EvalError(f"bad n_values {n_values}")

    hits = {m: {n: 0 for n in n_values} for m in metrics}
    top1_scores: dict[str, list] = {m: [] for m in metrics}
    evaluated = skipped = 0
    for entry in test_entries:
        vec = embed_question(entry.canonical_question, config, table, model)
        if not np.any(vec):
            skipped += 1
            continue
        evaluated += 1
        matches = top_k(index, vec, max(n_values))
        known = normalize_words(entry.canonical_question, config)
        for metric in metrics:
            scores = [score_pair(metric, known,
                                 normalize_words(m.entry.canonical_question, config),
                                 lexicon)
                      for m in matches]
            top1_scores[metric].append(scores[0] if scores else 0.0)
            for n in n_values:
                if any(s >= threshold for s in scores[:n]):
                    hits[metric][n] += 1
    if evaluated == 0:
        raise EvalError("no embeddable test entries")

    results = []
    for metric in metrics:
        rates = {n: hits[metric][n] / evaluated for n in n_values}
        mean_top1 = float(sum(top1_scores[metric]) / evaluated)
        results.append(MetricResult(metric, rates, mean_top1))
    return EvalReport(threshold, n_values, evaluated, skipped, results)


def render_report(report: EvalReport) -> str:
    """Human table followed by machine key-value lines; no timestamps, so
    equal inputs render byte-identically."""
    headers = ["metric"] + [f"Top-{n}" for n in report.n_values] + ["mean-top1"]
    rows = []
    for r in report.results:
        rows.append([r.metric] + [f"{r.hit_rates[n]:.6f}" for n in report.n_values]
                    + [f"{r.mean_top1:.6f}"])
    widths = [max(len(h), *(len(row[i]) for row in rows))
              for i, h in enumerate(headers)]
    lines = [f"Top-N hit rates at threshold {report.threshold:.6f}"]
    lines.append("  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip())
    for row in rows:
        lines.append("  ".join(c.ljust(widths[i]) for i, c in enumerate(row)).rstrip())
    lines.append("")
    lines.append(f"entries_evaluated={report.evaluated}")
    lines.append(f"entries_skipped={report.skipped}")
    lines.append(f"threshold={report.threshold:.6f}")
    for r in report.results:
        parts = [f"metric={r.metric}"]
        parts += [f"top{n}={r.hit_rates[n]:.6f}" for n in report.n_values]
        parts.append(f"mean_top1={r.mean_top1:.6f}")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def dimension_sweep(train_entries: list[CanonicalEntry],
                    test_entries: list[CanonicalEntry], dims: list[int],
                    cfg: TrainConfig, config: NormalizerConfig,
                    lexicon: GlossLexicon, a: float, boost: float,
                    crop_lexicon: frozenset[str]) -> list[tuple[int, float]]:
    """Retrain at each width (same seed) and report the mean modified-Lesk
    score of the Top-1 prediction over the test entries."""
    if not dims:
        raise EvalError("dims must be non-empty")
    sentences = [normalize_words(e.canonical_question, config) for e in train_entries]
    sentences = [s for s in sentences if s]
    rows = []
    for dim in dims:
        cfg_d = TrainConfig(dim=dim, window=cfg.window, negatives=cfg.negatives,
                            epochs=cfg.epochs, learning_rate=cfg.learning_rate,
                            min_learning_rate=cfg.min_learning_rate,
                            min_count=cfg.min_count, seed=cfg.seed)
        table = train_word2vec(sentences, cfg_d)
        model = fit_sif_model(sentences, table, a, boost, crop_lexicon)
        index = build_index(train_entries, config, table, model)
        scores = []
        for entry in test_entries:
            vec = embed_question(entry.canonical_question, config, table, model)
            if not np.any(vec):
                continue
            best = top_k(index, vec, 1)[0]
            scores.append(score_pair(
                "lesk", normalize_words(entry.canonical_question, config),
                normalize_words(best.entry.canonical_question, config), lexicon))
        mean = float(sum(scores) / len(scores)) if scores else 0.0
        rows.append((dim, mean))
    return rows


def render_sweep(rows: list[tuple[int, float]]) -> str:
    lines = ["dim\tmean_lesk_top1"]
    for dim, mean in rows:
        lines.append(f"{dim}\t{mean:.6f}")
    return "\n".join(lines) + "\n"
