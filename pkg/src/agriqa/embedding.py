"""Word-vector training (skip-gram with negative sampling) and smoothed
inverse-frequency sentence embeddings with crop-entity boosting.

Training is single-threaded and bitwise deterministic under a fixed seed;
a finished table is immutable and safe to share across readers.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .textprep import NormalizerConfig, normalize_words

DEFAULT_DIM = 75
DEFAULT_SIF_A = 1e-3
DEFAULT_BOOST = 3.0
NOISE_POWER = 0.75


class EmbeddingError(Exception):
    pass


def _sigmoid(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _log_sigmoid(x) -> np.ndarray:
    return -np.logaddexp(0.0, -np.asarray(x, dtype=float))


@dataclass
class TrainConfig:
    dim: int = DEFAULT_DIM
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    min_count: int = 1
    seed: int = 42

    def validate(self) -> None:
        for name in ("dim", "window", "negatives", "epochs", "min_count"):
            if getattr(self, name) <= 0:
                raise EmbeddingError(f"{name} must be positive, got {getattr(self, name)}")
        if self.learning_rate <= 0:
            raise EmbeddingError("learning_rate must be positive")


class WordVectorTable:
    """Vocabulary, trained vectors and unigram probabilities."""

    def __init__(self, words: list[str], input_vectors: np.ndarray,
                 counts: dict[str, int], output_vectors: np.ndarray | None = None,
                 epoch_mean_loss: list[float] | None = None):
        self.words = list(words)
        self.vocab = {w: i for i, w in enumerate(self.words)}
        self.input_vectors = np.asarray(input_vectors, dtype=np.float64)
        self.output_vectors = output_vectors
        self.counts = dict(counts)
        self.epoch_mean_loss = list(epoch_mean_loss or [])
        if self.input_vectors.shape[0] != len(self.words):
            raise EmbeddingError("vector row count does not match vocabulary size")
        if not np.all(np.isfinite(self.input_vectors)):
            raise EmbeddingError("non-finite vector components")
        total = sum(self.counts[w] for w in self.words)
        self._probs = np.array([self.counts[w] / total for w in self.words])

    @property
    def dim(self) -> int:
        return self.input_vectors.shape[1]

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def vector(self, word: str) -> np.ndarray:
        return self.input_vectors[self.vocab[word]]

    def prob(self, word: str) -> float:
        return float(self._probs[self.vocab[word]])

    @property
    def unigram_prob(self) -> dict[str, float]:
        return {w: float(self._probs[i]) for i, w in enumerate(self.words)}


@dataclass
class SifModel:
    a: float = DEFAULT_SIF_A
    pc: np.ndarray | None = None
    boost: float = DEFAULT_BOOST
    crop_lexicon: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.a <= 0:
            raise EmbeddingError(f"smoothing parameter must be positive, got {self.a}")
        if self.boost < 1:
            raise EmbeddingError(f"entity boost must be >= 1, got {self.boost}")
        if self.pc is not None:
            self.pc = np.asarray(self.pc, dtype=np.float64)
            norm = np.linalg.norm(self.pc)
            if abs(norm - 1.0) > 1e-9:
                raise EmbeddingError(f"principal component norm {norm} is not 1")


def compute_unigram_probs(sentences: list[list[str]]) -> dict[str, float]:
    counts: dict[str, int] = {}
    total = 0
    for sentence in sentences:
        for word in sentence:
            counts[word] = counts.get(word, 0) + 1
            total += 1
    if total == 0:
        raise EmbeddingError("empty corpus")
    return {w: c / total for w, c in counts.items()}


def sgns_loss(center_vec, context_vec, negative_vecs) -> float:
    """-log s(u_o.v_c) - sum_i log s(-u_i.v_c)."""
    center_vec = np.asarray(center_vec, dtype=float)
    context_vec = np.asarray(context_vec, dtype=float)
    negative_vecs = np.atleast_2d(np.asarray(negative_vecs, dtype=float))
    loss = -_log_sigmoid(context_vec @ center_vec)
    loss -= _log_sigmoid(-(negative_vecs @ center_vec)).sum()
    return float(loss)


def sgns_gradient(center_vec, context_vec, negative_vecs
                  ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Analytic gradients of :func:`sgns_loss` w.r.t. each input."""
    center_vec = np.asarray(center_vec, dtype=float)
    context_vec = np.asarray(context_vec, dtype=float)
    negative_vecs = np.atleast_2d(np.asarray(negative_vecs, dtype=float))
    g_pos = _sigmoid(context_vec @ center_vec) - 1.0
    g_negs = _sigmoid(negative_vecs @ center_vec)
    grad_center = g_pos * context_vec + g_negs @ negative_vecs
    grad_context = g_pos * center_vec
    grad_negatives = np.outer(g_negs, center_vec)
    return grad_center, grad_context, grad_negatives


def train_word2vec(sentences: list[list[str]], cfg: TrainConfig) -> WordVectorTable:
    """Train skip-gram vectors by SGD over (center, context) pairs.

    Negatives are drawn from the unigram distribution raised to 3/4. The
    context window width is resampled uniformly from [1, window] per center,
    and the learning rate decays linearly over all training positions.
    """
    cfg.validate()
    sentences = [s for s in sentences if s]
    if not sentences:
        raise EmbeddingError("empty corpus")

    counts: dict[str, int] = {}
    for sentence in sentences:
        for word in sentence:
            counts[word] = counts.get(word, 0) + 1
    kept = {w: c for w, c in counts.items() if c >= cfg.min_count}
    if not kept:
        raise EmbeddingError(f"no word reaches min_count={cfg.min_count}")
    # frequency-descending, then lexicographic: fixes vector row order
    words = sorted(kept, key=lambda w: (-kept[w], w))
    vocab = {w: i for i, w in enumerate(words)}

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    inp = (rng.random((len(words), cfg.dim)) - 0.5) / cfg.dim
    out = np.zeros((len(words), cfg.dim))

    noise = np.array([kept[w] for w in words], dtype=float) ** NOISE_POWER
    noise_cum = np.cumsum(noise / noise.sum())

    id_sentences = [[vocab[w] for w in s if w in vocab] for s in sentences]
    id_sentences = [s for s in id_sentences if s]
    total_positions = cfg.epochs * sum(len(s) for s in id_sentences)

    epoch_mean_loss = []
    position = 0
    for _epoch in range(cfg.epochs):
        loss_sum = 0.0
        n_pairs = 0
        for sentence in id_sentences:
            for i, center in enumerate(sentence):
                lr = max(cfg.min_learning_rate,
                         cfg.learning_rate * (1.0 - position / total_positions))
                position += 1
                width = int(rng.integers(1, cfg.window + 1))
                lo = max(0, i - width)
                hi = min(len(sentence), i + width + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    context = sentence[j]
                    draws = np.searchsorted(noise_cum, rng.random(cfg.negatives),
                                            side="right")
                    negs = np.minimum(draws, len(words) - 1)
                    negs = negs[negs != context]

                    v_c = inp[center]
                    u_o = out[context]
                    u_n = out[negs]
                    pos_dot = u_o @ v_c
                    neg_dots = u_n @ v_c

                    loss_sum += -float(_log_sigmoid(pos_dot))
                    loss_sum -= float(_log_sigmoid(-neg_dots).sum())
                    n_pairs += 1

                    g_pos = float(_sigmoid(pos_dot)) - 1.0
                    g_negs = _sigmoid(neg_dots)
                    grad_center = g_pos * u_o + g_negs @ u_n
                    out[context] = u_o - lr * g_pos * v_c
                    np.subtract.at(out, negs, lr * np.outer(g_negs, v_c))
                    inp[center] = v_c - lr * grad_center
        epoch_mean_loss.append(loss_sum / max(n_pairs, 1))

    return WordVectorTable(words, inp, kept, output_vectors=out,
                           epoch_mean_loss=epoch_mean_loss)


def sif_embed(words: list[str], table: WordVectorTable, model: SifModel,
              apply_pc: bool = False) -> np.ndarray:
    """Weighted word-vector average; crop tokens get ``boost`` times the
    a/(a+p) inverse-frequency weight. All-out-of-vocabulary input yields the
    zero vector, the caller's unembeddable signal."""
    acc = np.zeros(table.dim)
    weight_sum = 0.0
    # accumulate in sorted order: float addition is not associative, and the
    # embedding must be bitwise identical under token permutation
    for word in sorted(words):
        if word not in table:
            continue
        weight = model.a / (model.a + table.prob(word))
        if word in model.crop_lexicon:
            weight *= model.boost
        acc += weight * table.vector(word)
        weight_sum += weight
    if weight_sum == 0.0:
        return acc
    vec = acc / weight_sum
    if apply_pc:
        if model.pc is None:
            raise EmbeddingError("principal component not fitted")
        vec = vec - (vec @ model.pc) * model.pc
    return vec


def fit_principal_component(sentence_vectors: np.ndarray, tol: float = 1e-9,
                            max_iter: int = 50000) -> np.ndarray:
    """First right singular vector of the uncentered embedding matrix.

    Power iteration on X^T X; the sign is fixed so the largest-magnitude
    component is positive.
    """
    X = np.asarray(sentence_vectors, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] < 2:
        raise EmbeddingError("need at least 2 sentence vectors")
    if not np.any(X):
        raise EmbeddingError("all-zero embedding matrix")
    A = X.T @ X
    rng = np.random.Generator(np.random.PCG64(0x51F))
    v = rng.standard_normal(X.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = A @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # started orthogonal to the range; redraw
            v = rng.standard_normal(X.shape[1])
            v /= np.linalg.norm(v)
            continue
        w /= norm
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    else:
        raise EmbeddingError(f"power iteration did not converge in {max_iter} steps")
    i = int(np.argmax(np.abs(v)))
    if v[i] < 0:
        v = -v
    return v


def remove_pc(vec: np.ndarray, pc: np.ndarray) -> np.ndarray:
    return vec - (vec @ pc) * pc


def embed_question(raw_text: str, config: NormalizerConfig,
                   table: WordVectorTable, model: SifModel) -> np.ndarray:
    """Normalize, embed with PC removal, scale to unit length.

    Unembeddable questions come back as the zero vector.
    """
    words = normalize_words(raw_text, config)
    vec = sif_embed(words, table, model, apply_pc=True)
    norm = np.linalg.norm(vec)
    if norm == 0.0:
        return vec
    return vec / norm


def fit_sif_model(entries_words: list[list[str]], table: WordVectorTable,
                  a: float, boost: float, crop_lexicon: frozenset[str]) -> SifModel:
    """Fit the principal component on training-sentence embeddings only."""
    partial = SifModel(a=a, pc=None, boost=boost, crop_lexicon=crop_lexicon)
    rows = [sif_embed(words, table, partial) for words in entries_words]
    rows = [r for r in rows if np.any(r)]
    if len(rows) < 2:
        raise EmbeddingError("fewer than 2 embeddable training sentences")
    pc = fit_principal_component(np.vstack(rows))
    return SifModel(a=a, pc=pc, boost=boost, crop_lexicon=crop_lexicon)


# ---------------------------------------------------------------------------
# persistence

def save_vectors(table: WordVectorTable, path: str | Path) -> None:
    lines = [f"{len(table.words)} {table.dim}"]
    for i, word in enumerate(table.words):
        comps = " ".join(f"{x:.17g}" for x in table.input_vectors[i])
        lines.append(f"{word} {comps}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_vectors(path: str | Path) -> tuple[list[str], np.ndarray]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise EmbeddingError(f"{path}: empty vector file")
    try:
        vocab_size, dim = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise EmbeddingError(f"{path}: bad header line") from exc
    words, rows = [], []
    for line in lines[1:vocab_size + 1]:
        parts = line.split(" ")
        if len(parts) != dim + 1:
            raise EmbeddingError(f"{path}: bad vector row for {parts[0]!r}")
        words.append(parts[0])
        rows.append([float(x) for x in parts[1:]])
    if len(words) != vocab_size:
        raise EmbeddingError(f"{path}: expected {vocab_size} rows, found {len(words)}")
    return words, np.array(rows, dtype=np.float64)


def save_counts(counts: dict[str, int], path: str | Path) -> None:
    lines = [f"{w}\t{c}" for w, c in sorted(counts.items())]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_counts(path: str | Path) -> dict[str, int]:
    counts = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            word, count = line.split("\t")
            counts[word] = int(count)
    return counts


def model_fingerprint(table: WordVectorTable, model: SifModel) -> str:
    """Content hash binding an index to the exact table and model that built it."""
    h = hashlib.sha256()
    h.update(b"agriqa-model-v1")
    h.update(str(table.dim).encode())
    for word in table.words:
        h.update(word.encode("utf-8"))
        h.update(b"\x00")
        h.update(table.input_vectors[table.vocab[word]].tobytes())
        h.update(str(table.counts[word]).encode())
    h.update(f"{model.a:.17g}".encode())
    h.update(f"{model.boost:.17g}".encode())
    if model.pc is not None:
        h.update(model.pc.tobytes())
    for token in sorted(model.crop_lexicon):
        h.update(token.encode("utf-8"))
        h.update(b"\x01")
    return h.hexdigest()


def save_model(directory: str | Path, table: WordVectorTable, model: SifModel,
               lexicon_paths: dict[str, str]) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_vectors(table, directory / "vectors.txt")
    save_counts(table.counts, directory / "counts.tsv")
    if model.pc is None:
        raise EmbeddingError("cannot save a model without a fitted principal component")
    lines = [
        f"dim={table.dim}",
        f"a={model.a:.17g}",
        f"boost={model.boost:.17g}",
        "pc=" + ",".join(f"{x:.17g}" for x in model.pc),
        "crop_tokens=" + ",".join(sorted(model.crop_lexicon)),
    ]
    for key, value in sorted(lexicon_paths.items()):
        lines.append(f"{key}={value}")
    (directory / "model.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(directory: str | Path) -> tuple[WordVectorTable, SifModel, dict[str, str]]:
    directory = Path(directory)
    words, vectors = load_vectors(directory / "vectors.txt")
    counts = load_counts(directory / "counts.tsv")
    sidecar: dict[str, str] = {}
    for line in (directory / "model.txt").read_text(encoding="utf-8").splitlines():
        if line.strip() and "=" in line:
            key, value = line.split("=", 1)
            sidecar[key] = value
    table = WordVectorTable(words, vectors, counts)
    if int(sidecar["dim"]) != table.dim:
        raise EmbeddingError("sidecar dim does not match vector file")
    pc = np.array([float(x) for x in sidecar["pc"].split(",")])
    crop_tokens = frozenset(t for t in sidecar.get("crop_tokens", "").split(",") if t)
    model = SifModel(a=float(sidecar["a"]), pc=pc,
                     boost=float(sidecar["boost"]), crop_lexicon=crop_tokens)
    paths = {k: v for k, v in sidecar.items()
             if k not in {"dim", "a", "boost", "pc", "crop_tokens"}}
    return table, model, paths
