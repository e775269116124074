"""Exact nearest-question lookup over the canonical knowledge base.

The index is a dense matrix of unit-normalized question embeddings scanned
linearly per query; scores are cosine similarities. On disk the matrix is
float32 little-endian with a text metadata sidecar and a row-aligned entry
catalog, and carries the fingerprint of the model that produced it so a
stale index cannot silently serve another model's geometry.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import CanonicalEntry, read_corpus, write_corpus
from .embedding import SifModel, WordVectorTable, embed_question, model_fingerprint
from .textprep import NormalizerConfig

INDEX_MAGIC = b"AQIX0001"


class IndexError_(Exception):
    pass


class IndexModelMismatch(IndexError_):
    """Raised when an index was built by a different model than the one loaded."""


@dataclass(frozen=True)
class Match:
    entry: CanonicalEntry
    score: float

    @property
    def entry_id(self) -> int:
        return self.entry.entry_id


class QuestionIndex:
    def __init__(self, entries: list[CanonicalEntry], matrix: np.ndarray,
                 fingerprint: str, skipped: int = 0):
        matrix = np.asarray(matrix, dtype=np.float32)
        if matrix.ndim != 2 or matrix.shape[0] != len(entries):
            raise IndexError_("matrix rows do not match entry count")
        self.entries = list(entries)
        self.matrix = matrix
        self.fingerprint = fingerprint
        self.skipped = skipped

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]


def normalize_rows(rows: np.ndarray) -> np.ndarray:
    """Unit-normalize in float64, then cast to float32 storage."""
    rows = np.asarray(rows, dtype=np.float64)
    norms = np.linalg.norm(rows, axis=1, keepdims=True)
    norms[norms == 0.0] = 1.0
    return (rows / norms).astype(np.float32)


def build_index(entries: list[CanonicalEntry], config: NormalizerConfig,
                table: WordVectorTable, model: SifModel) -> QuestionIndex:
    """Embed every canonical question; entries that embed to the zero vector
    are left out of the index and counted in ``skipped``."""
    kept: list[CanonicalEntry] = []
    rows: list[np.ndarray] = []
    skipped = 0
    for entry in entries:
        vec = embed_question(entry.canonical_question, config, table, model)
        if not np.any(vec):
            skipped += 1
            continue
        kept.append(entry)
        rows.append(vec)
    if not kept:
        raise IndexError_("no embeddable entries; cannot build an index")
    matrix = normalize_rows(np.vstack(rows))
    return QuestionIndex(kept, matrix, model_fingerprint(table, model), skipped)


def top_k(index: QuestionIndex, query_vec: np.ndarray, k: int) -> list[Match]:
    """Best k entries by cosine, ties broken by ascending entry id.

    Scores are clamped to [-1, 1] to absorb float rounding.
    """
    if k <= 0:
        raise IndexError_(f"k must be positive, got {k}")
    query = np.asarray(query_vec, dtype=np.float64)
    if query.shape != (index.dim,):
        raise IndexError_(f"query dim {query.shape} does not match index dim {index.dim}")
    if not np.any(query):
        raise IndexError_("cannot search with a zero query vector")
    scores = np.clip(index.matrix @ query, -1.0, 1.0)
    ids = np.array([e.entry_id for e in index.entries])
    order = np.lexsort((ids, -scores))[:k]
    return [Match(index.entries[i], float(scores[i])) for i in order]


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine similarity, clamped to [-1, 1]. Zero vectors are rejected."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise IndexError_("cosine of a zero vector is undefined")
    return float(np.clip(u @ v / (nu * nv), -1.0, 1.0))


# ---------------------------------------------------------------------------
# persistence: directory with index.bin + meta.txt + entries.jsonl

def save_index(directory: str | Path, index: QuestionIndex) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    n, dim = index.matrix.shape
    payload = INDEX_MAGIC + struct.pack("<II", n, dim)
    payload += index.matrix.astype("<f4").tobytes()
    (directory / "index.bin").write_bytes(payload)
    write_corpus(index.entries, directory / "entries.jsonl")
    meta = [
        f"count={n}",
        f"dim={dim}",
        f"fingerprint={index.fingerprint}",
        f"skipped={index.skipped}",
    ]
    (directory / "meta.txt").write_text("\n".join(meta) + "\n", encoding="utf-8")


def load_index(directory: str | Path,
               expect_fingerprint: str | None = None) -> QuestionIndex:
    directory = Path(directory)
    blob = (directory / "index.bin").read_bytes()
    if blob[:8] != INDEX_MAGIC:
        raise IndexError_(f"{directory}/index.bin: bad magic")
    n, dim = struct.unpack("<II", blob[8:16])
    expected = 16 + n * dim * 4
    if len(blob) != expected:
        raise IndexError_(f"{directory}/index.bin: expected {expected} bytes, "
                          f"found {len(blob)}")
    matrix = np.frombuffer(blob[16:], dtype="<f4").reshape(n, dim)
    entries = read_corpus(directory / "entries.jsonl")
    if len(entries) != n:
        raise IndexError_(f"{directory}: entry catalog has {len(entries)} rows, "
                          f"matrix has {n}")
    meta: dict[str, str] = {}
    for line in (directory / "meta.txt").read_text(encoding="utf-8").splitlines():
        if "=" in line:
            key, value = line.split("=", 1)
            meta[key] = value
    fingerprint = meta.get("fingerprint", "")
    if expect_fingerprint is not None and fingerprint != expect_fingerprint:
        raise IndexModelMismatch(
            f"index at {directory} was built by model {fingerprint[:12]}..., "
            f"expected {expect_fingerprint[:12]}...")
    return QuestionIndex(entries, matrix, fingerprint,
                         skipped=int(meta.get("skipped", "0")))
