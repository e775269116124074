"""HTTP question-answering service and its engine.

Request path: weather questions go to the provider, everything else is
embedded and matched against the index; a low-confidence match (cosine
below the floor, or gloss-overlap score below the calibrated threshold)
escalates to a human instead of guessing. New question-answer pairs land
in a durable pending file and are only served after an explicit rebuild,
which publishes the new index by swapping one reference.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from fastapi import FastAPI
from fastapi.responses import RedirectResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field, field_validator

from .corpus import CanonicalEntry
from .embedding import embed_question, load_model, model_fingerprint
from .ranking import GlossLexicon, load_gloss_lexicon, modified_lesk, rank_answers
from .retrieval import QuestionIndex, build_index, load_index, save_index, top_k
from .textprep import (NormalizerConfig, load_crop_names, load_spell_dictionary,
                       load_stopwords, load_synonyms, normalize_words)
from .weather import WeatherError, WeatherProvider, make_provider

DEFAULT_SIMILARITY_FLOOR = 0.70
CONFIG_ENV_VAR = "AGRIQA_CONFIG"


class ServiceError(Exception):
    pass


@dataclass
class ServiceConfig:
    index_path: Path
    model_path: Path
    gloss_path: Path
    crops_path: Path
    synonyms_path: Path
    stopwords_path: Path
    threshold: float
    similarity_floor: float = DEFAULT_SIMILARITY_FLOOR
    weather_url: str = ""
    port: int = 8000


_REQUIRED_KEYS = ("index_path", "model_path", "gloss_path", "crops_path",
                  "synonyms_path", "stopwords_path", "threshold")


def load_service_config(path: str | Path) -> ServiceConfig:
    """Parse a key=value config file; relative paths resolve against the
    config file's own directory."""
    path = Path(path)
    base = path.parent
    raw: dict[str, str] = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ServiceError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        raw[key.strip()] = value.strip()
    missing = [k for k in _REQUIRED_KEYS if k not in raw]
    if missing:
        raise ServiceError(f"{path}: missing config keys: {', '.join(missing)}")

    def resolve(key: str) -> Path:
        p = Path(raw[key])
        return p if p.is_absolute() else base / p

    return ServiceConfig(
        index_path=resolve("index_path"),
        model_path=resolve("model_path"),
        gloss_path=resolve("gloss_path"),
        crops_path=resolve("crops_path"),
        synonyms_path=resolve("synonyms_path"),
        stopwords_path=resolve("stopwords_path"),
        threshold=float(raw["threshold"]),
        similarity_floor=float(raw.get("similarity_floor", DEFAULT_SIMILARITY_FLOOR)),
        weather_url=raw.get("weather_url", ""),
        port=int(raw.get("port", "8000")),
    )


class AskRequest(BaseModel):
    question: str
    state: str | None = None
    district: str | None = None
    top_k: int = Field(default=5, ge=1, le=50)

    @field_validator("question")
    @classmethod
    def _non_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("question must be non-empty")
        return value


class Alternative(BaseModel):
    matched_question: str
    similarity: float


class AskResponse(BaseModel):
    source: str  # kb | weather | escalate
    answer: str
    matched_question: str | None = None
    similarity: float | None = None
    answer_score: float | None = None
    alternatives: list[Alternative] = []
    reason: str | None = None


class PairRequest(BaseModel):
    question: str
    answer: str
    state: str | None = None
    district: str | None = None
    season: str | None = None
    query_type: str | None = None

    @field_validator("question", "answer")
    @classmethod
    def _non_empty(cls, value: str) -> str:
        if not value.strip():
            raise ValueError("must be non-empty")
        return value


class PairResponse(BaseModel):
    status: str  # ok | duplicate
    pending: int


class HealthResponse(BaseModel):
    status: str
    fingerprint: str
    entries: int
    dim: int
    threshold: float
    similarity_floor: float
    pending: int


def pending_path_for(index_path: Path) -> Path:
    return index_path.parent / (index_path.name + ".pending.jsonl")


def is_weather_question(question: str, config: NormalizerConfig) -> bool:
    return "weather" in normalize_words(question, config)


class QaEngine:
    """Loads all artifacts once and serves routing decisions.

    The index reference is swapped atomically by :meth:`rebuild`; readers
    grab it once per request so a swap mid-request is harmless.
    """

    def __init__(self, config: ServiceConfig, provider: WeatherProvider | None = None):
        self.config = config
        stopwords = load_stopwords(config.stopwords_path)
        synonyms = load_synonyms(config.synonyms_path)
        self.table, self.model, sidecar_paths = load_model(config.model_path)
        spell_path = sidecar_paths.get("spell_dict")
        if not spell_path:
            raise ServiceError(
                f"{config.model_path}: model sidecar lacks a spell_dict path")
        dictionary = load_spell_dictionary(spell_path)
        self.normalizer = NormalizerConfig(stopwords=stopwords,
                                           dictionary=dictionary,
                                           synonyms=synonyms)
        self.crop_names = load_crop_names(config.crops_path)
        self.lexicon: GlossLexicon = load_gloss_lexicon(config.gloss_path, stopwords)
        fingerprint = model_fingerprint(self.table, self.model)
        self.index: QuestionIndex = load_index(config.index_path,
                                               expect_fingerprint=fingerprint)
        self.provider = provider if provider is not None else make_provider(
            config.weather_url or None)
        self.pending_path = pending_path_for(config.index_path)
        self._pending_lock = threading.Lock()
        self._rebuild_lock = threading.Lock()

    # -- routing ------------------------------------------------------------

    def route(self, request: AskRequest) -> AskResponse:
        question = request.question.strip()
        if is_weather_question(question, self.normalizer):
            try:
                forecast = self.provider.forecast(request.state, request.district)
            except WeatherError:
                return AskResponse(source="escalate", answer="",
                                   reason="weather_provider_failure")
            return AskResponse(source="weather", answer=forecast)

        index = self.index
        vec = embed_question(question, self.normalizer, self.table, self.model)
        if not np.any(vec):
            return AskResponse(source="escalate", answer="", reason="unembeddable")
        matches = top_k(index, vec, min(request.top_k, len(index)))
        best = matches[0]
        query_tokens = normalize_words(question, self.normalizer)
        best_tokens = normalize_words(best.entry.canonical_question, self.normalizer)
        metric_score = modified_lesk(query_tokens, best_tokens, self.lexicon)
        if best.score < self.config.similarity_floor or metric_score < self.config.threshold:
            return AskResponse(source="escalate", answer="", reason="low_confidence")
        answer, answer_score = rank_answers(query_tokens, best.entry.answers,
                                            self.lexicon, self.normalizer)
        alternatives = [Alternative(matched_question=m.entry.canonical_question,
                                    similarity=m.score)
                        for m in matches[1:]]
        return AskResponse(source="kb", answer=answer,
                           matched_question=best.entry.canonical_question,
                           similarity=best.score, answer_score=float(answer_score),
                           alternatives=alternatives)

    # -- pending pairs ------------------------------------------------------

    def _read_pending(self) -> list[dict]:
        if not self.pending_path.exists():
            return []
        records = []
        for line in self.pending_path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                records.append(json.loads(line))
        return records

    def pending_count(self) -> int:
        return len(self._read_pending())

    def append_pair(self, request: PairRequest) -> PairResponse:
        key = (" ".join(normalize_words(request.question, self.normalizer)),
               request.answer.strip())
        with self._pending_lock:
            pending = self._read_pending()
            for record in pending:
                existing = (" ".join(normalize_words(record["question"],
                                                     self.normalizer)),
                            record["answer"].strip())
                if existing == key:
                    return PairResponse(status="duplicate", pending=len(pending))
            record = {
                "question": request.question.strip(),
                "answer": request.answer.strip(),
                "state": request.state or "unknown",
                "district": request.district or "unknown",
                "season": request.season or "unknown",
                "query_type": request.query_type or "unknown",
            }
            self.pending_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.pending_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
                fh.flush()
                os.fsync(fh.fileno())
            return PairResponse(status="ok", pending=len(pending) + 1)

    # -- rebuild ------------------------------------------------------------

    def rebuild(self) -> dict:
        """Fold pending pairs into the entry set, rebuild and persist the
        index, then publish it by swapping the in-memory reference."""
        with self._rebuild_lock:
            pending = self._read_pending()
            entries = merge_pending(self.index.entries, pending, self.normalizer)
            new_index = build_index(entries, self.normalizer, self.table, self.model)
            save_index(self.config.index_path, new_index)
            if pending:
                applied = self.pending_path.with_suffix(".applied.jsonl")
                with open(applied, "a", encoding="utf-8") as fh:
                    for record in pending:
                        fh.write(json.dumps(record, ensure_ascii=False) + "\n")
                self.pending_path.unlink()
            self.index = new_index
            return {"entries": len(new_index), "applied": len(pending),
                    "fingerprint": new_index.fingerprint}

    # -- health -------------------------------------------------------------

    def health(self) -> HealthResponse:
        index = self.index
        return HealthResponse(status="ok", fingerprint=index.fingerprint,
                              entries=len(index), dim=self.table.dim,
                              threshold=self.config.threshold,
                              similarity_floor=self.config.similarity_floor,
                              pending=self.pending_count())


def merge_pending(entries: list[CanonicalEntry], pending: list[dict],
                  config: NormalizerConfig) -> list[CanonicalEntry]:
    """Attach each pending pair to the entry with the same normalized
    question, or mint a new entry after the current highest id."""
    merged = {e.entry_id: e for e in entries}
    key_to_id = {" ".join(normalize_words(e.canonical_question, config)): e.entry_id
                 for e in entries}
    next_id = max(merged, default=-1) + 1
    for record in pending:
        question = record["question"]
        answer = record["answer"]
        key = " ".join(normalize_words(question, config))
        if key in key_to_id:
            entry = merged[key_to_id[key]]
            raw = list(entry.raw_questions)
            if question not in raw:
                raw.append(question)
            answers = list(entry.answers)
            if answer not in answers:
                answers.append(answer)
            merged[entry.entry_id] = CanonicalEntry(
                entry_id=entry.entry_id,
                canonical_question=entry.canonical_question,
                raw_questions=raw, answers=answers,
                query_type=entry.query_type, states=entry.states,
                seasons=entry.seasons)
        else:
            entry = CanonicalEntry(
                entry_id=next_id, canonical_question=question,
                raw_questions=[question], answers=[answer],
                query_type=record.get("query_type", "unknown"),
                states={record.get("state", "unknown"): 1},
                seasons={record.get("season", "unknown"): 1})
            merged[next_id] = entry
            key_to_id[key] = next_id
            next_id += 1
    return [merged[i] for i in sorted(merged)]


def find_ui_dir() -> Path | None:
    """Static chat client, when built: env override first, then the
    conventional in-repo location. The service runs fine without it."""
    env = os.environ.get("AGRIQA_UI_DIR")
    candidates = [Path(env)] if env else []
    candidates.append(Path.cwd() / "frontend" / "dist")
    for candidate in candidates:
        if candidate.is_dir() and (candidate / "index.html").is_file():
            return candidate
    return None


def create_app(engine: QaEngine, ui_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="agriqa")

    @app.post("/v1/ask", response_model=AskResponse)
    def ask(request: AskRequest) -> AskResponse:
        return engine.route(request)

    @app.post("/v1/pairs", response_model=PairResponse)
    def pairs(request: PairRequest) -> PairResponse:
        return engine.append_pair(request)

    @app.get("/v1/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return engine.health()

    ui = ui_dir if ui_dir is not None else find_ui_dir()
    if ui is not None:
        app.mount("/ui", StaticFiles(directory=str(ui), html=True), name="ui")

        @app.get("/", include_in_schema=False)
        def root():
            return RedirectResponse("/ui/")

    return app
