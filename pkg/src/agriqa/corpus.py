"""KCC-style corpus handling: CSV parsing, filtering, answer grouping,
train/test splitting and descriptive statistics."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .textprep import NormalizerConfig, normalize_words

CSV_HEADER = [
    "query_id", "query_text", "query_type", "created_on",
    "state", "district", "season", "answer",
]

SEASONS = ("kharif", "rabi", "zaid", "unknown")

# spelling variants of the summer cropping season seen in exports
_ZAID_ALIASES = {"zaid", "jayad", "jayed", "zayad", "zaid/jayad"}

ENGLISH_FRACTION_THRESHOLD = 0.8


class CorpusError(Exception):
    pass


class CsvHeaderError(CorpusError):
    pass


def parse_season(value: str) -> str:
    value = value.strip().lower()
    if value in ("kharif", "rabi"):
        return value
    if value in _ZAID_ALIASES:
        return "zaid"
    return "unknown"


@dataclass(frozen=True)
class QaRecord:
    query_id: str
    question: str
    query_type: str
    created_on: str
    state: str
    district: str
    season: str
    answer: str


@dataclass
class ParseResult:
    records: list[QaRecord]
    skipped: int = 0
    warnings: int = 0


@dataclass
class CanonicalEntry:
    entry_id: int
    canonical_question: str
    raw_questions: list[str]
    answers: list[str]
    query_type: str
    states: dict[str, int] = field(default_factory=dict)
    seasons: dict[str, int] = field(default_factory=dict)


@dataclass
class CorpusSplit:
    train: list[CanonicalEntry]
    test: list[CanonicalEntry]
    seed: int
    ratio: float
    seed: int
    ratio: float


@dataclass
class StatsReport:
    total_records: int
    state_counts: dict[str, int]
    season_fractions: dict[str, float]
    query_type_fractions: dict[str, float]
    crop_counts: dict[str, int]
    duplicate_rate: float


def parse_csv(data: bytes, column_map: dict[str, str] | None = None) -> ParseResult:
    """Parse a canonical CSV export.

    ``column_map`` maps canonical field names to the header names actually
    present, for exports that deviate from the canonical header. Without a
    map the header must match ``CSV_HEADER`` exactly. Rows with the wrong
    field count or a blank question are skipped and counted.
    """
    text = io.TextIOWrapper(io.BytesIO(data), encoding="utf-8", newline="")
    reader = csv.reader(text)
    try:
        header = next(reader)
    except StopIteration:
        return ParseResult([], skipped=0, warnings=1)

    header = [h.strip() for h in header]
    if column_map is None:
        if header != CSV_HEADER:
            missing = [c for c in CSV_HEADER if c not in header]
            if missing:
                raise CsvHeaderError(f"missing column {missing[0]!r}")
            unknown = [c for c in header if c not in CSV_HEADER]
            if unknown:
                raise CsvHeaderError(f"unknown column {unknown[0]!r}")
            raise CsvHeaderError(
                f"columns out of order: expected {','.join(CSV_HEADER)}"
            )
        positions = {name: i for i, name in enumerate(header)}
    else:
        positions = {}
        for canonical in CSV_HEADER:
            actual = column_map.get(canonical, canonical)
            if actual not in header:
                raise CsvHeaderError(f"missing column {actual!r} (for {canonical!r})")
            positions[canonical] = header.index(actual)

    width = len(header)
    records: list[QaRecord] = []
    skipped = 0
    for row in reader:
        if not row:
            continue
        if len(row) != width:
            skipped += 1
            continue
        question = row[positions["query_text"]]
        if not question.strip():
            skipped += 1
            continue
        records.append(QaRecord(
            query_id=row[positions["query_id"]],
            question=question,
            query_type=row[positions["query_type"]],
            created_on=row[positions["created_on"]],
            state=row[positions["state"]],
            district=row[positions["district"]],
            season=parse_season(row[positions["season"]]),
            answer=row[positions["answer"]],
        ))
    return ParseResult(records, skipped=skipped)


def serialize_csv(records: list[QaRecord]) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out)
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow([r.query_id, r.question, r.query_type, r.created_on,
                         r.state, r.district, r.season, r.answer])
    return out.getvalue().encode("utf-8")


def parse_csv_file(path: str | Path, column_map: dict[str, str] | None = None) -> ParseResult:
    return parse_csv(Path(path).read_bytes(), column_map=column_map)


def english_fraction(text: str) -> float:
    """Fraction of alphabetic characters in the ASCII Latin range.

    Digits, spaces and punctuation carry no script signal and are ignored;
    a question with no letters at all counts as fully Latin.
    """
    letters = [ch for ch in text if ch.isalpha()]
    if not letters:
        return 1.0
    latin = sum(1 for ch in letters if ch.isascii())
    return latin / len(letters)


def filter_english(records: list[QaRecord],
                   threshold: float = ENGLISH_FRACTION_THRESHOLD
                   ) -> tuple[list[QaRecord], int]:
    kept = [r for r in records if english_fraction(r.question) >= threshold]
    return kept, len(records) - len(kept)


def is_weather_record(record: QaRecord, config: NormalizerConfig) -> bool:
    if record.query_type.strip().lower() == "weather":
        return True
    return "weather" in normalize_words(record.question, config)


def filter_weather(records: list[QaRecord], config: NormalizerConfig
                   ) -> tuple[list[QaRecord], list[QaRecord]]:
    weather, rest = [], []
    for r in records:
        (weather if is_weather_record(r, config) else rest).append(r)
    return weather, rest


def group_answers(records: list[QaRecord], config: NormalizerConfig) -> list[CanonicalEntry]:
    """Merge records whose normalized questions are identical.

    Answer order is first-seen; exact duplicates (after whitespace trim) are
    dropped. The entry's query type is the most frequent label among its
    records, first-seen on ties.
    """
    by_key: dict[str, dict] = {}
    order: list[str] = []
    for r in records:
        key = " ".join(normalize_words(r.question, config))
        if key not in by_key:
            by_key[key] = {
                "raw_questions": [], "answers": [], "types": [],
                "states": Counter(), "seasons": Counter(),
            }
            order.append(key)
        g = by_key[key]
        if r.question not in g["raw_questions"]:
            g["raw_questions"].append(r.question)
        answer = r.answer.strip()
        if answer and answer not in g["answers"]:
            g["answers"].append(answer)
        g["types"].append(r.query_type)
        if r.state:
            g["states"][r.state] += 1
        g["seasons"][r.season] += 1

    entries = []
    for entry_id, key in enumerate(order):
        g = by_key[key]
        type_counts = Counter(g["types"])
        best = max(type_counts.values())
        query_type = next(t for t in g["types"] if type_counts[t] == best)
        entries.append(CanonicalEntry(
            entry_id=entry_id,
            canonical_question=key,
            raw_questions=g["raw_questions"],
            answers=g["answers"],
            query_type=query_type,
            states=dict(sorted(g["states"].items())),
            seasons=dict(sorted(g["seasons"].items())),
        ))
    return entries


def split_train_test(entries: list[CanonicalEntry], ratio: float, seed: int) -> CorpusSplit:
    if not 0 < ratio < 1:
        raise CorpusError(f"split ratio must be in (0,1), got {ratio}")
    if len(entries) < 2:
        raise CorpusError("need at least 2 entries to split")
    rng = np.random.Generator(np.random.PCG64(seed))
    perm = rng.permutation(len(entries))
    n_train = int(ratio * len(entries))
    train_idx = sorted(perm[:n_train].tolist())
    test_idx = sorted(perm[n_train:].tolist())
    return CorpusSplit(
        train=[entries[i] for i in train_idx],
        test=[entries[i] for i in test_idx],
        seed=seed,
        ratio=ratio,
    )


def corpus_stats(records: list[QaRecord], config: NormalizerConfig,
                 crop_tokens: frozenset[str]) -> StatsReport:
    state_counts: Counter = Counter()
    season_counts: Counter = Counter()
    type_counts: Counter = Counter()
    crop_counts: Counter = Counter()
    normalized_seen: set[str] = set()

    for r in records:
        state_counts[r.state or "unknown"] += 1
        season_counts[r.season] += 1
        type_counts[r.query_type.strip().lower() or "unknown"] += 1
        words = normalize_words(r.question, config)
        for crop in set(words) & crop_tokens:
            crop_counts[crop] += 1
        normalized_seen.add(" ".join(words))

    total = len(records)
    def fractions(counts: Counter) -> dict[str, float]:
        return {k: v / total for k, v in sorted(counts.items())} if total else {}

    return StatsReport(
        total_records=total,
        state_counts=dict(sorted(state_counts.items())),
        season_fractions=fractions(season_counts),
        query_type_fractions=fractions(type_counts),
        crop_counts=dict(sorted(crop_counts.items())),
        duplicate_rate=(1.0 - len(normalized_seen) / total) if total else 0.0,
    )


def format_stats(report: StatsReport) -> str:
    lines = [f"total_records={report.total_records}",
             f"duplicate_question_rate={report.duplicate_rate:.6f}"]
    for state, count in report.state_counts.items():
        lines.append(f"state\t{state}\t{count}")
    for season, frac in report.season_fractions.items():
        lines.append(f"season\t{season}\t{frac:.6f}")
    for qtype, frac in report.query_type_fractions.items():
        lines.append(f"query_type\t{qtype}\t{frac:.6f}")
    for crop, count in report.crop_counts.items():
        lines.append(f"crop\t{crop}\t{count}")
    return "\n".join(lines) + "\n"


def entry_to_json(entry: CanonicalEntry) -> str:
    return json.dumps({
        "entry_id": entry.entry_id,
        "canonical_question": entry.canonical_question,
        "raw_questions": entry.raw_questions,
        "answers": entry.answers,
        "query_type": entry.query_type,
        "states": entry.states,
        "seasons": entry.seasons,
    }, ensure_ascii=False)


def entry_from_json(line: str) -> CanonicalEntry:
    obj = json.loads(line)
    return CanonicalEntry(
        entry_id=int(obj["entry_id"]),
        canonical_question=obj["canonical_question"],
        raw_questions=list(obj["raw_questions"]),
        answers=list(obj["answers"]),
        query_type=obj["query_type"],
        states={k: int(v) for k, v in obj["states"].items()},
        seasons={k: int(v) for k, v in obj["seasons"].items()},
    )


def write_corpus(entries: list[CanonicalEntry], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for entry in entries:
            fh.write(entry_to_json(entry) + "\n")


def read_corpus(path: str | Path) -> list[CanonicalEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                entries.append(entry_from_json(line))
    return entries
