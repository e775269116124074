"""Operator command line: ingest, train, index, eval, ask, serve, stats, rebuild.

Exit codes: 0 success, 1 usage error, 2 data or model error. Diagnostics go
to stderr; requested data goes to stdout or --out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .corpus import CorpusError, parse_csv_file, read_corpus, write_corpus
from .embedding import (DEFAULT_BOOST, DEFAULT_DIM, DEFAULT_SIF_A, EmbeddingError,
                        TrainConfig, fit_sif_model, load_model, save_model,
                        train_word2vec)
from .evaluation import (EvalError, calibrate_from_pairs, dimension_sweep,
                         evaluate_topn, load_labeled_pairs, render_report,
                         render_sweep)
from .ranking import RankingError, load_gloss_lexicon
from .retrieval import IndexError_, build_index, load_index, save_index
from .service import (CONFIG_ENV_VAR, AskRequest, QaEngine, ServiceConfig,
                      ServiceError, create_app, load_service_config)
from .textprep import (LexiconError, NormalizerConfig, bundled_path,
                       build_spell_dictionary, crop_word_set, load_crop_names,
                       load_spell_dictionary, load_stopwords, load_synonyms,
                       normalize_words, normalized_crop_tokens,
                       save_spell_dictionary)
from .weather import WeatherError, make_provider

_DATA_ERRORS = (CorpusError, EmbeddingError, IndexError_, RankingError, EvalError,
                ServiceError, WeatherError, LexiconError, OSError, ValueError)

DEFAULT_THRESHOLD = 0.25


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; the contract here says 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _diag(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _input_csvs(input_path: Path) -> list[Path]:
    if input_path.is_dir():
        found = sorted(input_path.glob("*.csv"))
        if not found:
            raise CorpusError(f"{input_path}: no .csv files")
        return found
    if input_path.is_file():
        return [input_path]
    raise CorpusError(f"{input_path}: no such file or directory")


def _normalizer(stopwords_path, synonyms_path, spell_dict_path) -> NormalizerConfig:
    return NormalizerConfig(
        stopwords=load_stopwords(stopwords_path),
        dictionary=load_spell_dictionary(spell_dict_path),
        synonyms=load_synonyms(synonyms_path),
    )


def _normalizer_from_sidecar(sidecar_paths: dict[str, str]) -> NormalizerConfig:
    for key in ("stopwords", "synonyms", "spell_dict"):
        if key not in sidecar_paths:
            raise EmbeddingError(f"model sidecar lacks a {key} path")
    return _normalizer(sidecar_paths["stopwords"], sidecar_paths["synonyms"],
                       sidecar_paths["spell_dict"])


# ---------------------------------------------------------------------------
# commands

def cmd_ingest(args) -> int:
    csvs = _input_csvs(Path(args.input))
    records = []
    skipped = warnings = 0
    for path in csvs:
        result = parse_csv_file(path)
        records.extend(result.records)
        skipped += result.skipped
        warnings += result.warnings
    if skipped or warnings:
        _diag(f"skipped {skipped} malformed rows ({warnings} warnings)")
    if not records:
        raise CorpusError("no records parsed")

    crop_words = crop_word_set(load_crop_names(args.crops))
    # the dictionary sees every question, including the weather ones that are
    # filtered out below: query-time words must stay known to the corrector
    dictionary = build_spell_dictionary([r.question for r in records], crop_words)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    spell_path = out.parent / "spell.tsv"
    save_spell_dictionary(dictionary, spell_path)

    config = NormalizerConfig(stopwords=load_stopwords(args.stopwords),
                              dictionary=dictionary,
                              synonyms=load_synonyms(args.synonyms))
    english, dropped_non_english = corpus_mod.filter_english(records)
    weather, kept = corpus_mod.filter_weather(english, config)
    entries = corpus_mod.group_answers(kept, config)
    write_corpus(entries, out)

    if args.split_ratio is not None:
        split = corpus_mod.split_train_test(entries, args.split_ratio, args.seed)
        stem = out.name[:-len(".jsonl")] if out.name.endswith(".jsonl") else out.name
        write_corpus(split.train, out.parent / f"{stem}.train.jsonl")
        write_corpus(split.test, out.parent / f"{stem}.test.jsonl")
        _diag(f"split train={len(split.train)} test={len(split.test)} "
              f"seed={args.seed}")
    print(f"entries={len(entries)} dropped_non_english={dropped_non_english} "
          f"weather={len(weather)}")
    return 0


def cmd_train(args) -> int:
    entries = read_corpus(args.corpus)
    spell_dict = args.spell_dict or str(Path(args.corpus).parent / "spell.tsv")
    config = _normalizer(args.stopwords, args.synonyms, spell_dict)
    sentences = [w for e in entries
                 if (w := normalize_words(e.canonical_question, config))]
    if not sentences:
        raise EmbeddingError(f"{args.corpus}: no trainable sentences")
    cfg = TrainConfig(dim=args.dims, window=args.window, negatives=args.negatives,
                      epochs=args.epochs, seed=args.seed)
    _diag(f"training {args.dims}-dim vectors on {len(sentences)} sentences")
    table = train_word2vec(sentences, cfg)
    _diag("epoch mean loss: "
          + " ".join(f"{loss:.4f}" for loss in table.epoch_mean_loss))
    crop_tokens = normalized_crop_tokens(load_crop_names(args.crops), config)
    model = fit_sif_model(sentences, table, args.sif_a, args.boost, crop_tokens)
    lexicon_paths = {
        "stopwords": str(Path(args.stopwords).resolve()),
        "synonyms": str(Path(args.synonyms).resolve()),
        "crops": str(Path(args.crops).resolve()),
        "spell_dict": str(Path(spell_dict).resolve()),
    }
    save_model(args.out, table, model, lexicon_paths)
    _diag(f"model written to {args.out} (vocab={len(table.words)})")
    return 0


def cmd_index(args) -> int:
    entries = read_corpus(args.corpus)
    table, model, sidecar_paths = load_model(args.model)
    config = _normalizer_from_sidecar(sidecar_paths)
    index = build_index(entries, config, table, model)
    save_index(args.out, index)
    if index.skipped:
        _diag(f"skipped {index.skipped} unembeddable entries")
    _diag(f"indexed {len(index)} entries into {args.out}")
    return 0


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise EvalError(f"{flag}: expected comma-separated integers, got {text!r}")
    if not values:
        raise EvalError(f"{flag}: empty list")
    return values


def cmd_eval(args) -> int:
    table, model, sidecar_paths = load_model(args.model)
    config = _normalizer_from_sidecar(sidecar_paths)
    lexicon = load_gloss_lexicon(args.gloss, config.stopwords)
    test_entries = read_corpus(args.test)

    if args.sweep_dims:
        if not args.train:
            raise EvalError("--sweep-dims requires --train")
        dims = _parse_int_list(args.sweep_dims, "--sweep-dims")
        train_entries = read_corpus(args.train)
        cfg = TrainConfig(seed=args.seed)
        crops_path = sidecar_paths.get("crops", str(bundled_path("crops.txt")))
        crop_tokens = normalized_crop_tokens(load_crop_names(crops_path), config)
        rows = dimension_sweep(train_entries, test_entries, dims, cfg, config,
                               lexicon, model.a, model.boost, crop_tokens)
        _emit(render_sweep(rows), args.out)
        return 0

    if not args.index:
        raise EvalError("--index is required unless --sweep-dims is given")
    index = load_index(args.index)
    metrics = ["jaccard", "lesk"] if args.metric == "both" else [args.metric]
    n_values = _parse_int_list(args.top_n, "--top-n")
    if args.labeled_pairs:
        pairs = load_labeled_pairs(args.labeled_pairs)
        threshold = calibrate_from_pairs(pairs, metrics[0], config, lexicon)
        _diag(f"calibrated threshold={threshold:.6f} from {len(pairs)} pairs")
    else:
        threshold = args.threshold
    report = evaluate_topn(index, test_entries, metrics, n_values, threshold,
                           config, table, model, lexicon)
    _emit(render_report(report), args.out)
    return 0


def cmd_ask(args) -> int:
    config = ServiceConfig(
        index_path=Path(args.index), model_path=Path(args.model),
        gloss_path=Path(args.gloss), crops_path=Path(args.crops),
        synonyms_path=Path(args.synonyms), stopwords_path=Path(args.stopwords),
        threshold=args.threshold, similarity_floor=args.similarity_floor,
        weather_url="" if args.offline_weather else (args.weather_url or ""),
    )
    engine = QaEngine(config)
    response = engine.route(AskRequest(question=args.question, state=args.state,
                                       district=args.district, top_k=args.top_k))
    if args.json:
        print(json.dumps(response.model_dump(), ensure_ascii=False))
        return 0
    if response.source == "weather":
        print(response.answer)
    elif response.source == "kb":
        print(response.answer)
        _diag(f"matched: {response.matched_question} "
              f"(similarity {response.similarity:.4f}, "
              f"answer score {response.answer_score:.4f})")
    else:
        print("This question has been forwarded to a human expert.")
        _diag(f"escalated: {response.reason}")
    return 0


def cmd_serve(args) -> int:
    config_path = os.environ.get(CONFIG_ENV_VAR, args.config)
    if not config_path:
        raise ServiceError(f"--config or ${CONFIG_ENV_VAR} is required")
    config = load_service_config(config_path)
    engine = QaEngine(config)
    app = create_app(engine)
    port = args.port if args.port is not None else config.port
    import uvicorn
    _diag(f"serving on port {port} (index fingerprint "
          f"{engine.index.fingerprint[:12]})")
    uvicorn.run(app, host=args.host, port=port, log_level="warning")
    return 0


def cmd_stats(args) -> int:
    csvs = _input_csvs(Path(args.input))
    records = []
    for path in csvs:
        records.extend(parse_csv_file(path).records)
    if not records:
        raise CorpusError("no records parsed")
    crop_names = load_crop_names(args.crops)
    dictionary = build_spell_dictionary([r.question for r in records],
                                        crop_word_set(crop_names))
    config = NormalizerConfig(stopwords=load_stopwords(args.stopwords),
                              dictionary=dictionary,
                              synonyms=load_synonyms(args.synonyms))
    crop_tokens = normalized_crop_tokens(crop_names, config)
    report = corpus_mod.corpus_stats(records, config, crop_tokens)
    _emit(corpus_mod.format_stats(report), args.out)
    return 0


def cmd_rebuild(args) -> int:
    config_path = os.environ.get(CONFIG_ENV_VAR, args.config)
    if not config_path:
        raise ServiceError(f"--config or ${CONFIG_ENV_VAR} is required")
    config = load_service_config(config_path)
    engine = QaEngine(config)
    summary = engine.rebuild()
    print(f"entries={summary['entries']} applied={summary['applied']} "
          f"fingerprint={summary['fingerprint'][:12]}")
    return 0


# ---------------------------------------------------------------------------
# argument wiring

def _add_lexicon_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stopwords", default=str(bundled_path("stopwords.txt")))
    parser.add_argument("--synonyms", default=str(bundled_path("synonyms.tsv")))
    parser.add_argument("--crops", default=str(bundled_path("crops.txt")))


def build_parser() -> _Parser:
    parser = _Parser(prog="agriqa",
                     description="Retrieval question answering over farm "
                                 "call-center logs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="CSV files to a canonical corpus")
    p.add_argument("--input", required=True, help="CSV file or directory")
    p.add_argument("--out", required=True, help="corpus JSONL path")
    p.add_argument("--split-ratio", type=float, default=None,
                   help="also write .train/.test splits at this train fraction")
    p.add_argument("--seed", type=int, default=42)
    _add_lexicon_flags(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("train", help="train word vectors and the SIF model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True, help="model directory")
    p.add_argument("--dims", type=int, default=DEFAULT_DIM)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--sif-a", type=float, default=DEFAULT_SIF_A)
    p.add_argument("--boost", type=float, default=DEFAULT_BOOST)
    p.add_argument("--spell-dict", default=None,
                   help="defaults to spell.tsv beside the corpus")
    _add_lexicon_flags(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("index", help="embed a corpus into a search index")
    p.add_argument("--corpus", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True, help="index directory")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("eval", help="Top-N evaluation or dimension sweep")
    p.add_argument("--index", default=None)
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--metric", choices=["jaccard", "lesk", "both"], default="lesk")
    p.add_argument("--top-n", default="1,3,5")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--labeled-pairs", default=None,
                   help="calibrate the threshold from this labeled CSV")
    p.add_argument("--gloss", default=str(bundled_path("gloss.tsv")))
    p.add_argument("--sweep-dims", default=None,
                   help="comma-separated dims; retrains per dim")
    p.add_argument("--train", default=None, help="train corpus for --sweep-dims")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("ask", help="answer one question from the command line")
    p.add_argument("question")
    p.add_argument("--index", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--gloss", default=str(bundled_path("gloss.tsv")))
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("--similarity-floor", type=float, default=0.70)
    p.add_argument("--state", default=None)
    p.add_argument("--district", default=None)
    p.add_argument("--top-k", type=int, default=5)
    p.add_argument("--weather-url", default=None)
    p.add_argument("--offline-weather", action="store_true",
                   help="use the deterministic mock weather provider")
    p.add_argument("--json", action="store_true")
    _add_lexicon_flags(p)
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None,
                   help=f"key=value config; ${CONFIG_ENV_VAR} overrides")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=None)
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("stats", help="corpus statistics from raw CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=None)
    _add_lexicon_flags(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("rebuild", help="fold pending pairs into the index")
    p.add_argument("--config", default=None,
                   help=f"key=value config; ${CONFIG_ENV_VAR} overrides")
    p.set_defaults(func=cmd_rebuild)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _DATA_ERRORS as exc:
        _diag(f"agriqa {args.command}: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
