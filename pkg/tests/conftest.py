"""Shared fixtures: the bundled toy-corpus pipeline, built once per session."""

import shutil

import pytest

from agriqa.cli import main
from agriqa.corpus import read_corpus
from agriqa.embedding import load_model
from agriqa.textprep import (NormalizerConfig, bundled_path, load_spell_dictionary,
                             load_stopwords, load_synonyms)

TOY_CSV = bundled_path("toy/kcc_toy.csv")


def run_cli(*argv) -> int:
    return main([str(a) for a in argv])


@pytest.fixture(scope="session")
def pipeline(tmp_path_factory):
    """ingest -> train -> index with an 80/20 split; evaluation flavor.

    The model and index are built from the train split only, so the
    held-out test file is a valid evaluation input.
    """
    work = tmp_path_factory.mktemp("pipeline")
    corpus = work / "corpus.jsonl"
    assert run_cli("ingest", "--input", TOY_CSV, "--out", corpus,
                   "--split-ratio", "0.8", "--seed", "42") == 0
    model = work / "model"
    assert run_cli("train", "--corpus", work / "corpus.train.jsonl",
                   "--out", model, "--dims", "75", "--seed", "42") == 0
    index = work / "index"
    assert run_cli("index", "--corpus", work / "corpus.train.jsonl",
                   "--model", model, "--out", index) == 0
    return {
        "work": work,
        "corpus": corpus,
        "train": work / "corpus.train.jsonl",
        "test": work / "corpus.test.jsonl",
        "spell": work / "spell.tsv",
        "model": model,
        "index": index,
    }


@pytest.fixture(scope="session")
def full_pipeline(tmp_path_factory):
    """Model and index over the whole corpus (no split); the serving setup."""
    work = tmp_path_factory.mktemp("full")
    corpus = work / "corpus.jsonl"
    assert run_cli("ingest", "--input", TOY_CSV, "--out", corpus) == 0
    model = work / "model"
    assert run_cli("train", "--corpus", corpus, "--out", model,
                   "--dims", "75", "--seed", "42") == 0
    index = work / "index"
    assert run_cli("index", "--corpus", corpus, "--model", model,
                   "--out", index) == 0
    return {
        "work": work,
        "corpus": corpus,
        "spell": work / "spell.tsv",
        "model": model,
        "index": index,
    }


@pytest.fixture(scope="session")
def normalizer(full_pipeline) -> NormalizerConfig:
    return NormalizerConfig(
        stopwords=load_stopwords(bundled_path("stopwords.txt")),
        dictionary=load_spell_dictionary(full_pipeline["spell"]),
        synonyms=load_synonyms(bundled_path("synonyms.tsv")),
    )


@pytest.fixture(scope="session")
def toy_entries(full_pipeline):
    return read_corpus(full_pipeline["corpus"])


@pytest.fixture(scope="session")
def trained(full_pipeline):
    """(table, sif_model, sidecar_paths) for the full-corpus model."""
    return load_model(full_pipeline["model"])


@pytest.fixture
def service_env(full_pipeline, tmp_path):
    """A private copy of the serving artifacts plus a config file, so a test
    can append pending pairs and rebuild without touching shared state."""
    index = tmp_path / "index"
    shutil.copytree(full_pipeline["index"], index)
    config = tmp_path / "service.conf"
    config.write_text(
        f"index_path={index}\n"
        f"model_path={full_pipeline['model']}\n"
        f"gloss_path={bundled_path('gloss.tsv')}\n"
        f"crops_path={bundled_path('crops.txt')}\n"
        f"synonyms_path={bundled_path('synonyms.tsv')}\n"
        f"stopwords_path={bundled_path('stopwords.txt')}\n"
        "threshold=0.25\n"
        "similarity_floor=0.70\n"
        "weather_url=\n"
        "port=8901\n",
        encoding="utf-8")
    return {"config": config, "index": index, "model": full_pipeline["model"]}
