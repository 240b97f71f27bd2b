"""Shared fixtures: a synthetic labeled corpus on disk, a tiny subjectivity
lexicon, and helpers for locating the real dataset when available."""

from __future__ import annotations

import os
import random
from pathlib import Path

import pytest

from polarity.corpus import assign_folds, load_corpus
from polarity.lexicon import LexiconEntry, Polarity, SubjectivityLexicon

DATASET_ENV = "POLARITY_DATA_DIR"
LEXICON_ENV = "POLARITY_LEXICON"

POSITIVE_WORDS = [
    "good", "great", "excellent", "wonderful", "superb", "fantastic",
    "amazing", "brilliant", "enjoyable", "fun",
]
NEGATIVE_WORDS = [
    "bad", "awful", "terrible", "horrible", "boring", "dull",
    "lame", "stupid", "poor", "bland",
]
FILLER_WORDS = [
    "the", "movie", "film", "plot", "actor", "scene", "director",
    "story", "it", "is", "a", "with", "and", "has", "ending",
]


def real_corpus_root() -> Path | None:
    root = os.environ.get(DATASET_ENV)
    if root and (Path(root) / "pos").is_dir() and (Path(root) / "neg").is_dir():
        return Path(root)
    return None


def real_lexicon_path() -> Path | None:
    path = os.environ.get(LEXICON_ENV)
    if path and Path(path).is_file():
        return Path(path)
    return None


requires_dataset = pytest.mark.skipif(
    real_corpus_root() is None,
    reason=f"movie-review corpus not found; point ${DATASET_ENV} at the pos/neg root",
)

requires_lexicon = pytest.mark.skipif(
    real_lexicon_path() is None,
    reason=f"subjectivity clues file not found; point ${LEXICON_ENV} at it",
)


def write_synthetic_corpus(root: Path, docs_per_label: int = 50, seed: int = 13) -> Path:
    """A small labeled corpus with enough lexical signal to classify well.

    File names follow the cvNNN convention with NNN spread over 0..999 so the
    filename fold mode stays balanced.
    """
    rng = random.Random(seed)
    for label, class_words in (("pos", POSITIVE_WORDS), ("neg", NEGATIVE_WORDS)):
        other = NEGATIVE_WORDS if label == "pos" else POSITIVE_WORDS
        subdir = root / label
        subdir.mkdir(parents=True, exist_ok=True)
        for i in range(docs_per_label):
            lines = []
            for _ in range(rng.randint(3, 6)):
                words = rng.choices(FILLER_WORDS, k=rng.randint(4, 9))
                words += rng.choices(class_words, k=rng.randint(1, 3))
                if rng.random() < 0.15:
                    words.append(rng.choice(other))
                if rng.random() < 0.2:
                    words.insert(rng.randrange(len(words)), "not")
                rng.shuffle(words)
                line = " ".join(words)
                if rng.random() < 0.3:
                    line += " !"
                lines.append(line)
            nnn = (i % 5) * 200 + i // 5  # cycles the cvNNN folds evenly
            (subdir / f"cv{nnn:03d}_{rng.randint(10000, 99999)}.txt").write_text(
                "\n".join(lines) + "\n", encoding="utf-8"
            )
    return root


@pytest.fixture(scope="session")
def synth_corpus_dir(tmp_path_factory) -> Path:
    return write_synthetic_corpus(tmp_path_factory.mktemp("corpus"))


@pytest.fixture(scope="session")
def synth_corpus(synth_corpus_dir):
    return assign_folds(load_corpus(synth_corpus_dir), mode="filename")


@pytest.fixture()
def tiny_lexicon() -> SubjectivityLexicon:
    entries = {w: [LexiconEntry(Polarity.POS, "any")] for w in POSITIVE_WORDS}
    entries.update({w: [LexiconEntry(Polarity.NEG, "any")] for w in NEGATIVE_WORDS})
    entries["love"] = [LexiconEntry(Polarity.POS, "verb")]
    entries["recommend"] = [LexiconEntry(Polarity.POS, "verb")]
    entries["famous"] = [LexiconEntry(Polarity.POS, "adj")]
    return SubjectivityLexicon(entries=entries)


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL/SKIP line per acceptance criterion."""
    if "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call":
        outcome = "PASS" if report.passed else "FAIL"
        print(f"\nACCEPTANCE {name}: {outcome}")
    elif report.when == "setup" and report.skipped:
        print(f"\nACCEPTANCE {name}: SKIP ({report.longrepr[2] if report.longrepr else ''})")
