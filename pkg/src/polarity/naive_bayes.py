"""Multinomial Naive Bayes with add-one smoothing.

Scores a document by log P(c) + sum of value * log P(f|c) over its stored
features; the same trainer serves presence runs (binarized values) and
frequency runs (raw counts). All arithmetic stays in log space.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import log
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .vectorize import SparseVector

LABELS = (1, -1)

MODEL_FORMAT = "polarity-nb/1"


@dataclass
class NaiveBayesModel:
    class_log_prior: dict[int, float]
    feature_log_likelihood: dict[int, np.ndarray]
    vocab_size: int

    def save(self, path: str | Path) -> None:
        payload = {
            "format": MODEL_FORMAT,
            "vocab_size": self.vocab_size,
            "class_log_prior": {str(c): p for c, p in self.class_log_prior.items()},
            "feature_log_likelihood": {
                str(c): arr.tolist() for c, arr in self.feature_log_likelihood.items()
            },
        }
        Path(path).write_text(json.dumps(payload), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "NaiveBayesModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("format") != MODEL_FORMAT:
            raise DataError(f"{path}: not a {MODEL_FORMAT} model file")
        return cls(
            class_log_prior={int(c): float(p) for c, p in payload["class_log_prior"].items()},
            feature_log_likelihood={
                int(c): np.asarray(arr, dtype=np.float64)
                for c, arr in payload["feature_log_likelihood"].items()
            },
            vocab_size=int(payload["vocab_size"]),
        )


def train_nb(vectors: Sequence[SparseVector], vocab_size: int | None = None) -> NaiveBayesModel:
    """Fit priors and smoothed per-class feature likelihoods.

    P(c) is the class document fraction; P(f|c) = (count(f, c) + 1) /
    (total feature mass in c + V). Presence vectors therefore contribute
    binarized counts, frequency vectors raw ones.
    """
    if vocab_size is None:
        vocab_size = max((int(v.ids[-1]) + 1 for v in vectors if len(v.ids)), default=0)
    labels = {v.label for v in vectors}
    if None in labels:
        raise DataError("every training vector needs a label")
    if labels != set(LABELS):
        raise DataError(f"training set must contain both classes, got labels {sorted(labels)}")

    counts = {c: np.zeros(vocab_size, dtype=np.float64) for c in LABELS}
    docs = {c: 0 for c in LABELS}
    for vec in vectors:
        docs[vec.label] += 1
        np.add.at(counts[vec.label], vec.ids, vec.values)

    total_docs = len(vectors)
    prior = {c: log(docs[c] / total_docs) for c in LABELS}
    likelihood = {}
    for c in LABELS:
        if vocab_size == 0:
            likelihood[c] = np.zeros(0, dtype=np.float64)
            continue
        mass = counts[c].sum()
        likelihood[c] = np.log(counts[c] + 1.0) - log(mass + vocab_size)
    return NaiveBayesModel(class_log_prior=prior, feature_log_likelihood=likelihood,
                           vocab_size=vocab_size)


def _score(model: NaiveBayesModel, vector: SparseVector, label: int) -> float:
    loglik = model.feature_log_likelihood[label]
    ids = vector.ids
    values = vector.values
    if len(ids) and int(ids[-1]) >= model.vocab_size:
        keep = ids < model.vocab_size
        ids, values = ids[keep], values[keep]
    return model.class_log_prior[label] + float(np.dot(values, loglik[ids]))


def predict_nb(model: NaiveBayesModel, vector: SparseVector) -> tuple[int, float]:
    """(label, log-odds) for one vector; a tie goes to the positive class."""
    log_odds = _score(model, vector, 1) - _score(model, vector, -1)
    return (1 if log_odds >= 0 else -1), log_odds


def predict_many_nb(model: NaiveBayesModel, vectors: Iterable[SparseVector]) -> list[int]:
    return [predict_nb(model, v)[0] for v in vectors]
