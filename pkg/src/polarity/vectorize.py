"""Vocabulary construction with frequency pruning, and sparse document vectors.

File formats:
  vectors   svmlight-compatible text, one document per line:
            ``<label> <id>:<value> ...`` with ascending 1-based ids,
            ``+1``/``-1`` labels (``0`` marks an unlabeled vector) and
            ``#``-prefixed comment lines.
  vocabulary ``feature<TAB>id`` lines, ids 0-based as used in memory.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import DataError
from .features import FeatureBag


class Representation(Enum):
    PRESENCE = "presence"
    FREQUENCY = "frequency"


@dataclass
class Vocabulary:
    """Dense 0-based feature ids, lexicographically assigned."""

    index: dict[str, int]
    min_count: int = 1

    @property
    def total_features(self) -> int:
        return len(self.index)

    def __len__(self) -> int:
        return len(self.index)

    def __contains__(self, feature: str) -> bool:
        return feature in self.index


@dataclass
class SparseVector:
    """Sorted (id, value) pairs; zero values are never stored."""

    ids: np.ndarray
    values: np.ndarray
    label: int | None = None

    def __post_init__(self):
        self.ids = np.asarray(self.ids, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)

    def pairs(self) -> list[tuple[int, float]]:
        return list(zip(self.ids.tolist(), self.values.tolist()))

    def norm_sq(self) -> float:
        return float(np.dot(self.values, self.values))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseVector)
            and self.label == other.label
            and np.array_equal(self.ids, other.ids)
            and np.array_equal(self.values, other.values)
        )


def build_vocabulary(train_bags: Iterable[FeatureBag], min_count: int = 5) -> Vocabulary:
    """Keep every feature whose summed count over *train_bags* is >= min_count.

    "Lower than 5" is the removal rule, so a feature seen exactly 5 times
    stays in.
    """
    totals: Counter = Counter()
    for bag in train_bags:
        totals.update(bag)
    kept = sorted(f for f, c in totals.items() if c >= min_count)
    if not kept:
        raise DataError(f"no feature reaches the count threshold {min_count}; vocabulary is empty")
    return Vocabulary(index={f: i for i, f in enumerate(kept)}, min_count=min_count)


def vectorize(bag: FeatureBag, vocab: Vocabulary, rep: Representation,
              label: int | None = None) -> SparseVector:
    """Map a bag to a sparse vector; out-of-vocabulary features drop silently."""
    pairs = sorted((vocab.index[f], c) for f, c in bag.items() if f in vocab.index)
    ids = np.fromiter((p[0] for p in pairs), dtype=np.int64, count=len(pairs))
    if rep is Representation.PRESENCE:
        values = np.ones(len(pairs), dtype=np.float64)
    else:
        values = np.fromiter((p[1] for p in pairs), dtype=np.float64, count=len(pairs))
    return SparseVector(ids=ids, values=values, label=label)


def _format_value(value: float) -> str:
    return str(int(value)) if float(value).is_integer() else repr(float(value))


def _format_label(label: int | None) -> str:
    if label is None:
        return "0"
    return "+1" if label > 0 else "-1"


def write_svmlight(vectors: Iterable[SparseVector], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for vec in vectors:
            parts = [_format_label(vec.label)]
            parts += [f"{i + 1}:{_format_value(v)}" for i, v in vec.pairs()]
            fh.write(" ".join(parts) + "\n")


def read_svmlight(path: str | Path) -> list[SparseVector]:
    vectors: list[SparseVector] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            try:
                raw_label = int(fields[0])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad label {fields[0]!r}") from exc
            label = None if raw_label == 0 else (1 if raw_label > 0 else -1)
            ids: list[int] = []
            values: list[float] = []
            prev = 0
            for field in fields[1:]:
                id_str, _, val_str = field.partition(":")
                try:
                    fid = int(id_str)
                    val = float(val_str)
                except ValueError as exc:
                    raise DataError(f"{path}:{lineno}: bad pair {field!r}") from exc
                if fid <= prev:
                    raise DataError(f"{path}:{lineno}: ids must be ascending and 1-based")
                prev = fid
                if val != 0.0:
                    ids.append(fid - 1)
                    values.append(val)
            vectors.append(SparseVector(ids=np.array(ids, dtype=np.int64),
                                        values=np.array(values, dtype=np.float64),
                                        label=label))
    return vectors


def write_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for feature, fid in sorted(vocab.index.items(), key=lambda kv: kv[1]):
            fh.write(f"{feature}\t{fid}\n")


def read_vocabulary(path: str | Path, min_count: int = 1) -> Vocabulary:
    index: dict[str, int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            feature, _, fid = line.rstrip("\n").rpartition("\t")
            if not feature:
                raise DataError(f"{path}:{lineno}: bad vocabulary line")
            index[feature] = int(fid)
    return Vocabulary(index=index, min_count=min_count)
