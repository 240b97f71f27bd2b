"""Linear soft-margin SVM trained by sequential minimal optimization.

Solves the L1-loss dual with the bias equality constraint, picking the
maximal violating pair at each step (gradient kept up to date in O(n)).
The Gram matrix is materialized densely, which is comfortable up to a few
thousand training documents. The intercept is explicit, not an appended
constant feature.
"""

from __future__ import annotations

import json
import random
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.sparse as sp

from .errors import DataError
from .vectorize import SparseVector

MODEL_FORMAT = "polarity-svm/1"

_SNAP = 1e-12


@dataclass
class SvmTrainingMeta:
    iterations: int = 0
    converged: bool = True
    final_objective: float = 0.0  # primal
    dual_objective: float = 0.0
    duality_gap: float = 0.0
    objective_history: list[float] = field(default_factory=list)  # dual, per epoch
    alphas: np.ndarray | None = None  # training-order dual variables, not serialized


@dataclass
class LinearSvmModel:
    weights: np.ndarray
    bias: float
    C: float
    meta: SvmTrainingMeta

    def save(self, prefix: str | Path) -> tuple[Path, Path]:
        """Write ``<prefix>.json`` metadata plus ``<prefix>.npy`` dense weights."""
        prefix = Path(prefix)
        weights_path = prefix.with_suffix(".npy")
        meta_path = prefix.with_suffix(".json")
        np.save(weights_path, self.weights)
        meta_path.write_text(json.dumps({
            "format": MODEL_FORMAT,
            "bias": self.bias,
            "C": self.C,
            "weights_file": weights_path.name,
            "iterations": self.meta.iterations,
            "converged": self.meta.converged,
            "final_objective": self.meta.final_objective,
            "dual_objective": self.meta.dual_objective,
            "duality_gap": self.meta.duality_gap,
        }), encoding="utf-8")
        return meta_path, weights_path

    @classmethod
    def load(cls, prefix: str | Path) -> "LinearSvmModel":
        prefix = Path(prefix)
        meta_path = prefix if prefix.suffix == ".json" else prefix.with_suffix(".json")
        payload = json.loads(meta_path.read_text(encoding="utf-8"))
        if payload.get("format") != MODEL_FORMAT:
            raise DataError(f"{meta_path}: not a {MODEL_FORMAT} model file")
        weights = np.load(meta_path.parent / payload["weights_file"])
        meta = SvmTrainingMeta(
            iterations=payload["iterations"], converged=payload["converged"],
            final_objective=payload["final_objective"],
            dual_objective=payload["dual_objective"],
            duality_gap=payload["duality_gap"],
        )
        return cls(weights=weights, bias=float(payload["bias"]), C=float(payload["C"]), meta=meta)


def _to_csr(vectors: Sequence[SparseVector], n_features: int | None) -> sp.csr_matrix:
    if n_features is None:
        n_features = max((int(v.ids[-1]) + 1 for v in vectors if len(v.ids)), default=0)
    indptr = np.zeros(len(vectors) + 1, dtype=np.int64)
    for i, v in enumerate(vectors):
        indptr[i + 1] = indptr[i] + len(v.ids)
    indices = np.concatenate([v.ids for v in vectors]) if vectors else np.zeros(0, dtype=np.int64)
    data = np.concatenate([v.values for v in vectors]) if vectors else np.zeros(0)
    return sp.csr_matrix((data, indices, indptr), shape=(len(vectors), max(n_features, 1)))


def default_C(vectors: Sequence[SparseVector]) -> float:
    """The referenced-solver default: 1 / mean squared norm of the training set."""
    if not vectors:
        raise DataError("cannot derive C from an empty training set")
    mean = sum(v.norm_sq() for v in vectors) / len(vectors)
    if mean == 0.0:
        raise DataError("cannot derive C: every training vector is zero")
    return 1.0 / mean


def train_svm(vectors: Sequence[SparseVector], C: float | None = None,
              tol: float = 1e-3, max_epochs: int = 1000,
              n_features: int | None = None,
              shuffle_seed: int | None = None) -> LinearSvmModel:
    """Train to KKT tolerance *tol*; one epoch is n pair updates.

    On hitting the epoch cap a warning is emitted and the best iterate is
    returned with ``meta.converged`` False.
    """
    labels = {v.label for v in vectors}
    if None in labels:
        raise DataError("every training vector needs a label")
    if labels != {1, -1}:
        raise DataError(f"training set must contain both classes, got labels {sorted(labels)}")
    if C is None:
        C = default_C(vectors)
    if C <= 0:
        raise DataError(f"C must be positive, got {C}")

    if shuffle_seed is not None:
        order = list(range(len(vectors)))
        random.Random(shuffle_seed).shuffle(order)
        vectors = [vectors[i] for i in order]

    X = _to_csr(vectors, n_features)
    y = np.array([v.label for v in vectors], dtype=np.float64)
    n = len(vectors)

    K = (X @ X.T).toarray().astype(np.float64)
    diag = K.diagonal().copy()

    alpha = np.zeros(n)
    G = -np.ones(n)  # gradient of (1/2) a'Qa - e'a
    meta = SvmTrainingMeta()
    max_iterations = max_epochs * n

    pos = y > 0
    it = 0
    while True:
        v = -(y * G)
        up = (pos & (alpha < C)) | (~pos & (alpha > 0))
        low = (~pos & (alpha < C)) | (pos & (alpha > 0))
        m_val = np.max(v[up]) if up.any() else -np.inf
        M_val = np.min(v[low]) if low.any() else np.inf
        if m_val - M_val <= tol:
            break
        if it >= max_iterations:
            warnings.warn(
                f"SVM did not reach tol={tol} within {max_epochs} epochs "
                f"(violation {m_val - M_val:.3e}); returning best iterate",
                RuntimeWarning,
            )
            meta.converged = False
            break

        i = int(np.argmax(np.where(up, v, -np.inf)))
        j = int(np.argmin(np.where(low, v, np.inf)))

        a = diag[i] + diag[j] - 2.0 * K[i, j]
        if a <= _SNAP:
            a = _SNAP
        t = (v[i] - v[j]) / a
        # Box feasibility along the pair direction.
        t_max = (C - alpha[i]) if pos[i] else alpha[i]
        t_max = min(t_max, alpha[j] if pos[j] else (C - alpha[j]))
        t = min(t, t_max)

        alpha[i] += y[i] * t
        alpha[j] -= y[j] * t
        for k in (i, j):
            if alpha[k] < _SNAP:
                alpha[k] = 0.0
            elif alpha[k] > C - _SNAP:
                alpha[k] = C
        G += t * y * (K[:, i] - K[:, j])

        it += 1
        if it % n == 0:
            meta.objective_history.append(0.5 * float(alpha @ (G - 1.0)))

    meta.iterations = it
    meta.dual_objective = 0.5 * float(alpha @ (G - 1.0))
    meta.objective_history.append(meta.dual_objective)

    w = np.asarray(X.T @ (alpha * y)).ravel()
    s = np.asarray(X @ w).ravel()
    v = y - s
    up = (pos & (alpha < C)) | (~pos & (alpha > 0))
    low = (~pos & (alpha < C)) | (pos & (alpha > 0))
    m_val = np.max(v[up]) if up.any() else None
    M_val = np.min(v[low]) if low.any() else None
    if m_val is not None and M_val is not None:
        bias = 0.5 * (m_val + M_val)
    else:
        bias = m_val if m_val is not None else (M_val if M_val is not None else 0.0)

    hinge = np.maximum(0.0, 1.0 - y * (s + bias)).sum()
    primal = 0.5 * float(w @ w) + C * float(hinge)
    meta.final_objective = primal
    meta.duality_gap = primal - (-meta.dual_objective)
    meta.alphas = alpha

    return LinearSvmModel(weights=w, bias=float(bias), C=float(C), meta=meta)


def predict_svm(model: LinearSvmModel, vector: SparseVector) -> tuple[int, float]:
    """(label, decision value); a score of exactly zero goes positive."""
    ids = vector.ids
    values = vector.values
    if len(ids) and int(ids[-1]) >= len(model.weights):
        keep = ids < len(model.weights)
        ids, values = ids[keep], values[keep]
    score = float(np.dot(values, model.weights[ids])) + model.bias
    return (1 if score >= 0 else -1), score


def margins(model: LinearSvmModel, vectors: Sequence[SparseVector]) -> np.ndarray:
    """y_i * (w . x_i + b) for every labeled vector, for KKT checks."""
    out = np.empty(len(vectors))
    for k, vec in enumerate(vectors):
        _, score = predict_svm(model, vec)
        out[k] = vec.label * score
    return out
