"""Cross-validated experiment harness over the feature/representation/classifier grid.

A FeaturePipeline preprocesses the corpus once and caches per-family bags,
so a grid of many configurations pays the extraction cost per family, not
per cell. Reports carry per-fold and mean accuracy plus supplementary
precision/recall.
"""

from __future__ import annotations

import hashlib
import json
import random
import time
import warnings
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Sequence

from . import linear_svm, naive_bayes
from .corpus import Corpus, N_FOLDS
from .errors import ConfigError, DataError
from .features import FeatureBag, FeatureFamily, FeatureSpec, extract_ngrams, parse_feature_spec
from .features import extract_adjectives, extract_adjadv_bigrams, extract_adjadv_trigrams
from .features import extract_polarized_bigrams, extract_polarized_unigrams, extract_transitions
from .lexicon import SubjectivityLexicon, TransitionList
from .preprocess import Document, PreprocessConfig, preprocess_document
from .vectorize import Representation, build_vocabulary, vectorize

CLASSIFIERS = ("nb", "svm")
PRUNE_SCOPES = ("fold", "corpus")


def parse_representation(value) -> Representation:
    if isinstance(value, Representation):
        return value
    try:
        return Representation(str(value).lower())
    except ValueError:
        raise ConfigError(f"unknown representation {value!r} (expected 'presence' or 'frequency')")


@dataclass(frozen=True)
class ExperimentConfig:
    """One grid cell: what to extract, how to represent it, what to train."""

    features: str
    representation: Representation
    classifier: str
    negation: bool = False
    prune_scope: str = "fold"
    seed: int = 0
    min_count: int = 5
    C: float | None = None
    tol: float = 1e-3
    max_epochs: int = 1000

    def __post_init__(self):
        if self.classifier not in CLASSIFIERS:
            raise ConfigError(f"unknown classifier {self.classifier!r} (expected 'nb' or 'svm')")
        if self.prune_scope not in PRUNE_SCOPES:
            raise ConfigError(f"unknown prune scope {self.prune_scope!r} (expected 'fold' or 'corpus')")
        object.__setattr__(self, "representation", parse_representation(self.representation))
        # Normalizes the family string and rejects unknown tokens up front.
        object.__setattr__(self, "features", self.spec().canonical())

    def spec(self) -> FeatureSpec:
        return parse_feature_spec(self.features, negation=self.negation)

    def to_json_dict(self) -> dict:
        return {
            "features": self.features,
            "representation": self.representation.value,
            "classifier": self.classifier,
            "negation": self.negation,
            "prune_scope": self.prune_scope,
            "seed": self.seed,
            "min_count": self.min_count,
            "C": self.C,
            "tol": self.tol,
            "max_epochs": self.max_epochs,
        }

    def hash(self) -> str:
        blob = json.dumps(self.to_json_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:12]


@dataclass
class EvalReport:
    config: ExperimentConfig
    fold_accuracies: list[float]
    mean_accuracy: float
    feature_count: int
    wall_time: float
    precision: float = 0.0
    recall: float = 0.0
    warnings: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "config_hash": self.config.hash(),
            "config": self.config.to_json_dict(),
            "fold_accuracies": self.fold_accuracies,
            "mean_accuracy": self.mean_accuracy,
            "feature_count": self.feature_count,
            "precision": self.precision,
            "recall": self.recall,
            "wall_time": self.wall_time,
            "warnings": self.warnings,
        }


class FeaturePipeline:
    """Shared preprocessing plus per-family feature-bag cache for one corpus.

    Documents are preprocessed once with negation tagging on; the negated and
    plain unigram variants are both recoverable from the same tokens, so every
    grid cell reuses the cache regardless of its negation flag.
    """

    def __init__(self, corpus: Corpus,
                 lexicon: SubjectivityLexicon | None = None,
                 transitions: TransitionList | None = None,
                 preprocess_cfg: PreprocessConfig | None = None):
        self.corpus = corpus
        self.lexicon = lexicon
        self.transitions = transitions
        cfg = preprocess_cfg or PreprocessConfig()
        if not cfg.apply_negation:
            cfg = replace(cfg, apply_negation=True)
        self.preprocess_cfg = cfg
        self._documents: list[Document] | None = None
        self._family_bags: dict[tuple, list[FeatureBag]] = {}

    @property
    def documents(self) -> list[Document]:
        if self._documents is None:
            self._documents = [
                preprocess_document(doc, self.preprocess_cfg) for doc in self.corpus.documents
            ]
        return self._documents

    def labels(self) -> list[int]:
        return [doc.label.sign for doc in self.corpus.documents]

    def family_bags(self, family: FeatureFamily, negation_variant: bool = False) -> list[FeatureBag]:
        neg = negation_variant and family is FeatureFamily.UNIGRAM
        key = (family, neg)
        if key in self._family_bags:
            return self._family_bags[key]

        docs = self.documents
        if family is FeatureFamily.UNIGRAM:
            bags = [extract_ngrams(d, 1, keep_negation_prefix=neg) for d in docs]
        elif family is FeatureFamily.BIGRAM:
            bags = [extract_ngrams(d, 2) for d in docs]
        elif family is FeatureFamily.TRIGRAM:
            bags = [extract_ngrams(d, 3) for d in docs]
        elif family is FeatureFamily.ADJECTIVE:
            bags = [extract_adjectives(d) for d in docs]
        elif family is FeatureFamily.ADJADV_BIGRAM:
            bags = [extract_adjadv_bigrams(d) for d in docs]
        elif family is FeatureFamily.ADJADV_TRIGRAM:
            bags = [extract_adjadv_trigrams(d) for d in docs]
        elif family is FeatureFamily.POLARIZED_UNIGRAM:
            self._require_lexicon(family)
            bags = [extract_polarized_unigrams(d, self.lexicon) for d in docs]
        elif family is FeatureFamily.POLARIZED_BIGRAM:
            self._require_lexicon(family)
            bags = [extract_polarized_bigrams(d, self.lexicon) for d in docs]
        elif family is FeatureFamily.TRANSITION:
            self._require_lexicon(family)
            if self.transitions is None:
                raise ConfigError("transition features require a transition list")
            bags = [extract_transitions(d, self.transitions, self.lexicon) for d in docs]
        else:  # pragma: no cover
            raise ConfigError(f"unhandled family {family}")
        self._family_bags[key] = bags
        return bags

    def _require_lexicon(self, family: FeatureFamily) -> None:
        if self.lexicon is None:
            raise ConfigError(f"{family.value} features require a subjectivity lexicon")

    def bags_for_spec(self, spec: FeatureSpec) -> list[FeatureBag]:
        per_family = [
            self.family_bags(f, spec.negation_variant) for f in FeatureFamily if f in spec.families
        ]
        merged = []
        for i in range(len(self.corpus.documents)):
            bag: FeatureBag = FeatureBag()
            for bags in per_family:
                bag.update(bags[i])
            merged.append(bag)
        return merged


def _train_model(config: ExperimentConfig, train_vecs, vocab_size: int):
    caught: list[str] = []
    if config.classifier == "nb":
        model = naive_bayes.train_nb(train_vecs, vocab_size=vocab_size)
    else:
        with warnings.catch_warnings(record=True) as wlist:
            warnings.simplefilter("always")
            model = linear_svm.train_svm(
                train_vecs, C=config.C, tol=config.tol,
                max_epochs=config.max_epochs, n_features=vocab_size,
            )
        caught = [str(w.message) for w in wlist]
    return model, caught


def _predict(config: ExperimentConfig, model, vectors) -> list[int]:
    predict = naive_bayes.predict_nb if config.classifier == "nb" else linear_svm.predict_svm
    return [predict(model, v)[0] for v in vectors]


def _fit_fold(config: ExperimentConfig, bags, labels, folds, fold, corpus_vocab=None):
    """Build the fold's vocabulary and train on the other four folds."""
    train_idx = [i for i, f in enumerate(folds) if f != fold]
    test_idx = [i for i, f in enumerate(folds) if f == fold]
    if not train_idx or not test_idx:
        raise DataError(f"fold {fold} leaves an empty train or test split")
    vocab = corpus_vocab or build_vocabulary(
        (bags[i] for i in train_idx), min_count=config.min_count
    )
    rep = config.representation
    train_vecs = [vectorize(bags[i], vocab, rep, label=labels[i]) for i in train_idx]
    model, caught = _train_model(config, train_vecs, len(vocab))
    return model, vocab, train_idx, test_idx, caught


def train_fold_model(corpus: Corpus, config: ExperimentConfig, fold: int,
                     lexicon: SubjectivityLexicon | None = None,
                     transitions: TransitionList | None = None,
                     pipeline: FeaturePipeline | None = None):
    """Train the model a cross-validation run would use for one held-out fold.

    Returns (model, vocabulary). The held-out fold's documents contribute to
    neither (under prune_scope="fold"), which the no-leakage test asserts.
    """
    if not corpus.folds:
        raise ConfigError("corpus has no fold assignment; call assign_folds first")
    if pipeline is None:
        pipeline = FeaturePipeline(corpus, lexicon=lexicon, transitions=transitions)
    bags = pipeline.bags_for_spec(config.spec())
    labels = pipeline.labels()
    folds = [corpus.folds[doc.id] for doc in corpus.documents]
    corpus_vocab = None
    if config.prune_scope == "corpus":
        corpus_vocab = build_vocabulary(bags, min_count=config.min_count)
    model, vocab, _, _, _ = _fit_fold(config, bags, labels, folds, fold, corpus_vocab)
    return model, vocab


def run_experiment(corpus: Corpus, config: ExperimentConfig,
                   lexicon: SubjectivityLexicon | None = None,
                   transitions: TransitionList | None = None,
                   pipeline: FeaturePipeline | None = None,
                   labels_override: Sequence[int] | None = None) -> EvalReport:
    """Five-fold cross-validate one configuration.

    Each fold trains on the other four; with prune_scope="fold" the
    vocabulary is rebuilt from training documents only, with "corpus" it is
    counted once over all documents (the replication setting).
    """
    if not corpus.folds:
        raise ConfigError("corpus has no fold assignment; call assign_folds first")
    if pipeline is None:
        pipeline = FeaturePipeline(corpus, lexicon=lexicon, transitions=transitions)

    start = time.perf_counter()
    spec = config.spec()
    bags = pipeline.bags_for_spec(spec)
    labels = list(labels_override) if labels_override is not None else pipeline.labels()
    folds = [corpus.folds[doc.id] for doc in corpus.documents]
    rep = config.representation

    corpus_vocab = None
    if config.prune_scope == "corpus":
        corpus_vocab = build_vocabulary(bags, min_count=config.min_count)

    fold_accuracies: list[float] = []
    vocab_sizes: list[int] = []
    caught: list[str] = []
    tp = fp = fn = 0
    for k in range(N_FOLDS):
        model, vocab, _, test_idx, fold_warnings = _fit_fold(
            config, bags, labels, folds, k, corpus_vocab
        )
        vocab_sizes.append(len(vocab))
        caught += [f"fold {k}: {msg}" for msg in fold_warnings]

        test_vecs = [vectorize(bags[i], vocab, rep, label=labels[i]) for i in test_idx]
        predictions = _predict(config, model, test_vecs)

        correct = sum(p == labels[i] for p, i in zip(predictions, test_idx))
        fold_accuracies.append(correct / len(test_idx))
        for p, i in zip(predictions, test_idx):
            if p == 1 and labels[i] == 1:
                tp += 1
            elif p == 1:
                fp += 1
            elif labels[i] == 1:
                fn += 1

    mean_acc = sum(fold_accuracies) / len(fold_accuracies)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    return EvalReport(
        config=config,
        fold_accuracies=fold_accuracies,
        mean_accuracy=mean_acc,
        feature_count=round(sum(vocab_sizes) / len(vocab_sizes)),
        wall_time=time.perf_counter() - start,
        precision=precision,
        recall=recall,
        warnings=caught,
    )


def run_label_shuffled_control(corpus: Corpus, config: ExperimentConfig,
                               lexicon: SubjectivityLexicon | None = None,
                               transitions: TransitionList | None = None,
                               pipeline: FeaturePipeline | None = None) -> EvalReport:
    """Re-run an experiment with labels permuted by config.seed (chance baseline)."""
    if pipeline is None:
        pipeline = FeaturePipeline(corpus, lexicon=lexicon, transitions=transitions)
    labels = pipeline.labels()
    random.Random(config.seed).shuffle(labels)
    return run_experiment(corpus, config, pipeline=pipeline, labels_override=labels)


def run_grid(corpus: Corpus, configs: Sequence[ExperimentConfig],
             lexicon: SubjectivityLexicon | None = None,
             transitions: TransitionList | None = None,
             pipeline: FeaturePipeline | None = None,
             results_path: str | Path | None = None,
             progress: Callable[[str], None] | None = None,
             jobs: int = 1) -> tuple[list[EvalReport], list[dict]]:
    """Run every configuration, isolating per-cell failures.

    Completed reports are appended to *results_path* (JSON lines) as they
    finish, so partial grids survive interruption. Returns (reports, errors).
    """
    if not configs:
        raise ConfigError("empty configuration list")
    if pipeline is None:
        pipeline = FeaturePipeline(corpus, lexicon=lexicon, transitions=transitions)

    reports: list[EvalReport] = []
    errors: list[dict] = []
    sink = open(results_path, "a", encoding="utf-8") if results_path else None
    try:
        for result in _map_cells(corpus, configs, pipeline, jobs):
            cfg, report, error = result
            if progress:
                status = f"{report.mean_accuracy:.3f}" if report else f"error: {error}"
                progress(f"[{cfg.hash()}] {cfg.features} neg={cfg.negation} "
                         f"{cfg.representation.value} {cfg.classifier}: {status}")
            if report:
                reports.append(report)
                if sink:
                    sink.write(json.dumps(report.to_json_dict(), sort_keys=True) + "\n")
                    sink.flush()
            else:
                errors.append({"config": cfg.to_json_dict(), "error": error})
    finally:
        if sink:
            sink.close()
    return reports, errors


def _run_cell(corpus, config, pipeline):
    try:
        return config, run_experiment(corpus, config, pipeline=pipeline), None
    except (ConfigError, DataError) as exc:
        return config, None, str(exc)


# Shared state inherited by forked grid workers; set just before the fork.
_FORK_STATE: dict = {}


def _run_cell_forked(config):
    return _run_cell(_FORK_STATE["corpus"], config, _FORK_STATE["pipeline"])


def _map_cells(corpus, configs, pipeline, jobs):
    if jobs > 1:
        import multiprocessing as mp

        try:
            ctx = mp.get_context("fork")
        except ValueError:
            ctx = None
        if ctx is not None:
            # Warm the shared caches before forking so workers inherit them.
            for cfg in configs:
                for family in FeatureFamily:
                    if family in cfg.spec().families:
                        pipeline.family_bags(family, cfg.negation)
            _FORK_STATE["corpus"] = corpus
            _FORK_STATE["pipeline"] = pipeline
            try:
                with ctx.Pool(processes=jobs) as pool:
                    yield from pool.imap(_run_cell_forked, configs)
                return
            finally:
                _FORK_STATE.clear()
    for config in configs:
        yield _run_cell(corpus, config, pipeline)


def emit_report(reports: Sequence[EvalReport], format: str = "json",
                path: str | Path | None = None) -> str:
    """Render reports as versioned JSON, the flat CSV schema, or a result grid
    in Markdown (best cell per row bolded). Optionally writes to *path*."""
    if format == "json":
        text = json.dumps(
            {"schema_version": 1, "reports": [r.to_json_dict() for r in reports]},
            indent=2, sort_keys=True,
        )
    elif format == "csv":
        text = reports_to_csv(reports)
    elif format == "markdown":
        text = reports_to_markdown(reports)
    else:
        raise ConfigError(f"unknown report format {format!r} (expected json, csv, or markdown)")
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


CSV_HEADER = "config_hash,features,negation,representation,classifier,fold0,fold1,fold2,fold3,fold4,mean,feature_count"


def reports_to_csv(reports: Sequence[EvalReport]) -> str:
    lines = [CSV_HEADER]
    for r in reports:
        c = r.config
        folds = ",".join(f"{a:.6f}" for a in r.fold_accuracies)
        lines.append(
            f"{c.hash()},{c.features},{str(c.negation).lower()},{c.representation.value},"
            f"{c.classifier},{folds},{r.mean_accuracy:.6f},{r.feature_count}"
        )
    return "\n".join(lines) + "\n"


_COLUMNS = [("nb", Representation.PRESENCE), ("nb", Representation.FREQUENCY),
            ("svm", Representation.PRESENCE), ("svm", Representation.FREQUENCY)]


def _row_label(config: ExperimentConfig) -> str:
    return f"{config.features}{' (neg)' if config.negation else ''}"


def reports_to_markdown(reports: Sequence[EvalReport]) -> str:
    rows: dict[str, dict] = {}
    for r in reports:
        row = rows.setdefault(_row_label(r.config), {"count": r.feature_count})
        row[(r.config.classifier, r.config.representation)] = r.mean_accuracy
        row["count"] = max(row["count"], r.feature_count)

    lines = [
        "| Features | # features | NB presence | NB frequency | SVM presence | SVM frequency |",
        "|---|---|---|---|---|---|",
    ]
    for label, cells in rows.items():
        values = [cells.get(col) for col in _COLUMNS]
        present = [v for v in values if v is not None]
        best = max(present) if present else None
        rendered = []
        for v in values:
            if v is None:
                rendered.append("--")
            elif best is not None and abs(v - best) < 5e-7:
                rendered.append(f"**{v:.3f}**")
            else:
                rendered.append(f"{v:.3f}")
        lines.append(f"| {label} | {cells['count']} | " + " | ".join(rendered) + " |")
    return "\n".join(lines) + "\n"
