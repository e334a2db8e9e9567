"""End-to-end text classifiers: pipeline fitting, evaluation, persistence.

A TextClassifier couples a fitted model with the vocabulary and class names
it was trained against, so a saved model can score new text without access
to the training corpus. The JSON document format is versioned; loading
validates shapes through the model constructors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import models, text
from .corpora import LabeledCorpus
from .errors import DataError
from .metrics import (
    PredictionRecord,
    accuracy,
    entropy_score,
    hard_confusion_matrix,
    prob_confusion_matrix,
    purity,
)
from .simplex import Distribution

FORMAT_NAME = "confidex-model"
FORMAT_VERSION = 1

# Which parameter arrays each kind persists, in document key order.
_PARAM_FIELDS = {
    "bernoulli": ("phi", "psi"),
    "complement_bernoulli": ("tilde_phi", "tilde_psi"),
    "multinomial": ("log_theta", "log_priors"),
    "complement_multinomial": ("weights", "log_priors"),
}

_MODEL_TYPES = {
    "bernoulli": models.BernoulliNB,
    "complement_bernoulli": models.ComplementBernoulliNB,
    "multinomial": models.MultinomialNB,
    "complement_multinomial": models.ComplementMultinomialNB,
}


@dataclass(frozen=True)
class TextClassifier:
    """A fitted model plus the text pipeline state needed to apply it."""

    model: models.Model
    vocabulary: text.Vocabulary
    class_names: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "class_names", tuple(self.class_names))
        if len(self.class_names) != self.model.n_classes:
            raise DataError(
                f"{len(self.class_names)} class names for a model over {self.model.n_classes} classes"
            )
        if len(self.vocabulary) != self.model.vocab_size:
            raise DataError(
                f"vocabulary size {len(self.vocabulary)} does not match the model's {self.model.vocab_size}"
            )

    @property
    def kind(self) -> str:
        return self.model.kind

    @property
    def mode(self) -> str:
        return models.feature_mode(self.model.kind)


def fit_text_classifier(
    corpus: LabeledCorpus,
    kind: str,
    alpha: float = 1.0,
    min_doc_freq: int = 1,
    **fit_kwargs,
) -> TextClassifier:
    """Tokenize, build the vocabulary, vectorize, and fit in one step."""
    tokens = [text.tokenize(doc) for doc in corpus.documents]
    vocab = text.build_vocabulary(tokens, min_doc_freq=min_doc_freq)
    data = text.vectorize(
        tokens, vocab, models.feature_mode(kind), labels=corpus.labels, n_classes=corpus.n_classes
    )
    model = models.fit_model(kind, data, alpha, **fit_kwargs)
    return TextClassifier(model=model, vocabulary=vocab, class_names=corpus.class_names)


def predict_texts(clf: TextClassifier, texts) -> list[Distribution]:
    """Posterior distributions for raw text inputs."""
    rows = text.vectorize_rows([text.tokenize(t) for t in texts], clf.vocabulary, clf.mode)
    probs = models.predict_proba(clf.model, rows)
    return [Distribution(p) for p in probs]


@dataclass(frozen=True)
class EvalReport:
    """Metrics of one classifier over one labeled corpus."""

    accuracy: float
    entropy_score: float
    purity: float
    n_classes: int
    class_names: tuple[str, ...]
    test_counts: tuple[int, ...]
    confusion: np.ndarray | None = None


def records_for(clf: TextClassifier, corpus: LabeledCorpus) -> list[PredictionRecord]:
    """Score a labeled corpus into prediction records.

    The corpus must carry exactly the classifier's classes, in order;
    anything else would silently misalign rows and labels.
    """
    if tuple(corpus.class_names) != clf.class_names:
        raise DataError(
            f"corpus classes {corpus.class_names!r} do not match the model's {clf.class_names!r}"
        )
    probs = models.predict_proba(
        clf.model,
        text.vectorize_rows([text.tokenize(d) for d in corpus.documents], clf.vocabulary, clf.mode),
    )
    return [
        PredictionRecord(true_class=int(label), predicted=Distribution(p))
        for label, p in zip(corpus.labels, probs)
    ]


def evaluate_classifier(
    clf: TextClassifier, corpus: LabeledCorpus, include_confusion: bool = False
) -> EvalReport:
    """Accuracy, entropy score, and purity of a classifier on a corpus."""
    records = records_for(clf, corpus)
    n = clf.model.n_classes
    prob_matrix = prob_confusion_matrix(records, n)
    return EvalReport(
        accuracy=accuracy(records),
        entropy_score=entropy_score(records),
        purity=purity(prob_matrix),
        n_classes=n,
        class_names=clf.class_names,
        test_counts=tuple(corpus.supports()),
        confusion=hard_confusion_matrix(records, n) if include_confusion else None,
    )


def classifier_to_document(clf: TextClassifier) -> dict:
    """Serialize to a JSON-ready dict; arrays become nested lists."""
    model = clf.model
    params = {field: np.asarray(getattr(model, field)).tolist() for field in _PARAM_FIELDS[model.kind]}
    if model.kind == "complement_multinomial":
        params["normalized"] = model.normalized
    return {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "alpha": model.alpha,
        "n_classes": model.n_classes,
        "vocab_size": model.vocab_size,
        "class_names": list(clf.class_names),
        "vocabulary": list(clf.vocabulary.tokens),
        "params": params,
    }


def classifier_from_document(doc) -> TextClassifier:
    """Rebuild a classifier from its document, validating the format."""
    if not isinstance(doc, dict):
        raise DataError(f"model document must be an object, got {type(doc).__name__}")
    if doc.get("format") != FORMAT_NAME:
        raise DataError(f"not a {FORMAT_NAME} document (format = {doc.get('format')!r})")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DataError(
            f"unsupported format version {doc.get('format_version')!r}, this build reads {FORMAT_VERSION}"
        )
    kind = doc.get("kind")
    if kind not in _MODEL_TYPES:
        raise DataError(f"unknown model kind {kind!r}")
    required = ("alpha", "class_names", "vocabulary", "params", "n_classes", "vocab_size")
    missing = [key for key in required if key not in doc]
    if missing:
        raise DataError(f"model document is missing key {missing[0]!r}")
    params = doc["params"]
    if not isinstance(params, dict):
        raise DataError("params must be an object")
    kwargs = {}
    for field in _PARAM_FIELDS[kind]:
        if field not in params:
            raise DataError(f"params is missing {field!r} for kind {kind!r}")
        kwargs[field] = np.asarray(params[field], dtype=np.float64)
    if kind == "complement_multinomial":
        kwargs["normalized"] = bool(params.get("normalized", False))
    model = _MODEL_TYPES[kind](alpha=float(doc["alpha"]), **kwargs)
    if model.n_classes != doc["n_classes"] or model.vocab_size != doc["vocab_size"]:
        raise DataError("declared n_classes/vocab_size do not match the parameter shapes")
    vocab = text.Vocabulary(doc["vocabulary"])
    return TextClassifier(model=model, vocabulary=vocab, class_names=tuple(doc["class_names"]))


def save_classifier(clf: TextClassifier, path) -> None:
    """Write the JSON document. -inf parameters round-trip as -Infinity."""
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(classifier_to_document(clf), handle)
        handle.write("\n")


def load_classifier(path) -> TextClassifier:
    file = Path(path)
    if not file.is_file():
        raise DataError(f"model file {file} does not exist")
    try:
        with open(file, encoding="utf-8") as handle:
            doc = json.load(handle)
    except json.JSONDecodeError as exc:
        raise DataError(f"model file {file} is not valid JSON: {exc}") from exc
    return classifier_from_document(doc)
