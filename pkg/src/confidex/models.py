"""Naive Bayes text models: Bernoulli and multinomial, each with a complement variant.

The standard models estimate per-class feature parameters from the documents
of each class; the complement variants estimate them from all documents NOT
in the class, which keeps estimates stable for classes with little data and,
for the Bernoulli pair, spreads posterior mass so that per-feature scores are
proportional to the reciprocal complement probabilities.

All posteriors are computed in log space and normalized with a max-shifted
log-sum-exp, so scores may underflow to -inf without poisoning the result.
With smoothing alpha = 0 some parameters are undefined; fitting raises when
the estimate itself is undefined, prediction raises when every class score
vanishes for an item.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import numpy as np
from scipy import sparse

from .errors import ConfigError, DataError, ModelError
from .simplex import Distribution

MODEL_KINDS = ("bernoulli", "complement_bernoulli", "multinomial", "complement_multinomial")

# Kinds whose event model is feature presence; they require 0/1 matrices.
BINARY_KINDS = frozenset({"bernoulli", "complement_bernoulli"})


def feature_mode(kind: str) -> str:
    """The vectorization mode a model kind consumes: 'binary' or 'counts'."""
    if kind not in MODEL_KINDS:
        raise ConfigError(f"unknown model kind {kind!r}, expected one of {', '.join(MODEL_KINDS)}")
    return "binary" if kind in BINARY_KINDS else "counts"


def _coerce_values(values):
    """Copy feature values to float64, canonical CSR for sparse inputs."""
    if sparse.issparse(values):
        out = sparse.csr_array(values, dtype=np.float64, copy=True)
        out.eliminate_zeros()
        out.data.setflags(write=False)
        return out
    out = np.array(values, dtype=np.float64)
    out.setflags(write=False)
    return out


def _values_data(values) -> np.ndarray:
    return values.data if sparse.issparse(values) else values


@dataclass(frozen=True)
class FeatureMatrix:
    """Document-feature matrix with one integer label per row.

    ``values`` is (n_docs, vocab_size), dense or CSR, with finite
    non-negative entries; ``labels`` holds class indices below ``n_classes``.
    """

    values: object
    labels: np.ndarray
    n_classes: int

    def __post_init__(self) -> None:
        values = _coerce_values(self.values)
        if values.ndim != 2 or values.shape[1] < 1:
            raise DataError(f"values must be 2-d with at least one feature column, got shape {values.shape}")
        data = _values_data(values)
        if not np.all(np.isfinite(data)):
            raise DataError("feature values must be finite")
        if data.size and float(data.min()) < 0.0:
            raise DataError("feature values must be non-negative")
        labels = np.array(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size != values.shape[0]:
            raise DataError(f"labels must be 1-d with one entry per row, got {labels.shape} for {values.shape[0]} rows")
        if not isinstance(self.n_classes, (int, np.integer)) or self.n_classes < 1:
            raise DataError(f"n_classes must be a positive integer, got {self.n_classes!r}")
        if labels.size and (labels.min() < 0 or labels.max() >= self.n_classes):
            raise DataError(f"labels must lie in [0, {self.n_classes})")
        labels.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "n_classes", int(self.n_classes))

    @property
    def n_docs(self) -> int:
        return self.values.shape[0]

    @property
    def vocab_size(self) -> int:
        return self.values.shape[1]

    def class_counts(self) -> np.ndarray:
        """Documents per class, length ``n_classes``."""
        return np.bincount(self.labels, minlength=self.n_classes)

    def is_binary(self) -> bool:
        data = _values_data(self.values)
        return bool(np.all((data == 0.0) | (data == 1.0)))


def _freeze(array, name: str, ndim: int) -> np.ndarray:
    arr = np.array(array, dtype=np.float64)
    if arr.ndim != ndim:
        raise ModelError(f"{name} must be {ndim}-d, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


def _check_shapes(params: np.ndarray, priors: np.ndarray, what: str) -> None:
    m, n = params.shape
    if m < 1 or n < 2:
        raise ModelError(f"{what} needs at least 1 feature and 2 classes, got shape {params.shape}")
    if priors.shape != (n,):
        raise ModelError(f"class parameter length {priors.shape} does not match {n} classes")


@dataclass(frozen=True)
class BernoulliNB:
    """Presence model: ``phi[mu, c]`` = P(feature mu present | class c).

    ``psi`` holds the class priors; ``alpha`` is the smoothing the model was
    fitted with, kept for provenance.
    """

    phi: np.ndarray
    psi: np.ndarray
    alpha: float

    kind: ClassVar[str] = "bernoulli"

    def __post_init__(self) -> None:
        phi = _freeze(self.phi, "phi", 2)
        psi = _freeze(self.psi, "psi", 1)
        _check_shapes(phi, psi, "phi")
        if not np.all(np.isfinite(phi)) or np.any(phi < 0.0) or np.any(phi > 1.0):
            raise ModelError("phi entries must lie in [0, 1]")
        if not np.all(np.isfinite(psi)) or np.any(psi < 0.0) or abs(float(psi.sum()) - 1.0) > 1e-6:
            raise ModelError("psi must be non-negative and sum to 1")
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "psi", psi)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def vocab_size(self) -> int:
        return self.phi.shape[0]

    @property
    def n_classes(self) -> int:
        return self.phi.shape[1]

    @cached_property
    def _logs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        with np.errstate(divide="ignore"):
            return np.log(self.phi), np.log1p(-self.phi), np.log(self.psi)

    def _log_scores(self, X) -> np.ndarray:
        log_phi, log_comp, log_psi = self._logs
        if np.all(np.isfinite(log_phi)) and np.all(np.isfinite(log_comp)):
            # score = log psi_c + sum_mu log(1-phi) + sum_{mu present} (log phi - log(1-phi))
            return log_psi + log_comp.sum(axis=0) + _product_scores(X, log_phi - log_comp)
        # alpha = 0 left zeros or ones in phi; sum present and absent feature
        # terms separately so no 0 * inf forms.
        out = np.empty((X.shape[0], self.n_classes))
        comp_total = log_comp.sum(axis=0)
        for i, idx in enumerate(_row_supports(X)):
            present = log_phi[idx].sum(axis=0) if idx.size else 0.0
            with np.errstate(invalid="ignore"):
                # -inf minus -inf marks classes needing the exact recompute.
                absent = comp_total - log_comp[idx].sum(axis=0) if idx.size else comp_total
            # Recompute rows whose shortcut produced inf - inf.
            bad = ~np.isfinite(absent)
            if np.any(bad & ~np.isneginf(absent)):
                mask = np.ones(self.vocab_size, dtype=bool)
                mask[idx] = False
                absent = log_comp[mask].sum(axis=0)
            out[i] = log_psi + present + absent
        return out


@dataclass(frozen=True)
class ComplementBernoulliNB:
    """Presence model estimated from each class's complement.

    ``tilde_phi[mu, c]`` and ``tilde_psi[c]`` are reciprocal-style weights
    (all >= 1 at alpha = 0); scores sum logs over PRESENT features only, so
    absent features carry no term.
    """

    tilde_phi: np.ndarray
    tilde_psi: np.ndarray
    alpha: float

    kind: ClassVar[str] = "complement_bernoulli"

    def __post_init__(self) -> None:
        tilde_phi = _freeze(self.tilde_phi, "tilde_phi", 2)
        tilde_psi = _freeze(self.tilde_psi, "tilde_psi", 1)
        _check_shapes(tilde_phi, tilde_psi, "tilde_phi")
        if not np.all(np.isfinite(tilde_phi)) or np.any(tilde_phi <= 0.0):
            raise ModelError("tilde_phi entries must be finite and positive")
        if not np.all(np.isfinite(tilde_psi)) or np.any(tilde_psi <= 0.0):
            raise ModelError("tilde_psi entries must be finite and positive")
        object.__setattr__(self, "tilde_phi", tilde_phi)
        object.__setattr__(self, "tilde_psi", tilde_psi)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def vocab_size(self) -> int:
        return self.tilde_phi.shape[0]

    @property
    def n_classes(self) -> int:
        return self.tilde_phi.shape[1]

    @cached_property
    def _logs(self) -> tuple[np.ndarray, np.ndarray]:
        return np.log(self.tilde_phi), np.log(self.tilde_psi)

    def _log_scores(self, X) -> np.ndarray:
        log_phi, log_psi = self._logs
        return log_psi + _product_scores(X, log_phi)


@dataclass(frozen=True)
class MultinomialNB:
    """Word-occurrence model: ``log_theta[mu, c]`` = log P(word mu | class c)."""

    log_theta: np.ndarray
    log_priors: np.ndarray
    alpha: float

    kind: ClassVar[str] = "multinomial"

    def __post_init__(self) -> None:
        log_theta = _freeze(self.log_theta, "log_theta", 2)
        log_priors = _freeze(self.log_priors, "log_priors", 1)
        _check_shapes(log_theta, log_priors, "log_theta")
        if np.any(np.isnan(log_theta)) or np.any(log_theta > 1e-9):
            raise ModelError("log_theta entries must be log probabilities (<= 0, -inf allowed)")
        if np.any(np.abs(np.exp(log_theta).sum(axis=0) - 1.0) > 1e-6):
            raise ModelError("per-class word probabilities must sum to 1")
        if not np.all(np.isfinite(log_priors)) or np.any(log_priors > 1e-9):
            raise ModelError("log_priors must be finite log probabilities")
        object.__setattr__(self, "log_theta", log_theta)
        object.__setattr__(self, "log_priors", log_priors)
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def vocab_size(self) -> int:
        return self.log_theta.shape[0]

    @property
    def n_classes(self) -> int:
        return self.log_theta.shape[1]

    def _log_scores(self, X) -> np.ndarray:
        return self.log_priors + _product_scores(X, self.log_theta)


@dataclass(frozen=True)
class ComplementMultinomialNB:
    """Word-occurrence model scored against each class's complement.

    ``weights[mu, c]`` = -log P(word mu | not class c), optionally L2
    normalized per class; larger weighted sums mean the document looks MORE
    like the complement, so scores subtract them from the log prior.
    """

    weights: np.ndarray
    log_priors: np.ndarray
    alpha: float
    normalized: bool = False

    kind: ClassVar[str] = "complement_multinomial"

    def __post_init__(self) -> None:
        weights = _freeze(self.weights, "weights", 2)
        log_priors = _freeze(self.log_priors, "log_priors", 1)
        _check_shapes(weights, log_priors, "weights")
        if not np.all(np.isfinite(weights)) or np.any(weights < -1e-9):
            raise ModelError("weights must be finite and non-negative")
        if not np.all(np.isfinite(log_priors)) or np.any(log_priors > 1e-9):
            raise ModelError("log_priors must be finite log probabilities")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "log_priors", log_priors)
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "normalized", bool(self.normalized))

    @property
    def vocab_size(self) -> int:
        return self.weights.shape[0]

    @property
    def n_classes(self) -> int:
        return self.weights.shape[1]

    def _log_scores(self, X) -> np.ndarray:
        # weights are -log theta_hat, so adding them subtracts the
        # complement log likelihood from the prior.
        return self.log_priors + _product_scores(X, self.weights)


Model = BernoulliNB | ComplementBernoulliNB | MultinomialNB | ComplementMultinomialNB


def _row_supports(X):
    """Yield the nonzero column indices of each row."""
    if sparse.issparse(X):
        indptr, indices = X.indptr, X.indices
        for i in range(X.shape[0]):
            yield indices[indptr[i] : indptr[i + 1]]
    else:
        for row in X:
            yield np.flatnonzero(row)


def _product_scores(X, W) -> np.ndarray:
    """``X @ W`` where -inf entries of W act as log 0.

    Zero feature values must contribute nothing even against a -inf weight,
    so dense inputs with non-finite W go through an explicit per-row support
    walk instead of a matmul (which would form 0 * inf = nan). Sparse inputs
    only ever multiply stored entries, so the matmul is already correct.
    """
    if sparse.issparse(X) or np.all(np.isfinite(W)):
        return np.asarray(X @ W)
    out = np.empty((X.shape[0], W.shape[1]))
    for i, idx in enumerate(_row_supports(X)):
        out[i] = X[i, idx] @ W[idx] if idx.size else 0.0
    return out


def normalize_log_scores(scores: np.ndarray) -> np.ndarray:
    """Rows of unnormalized log scores -> rows of probabilities, stably.

    The row maximum is subtracted before exponentiating, so the result is
    invariant under adding a constant to a row. A row whose scores all
    vanished (-inf across the board) has no defined posterior.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if scores.ndim != 2 or scores.shape[1] < 2:
        raise ModelError(f"scores must be 2-d over >= 2 classes, got shape {scores.shape}")
    if np.any(np.isnan(scores)) or np.any(np.isposinf(scores)):
        raise ModelError("log scores must be real or -inf")
    top = scores.max(axis=1)
    if np.any(np.isneginf(top)):
        raise ModelError("every class score vanished for at least one item; the posterior is undefined")
    probs = np.exp(scores - top[:, np.newaxis])
    probs /= probs.sum(axis=1, keepdims=True)
    return probs


def _check_fit_inputs(data: FeatureMatrix, alpha) -> None:
    if not isinstance(data, FeatureMatrix):
        raise DataError(f"data must be a FeatureMatrix, got {type(data).__name__}")
    if not isinstance(alpha, (int, float, np.integer, np.floating)) or not np.isfinite(alpha) or alpha < 0:
        raise ConfigError(f"alpha must be a finite number >= 0, got {alpha!r}")
    if data.n_docs < 1:
        raise DataError("cannot fit on an empty corpus")
    if data.n_classes < 2:
        raise DataError(f"need at least 2 classes to fit, got {data.n_classes}")
    counts = data.class_counts()
    empty = np.flatnonzero(counts == 0)
    if empty.size:
        raise DataError(f"class {empty[0]} has no documents in the training data")


def _require_binary(data: FeatureMatrix, kind: str) -> None:
    if not data.is_binary():
        raise DataError(f"{kind} models need 0/1 feature values; vectorize in binary mode")


def _class_totals(data: FeatureMatrix) -> np.ndarray:
    """Per-feature sums within each class: entry (mu, c)."""
    onehot = np.zeros((data.n_docs, data.n_classes))
    onehot[np.arange(data.n_docs), data.labels] = 1.0
    return np.asarray(data.values.T @ onehot)


def fit_bernoulli(data: FeatureMatrix, alpha: float = 1.0) -> BernoulliNB:
    """Estimate presence probabilities per class with add-alpha smoothing.

    phi = (N_mu_c + alpha) / (N_c + 2 alpha) over the class's documents;
    priors are the raw class frequencies, never smoothed.
    """
    _check_fit_inputs(data, alpha)
    _require_binary(data, "bernoulli")
    alpha = float(alpha)
    present = _class_totals(data)
    class_docs = data.class_counts().astype(np.float64)
    phi = (present + alpha) / (class_docs + 2.0 * alpha)
    psi = class_docs / data.n_docs
    return BernoulliNB(phi=phi, psi=psi, alpha=alpha)


def fit_complement_bernoulli(data: FeatureMatrix, alpha: float = 1.0) -> ComplementBernoulliNB:
    """Estimate reciprocal presence weights from each class's complement.

    tilde_phi = (N - N_c + 2 alpha) / (N_mu - N_mu_c + alpha) and
    tilde_psi = N / (N - N_c); both unnormalized by design, their product
    over present features tracks 1 / (1 - P(c | feature present)).
    """
    _check_fit_inputs(data, alpha)
    _require_binary(data, "complement_bernoulli")
    alpha = float(alpha)
    present = _class_totals(data)
    class_docs = data.class_counts().astype(np.float64)
    n_docs = float(data.n_docs)
    outside = present.sum(axis=1, keepdims=True) - present
    if alpha == 0.0:
        mu, c = _first_zero(outside)
        if mu is not None:
            raise ModelError(
                f"feature {mu} occurs in no document outside class {c}; alpha > 0 is required"
            )
    tilde_phi = (n_docs - class_docs + 2.0 * alpha) / (outside + alpha)
    tilde_psi = n_docs / (n_docs - class_docs)
    return ComplementBernoulliNB(tilde_phi=tilde_phi, tilde_psi=tilde_psi, alpha=alpha)


def fit_multinomial(data: FeatureMatrix, alpha: float = 1.0) -> MultinomialNB:
    """Estimate word probabilities per class with add-alpha smoothing.

    theta = (W_mu_c + alpha) / (W_c + alpha m) over words in the class's
    documents; priors are raw class frequencies.
    """
    _check_fit_inputs(data, alpha)
    alpha = float(alpha)
    word_counts = _class_totals(data)
    class_words = word_counts.sum(axis=0)
    if alpha == 0.0:
        empty = np.flatnonzero(class_words == 0)
        if empty.size:
            raise ModelError(
                f"class {empty[0]} has no word occurrences; alpha > 0 is required"
            )
    theta = (word_counts + alpha) / (class_words + alpha * data.vocab_size)
    with np.errstate(divide="ignore"):
        log_theta = np.log(theta)
        log_priors = np.log(data.class_counts() / data.n_docs)
    return MultinomialNB(log_theta=log_theta, log_priors=log_priors, alpha=alpha)


def fit_complement_multinomial(
    data: FeatureMatrix, alpha: float = 1.0, normalize_weights: bool = False
) -> ComplementMultinomialNB:
    """Estimate word probabilities from each class's complement documents.

    theta_hat = (W_mu_out + alpha) / (W_out + alpha m) where the counts come
    from every document NOT in the class; weights are -log theta_hat. With
    ``normalize_weights`` each class's weight column is scaled to unit L2
    norm, which dampens classes whose complement is much larger.
    """
    _check_fit_inputs(data, alpha)
    alpha = float(alpha)
    word_counts = _class_totals(data)
    outside = word_counts.sum(axis=1, keepdims=True) - word_counts
    outside_total = outside.sum(axis=0)
    if alpha == 0.0:
        empty = np.flatnonzero(outside_total == 0)
        if empty.size:
            raise ModelError(
                f"every word occurrence lies inside class {empty[0]}; alpha > 0 is required"
            )
        mu, c = _first_zero(outside)
        if mu is not None:
            raise ModelError(
                f"word {mu} never occurs outside class {c}; alpha > 0 is required"
            )
    theta_hat = (outside + alpha) / (outside_total + alpha * data.vocab_size)
    weights = -np.log(theta_hat)
    if normalize_weights:
        norms = np.linalg.norm(weights, axis=0)
        # A single-feature vocabulary yields all-zero weights; leave them.
        weights = weights / np.where(norms > 0.0, norms, 1.0)
    with np.errstate(divide="ignore"):
        log_priors = np.log(data.class_counts() / data.n_docs)
    return ComplementMultinomialNB(
        weights=weights, log_priors=log_priors, alpha=alpha, normalized=bool(normalize_weights)
    )


def _first_zero(matrix: np.ndarray) -> tuple[int, int] | tuple[None, None]:
    rows, cols = np.nonzero(matrix == 0)
    if rows.size:
        return int(rows[0]), int(cols[0])
    return None, None


_FITTERS = {
    "bernoulli": fit_bernoulli,
    "complement_bernoulli": fit_complement_bernoulli,
    "multinomial": fit_multinomial,
    "complement_multinomial": fit_complement_multinomial,
}


def fit_model(kind: str, data: FeatureMatrix, alpha: float = 1.0, **kwargs) -> Model:
    """Fit a model by kind name. Extra keywords go to the kind's fitter."""
    if kind not in _FITTERS:
        raise ConfigError(f"unknown model kind {kind!r}, expected one of {', '.join(MODEL_KINDS)}")
    return _FITTERS[kind](data, alpha, **kwargs)


def _coerce_prediction_input(model: Model, X):
    if isinstance(X, FeatureMatrix):
        X = X.values
    if sparse.issparse(X):
        X = sparse.csr_array(X, dtype=np.float64, copy=True)
        X.eliminate_zeros()
    else:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[np.newaxis, :]
    if X.ndim != 2 or X.shape[1] != model.vocab_size:
        raise DataError(
            f"feature width {X.shape[1] if X.ndim == 2 else X.shape} does not match "
            f"the model vocabulary size {model.vocab_size}"
        )
    data = _values_data(X)
    if not np.all(np.isfinite(data)) or (data.size and float(data.min()) < 0.0):
        raise DataError("feature values must be finite and non-negative")
    if model.kind in BINARY_KINDS and not np.all((data == 0.0) | (data == 1.0)):
        raise DataError(f"{model.kind} models need 0/1 feature values")
    return X


def predict_proba(model: Model, X) -> np.ndarray:
    """Posterior matrix for a batch of feature rows, one distribution per row."""
    X = _coerce_prediction_input(model, X)
    return normalize_log_scores(model._log_scores(X))


def predict(model: Model, x) -> Distribution:
    """Posterior for a single feature vector."""
    return Distribution(predict_proba(model, x)[0])


def _typed_predict(model: Model, x, expected: type) -> Distribution:
    if not isinstance(model, expected):
        raise ConfigError(f"expected a {expected.__name__}, got {type(model).__name__}")
    return predict(model, x)


def predict_bernoulli(model: BernoulliNB, x) -> Distribution:
    return _typed_predict(model, x, BernoulliNB)


def predict_complement_bernoulli(model: ComplementBernoulliNB, x) -> Distribution:
    return _typed_predict(model, x, ComplementBernoulliNB)


def predict_multinomial(model: MultinomialNB, x) -> Distribution:
    return _typed_predict(model, x, MultinomialNB)


def predict_complement_multinomial(model: ComplementMultinomialNB, x) -> Distribution:
    return _typed_predict(model, x, ComplementMultinomialNB)
