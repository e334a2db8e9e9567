"""Confidence and accuracy metrics over batches of probabilistic predictions.

The central objects are the entropy score, which rescales mean prediction
entropy into a [0, 1] confidence, and the probabilistic confusion matrix,
whose row i is the mean predicted distribution over the test documents of
true class i. Purity measures how close that matrix is to the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .simplex import Distribution, entropy_of_rows


@dataclass(frozen=True)
class PredictionRecord:
    """One test item: its true class index and the predicted distribution."""

    true_class: int
    predicted: Distribution

    def __post_init__(self) -> None:
        if not isinstance(self.predicted, Distribution):
            raise DataError(f"predicted must be a Distribution, got {type(self.predicted).__name__}")
        if not isinstance(self.true_class, (int, np.integer)) or not 0 <= self.true_class < self.predicted.n:
            raise DataError(
                f"true_class must be an integer in [0, {self.predicted.n}), got {self.true_class!r}"
            )


@dataclass(frozen=True)
class ProbConfusionMatrix:
    """Row-stochastic matrix of mean predicted mass, true classes along rows.

    ``class_counts`` optionally records how many records contributed to each
    row.
    """

    entries: np.ndarray
    class_counts: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        arr = np.array(self.entries, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 2:
            raise DataError(f"entries must be square with n >= 2, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
            raise DataError("entries must lie in [0, 1]")
        if np.any(np.abs(arr.sum(axis=1) - 1.0) > 1e-9):
            raise DataError("each row must sum to 1 within 1e-9")
        if self.class_counts is not None and len(self.class_counts) != arr.shape[0]:
            raise DataError("class_counts length must match the matrix order")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


def _batch(records: list[PredictionRecord]) -> tuple[np.ndarray, np.ndarray]:
    """Stack records into a probability matrix and a label vector."""
    if not records:
        raise DataError("need at least one prediction record")
    n = records[0].predicted.n
    for r in records:
        if r.predicted.n != n:
            raise DataError(f"all predictions must have the same number of classes, got {r.predicted.n} and {n}")
    probs = np.stack([r.predicted.probs for r in records])
    labels = np.fromiter((r.true_class for r in records), dtype=np.int64, count=len(records))
    return probs, labels


def entropy_score(records: list[PredictionRecord]) -> float:
    """Confidence of a batch: 1 minus mean entropy over the maximum ln n.

    1 means every prediction was a point mass, 0 means every prediction was
    uniform. The value is clamped to [0, 1] to shed float dust at the ends.
    """
    probs, _ = _batch(records)
    n = probs.shape[1]
    score = 1.0 - float(entropy_of_rows(probs).mean()) / float(np.log(n))
    return float(min(1.0, max(0.0, score)))


def prob_confusion_matrix(records: list[PredictionRecord], n_classes: int) -> ProbConfusionMatrix:
    """Average the predicted distributions within each true class.

    Every class in [0, n_classes) must appear among the records, otherwise
    its row would be undefined.
    """
    probs, labels = _batch(records)
    if probs.shape[1] != n_classes:
        raise DataError(f"records predict over {probs.shape[1]} classes, expected {n_classes}")
    counts = np.bincount(labels, minlength=n_classes)
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise DataError(f"true class {missing[0]} has no prediction records, cannot average its row")
    entries = np.zeros((n_classes, n_classes))
    for i in range(n_classes):
        entries[i] = probs[labels == i].mean(axis=0)
    # Mean of unit-sum rows can drift a few ulp; renormalize so the row-sum
    # invariant holds exactly enough for construction.
    entries /= entries.sum(axis=1, keepdims=True)
    return ProbConfusionMatrix(entries=entries, class_counts=tuple(int(c) for c in counts))


def purity(matrix: ProbConfusionMatrix) -> float:
    """How close a probabilistic confusion matrix is to the identity.

    Defined as 1 minus the Frobenius distance to the identity over sqrt(2 n),
    the distance attained by the worst case of all mass on one wrong class.
    1 on the identity; approaches 0 only for maximally wrong matrices.
    """
    n = matrix.n
    dist = float(np.linalg.norm(matrix.entries - np.eye(n)))
    return 1.0 - dist / float(np.sqrt(2.0 * n))


def accuracy(records: list[PredictionRecord]) -> float:
    """Fraction of records whose argmax matches the true class.

    Ties resolve to the lowest class index, matching ``np.argmax``.
    """
    probs, labels = _batch(records)
    return float(np.mean(probs.argmax(axis=1) == labels))


def hard_confusion_matrix(records: list[PredictionRecord], n_classes: int) -> np.ndarray:
    """Integer count matrix: rows true class, columns argmax prediction.

    An empty record list yields the zero matrix.
    """
    if n_classes < 2:
        raise DataError(f"n_classes must be >= 2, got {n_classes}")
    out = np.zeros((n_classes, n_classes), dtype=np.int64)
    if not records:
        return out
    probs, labels = _batch(records)
    if probs.shape[1] != n_classes:
        raise DataError(f"records predict over {probs.shape[1]} classes, expected {n_classes}")
    hard = probs.argmax(axis=1)
    np.add.at(out, (labels, hard), 1)
    return out
