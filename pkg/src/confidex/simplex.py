"""Points on the probability simplex and the complement transformation.

All entropies are in nats. The complement map sends a distribution p to the
normalized elementwise reciprocals of its complement probabilities:

    q_k = (1 / (1 - p_k)) / sum_j (1 / (1 - p_j))

It is the identity for two classes, fixes the uniform distribution and the
vertices, and never decreases entropy.
"""

from __future__ import annotations

from collections.abc import Iterator

import numpy as np
from scipy.special import xlogy

from .errors import ConfigError, InvalidDistributionError

# Construction accepts vectors whose sum is off by at most this and rescales.
SUM_TOLERANCE = 1e-6

# Components at least this close to 1 make the point a vertex for the
# complement map; the map returns such points unchanged instead of dividing
# by a vanishing complement.
VERTEX_EPSILON = 1e-12


class Distribution:
    """An immutable probability distribution over ``n >= 2`` classes.

    Inputs must be finite and non-negative and sum to 1 within
    ``SUM_TOLERANCE``; they are rescaled to sum to 1 exactly (up to float
    rounding) so downstream code never sees drift.
    """

    __slots__ = ("_probs",)

    def __init__(self, probs) -> None:
        arr = np.array(probs, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 2:
            raise InvalidDistributionError(
                f"a distribution needs at least 2 components in one dimension, got shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise InvalidDistributionError("distribution components must be finite")
        if np.any(arr < 0.0):
            raise InvalidDistributionError(f"distribution components must be non-negative, got min {arr.min()!r}")
        total = float(arr.sum())
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise InvalidDistributionError(
                f"distribution components sum to {total!r}, expected 1 within {SUM_TOLERANCE}"
            )
        arr /= total
        arr.setflags(write=False)
        self._probs = arr

    @property
    def probs(self) -> np.ndarray:
        """The component array, read-only."""
        return self._probs

    @property
    def n(self) -> int:
        """Number of classes."""
        return self._probs.size

    def __len__(self) -> int:
        return self._probs.size

    def __iter__(self) -> Iterator[float]:
        return iter(self._probs.tolist())

    def __getitem__(self, k: int | slice) -> float | np.ndarray:
        return self._probs[k]

    def __repr__(self) -> str:
        body = ", ".join(f"{v:.6g}" for v in self._probs)
        return f"Distribution([{body}])"


def uniform(n: int) -> Distribution:
    """The uniform distribution over ``n`` classes."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ConfigError(f"n must be an integer >= 2, got {n!r}")
    return Distribution(np.full(n, 1.0 / n))


def vertex(n: int, k: int) -> Distribution:
    """The point mass on class ``k`` among ``n`` classes."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise ConfigError(f"n must be an integer >= 2, got {n!r}")
    if not isinstance(k, (int, np.integer)) or not 0 <= k < n:
        raise ConfigError(f"k must be an integer in [0, {n}), got {k!r}")
    arr = np.zeros(n)
    arr[k] = 1.0
    return Distribution(arr)


def entropy(p: Distribution) -> float:
    """Shannon entropy of ``p`` in nats, with 0 * log 0 taken as 0."""
    return float(-xlogy(p.probs, p.probs).sum())


def entropy_of_rows(rows: np.ndarray) -> np.ndarray:
    """Shannon entropy of each row of a matrix of distributions.

    Rows are trusted to be valid distributions; this is the bulk path used by
    the metrics and the batch predictors.
    """
    rows = np.asarray(rows, dtype=np.float64)
    return -xlogy(rows, rows).sum(axis=1)


def complement_map(p: Distribution) -> Distribution:
    """Complement transformation of one distribution.

    Vertices (any component within ``VERTEX_EPSILON`` of 1) are returned
    unchanged.
    """
    return Distribution(complement_map_rows(p.probs[np.newaxis, :])[0])


def complement_map_rows(rows: np.ndarray) -> np.ndarray:
    """Complement transformation applied to each row of a matrix.

    Rows are trusted to be valid distributions. Vertex rows pass through
    unchanged; all other rows have every component strictly below 1, so the
    reciprocals are finite.
    """
    rows = np.asarray(rows, dtype=np.float64)
    at_vertex = np.any(rows >= 1.0 - VERTEX_EPSILON, axis=1)
    out = np.array(rows, copy=True)
    interior = ~at_vertex
    if np.any(interior):
        w = 1.0 / (1.0 - rows[interior])
        out[interior] = w / w.sum(axis=1, keepdims=True)
    return out
