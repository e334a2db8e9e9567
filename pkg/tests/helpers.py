"""Shared utilities for the test suite."""

from __future__ import annotations

import os

import numpy as np

from confidex.corpora import LabeledCorpus


def write_directory_corpus(corpus: LabeledCorpus, root) -> str:
    """Materialize a corpus as a class-per-directory tree; returns the root."""
    counters = [0] * corpus.n_classes
    for name in corpus.class_names:
        os.makedirs(os.path.join(root, name), exist_ok=True)
    for doc, label in zip(corpus.documents, corpus.labels):
        name = corpus.class_names[label]
        path = os.path.join(root, name, f"doc{counters[label]:05d}.txt")
        counters[label] += 1
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(doc)
    return str(root)


def random_simplex_rows(rng: np.random.Generator, count: int, n: int) -> np.ndarray:
    """Uniformly distributed points on the (n-1)-simplex, one per row."""
    return rng.dirichlet(np.ones(n), size=count)
