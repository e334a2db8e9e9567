"""Tokenization, vocabulary construction, and document vectorization."""

from __future__ import annotations

import csv
import re
from collections import Counter
from collections.abc import Iterable, Sequence

import numpy as np
from scipy import sparse

from .errors import ConfigError, DataError
from .models import FeatureMatrix

# Lowercased maximal alphanumeric runs, at least two characters; underscores
# and anything non-alphanumeric separate tokens.
_TOKEN_RE = re.compile(r"[^\W_]{2,}", re.UNICODE)

MODES = ("counts", "binary")


def tokenize(text: str) -> list[str]:
    """Split text into lowercased alphanumeric tokens of length >= 2."""
    return _TOKEN_RE.findall(text.lower())


class Vocabulary:
    """Frozen token -> column index map in lexicographic token order.

    Indices are dense 0..size-1; the ordering invariant makes every
    downstream artifact (matrices, model parameters, CSV dumps)
    reproducible from the same corpus.
    """

    __slots__ = ("_tokens", "_index")

    def __init__(self, tokens: Sequence[str]) -> None:
        toks = tuple(tokens)
        if not toks:
            raise DataError("a vocabulary needs at least one token")
        if any(not isinstance(t, str) or not t for t in toks):
            raise DataError("vocabulary tokens must be non-empty strings")
        if list(toks) != sorted(set(toks)):
            raise DataError("vocabulary tokens must be unique and lexicographically sorted")
        self._tokens = toks
        self._index = {t: i for i, t in enumerate(toks)}

    @property
    def tokens(self) -> tuple[str, ...]:
        return self._tokens

    def __len__(self) -> int:
        return len(self._tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Vocabulary) and other._tokens == self._tokens

    def __hash__(self) -> int:
        return hash(self._tokens)

    def index(self, token: str) -> int:
        """Column index of a known token; KeyError for unknown ones."""
        return self._index[token]

    def get(self, token: str) -> int | None:
        return self._index.get(token)

    def to_csv(self, path) -> None:
        """Write ``token,index`` rows under a header."""
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["token", "index"])
            for i, token in enumerate(self._tokens):
                writer.writerow([token, i])

    @classmethod
    def from_csv(cls, path) -> "Vocabulary":
        """Read a vocabulary written by ``to_csv``, validating the layout."""
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header != ["token", "index"]:
                raise DataError(f"expected header token,index in {path}, got {header!r}")
            rows = list(reader)
        by_index: dict[int, str] = {}
        for row in rows:
            if len(row) != 2:
                raise DataError(f"malformed vocabulary row {row!r} in {path}")
            try:
                idx = int(row[1])
            except ValueError:
                raise DataError(f"non-integer index {row[1]!r} in {path}") from None
            if idx in by_index:
                raise DataError(f"duplicate index {idx} in {path}")
            by_index[idx] = row[0]
        if sorted(by_index) != list(range(len(by_index))):
            raise DataError(f"vocabulary indices in {path} are not dense from 0")
        return cls([by_index[i] for i in range(len(by_index))])


def build_vocabulary(docs: Iterable[Sequence[str]], min_doc_freq: int = 1) -> Vocabulary:
    """Collect tokens appearing in at least ``min_doc_freq`` documents."""
    if not isinstance(min_doc_freq, (int, np.integer)) or min_doc_freq < 1:
        raise ConfigError(f"min_doc_freq must be an integer >= 1, got {min_doc_freq!r}")
    doc_freq: Counter[str] = Counter()
    for doc in docs:
        doc_freq.update(set(doc))
    kept = sorted(t for t, df in doc_freq.items() if df >= min_doc_freq)
    if not kept:
        raise DataError(
            f"no token appears in at least {min_doc_freq} document(s); the vocabulary is empty"
        )
    return Vocabulary(kept)


def vectorize_rows(docs: Sequence[Sequence[str]], vocab: Vocabulary, mode: str = "counts"):
    """Tokenized documents -> CSR matrix of shape (len(docs), len(vocab)).

    Unknown tokens are dropped. ``binary`` mode clamps counts at 1.
    """
    if mode not in MODES:
        raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {mode!r}")
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for doc in docs:
        counts: Counter[int] = Counter()
        for token in doc:
            col = vocab.get(token)
            if col is not None:
                counts[col] += 1
        for col in sorted(counts):
            indices.append(col)
            data.append(1.0 if mode == "binary" else float(counts[col]))
        indptr.append(len(indices))
    return sparse.csr_array(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int32), np.asarray(indptr, dtype=np.int32)),
        shape=(len(docs), len(vocab)),
    )


def vectorize(
    docs: Sequence[Sequence[str]],
    vocab: Vocabulary,
    mode: str = "counts",
    *,
    labels,
    n_classes: int,
) -> FeatureMatrix:
    """Tokenized, labeled documents -> FeatureMatrix."""
    values = vectorize_rows(docs, vocab, mode)
    return FeatureMatrix(values=values, labels=labels, n_classes=n_classes)


def binarize(data: FeatureMatrix) -> FeatureMatrix:
    """Clamp a count matrix at 1, keeping labels and class count."""
    values = data.values
    if sparse.issparse(values):
        clamped = values.copy()
        clamped.data = np.minimum(clamped.data, 1.0)
    else:
        clamped = np.minimum(values, 1.0)
    return FeatureMatrix(values=clamped, labels=data.labels, n_classes=data.n_classes)
