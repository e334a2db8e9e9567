"""Labeled text corpora: loading, subsampling schemes, and splitting.

Every sampling routine accepts a seed (int or numpy SeedSequence) and is
deterministic given it: selections are drawn with numpy Generator methods
and the chosen indices are re-sorted into corpus order, so equal seeds give
byte-identical corpora.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, DataError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LabeledCorpus:
    """Documents with integer labels indexing ``class_names``."""

    documents: tuple[str, ...]
    labels: np.ndarray
    class_names: tuple[str, ...]

    def __post_init__(self) -> None:
        docs = tuple(self.documents)
        names = tuple(self.class_names)
        labels = np.array(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.size != len(docs):
            raise DataError(f"need one label per document, got {labels.shape} for {len(docs)} documents")
        if len(names) < 1:
            raise DataError("need at least one class name")
        if len(set(names)) != len(names):
            raise DataError("class names must be unique")
        if labels.size and (labels.min() < 0 or labels.max() >= len(names)):
            raise DataError(f"labels must lie in [0, {len(names)})")
        labels.setflags(write=False)
        object.__setattr__(self, "documents", docs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_names", names)

    @property
    def n_docs(self) -> int:
        return len(self.documents)

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def supports(self) -> tuple[int, ...]:
        """Documents per class, in class order."""
        return tuple(int(c) for c in np.bincount(self.labels, minlength=self.n_classes))

    def select(self, indices) -> "LabeledCorpus":
        """Sub-corpus at the given document indices, class names unchanged."""
        idx = np.asarray(indices, dtype=np.int64)
        return LabeledCorpus(
            documents=tuple(self.documents[i] for i in idx),
            labels=self.labels[idx],
            class_names=self.class_names,
        )


def load_directory_corpus(root) -> LabeledCorpus:
    """One subdirectory per class, one UTF-8 text file per document.

    Class names are the subdirectory names in sorted order; files load in
    sorted order within each class. Stray files directly under the root are
    skipped with a warning.
    """
    rootdir = Path(root)
    if not rootdir.is_dir():
        raise DataError(f"corpus root {rootdir} is not a directory")
    class_dirs = sorted(p for p in rootdir.iterdir() if p.is_dir())
    stray = sorted(p.name for p in rootdir.iterdir() if p.is_file())
    if stray:
        logger.warning("ignoring %d file(s) directly under %s: %s", len(stray), rootdir, ", ".join(stray))
    if not class_dirs:
        raise DataError(f"no class directories under {rootdir}")
    documents: list[str] = []
    labels: list[int] = []
    for label, class_dir in enumerate(class_dirs):
        files = sorted(p for p in class_dir.iterdir() if p.is_file())
        if not files:
            raise DataError(f"class directory {class_dir} holds no files")
        for path in files:
            documents.append(path.read_text(encoding="utf-8"))
            labels.append(label)
    return LabeledCorpus(
        documents=tuple(documents),
        labels=np.asarray(labels),
        class_names=tuple(p.name for p in class_dirs),
    )


def load_csv_corpus(path, label_column: str = "label", text_column: str = "text") -> LabeledCorpus:
    """CSV with a header; class names are the sorted distinct label values.

    Rows with empty text are skipped with a warning.
    """
    csv_path = Path(path)
    if not csv_path.is_file():
        raise DataError(f"corpus file {csv_path} does not exist")
    with open(csv_path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None:
            raise DataError(f"{csv_path} is empty, expected a header row")
        for column in (label_column, text_column):
            if column not in reader.fieldnames:
                raise DataError(f"{csv_path} has no column {column!r} (columns: {', '.join(reader.fieldnames)})")
        texts: list[str] = []
        raw_labels: list[str] = []
        skipped = 0
        for row in reader:
            text = row[text_column]
            label = row[label_column]
            if text is None or label is None or not text.strip():
                skipped += 1
                continue
            texts.append(text)
            raw_labels.append(label)
    if skipped:
        logger.warning("skipped %d row(s) with empty text in %s", skipped, csv_path)
    if not texts:
        raise DataError(f"{csv_path} holds no usable rows")
    names = tuple(sorted(set(raw_labels)))
    index = {name: i for i, name in enumerate(names)}
    return LabeledCorpus(
        documents=tuple(texts),
        labels=np.asarray([index[lab] for lab in raw_labels]),
        class_names=names,
    )


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _sample_by_targets(corpus: LabeledCorpus, targets, rng: np.random.Generator) -> LabeledCorpus:
    """Draw ``targets[c]`` documents of each class without replacement."""
    chosen: list[np.ndarray] = []
    for c, want in enumerate(targets):
        pool = np.flatnonzero(corpus.labels == c)
        chosen.append(rng.choice(pool, size=want, replace=False))
    return corpus.select(np.sort(np.concatenate(chosen)))


def subsample_balanced(corpus: LabeledCorpus, fraction: float, seed) -> LabeledCorpus:
    """Keep ceil(fraction * support) documents of every class."""
    if not isinstance(fraction, (int, float)) or not 0.0 < fraction <= 1.0:
        raise ConfigError(f"fraction must lie in (0, 1], got {fraction!r}")
    supports = corpus.supports()
    vanished = [corpus.class_names[c] for c, s in enumerate(supports) if s == 0]
    if vanished:
        raise DataError(f"class {vanished[0]!r} has no documents to sample from")
    targets = [math.ceil(fraction * s) for s in supports]
    return _sample_by_targets(corpus, targets, _rng(seed))


def subsample_ratios(corpus: LabeledCorpus, ratios, scale: float, seed) -> LabeledCorpus:
    """Impose class-size ratios, scaled so the whole scheme fits the corpus.

    The unit is chosen so the largest ratio maps to ``scale`` times the
    largest class support; each class then gets ceil(scale * ratio * unit)
    documents. Any class that would need more documents than it has makes
    the scheme infeasible.
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != corpus.n_classes:
        raise ConfigError(f"need one ratio per class, got {len(ratios)} for {corpus.n_classes} classes")
    if any(not math.isfinite(r) or r <= 0.0 for r in ratios):
        raise ConfigError("ratios must be finite and positive")
    if not isinstance(scale, (int, float)) or not 0.0 < scale <= 1.0:
        raise ConfigError(f"scale must lie in (0, 1], got {scale!r}")
    supports = corpus.supports()
    unit = max(supports) / max(ratios)
    targets = [math.ceil(scale * r * unit) for r in ratios]
    for c, (want, have) in enumerate(zip(targets, supports)):
        if want > have:
            raise DataError(
                f"class {corpus.class_names[c]!r} would need {want} documents but has {have}; "
                "the ratio scheme is infeasible"
            )
    return _sample_by_targets(corpus, targets, _rng(seed))


def filter_by_support_threshold(corpus: LabeledCorpus, threshold: int) -> LabeledCorpus:
    """Drop classes with fewer than ``threshold`` documents, relabeling densely.

    Surviving classes keep their relative order. Deterministic, no sampling.
    """
    if not isinstance(threshold, (int, np.integer)) or threshold < 1:
        raise ConfigError(f"threshold must be an integer >= 1, got {threshold!r}")
    supports = corpus.supports()
    keep = [c for c, s in enumerate(supports) if s >= threshold]
    if not keep:
        raise DataError(f"no class has at least {threshold} documents")
    return restrict_to_classes(corpus, [corpus.class_names[c] for c in keep])


def restrict_to_classes(corpus: LabeledCorpus, names) -> LabeledCorpus:
    """Sub-corpus of the named classes, relabeled densely in the given order."""
    names = tuple(names)
    if not names:
        raise ConfigError("need at least one class name to keep")
    if len(set(names)) != len(names):
        raise ConfigError("class names to keep must be unique")
    missing = [n for n in names if n not in corpus.class_names]
    if missing:
        raise ConfigError(f"class {missing[0]!r} is not in the corpus")
    old = {name: c for c, name in enumerate(corpus.class_names)}
    remap = {old[name]: new for new, name in enumerate(names)}
    mask = np.isin(corpus.labels, list(remap))
    return LabeledCorpus(
        documents=tuple(d for d, m in zip(corpus.documents, mask) if m),
        labels=np.asarray([remap[int(l)] for l in corpus.labels[mask]]),
        class_names=names,
    )


def train_test_split(corpus: LabeledCorpus, test_fraction: float, seed) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Stratified split: ceil(test_fraction * support) test documents per class.

    Every class must keep at least one document on each side.
    """
    if not isinstance(test_fraction, (int, float)) or not 0.0 < test_fraction < 1.0:
        raise ConfigError(f"test_fraction must lie in (0, 1), got {test_fraction!r}")
    rng = _rng(seed)
    test_idx: list[np.ndarray] = []
    for c, support in enumerate(corpus.supports()):
        n_test = math.ceil(test_fraction * support)
        if n_test < 1 or support - n_test < 1:
            raise DataError(
                f"class {corpus.class_names[c]!r} with {support} document(s) cannot give "
                f"both sides of a {test_fraction} split at least one document"
            )
        pool = np.flatnonzero(corpus.labels == c)
        test_idx.append(rng.choice(pool, size=n_test, replace=False))
    test_mask = np.zeros(corpus.n_docs, dtype=bool)
    test_mask[np.concatenate(test_idx)] = True
    return (
        corpus.select(np.flatnonzero(~test_mask)),
        corpus.select(np.flatnonzero(test_mask)),
    )


def make_synthetic_corpus(
    seed,
    n_classes: int = 3,
    docs_per_class: int = 220,
    shared_vocab_size: int = 120,
    class_vocab_size: int = 30,
    doc_length: tuple[int, int] = (4, 9),
    class_word_prob: float = 0.25,
) -> LabeledCorpus:
    """Generate a topic-flavored corpus for experiments and examples.

    Each class owns a private vocabulary; all classes share a common one.
    Every token of a document comes from the private pool with probability
    ``class_word_prob``, otherwise from the shared pool, both sampled under
    a Zipf-like weighting so frequent words dominate like in natural text.
    """
    if n_classes < 2:
        raise ConfigError(f"n_classes must be >= 2, got {n_classes}")
    if docs_per_class < 1:
        raise ConfigError(f"docs_per_class must be >= 1, got {docs_per_class}")
    if not 0.0 < class_word_prob < 1.0:
        raise ConfigError(f"class_word_prob must lie in (0, 1), got {class_word_prob!r}")
    lo, hi = doc_length
    if lo < 1 or hi < lo:
        raise ConfigError(f"doc_length must be (lo, hi) with 1 <= lo <= hi, got {doc_length!r}")
    rng = _rng(seed)

    def zipf_weights(k: int) -> np.ndarray:
        w = 1.0 / np.arange(1, k + 1)
        return w / w.sum()

    shared = [f"sw{i:03d}" for i in range(shared_vocab_size)]
    shared_w = zipf_weights(shared_vocab_size)
    class_words = [[f"c{c}w{i:03d}" for i in range(class_vocab_size)] for c in range(n_classes)]
    class_w = zipf_weights(class_vocab_size)

    documents: list[str] = []
    labels: list[int] = []
    for c in range(n_classes):
        own = class_words[c]
        for _ in range(docs_per_class):
            length = int(rng.integers(lo, hi + 1))
            from_class = rng.random(length) < class_word_prob
            words = [
                own[rng.choice(class_vocab_size, p=class_w)]
                if pick
                else shared[rng.choice(shared_vocab_size, p=shared_w)]
                for pick in from_class
            ]
            documents.append(" ".join(words))
            labels.append(c)
    return LabeledCorpus(
        documents=tuple(documents),
        labels=np.asarray(labels),
        class_names=tuple(f"topic_{c}" for c in range(n_classes)),
    )
