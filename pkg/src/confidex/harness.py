"""Config-driven experiment sweeps over training-set size and shape.

A sweep holds the test set fixed (one stratified split per experiment),
varies the training corpus along one axis (balanced fractions, ratio
scales, or support thresholds), fits every requested model at each point,
and evaluates accuracy, entropy score, and purity on the test set. Equal
configs and seeds give byte-identical CSV output.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import corpora, models, text
from .errors import ConfigError, DataError
from .metrics import PredictionRecord, accuracy, entropy_score, prob_confusion_matrix, purity
from .simplex import Distribution

logger = logging.getLogger(__name__)

SWEEP_KINDS = ("balanced_fraction", "ratio_scale", "support_threshold")

DEFAULT_FRACTIONS = tuple(round(0.1 * i, 10) for i in range(1, 11))

CSV_HEADER = "model,sweep_param,n_classes,accuracy,entropy_score,purity,train_supports"

PLOT_METRICS = ("entropy_score", "purity")


@dataclass(frozen=True)
class CorpusSource:
    """Where a corpus comes from: a class-per-directory tree or a CSV file."""

    path: str
    kind: str = "directory"
    label_column: str = "label"
    text_column: str = "text"

    def __post_init__(self) -> None:
        if self.kind not in ("directory", "csv"):
            raise ConfigError(f"data_kind must be 'directory' or 'csv', got {self.kind!r}")

    def load(self) -> corpora.LabeledCorpus:
        if self.kind == "csv":
            return corpora.load_csv_corpus(self.path, self.label_column, self.text_column)
        return corpora.load_directory_corpus(self.path)


@dataclass
class SweepConfig:
    """Everything one sweep run needs; see ``validate`` for the invariants."""

    source: CorpusSource | None
    models: tuple[str, ...] = models.MODEL_KINDS
    sweep: str = "balanced_fraction"
    fractions: tuple[float, ...] = DEFAULT_FRACTIONS
    ratios: tuple[float, ...] = ()
    scales: tuple[float, ...] = DEFAULT_FRACTIONS
    thresholds: tuple[int, ...] = ()
    alpha: float = 1.0
    alpha_overrides: dict = field(default_factory=dict)
    test_fraction: float = 0.25
    seed: int = 0
    min_doc_freq: int = 1
    output: str | None = None
    plot_data: str | None = None

    def validate(self) -> None:
        if self.sweep not in SWEEP_KINDS:
            raise ConfigError(f"sweep must be one of {', '.join(SWEEP_KINDS)}, got {self.sweep!r}")
        if not self.models:
            raise ConfigError("at least one model kind is required")
        for kind in self.models:
            if kind not in models.MODEL_KINDS:
                raise ConfigError(f"unknown model kind {kind!r}")
        if len(set(self.models)) != len(self.models):
            raise ConfigError("model kinds must not repeat")
        points = self.points()
        if not points:
            raise ConfigError(f"sweep {self.sweep!r} has no points")
        if self.sweep in ("balanced_fraction", "ratio_scale"):
            bad = [p for p in points if not 0.0 < p <= 1.0]
            if bad:
                raise ConfigError(f"sweep points must lie in (0, 1], got {bad[0]!r}")
        else:
            bad = [p for p in points if not isinstance(p, int) or p < 1]
            if bad:
                raise ConfigError(f"support thresholds must be integers >= 1, got {bad[0]!r}")
        if self.sweep == "ratio_scale" and not self.ratios:
            raise ConfigError("a ratio_scale sweep needs ratios")
        for name, alpha in [("alpha", self.alpha)] + sorted(self.alpha_overrides.items()):
            if not isinstance(alpha, (int, float)) or not np.isfinite(alpha) or alpha < 0:
                raise ConfigError(f"{name} must be a finite number >= 0, got {alpha!r}")
        for kind in self.alpha_overrides:
            if kind not in models.MODEL_KINDS:
                raise ConfigError(f"alpha override names unknown model kind {kind!r}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")

    def points(self) -> tuple:
        if self.sweep == "balanced_fraction":
            return tuple(self.fractions)
        if self.sweep == "ratio_scale":
            return tuple(self.scales)
        return tuple(self.thresholds)

    def alpha_for(self, kind: str) -> float:
        return float(self.alpha_overrides.get(kind, self.alpha))


@dataclass(frozen=True)
class SweepRow:
    """One model evaluated at one sweep point."""

    model: str
    sweep_param: float | int
    n_classes: int
    accuracy: float
    entropy_score: float
    purity: float
    train_supports: tuple[int, ...]


_CONFIG_KEYS = {
    "data",
    "data_kind",
    "label_column",
    "text_column",
    "models",
    "sweep",
    "fractions",
    "ratios",
    "scales",
    "thresholds",
    "alpha",
    "test_fraction",
    "seed",
    "min_doc_freq",
    "output",
    "plot_data",
}


def parse_config_mapping(raw: dict) -> SweepConfig:
    """Build a SweepConfig from a flat key-value mapping."""
    if not isinstance(raw, dict):
        raise ConfigError(f"config must be a table of keys, got {type(raw).__name__}")
    overrides = {}
    for key, value in raw.items():
        if key.startswith("alpha_"):
            overrides[key.removeprefix("alpha_")] = value
        elif key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        if isinstance(value, dict):
            raise ConfigError(f"config must be flat, but {key!r} is a table")
    if "data" not in raw:
        raise ConfigError("config needs a 'data' path")
    source = CorpusSource(
        path=str(raw["data"]),
        kind=raw.get("data_kind", "directory"),
        label_column=raw.get("label_column", "label"),
        text_column=raw.get("text_column", "text"),
    )
    config = SweepConfig(source=source)
    if "models" in raw:
        value = raw["models"]
        if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
            raise ConfigError("models must be a list of kind names")
        config.models = tuple(value)
    if "sweep" in raw:
        config.sweep = raw["sweep"]
    for key in ("fractions", "ratios", "scales"):
        if key in raw:
            value = raw[key]
            if not isinstance(value, (list, tuple)) or not all(isinstance(v, (int, float)) for v in value):
                raise ConfigError(f"{key} must be a list of numbers")
            setattr(config, key, tuple(float(v) for v in value))
    if "thresholds" in raw:
        value = raw["thresholds"]
        if not isinstance(value, (list, tuple)) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in value
        ):
            raise ConfigError("thresholds must be a list of integers")
        config.thresholds = tuple(value)
    if "alpha" in raw:
        config.alpha = raw["alpha"]
    config.alpha_overrides = overrides
    if "test_fraction" in raw:
        value = raw["test_fraction"]
        if not isinstance(value, (int, float)) or not 0.0 < value < 1.0:
            raise ConfigError(f"test_fraction must lie in (0, 1), got {value!r}")
        config.test_fraction = float(value)
    if "seed" in raw:
        config.seed = raw["seed"]
    if "min_doc_freq" in raw:
        value = raw["min_doc_freq"]
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigError(f"min_doc_freq must be an integer >= 1, got {value!r}")
        config.min_doc_freq = value
    if "output" in raw:
        config.output = str(raw["output"])
    if "plot_data" in raw:
        config.plot_data = str(raw["plot_data"])
    config.validate()
    return config


def parse_config_file(path) -> SweepConfig:
    """Parse a flat TOML sweep config."""
    file = Path(path)
    if not file.is_file():
        raise ConfigError(f"config file {file} does not exist")
    try:
        raw = tomllib.loads(file.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {file} is not valid TOML: {exc}") from exc
    return parse_config_mapping(raw)


def _derive_train(config: SweepConfig, train_pool, point, rng):
    if config.sweep == "balanced_fraction":
        return corpora.subsample_balanced(train_pool, point, rng)
    if config.sweep == "ratio_scale":
        return corpora.subsample_ratios(train_pool, config.ratios, point, rng)
    return corpora.filter_by_support_threshold(train_pool, point)


def _evaluate_point(config: SweepConfig, point, train, test) -> list[SweepRow]:
    tokens_train = [text.tokenize(d) for d in train.documents]
    tokens_test = [text.tokenize(d) for d in test.documents]
    vocab = text.build_vocabulary(tokens_train, min_doc_freq=config.min_doc_freq)
    n = train.n_classes
    counts_train = text.vectorize(tokens_train, vocab, "counts", labels=train.labels, n_classes=n)
    counts_test = text.vectorize(tokens_test, vocab, "counts", labels=test.labels, n_classes=n)
    matrices = {"counts": (counts_train, counts_test)}
    if any(kind in models.BINARY_KINDS for kind in config.models):
        matrices["binary"] = (text.binarize(counts_train), text.binarize(counts_test))

    rows = []
    scores: dict[str, float] = {}
    for kind in config.models:
        fit_data, eval_data = matrices[models.feature_mode(kind)]
        model = models.fit_model(kind, fit_data, config.alpha_for(kind))
        probs = models.predict_proba(model, eval_data)
        records = [
            PredictionRecord(true_class=int(label), predicted=Distribution(p))
            for label, p in zip(test.labels, probs)
        ]
        score = entropy_score(records)
        scores[kind] = score
        rows.append(
            SweepRow(
                model=kind,
                sweep_param=point,
                n_classes=n,
                accuracy=accuracy(records),
                entropy_score=score,
                purity=purity(prob_confusion_matrix(records, n)),
                train_supports=train.supports(),
            )
        )
    if n > 2 and {"bernoulli", "complement_bernoulli"} <= scores.keys():
        if scores["complement_bernoulli"] > scores["bernoulli"] + 1e-12:
            # The complement map cannot lower entropy, so for 3+ classes the
            # complement model should never look MORE confident.
            logger.warning(
                "entropy score of complement_bernoulli (%.6f) exceeds bernoulli (%.6f) at sweep point %r",
                scores["complement_bernoulli"],
                scores["bernoulli"],
                point,
            )
    return rows


def run_sweep(config: SweepConfig, corpus: corpora.LabeledCorpus | None = None) -> list[SweepRow]:
    """Run every (sweep point, model) cell; rows are grouped by model kind.

    The corpus loads from ``config.source`` unless one is passed directly.
    Per-point sampling uses children of one seed sequence, so inserting or
    removing points does not change the samples drawn at other points.
    """
    config.validate()
    if corpus is None:
        if config.source is None:
            raise ConfigError("config has no corpus source and no corpus was given")
        corpus = config.source.load()
    points = config.points()
    root = np.random.SeedSequence(config.seed)
    children = root.spawn(len(points) + 1)
    train_pool, test_set = corpora.train_test_split(corpus, config.test_fraction, children[0])

    cells: dict[tuple[str, int], SweepRow] = {}
    for i, point in enumerate(points):
        train = _derive_train(config, train_pool, point, np.random.default_rng(children[i + 1]))
        test = test_set
        if config.sweep == "support_threshold":
            test = corpora.restrict_to_classes(test_set, train.class_names)
        for row in _evaluate_point(config, point, train, test):
            cells[(row.model, i)] = row
    return [cells[(kind, i)] for kind in config.models for i in range(len(points))]


def _format_param(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return f"{float(value):.6f}"


def _csv_line(row: SweepRow) -> str:
    supports = ";".join(str(s) for s in row.train_supports)
    return (
        f"{row.model},{_format_param(row.sweep_param)},{row.n_classes},"
        f"{row.accuracy:.6f},{row.entropy_score:.6f},{row.purity:.6f},{supports}"
    )


def emit_csv(rows: list[SweepRow], path) -> None:
    """Write sweep rows as CSV; fixed 6-decimal floats keep output stable."""
    lines = [CSV_HEADER] + [_csv_line(r) for r in rows]
    _write_text(path, "\n".join(lines) + "\n")


def emit_plot_data(rows: list[SweepRow], prefix) -> list[str]:
    """Write one two-column .dat file per (model, confidence metric).

    Lines are ``accuracy metric`` pairs in sweep order, ready for plotting
    accuracy against confidence. Returns the written paths.
    """
    order: list[str] = []
    for row in rows:
        if row.model not in order:
            order.append(row.model)
    written = []
    for kind in order:
        for metric in PLOT_METRICS:
            lines = [
                f"{row.accuracy:.6f} {getattr(row, metric):.6f}" for row in rows if row.model == kind
            ]
            path = f"{prefix}_{kind}_{metric}.dat"
            _write_text(path, "\n".join(lines) + "\n")
            written.append(path)
    return written


def _write_text(path, content: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
    except OSError as exc:
        raise DataError(f"cannot write {path}: {exc}") from exc
