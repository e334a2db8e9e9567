"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class Schema(BaseModel):
    # Several bodies carry model documents in fields starting with "model",
    # which pydantic would otherwise reserve for its own namespace. Non-finite
    # floats must survive serialization: unsmoothed models carry -inf
    # log parameters, and the default would silently turn them into null.
    model_config = ConfigDict(protected_namespaces=(), ser_json_inf_nan="constants")


class ProbsRequest(Schema):
    probs: list[float] = Field(min_length=2)


class MapResponse(Schema):
    probs: list[float]
    mapped: list[float]


class EntropyResponse(Schema):
    entropy: float
    max_entropy: float
    entropy_fraction: float


class RecordIn(Schema):
    true_class: int
    probs: list[float] = Field(min_length=2)


class MetricsRequest(Schema):
    records: list[RecordIn] = Field(min_length=1)
    include_confusion: bool = False


class MetricsResponse(Schema):
    n_classes: int
    n_records: int
    accuracy: float
    entropy_score: float
    purity: float
    confusion: list[list[int]] | None = None


class CorpusSourceIn(Schema):
    path: str
    kind: Literal["directory", "csv"] = "directory"
    label_column: str = "label"
    text_column: str = "text"


class FitRequest(Schema):
    data: CorpusSourceIn
    model_kind: str
    alpha: float = 1.0
    min_doc_freq: int = 1


class FitResponse(Schema):
    model: dict[str, Any]
    train_supports: list[int]


class PredictRequest(Schema):
    model: dict[str, Any]
    texts: list[str] = Field(min_length=1)


class PredictResponse(Schema):
    class_names: list[str]
    distributions: list[list[float]]


class EvalRequest(Schema):
    model: dict[str, Any]
    data: CorpusSourceIn
    include_confusion: bool = False


class EvalResponse(Schema):
    n_classes: int
    class_names: list[str]
    test_counts: list[int]
    accuracy: float
    entropy_score: float
    purity: float
    confusion: list[list[int]] | None = None


class SweepRequest(Schema):
    data: CorpusSourceIn
    models: list[str] = Field(min_length=1)
    sweep: str = "balanced_fraction"
    fractions: list[float] | None = None
    ratios: list[float] | None = None
    scales: list[float] | None = None
    thresholds: list[int] | None = None
    alpha: float = 1.0
    alpha_overrides: dict[str, float] = Field(default_factory=dict)
    test_fraction: float = 0.25
    seed: int = 0
    min_doc_freq: int = 1


class SweepRowOut(Schema):
    model: str
    sweep_param: float | int
    n_classes: int
    accuracy: float
    entropy_score: float
    purity: float
    train_supports: list[int]


class SweepResponse(Schema):
    rows: list[SweepRowOut]


class HealthResponse(Schema):
    status: str
    version: str
