"""HTTP service exposing the simplex operations, metrics, models, and sweeps.

Errors raised by the library surface as structured 400 responses:
``{"error": {"category": "config" | "data" | "model", "message": ...}}``.
Clients (including the bundled CLI) map the category to an exit code.
"""

from __future__ import annotations

import json

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response

from .. import classifier, harness, metrics, models, simplex
from ..errors import ConfidexError, ConfigError, InvalidDistributionError
from . import schemas

__version__ = "0.1.0"


class NonFiniteJSONResponse(JSONResponse):
    """JSON rendering that writes -inf as -Infinity instead of refusing it.

    Model documents legitimately contain -inf log parameters; the stock
    response class renders with allow_nan=False and would 500 on them.
    """

    def render(self, content) -> bytes:
        return json.dumps(
            content, ensure_ascii=False, allow_nan=True, separators=(",", ":")
        ).encode("utf-8")


def _as_distribution(probs: list[float]) -> simplex.Distribution:
    try:
        return simplex.Distribution(probs)
    except InvalidDistributionError as exc:
        # Bad numbers in a request body are the caller's problem, not the model's.
        raise ConfigError(str(exc)) from exc


def _records(body: list[schemas.RecordIn]) -> list[metrics.PredictionRecord]:
    return [
        metrics.PredictionRecord(true_class=r.true_class, predicted=_as_distribution(r.probs))
        for r in body
    ]


def _source(body: schemas.CorpusSourceIn) -> harness.CorpusSource:
    return harness.CorpusSource(
        path=body.path, kind=body.kind, label_column=body.label_column, text_column=body.text_column
    )


def create_app() -> FastAPI:
    app = FastAPI(title="confidex", version=__version__, default_response_class=NonFiniteJSONResponse)

    @app.exception_handler(ConfidexError)
    async def _confidex_error(_request: Request, exc: ConfidexError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"error": {"category": exc.category, "message": str(exc)}},
        )

    @app.get("/health", response_model=schemas.HealthResponse)
    def health() -> schemas.HealthResponse:
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/simplex/map", response_model=schemas.MapResponse)
    def simplex_map(body: schemas.ProbsRequest) -> schemas.MapResponse:
        p = _as_distribution(body.probs)
        return schemas.MapResponse(probs=p.probs.tolist(), mapped=simplex.complement_map(p).probs.tolist())

    @app.post("/simplex/entropy", response_model=schemas.EntropyResponse)
    def simplex_entropy(body: schemas.ProbsRequest) -> schemas.EntropyResponse:
        p = _as_distribution(body.probs)
        h = simplex.entropy(p)
        top = float(np.log(p.n))
        return schemas.EntropyResponse(entropy=h, max_entropy=top, entropy_fraction=h / top)

    @app.post("/metrics/evaluate", response_model=schemas.MetricsResponse)
    def metrics_evaluate(body: schemas.MetricsRequest) -> schemas.MetricsResponse:
        records = _records(body.records)
        n = records[0].predicted.n
        response = schemas.MetricsResponse(
            n_classes=n,
            n_records=len(records),
            accuracy=metrics.accuracy(records),
            entropy_score=metrics.entropy_score(records),
            purity=metrics.purity(metrics.prob_confusion_matrix(records, n)),
        )
        if body.include_confusion:
            response.confusion = metrics.hard_confusion_matrix(records, n).tolist()
        return response

    @app.post("/models/fit", response_model=schemas.FitResponse)
    def models_fit(body: schemas.FitRequest) -> Response:
        corpus = _source(body.data).load()
        clf = classifier.fit_text_classifier(
            corpus, body.model_kind, alpha=body.alpha, min_doc_freq=body.min_doc_freq
        )
        payload = schemas.FitResponse(
            model=classifier.classifier_to_document(clf),
            train_supports=list(corpus.supports()),
        )
        # Serialize through the model itself: the route-level serializer wraps
        # the response type in Annotated, which drops the model's non-finite
        # float handling and would degrade -inf log parameters to null.
        return Response(content=payload.model_dump_json(), media_type="application/json")

    @app.post("/models/predict", response_model=schemas.PredictResponse)
    def models_predict(body: schemas.PredictRequest) -> schemas.PredictResponse:
        clf = classifier.classifier_from_document(body.model)
        dists = classifier.predict_texts(clf, body.texts)
        return schemas.PredictResponse(
            class_names=list(clf.class_names),
            distributions=[d.probs.tolist() for d in dists],
        )

    @app.post("/models/evaluate", response_model=schemas.EvalResponse)
    def models_evaluate(body: schemas.EvalRequest) -> schemas.EvalResponse:
        clf = classifier.classifier_from_document(body.model)
        corpus = _source(body.data).load()
        report = classifier.evaluate_classifier(clf, corpus, include_confusion=body.include_confusion)
        return schemas.EvalResponse(
            n_classes=report.n_classes,
            class_names=list(report.class_names),
            test_counts=list(report.test_counts),
            accuracy=report.accuracy,
            entropy_score=report.entropy_score,
            purity=report.purity,
            confusion=None if report.confusion is None else report.confusion.tolist(),
        )

    @app.post("/sweep", response_model=schemas.SweepResponse)
    def sweep(body: schemas.SweepRequest) -> schemas.SweepResponse:
        config = harness.SweepConfig(source=_source(body.data))
        config.models = tuple(body.models)
        config.sweep = body.sweep
        if body.fractions is not None:
            config.fractions = tuple(body.fractions)
        if body.ratios is not None:
            config.ratios = tuple(body.ratios)
        if body.scales is not None:
            config.scales = tuple(body.scales)
        if body.thresholds is not None:
            config.thresholds = tuple(body.thresholds)
        config.alpha = body.alpha
        config.alpha_overrides = dict(body.alpha_overrides)
        config.test_fraction = body.test_fraction
        config.seed = body.seed
        config.min_doc_freq = body.min_doc_freq
        rows = harness.run_sweep(config)
        return schemas.SweepResponse(
            rows=[
                schemas.SweepRowOut(
                    model=row.model,
                    sweep_param=row.sweep_param,
                    n_classes=row.n_classes,
                    accuracy=row.accuracy,
                    entropy_score=row.entropy_score,
                    purity=row.purity,
                    train_supports=list(row.train_supports),
                )
                for row in rows
            ]
        )

    return app


app = create_app()
