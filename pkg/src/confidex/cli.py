"""Command-line client for the confidex service.

Every command talks to the HTTP API. By default an in-process service
instance handles the requests, so no server needs to run; ``--server`` (or
the CONFIDEX_SERVER environment variable) points the same commands at a
remote instance instead.

Exit codes: 0 success, 1 usage or configuration problem, 2 data problem,
3 numerical or model failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import httpx

from . import harness
from .errors import ConfidexError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_MODEL = 3

_CATEGORY_CODES = {"config": EXIT_USAGE, "data": EXIT_DATA, "model": EXIT_MODEL}


class _Failure(Exception):
    """Abort the command with a message and exit code."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this tool reserves 2 for data
    # problems, so usage errors must land on 1 instead.
    def error(self, message: str) -> None:
        raise _Failure(EXIT_USAGE, f"{self.format_usage().rstrip()}\n{self.prog}: error: {message}")


def _open_client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # the in-process transport warns about its own internals on import;
        # that noise is not actionable for someone running a command
        warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
        from fastapi.testclient import TestClient

    from .service.app import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _call(client, method: str, path: str, body: dict | None = None) -> dict:
    # Encode the body here: model documents may carry -inf parameters, which
    # the client library's own json= keyword refuses to serialize.
    content = None if body is None else json.dumps(body, allow_nan=True).encode("utf-8")
    headers = {"content-type": "application/json"} if content is not None else None
    try:
        response = client.request(method, path, content=content, headers=headers)
    except httpx.HTTPError as exc:
        raise _Failure(EXIT_DATA, f"cannot reach the server: {exc}") from exc
    if response.status_code == 200:
        return response.json()
    if response.status_code == 400:
        try:
            error = response.json()["error"]
            category, message = error["category"], error["message"]
        except (ValueError, KeyError, TypeError):
            raise _Failure(EXIT_MODEL, f"malformed error response: {response.text[:500]}") from None
        raise _Failure(_CATEGORY_CODES.get(category, EXIT_MODEL), f"{category} error: {message}")
    if response.status_code == 422:
        raise _Failure(EXIT_USAGE, f"invalid request: {response.text[:500]}")
    raise _Failure(EXIT_MODEL, f"server failure (HTTP {response.status_code}): {response.text[:500]}")


def _source_body(args) -> dict:
    return {
        "path": args.data,
        "kind": args.data_kind,
        "label_column": args.label_column,
        "text_column": args.text_column,
    }


def _add_data_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", required=True, help="corpus path: a class-per-directory tree or a CSV file")
    parser.add_argument("--data-kind", choices=("directory", "csv"), default="directory")
    parser.add_argument("--label-column", default="label", help="label column for CSV corpora")
    parser.add_argument("--text-column", default="text", help="text column for CSV corpora")


def cmd_map(args, client) -> int:
    try:
        probs = [float(tok) for tok in args.dist.split(",")]
    except ValueError:
        raise _Failure(EXIT_USAGE, f"cannot parse {args.dist!r} as comma-separated numbers") from None
    result = _call(client, "POST", "/simplex/map", {"probs": probs})
    print(",".join(f"{v:.12g}" for v in result["mapped"]))
    return EXIT_OK


def cmd_fit(args, client) -> int:
    body = {
        "data": _source_body(args),
        "model_kind": args.model_kind,
        "alpha": args.alpha,
        "min_doc_freq": args.min_doc_freq,
    }
    result = _call(client, "POST", "/models/fit", body)
    document = result["model"]
    try:
        with open(args.out, "w", encoding="utf-8") as handle:
            json.dump(document, handle)
            handle.write("\n")
    except OSError as exc:
        raise _Failure(EXIT_DATA, f"cannot write model file {args.out}: {exc}") from exc
    print(
        f"fitted {document['kind']} over {document['n_classes']} classes "
        f"({document['vocab_size']} features) -> {args.out}"
    )
    return EXIT_OK


def _load_model_document(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise _Failure(EXIT_DATA, f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _Failure(EXIT_DATA, f"model file {path} is not valid JSON: {exc}") from exc


def cmd_eval(args, client) -> int:
    body = {
        "model": _load_model_document(args.model),
        "data": _source_body(args),
        "include_confusion": args.confusion,
    }
    result = _call(client, "POST", "/models/evaluate", body)
    print(f"n_classes: {result['n_classes']}")
    print(f"classes: {','.join(result['class_names'])}")
    print(f"test_counts: {';'.join(str(c) for c in result['test_counts'])}")
    for key in ("accuracy", "entropy_score", "purity"):
        print(f"{key}: {result[key]:.6f}")
    if result.get("confusion") is not None:
        print("confusion:")
        names = result["class_names"]
        print("true\\predicted," + ",".join(names))
        for name, row in zip(names, result["confusion"]):
            print(name + "," + ",".join(str(c) for c in row))
    return EXIT_OK


def cmd_sweep(args, client) -> int:
    config = harness.parse_config_file(args.config)
    env_seed = os.environ.get("CONFIDEX_SEED")
    if env_seed is not None:
        try:
            config.seed = int(env_seed)
        except ValueError:
            raise _Failure(EXIT_USAGE, f"CONFIDEX_SEED must be an integer, got {env_seed!r}") from None
        config.validate()
    body = {
        "data": {
            "path": config.source.path,
            "kind": config.source.kind,
            "label_column": config.source.label_column,
            "text_column": config.source.text_column,
        },
        "models": list(config.models),
        "sweep": config.sweep,
        "fractions": list(config.fractions),
        "ratios": list(config.ratios),
        "scales": list(config.scales),
        "thresholds": list(config.thresholds),
        "alpha": config.alpha,
        "alpha_overrides": dict(config.alpha_overrides),
        "test_fraction": config.test_fraction,
        "seed": config.seed,
        "min_doc_freq": config.min_doc_freq,
    }
    result = _call(client, "POST", "/sweep", body)
    rows = [
        harness.SweepRow(
            model=r["model"],
            sweep_param=r["sweep_param"],
            n_classes=r["n_classes"],
            accuracy=r["accuracy"],
            entropy_score=r["entropy_score"],
            purity=r["purity"],
            train_supports=tuple(r["train_supports"]),
        )
        for r in result["rows"]
    ]
    if config.output:
        harness.emit_csv(rows, config.output)
        print(f"wrote {len(rows)} rows to {config.output}")
    else:
        lines = [harness.CSV_HEADER] + [harness._csv_line(r) for r in rows]
        print("\n".join(lines))
    if config.plot_data:
        written = harness.emit_plot_data(rows, config.plot_data)
        print(f"wrote {len(written)} plot data files under {config.plot_data}_*")
    return EXIT_OK


def cmd_serve(args, _client) -> int:
    import uvicorn

    uvicorn.run("confidex.service.app:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="confidex", description="confidence metrics and complement Naive Bayes experiments")
    common = _Parser(add_help=False)
    common.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default is an in-process instance (env: CONFIDEX_SERVER)",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    p_sweep = commands.add_parser("sweep", parents=[common], help="run a sweep from a TOML config")
    p_sweep.add_argument("--config", required=True, help="path to the sweep config")
    p_sweep.set_defaults(handler=cmd_sweep)

    p_eval = commands.add_parser("eval", parents=[common], help="evaluate a saved model on a labeled corpus")
    p_eval.add_argument("--model", required=True, help="path to a model JSON file")
    _add_data_options(p_eval)
    p_eval.add_argument("--confusion", action="store_true", help="also print the hard confusion matrix")
    p_eval.set_defaults(handler=cmd_eval)

    p_map = commands.add_parser("map", parents=[common], help="apply the complement transformation")
    p_map.add_argument("dist", help="comma-separated probabilities, e.g. 0.5,0.3,0.2")
    p_map.set_defaults(handler=cmd_map)

    p_fit = commands.add_parser("fit", parents=[common], help="fit a model and save it as JSON")
    p_fit.add_argument("--model-kind", required=True, help="bernoulli, complement_bernoulli, multinomial, or complement_multinomial")
    p_fit.add_argument("--alpha", type=float, default=1.0, help="smoothing strength (default 1.0)")
    _add_data_options(p_fit)
    p_fit.add_argument("--min-doc-freq", type=int, default=1, help="drop tokens seen in fewer documents")
    p_fit.add_argument("--out", required=True, help="where to write the model JSON")
    p_fit.set_defaults(handler=cmd_fit)

    p_serve = commands.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "serve":
            return cmd_serve(args, None)
        server = args.server or os.environ.get("CONFIDEX_SERVER") or None
        client = _open_client(server)
        try:
            return args.handler(args, client)
        finally:
            client.close()
    except _Failure as failure:
        print(f"confidex: {failure}", file=sys.stderr)
        return failure.code
    except ConfidexError as exc:
        print(f"confidex: {exc.category} error: {exc}", file=sys.stderr)
        return _CATEGORY_CODES[exc.category]


if __name__ == "__main__":
    sys.exit(main())
