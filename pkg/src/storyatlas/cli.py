"""Command-line entry point for the storyatlas service."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import uvicorn

from .service import ServiceConfig, create_app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="storyatlas",
        description="Serve the curation store, query engine and story editor over HTTP.",
    )
    parser.add_argument(
        "--data",
        action="append",
        default=[],
        metavar="PATH",
        help="dataset document to load at startup (repeatable)",
    )
    parser.add_argument(
        "--persist-dir",
        default="./storyatlas_data",
        metavar="PATH",
        help="directory for persisted story files",
    )
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument(
        "--allow-origin",
        default=None,
        metavar="ORIGIN",
        help="enable CORS for this frontend origin",
    )
    parser.add_argument(
        "--lenient-ingest",
        action="store_true",
        help="quarantine bad dataset records instead of failing startup",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = ServiceConfig(
        persist_dir=Path(args.persist_dir),
        data_paths=tuple(Path(p) for p in args.data),
        allow_origin=args.allow_origin,
        lenient_ingest=args.lenient_ingest,
    )
    try:
        app = create_app(config)
    except Exception as exc:
        print(f"storyatlas: startup failed: {exc}", file=sys.stderr)
        return 2
    uvicorn.run(app, host="127.0.0.1", port=args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
