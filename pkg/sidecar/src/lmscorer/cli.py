"""Command-line entry point for the scoring sidecar."""
from __future__ import annotations

import argparse
import os
import sys

from .model import HashModel, TinyEncoderConfig, TinyEncoderModel
from .server import serve_stdio, serve_tcp


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmscorer",
        description="Response-scoring sidecar speaking line-delimited JSON")
    transport = parser.add_mutually_exclusive_group(required=True)
    transport.add_argument("--port", type=int, metavar="PORT",
                           help="serve TCP on this port")
    transport.add_argument("--stdio", action="store_true",
                           help="serve one session over stdin/stdout")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--model", choices=["tiny", "hash"], default="tiny",
                        help="hash is the model-free conformance rule")
    parser.add_argument("--checkpoint", default=None, metavar="DIR",
                        help="load weights from DIR if present; training "
                             "requests save back to it")
    parser.add_argument("--seed", type=int, default=None,
                        help="init seed for a fresh tiny model")
    return parser


def make_model(args):
    if args.model == "hash":
        return HashModel()
    if args.checkpoint and os.path.isdir(args.checkpoint):
        return TinyEncoderModel.load(args.checkpoint)
    if args.seed is not None:
        return TinyEncoderModel(TinyEncoderConfig(seed=args.seed))
    return TinyEncoderModel()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    model = make_model(args)
    checkpoint = args.checkpoint if args.model == "tiny" else None
    if args.stdio:
        serve_stdio(model, checkpoint)
        return 0
    print(f"serving {args.model} model on {args.host}:{args.port}",
          file=sys.stderr)
    try:
        serve_tcp(model, args.host, args.port, checkpoint)
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    sys.exit(main())
