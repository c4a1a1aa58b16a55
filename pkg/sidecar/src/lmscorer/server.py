"""Protocol loop: read request lines, write response frames.

Each connection is served by one loop; a malformed or unsupported request
produces an error frame and the connection stays open. Training requests
are serialized process-wide so only one job touches the weights at a time.
"""
from __future__ import annotations

import socketserver
import sys
import threading

from .finetune import FineTuneConfig, save_checkpoint
from .protocol import ProtocolError, frame, parse_frame, round_scores

_TRAIN_LOCK = threading.Lock()


def handle_request(req: dict, model, checkpoint_dir: str | None = None) -> dict:
    rid = req.get("id")
    op = req.get("op")
    if op == "score":
        candidates = req.get("candidates")
        if not isinstance(candidates, list):
            return {"id": rid, "error": "missing field 'candidates'"}
        context = req.get("context")
        if not isinstance(context, str):
            return {"id": rid, "error": "missing field 'context'"}
        try:
            scores = model.score_batch(context, [str(c) for c in candidates])
        except Exception as exc:
            return {"id": rid, "error": f"scoring failed: {exc}"}
        return {"id": rid, "scores": round_scores(scores)}
    if op == "train":
        examples = req.get("examples")
        if not examples:
            return {"id": rid, "error": "training stream is empty"}
        try:
            config = FineTuneConfig(
                epochs=int(req.get("epochs", 10)),
                batch_size=int(req.get("batch_size", 5)),
                learning_rate=float(req.get("learning_rate", 1e-6)),
                mode=req.get("mode", "pointwise"))
            with _TRAIN_LOCK:
                result = model.train_on(examples, config)
                if checkpoint_dir:
                    save_checkpoint(model, checkpoint_dir, result, config)
        except (ValueError, TypeError) as exc:
            return {"id": rid, "error": str(exc)}
        return {"id": rid, "status": "ok",
                "final_loss": round(float(result["final_loss"]), 6)}
    return {"id": rid, "error": f"unsupported op {op!r}"}


def serve_stream(reader, writer, model, checkpoint_dir: str | None = None) -> None:
    """Pump one byte stream until EOF; never let one bad line kill the loop."""
    while True:
        line = reader.readline()
        if not line:
            return
        try:
            req = parse_frame(line)
        except ProtocolError as exc:
            reply = {"id": None, "error": str(exc)}
        else:
            reply = handle_request(req, model, checkpoint_dir)
        writer.write(frame(reply))
        writer.flush()


def serve_stdio(model, checkpoint_dir: str | None = None) -> None:
    serve_stream(sys.stdin.buffer, sys.stdout.buffer, model, checkpoint_dir)


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        serve_stream(self.rfile, self.wfile, self.server.model,
                     self.server.checkpoint_dir)


class ScorerServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, address, model, checkpoint_dir: str | None = None):
        super().__init__(address, _Handler)
        self.model = model
        self.checkpoint_dir = checkpoint_dir


def serve_tcp(model, host: str = "127.0.0.1", port: int = 7601,
              checkpoint_dir: str | None = None) -> None:
    with ScorerServer((host, port), model, checkpoint_dir) as server:
        server.serve_forever()
