"""Response scorers: a dependency-free lexical scorer and a wire-protocol client.

The wire protocol is line-delimited JSON over a byte stream. One frame per
line, canonical encoding (sorted keys, no spaces), scores rounded to six
decimals. Request/response correlation is by the integer "id" field.
"""
from __future__ import annotations

import json
import math
import re
import socket
from collections import Counter

_WORD_RE = re.compile(r"[\w'-]+")


class ScorerError(RuntimeError):
    """Transport failure, protocol violation, or unsupported capability."""


def frame(obj: dict) -> bytes:
    """Canonical wire encoding of one frame."""
    return (json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n").encode("utf-8")


def parse_frame(line: bytes | str) -> dict:
    if isinstance(line, bytes):
        line = line.decode("utf-8")
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ScorerError(f"bad frame: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ScorerError("frame is not a JSON object")
    return obj


def round_scores(scores: list[float]) -> list[float]:
    return [round(float(s), 6) for s in scores]


def _tokens(text: str) -> list[str]:
    return [t.casefold() for t in _WORD_RE.findall(text)]


class NativeScorer:
    """Term-frequency/inverse-document-frequency cosine between context and
    candidate, fit over the scored batch. Stateless across calls."""

    mode = "pointwise"
    transport = "native"

    def score_batch(self, context: str, candidates: list[str]) -> list[float]:
        docs = [_tokens(context)] + [_tokens(c) for c in candidates]
        n_docs = len(docs)
        df: Counter = Counter()
        for doc in docs:
            df.update(set(doc))
        idf = {w: math.log((1 + n_docs) / (1 + c)) + 1.0 for w, c in df.items()}

        def vec(doc: list[str]) -> dict[str, float]:
            tf = Counter(doc)
            # Sublinear tf keeps names repeated across the whole context from
            # drowning out the tokens of the actual question.
            return {w: (1.0 + math.log(tf[w])) * idf[w] for w in tf}

        def cosine(a: dict[str, float], b: dict[str, float]) -> float:
            dot = sum(v * b.get(w, 0.0) for w, v in a.items())
            na = math.sqrt(sum(v * v for v in a.values()))
            nb = math.sqrt(sum(v * v for v in b.values()))
            if na == 0.0 or nb == 0.0:
                return 0.0
            return dot / (na * nb)

        ctx = vec(docs[0])
        return [cosine(ctx, vec(doc)) for doc in docs[1:]]

    def similarity(self, a: str, b: str) -> float:
        return self.score_batch(a, [b])[0]

    def train(self, **_kwargs) -> dict:
        raise ScorerError("native scorer does not support training")

    def close(self) -> None:
        pass


class SidecarScorer:
    """Client for an external scorer speaking the line protocol over TCP."""

    transport = "sidecar"

    def __init__(self, host: str = "127.0.0.1", port: int = 7601,
                 timeout: float = 120.0, mode: str = "pointwise"):
        self.mode = mode
        self._next_id = 0
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._reader = self._sock.makefile("rb")

    def _roundtrip(self, payload: dict) -> dict:
        self._next_id += 1
        payload = {"id": self._next_id, **payload}
        try:
            self._sock.sendall(frame(payload))
            while True:
                line = self._reader.readline()
                if not line:
                    raise ScorerError(f"connection closed mid-request "
                                      f"(batch id {payload['id']})")
                reply = parse_frame(line)
                if reply.get("id") == payload["id"]:
                    break
        except OSError as exc:
            raise ScorerError(f"transport failure on batch id "
                              f"{payload['id']}: {exc}") from exc
        if "error" in reply:
            raise ScorerError(f"batch id {payload['id']}: {reply['error']}")
        return reply

    def score_batch(self, context: str, candidates: list[str]) -> list[float]:
        reply = self._roundtrip({"op": "score", "context": context,
                                 "candidates": list(candidates)})
        scores = reply.get("scores")
        if not isinstance(scores, list) or len(scores) != len(candidates):
            raise ScorerError("malformed scores in reply")
        return [float(s) for s in scores]

    def train(self, mode: str, examples: list, epochs: int = 10,
              batch_size: int = 5) -> dict:
        if not examples:
            raise ScorerError("training stream is empty")
        return self._roundtrip({"op": "train", "mode": mode, "epochs": epochs,
                                "batch_size": batch_size, "examples": examples})

    def close(self) -> None:
        try:
            self._reader.close()
            self._sock.close()
        except OSError:
            pass
