"""Wire framing: one JSON object per line, canonical encoding.

Keys sorted, no whitespace separators, non-ASCII escaped, newline terminated.
Scores are rounded to six decimals before they hit the wire. These rules are
pinned by recorded golden transcripts shared with the engine's client, so
any change here is a protocol break.
"""
from __future__ import annotations

import json


class ProtocolError(RuntimeError):
    """Raised for lines that cannot be decoded into a request object."""


def frame(obj: dict) -> bytes:
    return (json.dumps(obj, sort_keys=True, separators=(",", ":"))
            + "\n").encode("utf-8")


def parse_frame(line: bytes | str) -> dict:
    if isinstance(line, bytes):
        line = line.decode("utf-8")
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"bad frame: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise ProtocolError("frame is not a JSON object")
    return obj


def round_scores(scores: list[float]) -> list[float]:
    return [round(float(s), 6) for s in scores]
