"""Field-name adapter for externally produced dialogue files.

Released annotation dumps differ from the canonical schema only in naming.
The whole mapping lives in this one translation unit so schema drift stays
out of the rest of the codebase.
"""
from __future__ import annotations

_DIALOGUE_KEYS = {
    "id": ("id", "dialogue_id", "did", "name"),
    "org": ("org", "organization", "organisation", "org_file"),
    "task": ("task", "task_text", "goal"),
    "turns": ("turns", "utterances", "log"),
}

_TURN_KEYS = {
    "i": ("i", "index", "turn", "turn_id", "turn_index"),
    "speaker": ("speaker", "role", "side"),
    "asr": ("asr", "asr_text", "text", "transcription", "utterance"),
    "gold": ("gold", "gold_text", "gold_transcription", "transcript"),
    "intent": ("intent", "dialogue_act", "act"),
    "mentions": ("mentions", "entity_links", "links", "annotations"),
}

_MENTION_KEYS = {
    "start": ("start", "span_start", "begin", "from"),
    "end": ("end", "span_end", "stop", "to"),
    "surface": ("surface", "text", "span_text", "mention"),
    "targets": ("targets", "target", "entity", "entities"),
    "constraints": ("constraints", "attributes"),
}

_SPEAKERS = {
    "user": "user", "visitor": "user", "human": "user", "caller": "user",
    "agent": "agent", "robot": "agent", "system": "agent", "wizard": "agent",
}

_MARKERS = {
    "spurious": "SPURIOUS", "new": "NEW", "new_entity": "NEW",
}


def _pick(raw: dict, aliases: tuple[str, ...], default=None):
    for key in aliases:
        if key in raw:
            return raw[key]
    return default


def _adapt_target(raw) -> dict | str:
    if isinstance(raw, str):
        return _MARKERS.get(raw.lower(), raw)
    kind = _pick(raw, ("kind", "type", "entity_type"))
    name = _pick(raw, ("name", "label", "id", "entity"))
    return {"kind": str(kind).lower(), "name": name}


def _adapt_mention(raw: dict) -> dict:
    targets = _pick(raw, _MENTION_KEYS["targets"], default=[])
    if isinstance(targets, str):
        targets = _adapt_target(targets)
        if not isinstance(targets, str):
            targets = [targets]
    elif isinstance(targets, dict):
        targets = [_adapt_target(targets)]
    else:
        adapted = [_adapt_target(t) for t in targets]
        markers = [t for t in adapted if isinstance(t, str)]
        targets = markers[0] if markers else adapted
    out = {
        "start": int(_pick(raw, _MENTION_KEYS["start"])),
        "end": int(_pick(raw, _MENTION_KEYS["end"])),
        "surface": _pick(raw, _MENTION_KEYS["surface"]),
        "targets": targets,
    }
    constraints = _pick(raw, _MENTION_KEYS["constraints"])
    if constraints:
        out["constraints"] = [
            {"attr": _pick(c, ("attr", "attribute", "key")),
             "value": _pick(c, ("value", "val"))}
            for c in constraints
        ]
    return out


def _adapt_intent(raw) -> dict | None:
    if raw is None:
        return None
    if isinstance(raw, str):
        return {"name": raw, "args": []}
    return {"name": _pick(raw, ("name", "predicate", "intent")),
            "args": list(_pick(raw, ("args", "arguments", "slots"), default=[]))}


def _adapt_turn(raw: dict, fallback_index: int) -> dict:
    index = _pick(raw, _TURN_KEYS["i"], default=fallback_index)
    speaker = str(_pick(raw, _TURN_KEYS["speaker"], default="user")).lower()
    mentions = _pick(raw, _TURN_KEYS["mentions"], default=[]) or []
    return {
        "i": int(index),
        "speaker": _SPEAKERS.get(speaker, speaker),
        "asr": _pick(raw, _TURN_KEYS["asr"], default="") or "",
        "gold": _pick(raw, _TURN_KEYS["gold"]),
        "intent": _adapt_intent(_pick(raw, _TURN_KEYS["intent"])),
        "mentions": [_adapt_mention(m) for m in mentions],
    }


def adapt_dialogue(raw: dict) -> dict:
    """Rewrite an external dialogue dict into the canonical schema."""
    turns_raw = _pick(raw, _DIALOGUE_KEYS["turns"], default=[])
    return {
        "id": str(_pick(raw, _DIALOGUE_KEYS["id"])),
        "org": _pick(raw, _DIALOGUE_KEYS["org"], default=""),
        "task": _pick(raw, _DIALOGUE_KEYS["task"], default=""),
        "turns": [_adapt_turn(t, k + 1) for k, t in enumerate(turns_raw)],
    }
