"""Canonical annotated-dialogue model, file IO, split handling, and graph replay."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field

from .graph import KnowledgeGraph, NodeKind, EdgeKind
from .orggen import Organization

SPURIOUS = "SPURIOUS"
NEW = "NEW"

_KINDS = {"person", "event", "room", "group"}


class DialogueError(ValueError):
    """Malformed or unresolvable dialogue data."""


@dataclass(frozen=True)
class EntityRef:
    kind: str
    name: str

    def to_json_dict(self) -> dict:
        return {"kind": self.kind, "name": self.name}


@dataclass
class Mention:
    start: int
    end: int
    surface: str
    # Either a list of entity references or one of the markers above.
    targets: list[EntityRef] | str
    constraints: list[dict[str, str]] = field(default_factory=list)

    @property
    def is_spurious(self) -> bool:
        return self.targets == SPURIOUS

    @property
    def is_new(self) -> bool:
        return self.targets == NEW

    def to_json_dict(self) -> dict:
        if isinstance(self.targets, str):
            targets: list | str = self.targets
        else:
            targets = [t.to_json_dict() for t in self.targets]
        out = {"start": self.start, "end": self.end, "surface": self.surface,
               "targets": targets}
        if self.constraints:
            out["constraints"] = self.constraints
        return out


@dataclass
class Intent:
    name: str
    args: list[str] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"name": self.name, "args": list(self.args)}


@dataclass
class Turn:
    i: int
    speaker: str
    asr: str
    gold: str | None = None
    intent: Intent | None = None
    mentions: list[Mention] = field(default_factory=list)

    @property
    def text(self) -> str:
        """The transcript mentions are annotated against."""
        return self.asr if self.asr else (self.gold or "")

    def to_json_dict(self) -> dict:
        return {
            "i": self.i,
            "speaker": self.speaker,
            "asr": self.asr,
            "gold": self.gold,
            "intent": self.intent.to_json_dict() if self.intent else None,
            "mentions": [m.to_json_dict() for m in self.mentions],
        }


@dataclass
class DialogueRecord:
    id: str
    org: str
    task: str
    turns: list[Turn]

    def to_json_dict(self) -> dict:
        return {"id": self.id, "org": self.org, "task": self.task,
                "turns": [t.to_json_dict() for t in self.turns]}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True,
                          ensure_ascii=False)


def _parse_targets(raw) -> list[EntityRef] | str:
    if isinstance(raw, str):
        if raw not in (SPURIOUS, NEW):
            raise DialogueError(f"unknown mention target marker {raw!r}")
        return raw
    refs = []
    for item in raw:
        kind = item["kind"]
        if kind not in _KINDS:
            raise DialogueError(f"unknown target kind {kind!r}")
        refs.append(EntityRef(kind=kind, name=item["name"]))
    if not refs:
        raise DialogueError("empty target list; use SPURIOUS or NEW markers")
    return refs


def dialogue_from_json_dict(data: dict) -> DialogueRecord:
    turns = []
    for t in data["turns"]:
        intent = None
        if t.get("intent"):
            intent = Intent(name=t["intent"]["name"],
                            args=list(t["intent"].get("args", [])))
        mentions = [
            Mention(start=m["start"], end=m["end"], surface=m["surface"],
                    targets=_parse_targets(m["targets"]),
                    constraints=list(m.get("constraints", [])))
            for m in t.get("mentions", [])
        ]
        turns.append(Turn(i=t["i"], speaker=t["speaker"], asr=t.get("asr", ""),
                          gold=t.get("gold"), intent=intent, mentions=mentions))
    return DialogueRecord(id=data["id"], org=data["org"],
                          task=data.get("task", ""), turns=turns)


def resolve_ref(ref: EntityRef, org: Organization,
                constraints: list[dict[str, str]] | None = None) -> list:
    """All organization entities matching a reference, narrowed by constraints."""
    if ref.kind == "person":
        matches = [p for p in org.persons if p.name == ref.name]
    elif ref.kind == "event":
        matches = [e for e in org.events if e.name == ref.name]
    elif ref.kind == "room":
        matches = [r for r in org.rooms if r.name == ref.name]
    else:
        matches = [g for g in org.groups if g == ref.name]
    if constraints and len(matches) > 1:
        for c in constraints:
            attr, want = c["attr"], c["value"]
            narrowed = [m for m in matches
                        if str(getattr(m, attr, None)) == want]
            if narrowed:
                matches = narrowed
    return matches


def validate_dialogue(record: DialogueRecord, org: Organization) -> None:
    if not record.turns:
        raise DialogueError(f"dialogue {record.id!r} has no turns")
    for pos, turn in enumerate(record.turns, start=1):
        if turn.i != pos:
            raise DialogueError(
                f"dialogue {record.id!r}: turn indices not contiguous at {turn.i}")
        if turn.speaker not in ("user", "agent"):
            raise DialogueError(
                f"dialogue {record.id!r} turn {turn.i}: speaker {turn.speaker!r}")
        text = turn.text
        for m in turn.mentions:
            if not (0 <= m.start <= m.end <= len(text)):
                raise DialogueError(
                    f"dialogue {record.id!r} turn {turn.i}: span "
                    f"[{m.start},{m.end}) outside text")
            if text[m.start:m.end] != m.surface:
                raise DialogueError(
                    f"dialogue {record.id!r} turn {turn.i}: surface "
                    f"{m.surface!r} != spanned text {text[m.start:m.end]!r}")
            if isinstance(m.targets, list):
                for ref in m.targets:
                    if not resolve_ref(ref, org, m.constraints):
                        raise DialogueError(
                            f"dialogue {record.id!r} turn {turn.i}: mention "
                            f"{m.surface!r} target {ref.kind}:{ref.name!r} "
                            f"not found in organization")


def load_dialogue(path: str, org: Organization) -> DialogueRecord:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise DialogueError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    record = dialogue_from_json_dict(data)
    validate_dialogue(record, org)
    return record


def export_dialogue(record: DialogueRecord, path: str | None = None) -> str:
    text = record.to_json() + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def split_ids(ids: list[str]) -> dict[str, list[str]]:
    """Deterministic 50/25/25 split keyed on a dialogue-id hash."""
    ordered = sorted(ids, key=lambda i: hashlib.sha1(i.encode("utf-8")).hexdigest())
    n = len(ordered)
    n_dev = round(n * 0.25)
    n_test = round(n * 0.25)
    n_train = n - n_dev - n_test
    return {
        "train": sorted(ordered[:n_train]),
        "dev": sorted(ordered[n_train:n_train + n_dev]),
        "test": sorted(ordered[n_train + n_dev:]),
    }


def load_split(root: str) -> dict[str, list[str]]:
    """Read split.json under root, or derive one from the dialogue files present."""
    all_ids = sorted(
        os.path.splitext(name)[0]
        for name in os.listdir(root)
        if name.endswith(".json") and name not in ("split.json",)
        and not name.startswith("org")
    )
    manifest_path = os.path.join(root, "split.json")
    if os.path.exists(manifest_path):
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = {k: sorted(v) for k, v in json.load(fh).items()}
        seen: set[str] = set()
        for part, ids in manifest.items():
            dupes = seen.intersection(ids)
            if dupes:
                raise DialogueError(
                    f"split manifest overlaps on {sorted(dupes)[:3]}")
            seen.update(ids)
        if all_ids and seen != set(all_ids):
            missing = sorted(set(all_ids) - seen)
            raise DialogueError(f"split manifest does not cover {missing[:3]}")
        return manifest
    return split_ids(all_ids)


def replay_dialogue(record: DialogueRecord, graph: KnowledgeGraph,
                    link_gold: bool = False) -> list[tuple[str, list[str]]]:
    """Feed every turn through the graph's utterance transformation.

    Returns (utterance id, mention node ids) per turn. With link_gold, each
    resolvable mention also gets its RefersTo edge to the gold entity node.
    """
    label_index: dict[tuple[str, str], list[str]] = {}
    if link_gold:
        for node in graph.nodes():
            label_index.setdefault((node.kind.value, node.label), []).append(node.id)
    out = []
    for turn in record.turns:
        t0 = float(turn.i) * 10.0
        utt_id, mention_ids = graph.add_utterance(
            speaker=turn.speaker, text=turn.text,
            t_start=t0, t_end=t0 + 5.0,
            mention_texts=[m.surface for m in turn.mentions])
        if link_gold:
            for m, mid in zip(turn.mentions, mention_ids):
                if not isinstance(m.targets, list):
                    continue
                for ref in m.targets:
                    for nid in label_index.get((ref.kind, ref.name), []):
                        graph.add_edge(mid, nid, EdgeKind.REFERS_TO)
        out.append((utt_id, mention_ids))
    return out


def gold_links(record: DialogueRecord, graph: KnowledgeGraph) -> dict[str, set[str]]:
    """Map gold (kind, name) targets onto graph node ids, keyed by 'turn:mention'."""
    label_index: dict[tuple[str, str], list[str]] = {}
    for node in graph.nodes():
        if node.kind in (NodeKind.PERSON, NodeKind.EVENT, NodeKind.ROOM,
                         NodeKind.GROUP):
            label_index.setdefault((node.kind.value, node.label), []).append(node.id)
    out: dict[str, set[str]] = {}
    for turn in record.turns:
        for j, m in enumerate(turn.mentions):
            key = f"{turn.i}:{j}"
            if isinstance(m.targets, list):
                ids: set[str] = set()
                for ref in m.targets:
                    ids.update(label_index.get((ref.kind, ref.name), []))
                out[key] = ids
            else:
                out[key] = set()
    return out
