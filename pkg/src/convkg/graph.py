"""Dynamic conversational knowledge graph.

Holds background entities (persons, events, rooms, groups) together with the
dialogue itself (utterances and entity mentions), and is mutated turn by turn.
"""
from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator, Optional


class NodeKind(Enum):
    PERSON = "person"
    EVENT = "event"
    ROOM = "room"
    GROUP = "group"
    UTTERANCE = "utterance"
    MENTION = "mention"


class EdgeKind(Enum):
    ATTENDS = "attends"
    ORGANIZES = "organizes"
    LOCATED_IN = "located_in"
    MEMBER_OF = "member_of"
    HAS_OFFICE = "has_office"
    MENTIONS = "mentions"
    REFERS_TO = "refers_to"
    FOLLOWS = "follows"
    SAME_CHAIN = "same_chain"


#: Kinds a mention may legally be linked to.
LINKABLE_KINDS = frozenset(
    {NodeKind.PERSON, NodeKind.EVENT, NodeKind.ROOM, NodeKind.GROUP}
)

SPEAKERS = ("user", "agent")

UNKNOWN_TEXT = "[UNK]"

# Allowed (source kind set, target kind set) per edge kind.
_ENDPOINT_RULES: dict[EdgeKind, tuple[frozenset[NodeKind], frozenset[NodeKind]]] = {
    EdgeKind.ATTENDS: (frozenset({NodeKind.PERSON}), frozenset({NodeKind.EVENT})),
    EdgeKind.ORGANIZES: (frozenset({NodeKind.PERSON}), frozenset({NodeKind.EVENT})),
    EdgeKind.LOCATED_IN: (frozenset({NodeKind.EVENT}), frozenset({NodeKind.ROOM})),
    EdgeKind.MEMBER_OF: (frozenset({NodeKind.PERSON}), frozenset({NodeKind.GROUP})),
    EdgeKind.HAS_OFFICE: (frozenset({NodeKind.PERSON}), frozenset({NodeKind.ROOM})),
    EdgeKind.MENTIONS: (frozenset({NodeKind.UTTERANCE}), frozenset({NodeKind.MENTION})),
    EdgeKind.REFERS_TO: (frozenset({NodeKind.MENTION}), LINKABLE_KINDS),
    EdgeKind.FOLLOWS: (frozenset({NodeKind.UTTERANCE}), frozenset({NodeKind.UTTERANCE})),
    EdgeKind.SAME_CHAIN: (frozenset({NodeKind.MENTION}), frozenset({NodeKind.MENTION})),
}


class GraphError(Exception):
    pass


class UnknownNodeError(GraphError):
    pass


class EdgeConstraintError(GraphError):
    pass


class GraphValidationError(GraphError):
    pass


Edge = tuple[str, str, EdgeKind]


@dataclass
class Node:
    id: str
    kind: NodeKind
    label: str
    attrs: dict[str, str] = field(default_factory=dict)


class KnowledgeGraph:
    """Typed directed graph over named nodes with deduplicated labeled edges."""

    def __init__(self) -> None:
        self._nodes: dict[str, Node] = {}
        self._edges: list[Edge] = []
        self._edge_set: set[Edge] = set()
        self._out: dict[str, list[tuple[str, EdgeKind]]] = {}
        self._in: dict[str, list[tuple[str, EdgeKind]]] = {}
        self._next_id = 0
        self._last_utterance: Optional[str] = None

    # -- construction -----------------------------------------------------

    def add_node(self, kind: NodeKind, label: str, attrs: dict[str, str] | None = None) -> str:
        if not label:
            raise GraphError("node label must be non-empty")
        node_id = f"n{self._next_id}"
        self._next_id += 1
        self._nodes[node_id] = Node(node_id, kind, label, dict(attrs or {}))
        self._out[node_id] = []
        self._in[node_id] = []
        return node_id

    def _insert_node(self, node: Node) -> None:
        # Used by import/subgraph paths that must keep existing ids.
        if node.id in self._nodes:
            raise GraphError(f"duplicate node id {node.id!r}")
        self._nodes[node.id] = Node(node.id, node.kind, node.label, dict(node.attrs))
        self._out[node.id] = []
        self._in[node.id] = []
        m = re.fullmatch(r"n(\d+)", node.id)
        if m:
            self._next_id = max(self._next_id, int(m.group(1)) + 1)

    def add_edge(self, src: str, dst: str, kind: EdgeKind) -> Edge:
        if src not in self._nodes:
            raise UnknownNodeError(f"unknown source node {src!r}")
        if dst not in self._nodes:
            raise UnknownNodeError(f"unknown target node {dst!r}")
        src_kinds, dst_kinds = _ENDPOINT_RULES[kind]
        if self._nodes[src].kind not in src_kinds or self._nodes[dst].kind not in dst_kinds:
            raise EdgeConstraintError(
                f"{kind.value} edge not allowed from {self._nodes[src].kind.value} "
                f"to {self._nodes[dst].kind.value}"
            )
        edge = (src, dst, kind)
        if edge in self._edge_set:
            return edge
        if kind is EdgeKind.FOLLOWS:
            for other_dst, other_kind in self._out[src]:
                if other_kind is EdgeKind.FOLLOWS and other_dst != dst:
                    raise EdgeConstraintError(
                        f"utterance {src!r} already follows {other_dst!r}"
                    )
        self._edges.append(edge)
        self._edge_set.add(edge)
        self._out[src].append((dst, kind))
        self._in[dst].append((src, kind))
        return edge

    def add_utterance(
        self,
        speaker: str,
        text: str,
        t_start: float,
        t_end: float,
        mention_texts: Iterable[str] = (),
    ) -> tuple[str, list[str]]:
        """Insert one dialogue turn: an utterance node, its mention nodes, and
        the bookkeeping edges (mentions, follows-previous)."""
        if speaker not in SPEAKERS:
            raise GraphError(f"speaker must be one of {SPEAKERS}, got {speaker!r}")
        label = text if text else UNKNOWN_TEXT
        utt_id = self.add_node(
            NodeKind.UTTERANCE,
            label,
            {"speaker": speaker, "t_start": str(t_start), "t_end": str(t_end)},
        )
        if self._last_utterance is not None:
            self.add_edge(utt_id, self._last_utterance, EdgeKind.FOLLOWS)
        self._last_utterance = utt_id
        mention_ids = []
        for surface in mention_texts:
            m_id = self.add_node(NodeKind.MENTION, surface if surface else UNKNOWN_TEXT)
            self.add_edge(utt_id, m_id, EdgeKind.MENTIONS)
            mention_ids.append(m_id)
        return utt_id, mention_ids

    # -- access -----------------------------------------------------------

    def node(self, node_id: str) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node_id!r}") from None

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def nodes(self) -> Iterator[Node]:
        return iter(self._nodes.values())

    def node_ids(self) -> list[str]:
        return list(self._nodes)

    def edges(self) -> list[Edge]:
        return list(self._edges)

    def node_count(self) -> int:
        return len(self._nodes)

    def edge_count(self) -> int:
        return len(self._edges)

    def nodes_of_kind(self, *kinds: NodeKind) -> list[Node]:
        wanted = set(kinds)
        return [n for n in self._nodes.values() if n.kind in wanted]

    def entity_nodes(self) -> list[Node]:
        return [n for n in self._nodes.values() if n.kind in LINKABLE_KINDS]

    def last_utterance(self) -> Optional[str]:
        return self._last_utterance

    # -- traversal --------------------------------------------------------

    def neighbors(self, node_id: str, undirected: bool = False) -> set[str]:
        self.node(node_id)
        out = {dst for dst, _ in self._out[node_id]}
        if not undirected:
            return out
        return out | {src for src, _ in self._in[node_id]}

    def bfs_hops(self, start: str, undirected: bool = False) -> dict[str, int]:
        """Hop count from ``start`` to every reachable node."""
        self.node(start)
        dist = {start: 0}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in self.neighbors(cur, undirected=undirected):
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        return dist

    def shortest_hops(self, a: str, b: str, undirected: bool = False) -> Optional[int]:
        self.node(a)
        self.node(b)
        if a == b:
            return 0
        dist = {a: 0}
        queue = deque([a])
        while queue:
            cur = queue.popleft()
            for nxt in self.neighbors(cur, undirected=undirected):
                if nxt == b:
                    return dist[cur] + 1
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        return None

    def induced_subgraph(self, node_ids: Iterable[str]) -> "KnowledgeGraph":
        """Subgraph over the given nodes, keeping every edge whose endpoints
        both survive.

        Node order in the result follows the order of ``node_ids`` (duplicates
        collapsed); pass an ordered sequence when the order matters downstream.
        Unordered sets are normalized to this graph's insertion order.
        """
        given = list(node_ids)
        if isinstance(node_ids, (set, frozenset)):
            wanted = set(given)
            ordered = [nid for nid in self._nodes if nid in wanted]
            if len(ordered) != len(wanted):
                missing = wanted - set(ordered)
                raise UnknownNodeError(f"unknown node {sorted(missing)[0]!r}")
        else:
            ordered = []
            seen: set[str] = set()
            for nid in given:
                if nid not in self._nodes:
                    raise UnknownNodeError(f"unknown node {nid!r}")
                if nid not in seen:
                    seen.add(nid)
                    ordered.append(nid)
        sub = KnowledgeGraph()
        for nid in ordered:
            sub._insert_node(self._nodes[nid])
        kept = set(ordered)
        for src, dst, kind in self._edges:
            if src in kept and dst in kept:
                sub.add_edge(src, dst, kind)
        # Follows bookkeeping is only meaningful on the live dialogue graph.
        sub._last_utterance = None
        return sub

    # -- validation -------------------------------------------------------

    def validate(self) -> list[str]:
        """Sweep all invariants; returns a list of violations (empty = clean)."""
        problems = []
        for node in self._nodes.values():
            if not node.label:
                problems.append(f"node {node.id}: empty label")
            if node.kind is NodeKind.UTTERANCE:
                speaker = node.attrs.get("speaker")
                if speaker not in SPEAKERS:
                    problems.append(f"utterance {node.id}: bad speaker {speaker!r}")
                for key in ("t_start", "t_end"):
                    if key not in node.attrs:
                        problems.append(f"utterance {node.id}: missing {key}")
        follows_out: dict[str, int] = {}
        follows_in: dict[str, int] = {}
        for src, dst, kind in self._edges:
            if src not in self._nodes or dst not in self._nodes:
                problems.append(f"edge ({src},{dst},{kind.value}): dangling endpoint")
                continue
            src_kinds, dst_kinds = _ENDPOINT_RULES[kind]
            if self._nodes[src].kind not in src_kinds:
                problems.append(
                    f"edge ({src},{dst},{kind.value}): bad source kind "
                    f"{self._nodes[src].kind.value}"
                )
            if self._nodes[dst].kind not in dst_kinds:
                problems.append(
                    f"edge ({src},{dst},{kind.value}): bad target kind "
                    f"{self._nodes[dst].kind.value}"
                )
            if kind is EdgeKind.FOLLOWS:
                follows_out[src] = follows_out.get(src, 0) + 1
                follows_in[dst] = follows_in.get(dst, 0) + 1
        for utt, n in follows_out.items():
            if n > 1:
                problems.append(f"utterance {utt}: {n} outgoing follows edges")
        for utt, n in follows_in.items():
            if n > 1:
                problems.append(f"utterance {utt}: {n} incoming follows edges")
        if len(self._edge_set) != len(self._edges):
            problems.append("duplicate edges present")
        return problems

    def check(self) -> None:
        problems = self.validate()
        if problems:
            raise GraphValidationError("; ".join(problems))

    # -- serialization ----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "nodes": [
                {"id": n.id, "kind": n.kind.value, "label": n.label, "attrs": dict(n.attrs)}
                for n in self._nodes.values()
            ],
            "edges": [
                {"src": src, "dst": dst, "kind": kind.value} for src, dst, kind in self._edges
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    @classmethod
    def from_json_dict(cls, doc: dict) -> "KnowledgeGraph":
        graph = cls()
        for nd in doc["nodes"]:
            graph._insert_node(
                Node(nd["id"], NodeKind(nd["kind"]), nd["label"], dict(nd.get("attrs", {})))
            )
        for ed in doc["edges"]:
            graph.add_edge(ed["src"], ed["dst"], EdgeKind(ed["kind"]))
        # Recover the dialogue head: the utterance no other utterance follows.
        utterances = [n.id for n in graph.nodes() if n.kind is NodeKind.UTTERANCE]
        if utterances:
            followed = {dst for _, dst, kind in graph._edges if kind is EdgeKind.FOLLOWS}
            heads = [u for u in utterances if u not in followed]
            graph._last_utterance = heads[-1] if heads else None
        return graph

    @classmethod
    def from_json(cls, text: str) -> "KnowledgeGraph":
        return cls.from_json_dict(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "KnowledgeGraph":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))
