"""Live chat sessions composing the full pipeline, plus the HTTP service.

Live turns have no gold mention spans, so mention detection is a case-folded
dictionary match over entity names (token n-grams, Jaro-Winkler >= 0.85) plus
a closed pronoun list. Pronouns resolve through the same chain heuristic the
offline path uses.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from . import stringsim
from .classifier import LinkerModel
from .graph import EdgeKind, KnowledgeGraph, NodeKind
from .linking import (PRONOUNS, _pronoun_kinds, candidate_set, inject_coref,
                      link)
from .orggen import Organization, generate_org, org_to_graph
from .ranking import (TemplateRegistry, assemble_context, order_scores,
                      relevant_subgraph, verbalize)
from .scorer import NativeScorer, ScorerError

FUZZY_THRESHOLD = 0.85
MAX_SPAN_TOKENS = 4
SUBGRAPH_BUDGET = 384  # leaves 128 of the 512-token context for history

SMALLTALK = (
    "Hello! How can I help you?",
    "Of course, I can help with that.",
    "You're welcome! Is there anything else I can help you with?",
    "Okay! Have a nice day!",
    "Sorry, I didn't understand that. Could you repeat?",
)
CLARIFICATION = SMALLTALK[4]

_TOKEN_SPAN_RE = re.compile(r"\S+")


@dataclass
class DetectedMention:
    start: int
    end: int
    surface: str


@dataclass
class LiveTurn:
    speaker: str
    text: str
    mention_ids: list[str] = field(default_factory=list)
    surfaces: list[str] = field(default_factory=list)
    linked: dict[str, list[str]] = field(default_factory=dict)


@dataclass
class ChatSession:
    session_id: str
    org: Organization
    graph: KnowledgeGraph
    turns: list[LiveTurn] = field(default_factory=list)
    mentioned_entities: list[str] = field(default_factory=list)
    model: LinkerModel | None = None
    scorer: object = None
    registry: TemplateRegistry | None = None
    clock: float = 0.0

    def history_pairs(self) -> list[tuple[str, str]]:
        return [(t.speaker, t.text) for t in self.turns]


def _span_score(folded: str, folded_labels: list[str]) -> float:
    """Best fuzzy match of a span against the label dictionary.

    Two guards tame the Jaro-Winkler prefix boost: a span with fewer tokens
    than the label it matches must be a near-exact hit ("room" vs "room 395"),
    and any non-exact hit must stay within a third of the label in edit
    distance ("room is" vs "room 395").
    """
    n_tokens = len(folded.split())
    best = 0.0
    for label in folded_labels:
        score = stringsim.jaro_winkler(folded, label)
        if score < FUZZY_THRESHOLD:
            continue
        if folded != label:
            if n_tokens != len(label.split()) and score < 0.95:
                continue
            edits = stringsim.levenshtein(folded, label)
            if edits / max(len(folded), len(label)) > 1 / 3:
                continue
        best = max(best, score)
    return best


def detect_mentions(text: str, labels: list[str]) -> list[DetectedMention]:
    """Non-overlapping fuzzy dictionary spans, best score first."""
    spans = [(m.start(), m.end()) for m in _TOKEN_SPAN_RE.finditer(text)]
    folded_labels = [l.casefold() for l in labels]
    found: list[tuple[float, int, int]] = []
    for i in range(len(spans)):
        for width in range(1, MAX_SPAN_TOKENS + 1):
            if i + width > len(spans):
                break
            start, end = spans[i][0], spans[i + width - 1][1]
            chunk = text[start:end]
            stripped = chunk.strip(".,!?;:'\"")
            offset = chunk.index(stripped) if stripped else 0
            if not stripped:
                continue
            folded = stripped.casefold()
            if width == 1 and folded in PRONOUNS:
                found.append((1.0, start + offset, start + offset + len(stripped)))
                continue
            best = _span_score(folded, folded_labels)
            if best >= FUZZY_THRESHOLD:
                found.append((best, start + offset, start + offset + len(stripped)))
    found.sort(key=lambda t: (-t[0], -(t[2] - t[1]), t[1]))
    chosen: list[tuple[int, int]] = []
    for _, start, end in found:
        if all(end <= s or start >= e for s, e in chosen):
            chosen.append((start, end))
    chosen.sort()
    return [DetectedMention(start=s, end=e, surface=text[s:e])
            for s, e in chosen]


def _entity_labels(graph: KnowledgeGraph) -> list[str]:
    return [n.label for n in candidate_set(graph)]


def _link_mention(session: ChatSession, mention_id: str,
                  surface: str) -> list[str]:
    graph = session.graph
    entities = candidate_set(graph)
    if session.model is not None:
        decision = link(session.model, graph, mention_id, mention_id, surface,
                        entities)
        return decision.entity_ids

    folded = surface.casefold()
    exact = [n.id for n in entities if n.label.casefold() == folded]
    if exact:
        return exact
    wanted = _pronoun_kinds(surface)
    if wanted is not None:
        # Walk linked mentions backwards for a kind-compatible antecedent.
        for turn in reversed(session.turns):
            for mid in reversed(turn.mention_ids):
                for eid in turn.linked.get(mid, []):
                    if graph.node(eid).kind.value in wanted:
                        return [eid]
        return []
    scored = [(stringsim.jaro_winkler(folded, n.label.casefold()), n.id)
              for n in entities]
    best, best_id = max(scored, default=(0.0, None))
    if best >= FUZZY_THRESHOLD:
        return [best_id]
    return []


def _add_turn(session: ChatSession, speaker: str, text: str) -> LiveTurn:
    labels = _entity_labels(session.graph)
    detected = detect_mentions(text, labels) if text.strip() else []
    session.clock += 10.0
    utt_id, mention_ids = session.graph.add_utterance(
        speaker=speaker, text=text, t_start=session.clock,
        t_end=session.clock + 5.0,
        mention_texts=[d.surface for d in detected])
    turn = LiveTurn(speaker=speaker, text=text, mention_ids=mention_ids,
                    surfaces=[d.surface for d in detected])
    session.turns.append(turn)

    # Chain pronouns to the most recent kind-compatible non-pronoun mention.
    chains = []
    for mid, surface in zip(mention_ids, turn.surfaces):
        wanted = _pronoun_kinds(surface)
        if wanted is None:
            continue
        for prev in reversed(session.turns):
            hit = None
            for pmid, psurface in zip(reversed(prev.mention_ids),
                                      reversed(prev.surfaces)):
                if pmid == mid or _pronoun_kinds(psurface) is not None:
                    continue
                linked = prev.linked.get(pmid, [])
                if any(session.graph.node(e).kind.value in wanted
                       for e in linked):
                    hit = pmid
                    break
            if hit:
                chains.append([hit, mid])
                break
    inject_coref(session.graph, chains)

    for mid, surface in zip(mention_ids, turn.surfaces):
        targets = _link_mention(session, mid, surface)
        turn.linked[mid] = targets
        for eid in targets:
            session.graph.add_edge(mid, eid, EdgeKind.REFERS_TO)
            if eid not in session.mentioned_entities:
                session.mentioned_entities.append(eid)
    return turn


def _fit_sentences(text: str, max_tokens: int) -> str:
    """Keep leading whole sentences within a whitespace-token budget."""
    kept: list[str] = []
    used = 0
    for line in text.splitlines():
        cost = len(line.split())
        if used + cost > max_tokens:
            break
        kept.append(line)
        used += cost
    return "\n".join(kept)


def _response_pool(session: ChatSession, subgraph_text: str) -> list[str]:
    pool = list(SMALLTALK)
    pool.extend(line for line in subgraph_text.splitlines() if line)
    seen, out = set(), []
    for item in pool:
        if item not in seen:
            seen.add(item)
            out.append(item)
    return out


def chat_turn(session: ChatSession, user_text: str,
              wizard_response: str | None = None) -> dict:
    """Advance the session one exchange; returns the response and the
    intermediate artifacts (links, subgraph text, ranked candidates).

    With wizard_response set (replaying a recorded dialogue), that text is
    used as the agent turn instead of the top-ranked candidate; the ranking
    is still computed and returned.
    """
    scorer = session.scorer or NativeScorer()
    warning = False

    user_turn = _add_turn(session, "user", user_text)

    subgraph = relevant_subgraph(session.graph, session.mentioned_entities)
    # Mentioned-entity facts come first in the verbalization, so trimming to
    # the budget drops neighbor facts before core ones.
    subgraph_text = _fit_sentences(verbalize(subgraph, session.registry),
                                   SUBGRAPH_BUDGET)
    context = assemble_context(subgraph_text, session.history_pairs())
    pool = _response_pool(session, subgraph_text)

    if not user_text.strip():
        # Deterministic clarification, no scoring pass.
        response = CLARIFICATION
        order = [pool.index(CLARIFICATION)]
        scores = None
    else:
        try:
            scores = scorer.score_batch(context, pool)
        except ScorerError:
            warning = True
            scores = NativeScorer().score_batch(context, pool)
        order = order_scores(scores)
        response = pool[order[0]]
    if wizard_response is not None:
        response = wizard_response

    agent_turn = _add_turn(session, "agent", response)
    session.graph.check()

    return {
        "response": response,
        "linked_entities": {
            session.graph.node(mid).label: [session.graph.node(e).label
                                            for e in targets]
            for mid, targets in user_turn.linked.items()
        },
        "mention_ids": list(user_turn.mention_ids),
        "agent_mention_ids": list(agent_turn.mention_ids),
        "subgraph_text": subgraph_text,
        "ranked_candidates": [pool[i] for i in order],
        "candidate_scores": (None if scores is None
                             else [round(scores[i], 6) for i in order]),
        "scorer_fallback": warning,
    }


class SessionStore:
    def __init__(self):
        self._sessions: dict[str, ChatSession] = {}
        self._counter = itertools.count(1)

    def create(self, org_seed: int = 7, org: Organization | None = None,
               model: LinkerModel | None = None,
               scorer=None) -> ChatSession:
        org = org or generate_org(org_seed)
        session = ChatSession(
            session_id=f"s{next(self._counter)}",
            org=org, graph=org_to_graph(org), model=model, scorer=scorer,
            registry=TemplateRegistry.bundled())
        self._sessions[session.session_id] = session
        return session

    def get(self, session_id: str) -> ChatSession:
        if session_id not in self._sessions:
            raise KeyError(session_id)
        return self._sessions[session_id]


def create_app(store: SessionStore | None = None):
    """FastAPI application exposing session, utterance, and graph routes."""
    from ._http import create_app as _create_app
    return _create_app(store)
