"""Entity linking: string/graph features, coreference shortcuts, baselines,
trainable linkers, and micro-averaged evaluation."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import stringsim
from .classifier import LinkerModel, train_linker  # noqa: F401 (re-export)
from .dialogues import DialogueRecord, gold_links
from .graph import (EdgeKind, KnowledgeGraph, LINKABLE_KINDS, Node, NodeKind,
                    UnknownNodeError)
from .orggen import Organization, org_to_graph

STRING_FEATURES = (
    "exact", "levenshtein", "jaro_winkler", "lcs_len",
    "levenshtein_norm", "lcs_norm", "token_diff_card", "token_union_card",
)
ALL_FEATURES = STRING_FEATURES + ("graph_dist",)

MAX_HOPS = 10

PERSON_PRONOUNS = frozenset(
    "he him his she her hers they them their theirs".split())
NEUTRAL_PRONOUNS = frozenset("it its this that".split())
PRONOUNS = PERSON_PRONOUNS | NEUTRAL_PRONOUNS


def string_features(mention_text: str, entity_label: str) -> dict[str, float]:
    """Case-folded string comparison features between a mention and a label."""
    if not mention_text or not entity_label:
        raise ValueError("string features need non-empty texts")
    m = mention_text.casefold()
    e = entity_label.casefold()
    lev = stringsim.levenshtein(m, e)
    lcs = stringsim.lcs_len(m, e)
    m_tokens = set(stringsim.tokenize(mention_text))
    e_tokens = set(stringsim.tokenize(entity_label))
    return {
        "exact": 1.0 if m == e else 0.0,
        "levenshtein": float(lev),
        "jaro_winkler": stringsim.jaro_winkler(m, e),
        "lcs_len": float(lcs),
        "levenshtein_norm": lev / len(m),
        "lcs_norm": lcs / len(m),
        "token_diff_card": float(len(m_tokens - e_tokens)),
        "token_union_card": float(len(m_tokens | e_tokens)),
    }


def graph_distance_feature(graph: KnowledgeGraph, mention_id: str,
                           entity_id: str) -> float:
    """2^(-l) over the undirected shortest path; l clamped to [1, 10]."""
    hops = graph.shortest_hops(mention_id, entity_id, undirected=True)
    l = MAX_HOPS if hops is None else min(MAX_HOPS, max(1, hops))
    return 2.0 ** (-l)


def feature_vector(graph: KnowledgeGraph, mention_id: str, mention_text: str,
                   entity: Node, use_graph: bool = True) -> list[float]:
    feats = string_features(mention_text, entity.label)
    row = [feats[name] for name in STRING_FEATURES]
    if use_graph:
        row.append(graph_distance_feature(graph, mention_id, entity.id))
    return row


def candidate_set(graph: KnowledgeGraph) -> list[Node]:
    """Every linkable entity node, in insertion order."""
    return [n for n in graph.nodes() if n.kind in LINKABLE_KINDS]


def inject_coref(graph: KnowledgeGraph,
                 chains: list[list[str]]) -> KnowledgeGraph:
    """Add SameChain clique edges within each chain of mention node ids."""
    for chain in chains:
        for nid in chain:
            if not graph.has_node(nid):
                raise UnknownNodeError(nid)
            if graph.node(nid).kind is not NodeKind.MENTION:
                raise ValueError(f"{nid} is not a mention node")
        for a in range(len(chain)):
            for b in range(a + 1, len(chain)):
                graph.add_edge(chain[a], chain[b], EdgeKind.SAME_CHAIN)
    return graph


def _pronoun_kinds(surface: str) -> frozenset[str] | None:
    word = surface.casefold().strip()
    if word in PERSON_PRONOUNS:
        return frozenset({"person"})
    if word in NEUTRAL_PRONOUNS:
        return frozenset({"event", "room", "group"})
    return None


def _guess_kind(surface: str, entities: list[Node]) -> str | None:
    """Fuzzy-match a surface against entity labels to guess its kind."""
    best_kind, best = None, 0.0
    folded = surface.casefold()
    for node in entities:
        score = stringsim.jaro_winkler(folded, node.label.casefold())
        if score > best:
            best, best_kind = score, node.kind.value
    return best_kind if best >= 0.8 else None


def heuristic_coref(record: DialogueRecord, graph: KnowledgeGraph,
                    upto_turn: int | None = None) -> list[list[tuple[int, int]]]:
    """Dependency-free chain extraction over (turn index, mention index) pairs.

    Third-person pronouns chain to the most recent kind-compatible non-pronoun
    mention; non-pronoun mentions with equal case-folded surfaces chain together.
    """
    entities = candidate_set(graph)
    ordered: list[tuple[int, int, str]] = []
    for turn in record.turns:
        if upto_turn is not None and turn.i > upto_turn:
            break
        for j, m in enumerate(turn.mentions):
            ordered.append((turn.i, j, m.surface))

    chains: list[list[tuple[int, int]]] = []
    by_surface: dict[str, list[tuple[int, int]]] = {}
    for i, j, surface in ordered:
        if _pronoun_kinds(surface) is None:
            by_surface.setdefault(surface.casefold(), []).append((i, j))
    chains.extend(group for group in by_surface.values() if len(group) > 1)

    kind_cache: dict[str, str | None] = {}
    for pos, (i, j, surface) in enumerate(ordered):
        wanted = _pronoun_kinds(surface)
        if wanted is None:
            continue
        for pi, pj, psurface in reversed(ordered[:pos]):
            if _pronoun_kinds(psurface) is not None:
                continue
            if psurface not in kind_cache:
                kind_cache[psurface] = _guess_kind(psurface, entities)
            if kind_cache[psurface] in wanted:
                chains.append([(pi, pj), (i, j)])
                break
    return chains


@dataclass
class LinkDecision:
    mention_key: str
    entity_ids: list[str]
    scores: dict[str, float] = field(default_factory=dict)


def baseline_string_equality(graph: KnowledgeGraph, mention_key: str,
                             mention_text: str) -> LinkDecision:
    """Case-folded exact label match; all ties returned."""
    folded = mention_text.casefold()
    hits = [n.id for n in candidate_set(graph) if n.label.casefold() == folded]
    return LinkDecision(mention_key, hits, {h: 1.0 for h in hits})


def baseline_recency(graph: KnowledgeGraph, mention_key: str,
                     mention_text: str,
                     history: list[LinkDecision]) -> LinkDecision:
    """Exact match first; otherwise the targets of the last linked mention."""
    exact = baseline_string_equality(graph, mention_key, mention_text)
    if exact.entity_ids:
        return exact
    for prev in reversed(history):
        if prev.entity_ids:
            return LinkDecision(mention_key, list(prev.entity_ids),
                                {e: 1.0 for e in prev.entity_ids})
    return LinkDecision(mention_key, [], {})


def link(model: LinkerModel, graph: KnowledgeGraph, mention_key: str,
         mention_id: str, mention_text: str,
         candidates: list[Node] | None = None) -> LinkDecision:
    """Score every candidate; keep those at or above the model threshold."""
    if candidates is None:
        candidates = candidate_set(graph)
    if not candidates:
        return LinkDecision(mention_key, [], {})
    use_graph = "graph_dist" in model.feature_names
    X = np.array([feature_vector(graph, mention_id, mention_text, c, use_graph)
                  for c in candidates], dtype=float)
    proba = model.predict_proba(X)
    scores = {c.id: float(p) for c, p in zip(candidates, proba)}
    kept = [c.id for c, p in zip(candidates, proba) if p >= model.threshold]
    return LinkDecision(mention_key, kept, scores)


def evaluate_linking(decisions: dict[str, set[str]],
                     gold: dict[str, set[str]]) -> dict[str, float]:
    """Micro-averaged precision/recall/F1 over (mention, entity) link pairs."""
    if set(decisions) != set(gold):
        extra = sorted(set(decisions) ^ set(gold))[:3]
        raise ValueError(f"decision/gold mention ids misaligned: {extra}")
    tp = fp = fn = 0
    for key, pred in decisions.items():
        want = gold[key]
        tp += len(pred & want)
        fp += len(pred - want)
        fn += len(want - pred)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return {"precision": precision, "recall": recall, "f1": f1}


@dataclass
class MentionExample:
    """One evaluation-time mention with its graph context frozen."""
    key: str
    mention_id: str
    surface: str
    candidates: list[Node]
    features_string: np.ndarray
    features_full: np.ndarray
    gold_ids: set[str]


def collect_examples(record: DialogueRecord, org: Organization,
                     use_coref: bool = True,
                     user_turns_only: bool = True) -> list[MentionExample]:
    """Replay a dialogue with teacher forcing, freezing per-mention features.

    Earlier turns' mentions get their gold RefersTo edges before the current
    turn is scored, matching offline evaluation with gold links available for
    history. Coreference chains are injected from the replayed prefix only.
    """
    graph = org_to_graph(org)
    gold = gold_links(record, graph)
    entities = candidate_set(graph)
    label_index: dict[tuple[str, str], list[str]] = {}
    for node in entities:
        label_index.setdefault((node.kind.value, node.label), []).append(node.id)

    mention_nodes: dict[tuple[int, int], str] = {}
    examples: list[MentionExample] = []
    for turn in record.turns:
        t0 = float(turn.i) * 10.0
        _, mention_ids = graph.add_utterance(
            speaker=turn.speaker, text=turn.text, t_start=t0, t_end=t0 + 5.0,
            mention_texts=[m.surface for m in turn.mentions])
        for j, mid in enumerate(mention_ids):
            mention_nodes[(turn.i, j)] = mid

        if use_coref:
            chains = heuristic_coref(record, graph, upto_turn=turn.i)
            id_chains = [[mention_nodes[pair] for pair in chain
                          if pair in mention_nodes]
                         for chain in chains]
            inject_coref(graph, [c for c in id_chains if len(c) > 1])

        for j, m in enumerate(turn.mentions):
            if user_turns_only and turn.speaker != "user":
                continue
            key = f"{record.id}/{turn.i}:{j}"
            mid = mention_ids[j]
            hops = graph.bfs_hops(mid, undirected=True)
            rows_s, rows_f = [], []
            for cand in entities:
                feats = string_features(m.surface, cand.label)
                row = [feats[name] for name in STRING_FEATURES]
                rows_s.append(row)
                l = hops.get(cand.id)
                l = MAX_HOPS if l is None else min(MAX_HOPS, max(1, l))
                rows_f.append(row + [2.0 ** (-l)])
            examples.append(MentionExample(
                key=key, mention_id=mid, surface=m.surface,
                candidates=list(entities),
                features_string=np.array(rows_s, dtype=float),
                features_full=np.array(rows_f, dtype=float),
                gold_ids=set(gold[f"{turn.i}:{j}"])))

        # Teacher forcing: reveal this turn's gold links before moving on.
        for j, m in enumerate(turn.mentions):
            if not isinstance(m.targets, list):
                continue
            for ref in m.targets:
                for nid in label_index.get((ref.kind, ref.name), []):
                    graph.add_edge(mention_ids[j], nid, EdgeKind.REFERS_TO)
    return examples


def training_matrix(examples: list[MentionExample],
                    use_graph: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Stack per-candidate rows and binary labels from collected examples."""
    rows, labels = [], []
    for ex in examples:
        X = ex.features_full if use_graph else ex.features_string
        for cand, row in zip(ex.candidates, X):
            rows.append(row)
            labels.append(1.0 if cand.id in ex.gold_ids else 0.0)
    return np.array(rows, dtype=float), np.array(labels, dtype=float)


def decide_examples(model: LinkerModel,
                    examples: list[MentionExample]) -> dict[str, set[str]]:
    use_graph = "graph_dist" in model.feature_names
    out: dict[str, set[str]] = {}
    for ex in examples:
        X = ex.features_full if use_graph else ex.features_string
        proba = model.predict_proba(X)
        out[ex.key] = {c.id for c, p in zip(ex.candidates, proba)
                       if p >= model.threshold}
    return out


def decide_baseline(examples: list[MentionExample],
                    recency: bool = False) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    history: list[LinkDecision] = []
    last_dialogue = None
    for ex in examples:
        dialogue_id = ex.key.rsplit("/", 1)[0]
        if dialogue_id != last_dialogue:
            history = []
            last_dialogue = dialogue_id
        by_label = {c.id: c.label for c in ex.candidates}
        folded = ex.surface.casefold()
        hits = [cid for cid, label in by_label.items()
                if label.casefold() == folded]
        decision = LinkDecision(ex.key, hits, {})
        if recency and not hits:
            for prev in reversed(history):
                if prev.entity_ids:
                    decision = LinkDecision(ex.key, list(prev.entity_ids), {})
                    break
        history.append(decision)
        out[ex.key] = set(decision.entity_ids)
    return out
