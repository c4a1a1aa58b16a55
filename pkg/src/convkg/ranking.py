"""Response selection: relevant subgraph, verbalization, context assembly,
data augmentation, negative sampling, ranking, and retrieval metrics."""
from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from datetime import datetime
from importlib import resources

from .graph import EdgeKind, KnowledgeGraph, LINKABLE_KINDS, UnknownNodeError
from .orggen import Organization

SPEAKER_TAGS = {"user": "Visitor:", "agent": "Robot:"}
DEFAULT_BUDGET = 512

# Fixed verbalization order for edge facts.
_EDGE_ORDER = (EdgeKind.ATTENDS, EdgeKind.ORGANIZES, EdgeKind.LOCATED_IN,
               EdgeKind.MEMBER_OF, EdgeKind.HAS_OFFICE)

AUGMENT_KINDS = ("person", "event", "group")


class RankingError(ValueError):
    pass


@dataclass
class TemplateRegistry:
    edges: dict[str, str]
    attrs: dict[str, dict[str, str]]
    presence: dict[str, str]

    @classmethod
    def bundled(cls) -> "TemplateRegistry":
        text = (resources.files("convkg") / "data" / "templates.json").read_text(
            encoding="utf-8")
        return cls.from_json_dict(json.loads(text))

    @classmethod
    def from_json_dict(cls, data: dict) -> "TemplateRegistry":
        return cls(edges=dict(data.get("edges", {})),
                   attrs={k: dict(v) for k, v in data.get("attrs", {}).items()},
                   presence=dict(data.get("presence", {})))

    @classmethod
    def load(cls, path: str) -> "TemplateRegistry":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def relevant_subgraph(graph: KnowledgeGraph,
                      mentioned_ids: list[str]) -> KnowledgeGraph:
    """Mentioned entities, their entity neighbors one undirected hop out, and
    every edge among that node set."""
    keep: list[str] = []
    seen: set[str] = set()
    for nid in mentioned_ids:
        if not graph.has_node(nid):
            raise UnknownNodeError(nid)
        if nid not in seen:
            seen.add(nid)
            keep.append(nid)
    # Neighbor sets iterate in hash order; sort by insertion position so the
    # verbalization is byte-stable across interpreter runs.
    position = {node_id: i for i, node_id in enumerate(graph.node_ids())}
    for nid in list(keep):
        for neighbor in sorted(graph.neighbors(nid, undirected=True),
                               key=position.__getitem__):
            if neighbor in seen:
                continue
            if graph.node(neighbor).kind in LINKABLE_KINDS:
                seen.add(neighbor)
                keep.append(neighbor)
    return graph.induced_subgraph(keep)


def _fmt_value(value: str) -> str:
    try:
        return datetime.fromisoformat(value).strftime("%H:%M")
    except ValueError:
        return value


def verbalize(subgraph: KnowledgeGraph,
              registry: TemplateRegistry | None = None) -> str:
    """One sentence per fact, newline-joined; every entity name appears."""
    registry = registry or TemplateRegistry.bundled()
    sentences: list[str] = []
    covered: set[str] = set()

    for node in subgraph.nodes():
        kind_attrs = registry.attrs.get(node.kind.value, {})
        for attr_name in sorted(kind_attrs):
            if attr_name in node.attrs:
                slots = {"label": node.label,
                         attr_name: _fmt_value(node.attrs[attr_name])}
                sentences.append(kind_attrs[attr_name].format(**slots))
                covered.add(node.id)

    edges = subgraph.edges()
    for kind in _EDGE_ORDER:
        for src, dst, ek in edges:
            if ek is not kind:
                continue
            template = registry.edges.get(ek.value)
            if template is None:
                raise RankingError(f"no template for edge kind {ek.value!r}")
            sentences.append(template.format(src=subgraph.node(src).label,
                                             dst=subgraph.node(dst).label))
            covered.update((src, dst))
    for src, dst, ek in edges:
        if ek in _EDGE_ORDER:
            continue
        template = registry.edges.get(ek.value)
        if template is None:
            raise RankingError(f"no template for edge kind {ek.value!r}")
        sentences.append(template.format(src=subgraph.node(src).label,
                                         dst=subgraph.node(dst).label))
        covered.update((src, dst))

    for node in subgraph.nodes():
        if node.id in covered:
            continue
        template = registry.presence.get(node.kind.value)
        if template is None:
            raise RankingError(f"no template for node kind {node.kind.value!r}")
        sentences.append(template.format(label=node.label))
    return "\n".join(sentences)


def _token_count(text: str) -> int:
    return len(text.split())


def assemble_context(subgraph_text: str,
                     history: list[tuple[str, str]],
                     budget: int = DEFAULT_BUDGET) -> str:
    """Subgraph sentences first, then speaker-tagged turns; oldest turns are
    dropped first to fit the whitespace-token budget."""
    if budget <= 0:
        raise RankingError("budget must be positive")
    base = _token_count(subgraph_text)
    if base > budget:
        raise RankingError(
            f"subgraph text alone ({base} tokens) exceeds budget {budget}")
    lines = [f"{SPEAKER_TAGS.get(speaker, speaker + ':')} {text}".rstrip()
             for speaker, text in history]
    kept: list[str] = []
    used = base
    for line in reversed(lines):
        cost = _token_count(line)
        if used + cost > budget:
            break
        kept.append(line)
        used += cost
    kept.reverse()
    parts = ([subgraph_text] if subgraph_text else []) + kept
    return "\n".join(parts)


def _org_name_pools(org: Organization) -> dict[str, list[str]]:
    return {
        "person": [p.name for p in org.persons],
        "event": sorted({e.name for e in org.events}),
        "group": list(org.groups),
    }


def augment(context: str, response: str, org: Organization,
            seed: int = 0) -> tuple[str, str]:
    """Swap detected person/event/group names for same-kind alternatives,
    consistently across both strings."""
    rng = random.Random(seed)
    pools = _org_name_pools(org)
    kind_of = {name: kind for kind, pool in pools.items() for name in pool}
    combined = context + "\n" + response
    present = [name for name in kind_of if name in combined]
    if not present:
        return context, response
    # Longest first so "quarterly users workshop" wins over "users workshop".
    present.sort(key=len, reverse=True)
    mapping: dict[str, str] = {}
    for name in present:
        pool = [alt for alt in pools[kind_of[name]]
                if alt != name and alt not in combined and alt not in mapping.values()]
        if pool:
            mapping[name] = rng.choice(pool)
    if not mapping:
        return context, response
    pattern = re.compile("|".join(re.escape(n) for n in
                                  sorted(mapping, key=len, reverse=True)))
    swap = lambda text: pattern.sub(lambda m: mapping[m.group(0)], text)
    return swap(context), swap(response)


def sample_negatives(pool: list[str], gold: str, n: int, method: str = "random",
                     seed: int = 0, scorer=None) -> list[str]:
    """n distinct non-gold responses; `similar` samples the top quartile by
    lexical similarity to the gold response."""
    rng = random.Random(seed)
    others = sorted({r for r in pool if r != gold})
    if len(others) < n:
        raise RankingError(f"pool of {len(others)} non-gold responses < {n}")
    if method == "random":
        return rng.sample(others, n)
    if method != "similar":
        raise RankingError(f"unknown sampling method {method!r}")
    if scorer is None:
        from .scorer import NativeScorer
        scorer = NativeScorer()
    sims = scorer.score_batch(gold, others)
    ranked = sorted(zip(others, sims), key=lambda pair: (-pair[1], pair[0]))
    quartile = max(n, len(ranked) // 4)
    top = [r for r, _ in ranked[:quartile]]
    return rng.sample(top, n)


@dataclass
class RankingInstance:
    context: str
    candidates: list[str]
    gold_index: int

    def __post_init__(self):
        if len(set(self.candidates)) != len(self.candidates):
            raise RankingError("candidates must be distinct")
        if not (0 <= self.gold_index < len(self.candidates)):
            raise RankingError("gold_index out of range")


def make_instance(context: str, gold: str, pool: list[str], seed: int,
                  n_candidates: int = 10, method: str = "random",
                  scorer=None) -> RankingInstance:
    negatives = sample_negatives(pool, gold, n_candidates - 1, method=method,
                                 seed=seed, scorer=scorer)
    rng = random.Random(seed ^ 0x5EED)
    gold_index = rng.randrange(n_candidates)
    candidates = list(negatives)
    candidates.insert(gold_index, gold)
    return RankingInstance(context=context, candidates=candidates,
                           gold_index=gold_index)


def order_scores(scores: list[float]) -> list[int]:
    """Indices in descending score order, ties kept stable."""
    return sorted(range(len(scores)), key=lambda i: (-scores[i], i))


def rank(scorer, context: str, candidates: list[str]) -> list[int]:
    """Candidate indices in descending score order, ties kept stable."""
    return order_scores(scorer.score_batch(context, candidates))


def gold_rank(order: list[int], gold_index: int) -> int:
    """1-based position of the gold candidate in a ranking."""
    return order.index(gold_index) + 1


def recall_at_k(ranks: list[int], k: int) -> float:
    if not ranks:
        return 0.0
    return sum(1 for r in ranks if r <= k) / len(ranks)


def mrr(ranks: list[int]) -> float:
    if not ranks:
        return 0.0
    return sum(1.0 / r for r in ranks) / len(ranks)


@dataclass
class RankingReport:
    ranks: list[int] = field(default_factory=list)

    def add(self, rank_of_gold: int) -> None:
        self.ranks.append(rank_of_gold)

    def metrics(self) -> dict[str, float]:
        return {"recall_at_1": recall_at_k(self.ranks, 1),
                "recall_at_2": recall_at_k(self.ranks, 2),
                "mrr": mrr(self.ranks)}


def evaluate_instances(scorer, instances: list[RankingInstance]) -> RankingReport:
    report = RankingReport()
    for inst in instances:
        order = rank(scorer, inst.context, inst.candidates)
        report.add(gold_rank(order, inst.gold_index))
    return report
