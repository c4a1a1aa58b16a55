"""Synthetic end-to-end benchmarks for entity linking and response ranking.

Both tasks need labeled dialogues; no annotated corpus ships with the package,
so these benchmarks generate organizations, compose small scripted dialogues
against them, and measure the same code paths the offline evaluation uses.
"""
from __future__ import annotations

import random
import string

from . import linking
from .classifier import train_linker
from .dialogues import DialogueRecord, dialogue_from_json_dict, validate_dialogue
from .graph import NodeKind
from .orggen import Organization, generate_org, org_to_graph
from .ranking import (RankingInstance, assemble_context, evaluate_instances,
                      relevant_subgraph, verbalize)
from .scorer import NativeScorer

LINKING_SEED = 42
RANKING_SEED = 7

EVAL_EXACT = 80
EVAL_NOISE = 60
EVAL_PRONOUN = 60

_LETTERS = string.ascii_lowercase
_PERSON_PRONOUNS = ("his", "her", "their")


def _noise(name: str, rng: random.Random) -> str:
    """Apply 1 or 2 random character edits, never returning the input."""
    for _ in range(100):
        chars = list(name)
        for _ in range(rng.randint(1, 2)):
            op = rng.choice(("sub", "del", "ins"))
            pos = rng.randrange(len(chars)) if chars else 0
            if op == "sub" and chars:
                chars[pos] = rng.choice(_LETTERS)
            elif op == "del" and len(chars) > 1:
                del chars[pos]
            else:
                chars.insert(pos, rng.choice(_LETTERS))
        noised = "".join(chars)
        if noised != name:
            return noised
    raise RuntimeError("could not noise name")


def _mention(text: str, surface: str, ref: dict) -> dict:
    start = text.index(surface)
    return {"start": start, "end": start + len(surface), "surface": surface,
            "targets": [ref]}


def _turn(i: int, speaker: str, text: str, mentions: list[dict]) -> dict:
    return {"i": i, "speaker": speaker, "asr": text, "gold": None,
            "intent": None, "mentions": mentions}


def _exact_dialogue(did: str, kind: str, name: str) -> dict:
    text = f"Could you tell me more about {name}?"
    ref = {"kind": kind, "name": name}
    return {"id": did, "org": "", "task": "",
            "turns": [_turn(1, "user", text, [_mention(text, name, ref)])]}


def _noise_dialogue(did: str, name: str, noised: str) -> dict:
    text = f"I am looking for {noised}."
    ref = {"kind": "person", "name": name}
    return {"id": did, "org": "", "task": "",
            "turns": [_turn(1, "user", text, [_mention(text, noised, ref)])]}


def _pronoun_dialogue(did: str, name: str, pronoun: str) -> dict:
    ref = {"kind": "person", "name": name}
    t1 = f"Can you help me with something about {name}?"
    t3 = f"What is {pronoun} office number?"
    return {"id": did, "org": "", "task": "", "turns": [
        _turn(1, "user", t1, [_mention(t1, name, ref)]),
        _turn(2, "agent", "Of course.", []),
        _turn(3, "user", t3, [_mention(t3, pronoun, ref)]),
    ]}


def make_linking_dialogues(org: Organization, seed: int, n_exact: int,
                           n_noise: int, n_pronoun: int,
                           prefix: str) -> list[DialogueRecord]:
    """Scripted single-topic dialogues: exact names, noised names, pronouns.

    Pronoun dialogues contribute one exact mention each, so they count toward
    the exact total: n_exact must be >= n_pronoun.
    """
    if n_exact < n_pronoun:
        raise ValueError("n_exact must cover the pronoun dialogues' lead turns")
    rng = random.Random(seed)
    persons = [p.name for p in org.persons]
    events = sorted({e.name for e in org.events})
    records = []

    for k in range(n_pronoun):
        name = rng.choice(persons)
        data = _pronoun_dialogue(f"{prefix}-pro-{k}", name,
                                 rng.choice(_PERSON_PRONOUNS))
        records.append(data)
    for k in range(n_exact - n_pronoun):
        if rng.random() < 0.7:
            kind, name = "person", rng.choice(persons)
        else:
            kind, name = "event", rng.choice(events)
        records.append(_exact_dialogue(f"{prefix}-ex-{k}", kind, name))
    for k in range(n_noise):
        name = rng.choice(persons)
        records.append(_noise_dialogue(f"{prefix}-no-{k}", name,
                                       _noise(name, rng)))

    out = []
    for data in records:
        record = dialogue_from_json_dict(data)
        validate_dialogue(record, org)
        out.append(record)
    return out


def _collect(org: Organization, records: list[DialogueRecord]):
    examples = []
    for record in records:
        examples.extend(linking.collect_examples(record, org, use_coref=True))
    return examples


def linking_benchmark(seed: int = LINKING_SEED,
                      train_seeds: tuple[int, ...] = (43, 44),
                      max_iter: int = 600) -> dict:
    """Train on scripted dialogues over held-out organizations, evaluate on a
    fresh one; returns metrics for the baselines and both feature sets."""
    train_examples = []
    for ts in train_seeds:
        org = generate_org(ts)
        records = make_linking_dialogues(org, seed=ts * 31 + 1, n_exact=40,
                                         n_noise=30, n_pronoun=30,
                                         prefix=f"train{ts}")
        train_examples.extend(_collect(org, records))

    eval_org = generate_org(seed)
    eval_records = make_linking_dialogues(
        eval_org, seed=seed * 31 + 1, n_exact=EVAL_EXACT, n_noise=EVAL_NOISE,
        n_pronoun=EVAL_PRONOUN, prefix="eval")
    eval_examples = _collect(eval_org, eval_records)

    gold = {ex.key: ex.gold_ids for ex in eval_examples}
    results: dict[str, dict] = {
        "counts": {"eval_mentions": len(eval_examples),
                   "train_mentions": len(train_examples)},
    }
    results["string_equality"] = linking.evaluate_linking(
        linking.decide_baseline(eval_examples), gold)
    results["string_recency"] = linking.evaluate_linking(
        linking.decide_baseline(eval_examples, recency=True), gold)

    for label, use_graph in (("mlp_string", False), ("mlp_string_graph", True)):
        X, y = linking.training_matrix(train_examples, use_graph=use_graph)
        names = linking.ALL_FEATURES if use_graph else linking.STRING_FEATURES
        model = train_linker(X, y, names, kind="mlp", max_iter=max_iter, seed=0)
        results[label] = linking.evaluate_linking(
            linking.decide_examples(model, eval_examples), gold)
    return results


def ranking_benchmark(seed: int = RANKING_SEED, n_instances: int = 40) -> dict:
    """Office-lookup instances where only the subgraph text names the answer.

    The gold response states the room number; the dialogue history never does,
    so history-only ranking has no lexical signal to find it.
    """
    org = generate_org(seed)
    graph = org_to_graph(org)
    rng = random.Random(seed)
    person_nodes = [n for n in graph.nodes_of_kind(NodeKind.PERSON)]
    by_label = {n.label: n for n in person_nodes}
    persons = rng.sample(sorted(by_label), min(n_instances, len(by_label)))

    history_ranks, subgraph_ranks = [], []
    scorer = NativeScorer()
    offices = {p.name: p.office for p in org.persons}
    for k, name in enumerate(persons):
        history = [
            ("user", f"Hello, I am looking for {name}."),
            ("agent", "Of course, I can help with that."),
            ("user", "Where is their office?"),
        ]
        gold = f"It is {offices[name]}."
        negatives = []
        for other in sorted(set(offices.values()) - {offices[name]}):
            negatives.append(f"It is {other}.")
        negatives = rng.sample(negatives, 9)
        gold_index = rng.randrange(10)
        candidates = list(negatives)
        candidates.insert(gold_index, gold)

        sub = relevant_subgraph(graph, [by_label[name].id])
        sub_text = verbalize(sub)
        ctx_history = assemble_context("", history)
        ctx_full = assemble_context(sub_text, history)
        for ctx, ranks in ((ctx_history, history_ranks),
                           (ctx_full, subgraph_ranks)):
            inst = RankingInstance(context=ctx, candidates=candidates,
                                   gold_index=gold_index)
            report = evaluate_instances(scorer, [inst])
            ranks.extend(report.ranks)

    def summarize(ranks: list[int]) -> dict:
        from .ranking import mrr, recall_at_k
        return {"recall_at_1": recall_at_k(ranks, 1),
                "recall_at_2": recall_at_k(ranks, 2),
                "mrr": mrr(ranks)}

    return {"history": summarize(history_ranks),
            "subgraph_history": summarize(subgraph_ranks),
            "n_instances": len(persons)}
