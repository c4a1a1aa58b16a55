"""Offline evaluation harness over a canonical dataset directory.

A dataset root holds canonical dialogue JSON files, the organization files
they reference, and optionally split.json. Reports carry per-instance dumps
so aggregate metrics can always be recomputed from them.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field

from . import linking
from .classifier import train_linker
from .dialogues import DialogueRecord, load_dialogue, load_split
from .orggen import Organization, org_to_graph
from .ranking import (RankingInstance, assemble_context, gold_rank, mrr, rank,
                      recall_at_k, relevant_subgraph, sample_negatives,
                      verbalize)
from .scorer import NativeScorer


class DatasetError(RuntimeError):
    pass


@dataclass
class EvalReport:
    task: str
    split: str
    config: dict
    metrics: dict[str, float]
    per_dialogue: dict[str, dict] = field(default_factory=dict)
    per_instance: list[dict] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {"task": self.task, "split": self.split, "config": self.config,
                "metrics": self.metrics, "per_dialogue": self.per_dialogue,
                "per_instance": self.per_instance}

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def load_dataset(root: str) -> dict[str, tuple[DialogueRecord, Organization]]:
    if not os.path.isdir(root):
        raise DatasetError(
            f"dataset root {root!r} does not exist; run `convkg ingest` first")
    orgs: dict[str, Organization] = {}
    out: dict[str, tuple[DialogueRecord, Organization]] = {}
    names = sorted(os.listdir(root))
    for name in names:
        if (not name.endswith(".json") or name == "split.json"
                or name.startswith("org")):
            continue
        path = os.path.join(root, name)
        with open(path, encoding="utf-8") as fh:
            org_ref = json.load(fh).get("org", "")
        if org_ref not in orgs:
            org_path = os.path.join(root, org_ref)
            if not os.path.exists(org_path):
                raise DatasetError(
                    f"{name}: referenced organization {org_ref!r} missing")
            orgs[org_ref] = Organization.load(org_path)
        record = load_dialogue(path, orgs[org_ref])
        out[record.id] = (record, orgs[org_ref])
    if not out:
        raise DatasetError(f"no dialogue files under {root!r}")
    return out


def _examples_for(ids: list[str], data, use_coref: bool,
                  user_turns_only: bool):
    examples = []
    for did in ids:
        record, org = data[did]
        examples.extend(linking.collect_examples(
            record, org, use_coref=use_coref,
            user_turns_only=user_turns_only))
    return examples


def eval_linking_dataset(root: str, features: str = "string+graph",
                         model_kind: str = "mlp", baseline: str | None = None,
                         use_coref: bool = True, user_turns_only: bool = True,
                         split_name: str = "test",
                         max_iter: int = 600, seed: int = 0) -> EvalReport:
    data = load_dataset(root)
    split = load_split(root)
    eval_ids = [d for d in split.get(split_name, []) if d in data]
    if not eval_ids:
        raise DatasetError(f"split {split_name!r} selects no dialogues")
    eval_examples = _examples_for(eval_ids, data, use_coref, user_turns_only)
    gold = {ex.key: ex.gold_ids for ex in eval_examples}

    config: dict = {"features": features, "coref": use_coref,
                    "user_turns_only": user_turns_only}
    if baseline:
        config["baseline"] = baseline
        decisions = linking.decide_baseline(eval_examples,
                                            recency=baseline == "recency")
    else:
        config.update({"model": model_kind, "max_iter": max_iter, "seed": seed})
        train_ids = [d for d in split.get("train", []) if d in data]
        if not train_ids:
            raise DatasetError("split 'train' selects no dialogues")
        train_examples = _examples_for(train_ids, data, use_coref,
                                       user_turns_only)
        use_graph = features == "string+graph"
        X, y = linking.training_matrix(train_examples, use_graph=use_graph)
        names = (linking.ALL_FEATURES if use_graph
                 else linking.STRING_FEATURES)
        model = train_linker(X, y, names, kind=model_kind, max_iter=max_iter,
                             seed=seed)
        decisions = linking.decide_examples(model, eval_examples)

    metrics = linking.evaluate_linking(decisions, gold)
    report = EvalReport(task="linking", split=split_name, config=config,
                        metrics=metrics)
    per_dialogue_keys: dict[str, list[str]] = {}
    for key in decisions:
        per_dialogue_keys.setdefault(key.rsplit("/", 1)[0], []).append(key)
    for did, keys in sorted(per_dialogue_keys.items()):
        sub = linking.evaluate_linking({k: decisions[k] for k in keys},
                                       {k: gold[k] for k in keys})
        report.per_dialogue[did] = sub
    report.per_instance = [
        {"mention": key, "predicted": sorted(decisions[key]),
         "gold": sorted(gold[key])}
        for key in sorted(decisions)
    ]
    return report


def ranking_instances_dataset(root: str, mode: str = "subgraph+history",
                              split_name: str = "test", seed: int = 0,
                              n_candidates: int = 10,
                              method: str = "random") -> list[RankingInstance]:
    """Each agent turn becomes one instance; the pool is corpus-wide."""
    data = load_dataset(root)
    split = load_split(root)
    pool = []
    for record, _ in data.values():
        pool.extend(t.text for t in record.turns
                    if t.speaker == "agent" and t.text)
    pool = sorted(set(pool))
    instances = []
    counter = 0
    for did in split.get(split_name, []):
        if did not in data:
            continue
        record, org = data[did]
        graph = org_to_graph(org)
        label_index = {}
        for node in linking.candidate_set(graph):
            label_index.setdefault((node.kind.value, node.label),
                                   []).append(node.id)
        mentioned: list[str] = []
        history: list[tuple[str, str]] = []
        for turn in record.turns:
            if turn.speaker == "agent" and history and turn.text:
                if mode == "subgraph+history":
                    sub = relevant_subgraph(graph, mentioned)
                    sub_text = verbalize(sub)
                else:
                    sub_text = ""
                context = assemble_context(sub_text, history)
                instances.append(make_dataset_instance(
                    context, turn.text, pool, seed + counter, n_candidates,
                    method))
                counter += 1
            history.append((turn.speaker, turn.text))
            for m in turn.mentions:
                if not isinstance(m.targets, list):
                    continue
                for ref in m.targets:
                    for nid in label_index.get((ref.kind, ref.name), []):
                        if nid not in mentioned:
                            mentioned.append(nid)
    return instances


def make_dataset_instance(context: str, gold: str, pool: list[str], seed: int,
                          n_candidates: int, method: str) -> RankingInstance:
    negatives = sample_negatives(pool, gold, n_candidates - 1, method=method,
                                 seed=seed)
    rng = random.Random(seed ^ 0x5EED)
    gold_index = rng.randrange(n_candidates)
    candidates = list(negatives)
    candidates.insert(gold_index, gold)
    return RankingInstance(context=context, candidates=candidates,
                           gold_index=gold_index)


def eval_ranking_dataset(root: str, mode: str = "subgraph+history",
                         scorer=None, split_name: str = "test",
                         seed: int = 0, method: str = "random") -> EvalReport:
    scorer = scorer or NativeScorer()
    instances = ranking_instances_dataset(root, mode=mode,
                                          split_name=split_name, seed=seed,
                                          method=method)
    if not instances:
        raise DatasetError("no ranking instances in the selected split")
    ranks = []
    per_instance = []
    for k, inst in enumerate(instances):
        order = rank(scorer, inst.context, inst.candidates)
        r = gold_rank(order, inst.gold_index)
        ranks.append(r)
        per_instance.append({"instance": k, "gold_rank": r})
    metrics = {"recall_at_1": recall_at_k(ranks, 1),
               "recall_at_2": recall_at_k(ranks, 2),
               "mrr": mrr(ranks)}
    return EvalReport(task="ranking", split=split_name,
                      config={"mode": mode, "seed": seed, "method": method,
                              "scorer": getattr(scorer, "transport", "?")},
                      metrics=metrics, per_instance=per_instance)
