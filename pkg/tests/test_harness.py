import json

import pytest

from convkg.harness import (DatasetError, EvalReport, eval_linking_dataset,
                            eval_ranking_dataset, load_dataset,
                            make_dataset_instance, ranking_instances_dataset)
from convkg.linking import evaluate_linking


def _dialogue(did, name, office, pronoun=None):
    ask = f"Where is the office of {name}?"
    reply = f"The office of {name} is {office}."
    turns = [
        {"i": 1, "speaker": "user", "asr": ask, "gold": None,
         "intent": {"name": "find_attribute", "args": [name]},
         "mentions": [{"start": ask.index(name),
                       "end": ask.index(name) + len(name),
                       "surface": name,
                       "targets": [{"kind": "person", "name": name}]}]},
        {"i": 2, "speaker": "agent", "asr": reply, "gold": None,
         "intent": None, "mentions": []},
    ]
    if pronoun:
        follow = f"What group is {pronoun} in?"
        turns.append(
            {"i": 3, "speaker": "user", "asr": follow, "gold": None,
             "intent": None,
             "mentions": [{"start": follow.index(pronoun),
                           "end": follow.index(pronoun) + len(pronoun),
                           "surface": pronoun,
                           "targets": [{"kind": "person", "name": name}]}]})
    return {"id": did, "org": "org_7.json", "task": "lookup", "turns": turns}


@pytest.fixture(scope="module")
def dataset_root(tmp_path_factory, fixture_org_session):
    root = tmp_path_factory.mktemp("dataset")
    org = fixture_org_session
    org.save(root / "org_7.json")
    ids = []
    for k, person in enumerate(org.persons[:12]):
        pronoun = "his" if k % 3 == 0 else None
        doc = _dialogue(f"d{k:02d}", person.name, person.office, pronoun)
        (root / f"d{k:02d}.json").write_text(json.dumps(doc))
        ids.append(f"d{k:02d}")
    split = {"train": ids[:8], "dev": ids[8:10], "test": ids[10:]}
    (root / "split.json").write_text(json.dumps(split))
    return root


class TestLoadDataset:
    def test_loads_all_dialogues(self, dataset_root):
        data = load_dataset(str(dataset_root))
        assert len(data) == 12
        record, org = data["d00"]
        assert record.turns[0].speaker == "user"
        assert org.person(record.turns[0].mentions[0].surface)

    def test_missing_root_mentions_ingest(self, tmp_path):
        with pytest.raises(DatasetError) as err:
            load_dataset(str(tmp_path / "nope"))
        assert "ingest" in str(err.value)

    def test_empty_root(self, tmp_path):
        with pytest.raises(DatasetError):
            load_dataset(str(tmp_path))

    def test_missing_org_reference(self, tmp_path):
        doc = {"id": "x", "org": "org_9.json", "task": "", "turns": [
            {"i": 1, "speaker": "user", "asr": "hi", "gold": None,
             "intent": None, "mentions": []}]}
        (tmp_path / "x.json").write_text(json.dumps(doc))
        with pytest.raises(DatasetError) as err:
            load_dataset(str(tmp_path))
        assert "org_9.json" in str(err.value)


class TestLinkingEval:
    def test_baseline_report(self, dataset_root):
        report = eval_linking_dataset(str(dataset_root), baseline="equality")
        assert report.task == "linking"
        assert report.split == "test"
        assert set(report.metrics) == {"precision", "recall", "f1"}
        # exact-name mentions all hit; metric should be perfect here
        assert report.metrics["precision"] == 1.0

    def test_recency_baseline_covers_pronouns(self, dataset_root):
        eq = eval_linking_dataset(str(dataset_root), baseline="equality",
                                  split_name="train")
        rec = eval_linking_dataset(str(dataset_root), baseline="recency",
                                   split_name="train")
        assert rec.metrics["recall"] >= eq.metrics["recall"]

    def test_per_instance_recomputes_micro(self, dataset_root):
        report = eval_linking_dataset(str(dataset_root), baseline="equality",
                                      split_name="train")
        decisions = {row["mention"]: set(row["predicted"])
                     for row in report.per_instance}
        gold = {row["mention"]: set(row["gold"])
                for row in report.per_instance}
        again = evaluate_linking(decisions, gold)
        assert again == report.metrics

    def test_per_dialogue_keys(self, dataset_root):
        report = eval_linking_dataset(str(dataset_root), baseline="equality",
                                      split_name="dev")
        assert set(report.per_dialogue) == {"d08", "d09"}

    def test_trained_model_runs(self, dataset_root):
        report = eval_linking_dataset(str(dataset_root), model_kind="logreg",
                                      max_iter=150)
        assert report.config["model"] == "logreg"
        assert 0.0 <= report.metrics["f1"] <= 1.0

    def test_bad_split_name(self, dataset_root):
        with pytest.raises(DatasetError):
            eval_linking_dataset(str(dataset_root), split_name="nope")

    def test_report_save(self, dataset_root, tmp_path):
        report = eval_linking_dataset(str(dataset_root), baseline="equality")
        out = tmp_path / "report.json"
        report.save(out)
        doc = json.loads(out.read_text())
        assert doc["metrics"] == report.metrics
        assert doc["task"] == "linking"


class TestRankingEval:
    def test_instances_one_per_agent_turn(self, dataset_root):
        instances = ranking_instances_dataset(str(dataset_root),
                                              split_name="test")
        assert len(instances) == 2  # d10, d11: one agent turn each
        for inst in instances:
            assert len(inst.candidates) == 10
            assert len(set(inst.candidates)) == 10
            assert inst.candidates[inst.gold_index].startswith("The office")

    def test_history_mode_omits_subgraph(self, dataset_root):
        sub = ranking_instances_dataset(str(dataset_root),
                                        split_name="test")
        hist = ranking_instances_dataset(str(dataset_root), mode="history",
                                         split_name="test")
        assert all(h.context in s.context
                   for h, s in zip(hist, sub))
        assert all(len(s.context) > len(h.context)
                   for h, s in zip(hist, sub))

    def test_subgraph_context_names_the_answer(self, dataset_root,
                                               fixture_org_session):
        instances = ranking_instances_dataset(str(dataset_root),
                                              split_name="test")
        for inst in instances:
            gold = inst.candidates[inst.gold_index]
            office = gold.rsplit(" is ", 1)[1].rstrip(".")
            assert office in inst.context

    def test_eval_report(self, dataset_root):
        report = eval_ranking_dataset(str(dataset_root))
        assert report.task == "ranking"
        assert set(report.metrics) == {"recall_at_1", "recall_at_2", "mrr"}
        ranks = [row["gold_rank"] for row in report.per_instance]
        assert report.metrics["mrr"] == pytest.approx(
            sum(1 / r for r in ranks) / len(ranks))
        # office facts are in the context, so the gold answer should win
        assert report.metrics["recall_at_1"] == 1.0

    def test_deterministic_instances(self, dataset_root):
        a = ranking_instances_dataset(str(dataset_root), split_name="test")
        b = ranking_instances_dataset(str(dataset_root), split_name="test")
        assert [(x.context, x.candidates, x.gold_index) for x in a] == \
               [(x.context, x.candidates, x.gold_index) for x in b]

    def test_empty_split_is_error(self, dataset_root):
        with pytest.raises(DatasetError):
            eval_ranking_dataset(str(dataset_root), split_name="nope")


class TestMakeDatasetInstance:
    def test_deterministic_and_gold_placed(self):
        pool = [f"answer {i}" for i in range(15)]
        a = make_dataset_instance("ctx", "answer 0", pool, 3, 10, "random")
        b = make_dataset_instance("ctx", "answer 0", pool, 3, 10, "random")
        assert a.candidates == b.candidates
        assert a.candidates[a.gold_index] == "answer 0"
