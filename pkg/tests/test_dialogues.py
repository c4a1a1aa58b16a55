import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convkg.compat import adapt_dialogue
from convkg.dialogues import (NEW, SPURIOUS, DialogueError, DialogueRecord,
                              EntityRef, Intent, Mention, Turn,
                              dialogue_from_json_dict, export_dialogue,
                              gold_links, load_dialogue, load_split,
                              replay_dialogue, resolve_ref, split_ids,
                              validate_dialogue)
from convkg.fixtures import fixture_org, load_fixture
from convkg.graph import EdgeKind, KnowledgeGraph, NodeKind
from convkg.orggen import org_to_graph


@pytest.fixture(scope="module")
def workshop():
    return load_fixture("visitor_workshop")


@pytest.fixture(scope="module")
def misunderstanding():
    return load_fixture("asr_misunderstanding")


class TestFixtureOrg:
    def test_pinned_entities_present(self):
        org = fixture_org()
        for name in ("Wendy Parker", "Mark Suarez", "Andrew Fletcher",
                     "Stephanie Shields"):
            assert org.person(name)
        assert org.person("Mark Suarez").office == "room 270"
        assert org.event("users workshop").organizer == "Mark Suarez"
        org.event("infrastructures discussion")

    def test_spurious_name_absent(self):
        org = fixture_org()
        with pytest.raises(KeyError):
            org.person("Stephanie Jules")

    def test_shields_not_at_discussion(self):
        org = fixture_org()
        event = org.event("infrastructures discussion")
        assert "Stephanie Shields" not in event.attendees

    def test_graph_exports_clean(self):
        org_to_graph(fixture_org()).check()


class TestWorkshopFixture:
    def test_shape(self, workshop):
        record, org = workshop
        assert len(record.turns) == 6
        assert [t.speaker for t in record.turns] == ["user", "agent"] * 3
        validate_dialogue(record, org)

    def test_opening_turn_has_two_mentions(self, workshop):
        record, _ = workshop
        t1 = record.turns[0]
        assert len(t1.mentions) == 2
        surfaces = [m.surface for m in t1.mentions]
        assert surfaces == ["Wendy Parker", "users workshop"]
        assert t1.mentions[0].targets[0] == EntityRef("person", "Wendy Parker")
        assert t1.mentions[1].targets[0] == EntityRef("event", "users workshop")

    def test_possessive_pronoun_resolves_to_organizer(self, workshop):
        record, _ = workshop
        pronoun = next(m for t in record.turns for m in t.mentions
                       if m.surface == "his")
        assert pronoun.targets == [EntityRef("person", "Mark Suarez")]

    def test_room_answer_turn(self, workshop):
        record, _ = workshop
        rooms = [(t, m) for t in record.turns for m in t.mentions
                 if not isinstance(m.targets, str)
                 and any(r.kind == "room" for r in m.targets)]
        assert rooms
        turn, mention = rooms[0]
        assert turn.speaker == "agent"
        assert mention.targets[0].name == "room 270"

    def test_spans_index_text(self, workshop):
        record, _ = workshop
        for turn in record.turns:
            for m in turn.mentions:
                assert turn.text[m.start:m.end] == m.surface


class TestMisunderstandingFixture:
    def test_shape(self, misunderstanding):
        record, org = misunderstanding
        assert len(record.turns) == 14
        validate_dialogue(record, org)

    def test_mistranscribed_name_marked_spurious(self, misunderstanding):
        record, _ = misunderstanding
        t3 = record.turns[2]
        spurious = [m for m in t3.mentions if m.is_spurious]
        assert [m.surface for m in spurious] == ["Stephanie Jules"]

    def test_empty_recognizer_output_turn(self, misunderstanding):
        record, _ = misunderstanding
        t5 = record.turns[4]
        assert t5.asr == ""
        assert t5.mentions == []

    def test_corrected_name_links(self, misunderstanding):
        record, _ = misunderstanding
        hits = [m for t in record.turns for m in t.mentions
                if m.surface == "Stephanie Shields"
                and not isinstance(m.targets, str)]
        assert hits
        assert all(m.targets == [EntityRef("person", "Stephanie Shields")]
                   for m in hits)

    def test_her_resolves_to_shields(self, misunderstanding):
        record, _ = misunderstanding
        pronoun = next(m for t in record.turns for m in t.mentions
                       if m.surface == "her")
        assert pronoun.targets == [EntityRef("person", "Stephanie Shields")]


class TestValidation:
    def _record(self, org, turns):
        return DialogueRecord(id="d1", org=str(org.seed), task="t", turns=turns)

    def test_noncontiguous_indices_rejected(self, workshop):
        _, org = workshop
        rec = self._record(org, [
            Turn(1, "user", "hi"), Turn(3, "agent", "hello")])
        with pytest.raises(DialogueError):
            validate_dialogue(rec, org)

    def test_bad_speaker_rejected(self, workshop):
        _, org = workshop
        rec = self._record(org, [Turn(1, "narrator", "hi")])
        with pytest.raises(DialogueError):
            validate_dialogue(rec, org)

    def test_span_mismatch_rejected(self, workshop):
        _, org = workshop
        m = Mention(0, 4, "XXXX", [EntityRef("person", "Wendy Parker")])
        rec = self._record(org, [Turn(1, "user", "Wendy Parker is here",
                                      mentions=[m])])
        with pytest.raises(DialogueError):
            validate_dialogue(rec, org)

    def test_unresolvable_target_rejected(self, workshop):
        _, org = workshop
        m = Mention(0, 6, "Nobody", [EntityRef("person", "Nobody Realman")])
        rec = self._record(org, [Turn(1, "user", "Nobody here",
                                      mentions=[m])])
        with pytest.raises(DialogueError):
            validate_dialogue(rec, org)

    def test_markers_accepted(self, workshop):
        _, org = workshop
        rec = self._record(org, [Turn(1, "user", "Bob and a new thing",
                                      mentions=[
                                          Mention(0, 3, "Bob", SPURIOUS),
                                          Mention(10, 13, "new", NEW)])])
        validate_dialogue(rec, org)

    def test_resolve_ref_matches(self, workshop):
        _, org = workshop
        matches = resolve_ref(EntityRef("person", "Mark Suarez"), org)
        assert len(matches) == 1 and matches[0].office == "room 270"
        assert resolve_ref(EntityRef("person", "Not A Person"), org) == []

    def test_resolve_ref_constraint_narrowing(self, workshop):
        _, org = workshop
        twin_a = org.persons[0]
        twin_b = type(twin_a)(name=twin_a.name, group=twin_a.group,
                              office="room 999", phone=twin_a.phone,
                              email=twin_a.email)
        org2 = type(org)(seed=org.seed,
                         persons=org.persons + [twin_b],
                         groups=org.groups, rooms=org.rooms,
                         events=org.events)
        ref = EntityRef("person", twin_a.name)
        assert len(resolve_ref(ref, org2)) == 2
        narrowed = resolve_ref(ref, org2,
                               [{"attr": "office", "value": "room 999"}])
        assert narrowed == [twin_b]


class TestSerialization:
    def test_round_trip(self, workshop):
        record, _ = workshop
        text = export_dialogue(record)
        back = dialogue_from_json_dict(json.loads(text))
        assert back.to_json() == record.to_json()

    def test_load_dialogue_error_names_line(self, tmp_path, workshop):
        _, org = workshop
        p = tmp_path / "bad.json"
        p.write_text('{"id": "x",\n  "turns": [}\n')
        with pytest.raises(DialogueError) as err:
            load_dialogue(str(p), org)
        assert "line" in str(err.value)

    def test_export_writes_file(self, tmp_path, workshop):
        record, _ = workshop
        path = tmp_path / "out.json"
        export_dialogue(record, str(path))
        assert json.loads(path.read_text())["id"] == record.id


class TestSplit:
    def test_sizes_half_quarter_quarter(self):
        ids = [f"d{i:03d}" for i in range(119)]
        parts = split_ids(ids)
        assert len(parts["train"]) == 59
        assert len(parts["dev"]) == 30
        assert len(parts["test"]) == 30

    def test_partition_and_determinism(self):
        ids = [f"dlg{i}" for i in range(40)]
        a, b = split_ids(ids), split_ids(list(reversed(ids)))
        assert a == b
        merged = a["train"] + a["dev"] + a["test"]
        assert sorted(merged) == sorted(ids)
        assert a["train"] == sorted(a["train"])

    def test_load_split_manifest(self, tmp_path):
        for i in range(4):
            (tmp_path / f"d{i}.json").write_text("{}")
        manifest = {"train": ["d0", "d1"], "dev": ["d2"], "test": ["d3"]}
        (tmp_path / "split.json").write_text(json.dumps(manifest))
        assert load_split(str(tmp_path)) == manifest

    def test_load_split_rejects_overlap(self, tmp_path):
        for i in range(2):
            (tmp_path / f"d{i}.json").write_text("{}")
        manifest = {"train": ["d0", "d1"], "dev": ["d1"], "test": []}
        (tmp_path / "split.json").write_text(json.dumps(manifest))
        with pytest.raises(DialogueError):
            load_split(str(tmp_path))

    def test_load_split_derives_without_manifest(self, tmp_path):
        for i in range(8):
            (tmp_path / f"d{i}.json").write_text("{}")
        parts = load_split(str(tmp_path))
        assert len(parts["train"]) == 4
        assert len(parts["dev"]) == 2
        assert len(parts["test"]) == 2


class TestReplay:
    def test_turn_and_mention_nodes(self, workshop):
        record, org = workshop
        g = org_to_graph(org)
        before = g.node_count()
        out = replay_dialogue(record, g)
        assert len(out) == len(record.turns)
        n_mentions = sum(len(t.mentions) for t in record.turns)
        assert g.node_count() == before + len(record.turns) + n_mentions
        g.check()

    def test_empty_turn_gets_placeholder_label(self, misunderstanding):
        record, org = misunderstanding
        g = org_to_graph(org)
        out = replay_dialogue(record, g)
        utt5 = g.node(out[4][0])
        assert utt5.label == "[UNK]"

    def test_link_gold_adds_refers_to(self, workshop):
        record, org = workshop
        g = org_to_graph(org)
        replay_dialogue(record, g, link_gold=True)
        refers = [e for e in g.edges() if e[2] is EdgeKind.REFERS_TO]
        resolvable = sum(1 for t in record.turns for m in t.mentions
                         if isinstance(m.targets, list))
        assert len(refers) == resolvable
        g.check()

    def test_gold_links_keys(self, workshop):
        record, org = workshop
        g = org_to_graph(org)
        links = gold_links(record, g)
        assert links["1:0"]  # Wendy Parker
        label = {n.id: n.label for n in g.nodes()}
        assert {label[i] for i in links["1:0"]} == {"Wendy Parker"}


class TestCompat:
    def test_aliased_keys(self):
        raw = {
            "dialogue_id": "legacy-1",
            "organization": "7",
            "scenario": "find the office",
            "utterances": [
                {"turn": 1, "role": "visitor",
                 "transcription": "Where is Mark Suarez?",
                 "entity_links": [
                     {"from": 9, "to": 20, "text": "Mark Suarez",
                      "entities": [{"type": "person", "label": "Mark Suarez"}]},
                 ]},
                {"turn": 2, "role": "robot", "transcription": "Room 270."},
            ],
        }
        rec = dialogue_from_json_dict(adapt_dialogue(raw))
        assert rec.id == "legacy-1"
        assert rec.turns[0].speaker == "user"
        assert rec.turns[1].speaker == "agent"
        m = rec.turns[0].mentions[0]
        assert (m.start, m.end, m.surface) == (9, 20, "Mark Suarez")
        assert m.targets == [EntityRef("person", "Mark Suarez")]

    def test_marker_aliases(self):
        raw = {
            "dialogue_id": "legacy-2",
            "organization": "7",
            "scenario": "t",
            "utterances": [
                {"turn": 1, "role": "visitor", "transcription": "Bob is new",
                 "entity_links": [
                     {"from": 0, "to": 3, "text": "Bob",
                      "target": "spurious"},
                     {"from": 7, "to": 10, "text": "new",
                      "target": "new_entity"},
                 ]},
            ],
        }
        rec = dialogue_from_json_dict(adapt_dialogue(raw))
        assert rec.turns[0].mentions[0].targets == SPURIOUS
        assert rec.turns[0].mentions[1].targets == NEW

    def test_canonical_passes_through(self, workshop):
        record, _ = workshop
        doc = record.to_json_dict()
        assert adapt_dialogue(doc)["id"] == doc["id"]
        rec = dialogue_from_json_dict(adapt_dialogue(doc))
        assert rec.to_json() == record.to_json()


names_st = st.text(alphabet="abcdefg ", min_size=1, max_size=12).filter(str.strip)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(st.sampled_from(["user", "agent"]), names_st),
                min_size=1, max_size=6))
def test_record_round_trip_property(turn_specs):
    turns = [Turn(i + 1, speaker, text,
                  intent=Intent("inform", []) if i == 0 else None)
             for i, (speaker, text) in enumerate(turn_specs)]
    rec = DialogueRecord(id="prop", org="7", task="t", turns=turns)
    back = dialogue_from_json_dict(json.loads(export_dialogue(rec)))
    assert back.to_json() == rec.to_json()
