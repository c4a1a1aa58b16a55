"""Bundled desk-scale fixtures: a small organization and two annotated dialogues."""
from __future__ import annotations

import json
from importlib import resources

from .dialogues import DialogueRecord, dialogue_from_json_dict, validate_dialogue
from .orggen import Organization, generate_org

FIXTURE_ORG_SEED = 7
FIXTURE_DIALOGUES = ("visitor_workshop", "asr_misunderstanding")

# (index, name) pins for persons the bundled dialogues talk about.
_PERSON_PINS = (
    (0, "Wendy Parker"),
    (1, "Mark Suarez"),
    (2, "Andrew Fletcher"),
    (3, "Stephanie Shields"),
)
_EVENT_PINS = ("users workshop", "infrastructures discussion")


def fixture_org() -> Organization:
    """The generated seed-7 organization with dialogue entities pinned in."""
    org = generate_org(FIXTURE_ORG_SEED)

    renames = {}
    for idx, name in _PERSON_PINS:
        old = org.persons[idx].name
        renames[old] = name
        org.persons[idx].name = name
        local = name.lower().replace(" ", ".")
        org.persons[idx].email = f"{local}@example.org"
    for event in org.events:
        event.organizer = renames.get(event.organizer, event.organizer)
        event.attendees = [renames.get(a, a) for a in event.attendees]

    # Mark Suarez answers from "room 270"; swap offices if someone else has it.
    mark = org.persons[1]
    if mark.office != "room 270":
        for p in org.persons:
            if p.office == "room 270":
                p.office = mark.office
                break
        mark.office = "room 270"
        if not any(r.name == "room 270" for r in org.rooms):
            org.rooms.append(type(org.rooms[0])(name="room 270", kind="office"))

    ws, infra = org.events[0], org.events[1]
    ws.name = _EVENT_PINS[0]
    ws.organizer = mark.name
    if mark.name not in ws.attendees:
        ws.attendees.insert(0, mark.name)
    infra.name = _EVENT_PINS[1]
    stephanie = org.persons[3].name
    if infra.organizer == stephanie:
        infra.organizer = org.persons[4].name
        if infra.organizer not in infra.attendees:
            infra.attendees.insert(0, infra.organizer)
    infra.attendees = [a for a in infra.attendees if a != stephanie]
    for event in org.events[2:]:
        if event.name in _EVENT_PINS:
            event.name = "quarterly " + event.name
    return org


def _fixture_text(name: str) -> str:
    return (resources.files("convkg") / "data" / "fixtures" /
            f"{name}.json").read_text(encoding="utf-8")


def load_fixture(name: str) -> tuple[DialogueRecord, Organization]:
    if name not in FIXTURE_DIALOGUES:
        raise KeyError(f"unknown fixture {name!r}; have {FIXTURE_DIALOGUES}")
    org = fixture_org()
    record = dialogue_from_json_dict(json.loads(_fixture_text(name)))
    validate_dialogue(record, org)
    return record, org


def write_fixture_files(out_dir: str) -> list[str]:
    """Copy the bundled fixture files (plus the organization) into a directory."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    written = []
    org_path = os.path.join(out_dir, "org_visitor_center.json")
    fixture_org().save(org_path)
    written.append(org_path)
    for name in FIXTURE_DIALOGUES:
        path = os.path.join(out_dir, f"{name}.json")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(_fixture_text(name))
        written.append(path)
    return written
