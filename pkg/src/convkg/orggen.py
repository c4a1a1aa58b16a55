"""Deterministic generator of fictive organizations, calendars, and user tasks."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field, asdict
from datetime import datetime, timedelta

from . import names
from .graph import EdgeKind, KnowledgeGraph, NodeKind

DAY = "2023-05-15"
DAY_START = datetime.fromisoformat(f"{DAY}T08:00:00")
DAY_END = datetime.fromisoformat(f"{DAY}T18:00:00")
SLOT_MINUTES = 15
DURATIONS = (30, 60, 90)

TASK_TOPICS = ("schedule", "move", "cancel", "find_attribute")

PERSON_ATTRIBUTES = ("office", "email address", "phone number", "group")
EVENT_ATTRIBUTES = ("location", "start time", "attendees")


class GenerationError(ValueError):
    """Raised when a generator precondition fails (e.g. empty word lists)."""


@dataclass
class GenConfig:
    persons_min: int = 40
    persons_max: int = 60
    events_min: int = 30
    events_max: int = 50
    groups_min: int = 4
    groups_max: int = 6
    attendees_min: int = 2
    attendees_max: int = 8
    given_names: tuple[str, ...] = names.GIVEN_NAMES
    family_names: tuple[str, ...] = names.FAMILY_NAMES
    jargon: tuple[str, ...] = names.JARGON
    meeting_types: tuple[str, ...] = names.MEETING_TYPES
    conference_rooms: tuple[str, ...] = names.CONFERENCE_ROOMS
    group_names: tuple[str, ...] = names.GROUP_NAMES

    def check(self) -> None:
        for attr in ("given_names", "family_names", "jargon", "meeting_types",
                     "conference_rooms", "group_names"):
            if not getattr(self, attr):
                raise GenerationError(f"word list {attr!r} is empty")
        for lo, hi in ((self.persons_min, self.persons_max),
                       (self.events_min, self.events_max),
                       (self.groups_min, self.groups_max),
                       (self.attendees_min, self.attendees_max)):
            if lo < 1 or hi < lo:
                raise GenerationError(f"bad range [{lo}, {hi}]")


@dataclass
class Person:
    name: str
    group: str
    office: str
    phone: str
    email: str


@dataclass
class Room:
    name: str
    kind: str  # "office" or "conference"


@dataclass
class Event:
    name: str
    organizer: str
    location: str
    start: str  # ISO timestamps
    end: str
    attendees: list[str]


@dataclass
class Organization:
    seed: int
    persons: list[Person]
    groups: list[str]
    rooms: list[Room]
    events: list[Event]

    def person(self, name: str) -> Person:
        for p in self.persons:
            if p.name == name:
                return p
        raise KeyError(name)

    def event(self, name: str) -> Event:
        for e in self.events:
            if e.name == name:
                return e
        raise KeyError(name)

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "persons": [asdict(p) for p in self.persons],
            "groups": list(self.groups),
            "rooms": [asdict(r) for r in self.rooms],
            "events": [asdict(e) for e in self.events],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True,
                          ensure_ascii=False)

    @classmethod
    def from_json_dict(cls, data: dict) -> "Organization":
        return cls(
            seed=int(data["seed"]),
            persons=[Person(**p) for p in data["persons"]],
            groups=list(data["groups"]),
            rooms=[Room(**r) for r in data["rooms"]],
            events=[Event(**e) for e in data["events"]],
        )

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def load(cls, path: str) -> "Organization":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


@dataclass
class TaskInstance:
    template_id: str
    topic: str
    text: str
    bindings: dict[str, dict[str, str]] = field(default_factory=dict)


def event_name(rng: random.Random, jargon: tuple[str, ...],
               meeting_types: tuple[str, ...]) -> str:
    """One jargon term plus one meeting type, space-joined ("web-readiness status update")."""
    if not jargon or not meeting_types:
        raise GenerationError("event name word lists must be non-empty")
    return f"{rng.choice(jargon)} {rng.choice(meeting_types)}"


def _sample_times(rng: random.Random) -> tuple[str, str]:
    duration = rng.choice(DURATIONS)
    latest_start = DAY_END - timedelta(minutes=duration)
    slots = int((latest_start - DAY_START).total_seconds() // 60 // SLOT_MINUTES)
    start = DAY_START + timedelta(minutes=SLOT_MINUTES * rng.randint(0, slots))
    return start.isoformat(), (start + timedelta(minutes=duration)).isoformat()


def generate_org(seed: int, config: GenConfig | None = None) -> Organization:
    """Build a fictive organization fully determined by (seed, config)."""
    config = config or GenConfig()
    config.check()
    rng = random.Random(seed)

    n_groups = rng.randint(config.groups_min,
                           min(config.groups_max, len(config.group_names)))
    groups = list(rng.sample(config.group_names, n_groups))

    n_persons = rng.randint(config.persons_min, config.persons_max)
    full_names: list[str] = []
    seen = set()
    while len(full_names) < n_persons:
        name = f"{rng.choice(config.given_names)} {rng.choice(config.family_names)}"
        if name in seen:
            continue
        seen.add(name)
        full_names.append(name)

    offices = rng.sample(range(100, 400), n_persons)
    persons = []
    for name, office in zip(full_names, offices):
        local = name.lower().replace(" ", ".")
        persons.append(Person(
            name=name,
            group=rng.choice(groups),
            office=f"room {office}",
            phone="555-" + "".join(str(rng.randint(0, 9)) for _ in range(4)),
            email=f"{local}@example.org",
        ))

    rooms = [Room(name=r, kind="conference") for r in config.conference_rooms]
    rooms.extend(Room(name=p.office, kind="office") for p in persons)

    n_events = rng.randint(config.events_min, config.events_max)
    events = []
    for _ in range(n_events):
        organizer = rng.choice(persons)
        # Meetings mostly land in conference rooms, sometimes the organizer's office.
        location = (rng.choice(config.conference_rooms)
                    if rng.random() < 0.75 else organizer.office)
        size = rng.randint(config.attendees_min,
                           min(config.attendees_max, n_persons))
        attendees = [organizer.name]
        others = [p.name for p in persons if p.name != organizer.name]
        attendees.extend(rng.sample(others, size - 1))
        start, end = _sample_times(rng)
        events.append(Event(
            name=event_name(rng, config.jargon, config.meeting_types),
            organizer=organizer.name,
            location=location,
            start=start,
            end=end,
            attendees=attendees,
        ))

    return Organization(seed=seed, persons=persons, groups=groups,
                        rooms=rooms, events=events)


def _fmt_time(iso: str) -> str:
    return datetime.fromisoformat(iso).strftime("%H:%M")


def generate_task(org: Organization, seed: int) -> TaskInstance:
    """Instantiate one templated user task against the organization."""
    if not org.persons or not org.events:
        raise GenerationError("organization has no persons or no events")
    rng = random.Random(seed)
    topic = rng.choice(TASK_TOPICS)
    persona = rng.choice(org.persons).name

    if topic == "schedule":
        new_name = event_name(rng, names.JARGON, names.MEETING_TYPES)
        duration = rng.choice(DURATIONS)
        invitees = rng.sample([p.name for p in org.persons if p.name != persona], 2)
        text = (f"You are {persona}. You would like to arrange a meeting called "
                f"{new_name} lasting {duration} minutes. Invite {invitees[0]} "
                f"and {invitees[1]} to attend it.")
        bindings = {
            "persona": {"kind": "person", "value": persona},
            "new_event": {"kind": "event", "value": new_name},
            "duration": {"kind": "time", "value": f"{duration} minutes"},
            "invitee_1": {"kind": "person", "value": invitees[0]},
            "invitee_2": {"kind": "person", "value": invitees[1]},
        }
        return TaskInstance("schedule_meeting", topic, text, bindings)

    if topic == "move":
        event = rng.choice(org.events)
        room = rng.choice([r.name for r in org.rooms if r.kind == "conference"
                           and r.name != event.location])
        text = (f"You are {persona}. You need to move the {event.name} "
                f"to the {room}.")
        bindings = {
            "persona": {"kind": "person", "value": persona},
            "event": {"kind": "event", "value": event.name},
            "room": {"kind": "room", "value": room},
        }
        return TaskInstance("move_meeting", topic, text, bindings)

    if topic == "cancel":
        event = rng.choice(org.events)
        text = (f"You are {persona}. You want to cancel the {event.name} "
                f"scheduled at {_fmt_time(event.start)}.")
        bindings = {
            "persona": {"kind": "person", "value": persona},
            "event": {"kind": "event", "value": event.name},
            "time": {"kind": "time", "value": _fmt_time(event.start)},
        }
        return TaskInstance("cancel_meeting", topic, text, bindings)

    # find_attribute
    if rng.random() < 0.5:
        person = rng.choice(org.persons)
        attribute = rng.choice(PERSON_ATTRIBUTES)
        text = (f"You are {persona}. You want to find out the {attribute} "
                f"of {person.name}.")
        bindings = {
            "persona": {"kind": "person", "value": persona},
            "target": {"kind": "person", "value": person.name},
            "attribute": {"kind": "attribute", "value": attribute},
        }
    else:
        event = rng.choice(org.events)
        attribute = rng.choice(EVENT_ATTRIBUTES)
        text = (f"You are {persona}. You want to find out the {attribute} "
                f"of the {event.name}.")
        bindings = {
            "persona": {"kind": "person", "value": persona},
            "target": {"kind": "event", "value": event.name},
            "attribute": {"kind": "attribute", "value": attribute},
        }
    return TaskInstance("find_attribute", topic, text, bindings)


def org_to_graph(org: Organization) -> KnowledgeGraph:
    """Materialize the organization as a typed knowledge graph."""
    g = KnowledgeGraph()
    room_ids: dict[str, str] = {}
    for room in org.rooms:
        room_ids[room.name] = g.add_node(NodeKind.ROOM, room.name,
                                         {"room_kind": room.kind})
    group_ids = {name: g.add_node(NodeKind.GROUP, name) for name in org.groups}
    person_ids: dict[str, str] = {}
    for p in org.persons:
        pid = g.add_node(NodeKind.PERSON, p.name,
                         {"email": p.email, "phone": p.phone})
        person_ids[p.name] = pid
        g.add_edge(pid, group_ids[p.group], EdgeKind.MEMBER_OF)
        g.add_edge(pid, room_ids[p.office], EdgeKind.HAS_OFFICE)
    for e in org.events:
        eid = g.add_node(NodeKind.EVENT, e.name,
                         {"start": e.start, "end": e.end})
        g.add_edge(person_ids[e.organizer], eid, EdgeKind.ORGANIZES)
        g.add_edge(eid, room_ids[e.location], EdgeKind.LOCATED_IN)
        for attendee in e.attendees:
            g.add_edge(person_ids[attendee], eid, EdgeKind.ATTENDS)
    g.check()
    return g
