"""Regenerate the golden wire-protocol transcripts and the recorded chat
session used by the sidecar and browser-client test suites.

Run from the repository root: python3 transcripts/record.py
"""
import json
import os
import zlib

from convkg.fixtures import load_fixture
from convkg.scorer import frame
from convkg.service import SessionStore, chat_turn

HERE = os.path.dirname(os.path.abspath(__file__))


def hash_score(context: str, candidate: str) -> float:
    """Reference scoring rule for protocol conformance runs: any server
    implementing it can replay the golden stream byte for byte."""
    digest = zlib.crc32((context + "\x00" + candidate).encode("utf-8"))
    return (digest % 10 ** 6) / 10 ** 6


def hash_loss(examples: list) -> float:
    """Deterministic pseudo-loss over the canonical example encoding."""
    canonical = json.dumps(examples, sort_keys=True,
                           separators=(",", ":")).encode("utf-8")
    return (zlib.crc32(canonical) % 10 ** 6) / 10 ** 6


SUBGRAPH_CONTEXT = (
    "The office of Mark Suarez is room 270. "
    "Mark Suarez attends the users workshop. "
    "The users workshop starts at 10:00.\n"
    "Visitor: Hello, I am Wendy Parker, here for the users workshop.\n"
    "Robot: Welcome Wendy! The users workshop is organized by Mark Suarez.\n"
    "Visitor: Where is his office?"
)

TEN_CANDIDATES = [
    "It is room 270.",
    "It is room 141.",
    "It is room 202.",
    "It is room 315.",
    "It is room 388.",
    "The workshop starts at 10:00.",
    "He is not available today.",
    "You can find the cafeteria downstairs.",
    "I did not catch that, could you repeat?",
    "Have a pleasant visit!",
]

POINTWISE_EXAMPLES = [
    {"context": SUBGRAPH_CONTEXT, "candidate": "It is room 270.", "label": 1},
    {"context": SUBGRAPH_CONTEXT, "candidate": "It is room 141.", "label": 0},
    {"context": "Visitor: Is the canteen open?",
     "candidate": "Yes, until 14:00.", "label": 1},
]

PAIRWISE_EXAMPLES = [
    {"context": SUBGRAPH_CONTEXT, "positive": "It is room 270.",
     "negative": "It is room 388."},
    {"context": "Visitor: When does the users workshop start?",
     "positive": "The workshop starts at 10:00.",
     "negative": "Have a pleasant visit!"},
]


def build_cases() -> list[dict]:
    cases = []

    def score_case(name, cid, context, candidates):
        cases.append({
            "name": name,
            "request": {"id": cid, "op": "score", "context": context,
                        "candidates": candidates},
            "response": {"id": cid,
                         "scores": [hash_score(context, c)
                                    for c in candidates]},
        })

    score_case("score_basic", 1, "Visitor: Hello",
               ["Hi there.", "The users workshop starts at 10:00."])
    score_case("score_ten_candidates", 2, SUBGRAPH_CONTEXT, TEN_CANDIDATES)
    score_case("score_unicode", 3,
               "Visitor: Où est la salle 270? 部屋はどこですか?",
               ["C'est la salle 270.", "右側です。", "naïve façade"])
    cases.append({
        "name": "train_pointwise",
        "request": {"id": 4, "op": "train", "mode": "pointwise",
                    "epochs": 10, "batch_size": 5,
                    "examples": POINTWISE_EXAMPLES},
        "response": {"id": 4, "status": "ok",
                     "final_loss": hash_loss(POINTWISE_EXAMPLES)},
    })
    cases.append({
        "name": "train_pairwise",
        "request": {"id": 5, "op": "train", "mode": "pairwise",
                    "epochs": 10, "batch_size": 5,
                    "examples": PAIRWISE_EXAMPLES},
        "response": {"id": 5, "status": "ok",
                     "final_loss": hash_loss(PAIRWISE_EXAMPLES)},
    })
    cases.append({
        "name": "malformed_line",
        "raw_request": "this is not json\n",
        "response": {"id": None, "error": "bad frame: Expecting value"},
    })
    cases.append({
        "name": "unknown_op",
        "request": {"id": 6, "op": "lookup"},
        "response": {"id": 6, "error": "unsupported op 'lookup'"},
    })
    cases.append({
        "name": "score_missing_candidates",
        "request": {"id": 7, "op": "score", "context": "Visitor: Hello"},
        "response": {"id": 7, "error": "missing field 'candidates'"},
    })
    cases.append({
        "name": "train_empty_examples",
        "request": {"id": 8, "op": "train", "mode": "pointwise",
                    "epochs": 1, "batch_size": 5, "examples": []},
        "response": {"id": 8, "error": "training stream is empty"},
    })
    return cases


def write_golden(cases: list[dict]) -> None:
    requests = b""
    responses = b""
    rows = []
    for case in cases:
        if "raw_request" in case:
            req_bytes = case["raw_request"].encode("utf-8")
        else:
            req_bytes = frame(case["request"])
        resp_bytes = frame(case["response"])
        requests += req_bytes
        responses += resp_bytes
        rows.append({
            "name": case["name"],
            "request": case.get("request"),
            "raw_request": case.get("raw_request"),
            "request_bytes": req_bytes.decode("utf-8"),
            "response": case["response"],
            "response_bytes": resp_bytes.decode("utf-8"),
        })
    with open(os.path.join(HERE, "golden_requests.ndjson"), "wb") as fh:
        fh.write(requests)
    with open(os.path.join(HERE, "golden_responses.ndjson"), "wb") as fh:
        fh.write(responses)
    with open(os.path.join(HERE, "golden_cases.json"), "w",
              encoding="utf-8") as fh:
        json.dump(rows, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def record_session() -> None:
    """Drive the bundled workshop dialogue through the live engine and keep
    every server reply, exactly as the HTTP layer would return it."""
    record, org = load_fixture("visitor_workshop")
    store = SessionStore()
    session = store.create(org=org)
    exchanges = []
    turns = record.turns
    for i in range(0, len(turns), 2):
        user = turns[i]
        agent = turns[i + 1] if i + 1 < len(turns) else None
        reply = chat_turn(session, user.text,
                          wizard_response=agent.text if agent else None)
        exchanges.append({
            "request": {"text": user.text},
            "reply": reply,
            "graph": session.graph.to_json_dict(),
        })
    doc = {
        "session": {"session_id": session.session_id, "org_seed": 7},
        "exchanges": exchanges,
    }
    with open(os.path.join(HERE, "workshop_session.json"), "w",
              encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


if __name__ == "__main__":
    write_golden(build_cases())
    record_session()
    print("wrote golden transcripts and recorded session under", HERE)
