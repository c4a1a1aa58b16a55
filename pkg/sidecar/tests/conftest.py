import json
import os

import pytest

TRANSCRIPTS = os.path.join(os.path.dirname(__file__), "..", "..",
                           "transcripts")


@pytest.fixture(scope="session")
def golden_cases():
    path = os.path.join(TRANSCRIPTS, "golden_cases.json")
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def golden_requests():
    with open(os.path.join(TRANSCRIPTS, "golden_requests.ndjson"),
              "rb") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def golden_responses():
    with open(os.path.join(TRANSCRIPTS, "golden_responses.ndjson"),
              "rb") as fh:
        return fh.read()
