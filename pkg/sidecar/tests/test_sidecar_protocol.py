import json

import pytest

from lmscorer.protocol import ProtocolError, frame, parse_frame, round_scores


class TestFraming:
    def test_canonical_bytes(self):
        assert frame({"b": 1, "a": [1, 2]}) == b'{"a":[1,2],"b":1}\n'

    def test_non_ascii_escaped(self):
        assert frame({"t": "é"}) == b'{"t":"\\u00e9"}\n'

    def test_round_trip(self):
        obj = {"id": 3, "op": "score", "context": "a\nb",
               "candidates": ["x", "y"]}
        assert parse_frame(frame(obj)) == obj

    def test_garbage_rejected(self):
        with pytest.raises(ProtocolError) as err:
            parse_frame(b"not json\n")
        assert str(err.value).startswith("bad frame:")

    def test_non_object_rejected(self):
        with pytest.raises(ProtocolError):
            parse_frame(b"[1,2]\n")

    def test_round_scores_six_decimals(self):
        assert round_scores([0.12345678, 1.0]) == [0.123457, 1.0]


class TestGoldenFraming:
    """The recorded transcripts pin the encoding bit for bit."""

    def test_requests_reencode_exactly(self, golden_cases):
        for case in golden_cases:
            if case["request"] is None:
                continue
            assert frame(case["request"]) == \
                case["request_bytes"].encode("utf-8"), case["name"]

    def test_responses_reencode_exactly(self, golden_cases):
        for case in golden_cases:
            assert frame(case["response"]) == \
                case["response_bytes"].encode("utf-8"), case["name"]

    def test_requests_parse_back(self, golden_cases):
        for case in golden_cases:
            if case["request"] is None:
                continue
            assert parse_frame(case["request_bytes"]) == case["request"]

    def test_streams_match_case_concatenation(self, golden_cases,
                                              golden_requests,
                                              golden_responses):
        requests = b"".join(case["request_bytes"].encode("utf-8")
                            for case in golden_cases)
        responses = b"".join(case["response_bytes"].encode("utf-8")
                             for case in golden_cases)
        assert requests == golden_requests
        assert responses == golden_responses

    def test_scores_already_six_decimal(self, golden_cases):
        for case in golden_cases:
            scores = case["response"].get("scores")
            if scores is None:
                continue
            assert round_scores(scores) == scores
            assert all(0.0 <= s <= 1.0 for s in scores)

    def test_malformed_line_case_present(self, golden_cases):
        raws = [c for c in golden_cases if c["request"] is None]
        assert len(raws) == 1
        with pytest.raises(json.JSONDecodeError):
            json.loads(raws[0]["raw_request"])
