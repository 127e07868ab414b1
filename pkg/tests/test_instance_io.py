# tests/test_instance_io.py

import json

import pytest

from blowup_engine import principalize_many
from errors import InstanceFormatError
from instance_io import (
    load_instance,
    parse_instance,
    parse_trace,
    serialize_instance,
    serialize_trace,
    write_text,
)
from models import Nerve

UNKNOWN_NAME = """{
  "format_version": 1,
  "divisor_names": ["x", "y"],
  "nerve": [
    ["x", "y"],
    ["x", "z"]
  ],
  "divisors": [{"x": 1}, {"y": 1}]
}
"""

MISSING_COMMA = """{
  "format_version": 1,
  "divisor_names": ["x", "y"]
  "nerve": "full",
  "divisors": [{"x": 1}, {"y": 1}]
}
"""

BAD_FLAG = """{
  "divisor_names": ["x", "y"],
  "divisors": [{"x": 1}, {"y": 1}],
  "toric": "sometimes"
}
"""


class TestParseInstance:

    def test_defaults(self):
        instance = parse_instance('{"divisor_names": ["x", "y"], "divisors": [{"x": 2}, {"y": 1}]}')
        assert instance.is_full_nerve
        assert not instance.toric
        assert instance.coefficient_matrix() == [(2, 0), (0, 1)]
        assert instance.to_nerve() == Nerve.full(2)

    def test_named_nerve(self):
        instance = parse_instance(
            '{"divisor_names": ["a", "b", "c"], "nerve": [["a", "b"], ["c"]], "divisors": [{"a": 1}, {"b": 1}]}'
        )
        assert instance.to_nerve().maximal == ((0, 1), (2,))
        assert [label.name for label in instance.to_arrangement().labels] == ["a", "b", "c"]

    def test_unknown_name_in_nerve(self):
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(UNKNOWN_NAME)
        assert info.value.line == 6
        assert str(info.value).startswith("line 6:")

    def test_malformed_json(self):
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(MISSING_COMMA)
        assert info.value.line == 4

    def test_bad_field_type(self):
        with pytest.raises(InstanceFormatError) as info:
            parse_instance(BAD_FLAG)
        assert info.value.line == 4
        assert "toric" in str(info.value)

    def test_unknown_key(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"divisor_names": ["x"], "divisors": [], "colour": "red"}')

    def test_duplicate_names(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"divisor_names": ["x", "x"], "divisors": [{"x": 1}, {"x": 2}]}')

    def test_unsupported_version(self):
        with pytest.raises(InstanceFormatError):
            parse_instance('{"format_version": 2, "divisor_names": ["x"], "divisors": [{"x": 1}]}')

    def test_missing_file(self, tmp_path):
        with pytest.raises(InstanceFormatError):
            load_instance(str(tmp_path / "absent.json"))

    def test_round_trip(self):
        for text in (
            '{"divisor_names": ["x", "y"], "divisors": [{"x": 2}, {"y": 1}], "toric": true}',
            '{"divisor_names": ["a", "b", "c"], "nerve": [["b", "a"], ["c"]], "divisors": [{"a": 1}, {"b": 1, "c": 4}]}',
        ):
            instance = parse_instance(text)
            assert parse_instance(serialize_instance(instance)) == instance


class TestTraceFiles:

    def test_round_trip(self, x2y_state):
        _, trace = principalize_many(x2y_state)
        text = serialize_trace(trace)
        assert parse_trace(text) == trace
        assert serialize_trace(parse_trace(text)) == text

    def test_layout(self, xy_state):
        _, trace = principalize_many(xy_state)
        text = serialize_trace(trace)
        data = json.loads(text)
        assert data["format_version"] == 1
        assert data["certificate"] == "Principalized"
        assert data["steps"][0]["sigma_before"] == [1, 1]
        assert data["steps"][0]["sigma_after"] == "-inf"
        assert list(data) == sorted(data)
        assert text.endswith("}\n")

    def test_bad_sigma_literal(self, xy_state):
        _, trace = principalize_many(xy_state)
        text = serialize_trace(trace).replace('"-inf"', '"bottom"')
        with pytest.raises(InstanceFormatError):
            parse_trace(text)

    def test_write_into_missing_directory(self, tmp_path):
        with pytest.raises(InstanceFormatError):
            write_text(str(tmp_path / "nodir" / "t.json"), "{}\n")
