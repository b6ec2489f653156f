import json
from fractions import Fraction

import pytest

from partial_steinhaus.core.io import (
    FileFormatError,
    format_map,
    format_points,
    parse_map_document,
    parse_points,
    read_map_file,
    read_point_file,
    write_map_file,
    write_point_file,
)
from partial_steinhaus.models.geometry import IntVec3, RationalPoint
from partial_steinhaus.models.maps import PartialMap


class TestMapFiles:
    def test_write_and_read(self, tmp_path, fixture_L):
        path = tmp_path / "maps" / "fixture.json"
        write_map_file(path, fixture_L)
        assert read_map_file(path) == fixture_L
        text = path.read_text(encoding="utf-8")
        assert text.endswith("\n") and " " not in text

    def test_document_layout(self, fixture_L):
        document = json.loads(format_map(fixture_L))
        assert document["m"] == 3
        assert len(document["entries"]) == 27
        assert document["entries"][0] == [1, 2, 2]

    def test_partial_maps(self, tmp_path):
        L = PartialMap.empty(3).with_entry((1, 0, 2), (2, 2, 2))
        path = tmp_path / "partial.json"
        write_map_file(path, L)
        with pytest.raises(FileFormatError) as info:
            read_map_file(path)
        assert info.value.field == "entries[0]"
        loaded = read_map_file(path, allow_partial=True)
        assert loaded[(1, 0, 2)].as_tuple() == (2, 2, 2)
        assert len(loaded.assigned_cells()) == 1

    @pytest.mark.parametrize("document, field", [
        ([], "map"),
        ({"entries": []}, "m"),
        ({"m": "3", "entries": []}, "m"),
        ({"m": True, "entries": []}, "m"),
        ({"m": 0, "entries": []}, "m"),
        ({"m": 1}, "entries"),
        ({"m": 2, "entries": [[0, 0, 0]]}, "entries"),
        ({"m": 1, "entries": [[0, 0]]}, "entries[0]"),
        ({"m": 1, "entries": [[0, 0, 1]]}, "entries[0]"),
        ({"m": 1, "entries": [[0, 0, 0.5]]}, "entries[0]"),
    ])
    def test_malformed_documents(self, document, field):
        with pytest.raises(FileFormatError) as info:
            parse_map_document(document)
        assert info.value.field == field

    def test_unreadable_files(self, tmp_path):
        with pytest.raises(FileFormatError):
            read_map_file(tmp_path / "missing.json")
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        with pytest.raises(FileFormatError) as info:
            read_map_file(bad)
        assert "invalid JSON" in info.value.message


class TestPointFiles:
    def test_parse_with_comments(self):
        lines = [
            "# the origin and one more",
            "0 0 0",
            "",
            "1/3 -2/3 5  # trailing comment",
        ]
        points = parse_points(lines)
        assert points[0] == RationalPoint.integral((0, 0, 0))
        assert points[1].coords == (Fraction(1, 3), Fraction(-2, 3), Fraction(5))

    @pytest.mark.parametrize("line", ["1/3 1/3", "1/3 a 0", "1/0 0 0", "1/-3 0 0"])
    def test_bad_lines(self, line):
        with pytest.raises(FileFormatError) as info:
            parse_points(["0 0 0", line], source="pts")
        assert info.value.field == "pts:2"

    def test_common_denominator(self):
        points = [RationalPoint(IntVec3(1, 0, 0), 2), RationalPoint(IntVec3(0, 1, 3), 3)]
        assert format_points(points) == "3/6 0/6 0/6\n0/6 2/6 6/6\n"
        assert format_points([]) == ""

    def test_fixture_file(self, tmp_path, fixture_pts):
        path = tmp_path / "fixture.pts"
        write_point_file(path, fixture_pts)
        assert path.read_text(encoding="utf-8").splitlines()[0] == "3/3 6/3 6/3"
        assert read_point_file(path) == fixture_pts

    def test_missing_point_file(self, tmp_path):
        with pytest.raises(FileFormatError):
            read_point_file(tmp_path / "nope.pts")
