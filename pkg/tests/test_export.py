import pytest

from gridscope.errors import ConfigError, EmptyTrack
from gridscope.export import (
    EXPORT_FORMATS,
    export_csv,
    export_ply,
    export_svg,
    export_track,
)
from gridscope.fusion import TrackPoint, write_track
from gridscope.geometry import GridBox, WorldPoint3D

GRID = GridBox(WorldPoint3D(0, 0, 0), 390.0, 390.0, 850.0)

TRACK = [
    TrackPoint(0.0, WorldPoint3D(100.0, 150.0, 300.0), ("side0", "side1"), 0.0, True),
    TrackPoint(50.0, WorldPoint3D(101.5, 150.0, 302.0), ("side0", "side1"), 1.0, True),
    TrackPoint(100.0, WorldPoint3D(103.0, 151.0, 304.5), ("side1", "side2"), 0.5, False),
]


class TestEmptyTrack:
    @pytest.mark.parametrize("fmt", EXPORT_FORMATS)
    def test_refused(self, tmp_path, fmt):
        with pytest.raises(EmptyTrack):
            export_track(tmp_path / f"out.{fmt}", [], fmt, GRID)
        assert not (tmp_path / f"out.{fmt}").exists()


class TestCsv:
    def test_matches_track_writer(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        export_csv(a, TRACK)
        write_track(b, TRACK)
        assert a.read_bytes() == b.read_bytes()


class TestPly:
    def test_header_and_vertices(self, tmp_path):
        p = tmp_path / "out.ply"
        export_ply(p, TRACK)
        lines = p.read_text().splitlines()
        assert lines[0] == "ply"
        assert lines[1] == "format ascii 1.0"
        assert lines[2] == "element vertex 3"
        assert lines[3:6] == [
            "property double x",
            "property double y",
            "property double z",
        ]
        assert lines[6] == "end_header"
        assert len(lines) == 7 + len(TRACK)
        assert lines[7] == "100 150 300"

    def test_values_lossless(self, tmp_path):
        track = [
            TrackPoint(0.0, WorldPoint3D(1.0 / 3.0, 0.1, 2e-7), ("side0", "side1"), 0.0, False)
        ]
        p = tmp_path / "tiny.ply"
        export_ply(p, track)
        x, y, z = p.read_text().splitlines()[-1].split(" ")
        assert float(x) == 1.0 / 3.0
        assert float(y) == 0.1
        assert float(z) == 2e-7

    def test_deterministic(self, tmp_path):
        a = tmp_path / "a.ply"
        b = tmp_path / "b.ply"
        export_ply(a, TRACK)
        export_ply(b, TRACK)
        assert a.read_bytes() == b.read_bytes()


class TestSvg:
    def test_structure(self, tmp_path):
        p = tmp_path / "out.svg"
        export_svg(p, TRACK, GRID)
        text = p.read_text()
        assert text.startswith("<svg ")
        assert text.rstrip().endswith("</svg>")
        assert text.count("<polyline") == 3
        assert text.count("<rect") == 4  # background plus one outline per panel
        assert 'fill="#ffffff"' in text
        for label in ("top (", "front (", "side ("):
            assert label in text

    def test_deterministic(self, tmp_path):
        a = tmp_path / "a.svg"
        b = tmp_path / "b.svg"
        export_svg(a, TRACK, GRID)
        export_svg(b, TRACK, GRID)
        assert a.read_bytes() == b.read_bytes()

    def test_single_point_track(self, tmp_path):
        p = tmp_path / "one.svg"
        export_svg(p, TRACK[:1], GRID)
        assert "<circle" in p.read_text()


class TestDispatch:
    def test_formats_tuple(self):
        assert EXPORT_FORMATS == ("csv", "ply", "svg")

    @pytest.mark.parametrize("fmt", EXPORT_FORMATS)
    def test_each_format_writes(self, tmp_path, fmt):
        p = tmp_path / f"out.{fmt}"
        export_track(p, TRACK, fmt, GRID)
        assert p.stat().st_size > 0

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ConfigError) as err:
            export_track(tmp_path / "out.xyz", TRACK, "xyz", GRID)
        assert "xyz" in str(err.value)
