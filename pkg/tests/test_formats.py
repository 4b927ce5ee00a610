import math
import os

import pytest

from freedrift.evolution import Particle
from freedrift.formats import (
    ParseError,
    fmt_float,
    frames_csv,
    parse_config_text,
    parse_particles,
    parse_report,
    parse_table_csv,
    particles_document,
    report_document,
    svg_snapshot,
    write_text_atomic,
)
from freedrift.geometry import Vec2


def test_fmt_float_round_trips_doubles():
    values = [0.0, 1.0, -1.0, math.pi, 0.1, 1e-300, 1e300, 2.0 ** -52,
              123456789.123456789, -0.0]
    for v in values:
        assert float(fmt_float(v)) == v


def test_particles_round_trip():
    particles = (
        Particle(Vec2(0.0, 0.0), Vec2(1.25, -0.5)),
        Particle(Vec2(-3.0, 4.0), Vec2(math.atan(2), math.pi)),
    )
    text = particles_document(particles)
    assert text.startswith("particles v1\n")
    back = parse_particles(text)
    assert tuple(back) == particles


def test_particles_blank_lines_skipped():
    text = "particles v1\n\n0,0,1,0\n\n"
    assert len(parse_particles(text)) == 1


def test_particles_bad_header():
    with pytest.raises(ParseError) as info:
        parse_particles("particle v2\n0,0,1,0\n")
    assert info.value.line_no == 1


def test_particles_bad_field_count():
    with pytest.raises(ParseError) as info:
        parse_particles("particles v1\n0,0,1\n")
    assert info.value.line_no == 2
    assert "4 fields" in str(info.value)


def test_particles_bad_number_reports_line():
    with pytest.raises(ParseError) as info:
        parse_particles("particles v1\n0,0,1,0\n0,1,x,0\n")
    assert info.value.line_no == 3


def test_report_round_trip_and_value_formats():
    text = report_document({
        "count": 3,
        "ok": True,
        "bad": False,
        "ratio": 0.1,
        "pair": (0, 2),
        "missing": None,
        "label": "all-times",
    })
    assert text.startswith("report v1\n")
    back = parse_report(text)
    assert back == {
        "count": "3",
        "ok": "true",
        "bad": "false",
        "ratio": fmt_float(0.1),
        "pair": "0,2",
        "missing": "none",
        "label": "all-times",
    }


def test_report_bad_header():
    with pytest.raises(ParseError):
        parse_report("reported v1\nok = true\n")


def test_config_text_comments_and_spacing():
    parsed = parse_config_text("# run\ncommand = verify\n\n  seed=7\n")
    assert parsed == {"command": "verify", "seed": "7"}


def test_config_text_duplicate_key():
    with pytest.raises(ParseError) as info:
        parse_config_text("a = 1\na = 2\n")
    assert info.value.line_no == 2


def test_config_text_missing_equals():
    with pytest.raises(ParseError) as info:
        parse_config_text("command verify\n")
    assert info.value.line_no == 1


def test_table_csv_round_trip():
    rows = parse_table_csv("# profile\n-1,-0.5\n0,0\n1,0.5\n")
    assert rows == [(-1, -0.5), (0, 0.0), (1, 0.5)]


def test_table_csv_bad_index():
    with pytest.raises(ParseError) as info:
        parse_table_csv("0.5,1\n")
    assert info.value.line_no == 1


def test_atomic_write_creates_and_replaces(tmp_path):
    path = str(tmp_path / "report.txt")
    write_text_atomic(path, "first\n")
    write_text_atomic(path, "second\n")
    with open(path) as handle:
        assert handle.read() == "second\n"
    # no temp droppings left behind
    assert sorted(os.listdir(tmp_path)) == ["report.txt"]


def test_frames_csv_layout():
    series = [(0.0, [Vec2(0.0, 0.0), Vec2(1.0, 2.0)]),
              (0.5, [Vec2(0.25, 0.0), Vec2(1.0, 2.5)])]
    lines = frames_csv(series).splitlines()
    assert lines[0] == "frame,time,particle,x1,x2"
    assert lines[1] == "0,0,0,0,0"
    assert lines[4] == "1,0.5,1,1,2.5"
    assert len(lines) == 5


def test_svg_snapshot_geometry():
    text = svg_snapshot([Vec2(0.0, 0.0), Vec2(1.0, 3.0)], 0.5, -2.0, 4.0)
    assert text.count("<circle") == 2
    assert 'viewBox="0 0 6 6"' in text
    # y flips: world x2=3 inside [-2, 4] lands at cy = 4 - 3 = 1
    assert 'cy="1"' in text
    assert 'r="0.5"' in text


def test_svg_snapshot_rejects_bad_viewport():
    with pytest.raises(ValueError):
        svg_snapshot([], 0.5, 2.0, 2.0)
