"""Text formats shared by the CLI and exporters.

All floats are written with 17 significant digits, enough for doubles to
round-trip exactly; all emitters are deterministic (no timestamps, no
environment-dependent content), so identical inputs give identical bytes.
"""
from __future__ import annotations

import math
import os
import tempfile

from .geometry import Vec2
from .evolution import Particle

PARTICLES_HEADER = "particles v1"
REPORT_HEADER = "report v1"


class ParseError(ValueError):
    """Input text violating a format; carries a 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def fmt_float(x: float) -> str:
    return f"{x:.17g}"


def _fmt_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, int):
        return str(value)
    if value is None:
        return "none"
    if isinstance(value, (tuple, list)):
        return ",".join(_fmt_value(v) for v in value)
    return str(value)


def _parse_float(line_no: int, field: str) -> float:
    try:
        return float(field)
    except ValueError:
        raise ParseError(line_no, f"expected a number, got {field!r}") from None


def particles_document(particles) -> str:
    lines = [PARTICLES_HEADER]
    for p in particles:
        lines.append(",".join(fmt_float(v) for v in
                              (p.position.x1, p.position.x2,
                               p.velocity.x1, p.velocity.x2)))
    return "\n".join(lines) + "\n"


def parse_particles(text: str) -> list[Particle]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != PARTICLES_HEADER:
        raise ParseError(1, f"expected header {PARTICLES_HEADER!r}")
    particles = []
    for ln, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise ParseError(ln, f"expected 4 fields x1,x2,v1,v2, got {len(fields)}")
        x1, x2, v1, v2 = (_parse_float(ln, f.strip()) for f in fields)
        try:
            particles.append(Particle(Vec2(x1, x2), Vec2(v1, v2)))
        except ValueError as exc:
            raise ParseError(ln, str(exc)) from None
    return particles


def report_document(items) -> str:
    """Flat `key = value` document; arrays join with commas."""
    lines = [REPORT_HEADER]
    for key, value in dict(items).items():
        lines.append(f"{key} = {_fmt_value(value)}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> dict[str, str]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != REPORT_HEADER:
        raise ParseError(1, f"expected header {REPORT_HEADER!r}")
    out: dict[str, str] = {}
    for ln, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(ln, "expected `key = value`")
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out


def parse_config_text(text: str) -> dict[str, str]:
    """Flat key-value config: `key = value`, blank lines and # comments."""
    out: dict[str, str] = {}
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(ln, "expected `key = value`")
        key, _, value = line.partition("=")
        key = key.strip()
        if not key:
            raise ParseError(ln, "empty key")
        if key in out:
            raise ParseError(ln, f"duplicate key {key!r}")
        out[key] = value.strip()
    return out


def parse_table_csv(text: str) -> list[tuple[int, float]]:
    """Profile table rows `n,value`, one per line, # comments allowed."""
    rows = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split(",")
        if len(fields) != 2:
            raise ParseError(ln, f"expected 2 fields n,value, got {len(fields)}")
        try:
            n = int(fields[0].strip())
        except ValueError:
            raise ParseError(ln, f"expected an integer, got {fields[0]!r}") from None
        rows.append((n, _parse_float(ln, fields[1].strip())))
    return rows


def write_text_atomic(path: str, text: str) -> None:
    """Write-then-rename so readers never observe a partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def frames_csv(series) -> str:
    """Snapshot series as CSV rows frame,time,particle,x1,x2."""
    lines = ["frame,time,particle,x1,x2"]
    for frame, (t, points) in enumerate(series):
        for idx, p in enumerate(points):
            lines.append(f"{frame},{fmt_float(t)},{idx},"
                         f"{fmt_float(p.x1)},{fmt_float(p.x2)}")
    return "\n".join(lines) + "\n"


def svg_snapshot(points, radius: float, lo: float, hi: float) -> str:
    """One frame as SVG: disks in the fixed world square [lo, hi]^2.

    The world y axis points up, SVG's points down, so y is flipped.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValueError(f"bad viewport [{lo}, {hi}]")
    side = hi - lo
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" width="512" height="512" '
        f'viewBox="0 0 {fmt_float(side)} {fmt_float(side)}">',
        f'<rect width="{fmt_float(side)}" height="{fmt_float(side)}" fill="white"/>',
    ]
    for p in points:
        cx = p.x1 - lo
        cy = hi - p.x2
        lines.append(f'<circle cx="{fmt_float(cx)}" cy="{fmt_float(cy)}" '
                     f'r="{fmt_float(radius)}" fill="#336699" '
                     'stroke="black" stroke-width="0.02"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
