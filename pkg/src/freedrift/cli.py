"""Command-line driver: builds flows, verifies them, renders evolutions,
exports cylinder scenes, and runs the field falsifier.

Every run is deterministic for a fixed config and seed; emitted files carry
no timestamps or environment-dependent content. Exit codes: 0 pass (or
violation found), 1 verification failure (or search exhausted), 2 bad input.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass, fields

from . import cylinders as cyl
from . import falsifier as fal
from .evolution import MovingConfiguration, snapshot_series, verify_hardcore
from .formats import (
    ParseError,
    fmt_float,
    frames_csv,
    parse_config_text,
    parse_particles,
    parse_table_csv,
    particles_document,
    report_document,
    svg_snapshot,
    write_text_atomic,
)
from .geometry import IdenticalParticleError
from .lattice import (
    DISK_RADIUS,
    Window,
    build_flow,
    named_profile,
    table_profile,
    verify_flow,
)

COMMANDS = ("assign", "verify", "evolve", "cylinders", "falsify")
DEFAULT_SEED = 0x5EED

PASS_EXIT = 0
FAIL_EXIT = 1
INPUT_EXIT = 2


@dataclass
class RunConfig:
    command: str = ""
    window: str = "2"
    profile: str = "arctan"
    shift_margin: float = 0.5
    threshold: float = 1.0
    t0: float = 0.0
    t1: float = 10.0
    frames: int = 5
    field: str = "constant"
    c: float = 0.1
    budget: int = 10 ** 6
    seed: int = DEFAULT_SEED
    out: str = "out"
    particles: str = ""
    radius: str = "auto"


def _to_int(text: str) -> int:
    return int(text, 0)


def _to_finite(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError(f"must be finite, got {text!r}")
    return value


_CONVERTERS = {
    "command": str, "window": str, "profile": str, "field": str,
    "out": str, "particles": str, "radius": str,
    "shift_margin": _to_finite, "threshold": _to_finite,
    "t0": _to_finite, "t1": _to_finite, "c": _to_finite,
    "frames": _to_int, "budget": _to_int, "seed": _to_int,
}


def _apply(config: RunConfig, key: str, raw: str) -> None:
    if key not in _CONVERTERS:
        known = ", ".join(sorted(_CONVERTERS))
        raise ValueError(f"unknown key {key!r}; known keys: {known}")
    try:
        setattr(config, key, _CONVERTERS[key](raw))
    except ValueError as exc:
        raise ValueError(f"bad value for {key!r}: {exc}") from None


def load_run_config(argv) -> RunConfig:
    parser = argparse.ArgumentParser(
        prog="freedrift",
        description="collision-free constant-velocity assignments: "
                    "build, verify, render, falsify")
    parser.add_argument("--config", help="flat key = value configuration file")
    for f in fields(RunConfig):
        flag = "--" + f.name.replace("_", "-")
        parser.add_argument(flag, dest=f.name, default=None, metavar="V")
    args = parser.parse_args(argv)

    config = RunConfig()
    if args.config is not None:
        with open(args.config) as handle:
            for key, value in parse_config_text(handle.read()).items():
                _apply(config, key, value)
    for f in fields(RunConfig):
        raw = getattr(args, f.name)
        if raw is not None:
            _apply(config, f.name, raw)

    if config.command not in COMMANDS:
        raise ValueError(f"command must be one of {', '.join(COMMANDS)}; "
                         f"got {config.command!r}")
    if config.frames < 1:
        raise ValueError("frames must be >= 1")
    if config.budget < 1:
        raise ValueError("budget must be >= 1")
    return config


def _parse_window(text: str) -> Window:
    text = text.strip()
    if "," in text:
        xs, ys = text.split(",", 1)
        x_lo, _, x_hi = xs.partition(":")
        y_lo, _, y_hi = ys.partition(":")
        return Window(int(x_lo), int(x_hi), int(y_lo), int(y_hi))
    n = int(text)
    if n < 0:
        raise ValueError(f"square window size must be >= 0, got {n}")
    return Window.square(n)


def _parse_profile(text: str):
    if text.startswith("table:"):
        path = text[len("table:"):]
        with open(path) as handle:
            return table_profile(parse_table_csv(handle.read()))
    return named_profile(text)


def _parse_field(text: str):
    if text.startswith("grid:"):
        path = text[len("grid:"):]
        with open(path) as handle:
            return _grid_from_samples(parse_particles(handle.read()))
    return fal.builtin_field(text)


def _grid_from_samples(rows) -> fal.CandidateField:
    """Grid field from particle rows read as (position, vector value)."""
    if not rows:
        raise ValueError("grid file has no rows")
    xs = sorted({p.position.x1 for p in rows})
    ys = sorted({p.position.x2 for p in rows})
    if len(xs) * len(ys) != len(rows):
        raise ValueError("grid samples must cover a full rectangular grid")
    steps = [b - a for a, b in zip(xs, xs[1:])] + \
            [b - a for a, b in zip(ys, ys[1:])]
    spacing = steps[0] if steps else 1.0
    if any(abs(s - spacing) > 1e-9 * max(abs(spacing), 1.0) for s in steps):
        raise ValueError("grid spacing must be uniform on both axes")
    by_pos = {(p.position.x1, p.position.x2): (p.velocity.x1, p.velocity.x2)
              for p in rows}
    if len(by_pos) != len(rows):
        raise ValueError("grid samples repeat a position")
    try:
        values = [[by_pos[(x, y)] for x in xs] for y in ys]
    except KeyError as exc:
        raise ValueError(f"grid is missing a node at {exc.args[0]}") from None
    return fal.grid_field((xs[0], ys[0]), spacing, values)


def _load_configuration(config: RunConfig):
    """(configuration, flow-or-None) from a particles file or a built flow."""
    if config.particles:
        with open(config.particles) as handle:
            particles = parse_particles(handle.read())
        return MovingConfiguration(tuple(particles)), None
    flow = build_flow(_parse_profile(config.profile),
                      _parse_window(config.window), config.shift_margin)
    return flow.as_configuration(), flow


def _emit(config: RunConfig, name: str, text: str) -> str:
    os.makedirs(config.out, exist_ok=True)
    path = os.path.join(config.out, name)
    write_text_atomic(path, text)
    return path


def _pair_value(pair):
    return pair if pair is not None else "none"


def _vec_value(v):
    return (v.x1, v.x2)


def _cmd_assign(config: RunConfig) -> int:
    flow = build_flow(_parse_profile(config.profile),
                      _parse_window(config.window), config.shift_margin)
    _emit(config, "particles.txt", particles_document(flow.particles))
    _emit(config, "assign_report.txt", report_document({
        "command": "assign",
        "window": config.window,
        "profile": config.profile,
        "shift_margin": config.shift_margin,
        "particle_count": len(flow.particles),
        "shift": _vec_value(flow.shift),
        "speed_min": flow.speed_min,
        "speed_max": flow.speed_max,
        "disk_radius": flow.disk_radius,
    }))
    print(f"assigned {len(flow.particles)} particles "
          f"-> {os.path.join(config.out, 'particles.txt')}")
    return PASS_EXIT


def _cmd_verify(config: RunConfig) -> int:
    configuration, flow = _load_configuration(config)
    hardcore = verify_hardcore(configuration, config.threshold,
                               seed=config.seed)
    if hardcore.witness_pair is None:
        witness_time = "none"
    elif hardcore.witness_time is None:
        witness_time = "all-times"
    else:
        witness_time = hardcore.witness_time
    _emit(config, "report.txt", report_document({
        "command": "verify",
        "particle_count": len(configuration),
        "threshold": hardcore.passed_threshold,
        "min_alltime_distance": hardcore.min_alltime_distance,
        "witness_pair": _pair_value(hardcore.witness_pair),
        "witness_time": witness_time,
        "margin": hardcore.margin,
        "pairs_total": hardcore.pairs_total,
        "pairs_checked": hardcore.pairs_checked,
        "mode": hardcore.mode,
        "seed": hardcore.seed if hardcore.seed is not None else "none",
        "passed": hardcore.passed,
    }))
    passed = hardcore.passed
    if flow is not None:
        flow_report = verify_flow(flow, seed=config.seed)
        _emit(config, "flow_report.txt", report_document({
            "command": "verify",
            "particle_count": flow_report.particle_count,
            "min_distance": flow_report.min_distance,
            "witness_pair": _pair_value(flow_report.witness_pair),
            "chain_dot_margin": flow_report.chain_dot_margin,
            "chain_norm_margin": flow_report.chain_norm_margin,
            "chain_failure_count": flow_report.chain_failure_count,
            "injective": flow_report.injective,
            "speed_measured_min": flow_report.speed_measured_min,
            "speed_measured_max": flow_report.speed_measured_max,
            "speed_declared_min": flow_report.speed_declared_min,
            "speed_declared_max": flow_report.speed_declared_max,
            "speeds_ok": flow_report.speeds_ok,
            "pairs_total": flow_report.pairs_total,
            "pairs_checked": flow_report.pairs_checked,
            "mode": flow_report.mode,
            "seed": flow_report.seed if flow_report.seed is not None else "none",
            "passed": flow_report.passed,
        }))
        passed = passed and flow_report.passed
    verdict = "pass" if passed else "fail"
    print(f"verify: min all-time distance {fmt_float(hardcore.min_alltime_distance)} "
          f"vs threshold {fmt_float(hardcore.passed_threshold)}: {verdict}")
    return PASS_EXIT if passed else FAIL_EXIT


def _cmd_evolve(config: RunConfig) -> int:
    configuration, flow = _load_configuration(config)
    series = snapshot_series(configuration, config.t0, config.t1,
                             config.frames)
    _emit(config, "frames.csv", frames_csv(series))
    if config.radius == "auto":
        draw_radius = flow.disk_radius if flow is not None else DISK_RADIUS
    else:
        draw_radius = _to_finite(config.radius)
    xs = [p.position.x1 for p in configuration.particles] or [0.0]
    ys = [p.position.x2 for p in configuration.particles] or [0.0]
    speeds = [math.hypot(p.velocity.x1, p.velocity.x2)
              for p in configuration.particles]
    horizon = max(abs(config.t0), abs(config.t1))
    pad = max(speeds, default=0.0) * horizon + draw_radius + 1.0
    lo = min(min(xs), min(ys)) - pad
    hi = max(max(xs), max(ys)) + pad
    for index, (_, points) in enumerate(series):
        _emit(config, f"frame{index:04d}.svg",
              svg_snapshot(points, draw_radius, lo, hi))
    print(f"evolve: {config.frames} frames on [{fmt_float(config.t0)}, "
          f"{fmt_float(config.t1)}] -> {config.out}")
    return PASS_EXIT


def _cmd_cylinders(config: RunConfig) -> int:
    configuration, _ = _load_configuration(config)
    speeds = [math.hypot(p.velocity.x1, p.velocity.x2)
              for p in configuration.particles]
    cap = max(speeds, default=0.0)
    if config.radius == "auto":
        radius = cyl.lemma1_bound(cap) / 2.0
    else:
        radius = _to_finite(config.radius)
    try:
        report = cyl.verify_scene(configuration, radius, seed=config.seed)
    except cyl.HardCoreNotVerifiedError as exc:
        print(f"cylinders: {exc}", file=sys.stderr)
        return FAIL_EXIT
    scene = cyl.build_scene(configuration, radius)
    _emit(config, "scene.txt", cyl.export_scene(scene))
    _emit(config, "cylinder_report.txt", report_document({
        "command": "cylinders",
        "particle_count": report.particle_count,
        "radius": report.radius,
        "speed_min": report.speed_min,
        "speed_max": report.speed_max,
        "separation_floor": report.separation_floor,
        "required_distance": report.required_distance,
        "min_line_distance": report.min_line_distance,
        "witness_pair": _pair_value(report.witness_pair),
        "distance_margin": report.distance_margin,
        "distances_ok": report.distances_ok,
        "nonparallel_ok": report.nonparallel_ok,
        "duplicate_direction_pairs": len(report.duplicate_direction_pairs),
        "annulus_ok": report.annulus_ok,
        "annulus_forms_agree": report.annulus_forms_agree,
        "pairs_total": report.pairs_total,
        "pairs_checked": report.pairs_checked,
        "mode": report.mode,
        "seed": report.seed if report.seed is not None else "none",
        "passed": report.passed,
    }))
    verdict = "pass" if report.passed else "fail"
    print(f"cylinders: min worldline distance "
          f"{fmt_float(report.min_line_distance)} vs required "
          f"{fmt_float(report.required_distance)}: {verdict}")
    return PASS_EXIT if report.passed else FAIL_EXIT


def _cmd_falsify(config: RunConfig) -> int:
    field = _parse_field(config.field)
    result = fal.falsify(field, config.c, config.budget, config.seed)
    found = isinstance(result, fal.ViolationReport)
    if found:
        items = {
            "command": "falsify",
            "field": config.field,
            "c": result.c,
            "budget": config.budget,
            "seed": config.seed,
            "outcome": "violation",
            "x": _vec_value(result.x),
            "y": _vec_value(result.y),
            "separation": result.separation,
            "margin": result.margin,
            "inner_product": result.inner_product,
            "increment_norm": result.increment_norm,
            "evaluations_used": result.evaluations_used,
            "stage": result.stage,
            "both_signs_observed": result.both_signs_observed,
        }
    else:
        items = {
            "command": "falsify",
            "field": config.field,
            "c": config.c,
            "budget": config.budget,
            "seed": config.seed,
            "outcome": "exhausted",
            "best_margin": result.best_margin,
            "evaluations_used": result.evaluations_used,
            "note": result.note,
        }
    _emit(config, "falsify_report.txt", report_document(items))
    if found:
        print(f"falsify: violation at separation "
              f"{fmt_float(result.separation)} with margin "
              f"{fmt_float(result.margin)} ({result.stage}, "
              f"{result.evaluations_used} evaluations)")
        return PASS_EXIT
    print(f"falsify: exhausted after {result.evaluations_used} evaluations; "
          f"best margin {fmt_float(result.best_margin)}")
    return FAIL_EXIT


_DISPATCH = {
    "assign": _cmd_assign,
    "verify": _cmd_verify,
    "evolve": _cmd_evolve,
    "cylinders": _cmd_cylinders,
    "falsify": _cmd_falsify,
}


def main(argv=None) -> int:
    try:
        config = load_run_config(argv)
    except (ParseError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_EXIT
    try:
        return _DISPATCH[config.command](config)
    except (ParseError, IdenticalParticleError, cyl.RadiusTooLargeError,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_EXIT


if __name__ == "__main__":
    sys.exit(main())
