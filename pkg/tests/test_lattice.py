import math
import random

import pytest

from freedrift.evolution import verify_hardcore
from freedrift.geometry import Vec2, closest_approach, separation_margin
from freedrift.lattice import (
    DISK_RADIUS,
    EmptyWindowError,
    FlowAssignment,
    MonotoneProfile,
    NonMonotoneProfileError,
    OutOfDomainError,
    ProfileKind,
    Window,
    arctan_profile,
    assign_w,
    build_flow,
    named_profile,
    profile_eval,
    rational_profile,
    recovered_field,
    table_profile,
    tanh_profile,
    verify_flow,
)


def all_profiles():
    table = table_profile((n, n + 0.25 * math.sin(n)) for n in range(-6, 7))
    return [arctan_profile(), tanh_profile(), rational_profile(), table]


def test_profile_eval_arctan_values():
    phi = arctan_profile()
    assert profile_eval(phi, 0) == 0.0
    assert profile_eval(phi, 1) == math.atan(1)
    assert profile_eval(phi, 1) == pytest.approx(math.pi / 4, abs=1e-15)


def test_profile_eval_tanh_value():
    assert profile_eval(tanh_profile(), -2) == math.tanh(-2.0)


def test_profile_eval_rational_values():
    phi = rational_profile()
    assert profile_eval(phi, 0) == 0.0
    assert profile_eval(phi, 3) == 0.75
    assert profile_eval(phi, -3) == -0.75


def test_profiles_monotone_and_bounded_on_scan():
    for phi in all_profiles():
        lo, hi = (-6, 6)
        values = [profile_eval(phi, n) for n in range(lo, hi + 1)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(abs(v) <= phi.bound + 1e-12 for v in values)


def test_table_profile_eval_and_domain():
    phi = table_profile([(-1, -0.5), (0, 0.0), (2, 0.75)])
    assert profile_eval(phi, 2) == 0.75
    with pytest.raises(OutOfDomainError):
        profile_eval(phi, 1)


def test_table_profile_must_increase():
    with pytest.raises(NonMonotoneProfileError):
        table_profile([(0, 0.0), (1, 0.0)])
    with pytest.raises(ValueError):
        table_profile([(1, 0.0), (0, 1.0)])  # unsorted integers


def test_named_profile_lookup():
    assert named_profile("arctan").kind is ProfileKind.ARCTAN
    assert named_profile("tanh").kind is ProfileKind.TANH
    assert named_profile("rational").kind is ProfileKind.RATIONAL_SATURATING
    with pytest.raises(ValueError):
        named_profile("linear")


def test_assign_w_componentwise():
    phi = arctan_profile()
    assert assign_w(phi, (0, 0)) == Vec2(0.0, 0.0)
    assert assign_w(phi, (1, 0)) == Vec2(math.atan(1), 0.0)
    assert assign_w(phi, (-1, 2)) == Vec2(math.atan(-1), math.atan(2))


def test_assign_w_norm_within_bound():
    for phi in all_profiles():
        for point in [(-3, 5), (0, 0), (6, -6)]:
            w = assign_w(phi, point)
            assert math.hypot(w.x1, w.x2) <= math.sqrt(2) * phi.bound + 1e-12


def test_window_shapes():
    win = Window.square(2)
    assert win == Window(-2, 2, -2, 2)
    assert win.count() == 25
    assert len(list(win.points())) == 25
    with pytest.raises(EmptyWindowError):
        Window(1, 0, 0, 0)


def test_build_flow_two_point_window():
    flow = build_flow(arctan_profile(), Window(0, 1, 0, 0), shift_margin=1.0)
    assert len(flow.particles) == 2
    a, b = flow.particles
    dv = Vec2(b.velocity.x1 - a.velocity.x1, b.velocity.x2 - a.velocity.x2)
    assert dv == Vec2(0.0, -math.atan(1))  # -I(pi/4, 0)
    approach = closest_approach(a.position, a.velocity, b.position, b.velocity)
    assert approach.distance == 1.0
    assert flow.speed_min == 1.0
    assert flow.shift == Vec2(math.atan(1) + 1.0, 0.0)


def test_build_flow_single_point():
    flow = build_flow(tanh_profile(), Window(3, 3, -2, -2), shift_margin=0.25)
    assert len(flow.particles) == 1
    assert flow.speed_min == 0.25
    report = verify_flow(flow)
    assert report.min_distance == math.inf
    assert report.passed


def test_build_flow_3x3_all_pairs_separated():
    flow = build_flow(arctan_profile(), Window.square(1), shift_margin=0.5)
    parts = flow.particles
    assert len(parts) == 9
    W = recovered_field(flow)
    count = 0
    for i in range(9):
        for j in range(i + 1, 9):
            margin = separation_margin(
                parts[i].position, parts[j].position,
                Vec2(*W[i]), Vec2(*W[j]))
            approach = closest_approach(parts[i].position, parts[i].velocity,
                                        parts[j].position, parts[j].velocity)
            assert margin >= 1.0 - 1e-12
            assert approach.distance == pytest.approx(margin, rel=1e-12)
            count += 1
    assert count == 36


def test_build_flow_rejects_bad_margin():
    with pytest.raises(ValueError):
        build_flow(arctan_profile(), Window.square(1), shift_margin=-0.1)
    with pytest.raises(ValueError):
        build_flow(arctan_profile(), Window.square(1), shift_margin=math.nan)


def test_build_flow_zero_margin_allowed():
    flow = build_flow(arctan_profile(), Window.square(1), shift_margin=0.0)
    assert flow.speed_min == 0.0
    assert verify_flow(flow).passed


def test_build_flow_window_outside_table_domain():
    phi = table_profile([(0, 0.0), (1, 1.0)])
    with pytest.raises(OutOfDomainError):
        build_flow(phi, Window(0, 2, 0, 0), shift_margin=1.0)


def test_build_flow_rejects_lying_bound():
    # Constructible profile whose declared bound undercuts its values.
    phi = MonotoneProfile(ProfileKind.TABLE_DRIVEN,
                          table=((-1, -2.0), (0, 0.0), (1, 2.0)), bound=1.0)
    with pytest.raises(NonMonotoneProfileError):
        build_flow(phi, Window(-1, 1, 0, 0), shift_margin=1.0)


def test_disk_radius_below_half_minimum():
    flow = build_flow(arctan_profile(), Window.square(2), shift_margin=0.5)
    report = verify_flow(flow)
    assert flow.disk_radius == DISK_RADIUS == (1.0 - 1e-9) / 2.0
    assert flow.disk_radius < report.min_distance / 2.0


def test_verify_flow_3x3_example():
    flow = build_flow(arctan_profile(), Window.square(1), shift_margin=0.5)
    report = verify_flow(flow)
    assert report.passed
    assert report.min_distance == pytest.approx(1.0, abs=1e-12)
    assert report.chain_dot_margin >= 0.0
    assert report.chain_norm_margin >= 0.0
    assert report.chain_failure_count == 0
    assert report.injective
    # Witness pair must be axis-adjacent lattice neighbors.
    i, j = report.witness_pair
    pi, pj = flow.particles[i].position, flow.particles[j].position
    step = (abs(pi.x1 - pj.x1), abs(pi.x2 - pj.x2))
    assert sorted(step) == [0.0, 1.0]


def test_verify_flow_flags_duplicate_velocities():
    flow = build_flow(arctan_profile(), Window(0, 1, 0, 0), shift_margin=1.0)
    a, b = flow.particles
    corrupted = FlowAssignment(
        particles=(a, type(b)(b.position, a.velocity)),
        shift=flow.shift,
        speed_min=flow.speed_min,
        speed_max=flow.speed_max,
        disk_radius=flow.disk_radius,
    )
    report = verify_flow(corrupted)
    assert not report.injective
    assert report.duplicate_velocity_pairs == ((0, 1),)
    assert not report.passed


def test_verify_flow_speed_window():
    for phi in all_profiles():
        flow = build_flow(phi, Window.square(2), shift_margin=0.75)
        report = verify_flow(flow)
        assert report.speeds_ok
        norm_a = math.hypot(flow.shift.x1, flow.shift.x2)
        for p in flow.particles:
            speed = math.hypot(p.velocity.x1, p.velocity.x2)
            assert speed >= flow.speed_min - 1e-12
            assert speed <= norm_a + math.sqrt(2) * phi.bound + 1e-12


def test_shift_invariance_of_minimum_distance():
    mins = []
    for margin in (0.0, 0.5, 10.0):
        flow = build_flow(arctan_profile(), Window.square(2), shift_margin=margin)
        mins.append(verify_flow(flow).min_distance)
    assert mins[1] == pytest.approx(mins[0], rel=1e-12)
    assert mins[2] == pytest.approx(mins[0], rel=1e-12)


def test_chain_margins_across_profiles_and_windows():
    rng = random.Random(7)
    for phi in all_profiles():
        for _ in range(3):
            x_lo = rng.randint(-5, 2)
            y_lo = rng.randint(-5, 2)
            win = Window(x_lo, x_lo + rng.randint(1, 4),
                         y_lo, y_lo + rng.randint(1, 4))
            flow = build_flow(phi, win, shift_margin=rng.choice([0.0, 0.5, 2.0]))
            report = verify_flow(flow)
            assert report.chain_dot_margin >= -1e-12
            assert report.chain_norm_margin >= -1e-12
            assert report.min_distance >= 1.0 - 1e-9
            assert report.passed


def test_flow_feeds_hardcore_verifier():
    flow = build_flow(rational_profile(), Window.square(2), shift_margin=0.5)
    report = verify_hardcore(flow.as_configuration(), threshold=1.0)
    assert report.passed
