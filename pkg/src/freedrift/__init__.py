"""Collision-free kinematics for planar point sets.

Constructs constant-velocity assignments on integer windows whose particles
never come closer than unit distance, verifies user-supplied configurations,
packs the corresponding space-time cylinders, and searches for violations of
would-be universal separation fields.
"""
from __future__ import annotations

from .cylinders import (
    CylinderScene,
    HardCoreNotVerifiedError,
    RadiusTooLargeError,
    SceneReport,
    WorldLine,
    build_scene,
    export_scene,
    lemma1_bound,
    parse_scene,
    verify_scene,
    worldline_of,
)
from .evolution import (
    BadRangeError,
    HardCoreReport,
    MovingConfiguration,
    Particle,
    initial_min_distance,
    slice_at,
    snapshot_series,
    verify_hardcore,
)
from .falsifier import (
    CandidateField,
    ChainCheckReport,
    Cone,
    ConeMembership,
    Exhausted,
    FieldKind,
    ProbeReport,
    ViolationReport,
    angular_separation_probe,
    aperture_for,
    builtin_field,
    chain_check,
    clamped_linear_field,
    cone_contains,
    constant_field,
    direction_capacity,
    falsify,
    grid_field,
    rotational_field,
    saturated_radial_field,
    violation_margin,
)
from .formats import ParseError
from .geometry import (
    DegenerateVelocityError,
    GeometryError,
    IdenticalParticleError,
    PairApproach,
    Vec2,
    Vec3,
    ZeroDirectionError,
    closest_approach,
    line_distance_3d,
    rotate_quarter,
    separation_margin,
)
from .lattice import (
    EmptyWindowError,
    FlowAssignment,
    FlowReport,
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

__all__ = [
    "BadRangeError",
    "CandidateField",
    "ChainCheckReport",
    "Cone",
    "ConeMembership",
    "CylinderScene",
    "DegenerateVelocityError",
    "EmptyWindowError",
    "Exhausted",
    "FieldKind",
    "FlowAssignment",
    "FlowReport",
    "GeometryError",
    "HardCoreNotVerifiedError",
    "HardCoreReport",
    "IdenticalParticleError",
    "MonotoneProfile",
    "MovingConfiguration",
    "NonMonotoneProfileError",
    "OutOfDomainError",
    "PairApproach",
    "ParseError",
    "Particle",
    "ProbeReport",
    "ProfileKind",
    "RadiusTooLargeError",
    "SceneReport",
    "Vec2",
    "Vec3",
    "ViolationReport",
    "Window",
    "WorldLine",
    "ZeroDirectionError",
    "angular_separation_probe",
    "aperture_for",
    "arctan_profile",
    "assign_w",
    "build_flow",
    "build_scene",
    "builtin_field",
    "chain_check",
    "clamped_linear_field",
    "closest_approach",
    "cone_contains",
    "constant_field",
    "direction_capacity",
    "export_scene",
    "falsify",
    "grid_field",
    "initial_min_distance",
    "lemma1_bound",
    "line_distance_3d",
    "named_profile",
    "parse_scene",
    "profile_eval",
    "rational_profile",
    "recovered_field",
    "rotate_quarter",
    "rotational_field",
    "saturated_radial_field",
    "separation_margin",
    "slice_at",
    "snapshot_series",
    "table_profile",
    "tanh_profile",
    "verify_flow",
    "verify_hardcore",
    "verify_scene",
    "violation_margin",
    "worldline_of",
]
