"""Counterexample search against a universal separation inequality.

No bounded continuous planar vector field w can keep
|<x-y, w(x)-w(y)>| > c |w(x)-w(y)| for every pair with |x-y| > 1; this
module makes that failure observable. It provides the cone/chaining
apparatus the impossibility argument uses, a library of bounded continuous
candidate fields, a deterministic search that exhibits violating pairs,
and a circle-sampling diagnostic for the field's behavior far from the
origin. Equality (including dw = 0) already defeats the strict
inequality, so the search accepts margin >= 0.
"""
from __future__ import annotations

import enum
import math
import random
from dataclasses import dataclass

from .geometry import Vec2, dot, norm, sub

CHAIN_TOL = 1e-12


class ZeroAxisError(ValueError):
    """Cone axis must be nonzero."""


class DegenerateSegmentError(ValueError):
    """Chain subdivision needs segment length > 1."""


def aperture_for(c: float) -> float:
    """Cone aperture cosine min(c/2, 1/2) used by the chaining argument."""
    if not (math.isfinite(c) and c > 0):
        raise ValueError("c must be finite and positive")
    return min(c / 2.0, 0.5)


def direction_capacity(aperture_cos: float) -> int:
    """How many pairwise 2*arcsin(a)-separated directions fit on a circle."""
    if not (0.0 < aperture_cos < 1.0):
        raise ValueError("aperture cosine must lie in (0, 1)")
    return math.floor(math.pi / math.asin(aperture_cos))


@dataclass(frozen=True, slots=True)
class Cone:
    """Closed convex cone {z : <axis, z> >= aperture_cos |axis| |z|}."""

    axis: Vec2
    aperture_cos: float

    def __post_init__(self) -> None:
        if self.axis.x1 == 0.0 and self.axis.x2 == 0.0:
            raise ZeroAxisError("cone axis must be nonzero")
        if not (0.0 < self.aperture_cos < 1.0):
            raise ValueError("aperture cosine must lie in (0, 1)")

    @property
    def half_angle(self) -> float:
        return math.asin(self.aperture_cos)


@dataclass(frozen=True, slots=True)
class ConeMembership:
    margin: float
    member: bool


def cone_contains(cone: Cone, z: Vec2) -> ConeMembership:
    """Membership with margin <u,z> - a|u||z|; zero is a member (margin 0)."""
    margin = dot(cone.axis, z) - cone.aperture_cos * norm(cone.axis) * norm(z)
    return ConeMembership(margin=margin, member=margin >= 0.0)


class FieldKind(enum.Enum):
    CONSTANT = "constant"
    SATURATED_RADIAL = "radial"
    ROTATIONAL = "rotational"
    CLAMPED_LINEAR = "linear"
    SAMPLED_GRID = "grid"


@dataclass(frozen=True)
class CandidateField:
    """Bounded continuous field; evaluate() never exceeds bound in norm."""

    kind: FieldKind
    bound: float
    value: Vec2 | None = None
    scale: float = 1.0
    origin: tuple[float, float] | None = None
    spacing: float | None = None
    values: tuple[tuple[tuple[float, float], ...], ...] | None = None

    def __post_init__(self) -> None:
        if not (math.isfinite(self.bound) and self.bound > 0):
            raise ValueError("field bound must be finite and positive")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ValueError("field scale must be finite and positive")
        if (self.kind is FieldKind.CONSTANT) != (self.value is not None):
            raise ValueError("constant fields take a value, others do not")
        grid_parts = (self.origin is not None, self.spacing is not None,
                      self.values is not None)
        if (self.kind is FieldKind.SAMPLED_GRID) != all(grid_parts):
            raise ValueError("grid fields take origin, spacing and values")
        if self.kind is FieldKind.SAMPLED_GRID:
            if self.spacing <= 0 or not math.isfinite(self.spacing):
                raise ValueError("grid spacing must be finite and positive")
            rows = self.values
            if len(rows) < 1 or len(rows[0]) < 1:
                raise ValueError("grid needs at least one node")
            if any(len(row) != len(rows[0]) for row in rows):
                raise ValueError("grid rows must have equal length")

    def evaluate(self, p: Vec2) -> Vec2:
        if self.kind is FieldKind.CONSTANT:
            return self.value
        if self.kind is FieldKind.SATURATED_RADIAL:
            u1, u2 = p.x1 / self.scale, p.x2 / self.scale
            f = self.bound / math.hypot(1.0, u1, u2)
            return Vec2(f * u1, f * u2)
        if self.kind is FieldKind.ROTATIONAL:
            f = self.bound / max(math.hypot(p.x1, p.x2), self.scale)
            return Vec2(-f * p.x2, f * p.x1)
        if self.kind is FieldKind.CLAMPED_LINEAR:
            f = self.bound / math.sqrt(2.0)
            c1 = min(1.0, max(-1.0, p.x1 / self.scale))
            c2 = min(1.0, max(-1.0, p.x2 / self.scale))
            return Vec2(f * c1, f * c2)
        return self._grid_eval(p)

    def _grid_eval(self, p: Vec2) -> Vec2:
        rows = self.values
        ny, nx = len(rows), len(rows[0])
        u = (p.x1 - self.origin[0]) / self.spacing
        v = (p.x2 - self.origin[1]) / self.spacing
        # Clamping extends the boundary values constantly: still continuous.
        u = min(max(u, 0.0), nx - 1.0)
        v = min(max(v, 0.0), ny - 1.0)
        i = min(int(u), nx - 2) if nx > 1 else 0
        j = min(int(v), ny - 2) if ny > 1 else 0
        fu = u - i
        fv = v - j
        i2 = min(i + 1, nx - 1)
        j2 = min(j + 1, ny - 1)
        w00, w10 = rows[j][i], rows[j][i2]
        w01, w11 = rows[j2][i], rows[j2][i2]
        a0 = (w00[0] * (1 - fu) + w10[0] * fu, w00[1] * (1 - fu) + w10[1] * fu)
        a1 = (w01[0] * (1 - fu) + w11[0] * fu, w01[1] * (1 - fu) + w11[1] * fu)
        return Vec2(a0[0] * (1 - fv) + a1[0] * fv,
                    a0[1] * (1 - fv) + a1[1] * fv)


def constant_field(value: Vec2) -> CandidateField:
    bound = max(norm(value), 1e-300)  # zero field still has a valid bound slot
    return CandidateField(FieldKind.CONSTANT, bound=bound, value=value)


def saturated_radial_field(bound: float = 1.0, scale: float = 1.0) -> CandidateField:
    return CandidateField(FieldKind.SATURATED_RADIAL, bound=bound, scale=scale)


def rotational_field(bound: float = 1.0, scale: float = 1.0) -> CandidateField:
    return CandidateField(FieldKind.ROTATIONAL, bound=bound, scale=scale)


def clamped_linear_field(bound: float = 1.0, scale: float = 1.0) -> CandidateField:
    return CandidateField(FieldKind.CLAMPED_LINEAR, bound=bound, scale=scale)


def grid_field(origin: tuple[float, float], spacing: float,
               values) -> CandidateField:
    rows = tuple(tuple((float(w[0]), float(w[1])) for w in row)
                 for row in values)
    bound = max(math.hypot(w[0], w[1]) for row in rows for w in row)
    return CandidateField(FieldKind.SAMPLED_GRID, bound=max(bound, 1e-300),
                          origin=(float(origin[0]), float(origin[1])),
                          spacing=float(spacing), values=rows)


def builtin_field(name: str, bound: float = 1.0) -> CandidateField:
    factories = {
        "constant": lambda: constant_field(Vec2(bound, 0.0)),
        "radial": lambda: saturated_radial_field(bound),
        "rotational": lambda: rotational_field(bound),
        "linear": lambda: clamped_linear_field(bound),
    }
    if name not in factories:
        raise ValueError(f"unknown field {name!r}; "
                         f"expected one of {sorted(factories)} or a grid file")
    return factories[name]()

BUILTIN_FIELDS = ("constant", "radial", "rotational", "linear")


@dataclass(frozen=True)
class ChainCheckReport:
    """One run of the subdivision argument along [x, y]."""

    segment_length: float
    n: int
    step_length: float
    increment_margins: tuple[float, ...]
    increments_in_cone: bool
    sum_margin: float
    sum_in_cone: bool
    convexity_respected: bool


def chain_check(field: CandidateField, x: Vec2, y: Vec2,
                a: float) -> ChainCheckReport:
    """Subdivide [x, y] into n = ceil(L/2) steps of length in (1, 2] and
    test each increment w(z_i) - w(z_{i+1}), plus their telescoped total,
    against the cone around x - y."""
    length = norm(sub(x, y))
    if not length > 1.0:
        raise DegenerateSegmentError(f"segment length {length} <= 1")
    n = math.ceil(length / 2.0)
    cone = Cone(sub(x, y), a)
    points = [Vec2(x.x1 + (i / n) * (y.x1 - x.x1),
                   x.x2 + (i / n) * (y.x2 - x.x2)) for i in range(n + 1)]
    values = [field.evaluate(p) for p in points]
    margins = tuple(
        cone_contains(cone, sub(values[i], values[i + 1])).margin
        for i in range(n)
    )
    total = cone_contains(cone, sub(values[0], values[n]))
    all_in = all(m >= 0.0 for m in margins)
    return ChainCheckReport(
        segment_length=length,
        n=n,
        step_length=length / n,
        increment_margins=margins,
        increments_in_cone=all_in,
        sum_margin=total.margin,
        sum_in_cone=total.member,
        convexity_respected=(not all_in) or total.margin >= -CHAIN_TOL,
    )


@dataclass(frozen=True)
class ViolationReport:
    """A pair defeating the strict separation inequality for this c.

    margin = c |dw| - |<x-y, dw>| with dw = w(x) - w(y); margin >= 0 means
    the strict inequality fails at (x, y), dw = 0 being the degenerate case.
    """

    x: Vec2
    y: Vec2
    c: float
    margin: float
    inner_product: float
    increment_norm: float
    separation: float
    evaluations_used: int
    stage: str
    both_signs_observed: bool

    def __post_init__(self) -> None:
        if not self.separation > 1.0:
            raise ValueError("violation pair must satisfy |x-y| > 1")


@dataclass(frozen=True)
class Exhausted:
    """Search ran out of budget. Certifies nothing about the field."""

    best_margin: float
    best_pair: tuple[Vec2, Vec2] | None
    evaluations_used: int
    note: str = ("budget exhausted without finding a violation; "
                 "this does not certify the field satisfies the inequality")


def violation_margin(field: CandidateField, c: float,
                     x: Vec2, y: Vec2) -> float:
    """c |dw| - |<x-y, dw>|, the quantity falsify maximizes."""
    wx = field.evaluate(x)
    wy = field.evaluate(y)
    dw = sub(wx, wy)
    return c * norm(dw) - abs(dot(sub(x, y), dw))


_PROBE_RADII = (2.0, 8.0, 32.0, 128.0, 512.0, 2048.0, 8192.0)
_PROBE_ANGLES = 16
_WORKER_SLOTS = 4


class _Search:
    """Budgeted, seeded pair search; shared state across stages."""

    def __init__(self, field: CandidateField, c: float, budget: int):
        self.field = field
        self.c = c
        self.budget = budget
        self.evals = 0
        self.best_margin = -math.inf
        self.best_pair: tuple[Vec2, Vec2] | None = None
        self.pos_seen = False
        self.neg_seen = False

    def out_of_budget(self) -> bool:
        return self.evals + 2 > self.budget

    def try_pair(self, x: Vec2, y: Vec2):
        """Margin of one pair, or None when skipped/over budget."""
        if self.out_of_budget():
            return None
        separation = norm(sub(x, y))
        if not separation > 1.0:
            return None
        wx = self.field.evaluate(x)
        wy = self.field.evaluate(y)
        self.evals += 2
        dw = sub(wx, wy)
        inner = dot(sub(x, y), dw)
        if inner > 0.0:
            self.pos_seen = True
        elif inner < 0.0:
            self.neg_seen = True
        margin = self.c * norm(dw) - abs(inner)
        if margin > self.best_margin:
            self.best_margin = margin
            self.best_pair = (x, y)
        if margin >= 0.0:
            return (x, y, margin, inner, norm(dw), separation)
        return None


def _violation(search: _Search, hit, stage: str) -> ViolationReport:
    x, y, margin, inner, dw_norm, separation = hit
    return ViolationReport(
        x=x, y=y, c=search.c, margin=margin, inner_product=inner,
        increment_norm=dw_norm, separation=separation,
        evaluations_used=search.evals, stage=stage,
        both_signs_observed=search.pos_seen and search.neg_seen,
    )


def _probe_pairs():
    """Structured far-field probes: antipodal, same-ray, near-ray pairs."""
    for radius in _PROBE_RADII:
        for k in range(_PROBE_ANGLES):
            theta = 2.0 * math.pi * k / _PROBE_ANGLES
            ux, uy = math.cos(theta), math.sin(theta)
            x = Vec2(radius * ux, radius * uy)
            yield x, Vec2(-radius * ux, -radius * uy)
            for gap in (1.25, 2.0):
                yield x, Vec2((radius + gap) * ux, (radius + gap) * uy)
            # Slight transverse offsets: where saturating radial fields
            # lose their separating inner product.
            gap = 1.25
            for h in (0.5 * gap / radius, gap / radius, 2.0 * gap / radius):
                phi = theta + h / radius
                yield x, Vec2((radius + gap) * math.cos(phi),
                              (radius + gap) * math.sin(phi))


def falsify(field: CandidateField, c: float, budget: int = 10 ** 6,
            seed: int = 0x5EED) -> ViolationReport | Exhausted:
    """Search for a pair with |x-y| > 1 where the strict inequality
    |<x-y, w(x)-w(y)>| > c |w(x)-w(y)| fails.

    Three deterministic stages: structured far-field probes, seeded random
    pairs (budget split across fixed worker slots, lowest slot wins), and
    local refinement of the best pair seen. Exhausted is an honest result,
    not an error; it carries the best margin and certifies nothing.
    """
    if not (math.isfinite(c) and c > 0):
        raise ValueError("c must be finite and positive")
    if budget < 1:
        raise ValueError("budget must be >= 1")
    search = _Search(field, c, budget)

    for x, y in _probe_pairs():
        hit = search.try_pair(x, y)
        if hit is not None:
            return _violation(search, hit, "probe")
        if search.out_of_budget():
            return _exhausted(search)

    random_budget = (budget - search.evals) * 3 // 4
    per_slot = random_budget // _WORKER_SLOTS
    for slot in range(_WORKER_SLOTS):
        rng = random.Random(seed * 1000003 + slot)
        slot_end = search.evals + per_slot
        while search.evals + 2 <= min(slot_end, budget):
            r = math.exp(rng.uniform(0.0, math.log(1e4)))
            t = rng.uniform(0.0, 2.0 * math.pi)
            x = Vec2(r * math.cos(t), r * math.sin(t))
            gap = math.exp(rng.uniform(math.log(1.0001), math.log(1e3)))
            phi = rng.uniform(0.0, 2.0 * math.pi)
            y = Vec2(x.x1 + gap * math.cos(phi), x.x2 + gap * math.sin(phi))
            hit = search.try_pair(x, y)
            if hit is not None:
                return _violation(search, hit, f"random-slot-{slot}")

    if search.best_pair is not None:
        hit = _refine(search)
        if hit is not None:
            return _violation(search, hit, "refine")
    return _exhausted(search)


def _refine(search: _Search):
    """Coordinate-perturbation ascent on the violation margin."""
    x, y = search.best_pair
    step = 1.0
    while step > 1e-9 and not search.out_of_budget():
        improved = False
        for dx1, dx2, dy1, dy2 in (
            (step, 0, 0, 0), (-step, 0, 0, 0),
            (0, step, 0, 0), (0, -step, 0, 0),
            (0, 0, step, 0), (0, 0, -step, 0),
            (0, 0, 0, step), (0, 0, 0, -step),
        ):
            cand_x = Vec2(x.x1 + dx1, x.x2 + dx2)
            cand_y = Vec2(y.x1 + dy1, y.x2 + dy2)
            if not norm(sub(cand_x, cand_y)) > 1.0:
                continue
            before = search.best_margin
            hit = search.try_pair(cand_x, cand_y)
            if hit is not None:
                return hit
            if search.best_margin > before:
                x, y = cand_x, cand_y
                improved = True
                break
            if search.out_of_budget():
                return None
        if not improved:
            step /= 2.0
    return None


def _exhausted(search: _Search) -> Exhausted:
    return Exhausted(best_margin=search.best_margin,
                     best_pair=search.best_pair,
                     evaluations_used=search.evals)


@dataclass(frozen=True)
class ProbeCluster:
    value: Vec2
    size: int
    share: float
    mean_angle: float


@dataclass(frozen=True)
class ProbeReport:
    """Circle-sampling diagnostic for far-field value clusters."""

    radius: float
    samples: int
    value_tol: float
    clusters: tuple[ProbeCluster, ...]
    circular_distances: tuple[tuple[int, int, float], ...]
    two_delta_floor: float
    note: str


def circular_distance(alpha: float, beta: float) -> float:
    spread = abs(alpha - beta) % (2.0 * math.pi)
    return min(spread, 2.0 * math.pi - spread)


def angular_separation_probe(field: CandidateField, radius: float,
                             samples: int, aperture_cos: float = 0.5,
                             value_tol: float | None = None) -> ProbeReport:
    """Sample w on a circle, cluster the values, report the clusters'
    mean angles and pairwise circular distances.

    Diagnostic only: finitely many samples cannot compute the true limit
    set, and the 2*arcsin(a) floor is emitted for comparison, not claimed.
    """
    if not (math.isfinite(radius) and radius > 1.0):
        raise ValueError("probe radius must be > 1")
    if samples < 2:
        raise ValueError("need at least 2 samples")
    if value_tol is None:
        value_tol = 1e-6 * max(1.0, field.bound)

    reps: list[Vec2] = []
    members: list[list[int]] = []
    angles = []
    for k in range(samples):
        theta = 2.0 * math.pi * k / samples
        angles.append(theta)
        value = field.evaluate(Vec2(radius * math.cos(theta),
                                    radius * math.sin(theta)))
        for idx, rep in enumerate(reps):
            if norm(sub(value, rep)) <= value_tol:
                members[idx].append(k)
                break
        else:
            reps.append(value)
            members.append([k])

    clusters = []
    for rep, idxs in zip(reps, members):
        sin_sum = sum(math.sin(angles[k]) for k in idxs)
        cos_sum = sum(math.cos(angles[k]) for k in idxs)
        clusters.append(ProbeCluster(
            value=rep,
            size=len(idxs),
            share=len(idxs) / samples,
            mean_angle=math.atan2(sin_sum, cos_sum),
        ))
    distances = tuple(
        (i, j, circular_distance(clusters[i].mean_angle, clusters[j].mean_angle))
        for i in range(len(clusters))
        for j in range(i + 1, len(clusters))
    )
    if len(clusters) == 1:
        note = "single value cluster; no angular separation constraints apply"
    else:
        note = (f"{len(clusters)} value clusters; empirical circular "
                f"distances reported next to the 2*arcsin(a) floor")
    return ProbeReport(
        radius=radius,
        samples=samples,
        value_tol=value_tol,
        clusters=tuple(clusters),
        circular_distances=distances,
        two_delta_floor=2.0 * math.asin(aperture_cos),
        note=note,
    )
