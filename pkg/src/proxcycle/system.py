"""Cyclic systems: regions, the comparison function phi, and certification.

A cyclic system is a tuple of regions plus a deterministic map that is
supposed to send each region into the next (indices wrapping). Nothing is
assumed: cyclicity is checked by sampling or exhaustion, and the contraction
inequality is certified numerically over sampled or exhaustively enumerated
tuples.
"""

from __future__ import annotations

import itertools
import math
import random
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .chains import chain_point_distance, chain_set_distance
from .spaces import (
    CapabilityError,
    Exponent,
    LqSpace,
    Point,
    Space,
    as_exponent,
    check_point,
    lq_norm,
)

MEMBERSHIP_TOL = 1e-9
# LHS/RHS of the contraction inequality each accumulate ~m rounding errors on
# O(1) values, so a certified margin may legitimately dip this far below zero.
MARGIN_TOL = -1e-10
EXHAUSTIVE_LIMIT = 10 ** 6


class MapError(RuntimeError):
    """The system map raised or produced a non-finite point."""

    def __init__(self, message: str, point: Point | None = None, step: int | None = None):
        super().__init__(message)
        self.point = point
        self.step = step


# ---------------------------------------------------------------------------
# Regions


class Region:
    """A set A_i. Variants support membership, seeded sampling, and exact
    distance to a compatible other region."""

    def dimension(self) -> int:
        raise NotImplementedError

    def contains(self, point: Sequence[float], space: Space, tol: float = MEMBERSHIP_TOL) -> bool:
        raise NotImplementedError

    def sample(self, rng: random.Random) -> Point:
        raise NotImplementedError

    def distance_to(self, other: "Region", space: Space) -> float:
        return region_distance(space, self, other)


@dataclass(frozen=True)
class FiniteCloud(Region):
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = tuple(check_point(p) for p in self.points)
        if not pts:
            raise ValueError("a finite cloud must be nonempty")
        if len({len(p) for p in pts}) != 1:
            raise ValueError("cloud points must share one dimension")
        object.__setattr__(self, "points", pts)

    def dimension(self) -> int:
        return len(self.points[0])

    def contains(self, point, space, tol=MEMBERSHIP_TOL):
        x = check_point(point)
        return min(space.distance(x, p) for p in self.points) <= tol

    def sample(self, rng):
        return self.points[rng.randrange(len(self.points))]


def _check_bounds(lower: Point, upper: Point) -> None:
    if len(lower) != len(upper):
        raise ValueError("bound dimensions differ")
    if any(lo > hi for lo, hi in zip(lower, upper)):
        raise ValueError("lower bound exceeds upper bound")


class _BoxLike(Region):
    """Shared interval logic for axis-aligned segments and boxes."""

    def bounds(self) -> tuple[Point, Point]:
        raise NotImplementedError

    def dimension(self) -> int:
        return len(self.bounds()[0])

    def contains(self, point, space, tol=MEMBERSHIP_TOL):
        x = check_point(point)
        lower, upper = self.bounds()
        if len(x) != len(lower):
            raise ValueError("point dimension does not match region")
        return all(lo - tol <= c <= hi + tol for c, lo, hi in zip(x, lower, upper))

    def sample(self, rng):
        lower, upper = self.bounds()
        return tuple(lo if lo == hi else rng.uniform(lo, hi) for lo, hi in zip(lower, upper))


@dataclass(frozen=True)
class Segment(_BoxLike):
    """An axis-aligned segment: the endpoints differ in exactly one coordinate."""

    a: Point
    b: Point

    def __post_init__(self) -> None:
        pa, pb = check_point(self.a), check_point(self.b)
        if len(pa) != len(pb):
            raise ValueError("endpoint dimensions differ")
        differing = [i for i, (x, y) in enumerate(zip(pa, pb)) if x != y]
        if not differing:
            raise ValueError("segment endpoints must be distinct")
        if len(differing) != 1:
            raise ValueError("segment must be axis-aligned (one varying coordinate)")
        object.__setattr__(self, "a", pa)
        object.__setattr__(self, "b", pb)

    def bounds(self) -> tuple[Point, Point]:
        lower = tuple(min(x, y) for x, y in zip(self.a, self.b))
        upper = tuple(max(x, y) for x, y in zip(self.a, self.b))
        return lower, upper


@dataclass(frozen=True)
class Box(_BoxLike):
    lower: Point
    upper: Point

    def __post_init__(self) -> None:
        lo, hi = check_point(self.lower), check_point(self.upper)
        _check_bounds(lo, hi)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    def bounds(self) -> tuple[Point, Point]:
        return self.lower, self.upper


@dataclass
class IndexedFamily(Region):
    """A finite family {generator(i) : i in index_range}, materialized once."""

    generator: Callable[[int], Point]
    index_range: range
    _points: tuple[Point, ...] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.index_range) == 0:
            raise ValueError("index range must be nonempty")
        pts = tuple(check_point(self.generator(i)) for i in self.index_range)
        if len({len(p) for p in pts}) != 1:
            raise ValueError("family points must share one dimension")
        self._points = pts

    @property
    def points(self) -> tuple[Point, ...]:
        return self._points

    def dimension(self) -> int:
        return len(self._points[0])

    def contains(self, point, space, tol=MEMBERSHIP_TOL):
        x = check_point(point)
        return min(space.distance(x, p) for p in self._points) <= tol

    def sample(self, rng):
        return self._points[rng.randrange(len(self._points))]


@dataclass(frozen=True)
class Ball(Region):
    """A closed Euclidean ball; exact distances require the l^2 space."""

    center: Point
    radius: float

    def __post_init__(self) -> None:
        c = check_point(self.center)
        r = float(self.radius)
        if r <= 0:
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)

    def dimension(self) -> int:
        return len(self.center)

    def contains(self, point, space, tol=MEMBERSHIP_TOL):
        x = check_point(point)
        return math.dist(x, self.center) <= self.radius + tol

    def sample(self, rng):
        d = len(self.center)
        direction = [rng.gauss(0.0, 1.0) for _ in range(d)]
        norm = math.sqrt(math.fsum(c * c for c in direction))
        if norm == 0.0:
            return self.center
        scale = self.radius * rng.random() ** (1.0 / d) / norm
        return tuple(c + scale * u for c, u in zip(self.center, direction))


def _enumerable(region: Region) -> bool:
    return hasattr(region, "points")


def _require_l2(space: Space, what: str) -> None:
    if not (isinstance(space, LqSpace) and not space.q.is_inf and space.q.value == 2.0):
        raise CapabilityError(f"{what} requires the l^2 space")


def _interval_gap(lo1: float, hi1: float, lo2: float, hi2: float) -> float:
    return max(0.0, lo2 - hi1, lo1 - hi2)


def _point_box_gaps(x: Point, lower: Point, upper: Point) -> tuple[float, ...]:
    return tuple(max(0.0, lo - c, c - hi) for c, lo, hi in zip(x, lower, upper))


def region_distance(space: Space, a: Region, b: Region) -> float:
    """Exact infimum distance between two regions of compatible variants."""
    if _enumerable(a) and _enumerable(b):
        return min(space.distance(x, y) for x in a.points for y in b.points)

    if isinstance(a, _BoxLike) and isinstance(b, _BoxLike):
        if not isinstance(space, LqSpace):
            raise CapabilityError("box distances need an l^q space")
        (lo1, hi1), (lo2, hi2) = a.bounds(), b.bounds()
        gaps = tuple(_interval_gap(l1, h1, l2, h2) for l1, h1, l2, h2 in zip(lo1, hi1, lo2, hi2))
        return lq_norm(gaps, space.q)

    if isinstance(a, _BoxLike) and _enumerable(b):
        return region_distance(space, b, a)
    if _enumerable(a) and isinstance(b, _BoxLike):
        if not isinstance(space, LqSpace):
            raise CapabilityError("box distances need an l^q space")
        lower, upper = b.bounds()
        return min(lq_norm(_point_box_gaps(x, lower, upper), space.q) for x in a.points)

    if isinstance(a, Ball) or isinstance(b, Ball):
        _require_l2(space, "ball distance")
        if isinstance(a, Ball) and isinstance(b, Ball):
            return max(0.0, math.dist(a.center, b.center) - a.radius - b.radius)
        ball, other = (a, b) if isinstance(a, Ball) else (b, a)
        if _enumerable(other):
            return min(
                max(0.0, math.dist(x, ball.center) - ball.radius) for x in other.points
            )
        if isinstance(other, _BoxLike):
            lower, upper = other.bounds()
            gap = lq_norm(_point_box_gaps(ball.center, lower, upper), space.q)
            return max(0.0, gap - ball.radius)

    raise CapabilityError(
        f"no exact distance between {type(a).__name__} and {type(b).__name__}"
    )


# ---------------------------------------------------------------------------
# Comparison functions


class Phi:
    """Strictly increasing map [0, inf) -> [0, inf) controlling contraction."""

    def __call__(self, t: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class LinearPhi(Phi):
    alpha: float

    def __post_init__(self) -> None:
        a = float(self.alpha)
        if not 0.0 < a < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {a}")
        object.__setattr__(self, "alpha", a)

    def __call__(self, t: float) -> float:
        if t < 0:
            raise ValueError("phi is defined on [0, inf)")
        return self.alpha * t


@dataclass(frozen=True)
class TabulatedPhi(Phi):
    """Piecewise-linear phi from knots, extended beyond the last knot with the
    last segment's slope so monotonicity persists on all of [0, inf)."""

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        knots = tuple((float(t), float(v)) for t, v in self.knots)
        if len(knots) < 2:
            raise ValueError("need at least 2 knots")
        ts = [t for t, _ in knots]
        vs = [v for _, v in knots]
        if ts[0] != 0.0:
            raise ValueError("first knot must be at t = 0")
        if any(t2 <= t1 for t1, t2 in zip(ts, ts[1:])):
            raise ValueError("knot abscissae must be strictly increasing")
        if any(v2 < v1 for v1, v2 in zip(vs, vs[1:])):
            raise ValueError("knot values not increasing")
        if vs[0] < 0.0:
            raise ValueError("phi(0) must be >= 0")
        object.__setattr__(self, "knots", knots)

    def __call__(self, t: float) -> float:
        if t < 0:
            raise ValueError("phi is defined on [0, inf)")
        ts = [k[0] for k in self.knots]
        i = bisect_right(ts, t) - 1
        if i >= len(ts) - 1:
            i = len(ts) - 2
        (t1, v1), (t2, v2) = self.knots[i], self.knots[i + 1]
        slope = (v2 - v1) / (t2 - t1)
        return v1 + slope * (t - t1)


@dataclass(frozen=True)
class PhiReport:
    ok: bool
    violations: tuple


def validate_phi(phi: Phi, grid: Sequence[float]) -> PhiReport:
    """Verify strict increase and nonnegativity of phi on a sorted grid."""
    pts = [float(t) for t in grid]
    if len(pts) < 2 or any(t2 < t1 for t1, t2 in zip(pts, pts[1:])):
        raise ValueError("grid must be sorted with at least 2 points")
    violations = []
    values = [phi(t) for t in pts]
    for t, v in zip(pts, values):
        if v < 0:
            violations.append(("negative", t, v))
    for (t1, v1), (t2, v2) in zip(zip(pts, values), zip(pts[1:], values[1:])):
        if not v1 < v2:
            violations.append(("not strictly increasing", t1, t2, v1, v2))
    return PhiReport(not violations, tuple(violations))


# ---------------------------------------------------------------------------
# Cyclic systems


@dataclass(frozen=True)
class CyclicSystem:
    """m regions plus a deterministic map; immutable. The map callable must be
    pure and reentrant; this is a documented contract on the caller.

    ``artifact_points`` marks points whose image is a truncation stub rather
    than the genuine map (finite cuts of infinite families need one).
    """

    space: Space
    regions: tuple[Region, ...]
    map: Callable[[Point], Point]
    artifact_points: tuple[Point, ...] = ()

    def __post_init__(self) -> None:
        if len(self.regions) < 2:
            raise ValueError("a cyclic system needs m >= 2 regions")

    @property
    def m(self) -> int:
        return len(self.regions)

    def apply(self, x: Sequence[float], step: int | None = None) -> Point:
        pt = check_point(x)
        try:
            image = self.map(pt)
        except MapError:
            raise
        except Exception as exc:
            raise MapError(f"map failed at {pt!r}: {exc}", point=pt, step=step) from exc
        try:
            return check_point(image)
        except ValueError as exc:
            raise MapError(
                f"map returned a non-finite point at {pt!r}", point=pt, step=step
            ) from exc

    def apply_n(self, x: Sequence[float], k: int) -> Point:
        pt = check_point(x)
        for _ in range(k):
            pt = self.apply(pt)
        return pt

    def is_artifact(self, x: Sequence[float], tol: float = 1e-12) -> bool:
        pt = check_point(x)
        return any(
            pt == a or self.space.distance(pt, a) <= tol for a in self.artifact_points
        )

    def set_chain_distance(self, p: object) -> float:
        return chain_set_distance(self.space, self.regions, p)


@dataclass(frozen=True)
class CyclicityReport:
    ok: bool
    violations: tuple  # (region index, point, image)
    artifacts: tuple  # (region index, point) skipped as truncation stubs
    checked: int


def verify_cyclicity(
    system: CyclicSystem,
    samples_per_region: int = 100,
    seed: int = 0,
    tol: float = MEMBERSHIP_TOL,
) -> CyclicityReport:
    """Check map(A_i) within A_{i+1}; exhaustive on enumerable regions."""
    if samples_per_region < 1:
        raise ValueError("samples_per_region must be >= 1")
    rng = random.Random(seed)
    violations = []
    artifacts = []
    checked = 0
    for i, region in enumerate(system.regions):
        target = system.regions[(i + 1) % system.m]
        if _enumerable(region):
            candidates = region.points
        else:
            candidates = [region.sample(rng) for _ in range(samples_per_region)]
        for x in candidates:
            if system.is_artifact(x):
                artifacts.append((i, x))
                continue
            y = system.apply(x)
            checked += 1
            if not target.contains(y, system.space, tol):
                violations.append((i, x, y))
    return CyclicityReport(not violations, tuple(violations), tuple(artifacts), checked)


@dataclass(frozen=True)
class ContractionCertificate:
    ok: bool
    min_margin: float
    witness_xs: tuple[Point, ...]
    witness_ys: tuple[Point, ...]
    set_chain_distance: float
    p: Exponent
    evaluated: int
    exhaustive: bool
    artifact_skips: int


def contraction_margin(
    system: CyclicSystem,
    phi: Phi,
    p: object,
    xs: Sequence[Point],
    ys: Sequence[Point],
    set_distance: float | None = None,
) -> float:
    """RHS minus LHS of the contraction inequality for one tuple pair."""
    exp = as_exponent(p)
    if set_distance is None:
        set_distance = system.set_chain_distance(exp)
    txs = tuple(system.apply(x) for x in xs)
    tys = tuple(system.apply(y) for y in ys)
    lhs = chain_point_distance(system.space, txs, tys, exp)
    d = chain_point_distance(system.space, xs, ys, exp)
    rhs = d - phi(d) + phi(set_distance)
    return rhs - lhs


def verify_contraction(
    system: CyclicSystem,
    phi: Phi,
    p: object,
    tuple_samples: int = 500,
    seed: int = 0,
) -> ContractionCertificate:
    """Certify or refute the contraction inequality over sampled tuples.

    Enumerable systems small enough are checked exhaustively. Tuples touching
    a truncation-artifact point are skipped (their images are stubs) and
    counted separately.
    """
    exp = as_exponent(p)
    set_distance = system.set_chain_distance(exp)

    regions = system.regions
    exhaustive = all(_enumerable(r) for r in regions)
    if exhaustive:
        total = 1
        for r in regions:
            total *= len(r.points)
        exhaustive = total * total <= EXHAUSTIVE_LIMIT

    if exhaustive:
        per_region = [r.points for r in regions]
        tuples = list(itertools.product(*per_region))
        candidates = itertools.product(tuples, tuples)
    else:
        rng = random.Random(seed)

        def _sampled():
            for _ in range(tuple_samples):
                yield (
                    tuple(r.sample(rng) for r in regions),
                    tuple(r.sample(rng) for r in regions),
                )

        candidates = _sampled()

    min_margin = math.inf
    witness_xs: tuple[Point, ...] = ()
    witness_ys: tuple[Point, ...] = ()
    evaluated = 0
    skips = 0
    for xs, ys in candidates:
        if any(system.is_artifact(pt) for pt in xs + ys):
            skips += 1
            continue
        margin = contraction_margin(system, phi, exp, xs, ys, set_distance)
        evaluated += 1
        if margin < min_margin:
            min_margin = margin
            witness_xs, witness_ys = xs, ys

    ok = evaluated > 0 and min_margin >= MARGIN_TOL
    return ContractionCertificate(
        ok=ok,
        min_margin=min_margin if evaluated else math.nan,
        witness_xs=witness_xs,
        witness_ys=witness_ys,
        set_chain_distance=set_distance,
        p=exp,
        evaluated=evaluated,
        exhaustive=exhaustive,
        artifact_skips=skips,
    )


@dataclass(frozen=True)
class AlphaBoundResult:
    ok: bool
    threshold: float
    value: float


def alpha_bound_check(alpha: float, m: int, p: object) -> AlphaBoundResult:
    """Check alpha^m < 2^(-1/p); any alpha in (0,1) passes for p = inf."""
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {a}")
    if m < 2:
        raise ValueError("m must be >= 2")
    exp = as_exponent(p)
    threshold = 1.0 if exp.is_inf else 2.0 ** (-1.0 / exp.value)
    value = a ** m
    return AlphaBoundResult(value < threshold, threshold, value)
