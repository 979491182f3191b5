"""Points, norms, and metric evaluation.

Points are plain tuples of floats. A space is either an l^q norm on R^N or a
user-supplied two-point metric oracle; both expose ``distance(a, b)``. All
values are immutable and every operation is pure.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

Point = tuple[float, ...]


class CapabilityError(TypeError):
    """A region or space does not support the requested exact computation."""


@dataclass(frozen=True)
class Exponent:
    """An exponent in [1, inf]. ``value is None`` is the infinity tag.

    Infinity is a distinct tag rather than a float so that no code path ever
    evaluates ``sum(|v|**q) ** (1/q)`` with a huge q.
    """

    value: float | None = None

    def __post_init__(self) -> None:
        if self.value is not None:
            v = float(self.value)
            if not math.isfinite(v):
                raise ValueError("use INFINITY (or Exponent()) for the infinite exponent")
            if v < 1.0:
                raise ValueError(f"exponent must be >= 1, got {v}")
            object.__setattr__(self, "value", v)

    @property
    def is_inf(self) -> bool:
        return self.value is None

    def __repr__(self) -> str:
        return "Exponent(inf)" if self.is_inf else f"Exponent({self.value})"


INFINITY = Exponent()


def as_exponent(p: object) -> Exponent:
    """Coerce a number, ``math.inf``, or the string ``"inf"`` to an Exponent."""
    if isinstance(p, Exponent):
        return p
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity"):
            return INFINITY
        raise ValueError(f"cannot read exponent from {p!r}")
    if isinstance(p, (int, float)):
        if math.isinf(p):
            return INFINITY
        return Exponent(float(p))
    raise TypeError(f"cannot read exponent from {p!r}")


def check_point(v: Sequence[float]) -> Point:
    """Coerce to a coordinate tuple, rejecting empty or non-finite input."""
    pt = tuple(float(c) for c in v)
    if not pt:
        raise ValueError("a point must have dimension >= 1")
    for c in pt:
        if not math.isfinite(c):
            raise ValueError(f"non-finite coordinate in {pt!r}")
    return pt


def _pow(base: float, q: float) -> float:
    # Integer exponents take the exact-multiplication path so CSV output is
    # reproducible across platforms; only non-integer q goes through exp/log.
    if q == int(q):
        return base ** int(q)
    return base ** q


def p_combine(values: Iterable[float], p: object) -> float:
    """(sum v_i^p)^(1/p) over nonnegative values, or their max for p = inf.

    Finite p factors out the largest value before exponentiating, so large
    exponents cannot overflow on large inputs.
    """
    exp = as_exponent(p)
    vals = [float(v) for v in values]
    if exp.is_inf:
        return max(vals, default=0.0)
    peak = max(vals, default=0.0)
    if peak == 0.0:
        return 0.0
    q = exp.value
    assert q is not None
    if q == 1.0:
        return math.fsum(vals)
    s = math.fsum(_pow(v / peak, q) for v in vals)
    return peak * (s ** (1.0 / q))


def lq_norm(v: Sequence[float], q: object) -> float:
    """l^q norm of a coordinate tuple, q in [1, inf]."""
    return p_combine((abs(c) for c in check_point(v)), q)


class Space:
    """Base for metric substrates; subclasses define ``distance``."""

    dimension: int

    def distance(self, a: Sequence[float], b: Sequence[float]) -> float:
        raise NotImplementedError

    def _check_pair(self, a: Sequence[float], b: Sequence[float]) -> tuple[Point, Point]:
        pa, pb = check_point(a), check_point(b)
        if len(pa) != self.dimension or len(pb) != self.dimension:
            raise ValueError(
                f"dimension mismatch: space is {self.dimension}-dimensional, "
                f"points have {len(pa)} and {len(pb)}"
            )
        return pa, pb


@dataclass(frozen=True)
class LqSpace(Space):
    """R^dimension under the l^q norm."""

    q: Exponent
    dimension: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", as_exponent(self.q))
        if self.dimension < 1:
            raise ValueError("dimension must be >= 1")

    def norm(self, v: Sequence[float]) -> float:
        return lq_norm(v, self.q)

    def distance(self, a: Sequence[float], b: Sequence[float]) -> float:
        pa, pb = self._check_pair(a, b)
        return p_combine((abs(x - y) for x, y in zip(pa, pb)), self.q)


@dataclass(frozen=True)
class OracleSpace(Space):
    """A space whose metric is a caller-supplied deterministic oracle.

    The oracle must be pure and reentrant; the axioms are not assumed but can
    be spot-checked with ``validate_metric``.
    """

    oracle: Callable[[Point, Point], float]
    dimension: int

    def distance(self, a: Sequence[float], b: Sequence[float]) -> float:
        pa, pb = self._check_pair(a, b)
        return float(self.oracle(pa, pb))


@dataclass(frozen=True)
class MetricReport:
    ok: bool
    symmetry_violations: tuple
    identity_violations: tuple
    triangle_violations: tuple


def validate_metric(
    space: Space,
    sample_points: Sequence[Sequence[float]],
    seed: int = 0,
    tol: float = 1e-12,
    max_triples: int = 2000,
) -> MetricReport:
    """Spot-check symmetry, d(x,x)=0, and the triangle inequality on samples.

    Violations are returned as witnesses, never raised.
    """
    pts = [check_point(p) for p in sample_points]
    if len(pts) < 3:
        raise ValueError("need at least 3 sample points")

    identity = []
    for x in pts:
        dxx = space.distance(x, x)
        if abs(dxx) > tol:
            identity.append((x, dxx))

    symmetry = []
    for x, y in itertools.combinations(pts, 2):
        dxy, dyx = space.distance(x, y), space.distance(y, x)
        if abs(dxy - dyx) > tol:
            symmetry.append((x, y, dxy, dyx))

    triples = list(itertools.combinations(pts, 3))
    if len(triples) > max_triples:
        rng = random.Random(seed)
        triples = rng.sample(triples, max_triples)
    triangle = []
    for x, y, z in triples:
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            lhs = space.distance(a, c)
            rhs = space.distance(a, b) + space.distance(b, c)
            if lhs - rhs > tol:
                triangle.append((a, b, c, lhs, rhs))

    ok = not (identity or symmetry or triangle)
    return MetricReport(ok, tuple(symmetry), tuple(identity), tuple(triangle))
