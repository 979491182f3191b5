"""Chain distances over point tuples and region chains.

The cyclic shift convention (term i pairs x_i with y_{i+1}, wrapping the last
index back to the first) lives in exactly one place here, ``_shifted_pairs``,
and every chain quantity routes through it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .spaces import (
    INFINITY,
    CapabilityError,
    Exponent,
    Point,
    Space,
    as_exponent,
    check_point,
    p_combine,
)

PExponent = Exponent


def _shifted_pairs(xs: Sequence[Point], ys: Sequence[Point]) -> list[tuple[Point, Point]]:
    # The single home of the x_i vs y_{i+1} pairing.
    m = len(xs)
    return [(xs[i], ys[(i + 1) % m]) for i in range(m)]


def _check_chain(space: Space, xs: Sequence[Sequence[float]]) -> tuple[Point, ...]:
    chain = tuple(check_point(x) for x in xs)
    if len(chain) < 2:
        raise ValueError("a chain needs at least 2 points")
    for pt in chain:
        if len(pt) != space.dimension:
            raise ValueError(
                f"chain point of dimension {len(pt)} in a "
                f"{space.dimension}-dimensional space"
            )
    return chain


def chain_point_distance(
    space: Space,
    xs: Sequence[Sequence[float]],
    ys: Sequence[Sequence[float]],
    p: object,
) -> float:
    """p-combination of d(x_i, y_{i+1}) around the cyclic chain.

    Not symmetric in (xs, ys); the shift makes the two orders genuinely
    different quantities and no symmetrization is applied.
    """
    cx = _check_chain(space, xs)
    cy = _check_chain(space, ys)
    if len(cx) != len(cy):
        raise ValueError(f"chain lengths differ: {len(cx)} vs {len(cy)}")
    terms = [space.distance(a, b) for a, b in _shifted_pairs(cx, cy)]
    return p_combine(terms, p)


def chain_self_distance(space: Space, xs: Sequence[Sequence[float]], p: object) -> float:
    """Chain distance of a tuple against itself (same code path, bit-identical)."""
    return chain_point_distance(space, xs, xs, p)


def chain_set_distance(space: Space, regions: Sequence[object], p: object) -> float:
    """p-combination of consecutive exact set distances d(A_i, A_{i+1}), wrapping."""
    regs = list(regions)
    if len(regs) < 2:
        raise ValueError("need at least 2 regions")
    edges = []
    for i, region in enumerate(regs):
        nxt = regs[(i + 1) % len(regs)]
        if not hasattr(region, "distance_to"):
            raise CapabilityError(f"region {region!r} has no exact distance method")
        edges.append(region.distance_to(nxt, space))
    return p_combine(edges, p)


@dataclass(frozen=True)
class MonotonicityReport:
    ok: bool
    worst_slack: float
    failures: tuple


def p_monotonicity_check(
    space: Space,
    xs: Sequence[Sequence[float]],
    ys: Sequence[Sequence[float]],
    ps: Sequence[float] = (1.0, 1.5, 2.0, 3.0, 8.0, 64.0),
    tol: float = 1e-12,
) -> MonotonicityReport:
    """Check d_inf <= d_p <= d_1 and d_p <= m^(1/p) * d_inf for sampled p."""
    m = len(tuple(xs))
    d1 = chain_point_distance(space, xs, ys, 1.0)
    dinf = chain_point_distance(space, xs, ys, INFINITY)
    worst = 0.0
    failures = []
    for p in ps:
        exp = as_exponent(p)
        dp = chain_point_distance(space, xs, ys, exp)
        assert exp.value is not None
        checks = (
            ("d_inf <= d_p", dinf - dp),
            ("d_p <= d_1", dp - d1),
            ("d_p <= m^(1/p) * d_inf", dp - m ** (1.0 / exp.value) * dinf),
        )
        for label, slack in checks:
            worst = max(worst, slack)
            if slack > tol:
                failures.append((label, p, slack))
    return MonotonicityReport(not failures, worst, tuple(failures))
