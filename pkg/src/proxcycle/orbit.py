"""Picard orbits and the diagnostics and solvers built on them.

Orbit generation is inherently sequential; everything derived from a trace is
pure. Non-convergence is data (a flagged result), never an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .chains import chain_point_distance, chain_self_distance
from .spaces import Exponent, Point, as_exponent, check_point
from .system import MEMBERSHIP_TOL, CyclicSystem

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 100_000


@dataclass(frozen=True)
class OrbitTrace:
    """x_0..x_n with x_{k+1} = map(x_k), exactly as evaluated."""

    system: CyclicSystem
    points: tuple[Point, ...]
    membership_violations: tuple[tuple[int, Point], ...] = ()

    @property
    def m(self) -> int:
        return self.system.m

    def block(self, n: int) -> tuple[Point, ...]:
        """The n-th block (x_{mn}, ..., x_{mn+m-1})."""
        start = n * self.m
        if n < 0 or start + self.m > len(self.points):
            raise ValueError(f"trace too short for block {n}")
        return self.points[start : start + self.m]

    @property
    def block_count(self) -> int:
        return len(self.points) // self.m


@dataclass(frozen=True)
class AprioriBound:
    """Geometric tail bound on cross-block chain distances."""

    alpha: float
    m: int
    initial_gap: float

    def bound(self, k: int) -> float:
        return apriori_error_bound(self.alpha, self.m, k, self.initial_gap)


@dataclass(frozen=True)
class SolveResult:
    point: Point
    residual: float
    iterations: int
    converged: bool
    set_chain_distance: float
    warnings: tuple[str, ...] = ()
    certificate: AprioriBound | None = None
    proximity_residual: float | None = None


def picard_orbit(system: CyclicSystem, x0: Sequence[float], n: int) -> OrbitTrace:
    """Iterate the map n times from x0 in the first region.

    Every m-th point is membership-checked against the first region; any
    violation is recorded on the trace, not raised.
    """
    start = check_point(x0)
    if n < system.m:
        raise ValueError(f"need at least m = {system.m} steps")
    if not system.regions[0].contains(start, system.space, MEMBERSHIP_TOL):
        raise ValueError(f"x0 = {start!r} is not in the first region")
    points = [start]
    violations = []
    x = start
    for k in range(1, n + 1):
        x = system.apply(x, step=k)
        points.append(x)
        if k % system.m == 0 and not system.regions[0].contains(x, system.space):
            violations.append((k, x))
    return OrbitTrace(system, tuple(points), tuple(violations))


def chain_trace(trace: OrbitTrace, p: object) -> list[float]:
    """Self-chain distance of (x_n, ..., x_{n+m-1}) for each n."""
    m = trace.m
    if len(trace.points) < 2 * m - 1:
        raise ValueError("trace too short for a chain trace")
    space = trace.system.space
    return [
        chain_self_distance(space, trace.points[n : n + m], p)
        for n in range(len(trace.points) - m + 1)
    ]


def edge_trace(trace: OrbitTrace, i: int) -> list[float]:
    """d(x_{mn+i-1}, x_{mn+i}) for each block n; edge i runs A_i -> A_{i+1}.

    For finite p these converge edgewise to d(A_i, A_{i+1}); for p = inf only
    the edge attaining the set chain distance is guaranteed to converge (see
    ``dominant_edge``).
    """
    m = trace.m
    if not 1 <= i <= m:
        raise ValueError(f"edge index must be in 1..{m}")
    space = trace.system.space
    out = []
    n = 0
    while m * n + i < len(trace.points):
        out.append(space.distance(trace.points[m * n + i - 1], trace.points[m * n + i]))
        n += 1
    return out


def dominant_edge(system: CyclicSystem) -> int:
    """1-based index of the edge attaining max_i d(A_i, A_{i+1})."""
    edges = [
        system.regions[i].distance_to(system.regions[(i + 1) % system.m], system.space)
        for i in range(system.m)
    ]
    return max(range(system.m), key=lambda i: edges[i]) + 1


def block_drift_trace(trace: OrbitTrace, i: int) -> list[float]:
    """d(x_{mn+i-1}, x_{mn+m+i-1}): drift of the i-th interleaved subsequence."""
    m = trace.m
    if not 1 <= i <= m:
        raise ValueError(f"subsequence index must be in 1..{m}")
    if len(trace.points) < 2 * m + i:
        raise ValueError("trace too short for a drift trace")
    space = trace.system.space
    out = []
    n = 0
    while m * n + m + i - 1 < len(trace.points):
        out.append(
            space.distance(trace.points[m * n + i - 1], trace.points[m * n + m + i - 1])
        )
        n += 1
    return out


def cross_block_chain_distance(trace: OrbitTrace, n: int, k: int, p: object) -> float:
    """Chain distance between blocks n and k, with the usual shift."""
    return chain_point_distance(trace.system.space, trace.block(n), trace.block(k), p)


def apriori_error_bound(alpha: float, m: int, k: int, initial_gap: float) -> float:
    """alpha^(mk) * initial_gap / (1 - alpha).

    ``alpha`` is the per-step chain contraction factor and ``initial_gap`` the
    measured chain distance between blocks 1 and 0.
    """
    a = float(alpha)
    if not 0.0 < a < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {a}")
    if k < 0:
        raise ValueError("k must be >= 0")
    if initial_gap < 0:
        raise ValueError("initial_gap must be >= 0")
    return a ** (m * k) * initial_gap / (1.0 - a)


def banach_solve(
    system: CyclicSystem,
    x0: Sequence[float],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    p: object = 2,
    contraction_alpha: float | None = None,
) -> SolveResult:
    """Fixed-point iteration; intended for systems whose set chain distance is 0.

    When ``contraction_alpha`` (the per-step chain contraction factor) is
    given and enough of the orbit exists, the result carries the geometric
    a-priori bound on cross-block distances.
    """
    exp = as_exponent(p)
    space = system.space
    set_distance = system.set_chain_distance(exp)
    warnings = []
    if set_distance > tol:
        warnings.append(
            f"set chain distance {set_distance:.6g} exceeds tol; no fixed point can exist"
        )
    x = check_point(x0)
    if not system.regions[0].contains(x, space, MEMBERSHIP_TOL):
        raise ValueError(f"x0 = {x!r} is not in the first region")

    head = [x]  # first 2m points, for the a-priori certificate
    fired = False
    iterations = 0
    for k in range(1, max_iter + 1):
        nxt = system.apply(x, step=k)
        if len(head) < 2 * system.m:
            head.append(nxt)
        step = space.distance(x, nxt)
        x = nxt
        iterations = k
        if step <= tol:
            fired = True
            break

    residual = space.distance(x, system.apply(x))
    converged = fired and residual <= tol
    if not fired:
        warnings.append("max_iter exhausted before the step criterion fired")
    for i, region in enumerate(system.regions):
        if converged and not region.contains(x, space, MEMBERSHIP_TOL):
            warnings.append(f"result is not in region {i + 1}")

    certificate = None
    if contraction_alpha is not None and len(head) >= 2 * system.m:
        gap = chain_point_distance(
            space, head[system.m : 2 * system.m], head[: system.m], exp
        )
        certificate = AprioriBound(contraction_alpha, system.m, gap)

    return SolveResult(
        point=x,
        residual=residual,
        iterations=iterations,
        converged=converged,
        set_chain_distance=set_distance,
        warnings=tuple(warnings),
        certificate=certificate,
    )


def periodic_point_solve(
    system: CyclicSystem,
    x0: Sequence[float],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    p: object = 2,
) -> SolveResult:
    """Iterate the m-fold composition along x_{mn} to an m-periodic point."""
    exp = as_exponent(p)
    space = system.space
    m = system.m
    set_distance = system.set_chain_distance(exp)
    x = check_point(x0)
    if not system.regions[0].contains(x, space, MEMBERSHIP_TOL):
        raise ValueError(f"x0 = {x!r} is not in the first region")

    warnings = []
    fired = False
    blocks = max(1, max_iter // m)
    iterations = 0
    for n in range(1, blocks + 1):
        nxt = system.apply_n(x, m)
        step = space.distance(x, nxt)
        x = nxt
        iterations = n * m
        if step <= tol:
            fired = True
            break

    residual = space.distance(x, system.apply_n(x, m))
    converged = fired and residual <= tol
    if not fired:
        warnings.append("max_iter exhausted before the step criterion fired")
    if converged and not system.regions[0].contains(x, space, MEMBERSHIP_TOL):
        warnings.append("result is not in the first region")

    orbit_chain = [x]
    for _ in range(m - 1):
        orbit_chain.append(system.apply(orbit_chain[-1]))
    proximity_residual = abs(
        chain_self_distance(space, orbit_chain, exp) - set_distance
    )

    return SolveResult(
        point=x,
        residual=residual,
        iterations=iterations,
        converged=converged,
        set_chain_distance=set_distance,
        warnings=tuple(warnings),
        proximity_residual=proximity_residual,
    )


@dataclass(frozen=True)
class ProximityChainResult:
    """Limits of the m interleaved subsequences and their residuals."""

    chain: tuple[Point, ...]
    converged: bool
    iterations: int
    edge_residuals: tuple[float, ...]
    total_residual: float
    set_chain_distance: float
    note: str | None = None


def proximity_chain_extract(
    system: CyclicSystem,
    x0: Sequence[float],
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    p: object = 2,
) -> ProximityChainResult:
    """Extract a candidate best proximity chain from the interleaved subsequences.

    Each subsequence x_{mn+i-1} is followed until its consecutive step falls
    below tol; the last iterate is taken, with no averaging. Convergence onto
    a truncation-artifact point, or out of the subsequence's region, is
    reported as non-convergence.
    """
    exp = as_exponent(p)
    space = system.space
    m = system.m
    set_distance = system.set_chain_distance(exp)
    x = check_point(x0)
    if not system.regions[0].contains(x, space, MEMBERSHIP_TOL):
        raise ValueError(f"x0 = {x!r} is not in the first region")

    last: list[Point | None] = [None] * m
    settled = [False] * m
    last[0] = x
    iterations = 0
    current = x
    for k in range(1, max_iter + 1):
        current = system.apply(current, step=k)
        iterations = k
        r = k % m
        prev = last[r]
        if prev is not None:
            settled[r] = space.distance(prev, current) <= tol
        last[r] = current
        if all(settled):
            break

    converged = all(settled)
    note = None
    chain = tuple(last[(i - 1) % m] for i in range(1, m + 1) if last[(i - 1) % m] is not None)
    if len(chain) < m:
        converged = False
        note = "orbit too short to populate every subsequence"
    elif converged:
        if any(system.is_artifact(pt) for pt in chain):
            converged = False
            note = "subsequence stalled on a truncation-artifact point"
        else:
            for i, pt in enumerate(chain):
                if not system.regions[i].contains(pt, space, MEMBERSHIP_TOL):
                    converged = False
                    note = f"extracted point left region {i + 1}"
                    break
    elif note is None:
        note = "max_iter exhausted before every subsequence settled"

    if len(chain) == m:
        edge_residuals = tuple(
            abs(
                space.distance(chain[i], chain[(i + 1) % m])
                - system.regions[i].distance_to(system.regions[(i + 1) % m], space)
            )
            for i in range(m)
        )
        total_residual = abs(chain_self_distance(space, chain, exp) - set_distance)
    else:
        edge_residuals = ()
        total_residual = math.nan

    return ProximityChainResult(
        chain=chain,
        converged=converged,
        iterations=iterations,
        edge_residuals=edge_residuals,
        total_residual=total_residual,
        set_chain_distance=set_distance,
        note=note,
    )


@dataclass(frozen=True)
class BoundednessReport:
    sups: tuple[float, ...]
    stabilized: tuple[bool, ...]

    @property
    def ok(self) -> bool:
        return all(self.stabilized)


def boundedness_probe(trace: OrbitTrace) -> BoundednessReport:
    """Sup of d(x_{mn+i}, x_i) per interleaved subsequence, plus whether the
    running maximum stabilized (no new maximum in the last half)."""
    if not trace.points:
        raise ValueError("trace is empty")
    space = trace.system.space
    m = trace.m
    sups = []
    stabilized = []
    for r in range(min(m, len(trace.points))):
        seq = trace.points[r::m]
        base = seq[0]
        dists = [space.distance(pt, base) for pt in seq]
        running_max = -math.inf
        last_new_max = 0
        for idx, d in enumerate(dists):
            if d > running_max:
                running_max = d
                last_new_max = idx
        sups.append(running_max)
        stabilized.append(last_new_max <= len(dists) // 2)
    return BoundednessReport(tuple(sups), tuple(stabilized))
