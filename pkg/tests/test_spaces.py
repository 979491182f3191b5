import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from proxcycle.spaces import (
    INFINITY,
    Exponent,
    LqSpace,
    OracleSpace,
    as_exponent,
    check_point,
    lq_norm,
    p_combine,
    validate_metric,
)

finite_floats = st.floats(min_value=-100, max_value=100, allow_nan=False)
vectors = st.lists(finite_floats, min_size=1, max_size=6)


def test_lq_norm_pythagorean():
    assert lq_norm((3, 4), 2) == pytest.approx(5.0, abs=1e-12)


def test_lq_norm_manhattan():
    assert lq_norm((1, 1, 1), 1) == 3.0


def test_lq_norm_max():
    assert lq_norm((1, -2, 3), INFINITY) == 3.0
    assert lq_norm((1, -2, 3), math.inf) == 3.0


def test_lq_norm_zero_iff_zero():
    assert lq_norm((0.0, 0.0), 2) == 0.0
    assert lq_norm((0.0, 1e-300), 2) > 0.0


def test_exponent_domain():
    with pytest.raises(ValueError):
        Exponent(0.5)
    with pytest.raises(ValueError):
        as_exponent(0.0)
    assert as_exponent("inf").is_inf
    assert as_exponent(Exponent(3.0)).value == 3.0
    with pytest.raises(ValueError):
        as_exponent("huge")
    with pytest.raises(TypeError):
        as_exponent([2])


def test_check_point_rejects_bad_input():
    with pytest.raises(ValueError):
        check_point(())
    with pytest.raises(ValueError):
        check_point((1.0, math.nan))
    with pytest.raises(ValueError):
        lq_norm((math.inf,), 2)


def test_large_q_does_not_overflow():
    # max-factoring keeps huge exponents finite on large coordinates
    v = (1e200, 1e200)
    got = lq_norm(v, 512)
    assert math.isfinite(got)
    assert got == pytest.approx(1e200 * 2 ** (1 / 512), rel=1e-12)


def test_distance_examples():
    l2 = LqSpace(Exponent(2.0), 2)
    l1 = LqSpace(Exponent(1.0), 2)
    linf = LqSpace(INFINITY, 2)
    assert l2.distance((0, 0), (0, 1)) == 1.0
    assert l1.distance((1, 1), (0, 0)) == 2.0
    assert linf.distance((1, 0), (0, 2)) == 2.0


def test_distance_dimension_mismatch():
    l2 = LqSpace(Exponent(2.0), 2)
    with pytest.raises(ValueError):
        l2.distance((0, 0), (0, 0, 0))


@given(vectors, st.sampled_from([1.0, 1.5, 2.0, 3.0, 8.0]))
@settings(max_examples=60, deadline=None)
def test_norm_monotone_in_q(v, q):
    # q1 <= q2 implies norm_q2 <= norm_q1
    n_q = lq_norm(v, q)
    n_2q = lq_norm(v, 2 * q)
    n_inf = lq_norm(v, INFINITY)
    n_1 = lq_norm(v, 1)
    assert n_2q <= n_q + 1e-12 * (1 + n_q)
    assert n_inf <= n_q + 1e-12 * (1 + n_q)
    assert n_q <= n_1 + 1e-12 * (1 + n_1)


@given(vectors, finite_floats, st.sampled_from([1.0, 2.0, 3.5, math.inf]))
@settings(max_examples=60, deadline=None)
def test_norm_homogeneity(v, c, q):
    lhs = lq_norm(tuple(c * x for x in v), q)
    rhs = abs(c) * lq_norm(v, q)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


@given(vectors.filter(lambda v: len(v) >= 2), st.sampled_from([1.0, 2.0, 4.0, math.inf]))
@settings(max_examples=60, deadline=None)
def test_distance_triangle(v, q):
    dim = len(v)
    space = LqSpace(as_exponent(q), dim)
    a = tuple(v)
    b = tuple(-x for x in v)
    c = tuple(x + 1 for x in v)
    assert space.distance(a, c) <= space.distance(a, b) + space.distance(b, c) + 1e-12


def test_p_combine_empty_is_zero():
    assert p_combine((), 2) == 0.0
    assert p_combine((), INFINITY) == 0.0


def test_validate_metric_l2_passes():
    space = LqSpace(Exponent(2.0), 2)
    pts = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (2.0, 3.0)]
    assert validate_metric(space, pts).ok


def test_validate_metric_flags_asymmetry():
    space = OracleSpace(lambda a, b: a[0] - b[0], 1)
    report = validate_metric(space, [(0.0,), (1.0,), (2.0,)])
    assert not report.ok
    assert report.symmetry_violations


def test_validate_metric_flags_triangle_violation():
    space = OracleSpace(lambda a, b: (a[0] - b[0]) ** 2, 1)
    report = validate_metric(space, [(0.0,), (1.0,), (2.0,)])
    assert not report.ok
    assert report.triangle_violations  # 4 > 1 + 1


def test_validate_metric_needs_three_points():
    space = LqSpace(Exponent(2.0), 1)
    with pytest.raises(ValueError):
        validate_metric(space, [(0.0,), (1.0,)])
