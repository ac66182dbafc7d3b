import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bjlab.sampling import random_space, random_vector
from bjlab.spaces import (
    DescriptorParseError,
    DimensionMismatch,
    Hull,
    Lp,
    Polyhedral,
    SignedBox,
    Singleton,
    SpaceError,
    SmoothSpaceHasContinuumExtremes,
    SupSum,
    ZeroVectorError,
    attainment,
    block_norms,
    directional_range,
    dual_norm,
    dual_space,
    ext_dual,
    format_space,
    jset_centroid,
    jset_extremes,
    jset_range,
    jset_sample,
    norm,
    norming_vector,
    parse_space,
    primal_vertices,
    real_line,
    support_set,
    up_to_sign,
)
from oracles import lp_norm, one_sided, poly_dual_norm_lp, poly_norm, richardson

INF = math.inf
R = real_line()


def as_set(rows):
    return {tuple(np.round(r, 12) + 0.0) for r in rows}


# ---------------------------------------------------------------- norms


def test_lp_norm_values():
    assert norm(Lp(3, 2), [1, 1]) == pytest.approx(2 ** (1 / 3), rel=1e-15)
    assert norm(Lp(INF, 2), [1, -2]) == 2
    assert norm(SupSum((Lp(2, 2), Lp(1, 2))), [3, 4, 1, 1]) == 5


def test_large_exponent_does_not_overflow():
    x = np.array([1e3, 1e3])
    assert norm(Lp(5e5, 2), x) == pytest.approx(1e3 * 2 ** (1 / 5e5))


def test_norm_batches_over_rows():
    X = np.array([[3.0, 4.0], [1.0, 0.0]])
    assert np.allclose(norm(Lp(2, 2), X), [5, 1])


def test_dual_norm_values():
    assert dual_norm(Lp(1, 2), [0.5, -1]) == 1
    assert dual_norm(Lp(2, 3), [1, 2, 2]) == pytest.approx(3)
    assert dual_norm(SupSum((Lp(INF, 1), Lp(INF, 1))), [1, 1]) == 2


def test_polyhedral_dual_norm_matches_linear_program():
    G = ((1, 2), (3, -1), (0, 1))
    P = Polyhedral(G)
    # values from the LP oracle: 5/7, 6/7, 23/14
    assert dual_norm(P, [1, 1]) == pytest.approx(5 / 7, abs=1e-12)
    assert dual_norm(P, [2, -1]) == pytest.approx(6 / 7, abs=1e-12)
    assert dual_norm(P, [0.5, 3]) == pytest.approx(23 / 14, abs=1e-12)


def test_polyhedral_dual_norm_random_against_lp(rng):
    for _ in range(20):
        k = int(rng.integers(3, 7))
        G = np.round(rng.standard_normal((k, 3)), 4)
        P = Polyhedral(tuple(map(tuple, G)))
        f = rng.standard_normal(3)
        assert dual_norm(P, f) == pytest.approx(poly_dual_norm_lp(G, f), rel=1e-9)
        x = rng.standard_normal(3)
        assert norm(P, x) == pytest.approx(poly_norm(G, x), rel=1e-14)


def test_block_norms():
    S = SupSum((Lp(2, 2), R, Lp(1, 2)))
    assert np.allclose(block_norms(S, [3, 4, -2, 1, 1]), [5, 2, 2])


# ---------------------------------------------------------------- descriptors


def test_descriptor_validation():
    with pytest.raises(SpaceError):
        Lp(0.5, 2)
    with pytest.raises(SpaceError):
        Lp(2e6, 2)
    with pytest.raises(SpaceError):
        Lp(2, 0)
    with pytest.raises(SpaceError):
        Polyhedral(((1, 0), (2, 0)))  # rank deficient and a positive multiple
    with pytest.raises(SpaceError):
        Polyhedral(((1, 0), (0, 1), (2, 0)))
    with pytest.raises(SpaceError):
        Polyhedral(((1, 0), (0, 1), (0, 0)))
    with pytest.raises(SpaceError):
        SupSum(())


def test_depth_cap():
    s = R
    for _ in range(8):
        s = SupSum((s,))
    with pytest.raises(SpaceError):
        SupSum((s,))


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        norm(Lp(2, 3), [1, 2])


def test_descriptors_are_values():
    assert parse_space("lp(2,3)") == Lp(2.0, 3)
    assert SupSum((Lp(2, 2), R)) == SupSum((Lp(2.0, 2), Lp(INF, 1)))


@pytest.mark.parametrize(
    "text",
    [
        "lp(1,3)",
        "lp(inf,2)",
        "lp(1.5,4)",
        "poly[1,0;0,1;1,1]",
        "poly[0.5,-2;3,1e-05]",
        "sup(lp(2,2),lp(inf,1))",
        "sup(sup(lp(3,2),poly[1,1;1,-1]),lp(1,1))",
    ],
)
def test_format_parse_round_trip(text):
    s = parse_space(text)
    assert parse_space(format_space(s)) == s
    assert format_space(parse_space(format_space(s))) == format_space(s)


def test_parser_accepts_unicode_infinity_and_spaces():
    assert parse_space(" sup( lp(∞, 2) , lp(2,1) ) ") == SupSum((Lp(INF, 2), Lp(2, 1)))


@pytest.mark.parametrize("bad", ["lp(2,2", "lp(a,2)", "foo(1)", "poly[]", "sup()", "lp(2,2)x", "lp(0.5,2)"])
def test_parse_errors(bad):
    with pytest.raises(DescriptorParseError):
        parse_space(bad)


# ---------------------------------------------------------------- support sets


def test_support_set_examples():
    J = support_set(Lp(2, 2), [3, 4])
    assert isinstance(J, Singleton) and np.allclose(J.functional, [0.6, 0.8])
    J = support_set(Lp(1, 2), [1, 0])
    assert isinstance(J, SignedBox) and J.fixed == {0: 1} and J.free == (1,)
    J = support_set(Lp(INF, 2), [1, 1])
    assert isinstance(J, Hull) and as_set(J.generators) == {(1.0, 0.0), (0.0, 1.0)}


def test_support_set_of_zero_raises():
    with pytest.raises(ZeroVectorError):
        support_set(Lp(2, 2), [0, 0])


def test_jset_range_examples():
    box = support_set(Lp(1, 2), [1, 0])
    for t in (-2.0, 0.0, 0.7):
        lo, hi = jset_range(box, [t, 1])
        assert (lo, hi) == pytest.approx((t - 1, t + 1))
    assert jset_range(support_set(Lp(2, 2), [3, 4]), [-4, 3]) == pytest.approx((0, 0))
    assert jset_range(support_set(Lp(INF, 2), [1, 1]), [1, -1]) == pytest.approx((-1, 1))


def test_signed_box_range_matches_difference_quotients():
    x, space = np.array([1.0, 0.0]), Lp(1, 2)
    f = lambda v: lp_norm(v, 1)
    for t in np.arange(-2, 2.01, 0.5):
        y = np.array([t, 1.0])
        lo, hi = jset_range(support_set(space, x), y)
        right, _ = richardson(f, x, y, +1)
        left, _ = richardson(f, x, y, -1)
        assert hi == pytest.approx(right, abs=1e-6)
        assert lo == pytest.approx(left, abs=1e-6)


def test_ext_dual_examples():
    assert as_set(ext_dual(Lp(INF, 2))) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert as_set(ext_dual(Lp(1, 2))) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
    assert as_set(ext_dual(SupSum((R, R)))) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    with pytest.raises(SmoothSpaceHasContinuumExtremes):
        ext_dual(Lp(3, 2))


def test_ext_dual_drops_redundant_generators():
    # (1,1) is a convex combination of the others' span but does not expose a facet here
    P = Polyhedral(((1, 0), (0, 1), (0.5, 0.5)))
    assert as_set(up_to_sign(ext_dual(P))) == {(1, 0), (0, 1)}


def test_polyhedral_vertices_and_dual():
    P = Polyhedral(((1, 1), (1, -1)))
    assert as_set(primal_vertices(P)) == {(1, 0), (-1, 0), (0, 1), (0, -1)}
    assert dual_space(P) == Polyhedral(((1.0, 0.0), (0.0, 1.0)))
    assert dual_space(Lp(INF, 3)) == Lp(1, 3)


def test_attainment_examples():
    S3 = SupSum((R, R, R))
    assert attainment(S3, [1, 0.5, 1]) == [0, 2]
    assert attainment(S3, [1, 1 - 1e-15, 0], tau_tie=1e-12) == [0, 1]
    assert attainment(S3, [0.2, 0.9, 0.1]) == [1]
    with pytest.raises(ZeroVectorError):
        attainment(S3, [0, 0, 0])


def test_norming_vector(rng):
    for space in (Lp(1, 3), Lp(INF, 3), Lp(3, 3), Polyhedral(((1, 2), (3, -1), (0, 1))), SupSum((Lp(2, 2), R))):
        f = rng.standard_normal(space.dim)
        x = norming_vector(space, f)
        assert norm(space, x) == pytest.approx(1, abs=1e-12)
        assert f @ x == pytest.approx(dual_norm(space, f), rel=1e-12)


def test_jset_sample_stays_in_face(rng):
    space = SupSum((Lp(INF, 2), Lp(1, 2)))
    x = np.array([1.0, -1.0, 1.0, 0.0])
    F = jset_sample(support_set(space, x), rng, 200)
    assert np.allclose(F @ x, norm(space, x))
    assert np.all(dual_norm(space, F) <= 1 + 1e-12)


# ---------------------------------------------------------------- properties

spaces = st.integers(0, 2**32 - 1).map(lambda s: np.random.default_rng(s))


@given(spaces)
def test_homogeneity_and_triangle(r):
    space = random_space(r)
    x, y = random_vector(space, r), random_vector(space, r)
    a = float(r.normal() * 3)
    assert norm(space, a * x) == pytest.approx(abs(a) * norm(space, x), rel=1e-12, abs=1e-300)
    assert norm(space, x + y) <= norm(space, x) + norm(space, y) + 1e-12


@given(spaces)
def test_support_functionals_are_norm_one_and_attain(r):
    space = random_space(r)
    x = random_vector(space, r)
    for f in jset_extremes(support_set(space, x)):
        assert dual_norm(space, f) == pytest.approx(1, abs=1e-10)
        assert f @ x == pytest.approx(norm(space, x), abs=1e-10 * max(1, norm(space, x)))


@given(spaces)
def test_ext_dual_elements_are_unit(r):
    space = random_space(r)
    try:
        E = ext_dual(space)
    except SmoothSpaceHasContinuumExtremes:
        return
    assert np.allclose(dual_norm(space, E), 1, atol=1e-10)


@given(spaces)
def test_jset_range_bounds_random_convex_combinations(r):
    space = random_space(r)
    x, y = random_vector(space, r), random_vector(space, r)
    J = support_set(space, x)
    lo, hi = jset_range(J, y)
    E = jset_extremes(J)
    W = r.dirichlet(np.ones(len(E)), 1000)
    vals = (W @ E) @ y
    assert vals.min() >= lo - 1e-10 and vals.max() <= hi + 1e-10
    ends = E @ y
    assert ends.min() == pytest.approx(lo, abs=1e-10) and ends.max() == pytest.approx(hi, abs=1e-10)


@given(spaces)
def test_directional_range_equals_one_sided_derivatives(r):
    space = random_space(r)
    x, y = random_vector(space, r), random_vector(space, r)
    lo, hi = directional_range(space, x, y)
    f = lambda v: norm(space, v)
    scale = 1 + norm(space, y)
    # for 1 < p < 2 the quotient converges like sqrt(t), so Richardson is not
    # applicable; check convergence toward the claimed limits instead
    for sign, limit in ((+1, hi), (-1, lo)):
        q = [one_sided(f, x, y, sign * t) for t in (1e-4, 1e-6, 1e-9)]
        assert abs(q[-1] - limit) <= 1e-3 * scale
        assert abs(q[-1] - limit) <= abs(q[0] - limit) + 1e-6 * scale


def test_richardson_on_smooth_points():
    space = Lp(3, 3)
    x, y = np.array([1.0, -2.0, 0.5]), np.array([0.3, 1.0, -1.0])
    lo, hi = directional_range(space, x, y)
    d, _ = richardson(lambda v: lp_norm(v, 3), x, y)
    assert lo == hi == pytest.approx(d, abs=1e-8)


@given(spaces)
def test_directional_range_matches_support_set_route(r):
    space = random_space(r)
    x, y = random_vector(space, r), random_vector(space, r)
    a = directional_range(space, x, y)
    b = jset_range(support_set(space, x), y)
    assert np.allclose(a, b, atol=1e-12)


def test_centroid_belongs_to_face():
    space = Lp(INF, 3)
    x = np.array([1.0, -1.0, 0.5])
    c = jset_centroid(support_set(space, x))
    assert c @ x == pytest.approx(1) and dual_norm(space, c) == pytest.approx(1)
