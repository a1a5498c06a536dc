import random

import pytest

from buildinglab.btree import (
    BoundaryPoint,
    TreeVertex,
    base_vertex,
    boundary_transitivity_check,
    build_tree_ball,
    cone_correspondence_report,
    cone_vs_ultrametric,
    ends_equal,
    hnf_lattice,
    iwasawa_decompose,
    iwasawa_report,
    make_vertex,
    mat_det,
    mat_mul,
    neighbors,
    normalize_end,
    parse_end,
    ray_to_end,
    sl2_sample,
    tree_distance,
    vertex_matrix,
)
from buildinglab.errors import InvalidSpec, PrecisionExhausted
from buildinglab.localfield import ZERO, parse_field_spec


@pytest.fixture(scope="module")
def q2():
    return parse_field_spec("Qp:p=2,prec=8")


@pytest.fixture(scope="module")
def q5():
    return parse_field_spec("Qp:p=5,prec=8")


@pytest.fixture(scope="module")
def l3():
    return parse_field_spec("Laurent:q=3,prec=8")


def test_ball_counts_match_formula(q2, l3):
    assert len(build_tree_ball(q2, 0).vertices) == 1
    assert len(build_tree_ball(q2, 2).vertices) == 10
    assert len(build_tree_ball(l3, 1).vertices) == 5
    report = build_tree_ball(q2, 4).report()
    assert report["ok"], report
    assert report["counts_by_distance"] == [1, 3, 6, 12, 24]
    assert report["acyclic_connected"]
    assert report["distance_oracle_ok"]


def test_ball_rejects_radius_beyond_precision(q2):
    with pytest.raises(PrecisionExhausted):
        build_tree_ball(q2, 9)


def test_neighbors_are_symmetric_and_distinct(q5):
    base = base_vertex(q5)
    nbrs = neighbors(q5, base)
    assert len(set(nbrs)) == 6
    for w in nbrs:
        assert tree_distance(q5, base, w) == 1
        assert tree_distance(q5, w, base) == 1
        assert base in neighbors(q5, w)


def test_canonical_form_reduces_b(q2):
    # b = 4 + 8 reduces mod pi^2 to 0, mod pi^3 to 4
    b = q2.from_integer(12)
    assert make_vertex(q2, 2, b) == TreeVertex(2, ZERO)
    v = make_vertex(q2, 3, b)
    assert q2.eq(v.b, q2.from_integer(4))
    # integral b of high valuation collapses to the (a, 0) spine
    assert make_vertex(q2, -1, q2.from_integer(2)) == TreeVertex(-1, ZERO)


def test_hnf_roundtrip_and_rank_errors(q2):
    rng = random.Random(3)
    ball = build_tree_ball(q2, 4)
    for v in ball.vertices:
        M = vertex_matrix(q2, v)
        cols = [(M[0][0], M[1][0]), (M[0][1], M[1][1])]
        assert hnf_lattice(q2, cols) == v
        # unimodular column operations leave the class unchanged
        x = q2.from_integer(rng.randrange(1, 16))
        mixed = [(q2.add(cols[0][0], q2.mul(x, cols[1][0])),
                  q2.add(cols[0][1], q2.mul(x, cols[1][1]))), cols[1]]
        assert hnf_lattice(q2, mixed) == v
    with pytest.raises(InvalidSpec):
        hnf_lattice(q2, [(q2.one, ZERO), (q2.from_integer(2), ZERO)])


def test_distance_oracle_against_bfs(l3):
    ball = build_tree_ball(l3, 3)
    base = ball.vertices[0]
    for i, v in enumerate(ball.vertices):
        assert tree_distance(l3, base, v) == ball.dist[i]
    # triangle inequality on a few pairs
    rng = random.Random(0)
    for _ in range(40):
        v = ball.vertices[rng.randrange(len(ball.vertices))]
        w = ball.vertices[rng.randrange(len(ball.vertices))]
        d = tree_distance(l3, v, w)
        assert d == tree_distance(l3, w, v) >= 0
        assert d <= ball.dist[ball.index[(v.a, l3.canonical_key(v.b))]] + \
            ball.dist[ball.index[(w.a, l3.canonical_key(w.b))]]


def test_ray_to_spine_ends(q2):
    up = ray_to_end(q2, parse_end(q2, "0"), 3)
    assert [v.a for v in up] == [0, 1, 2, 3]
    assert all(q2.is_zero(v.b) for v in up)
    down = ray_to_end(q2, parse_end(q2, "inf"), 3)
    assert [v.a for v in down] == [0, -1, -2, -3]
    assert ray_to_end(q2, parse_end(q2, "1"), 0) == [base_vertex(q2)]
    for ray in (up, down):
        for a, b in zip(ray, ray[1:]):
            assert tree_distance(q2, a, b) == 1
    with pytest.raises(PrecisionExhausted):
        ray_to_end(q2, parse_end(q2, "0"), 9)


def test_cone_agreement_examples(q2):
    x0 = parse_end(q2, "0")
    x1 = parse_end(q2, "1")
    assert cone_vs_ultrametric(q2, x0, x1, 6) == (0, 0, True)
    for m in (1, 2, 3, 4):
        pm = parse_end(q2, f"p^{m}")
        agreement, vd, consistent = cone_vs_ultrametric(q2, x0, pm, 6)
        assert (agreement, vd, consistent) == (m, m, True)
        # symmetry
        assert cone_vs_ultrametric(q2, pm, x0, 6) == (m, m, True)
    # beyond the inspected depth the prefix clamps
    agreement, vd, consistent = cone_vs_ultrametric(
        q2, x0, parse_end(q2, "p^5"), 3)
    assert (agreement, vd, consistent) == (3, 5, True)
    with pytest.raises(InvalidSpec):
        cone_vs_ultrametric(q2, x0, parse_end(q2, "0"), 3)


def test_normalized_ends(q5):
    e = normalize_end(q5, q5.from_integer(10), q5.from_integer(2))
    assert q5.eq(e.x, q5.from_integer(5)) and q5.eq(e.y, q5.one)
    e = normalize_end(q5, q5.one, q5.from_integer(5))
    assert q5.eq(e.y, q5.from_integer(5))
    e = normalize_end(q5, q5.one, q5.inv(q5.from_integer(5)))
    # (1 : 1/5) = (5 : 1)
    assert q5.eq(e.x, q5.from_integer(5)) and q5.eq(e.y, q5.one)
    assert ends_equal(q5, parse_end(q5, "inf"), BoundaryPoint(q5.one, ZERO))
    with pytest.raises(InvalidSpec):
        normalize_end(q5, ZERO, ZERO)


def test_cone_correspondence_sampled(q2, q5, l3):
    for field in (q2, q5, l3):
        report = cone_correspondence_report(field, depth=6, pairs=80, seed=4)
        assert report["ok"], report


def test_iwasawa_upper_triangular_case(q5):
    p = q5.uniformizer
    g = ((q5.inv(p), ZERO), (ZERO, p))
    result = iwasawa_decompose(q5, g)
    assert result["ok"]
    assert result["k"] == ((q5.one, ZERO), (ZERO, q5.one))
    assert result["b"] == g


def test_iwasawa_rotation_case(q5):
    g = ((ZERO, q5.neg(q5.one)), (q5.one, ZERO))
    result = iwasawa_decompose(q5, g)
    assert result["ok"]
    assert result["k"] == g
    assert result["b"] == ((q5.one, ZERO), (ZERO, q5.one))


def test_iwasawa_requires_det_one(q5):
    g = ((q5.from_integer(2), ZERO), (ZERO, q5.one))
    with pytest.raises(InvalidSpec):
        iwasawa_decompose(q5, g)


def test_sl2_samples_have_det_one(q5, l3):
    rng = random.Random(7)
    for field in (q5, l3):
        for _ in range(50):
            g = sl2_sample(field, rng)
            assert field.eq(mat_det(field, g), field.one)


def test_iwasawa_sampled_reports(q5, l3):
    for field in (q5, l3):
        report = iwasawa_report(field, samples=200, seed=1)
        assert report["ok"], report
        assert report["verified"] == 200
        assert report["exhausted"] == 0


def test_iwasawa_factors_shape(q5):
    rng = random.Random(13)
    for _ in range(25):
        g = sl2_sample(q5, rng)
        result = iwasawa_decompose(q5, g)
        assert result["ok"]
        k, b = result["k"], result["b"]
        assert q5.is_zero(b[1][0])
        assert all(q5.integral(k[i][j]) for i in range(2) for j in range(2))
        back = mat_mul(q5, k, b)
        assert all(q5.eq(back[i][j], g[i][j])
                   for i in range(2) for j in range(2))


def test_boundary_transitivity_counts(q2, l3):
    report = boundary_transitivity_check(q2, 2)
    assert report["ok"]
    assert report["classes"] == 6
    assert report["orbit_count"] == 1
    report = boundary_transitivity_check(q2, 1)
    assert report["classes"] == 3
    assert report["ok"]
    report = boundary_transitivity_check(l3, 3)
    assert report["ok"]
    assert report["classes"] == 9 * 4


def test_boundary_transitivity_depths(q5):
    for depth in (1, 2, 3):
        report = boundary_transitivity_check(q5, depth)
        assert report["ok"], report
        assert report["classes"] == 5 ** (depth - 1) * 6


def test_dot_export(q2):
    ball = build_tree_ball(q2, 2)
    text = ball.dot()
    assert text.startswith("graph tree_ball {")
    assert text.count(" -- ") == len(ball.edges)
    assert text.count("label=") == len(ball.vertices)
