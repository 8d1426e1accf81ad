import math

import numpy as np
import pytest

from pwlab import geometry
from pwlab.geometry import (
    Ball,
    GeometryError,
    HPolytope,
    Product,
    Pyramid,
    VPolytope,
    body_from_json,
    body_to_json,
    box,
    chebyshev_ball,
    disc_containment_check,
    polar_dual,
    pyramid_ball_check,
    solve_certificate,
    support_cone,
    to_hpolytope,
    unit_box,
    vertex_enumerate,
)
from pwlab.calibration import DEFAULT_CALIBRATION


class TestMembership:
    def test_ball_center_inside(self):
        assert Ball([0.0, 0.0], 1.0).contains([0.0, 0.0])

    def test_ball_boundary_excluded(self):
        assert not Ball([0.0, 0.0], 1.0).contains([1.0, 0.0])

    def test_square_interior(self):
        assert unit_box(2).contains([0.5, 0.5])

    def test_square_boundary_excluded(self):
        assert not unit_box(2).contains([0.0, 0.5])

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            Ball([0.0, 0.0], 1.0).contains([1.0, 0.0, 0.0])

    def test_hv_consistency_on_probes(self, right_triangle, rng):
        v = geometry.to_vpolytope(right_triangle)
        pts = rng.uniform(-0.5, 1.5, size=(1000, 2))
        assert np.array_equal(right_triangle.contains_batch(pts), v.contains_batch(pts))

    def test_product_and_affine(self, rng):
        body = Product((Ball([0.5], 0.5), Ball([0.5], 0.5)))
        img = geometry.AffineImage(base=body, matrix=2 * np.eye(2), shift=np.array([1.0, 0.0]))
        pts = rng.uniform(-1, 3, size=(500, 2))
        expect = body.contains_batch((pts - [1.0, 0.0]) / 2.0)
        assert np.array_equal(img.contains_batch(pts), expect)


class TestVertexEnumeration:
    def test_cube_vertices(self):
        verts = vertex_enumerate(box([-1, -1, -1], [1, 1, 1]))
        assert verts.shape == (8, 3)
        assert np.allclose(np.sort(np.abs(verts).ravel()), 1.0)

    def test_triangle_vertices(self, right_triangle):
        verts = vertex_enumerate(right_triangle)
        expected = np.array([[0, 0], [1, 0], [0, 1]], dtype=float)
        assert verts.shape == (3, 2)
        for p in expected:
            assert np.min(np.linalg.norm(verts - p, axis=1)) < 1e-9

    def test_pyramid_2d_vertices(self):
        # intersecting the three facet lines of T(1,1) by hand gives
        # (-1,0), (1,0), (0,1)
        verts = vertex_enumerate(Pyramid(1.0, 1.0, dim=2).hpolytope())
        expected = np.array([[-1, 0], [1, 0], [0, 1]], dtype=float)
        assert verts.shape == (3, 2)
        for p in expected:
            assert np.min(np.linalg.norm(verts - p, axis=1)) < 1e-9

    def test_pyramid_3d_vertices(self):
        pyr = Pyramid(1.0, 1.0, dim=3)
        verts = vertex_enumerate(pyr.hpolytope())
        assert verts.shape == (5, 3)
        for p in pyr.expected_vertices():
            assert np.min(np.linalg.norm(verts - p, axis=1)) < 1e-9

    def test_unbounded_rejected(self):
        with pytest.raises(GeometryError):
            vertex_enumerate(HPolytope([[-1, 0], [0, -1]], [0, 0]))

    def test_degenerate_rejected(self):
        flat = HPolytope([[0, 1], [0, -1], [1, 0], [-1, 0]], [0, 0, 1, 0])
        with pytest.raises(GeometryError):
            vertex_enumerate(flat)


class TestPolarDuality:
    def test_square_dual_is_cross(self):
        dual = polar_dual(box([-1, -1], [1, 1]))
        expected = np.array([[1, 0], [-1, 0], [0, 1], [0, -1]], dtype=float)
        assert dual.vertices.shape == (4, 2)
        for p in expected:
            assert np.min(np.linalg.norm(dual.vertices - p, axis=1)) < 1e-12

    def test_involution_on_cube(self):
        cube = box([-1, -1, -1], [1, 1, 1])
        back = polar_dual(polar_dual(cube))
        verts = vertex_enumerate(back)
        orig = vertex_enumerate(cube)
        for p in orig:
            assert np.min(np.linalg.norm(verts - p, axis=1)) < 1e-9

    def test_involution_random_triangle(self):
        tri = VPolytope([[2.0, 0.0], [0.0, 2.0], [-1.0, -1.0]])
        dd = polar_dual(polar_dual(tri))
        for p in tri.vertices:
            assert np.min(np.linalg.norm(dd.vertices - p, axis=1)) < 1e-9

    def test_order_reversal(self):
        inner, outer = box([-0.5, -0.5], [0.5, 0.5]), box([-1, -1], [1, 1])
        d_outer, d_inner = polar_dual(outer), polar_dual(inner)
        h = to_hpolytope(d_inner)
        assert np.all(d_outer.vertices @ h.normals.T <= h.offsets + 1e-9)

    def test_origin_not_interior(self):
        shifted = box([1, 1], [2, 2])
        with pytest.raises(GeometryError):
            polar_dual(shifted)


class TestSupportCone:
    def test_square_corner_quadrant(self):
        cone = support_cone(unit_box(2), [0.0, 0.0])
        assert cone.contains([1.0, 1.0])
        assert cone.contains([1.0, 0.0])
        assert not cone.contains([-1.0, 0.0])
        assert not cone.contains([0.5, -0.1])

    def test_not_a_vertex(self):
        with pytest.raises(GeometryError):
            support_cone(unit_box(2), [0.5, 0.5])


class TestChebyshevBall:
    def test_cube_center(self):
        c, r = chebyshev_ball(box([-1, -1, -1], [1, 1, 1]))
        assert np.allclose(c, 0.0, atol=1e-9)
        assert abs(r - 1.0) < 1e-9

    def test_triangle_incircle(self, right_triangle):
        c, r = chebyshev_ball(right_triangle)
        assert abs(r - (1 - math.sqrt(2) / 2)) < 1e-9

    def test_thin_box(self):
        eps = 1e-3
        _, r = chebyshev_ball(box([0, 0], [eps, 1.0]))
        assert abs(r - eps / 2) < 1e-12

    def test_ball_inside_body(self, right_triangle):
        c, r = chebyshev_ball(right_triangle)
        dists = (right_triangle.offsets - right_triangle.normals @ c) \
            / np.linalg.norm(right_triangle.normals, axis=1)
        assert np.all(dists >= r - 1e-9)


class TestPyramidBall:
    def test_anchor_radius(self):
        pyr = Pyramid(1.0, 1.0, dim=2)
        assert abs(pyr.inscribed_ball_radius(0.75) - 0.25 / math.sqrt(2)) < 1e-12
        assert pyramid_ball_check(1.0, 1.0, 0.75)

    def test_near_apex(self):
        assert pyramid_ball_check(1.0, 1.0, 1.0 - 1e-9)

    def test_grid(self):
        for alpha in (0.5, 1.0, 2.0):
            for beta in (0.5, 1.0, 2.0):
                for t in np.linspace(beta / 2 + 1e-9, beta - 1e-9, 100):
                    assert pyramid_ball_check(alpha, beta, float(t))

    def test_out_of_range(self):
        with pytest.raises(GeometryError):
            pyramid_ball_check(1.0, 1.0, 0.25)


class TestDiscContainment:
    def test_zero_violations_at_calibrated_constant(self):
        C = DEFAULT_CALIBRATION.containment_c
        assert disc_containment_check(C, 0.1, 100_000, seed=5) == 0
        assert disc_containment_check(C, 0.05, 100_000, seed=5) == 0

    def test_violations_outside_regime(self):
        assert disc_containment_check(10.0, 0.5, 100_000, seed=5) > 0

    def test_halved_constant_still_passes(self):
        C = DEFAULT_CALIBRATION.containment_c / 2
        assert disc_containment_check(C, 0.1, 50_000, seed=5) == 0

    def test_doubled_constant_fails(self):
        # doubling crosses the lens-corner threshold 1/(4 + eps^2)
        C = DEFAULT_CALIBRATION.containment_c * 2
        assert disc_containment_check(C, 0.1, 10 ** 6, seed=5) > 0


class TestCertificates:
    def test_two_by_two_anchor(self):
        cert = solve_certificate([0.1, 0.1], [[0.5, 0.5], [0.5, 0.5]], 0)
        assert abs(cert.rho[0] - 21 / 22) < 1e-12
        assert abs(cert.rho[1] - 1 / 22) < 1e-12
        assert cert.residual() < 1e-10

    def test_three_by_three_uniform(self):
        cert = solve_certificate([0.2] * 3, np.full((3, 3), 1 / 3), 1)
        assert np.all(cert.rho > 0)
        assert abs(cert.rho.sum() - 1) < 1e-10

    def test_zero_lambda_reduces_to_identity(self):
        cert = solve_certificate([0.0, 0.0], [[0.5, 0.5], [0.5, 0.5]], 1)
        assert np.allclose(cert.rho, [0.0, 1.0], atol=1e-14)

    def test_singular_precondition(self):
        with pytest.raises(GeometryError):
            solve_certificate([0.6, 0.6], [[0.5, 0.5], [0.5, 0.5]], 0)

    def test_random_trials(self, rng):
        for _ in range(200):
            k = int(rng.integers(2, 6))
            lam = rng.uniform(1e-3, 0.999 / k, size=k)
            mu = rng.uniform(0.05, 1.0, size=(k, k))
            mu /= mu.sum(axis=1, keepdims=True)
            cert = solve_certificate(lam, mu, int(rng.integers(k)))
            assert np.all(cert.rho > 0)
            assert abs(cert.rho.sum() - 1) <= 1e-10

    def test_reconstruction_property(self, rng):
        k = 5
        x = rng.uniform(-1, 1, size=(k, 2))
        lam = rng.uniform(0.01, 0.9 / k, size=k)
        mu = rng.uniform(0.1, 1.0, size=(k, k))
        mu /= mu.sum(axis=1, keepdims=True)
        y = (1 + lam)[:, None] * x - lam[:, None] * (mu @ x)
        for target in range(k):
            cert = solve_certificate(lam, mu, target)
            assert np.linalg.norm(cert.rho @ y - x[target]) < 1e-8


class TestJsonSchema:
    def test_hpolytope_roundtrip(self, right_triangle):
        text = body_to_json(right_triangle)
        back = body_from_json(text)
        assert np.array_equal(back.normals, right_triangle.normals)
        assert np.array_equal(back.offsets, right_triangle.offsets)

    def test_vpolytope_roundtrip(self):
        v = VPolytope([[0.1234567890123456, 2.0], [1e-17, -1.0], [3.0, 0.5]])
        back = body_from_json(body_to_json(v))
        assert np.array_equal(back.vertices, v.vertices)

    def test_schema_fields(self, right_triangle):
        import json
        doc = json.loads(body_to_json(right_triangle))
        assert doc["dim"] == 2
        assert set(doc["halfspaces"][0]) == {"normal", "offset"}
