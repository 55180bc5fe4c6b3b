import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from staticdec import (
    DEFAULT_SCHEME,
    DegeneratePlane,
    DegeneratePlaneError,
    GeometryError,
    ScalarField,
    SignatureError,
    StaticProductSpec,
    build_static,
    curluz_residual,
    lightlike_sectional,
    null_curvature_scan,
    sample_box,
)
from staticdec.catalog import CatalogSpace, catalog_metric
from staticdec.manifold import curvature_tensors, sectional_curvature
from staticdec.null import curluz_sides, flat_null_plane, random_orthonormal_pair, static_null_plane
from staticdec.products import Profile1D, SeparableWarpSpec, flat_metric


def cosh_cosh_spec():
    """Flat plane with f = cosh(x) cosh(y); Hess f = I and f = 1 at the origin."""
    f = ScalarField(
        lambda p: np.cosh(p[0]) * np.cosh(p[1]),
        lambda p: np.array([np.sinh(p[0]) * np.cosh(p[1]), np.cosh(p[0]) * np.sinh(p[1])]),
        lambda p: np.array(
            [
                [np.cosh(p[0]) * np.cosh(p[1]), np.sinh(p[0]) * np.sinh(p[1])],
                [np.sinh(p[0]) * np.sinh(p[1]), np.cosh(p[0]) * np.cosh(p[1])],
            ]
        ),
    )
    return StaticProductSpec(flat_metric(2, [(-1, 1)] * 2), f, -1, (-1.0, 1.0))


def hyperbolic_base():
    return catalog_metric(CatalogSpace("H2eps", eps=1, domain=((-1.5, 1.5), (-1.5, 1.5))))


def warped_spec(dim_n=1):
    N = flat_metric(dim_n, [(-2, 2)] * dim_n, name="N")
    lam = ScalarField(lambda p: 2 + np.tanh(p[0]))
    return SeparableWarpSpec(N, lam, Profile1D(np.cosh), -1, (-2.0, 2.0), (-2.0, 2.0))


class TestLightlikeSectional:
    def test_minkowski_planes_are_flat(self, minkowski3):
        plane = DegeneratePlane([0.1, 0.2, 0.3], [1.0, 1.0, 0.0], [0.0, 0.0, 1.0])
        assert lightlike_sectional(minkowski3, DEFAULT_SCHEME, plane) == pytest.approx(0.0, abs=1e-12)

    def test_closed_form_at_origin_of_cosh_product(self):
        spec = cosh_cosh_spec()
        M = build_static(spec)
        plane = static_null_plane(spec, [0.0, 0.0], [0.0, 1.0], [1.0, 0.0])
        # independent: Hess f(d_y, d_y) / f = cosh(0) cosh(0) / 1 and the base is flat
        assert lightlike_sectional(M, DEFAULT_SCHEME, plane) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("c", [0.5, 2.0, 3.0])
    def test_scale_law(self, c):
        spec = cosh_cosh_spec()
        M = build_static(spec)
        plane = static_null_plane(spec, [0.3, -0.2], [0.0, 1.0], [1.0, 0.0])
        K = lightlike_sectional(M, DEFAULT_SCHEME, plane)
        assert lightlike_sectional(M, DEFAULT_SCHEME, plane.scaled(c)) == pytest.approx(c * c * K, rel=1e-6)

    @settings(max_examples=20, deadline=None)
    @given(st.floats(-0.8, 0.8), st.floats(-0.8, 0.8), st.floats(0.1, 5.0), st.floats(-3, 3))
    def test_scale_law_and_choice_of_spacelike_vector(self, x, y, c, k):
        spec = cosh_cosh_spec()
        M = build_static(spec)
        curv = curvature_tensors(M, DEFAULT_SCHEME, [x, y, 0.0])
        plane = static_null_plane(spec, [x, y, 0.0], [0.0, 1.0], [1.0, 0.0])
        K = lightlike_sectional(M, DEFAULT_SCHEME, plane, curv)
        assert lightlike_sectional(M, DEFAULT_SCHEME, plane.scaled(c), curv) == pytest.approx(c * c * K, rel=1e-6)
        # v + k u spans the same plane and is still spacelike
        other = DegeneratePlane(plane.base, plane.u, plane.v + k * plane.u)
        assert lightlike_sectional(M, DEFAULT_SCHEME, other, curv) == pytest.approx(K, abs=1e-6)

    def test_sign_does_not_depend_on_spacelike_vector(self):
        spec = StaticProductSpec(hyperbolic_base(), lambda p: np.cosh(p[0]) + 0.5, -1, (-1.0, 1.0))
        M = build_static(spec)
        rng = np.random.default_rng(5)
        for p in sample_box(spec.base.domain, 5, seed=4):
            v, w = random_orthonormal_pair(spec.base(p), rng)
            plane = static_null_plane(spec, p, v, w)
            curv = curvature_tensors(M, DEFAULT_SCHEME, plane.base)
            ref = np.sign(lightlike_sectional(M, DEFAULT_SCHEME, plane, curv))
            for k in rng.uniform(-5, 5, 10):
                other = DegeneratePlane(plane.base, plane.u, plane.v + k * plane.u)
                assert np.sign(lightlike_sectional(M, DEFAULT_SCHEME, other, curv)) == ref

    def test_riemannian_metric_is_rejected(self):
        M = flat_metric(3, [(-1, 1)] * 3)
        plane = DegeneratePlane([0, 0, 0], [1.0, 0, 0], [0, 1.0, 0])
        with pytest.raises(SignatureError):
            lightlike_sectional(M, DEFAULT_SCHEME, plane)

    def test_lorentzian_surface_is_rejected(self):
        M = catalog_metric(CatalogSpace("H2eps", eps=-1))
        plane = DegeneratePlane([0, 0], [1.0, 1.0], [1.0, 0.0])
        with pytest.raises(SignatureError):
            lightlike_sectional(M, DEFAULT_SCHEME, plane)

    def test_non_null_direction_is_rejected(self, minkowski3):
        plane = DegeneratePlane([0, 0, 0], [1.0, 0.5, 0.0], [0.0, 0.0, 1.0])
        with pytest.raises(DegeneratePlaneError):
            lightlike_sectional(minkowski3, DEFAULT_SCHEME, plane)

    def test_non_orthogonal_spacelike_vector_is_rejected(self, minkowski3):
        plane = DegeneratePlane([0, 0, 0], [1.0, 1.0, 0.0], [0.0, 1.0, 0.0])
        with pytest.raises(DegeneratePlaneError):
            lightlike_sectional(minkowski3, DEFAULT_SCHEME, plane)


class TestClosedForm:
    def test_unit_warp_reduces_to_base_curvature(self):
        spec = StaticProductSpec(hyperbolic_base(), lambda p: 1.0, -1, (-1.0, 1.0))
        lhs, rhs = curluz_sides(spec, DEFAULT_SCHEME, [0.4, 0.1], [1.0, 0.0], [0.0, 1.0 / np.cosh(0.4)])
        assert abs(lhs - rhs) <= 1e-6
        assert lhs == pytest.approx(-1.0, abs=1e-6)

    def test_hyperbolic_base_with_cosh_warp(self):
        spec = StaticProductSpec(hyperbolic_base(), lambda p: np.cosh(p[0]), -1, (-1.0, 1.0))
        rng = np.random.default_rng(0)
        for p in sample_box(spec.base.domain, 10, seed=1):
            v, w = random_orthonormal_pair(spec.base(p), rng)
            assert curluz_residual(spec, DEFAULT_SCHEME, p, v, w) <= 1e-4

    @settings(max_examples=50, deadline=None)
    @given(
        st.floats(-0.9, 0.9),
        st.floats(-2, 2),
        st.floats(-2, 2),
        st.floats(-0.9, 0.9),
        st.floats(-0.9, 0.9),
        st.integers(0, 2**31),
    )
    def test_random_smooth_warp_on_flat_plane(self, a, b, c, x, y, seed):
        spec = StaticProductSpec(
            flat_metric(2, [(-1, 1)] * 2), lambda p: 2 + a * np.sin(b * p[0] + c * p[1]), -1, (-1.0, 1.0)
        )
        v, w = random_orthonormal_pair(np.eye(2), np.random.default_rng(seed))
        assert curluz_residual(spec, DEFAULT_SCHEME, [x, y], v, w) <= 1e-4

    def test_requires_lorentzian_product(self):
        spec = StaticProductSpec(flat_metric(2, [(-1, 1)] * 2), lambda p: 1.0, 1)
        with pytest.raises(SignatureError):
            curluz_residual(spec, DEFAULT_SCHEME, [0, 0], [1, 0], [0, 1])


class TestFlatNullPlane:
    @pytest.mark.parametrize("dim_n", [1, 2])
    def test_constructed_plane_is_flat_everywhere(self, dim_n):
        spec = warped_spec(dim_n)
        M = spec.metric()
        L = spec.base_static()
        for q in sample_box(L.domain, 8, seed=2):
            v = np.zeros(dim_n)
            v[0] = 1.0
            plane = flat_null_plane(spec, q, v)
            assert abs(lightlike_sectional(M, DEFAULT_SCHEME, plane)) <= 1e-4

    def test_non_unit_vector_is_rejected(self):
        with pytest.raises(GeometryError):
            flat_null_plane(warped_spec(), [0.0, 0.0], [2.0])


class TestNullScan:
    def test_minkowski(self, minkowski3):
        scan = null_curvature_scan(minkowski3, DEFAULT_SCHEME, [0, 0, 0], 10, 0)
        assert scan.min_abs <= 1e-12

    def test_separable_warp_contains_a_flat_plane(self):
        spec = warped_spec()
        scan = null_curvature_scan(spec.metric(), DEFAULT_SCHEME, [0.3, -0.4, 0.0], 50, 0)
        assert scan.min_abs <= 1e-4

    def test_cosh_product_has_no_flat_plane_at_origin(self):
        # Hess f = I, f = 1 and flat base: every frame plane gives K_u = |v|^2 = 1
        scan = null_curvature_scan(build_static(cosh_cosh_spec()), DEFAULT_SCHEME, [0, 0, 0], 50, 0)
        assert scan.min_abs == pytest.approx(1.0, abs=1e-6)
        assert scan.max == pytest.approx(1.0, abs=1e-6)
        assert scan.min_abs_raw == pytest.approx(0.5, abs=1e-6)

    def test_scan_is_deterministic(self):
        M = build_static(cosh_cosh_spec())
        assert null_curvature_scan(M, DEFAULT_SCHEME, [0.1, 0.2, 0], 20, 3) == null_curvature_scan(
            M, DEFAULT_SCHEME, [0.1, 0.2, 0], 20, 3
        )

    def test_needs_positive_plane_count(self, minkowski3):
        with pytest.raises(ValueError):
            null_curvature_scan(minkowski3, DEFAULT_SCHEME, [0, 0, 0], 0)


def test_base_curvature_of_hyperbolic_slice():
    L = hyperbolic_base()
    assert sectional_curvature(L, DEFAULT_SCHEME, [0.2, 0.3], [1, 0], [0, 1]) == pytest.approx(-1, abs=1e-6)
