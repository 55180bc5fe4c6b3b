import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from staticdec import (
    DEFAULT_SCHEME,
    GeometryError,
    ScalarField,
    StaticProductSpec,
    WarpedProductSpec,
    build_static,
    build_warped,
    curvature_tensors,
    lemma1_residuals,
    sample_box,
    sectional_curvature,
)
from staticdec.catalog import CatalogSpace, catalog_metric
from staticdec.manifold import apply_riemann
from staticdec.products import (
    LEMMA1_NAMES,
    DoublyWarpedSpec,
    build_doubly_warped,
    flat_metric,
    point_metric,
    t_slice_metric,
)

from helpers import h2_static, line_metric
from oracles import sectional_symbolic

WARPS = {
    "cosh": lambda p: np.cosh(p[0]),
    "exp": lambda p: np.exp(p[0]),
    "one": lambda p: 1.0,
}


def hyperbolic_base():
    return catalog_metric(CatalogSpace("H2eps", eps=1, r=1.0, domain=((-1.5, 1.5), (-1.5, 1.5))))


class TestBuildStatic:
    def test_unit_warp_over_a_line_is_minkowski(self):
        M = build_static(StaticProductSpec(line_metric(), lambda p: 1.0, -1))
        np.testing.assert_array_equal(M([0.3, 1.0]), np.diag([1.0, -1.0]))

    @pytest.mark.parametrize("r", [0.5, 2.0])
    def test_cosh_warp_gives_lorentzian_hyperbolic_plane(self, r):
        M = build_static(h2_static(r, -1))
        s = 0.4
        np.testing.assert_allclose(M([s, 0.0]), np.diag([1.0, -np.cosh(r * s) ** 2]))
        assert sectional_curvature(M, DEFAULT_SCHEME, [s, 0.0], [1, 0], [0, 1]) == pytest.approx(-r * r, abs=1e-4)

    def test_exponential_warp_is_hyperbolic(self):
        f = ScalarField(lambda p: np.exp(p[0]))
        M = build_static(StaticProductSpec(line_metric(), f, 1))
        assert sectional_curvature(M, DEFAULT_SCHEME, [0.2, 0.0], [1, 0], [0, 1]) == pytest.approx(-1.0, abs=1e-4)

    def test_nonpositive_warp_is_rejected(self):
        with pytest.raises(GeometryError):
            build_static(StaticProductSpec(line_metric(), lambda p: p[0], -1))

    def test_invalid_sign(self):
        with pytest.raises(ValueError):
            StaticProductSpec(line_metric(), lambda p: 1.0, 0)

    def test_time_is_the_last_coordinate(self):
        spec = StaticProductSpec(hyperbolic_base(), lambda p: 2.0, -1)
        M = build_static(spec)
        assert M.dim == 3
        assert M([0.1, 0.2, 0.0])[2, 2] == -4.0

    @settings(max_examples=20, deadline=None)
    @given(st.floats(-1.4, 1.4), st.floats(-1.4, 1.4), st.floats(-3, 3))
    def test_time_slice_reproduces_base_metric_bitwise(self, s, y, t):
        L = hyperbolic_base()
        M = build_static(StaticProductSpec(L, lambda p: np.cosh(p[0]), -1, (-3.0, 3.0)))
        sliced = t_slice_metric(M, t)
        assert np.array_equal(sliced([s, y]), L([s, y]))


class TestWarped:
    def test_constant_warp_is_direct_product(self):
        N = line_metric()
        F = catalog_metric(CatalogSpace("H2eps", eps=-1))
        M = build_warped(WarpedProductSpec(N, lambda p: 2.0, F))
        q = np.array([0.3, 0.5, -0.2])
        expected = np.zeros((3, 3))
        expected[0, 0] = 1.0
        expected[1:, 1:] = 4.0 * F(q[1:])
        assert np.array_equal(M(q), expected)

    def test_unit_warp_keeps_block_curvature(self):
        F = catalog_metric(CatalogSpace("H2eps", eps=-1))
        M = build_warped(WarpedProductSpec(line_metric(), lambda p: 1.0, F))
        K = sectional_curvature(M, DEFAULT_SCHEME, [0.1, 0.3, 0.0], [0, 1, 0], [0, 0, 1])
        assert K == pytest.approx(-1.0, abs=1e-6)
        assert sectional_curvature(M, DEFAULT_SCHEME, [0.1, 0.3, 0.0], [1, 0, 0], [0, 1, 0]) == pytest.approx(0, abs=1e-8)

    def test_point_base_returns_the_fiber(self):
        F = catalog_metric(CatalogSpace("H2eps", eps=-1))
        M = build_warped(WarpedProductSpec(point_metric(), lambda p: 1.0, F))
        assert M.dim == 2
        np.testing.assert_array_equal(M([0.4, 0.1]), F([0.4, 0.1]))

    def test_exponential_warp_over_flat_plane_matches_symbolic_oracle(self):
        x, y, z = sp.symbols("x y z")
        g = sp.diag(1, sp.exp(2 * x), sp.exp(2 * x))
        M = build_warped(
            WarpedProductSpec(line_metric((-1, 1)), lambda p: np.exp(p[0]), flat_metric(2, [(-1, 1)] * 2))
        )
        p = [0.3, 0.1, -0.2]
        curv = curvature_tensors(M, DEFAULT_SCHEME, p)
        for v, w in [([1, 0, 0], [0, 1, 0]), ([0, 1, 0], [0, 0, 1]), ([1, 1, 0], [0, 1, 1])]:
            oracle = float(sectional_symbolic(g, [x, y, z], v, w).subs({x: 0.3, y: 0.1, z: -0.2}))
            assert oracle == pytest.approx(-1.0)
            assert sectional_curvature(M, DEFAULT_SCHEME, p, v, w, curv=curv) == pytest.approx(oracle, abs=1e-4)

    def test_doubly_warped_block_form(self):
        spec = DoublyWarpedSpec(line_metric(), lambda p: 2 + np.tanh(p[0]), lambda p: np.cosh(p[0]), -1)
        M = build_doubly_warped(spec)
        x = 0.5
        np.testing.assert_allclose(M([x, 0.1, 0.2]), np.diag([1.0, (2 + np.tanh(x)) ** 2, -np.cosh(x) ** 2]))


class TestLemma1:
    def test_unit_warp_time_residuals_vanish(self):
        spec = StaticProductSpec(hyperbolic_base(), lambda p: 1.0, -1)
        samples = sample_box(build_static(spec).domain, 10, seed=0)
        reps = {r.identity_name: r for r in lemma1_residuals(spec, DEFAULT_SCHEME, samples)}
        for name in ("connection_mixed", "connection_time", "curvature_time"):
            assert reps[name].sup_defect <= 1e-10

    @pytest.mark.parametrize("warp", sorted(WARPS))
    @pytest.mark.parametrize("eps", [1, -1])
    def test_all_identities_hold_over_hyperbolic_base(self, warp, eps):
        spec = StaticProductSpec(hyperbolic_base(), WARPS[warp], eps, (-3.0, 3.0))
        samples = sample_box(build_static(spec).domain, 20, seed=1)
        reps = lemma1_residuals(spec, DEFAULT_SCHEME, samples)
        assert [r.identity_name for r in reps] == list(LEMMA1_NAMES)
        assert all(r.passed for r in reps), [str(r) for r in reps]

    def test_wrong_sign_in_time_curvature_is_detected(self):
        """Flipping the sign of R(X, d_t)d_t = -eps f nabla_X grad f leaves a gap of 2 f cosh(s)."""
        spec = h2_static(1.0, -1)
        M = build_static(spec)
        worst = 0.0
        for s in np.linspace(-1.5, 1.5, 7):
            q = np.array([s, 0.0])
            curv = curvature_tensors(M, DEFAULT_SCHEME, q)
            lhs = apply_riemann(curv.riemann, [1.0, 0.0], [0.0, 1.0], [0.0, 1.0])
            f = np.cosh(s)
            wrong = np.array([+spec.eps * f * np.cosh(s), 0.0])
            gap = float(np.max(np.abs(lhs - wrong)))
            assert gap == pytest.approx(2 * np.cosh(s) ** 2, rel=1e-6)
            worst = max(worst, gap)
        assert worst > 0.1
