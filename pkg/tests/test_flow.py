import numpy as np
import pytest
from scipy.integrate import solve_ivp

from staticdec import (
    FlowConfig,
    FlowError,
    GeometryError,
    Leaf,
    coordinate_field,
    integrate_flow,
    verify_flow_decomposition,
)
from staticdec.catalog import CatalogSpace, StaticFieldFamily, catalog_field, catalog_metric
from staticdec.flow import flow_samples, step_halving_gap
from staticdec.products import flat_metric

H2_LORENTZ = CatalogSpace("H2eps", eps=-1, r=1.0)
FAMILY2 = StaticFieldFamily("Prop45_2", alpha=1.0, beta=0.0, gamma=0.0)


def doubly_warped():
    N = flat_metric(1, [(-1, 1)], name="N")
    return CatalogSpace("DoublyWarped", eps=-1, N=N, lam=lambda p: np.exp(p[0] / 2), f=lambda p: np.cosh(p[0]))


class TestIntegrateFlow:
    def test_time_field_translates_time(self):
        M = catalog_metric(H2_LORENTZ)
        out = integrate_flow(M, coordinate_field(2, 1), [0.3, -0.2], 0.7)
        np.testing.assert_allclose(out, [0.3, 0.5], atol=1e-13)

    def test_space_field_translates_space(self):
        M = catalog_metric(H2_LORENTZ)
        out = integrate_flow(M, coordinate_field(2, 0), [0.3, -0.2], -0.4)
        np.testing.assert_allclose(out, [-0.1, -0.2], atol=1e-13)

    def test_family2_against_independent_integrator(self):
        M = catalog_metric(H2_LORENTZ)
        V = catalog_field(H2_LORENTZ, FAMILY2)
        p = np.array([0.0, np.pi / 4])
        ref = solve_ivp(lambda _, y: V(y), (0, 0.5), p, rtol=1e-12, atol=1e-12).y[:, -1]
        np.testing.assert_allclose(integrate_flow(M, V, p, 0.5), ref, atol=1e-9)

    def test_step_halving_certificate(self):
        M = catalog_metric(H2_LORENTZ)
        gap = step_halving_gap(M, catalog_field(H2_LORENTZ, FAMILY2), [0.0, np.pi / 4], 0.5)
        assert gap <= 1e-6

    def test_leaving_the_box_is_an_error(self):
        M = catalog_metric(H2_LORENTZ)
        with pytest.raises(FlowError):
            integrate_flow(M, coordinate_field(2, 0), [2.5, 0.0], 1.0)

    def test_sampled_times_match_direct_runs(self):
        M = catalog_metric(H2_LORENTZ)
        V = catalog_field(H2_LORENTZ, FAMILY2)
        p = [0.2, 1.4]
        taus = [-0.5, 0.0, 0.25, 0.5]
        out = flow_samples(M, V, p, taus)
        for tau, x in zip(taus, out):
            np.testing.assert_allclose(x, integrate_flow(M, V, p, tau), atol=1e-12)

    def test_nonpositive_step_is_rejected(self):
        with pytest.raises(ValueError):
            FlowConfig(step=0.0)


class TestFlowDecomposition:
    def test_time_field_on_static_product(self):
        M = catalog_metric(H2_LORENTZ)
        leaf = Leaf(lambda y: np.array([y[0], 0.0]), np.linspace(-1, 1, 4))
        pull, norm = verify_flow_decomposition(M, coordinate_field(2, 1), leaf, FlowConfig(n_times=3))
        assert pull.sup_defect <= 1e-8 and norm.sup_defect <= 1e-12

    def test_space_field_on_doubly_warped_space(self):
        space = doubly_warped()
        M = catalog_metric(space)
        leaf = Leaf(lambda y: np.array([y[0], 0.0, y[1]]), np.array([[x, t] for x in (-0.5, 0.5) for t in (-0.5, 0.5)]))
        pull, norm = verify_flow_decomposition(M, coordinate_field(3, 1), leaf, FlowConfig(n_times=3))
        assert pull.passed and norm.passed
        assert pull.sup_defect <= 1e-8

    def test_family2_along_its_orthogonal_curve(self):
        M = catalog_metric(H2_LORENTZ)
        V = catalog_field(H2_LORENTZ, FAMILY2)
        leaf = Leaf(lambda y: np.array([0.0, y[0]]), np.linspace(np.pi / 2 - 0.5, np.pi / 2 + 0.5, 3))
        cfg = FlowConfig(step=1e-3, max_time=0.5, n_times=3)
        pull, norm = verify_flow_decomposition(M, V, leaf, cfg)
        assert pull.sup_defect <= 1e-4 and norm.sup_defect <= 1e-4
        pull2, norm2 = verify_flow_decomposition(M, V, leaf, cfg.halved())
        assert abs(pull.sup_defect - pull2.sup_defect) <= 1e-6
        assert abs(norm.sup_defect - norm2.sup_defect) <= 1e-6

    def test_leaf_tangent_to_the_field_is_rejected(self):
        M = catalog_metric(H2_LORENTZ)
        leaf = Leaf(lambda y: np.array([y[0], 0.0]), np.linspace(-1, 1, 3))
        with pytest.raises(GeometryError):
            verify_flow_decomposition(M, coordinate_field(2, 0), leaf)
