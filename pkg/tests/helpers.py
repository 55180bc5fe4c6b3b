"""Metrics shared across test modules."""

import numpy as np

from staticdec import MetricField, ScalarField, StaticProductSpec, build_static
from staticdec.products import flat_metric


def line_metric(domain=(-3.0, 3.0)) -> MetricField:
    return flat_metric(1, [domain], name="line")


def h2_static(r=1.0, eps=-1, domain=(-2.0, 2.0)) -> StaticProductSpec:
    """``ds^2 + eps cosh^2(r s) dt^2`` as a static product over the s-line."""
    f = ScalarField(
        lambda p: np.cosh(r * p[0]),
        lambda p: np.array([r * np.sinh(r * p[0])]),
        lambda p: np.array([[r * r * np.cosh(r * p[0])]]),
        "cosh",
    )
    return StaticProductSpec(line_metric(domain), f, eps, (-3.0, 3.0))


def polar_metric() -> MetricField:
    return MetricField(2, [(0.5, 3.0), (-3.0, 3.0)], lambda p: np.diag([1.0, p[0] ** 2]), name="polar")


def sphere_metric(radius=2.0) -> MetricField:
    rho2 = radius**2
    return MetricField(
        2, [(0.3, 2.8), (-3.0, 3.0)], lambda p: rho2 * np.diag([1.0, np.sin(p[0]) ** 2]), name="sphere"
    )


def static_h2(r=1.0, eps=-1):
    return build_static(h2_static(r, eps))
