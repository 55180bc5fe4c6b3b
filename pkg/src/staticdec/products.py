"""Static, warped and doubly warped product metrics, and the closed-form
connection/curvature identities of a static product as residuals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .differentiation import DEFAULT_SCHEME, DerivativeScheme, gradient_fd
from .errors import GeometryError
from .manifold import (
    MetricField,
    ScalarField,
    VectorField,
    apply_riemann,
    as_scalar,
    christoffel,
    coordinate_field,
    covariant_derivative,
    curvature_tensors,
    scalar_calculus,
)
from .report import DefectReport, map_samples

POSITIVITY_PROBES = 64


def point_metric() -> MetricField:
    """The zero-dimensional chart (used for a trivial base ``N``)."""
    return MetricField(0, np.zeros((0, 2)), lambda p: np.zeros((0, 0)), name="point")


def flat_metric(dim: int, domain, signs=None, name="flat") -> MetricField:
    g = np.diag(np.ones(dim) if signs is None else np.asarray(signs, dtype=float))
    zeros1 = np.zeros((dim,) * 3)
    zeros2 = np.zeros((dim,) * 4)
    return MetricField(dim, domain, lambda p: g.copy(), lambda p: zeros1, lambda p: zeros2, name)


def _probe_points(domain, n=POSITIVITY_PROBES):
    box = np.asarray(domain, dtype=float)
    dim = box.shape[0]
    if dim == 0:
        return [np.zeros(0)]
    rng = np.random.default_rng(12345)
    pts = box[:, 0] + rng.random((n, dim)) * (box[:, 1] - box[:, 0])
    corners = np.array(np.meshgrid(*box, indexing="ij")).reshape(dim, -1).T
    return list(pts) + list(corners) + [box.mean(axis=1)]


def _require_positive(fn, domain, label):
    for q in _probe_points(domain):
        val = fn(q)
        if not (np.isfinite(val) and val > 0):
            raise GeometryError(f"warping function {label} is not positive at {np.asarray(q).tolist()}: {val}")


@dataclass(frozen=True)
class StaticProductSpec:
    """``L x_{eps f} R`` with metric ``g_L + eps f^2 dt^2``; ``t`` is the last coordinate."""

    base: MetricField
    f: ScalarField
    eps: int = -1
    t_domain: tuple = (-5.0, 5.0)

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        object.__setattr__(self, "f", as_scalar(self.f))

    @property
    def dim(self) -> int:
        return self.base.dim + 1


def build_static(spec: StaticProductSpec) -> MetricField:
    _require_positive(spec.f, spec.base.domain, "f")
    n = spec.base.dim
    base, f, eps = spec.base, spec.f, spec.eps

    def fn(q):
        g = np.zeros((n + 1, n + 1))
        g[:n, :n] = base(q[:n])
        g[n, n] = eps * f(q[:n]) ** 2
        return g

    d1 = d2 = None
    if base.d1 is not None and f.grad is not None:

        def d1(q):
            out = np.zeros((n + 1,) * 3)
            out[:n, :n, :n] = base.d1(q[:n])
            out[:n, n, n] = 2 * eps * f(q[:n]) * np.asarray(f.grad(q[:n]))
            return out

    if base.d2 is not None and f.grad is not None and f.hess is not None:

        def d2(q):
            x = q[:n]
            out = np.zeros((n + 1,) * 4)
            out[:n, :n, :n, :n] = base.d2(x)
            df = np.asarray(f.grad(x))
            out[:n, :n, n, n] = 2 * eps * (np.outer(df, df) + f(x) * np.asarray(f.hess(x)))
            return out

    domain = np.vstack([base.domain, np.asarray(spec.t_domain, dtype=float)[None, :]])
    return MetricField(n + 1, domain, fn, d1, d2, name=f"{base.name} x_f R")


@dataclass(frozen=True)
class WarpedProductSpec:
    """``N x_lam F`` with metric ``g_N + lam^2 g_F``; coordinates are ``(x, y)``."""

    base: MetricField
    lam: ScalarField
    fiber: MetricField

    def __post_init__(self):
        object.__setattr__(self, "lam", as_scalar(self.lam))


def build_warped(spec: WarpedProductSpec) -> MetricField:
    _require_positive(spec.lam, spec.base.domain, "lambda")
    n, m = spec.base.dim, spec.fiber.dim
    base, lam, fiber = spec.base, spec.lam, spec.fiber

    def fn(q):
        g = np.zeros((n + m, n + m))
        g[:n, :n] = base(q[:n])
        g[n:, n:] = lam(q[:n]) ** 2 * fiber(q[n:])
        return g

    domain = np.vstack([base.domain, fiber.domain])
    return MetricField(n + m, domain, fn, name=f"{base.name} x_lam {fiber.name}")


@dataclass(frozen=True)
class DoublyWarpedSpec:
    """``N x R^2`` with metric ``g_N + lam^2 ds^2 + eps f^2 dt^2``; coordinates ``(x, s, t)``."""

    base: MetricField
    lam: ScalarField
    f: ScalarField
    eps: int = -1
    s_domain: tuple = (-3.0, 3.0)
    t_domain: tuple = (-3.0, 3.0)

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        object.__setattr__(self, "lam", as_scalar(self.lam))
        object.__setattr__(self, "f", as_scalar(self.f))

    def static_spec(self) -> StaticProductSpec:
        """The same metric read as ``(N x_lam R) x_{eps f} R``."""
        n = self.base.dim
        L = build_static(StaticProductSpec(self.base, self.lam, 1, self.s_domain))
        f = self.f
        return StaticProductSpec(L, ScalarField(lambda p: f(p[:n]), name="f"), self.eps, self.t_domain)


def build_doubly_warped(spec: DoublyWarpedSpec) -> MetricField:
    _require_positive(spec.lam, spec.base.domain, "lambda")
    _require_positive(spec.f, spec.base.domain, "f")
    return build_static(spec.static_spec())


@dataclass(frozen=True)
class Profile1D:
    """A positive function of one variable with optional closed-form derivatives."""

    fn: object
    d1: object = None
    d2: object = None
    name: str = ""

    def __call__(self, x):
        return float(self.fn(float(x)))

    def deriv(self, x, order=1, step=1e-4):
        hook = self.d1 if order == 1 else self.d2
        if hook is not None:
            return float(hook(float(x)))
        x = float(x)
        if order == 1:
            return (self(x + step) - self(x - step)) / (2 * step)
        # Richardson on the three-point second difference
        def d2(h):
            return (self(x + h) - 2 * self(x) + self(x - h)) / h**2

        return (4 * d2(step / 2) - d2(step)) / 3


@dataclass(frozen=True)
class SeparableWarpSpec:
    """``N x_lam (R x_{eps c} R)``: metric ``g_N + lam(x)^2 (ds^2 + eps c(s)^2 dt^2)``.

    Read as a static product, the base is ``L = N x_lam R`` (coordinates
    ``(x, s)``) and the warping function is ``f = lam(x) c(s)``.
    """

    base: MetricField
    lam: ScalarField
    c: Profile1D
    eps: int = -1
    s_domain: tuple = (-3.0, 3.0)
    t_domain: tuple = (-3.0, 3.0)

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise ValueError("eps must be +1 or -1")
        object.__setattr__(self, "lam", as_scalar(self.lam))

    def base_static(self) -> MetricField:
        """The Riemannian base ``L = N x_lam R``."""
        return build_static(StaticProductSpec(self.base, self.lam, 1, self.s_domain))

    def static_spec(self) -> StaticProductSpec:
        n = self.base.dim
        lam, c = self.lam, self.c
        f = ScalarField(lambda p: lam(p[:n]) * c(p[n]), name="lam*c")
        s_lo, s_hi = self.s_domain
        for s in np.linspace(s_lo, s_hi, 33):
            if not c(s) > 0:
                raise GeometryError(f"c is not positive at s={s}")
        return StaticProductSpec(self.base_static(), f, self.eps, self.t_domain)

    def metric(self) -> MetricField:
        return build_static(self.static_spec())


# ---------------------------------------------------------------------------
# closed-form connection/curvature identities of a static product
# ---------------------------------------------------------------------------

LEMMA1_NAMES = (
    "connection_lift",
    "connection_mixed",
    "connection_time",
    "curvature_time",
    "curvature_lift",
    "curvature_mixed",
)


def lift_field(X: VectorField) -> VectorField:
    """Zero-pad a base field to ``L x R``."""
    n = X.dim

    def fn(q):
        return np.append(X(q[:n]), 0.0)

    jac = None
    if X.jac is not None:

        def jac(q):
            J = np.zeros((n + 1, n + 1))
            J[:n, :n] = X.jac(q[:n])
            return J

    return VectorField(n + 1, fn, jac, f"lift({X.name})")


def lift(v) -> np.ndarray:
    return np.append(np.asarray(v, dtype=float), 0.0)


def lemma1_residuals(
    spec: StaticProductSpec,
    S: DerivativeScheme = DEFAULT_SCHEME,
    samples=None,
    fields=None,
    tolerance: float = 1e-4,
) -> list[DefectReport]:
    """Six residuals comparing the engine on ``L x_{eps f} R`` with the closed forms.

    ``fields`` are base vector fields playing ``X, Y, Z``; default is the
    coordinate fields of the base chart.  Every residual is the sup over the
    samples (points ``(p, t)`` of the product) and over field choices of the
    max-abs component difference.
    """
    M = build_static(spec)
    L = spec.base
    n = L.dim
    eps = spec.eps
    fields = list(fields) if fields is not None else [coordinate_field(n, i) for i in range(n)]
    lifted = [lift_field(X) for X in fields]
    dt = coordinate_field(n + 1, n)

    def at_sample(q):
        q = np.asarray(q, dtype=float)
        p = q[:n]
        curv = curvature_tensors(M, S, q)
        curv_L = curvature_tensors(L, S, p) if n else None
        gamma_L = christoffel(L, S, p) if n else None
        fval = spec.f(p)
        sc = scalar_calculus(L, S, spec.f, p, gamma_L) if n else None
        g_M = curv.metric
        e_t = np.zeros(n + 1)
        e_t[n] = 1.0
        out = dict.fromkeys(LEMMA1_NAMES, 0.0)

        def bump(key, diff):
            out[key] = max(out[key], float(np.max(np.abs(diff))) if np.size(diff) else 0.0)

        # nabla_{dt} dt = -eps f grad f
        lhs = covariant_derivative(M, S, dt, q, e_t, curv.gamma)
        grad_f = sc.gradient if n else np.zeros(0)
        bump("connection_time", lhs - lift(-eps * fval * grad_f))
        for X, Xt in zip(fields, lifted):
            xv = X(p)
            xq = Xt(q)
            Xf = float(sc.differential @ xv) if n else 0.0
            # nabla_X dt and nabla_dt X against (X(f)/f) dt
            rhs = (Xf / fval) * e_t
            bump("connection_mixed", covariant_derivative(M, S, dt, q, xq, curv.gamma) - rhs)
            bump("connection_mixed", covariant_derivative(M, S, Xt, q, e_t, curv.gamma) - rhs)
            # R(X, dt)dt = -eps f nabla_X grad f
            nabla_x_grad = curv_L.inverse @ sc.hessian @ xv
            bump("curvature_time", apply_riemann(curv.riemann, xq, e_t, e_t) - lift(-eps * fval * nabla_x_grad))
            for Y, Yt in zip(fields, lifted):
                yv = Y(p)
                yq = Yt(q)
                base_nabla = covariant_derivative(L, S, Y, p, xv, gamma_L)
                bump("connection_lift", covariant_derivative(M, S, Yt, q, xq, curv.gamma) - lift(base_nabla))
                bump("curvature_mixed", apply_riemann(curv.riemann, xq, yq, e_t))
                for Z, Zt in zip(fields, lifted):
                    zv = Z(p)
                    zq = Zt(q)
                    # compare lowered: g(R(X,Y)Z, .) on M vs g_L(R^L(X,Y)Z, .) padded
                    lhs_low = g_M @ apply_riemann(curv.riemann, xq, yq, zq)
                    rhs_low = lift(curv_L.metric @ apply_riemann(curv_L.riemann, xv, yv, zv))
                    bump("curvature_lift", lhs_low - rhs_low)
        return out

    if samples is None:
        from .report import sample_box

        samples = sample_box(M.domain, 100, seed=0)
    rows = map_samples(at_sample, samples)
    return [
        DefectReport.from_samples(name, samples, [row[name] for row in rows], tolerance)
        for name in LEMMA1_NAMES
    ]


def t_slice_metric(M: MetricField, t: float) -> MetricField:
    """Restriction of a static product metric to ``L x {t}``."""
    n = M.dim - 1
    return MetricField(n, M.domain[:n], lambda p: M(np.append(p, t))[:n, :n], name=f"{M.name}|t={t}")


def warp_differential(f: ScalarField, p, domain=None, S: DerivativeScheme = DEFAULT_SCHEME):
    if f.grad is not None:
        return np.asarray(f.grad(np.asarray(p, dtype=float)), dtype=float)
    return gradient_fd(f, p, domain, S.step, S.richardson)
