"""Chart-based tensor engine.

Conventions used throughout the package:

* ``gamma[k, i, j]`` is the Christoffel symbol with upper index ``k``.
* ``riemann[l, i, j, k]`` is the ``l``-th component of ``R(d_i, d_j) d_k`` with
  ``R(X, Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z``.
* ``ricci[j, k] = riemann[i, i, j, k]`` (trace of ``X -> R(X, Y)Z``), so round
  spheres have positive Ricci curvature and the sectional curvature is
  ``K(v, w) = g(R(v, w)w, v) / (g(v, v)g(w, w) - g(v, w)^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .differentiation import (
    DEFAULT_SCHEME,
    DerivativeScheme,
    as_domain,
    check_point,
    gradient_fd,
    hessian_fd,
)
from .errors import DegenerateMetricError, DegeneratePlaneError, GeometryError


@dataclass(frozen=True)
class ScalarField:
    """A real function on a chart with optional analytic gradient and Hessian."""

    fn: Callable
    grad: Callable | None = None
    hess: Callable | None = None
    name: str = ""

    def __call__(self, p):
        return float(self.fn(np.asarray(p, dtype=float)))


def as_scalar(h) -> ScalarField:
    return h if isinstance(h, ScalarField) else ScalarField(h)


@dataclass(frozen=True)
class VectorField:
    """A vector field on a chart.

    ``jac(p)`` (optional) returns ``J[k, i] = d_i V^k``.
    """

    dim: int
    fn: Callable
    jac: Callable | None = None
    name: str = ""

    def __call__(self, p):
        v = np.asarray(self.fn(np.asarray(p, dtype=float)), dtype=float)
        if v.shape != (self.dim,):
            raise GeometryError(f"field {self.name!r} returned shape {v.shape}, expected ({self.dim},)")
        return v

    def jacobian(self, p, scheme: DerivativeScheme = DEFAULT_SCHEME, domain=None) -> np.ndarray:
        if self.jac is not None:
            return np.asarray(self.jac(np.asarray(p, dtype=float)), dtype=float)
        return gradient_fd(self, p, domain, scheme.step, scheme.richardson).T

    def __add__(self, other: "VectorField") -> "VectorField":
        if other.dim != self.dim:
            raise GeometryError("cannot add fields of different dimension")
        jac = None
        if self.jac is not None and other.jac is not None:
            jac = lambda p: self.jac(p) + other.jac(p)  # noqa: E731
        return VectorField(self.dim, lambda p: self(p) + other(p), jac, f"{self.name}+{other.name}")

    def scaled(self, c: float) -> "VectorField":
        jac = None if self.jac is None else (lambda p: c * np.asarray(self.jac(p)))
        return VectorField(self.dim, lambda p: c * self(p), jac, f"{c}*{self.name}")


def coordinate_field(dim: int, axis: int) -> VectorField:
    e = np.zeros(dim)
    e[axis] = 1.0
    return VectorField(dim, lambda p: e.copy(), lambda p: np.zeros((dim, dim)), f"d{axis}")


@dataclass(frozen=True)
class MetricField:
    """A pseudo-Riemannian metric on a single coordinate box.

    ``d1(p)[k, i, j] = d_k g_ij`` and ``d2(p)[k, l, i, j] = d_k d_l g_ij`` are
    optional analytic hooks; without them derivatives are taken numerically.
    """

    dim: int
    domain: np.ndarray
    fn: Callable
    d1: Callable | None = None
    d2: Callable | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "domain", as_domain(self.domain, self.dim))

    def __call__(self, p) -> np.ndarray:
        return np.asarray(self.fn(np.asarray(p, dtype=float)), dtype=float).reshape(self.dim, self.dim)

    def check(self, p) -> np.ndarray:
        return check_point(p, self.domain)

    def first_derivatives(self, p, scheme: DerivativeScheme = DEFAULT_SCHEME) -> np.ndarray:
        if self.d1 is not None:
            return np.asarray(self.d1(p), dtype=float)
        return gradient_fd(self, p, self.domain, scheme.step, scheme.richardson)

    def second_derivatives(self, p, scheme: DerivativeScheme = DEFAULT_SCHEME) -> np.ndarray:
        if self.d2 is not None:
            return np.asarray(self.d2(p), dtype=float)
        return hessian_fd(self, p, self.domain, scheme.step2, scheme.richardson)


def metric_at(M: MetricField, p, scheme: DerivativeScheme = DEFAULT_SCHEME):
    """Validated ``(g, g^{-1})`` at ``p``."""
    p = M.check(p)
    g = M(p)
    scale = max(1.0, float(np.max(np.abs(g))))
    if not np.allclose(g, g.T, rtol=0.0, atol=1e-12 * scale):
        raise GeometryError(f"metric {M.name!r} is not symmetric at {p.tolist()}")
    det = np.linalg.det(g) if M.dim else 1.0
    if abs(det) <= scheme.degeneracy_floor:
        raise DegenerateMetricError(f"|det g| = {abs(det):.3e} at {p.tolist()}")
    return g, np.linalg.inv(g)


def index_of_negativity(g: np.ndarray) -> int:
    return int(np.sum(np.linalg.eigvalsh(g) < 0))


def orthonormal_frame(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Columns ``E[:, a]`` with ``E.T @ g @ E = diag(signs)``; timelike columns first."""
    lam, Q = np.linalg.eigh(g)
    E = Q / np.sqrt(np.abs(lam))
    return E, np.sign(lam)


def _christoffel_from(ginv, dg):
    # S[i, j, l] = d_i g_jl + d_j g_il - d_l g_ij
    S = dg + np.transpose(dg, (1, 0, 2)) - np.transpose(dg, (1, 2, 0))
    return 0.5 * np.einsum("kl,ijl->kij", ginv, S), S


def christoffel(M: MetricField, S: DerivativeScheme = DEFAULT_SCHEME, p=None) -> np.ndarray:
    """Levi-Civita symbols ``gamma[k, i, j]`` at ``p``."""
    g, ginv = metric_at(M, p, S)
    dg = M.first_derivatives(np.asarray(p, dtype=float), S)
    return _christoffel_from(ginv, dg)[0]


class Curvature(NamedTuple):
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: float
    metric: np.ndarray
    inverse: np.ndarray
    gamma: np.ndarray


def curvature_tensors(M: MetricField, S: DerivativeScheme = DEFAULT_SCHEME, p=None) -> Curvature:
    """Riemann, Ricci and scalar curvature at ``p`` (index layout in module docstring)."""
    g, ginv = metric_at(M, p, S)
    p = np.asarray(p, dtype=float)
    dg = M.first_derivatives(p, S)
    d2g = M.second_derivatives(p, S)
    gamma, Sym = _christoffel_from(ginv, dg)
    # d_m g^{kl} = -g^{ka} d_m g_ab g^{bl}
    dginv = -np.einsum("ka,mab,bl->mkl", ginv, dg, ginv)
    dSym = (
        d2g
        + np.transpose(d2g, (0, 2, 1, 3))
        - np.transpose(d2g, (0, 2, 3, 1))
    )
    # d2g[m, i, j, l] = d_m d_i g_jl, so dSym[m, i, j, l] = d_m S[i, j, l]
    dgamma = 0.5 * (np.einsum("mkl,ijl->mkij", dginv, Sym) + np.einsum("kl,mijl->mkij", ginv, dSym))
    riemann = (
        np.einsum("iljk->lijk", dgamma)
        - np.einsum("jlik->lijk", dgamma)
        + np.einsum("lim,mjk->lijk", gamma, gamma)
        - np.einsum("ljm,mik->lijk", gamma, gamma)
    )
    ricci = np.einsum("iijk->jk", riemann)
    scalar = float(np.einsum("jk,jk->", ginv, ricci))
    return Curvature(riemann, ricci, scalar, g, ginv, gamma)


def apply_riemann(riemann: np.ndarray, x, y, z) -> np.ndarray:
    """Components of ``R(x, y)z``."""
    return np.einsum("lijk,i,j,k->l", riemann, x, y, z)


def sectional_curvature(M, S=DEFAULT_SCHEME, p=None, v=None, w=None, curv: Curvature | None = None) -> float:
    curv = curv or curvature_tensors(M, S, p)
    g = curv.metric
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    q = (v @ g @ v) * (w @ g @ w) - (v @ g @ w) ** 2
    if abs(q) <= S.degeneracy_floor:
        raise DegeneratePlaneError(
            f"plane denominator {q:.3e} below floor; use lightlike_sectional for degenerate planes"
        )
    return float(apply_riemann(curv.riemann, v, w, w) @ g @ v / q)


def gaussian_curvature(M: MetricField, S: DerivativeScheme = DEFAULT_SCHEME, p=None) -> float:
    """Sectional curvature of the coordinate plane of a surface."""
    if M.dim != 2:
        raise GeometryError("gaussian_curvature needs a two-dimensional chart")
    return sectional_curvature(M, S, p, [1.0, 0.0], [0.0, 1.0])


def sectional_scan(M, S=DEFAULT_SCHEME, p=None, n_planes: int = 100, rng_seed: int = 0) -> tuple[float, float]:
    """(min K, max K) over ``n_planes`` random nondegenerate planes at ``p``."""
    if n_planes < 1:
        raise ValueError("n_planes must be >= 1")
    curv = curvature_tensors(M, S, p)
    rng = np.random.default_rng(rng_seed)
    values = []
    attempts = 0
    while len(values) < n_planes:
        attempts += 1
        if attempts > 100 * n_planes:
            raise DegeneratePlaneError("too many degenerate random planes")
        v = rng.standard_normal(M.dim)
        w = rng.standard_normal(M.dim)
        v /= np.linalg.norm(v)
        w /= np.linalg.norm(w)
        try:
            values.append(sectional_curvature(M, S, p, v, w, curv=curv))
        except DegeneratePlaneError:
            continue
    return float(min(values)), float(max(values))


def covariant_jacobian(M: MetricField, S: DerivativeScheme, V: VectorField, p, gamma=None) -> np.ndarray:
    """``C[i, k] = (nabla_{d_i} V)^k``."""
    p = M.check(p)
    if gamma is None:
        gamma = christoffel(M, S, p)
    J = V.jacobian(p, S, M.domain)
    return J.T + np.einsum("kij,j->ik", gamma, V(p))


def covariant_derivative(M: MetricField, S: DerivativeScheme, V: VectorField, p, x, gamma=None) -> np.ndarray:
    """``nabla_x V`` at ``p``."""
    return np.asarray(x, dtype=float) @ covariant_jacobian(M, S, V, p, gamma)


class ScalarDerivatives(NamedTuple):
    gradient: np.ndarray
    hessian: np.ndarray
    laplacian: float
    differential: np.ndarray


def scalar_calculus(M: MetricField, S: DerivativeScheme, h, p, gamma=None) -> ScalarDerivatives:
    """Gradient, covariant Hessian and Laplacian of a scalar function."""
    h = as_scalar(h)
    g, ginv = metric_at(M, p, S)
    p = np.asarray(p, dtype=float)
    if gamma is None:
        gamma = christoffel(M, S, p)
    if h.grad is not None:
        dh = np.asarray(h.grad(p), dtype=float)
    else:
        dh = gradient_fd(h, p, M.domain, S.step, S.richardson)
    if h.hess is not None:
        d2h = np.asarray(h.hess(p), dtype=float)
    else:
        d2h = hessian_fd(h, p, M.domain, S.step2, S.richardson)
    hess = d2h - np.einsum("kij,k->ij", gamma, dh)
    hess = 0.5 * (hess + hess.T)
    return ScalarDerivatives(ginv @ dh, hess, float(np.einsum("ij,ij->", ginv, hess)), dh)


def lie_bracket(V: VectorField, W: VectorField, p, S: DerivativeScheme = DEFAULT_SCHEME, domain=None) -> np.ndarray:
    """``[V, W]^k = V^i d_i W^k - W^i d_i V^k``."""
    p = np.asarray(p, dtype=float)
    if domain is not None:
        check_point(p, as_domain(domain, V.dim))
    JV = V.jacobian(p, S, domain)
    JW = W.jacobian(p, S, domain)
    return JW @ V(p) - JV @ W(p)

