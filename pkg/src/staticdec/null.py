"""Lightlike sectional curvature of degenerate planes in Lorentzian charts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .differentiation import DEFAULT_SCHEME, DerivativeScheme
from .errors import DegeneratePlaneError, GeometryError, SignatureError
from .manifold import (
    Curvature,
    MetricField,
    apply_riemann,
    curvature_tensors,
    index_of_negativity,
    orthonormal_frame,
    scalar_calculus,
    sectional_curvature,
)
from .products import SeparableWarpSpec, StaticProductSpec, build_static

NULL_TOL = 1e-10
UNIT_TOL = 1e-8
MAX_RETRIES = 100


@dataclass(frozen=True)
class DegeneratePlane:
    """``span(v, u)`` at ``base`` with ``u`` lightlike and ``v`` spacelike, ``g(u, v) = 0``."""

    base: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("base", "u", "v"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.base.shape == self.u.shape == self.v.shape):
            raise GeometryError("plane vectors must match the chart dimension")

    def validate(self, g: np.ndarray) -> None:
        """Raise unless the invariants hold for the metric ``g`` at ``base``.

        ``g(u, u)`` and ``g(u, v)`` are compared against ``1e-10`` times the
        coordinate scale of the vectors so rescaling ``u`` does not change the verdict.
        """
        u, v = self.u, self.v
        gs = max(1.0, float(np.max(np.abs(g))))
        nu, nv = float(np.linalg.norm(u)), float(np.linalg.norm(v))
        if nu == 0 or nv == 0:
            raise DegeneratePlaneError("plane vectors must be nonzero")
        vv = float(v @ g @ v)
        if not vv > 0:
            raise DegeneratePlaneError(f"v is not spacelike: g(v, v) = {vv:.3e}")
        uu = float(u @ g @ u)
        if abs(uu) > NULL_TOL * gs * nu * nu:
            raise DegeneratePlaneError(f"u is not lightlike: g(u, u) = {uu:.3e}")
        uv = float(u @ g @ v)
        if abs(uv) > NULL_TOL * gs * nu * nv:
            raise DegeneratePlaneError(f"u is not orthogonal to v: g(u, v) = {uv:.3e}")

    def scaled(self, c: float) -> "DegeneratePlane":
        return DegeneratePlane(self.base, c * self.u, self.v)


def require_lorentzian(M: MetricField, g: np.ndarray) -> None:
    if M.dim < 3:
        raise SignatureError(f"degenerate-plane curvature needs dim >= 3, got {M.dim}")
    if index_of_negativity(g) != 1:
        raise SignatureError(f"metric {M.name!r} is not Lorentzian (index {index_of_negativity(g)})")


def lightlike_sectional(
    M: MetricField, S: DerivativeScheme = DEFAULT_SCHEME, plane: DegeneratePlane = None, curv: Curvature | None = None
) -> float:
    """``K_u = g(R(v, u)u, v) / g(v, v)``; scales as ``c^2`` under ``u -> c u``."""
    curv = curv or curvature_tensors(M, S, plane.base)
    g = curv.metric
    require_lorentzian(M, g)
    plane.validate(g)
    u, v = plane.u, plane.v
    return float(apply_riemann(curv.riemann, v, u, u) @ g @ v / (v @ g @ v))


# ---------------------------------------------------------------------------
# static products: the closed form for planes spanned by v and w + d_t / f
# ---------------------------------------------------------------------------


def _base_point(spec: StaticProductSpec, q):
    q = np.asarray(q, dtype=float)
    n = spec.base.dim
    if q.shape == (n,):
        return q, np.append(q, 0.0)
    if q.shape == (n + 1,):
        return q[:n], q
    raise GeometryError(f"point must have {n} or {n + 1} coordinates")


def static_null_plane(spec: StaticProductSpec, q, v, w) -> DegeneratePlane:
    """``span(v, w + (1/f) d_t)`` for base vectors ``v``, ``w`` (lifted by zero padding)."""
    p, q = _base_point(spec, q)
    fv = spec.f(p)
    u = np.append(np.asarray(w, dtype=float), 1.0 / fv)
    return DegeneratePlane(q, u, np.append(np.asarray(v, dtype=float), 0.0))


def curluz_sides(spec: StaticProductSpec, S: DerivativeScheme, q, v, w) -> tuple[float, float]:
    """``(K_u, K^L(v, w) + Hess f(v, v) / f)`` with ``u = w + (1/f) d_t``."""
    if spec.eps != -1:
        raise SignatureError("the closed form needs a Lorentzian static product (eps = -1)")
    L = spec.base
    if L.dim < 2:
        raise GeometryError("the closed form needs dim L >= 2")
    p, q = _base_point(spec, q)
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    cL = curvature_tensors(L, S, p)
    gL = cL.metric
    if abs(v @ gL @ v - 1) > UNIT_TOL or abs(w @ gL @ w - 1) > UNIT_TOL or abs(v @ gL @ w) > UNIT_TOL:
        raise GeometryError("v and w must be orthonormal in the base metric")
    M = build_static(spec)
    plane = static_null_plane(spec, q, v, w)
    lhs = lightlike_sectional(M, S, plane)
    kL = sectional_curvature(L, S, p, v, w, curv=cL)
    hess = scalar_calculus(L, S, spec.f, p, cL.gamma).hessian
    rhs = kL + float(v @ hess @ v) / spec.f(p)
    return lhs, rhs


def curluz_residual(spec: StaticProductSpec, S: DerivativeScheme = DEFAULT_SCHEME, q=None, v=None, w=None) -> float:
    lhs, rhs = curluz_sides(spec, S, q, v, w)
    return abs(lhs - rhs)


def random_orthonormal_pair(g: np.ndarray, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Two random ``g``-orthonormal vectors of a Riemannian metric ``g``."""
    n = g.shape[0]
    for _ in range(MAX_RETRIES):
        a, b = rng.standard_normal(n), rng.standard_normal(n)
        v = a / np.sqrt(a @ g @ a)
        b = b - (b @ g @ v) * v
        nb = b @ g @ b
        if nb > 1e-8:
            return v, b / np.sqrt(nb)
    raise DegeneratePlaneError("could not draw an orthonormal pair")


def flat_null_plane(spec: SeparableWarpSpec, q, v_N) -> DegeneratePlane:
    """Plane ``span(v, d_s / lam - d_t / f)`` on ``N x_lam (R x_{eps c} R)``, ``v`` unit in ``N``.

    Its lightlike sectional curvature vanishes identically.  ``q`` is a point
    ``(x, s)`` of the base or ``(x, s, t)`` of the product.
    """
    n = spec.base.dim
    q = np.asarray(q, dtype=float)
    if q.shape == (n + 1,):
        q = np.append(q, 0.0)
    elif q.shape != (n + 2,):
        raise GeometryError(f"point must have {n + 1} or {n + 2} coordinates")
    x, s = q[:n], q[n]
    lv = spec.lam(x)
    fv = lv * spec.c(s)
    v_N = np.asarray(v_N, dtype=float)
    gN = spec.base(x)
    if abs(v_N @ gN @ v_N - 1) > UNIT_TOL:
        raise GeometryError("v must be a unit vector of N")
    u = np.zeros(n + 2)
    u[n] = 1.0 / lv
    u[n + 1] = -1.0 / fv
    return DegeneratePlane(q, u, np.concatenate([v_N, [0.0, 0.0]]))


# ---------------------------------------------------------------------------
# scans
# ---------------------------------------------------------------------------


class NullScan(NamedTuple):
    """Statistics of ``K_u`` over a family of degenerate planes.

    ``u = w - e0`` with ``e0`` the unit timelike frame vector, so
    ``g(u, e0) = 1``.  ``min_abs_raw`` uses ``u`` rescaled to unit coordinate norm.
    """

    min_abs: float
    min: float
    max: float
    min_abs_raw: float
    n_planes: int


def lorentz_frame(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(e0, spacelike)``: unit timelike vector and the spacelike columns of an orthonormal frame.

    Diagonal metrics use the scaled coordinate axes so coordinate-adapted
    planes are members of the scan family.
    """
    off = g - np.diag(np.diag(g))
    if np.max(np.abs(off)) <= 1e-14 * max(1.0, float(np.max(np.abs(g)))):
        d = np.diag(g)
        E = np.diag(1.0 / np.sqrt(np.abs(d)))
        signs = np.sign(d)
    else:
        E, signs = orthonormal_frame(g)
    t_idx = np.flatnonzero(signs < 0)
    if t_idx.size != 1:
        raise SignatureError("metric is not Lorentzian")
    return E[:, t_idx[0]], E[:, signs > 0]


def null_curvature_scan(
    M: MetricField, S: DerivativeScheme = DEFAULT_SCHEME, p=None, n_planes: int = 100, rng_seed: int = 0
) -> NullScan:
    """``K_u`` over every ordered pair of spacelike frame axes plus ``n_planes`` random planes."""
    if n_planes < 1:
        raise ValueError("n_planes must be >= 1")
    curv = curvature_tensors(M, S, p)
    g = curv.metric
    require_lorentzian(M, g)
    e0, spacelike = lorentz_frame(g)
    k = spacelike.shape[1]
    pairs = [(spacelike[:, i], spacelike[:, j]) for i in range(k) for j in range(k) if i != j]
    rng = np.random.default_rng(rng_seed)
    for _ in range(n_planes):
        a, b = random_orthonormal_pair(np.eye(k), rng)
        pairs.append((spacelike @ a, spacelike @ b))
    vals, raw = [], []
    base = np.asarray(p, dtype=float)
    for w, v in pairs:
        u = w - e0
        K = lightlike_sectional(M, S, DegeneratePlane(base, u, v), curv=curv)
        vals.append(K)
        raw.append(K / float(u @ u))
    vals = np.array(vals)
    return NullScan(
        float(np.min(np.abs(vals))), float(np.min(vals)), float(np.max(vals)), float(np.min(np.abs(raw))), len(vals)
    )
