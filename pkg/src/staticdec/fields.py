"""Killing and irrotational checks, projections of a field on a static product
onto its base, and the per-slice dichotomy and proportionality scans."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .differentiation import DEFAULT_SCHEME, DerivativeScheme, gradient_fd
from .errors import GeometryError
from .manifold import (
    MetricField,
    VectorField,
    covariant_jacobian,
    metric_at,
)
from .products import StaticProductSpec, build_static, warp_differential
from .report import DefectReport, map_samples

T_STEP = 1e-5
ZERO_TOL = 1e-7
EXCLUSION_TOL = 1e-4
POSITIVITY_FLOOR = 1e-12


def killing_matrix(M: MetricField, S: DerivativeScheme, V: VectorField, p) -> np.ndarray:
    """``K[i, j] = g(nabla_i V, d_j) + g(nabla_j V, d_i)`` (the Lie derivative of g)."""
    g, _ = metric_at(M, p, S)
    C = covariant_jacobian(M, S, V, p)
    A = C @ g
    return A + A.T


def killing_defect(M, S=DEFAULT_SCHEME, V=None, samples=(), tolerance=1e-5) -> DefectReport:
    def local(p):
        return float(np.max(np.abs(killing_matrix(M, S, V, p))))

    return DefectReport.from_samples("killing", samples, map_samples(local, samples), tolerance)


def _one_form(M, V):
    return lambda p: M(p) @ V(p)


def frobenius_components(M: MetricField, S: DerivativeScheme, V: VectorField, p) -> tuple[np.ndarray, np.ndarray]:
    """``(omega, (omega ^ d omega)_{ijk})`` for ``omega = g(V, .)``."""
    p = M.check(p)
    omega_fn = _one_form(M, V)
    omega = omega_fn(p)
    d_omega_partial = gradient_fd(omega_fn, p, M.domain, S.step, S.richardson)  # [i, k] = d_i omega_k
    d_omega = d_omega_partial - d_omega_partial.T  # (d omega)_{ij} = d_i w_j - d_j w_i
    w3 = (
        np.einsum("i,jk->ijk", omega, d_omega)
        + np.einsum("j,ki->ijk", omega, d_omega)
        + np.einsum("k,ij->ijk", omega, d_omega)
    )
    return omega, w3


def frobenius_defect(M, S=DEFAULT_SCHEME, V=None, samples=(), tolerance=1e-6) -> DefectReport:
    """Sup of ``|omega ^ d omega|`` normalized by ``|omega|^2`` (Euclidean component norm).

    The normalization makes the value invariant under ``V -> phi V`` for a
    positive function ``phi``.  Raw maxima are kept in ``extra['raw']``.  In
    dimension <= 2 every field is irrotational and the defect is 0.
    """
    samples = list(samples)
    if M.dim <= 2:
        return DefectReport.from_samples(
            "frobenius", samples, [0.0] * len(samples), tolerance, note="dim <= 2: irrotational"
        )
    raw = []
    normalized = []

    def local(p):
        omega, w3 = frobenius_components(M, S, V, p)
        r = float(np.max(np.abs(w3)))
        n2 = float(omega @ omega)
        return r, (r / n2 if n2 > 0 else np.inf if r > 0 else 0.0)

    for r, q in map_samples(local, samples):
        raw.append(r)
        normalized.append(q)
    return DefectReport.from_samples(
        "frobenius", samples, normalized, tolerance, extra={"raw": max(raw) if raw else 0.0}
    )


# ---------------------------------------------------------------------------
# projections onto the base of a static product
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSlice:
    """``V = a d_t + lift(V^t)`` restricted to the slice ``L x {t}``."""

    t: float
    a: Callable
    Vt: VectorField
    a_t: Callable
    dVt_dt: Callable

    def reconstruct(self, p) -> np.ndarray:
        return np.append(self.Vt(p), self.a(p))


class FieldDecomposition:
    """Split of a field on ``L x_{eps f} R`` into its ``d_t`` part and its base part."""

    def __init__(self, spec: StaticProductSpec, V: VectorField, t_step: float = T_STEP):
        self.spec = spec
        self.V = V
        self.M = build_static(spec)
        self.n = spec.base.dim
        self.t_step = t_step
        if V.dim != self.n + 1:
            raise GeometryError(f"field dimension {V.dim} does not match product dimension {self.n + 1}")

    def _q(self, p, t):
        return np.append(np.asarray(p, dtype=float), t)

    def a(self, p, t) -> float:
        q = self._q(p, t)
        fval = self.spec.f(q[: self.n])
        if fval < POSITIVITY_FLOOR:
            raise GeometryError(f"warping function below positivity floor at {q.tolist()}")
        g_row = self.M(q)[self.n]
        return float(g_row @ self.V(q)) / (self.spec.eps * fval**2)

    def base_part(self, p, t) -> np.ndarray:
        return self.V(self._q(p, t))[: self.n]

    def a_t(self, p, t) -> float:
        h = self.t_step
        return (self.a(p, t + h) - self.a(p, t - h)) / (2 * h)

    def dVt_dt(self, p, t) -> np.ndarray:
        h = self.t_step
        return (self.base_part(p, t + h) - self.base_part(p, t - h)) / (2 * h)

    def at(self, t: float) -> FieldSlice:
        Vt = VectorField(self.n, lambda p: self.base_part(p, t), name=f"V^{t}")
        return FieldSlice(
            float(t),
            lambda p: self.a(p, t),
            Vt,
            lambda p: self.a_t(p, t),
            lambda p: self.dVt_dt(p, t),
        )


def project_field(spec: StaticProductSpec, V: VectorField, t: float) -> FieldSlice:
    return FieldDecomposition(spec, V).at(t)


def reconstruction_defect(spec, V, points) -> float:
    dec = FieldDecomposition(spec, V)
    worst = 0.0
    for q in points:
        q = np.asarray(q, dtype=float)
        sl = dec.at(q[-1])
        worst = max(worst, float(np.max(np.abs(sl.reconstruct(q[:-1]) - V(q)))))
    return worst


def _orthonormal_complement(g: np.ndarray, v: np.ndarray) -> list[np.ndarray]:
    """Orthonormal basis (in ``g``) of the ``g``-orthogonal complement of ``v``."""
    n = g.shape[0]
    basis = [v / np.sqrt(v @ g @ v)]
    out = []
    for e in np.eye(n):
        w = e.copy()
        for b in basis:
            w = w - (b @ g @ w) * b
        norm2 = w @ g @ w
        if norm2 > 1e-12:
            w = w / np.sqrt(norm2)
            basis.append(w)
            out.append(w)
    return out


def projection_residuals(
    spec: StaticProductSpec,
    V: VectorField,
    t_samples,
    base_samples,
    S: DerivativeScheme = DEFAULT_SCHEME,
    tolerance: float = 1e-4,
) -> tuple[DefectReport, DefectReport, DefectReport]:
    """Residuals of the Killing projection equations and the static projection equation.

    ``r1 = d/dt V^t + eps f^2 grad_L a^t`` (norm in ``g_L``),
    ``r2 = V^t(ln f) + a_t``, and
    ``r3 = X(ln |a^t f|) - X(ln sqrt g(V^t, V^t))`` maximized over an
    orthonormal set ``X`` orthogonal to ``V^t``, evaluated only where
    ``|a^t|`` and ``|V^t|`` exceed the exclusion threshold.
    """
    dec = FieldDecomposition(spec, V)
    L = spec.base
    n = L.dim
    eps = spec.eps
    points = [(float(t), np.asarray(p, dtype=float)) for t in t_samples for p in base_samples]

    def local(tp):
        t, p = tp
        g_L, _ = metric_at(L, p, S)
        ginv = np.linalg.inv(g_L)
        fval = spec.f(p)
        df = warp_differential(spec.f, p, L.domain, S)
        da = gradient_fd(lambda x: dec.a(x, t), p, L.domain, S.step, S.richardson)
        vt = dec.base_part(p, t)
        r1_vec = dec.dVt_dt(p, t) + eps * fval**2 * (ginv @ da)
        r1 = float(np.sqrt(abs(r1_vec @ g_L @ r1_vec)))
        r2 = abs(float(df @ vt) / fval + dec.a_t(p, t))
        a_val = dec.a(p, t)
        v_norm = float(np.sqrt(abs(vt @ g_L @ vt)))
        r3 = None
        if n >= 2 and abs(a_val) > EXCLUSION_TOL and v_norm > EXCLUSION_TOL:

            def phi(x):
                v = dec.base_part(x, t)
                return np.log(abs(dec.a(x, t) * spec.f(x))) - 0.5 * np.log(abs(v @ L(x) @ v))

            dphi = gradient_fd(phi, p, L.domain, S.step, S.richardson)
            r3 = max((abs(float(dphi @ X)) for X in _orthonormal_complement(g_L, vt)), default=0.0)
        return r1, r2, r3

    rows = map_samples(local, points)
    qs = [np.append(p, t) for t, p in points]
    rep1 = DefectReport.from_samples("projection_killing_t", qs, [r[0] for r in rows], tolerance)
    rep2 = DefectReport.from_samples("projection_killing_warp", qs, [r[1] for r in rows], tolerance)
    kept = [(q, r[2]) for q, r in zip(qs, rows) if r[2] is not None]
    if n < 2:
        rep3 = DefectReport.from_samples(
            "projection_static", [], [], tolerance, note="vacuous: base is one-dimensional"
        )
    elif not kept:
        rep3 = DefectReport(
            "projection_static",
            0.0,
            (),
            tolerance,
            False,
            note="all samples excluded by the a^t / V^t thresholds",
        )
    else:
        rep3 = DefectReport.from_samples(
            "projection_static",
            [q for q, _ in kept],
            [d for _, d in kept],
            tolerance,
            note=f"{len(points) - len(kept)} of {len(points)} samples excluded",
        )
    return rep1, rep2, rep3


# ---------------------------------------------------------------------------
# slice scans
# ---------------------------------------------------------------------------

IDENTICALLY_ZERO = "identically_zero"
NOWHERE_ZERO = "nowhere_zero"
MIXED = "mixed"


@dataclass(frozen=True)
class SliceVerdict:
    t: float
    verdict: str
    sup_norm: float
    inf_norm: float

    @property
    def flagged(self) -> bool:
        return self.verdict == MIXED


def dichotomy_scan(spec, V, t_grid, base_grid, S=DEFAULT_SCHEME, zero_tol=ZERO_TOL) -> list[SliceVerdict]:
    """Classify each base projection ``V^t`` as identically zero, zero-free or mixed.

    The zero threshold is ``zero_tol`` times the sup of the full field's
    component norm over the grid.
    """
    t_grid = list(t_grid)
    base_grid = [np.asarray(p, dtype=float) for p in base_grid]
    if not t_grid or not base_grid:
        raise ValueError("grids must be nonempty")
    dec = FieldDecomposition(spec, V)
    L = spec.base
    scale = max(float(np.linalg.norm(V(np.append(p, t)))) for t in t_grid for p in base_grid)
    thresh = zero_tol * (scale if scale > 0 else 1.0)
    out = []
    for t in t_grid:
        norms = []
        for p in base_grid:
            v = dec.base_part(p, t)
            norms.append(float(np.sqrt(abs(v @ L(p) @ v))))
        sup, inf = max(norms), min(norms)
        if sup <= thresh:
            verdict = IDENTICALLY_ZERO
        elif inf > thresh:
            verdict = NOWHERE_ZERO
        else:
            verdict = MIXED
        out.append(SliceVerdict(float(t), verdict, sup, inf))
    return out


@dataclass(frozen=True)
class Proportionality:
    is_proportional: bool
    h: dict
    max_relative_residual: float

    def __iter__(self):
        return iter((self.is_proportional, self.h))


def proportionality_check(spec, V, t0, t_grid, base_grid, tolerance=1e-6) -> Proportionality:
    """Least-squares ``h(t)`` with ``V^t ~ h(t) V^{t0}`` over the base grid."""
    dec = FieldDecomposition(spec, V)
    L = spec.base
    base_grid = [np.asarray(p, dtype=float) for p in base_grid]
    gs = [L(p) for p in base_grid]
    ref = [dec.base_part(p, t0) for p in base_grid]
    ref_norms = [float(np.sqrt(abs(v @ g @ v))) for v, g in zip(ref, gs)]
    scale = max(ref_norms)
    if min(ref_norms) <= ZERO_TOL * (scale if scale > 0 else 1.0):
        raise GeometryError(f"V^{t0} vanishes on the base grid")
    ref_sq = sum(v @ g @ v for v, g in zip(ref, gs))
    hs = {}
    worst = 0.0
    for t in list(t_grid) + [t0]:
        cur = [dec.base_part(p, t) for p in base_grid]
        h = sum(c @ g @ v for c, g, v in zip(cur, gs, ref)) / ref_sq
        res2 = sum((c - h * v) @ g @ (c - h * v) for c, g, v in zip(cur, gs, ref))
        cur2 = sum(c @ g @ c for c, g in zip(cur, gs))
        floor = ZERO_TOL**2 * ref_sq
        rel = float(np.sqrt(abs(res2) / max(cur2, floor)))
        hs[float(t)] = float(h)
        worst = max(worst, rel)
    return Proportionality(worst <= tolerance, hs, worst)


def static_defects(M, S, V, samples, killing_tol=1e-5, frobenius_tol=1e-6):
    """Killing and Frobenius reports for the same samples."""
    return killing_defect(M, S, V, samples, killing_tol), frobenius_defect(M, S, V, samples, frobenius_tol)

