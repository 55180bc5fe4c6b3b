"""Einstein-metric fits and the residual chain for ``N x_lam (R x_{eps c} R)``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .differentiation import DEFAULT_SCHEME, DerivativeScheme
from .errors import GeometryError
from .manifold import MetricField, ScalarField, curvature_tensors, orthonormal_frame, scalar_calculus
from .products import SeparableWarpSpec
from .report import DefectReport, map_samples

GRADIENT_FLOOR = 1e-8
LAMBDA_U_STEP = 1e-4


def einstein_defect(M: MetricField, S: DerivativeScheme = DEFAULT_SCHEME, samples=(), delta=None, tolerance=1e-4):
    """``(delta, report)`` for ``Ric ~ delta g``.

    Components are taken in an orthonormal frame, where ``g = diag(signs)``.
    With ``delta=None`` it is the least-squares fit over every sample.
    """
    samples = [np.asarray(p, dtype=float) for p in samples]

    def frame_ricci(p):
        curv = curvature_tensors(M, S, p)
        E, signs = orthonormal_frame(curv.metric)
        return E.T @ curv.ricci @ E, np.diag(signs)

    rows = map_samples(frame_ricci, samples)
    if delta is None:
        num = sum(float(np.sum(R * G)) for R, G in rows)
        den = sum(float(np.sum(G * G)) for _, G in rows)
        delta = num / den if den else 0.0
    defects = [float(np.max(np.abs(R - delta * G))) for R, G in rows]
    return float(delta), DefectReport.from_samples("einstein", samples, defects, tolerance, extra={"delta": delta})


@dataclass(frozen=True)
class EinsteinChainConfig:
    """Constants of the chain.

    ``b_const`` is the constant in ``lam^3 K = b + delta lam^3 / 3``;
    ``b_shift`` is the phase in ``c(s) = ... (r s + b)`` and only labels the run.
    """

    delta: float = 0.0
    a_const: float = 0.0
    b_const: float = 0.0
    b_shift: float = 0.0

    def __post_init__(self):
        for name in ("delta", "a_const", "b_const", "b_shift"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")


CHAIN_NAMES = (
    "fiber_constant",
    "ricci_base_hessian",
    "ricci_base_on_N",
    "ricci_base_ss",
    "hessian_f_on_N",
    "hessian_f_ss",
    "ricci_N_hessian",
    "laplacian_lambda",
    "hessian_lambda",
    "laplacian_lambda_trace",
    "gradient_energy",
    "gradient_energy_b",
    "curvature_cubic",
    "lambda_u_squared",
)
TWO_DIM_ONLY = frozenset(CHAIN_NAMES[8:])


def _lambda_u(lam: ScalarField, N: MetricField, S, x, dlam, ginv):
    """Derivative of ``lam`` along the unit gradient direction of ``N``.

    After reparametrizing ``u = lam`` this is the ``d lam / du`` of the
    ``(u, v)`` chart; numerically it equals ``|grad lam|``.
    """
    grad = ginv @ dlam
    norm = float(np.sqrt(max(dlam @ grad, 0.0)))
    if norm < GRADIENT_FLOOR:
        return 0.0
    e = grad / norm
    h = LAMBDA_U_STEP
    box = N.domain
    lo = x - h * e
    hi = x + h * e
    if np.all(lo >= box[:, 0]) and np.all(hi <= box[:, 1]):
        return (lam(hi) - lam(lo)) / (2 * h)
    return norm


def einstein_chain_residuals(
    spec: SeparableWarpSpec,
    cfg: EinsteinChainConfig,
    samples,
    S: DerivativeScheme = DEFAULT_SCHEME,
    tolerance: float = 1e-4,
) -> list[DefectReport]:
    """One report per identity of the chain, sampled at points ``(x, s)`` of ``L = N x_lam R``.

    Identities on ``N`` that only hold for a surface are skipped (with a
    note) when ``dim N != 2``.
    """
    N = spec.base
    n = N.dim
    L = spec.base_static()
    lam, c = spec.lam, spec.c
    f = ScalarField(lambda p: lam(p[:n]) * c(p[n]), name="lam*c")
    delta, a, b = cfg.delta, cfg.a_const, cfg.b_const
    samples = [np.asarray(p, dtype=float) for p in samples]

    def local(p):
        x, s = p[:n], float(p[n])
        cL = curvature_tensors(L, S, p)
        fL = scalar_calculus(L, S, f, p, cL.gamma)
        fv = f(p)
        cv, css = c(s), c.deriv(s, 2)
        lv = lam(x)
        out = {}
        out["fiber_constant"] = abs(css / cv - a)
        out["ricci_base_hessian"] = np.max(np.abs(cL.ricci - fL.hessian / fv - delta * cL.metric))
        if n:
            cN = curvature_tensors(N, S, x)
            lN = scalar_calculus(N, S, lam, x, cN.gamma)
            ricN, gN, H, lap = cN.ricci, cN.metric, lN.hessian, lN.laplacian
            grad2 = float(lN.differential @ lN.gradient)
        else:
            ricN = gN = H = np.zeros((0, 0))
            lap, grad2 = 0.0, 0.0
        out["ricci_base_on_N"] = np.max(np.abs(cL.ricci[:n, :n] - (ricN - H / lv)), initial=0.0)
        out["ricci_base_ss"] = abs(cL.ricci[n, n] + lv * lap)
        out["hessian_f_on_N"] = np.max(np.abs(fL.hessian[:n, :n] - cv * H), initial=0.0)
        out["hessian_f_ss"] = abs(fL.hessian[n, n] - lv * (cv * grad2 + css))
        out["ricci_N_hessian"] = np.max(np.abs(ricN - (2.0 / lv) * H - delta * gN), initial=0.0)
        out["laplacian_lambda"] = abs(-lv * lap - (grad2 + css / cv + delta * lv**2))
        if n == 2:
            K = cN.scalar / 2.0
            out["hessian_lambda"] = np.max(np.abs(H - 0.5 * lv * (K - delta) * gN))
            out["laplacian_lambda_trace"] = abs(lap - lv * (K - delta))
            out["gradient_energy"] = abs(-(lv**2) * K - (grad2 + a))
            out["gradient_energy_b"] = abs(-b / lv - delta * lv**2 / 3 - (grad2 + a))
            out["curvature_cubic"] = abs(lv**3 * K - (b + delta * lv**3 / 3))
            lu = _lambda_u(lam, N, S, x, lN.differential, cN.inverse)
            out["lambda_u_squared"] = abs(lu**2 - (-a - b / lv - delta * lv**2 / 3))
        return {k: float(v) for k, v in out.items()}

    rows = map_samples(local, samples)
    reports = []
    for name in CHAIN_NAMES:
        if name in TWO_DIM_ONLY and n != 2:
            reports.append(
                DefectReport.from_samples(name, [], [], tolerance, note=f"skipped: needs dim N = 2, got {n}")
            )
            continue
        reports.append(DefectReport.from_samples(name, samples, [r[name] for r in rows], tolerance))
    return reports


def require_two_dim(spec: SeparableWarpSpec):
    if spec.base.dim != 2:
        raise GeometryError(f"identity needs dim N = 2, got {spec.base.dim}")
