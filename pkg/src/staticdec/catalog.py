"""Classified spaces with more than one static decomposition, their explicit
static fields, and the warping-function ODE pair with its admissible solutions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, GeometryError
from .manifold import MetricField, ScalarField, VectorField
from .products import (
    DoublyWarpedSpec,
    Profile1D,
    SeparableWarpSpec,
    StaticProductSpec,
    build_doubly_warped,
    build_static,
    flat_metric,
)

R2EPS = "R2eps"
H2EPS = "H2eps"
H2HAT = "H2hat_eps"
DOUBLY_WARPED = "DoublyWarped"
WARPED = "WarpedProduct"
TOD = "TodSurface"
DIRECT = "DirectProductSurfaces"

SURFACE_KINDS = (R2EPS, H2EPS, H2HAT)
KINDS = SURFACE_KINDS + (DOUBLY_WARPED, WARPED, TOD, DIRECT)

DEFAULT_BOX = (-3.0, 3.0)
R_MAX = 10.0


@dataclass(frozen=True)
class CatalogSpace:
    """One of the classified spaces.

    Surfaces ``R2eps``, ``H2eps`` and ``H2hat_eps`` live on ``(s, t)``.
    ``WarpedProduct`` is ``N x_lam S`` with ``S`` the surface ``fiber``;
    ``DoublyWarped`` is ``g_N + lam^2 ds^2 + eps f^2 dt^2``; ``TodSurface``
    is ``du^2 / h + h dv^2`` with ``h = k1 + k2/u + k3 u^2``;
    ``DirectProductSurfaces`` is the block sum of ``factors``.
    """

    kind: str
    eps: int = 1
    r: float = 1.0
    k: tuple = (1.0, 0.0, 0.0)
    domain: tuple | None = None
    N: MetricField | None = None
    lam: ScalarField | None = None
    f: ScalarField | None = None
    fiber: "CatalogSpace | None" = None
    factors: tuple = ()
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown space kind {self.kind!r}; expected one of {KINDS}")
        if self.eps not in (1, -1):
            raise ConfigError("eps must be +1 or -1")
        if not (0 < self.r <= R_MAX):
            raise ConfigError(f"r must lie in (0, {R_MAX}], got {self.r}")
        if self.kind == WARPED:
            if self.N is None or self.lam is None or self.fiber is None:
                raise ConfigError("WarpedProduct needs N, lam and fiber")
            if self.fiber.kind not in SURFACE_KINDS:
                raise ConfigError("WarpedProduct fiber must be R2eps, H2eps or H2hat_eps")
        if self.kind == DOUBLY_WARPED and (self.N is None or self.lam is None or self.f is None):
            raise ConfigError("DoublyWarped needs N, lam and f")
        if self.kind == DIRECT and len(self.factors) < 2:
            raise ConfigError("DirectProductSurfaces needs two factors")

    @property
    def fiber_eps(self) -> int:
        return self.fiber.eps if self.kind == WARPED else self.eps

    def surface_box(self):
        if self.domain is not None:
            box = np.asarray(self.domain, dtype=float)
            return tuple(box[-2]), tuple(box[-1])
        return DEFAULT_BOX, DEFAULT_BOX


def surface_warp(kind: str, r: float) -> Profile1D:
    """The function ``c`` with surface metric ``ds^2 + eps c(s)^2 dt^2``."""
    if kind == R2EPS:
        return Profile1D(lambda s: 1.0, lambda s: 0.0, lambda s: 0.0, "1")
    if kind == H2EPS:
        return Profile1D(
            lambda s: np.cosh(r * s),
            lambda s: r * np.sinh(r * s),
            lambda s: r * r * np.cosh(r * s),
            f"cosh({r}s)",
        )
    if kind == H2HAT:
        return Profile1D(
            lambda s: np.exp(r * s),
            lambda s: r * np.exp(r * s),
            lambda s: r * r * np.exp(r * s),
            f"exp({r}s)",
        )
    raise ConfigError(f"{kind!r} is not a static surface")


def separable_spec(space: CatalogSpace) -> SeparableWarpSpec:
    """``N x_lam (R x_{eps c} R)`` form of a warped catalog space (or a bare surface)."""
    if space.kind in SURFACE_KINDS:
        s_box, t_box = space.surface_box()
        from .products import point_metric

        return SeparableWarpSpec(
            point_metric(), ScalarField(lambda x: 1.0), surface_warp(space.kind, space.r), space.eps, s_box, t_box
        )
    if space.kind == WARPED:
        fib = space.fiber
        s_box, t_box = fib.surface_box()
        return SeparableWarpSpec(space.N, space.lam, surface_warp(fib.kind, fib.r), fib.eps, s_box, t_box)
    raise ConfigError(f"{space.kind} is not a separable warped product")


def static_spec(space: CatalogSpace) -> StaticProductSpec:
    """The space read as a static product ``L x_{eps f} R`` (time is the last coordinate)."""
    if space.kind in SURFACE_KINDS:
        s_box, t_box = space.surface_box()
        c = surface_warp(space.kind, space.r)
        base = flat_metric(1, [s_box], name="R")
        return StaticProductSpec(base, ScalarField(lambda p: c(p[0]), name=c.name), space.eps, t_box)
    if space.kind == WARPED:
        return separable_spec(space).static_spec()
    if space.kind == DOUBLY_WARPED:
        return doubly_warped_spec(space).static_spec()
    raise ConfigError(f"{space.kind} has no static product structure in the catalog")


def doubly_warped_spec(space: CatalogSpace) -> DoublyWarpedSpec:
    s_box, t_box = space.surface_box()
    return DoublyWarpedSpec(space.N, space.lam, space.f, space.eps, s_box, t_box)


def catalog_metric(space: CatalogSpace) -> MetricField:
    if space.kind in SURFACE_KINDS or space.kind == WARPED:
        return build_static(static_spec(space))
    if space.kind == DOUBLY_WARPED:
        return build_doubly_warped(doubly_warped_spec(space))
    if space.kind == TOD:
        if space.domain is None:
            raise ConfigError("TodSurface needs a declared domain")
        return tod_surface_metric(*space.k, domain=space.domain)
    return direct_product([catalog_metric(f) for f in space.factors])


def direct_product(metrics) -> MetricField:
    dims = [m.dim for m in metrics]
    offsets = np.cumsum([0] + dims)
    total = int(offsets[-1])

    def fn(q):
        g = np.zeros((total, total))
        for m, a, b in zip(metrics, offsets[:-1], offsets[1:]):
            g[a:b, a:b] = m(q[a:b])
        return g

    domain = np.vstack([m.domain for m in metrics])
    return MetricField(total, domain, fn, name=" x ".join(m.name for m in metrics))


def tod_h(k1, k2, k3):
    if k2 == 0:
        return lambda u: k1 + k3 * u * u
    return lambda u: k1 + k2 / u + k3 * u * u


def tod_curvature(k1, k2, k3, u) -> float:
    """Closed-form Gaussian curvature ``-h''(u)/2``."""
    return -(k2 / u**3 + k3)


def tod_surface_metric(k1, k2, k3, domain) -> MetricField:
    """``du^2 / h(u) + h(u) dv^2`` on a user-declared box ``[[u0, u1], [v0, v1]]``."""
    box = np.asarray(domain, dtype=float).reshape(2, 2)
    u0, u1 = box[0]
    if k2 != 0 and u0 <= 0 <= u1:
        raise GeometryError("Tod domain must exclude u = 0 when k2 != 0")
    h = tod_h(k1, k2, k3)
    probe = np.linspace(u0, u1, 257)
    if k2 != 0 and np.any(probe == 0):
        probe = probe[probe != 0]
    vals = np.array([h(u) for u in probe])
    if not np.all(vals > 0):
        bad = probe[np.argmin(vals)]
        raise GeometryError(f"h(u) = k1 + k2/u + k3 u^2 is not positive on the domain (u = {bad})")

    def fn(q):
        hv = h(q[0])
        return np.array([[1.0 / hv, 0.0], [0.0, hv]])

    return MetricField(2, box, fn, name=f"Tod({k1},{k2},{k3})")


# ---------------------------------------------------------------------------
# static field families
# ---------------------------------------------------------------------------

FAMILY_SURFACE = {"Prop45_2": H2EPS, "Prop45_3": H2HAT, "Prop45_4": R2EPS}
PARAM_MAX = 10.0


@dataclass(frozen=True)
class StaticFieldFamily:
    """Explicit static fields on the classified surfaces.

    ``r`` and ``eps`` default to the space's values; giving different ones is
    an error.  Family ``Prop45_4`` always has unit ``d_s`` coefficient.
    """

    family: str
    alpha: float = 0.0
    beta: float = 1.0
    gamma: float = 0.0
    r: float | None = None
    eps: int | None = None

    def __post_init__(self):
        if self.family not in FAMILY_SURFACE:
            raise ConfigError(f"unknown field family {self.family!r}; expected one of {tuple(FAMILY_SURFACE)}")
        for name in ("alpha", "beta", "gamma"):
            if abs(getattr(self, name)) > PARAM_MAX:
                raise ConfigError(f"|{name}| must be <= {PARAM_MAX}")
        if self.family == "Prop45_4" and (self.alpha, self.beta) != (0.0, 1.0):
            raise ConfigError("Prop45_4 fixes alpha = 0, beta = 1")


def family_h(fam: StaticFieldFamily, r: float, eps: int):
    """``(h, h_t, h_tt)`` of a family's ``d_s`` coefficient."""
    a, b = fam.alpha, fam.beta
    if fam.family == "Prop45_2":
        if eps == -1:
            return (
                lambda t: a * np.sin(r * t + b),
                lambda t: a * r * np.cos(r * t + b),
                lambda t: -a * r * r * np.sin(r * t + b),
            )
        return (
            lambda t: a * np.exp(r * t) + b * np.exp(-r * t),
            lambda t: r * (a * np.exp(r * t) - b * np.exp(-r * t)),
            lambda t: r * r * (a * np.exp(r * t) + b * np.exp(-r * t)),
        )
    if fam.family == "Prop45_3":
        return (lambda t: a * t + b, lambda t: a + 0.0 * t, lambda t: 0.0 * t)
    return (lambda t: 1.0 + 0.0 * t, lambda t: 0.0 * t, lambda t: 0.0 * t)


def _surface_field(fam: StaticFieldFamily, r: float, eps: int):
    """Components ``(V^s, V^t)`` and their Jacobian on a surface chart ``(s, t)``."""
    h, h_t, h_tt = family_h(fam, r, eps)
    gam = fam.gamma
    if fam.family == "Prop45_2":

        def comps(s, t):
            return h(t), -(eps / r) * h_t(t) * np.tanh(r * s) + gam

        def jac(s, t):
            sech2 = 1.0 / np.cosh(r * s) ** 2
            return np.array([[0.0, h_t(t)], [-eps * h_t(t) * sech2, -(eps / r) * h_tt(t) * np.tanh(r * s)]])

    elif fam.family == "Prop45_3":
        al, be = fam.alpha, fam.beta

        def comps(s, t):
            a = (eps * al / (2 * r)) * np.exp(-2 * r * s) - (r * al / 2) * t * t - r * be * t + gam
            return al * t + be, a

        def jac(s, t):
            return np.array([[0.0, al], [-eps * al * np.exp(-2 * r * s), -r * al * t - r * be]])

    else:

        def comps(s, t):
            return 1.0, gam

        def jac(s, t):
            return np.zeros((2, 2))

    return comps, jac


def catalog_field(space: CatalogSpace, fam: StaticFieldFamily) -> VectorField:
    """The explicit static field of ``fam`` on its matched surface (or on ``N x_lam`` of it)."""
    surface = space.fiber if space.kind == WARPED else space
    if surface is None or surface.kind != FAMILY_SURFACE[fam.family]:
        raise ConfigError(
            f"family {fam.family} lives on {FAMILY_SURFACE[fam.family]}, not on {space.kind}"
            + (f"({surface.kind})" if space.kind == WARPED else "")
        )
    r = surface.r if fam.r is None else fam.r
    eps = surface.eps if fam.eps is None else fam.eps
    if r != surface.r or eps != surface.eps:
        raise ConfigError("field family r/eps do not match the space")
    comps, jac2 = _surface_field(fam, r, eps)
    n = space.N.dim if space.kind == WARPED else 0
    dim = n + 2

    def fn(q):
        out = np.zeros(dim)
        out[n], out[n + 1] = comps(q[n], q[n + 1])
        return out

    def jac(q):
        J = np.zeros((dim, dim))
        J[n:, n:] = jac2(q[n], q[n + 1])
        return J

    return VectorField(dim, fn, jac, name=f"{fam.family}(a={fam.alpha},b={fam.beta},g={fam.gamma})")


# ---------------------------------------------------------------------------
# the warping-function ODE pair
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OdeSolution:
    name: str
    c: Profile1D
    h: Profile1D
    k: float
    eps: int
    params: dict = field(default_factory=dict)


def _numeric_derivs(fn, x, step=1e-3):
    def d2(hh):
        return (fn(x + hh) - 2 * fn(x) + fn(x - hh)) / hh**2

    def d1(hh):
        return (fn(x + hh) - fn(x - hh)) / (2 * hh)

    return (4 * d1(step / 2) - d1(step)) / 3, (4 * d2(step / 2) - d2(step)) / 3


def ode_residuals(c, h, k: float, eps: int, s_samples, t_samples=None) -> tuple[float, float]:
    """``(sup |c_ss c - c_s^2 - k|, sup |h_tt - eps k h|)``.

    Closed-form derivatives are used when ``c``/``h`` are :class:`Profile1D`
    with hooks, evaluated in ``np.longdouble``; otherwise derivatives are
    Richardson differences.
    """
    t_samples = s_samples if t_samples is None else t_samples
    c_res = 0.0
    for s in s_samples:
        if not float(c(s)) > 0:
            raise GeometryError(f"c is not positive at s={s}")
        if isinstance(c, Profile1D) and c.d1 is not None and c.d2 is not None:
            # c c'' and c'^2 grow like e^(2rs); extended precision keeps their difference exact to ~1e-14
            x = np.longdouble(s)
            cv, cs, css = c.fn(x), c.d1(x), c.d2(x)
        else:
            cv = float(c(s))
            cs, css = _numeric_derivs(c, float(s))
        c_res = max(c_res, abs(float(css * cv - cs * cs - k)))
    h_res = 0.0
    for t in t_samples:
        if isinstance(h, Profile1D) and h.d2 is not None:
            x = np.longdouble(t)
            hv, htt = h.fn(x), h.d2(x)
        else:
            hv = float(h(t))
            htt = _numeric_derivs(h, float(t))[1]
        h_res = max(h_res, abs(float(htt - eps * k * hv)))
    return float(c_res), float(h_res)


def ode_solution_catalog(
    k: float, eps: int, r: float = 1.0, b: float = 0.0, alpha: float = 1.0, beta: float = 0.0
) -> list[OdeSolution]:
    """Closed-form positive solutions of ``c_ss c - c_s^2 = k``, ``h_tt = eps k h``.

    ``k < 0`` only admits ``sinh``/``sin`` profiles, which change sign on the
    line, so the list is empty.
    """
    if eps not in (1, -1):
        raise ValueError("eps must be +1 or -1")
    params = dict(k=k, eps=eps, r=r, b=b, alpha=alpha, beta=beta)
    if k > 0:
        q = np.sqrt(k)
        c = Profile1D(
            lambda s: (q / r) * np.cosh(r * s + b),
            lambda s: q * np.sinh(r * s + b),
            lambda s: q * r * np.cosh(r * s + b),
            "cosh",
        )
        if eps == -1:
            h = Profile1D(
                lambda t: alpha * np.sin(q * t + beta),
                lambda t: alpha * q * np.cos(q * t + beta),
                lambda t: -alpha * k * np.sin(q * t + beta),
                "sin",
            )
        else:
            h = Profile1D(
                lambda t: alpha * np.exp(q * t) + beta * np.exp(-q * t),
                lambda t: q * (alpha * np.exp(q * t) - beta * np.exp(-q * t)),
                lambda t: k * (alpha * np.exp(q * t) + beta * np.exp(-q * t)),
                "exp",
            )
        return [OdeSolution("cosh", c, h, k, eps, params)]
    if k == 0:
        affine = Profile1D(lambda t: alpha * t + beta, lambda t: alpha, lambda t: 0.0, "affine")
        exp_c = Profile1D(
            lambda s: np.exp(r * s + b),
            lambda s: r * np.exp(r * s + b),
            lambda s: r * r * np.exp(r * s + b),
            "exp",
        )
        const_c = Profile1D(lambda s: np.exp(b), lambda s: 0.0, lambda s: 0.0, "constant")
        return [
            OdeSolution("exp", exp_c, affine, k, eps, params),
            OdeSolution("constant", const_c, affine, k, eps, {**params, "r": 0.0}),
        ]
    return []
