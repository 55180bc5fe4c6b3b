"""Named verification suites driven by JSON configs."""

from __future__ import annotations

import copy
import time
from dataclasses import dataclass
from dataclasses import field as dc_field

import numpy as np

from . import catalog as cat
from .config import Space, build_field, build_flow, build_leaf, build_space
from .differentiation import DEFAULT_SCHEME, gradient_fd
from .einstein import EinsteinChainConfig, einstein_chain_residuals, einstein_defect
from .errors import ConfigError, DegeneratePlaneError
from .fields import (
    MIXED,
    dichotomy_scan,
    frobenius_defect,
    killing_defect,
    projection_residuals,
    proportionality_check,
)
from .flow import flow_samples, verify_flow_decomposition
from .manifold import curvature_tensors, gaussian_curvature, sectional_curvature
from .null import (
    DegeneratePlane,
    flat_null_plane,
    curluz_sides,
    lightlike_sectional,
    null_curvature_scan,
    random_orthonormal_pair,
    static_null_plane,
)
from .products import build_static, lemma1_residuals
from .report import DefectReport, sample_box

S = DEFAULT_SCHEME

DEFAULT_GRID = {
    "samples": 100,
    "t_samples": 5,
    "base_samples": 20,
    "planes": 50,
    "draws": 5,
    "points": 10,
}

DEFAULT_TOLERANCES = {
    "lemma1": 1e-4,
    "lemma2": 1e-4,
    "scale_law": 1e-6,
    "v_independence": 1e-6,
    "killing": 1e-5,
    "frobenius": 1e-6,
    "projection": 1e-4,
    "proportional": 1e-6,
    "ode": 1e-10,
    "ode_fd": 1e-6,
    "null": 1e-4,
    "einstein": 1e-4,
    "delta": 1e-3,
    "chain": 1e-4,
    "tod": 1e-4,
    "flow": 1e-4,
    "step_halving": 1e-6,
    "christoffel_symmetry": 1e-8,
    "metric_compatibility": 1e-6,
    "bianchi": 1e-4,
    "ricci_symmetry": 1e-6,
    "richardson": 1e-6,
    "sectional_invariance": 1e-6,
}

SUITES = (
    "lemma1",
    "lemma2",
    "prop31",
    "prop41",
    "prop42-scan",
    "prop45-catalog",
    "ode",
    "cor34-null",
    "thm52-einstein",
    "tod-family",
    "flow-decomp",
    "bianchi-sanity",
)

SCALE_FACTORS = (0.5, 2.0, 3.0)
INDEPENDENCE_FLOOR = 1e-8


@dataclass(frozen=True)
class CheckResult:
    name: str
    sup_defect: float
    tolerance: float
    passed: bool
    worst_point: tuple = ()

    @classmethod
    def from_report(cls, rep: DefectReport) -> "CheckResult":
        return cls(rep.identity_name, rep.sup_defect, rep.tolerance, rep.passed, tuple(rep.worst_point))


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one suite run; ``passed`` is the conjunction of every check."""

    suite: str
    passed: bool
    checks: tuple = ()
    config: dict = dc_field(default_factory=dict)
    ms: float = 0.0
    notes: dict = dc_field(default_factory=dict, compare=False)

    @classmethod
    def from_reports(cls, suite, reports, config, ms):
        checks = tuple(CheckResult.from_report(r) for r in reports)
        notes = {r.identity_name: r.note for r in reports if r.note}
        return cls(suite, all(c.passed for c in checks), checks, config, float(ms), notes)


@dataclass
class SuiteConfig:
    suite: str
    space: dict | None = None
    field: dict | None = None
    grid: dict = dc_field(default_factory=dict)
    seed: int = 0
    tolerances: dict = dc_field(default_factory=dict)
    options: dict = dc_field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict, suite: str | None = None, seed: int | None = None) -> "SuiteConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        data = copy.deepcopy(data)
        name = suite if suite is not None else data.pop("suite", None)
        data.pop("suite", None)
        if name not in SUITES:
            raise ConfigError(f"unknown suite {name!r}; expected one of {SUITES}")
        grid = dict(DEFAULT_GRID)
        user_grid = data.pop("grid", {}) or {}
        if not isinstance(user_grid, dict):
            raise ConfigError("grid must be an object")
        for k, v in user_grid.items():
            if k not in DEFAULT_GRID:
                raise ConfigError(f"unknown grid key {k!r}")
            if isinstance(v, bool) or not isinstance(v, int) or v < 1:
                raise ConfigError(f"grid size {k!r} must be an integer >= 1, got {v!r}")
            grid[k] = v
        tols = dict(DEFAULT_TOLERANCES)
        user_tols = data.pop("tolerances", {}) or {}
        if not isinstance(user_tols, dict):
            raise ConfigError("tolerances must be an object")
        for k, v in user_tols.items():
            if k not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance key {k!r}")
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v >= 0:
                raise ConfigError(f"tolerance {k!r} must be a nonnegative number")
            tols[k] = float(v)
        cfg_seed = data.pop("seed", 0) if seed is None else seed
        data.pop("seed", None)
        if isinstance(cfg_seed, bool) or not isinstance(cfg_seed, int) or cfg_seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {cfg_seed!r}")
        space = data.pop("space", None)
        fld = data.pop("field", None)
        return cls(name, space, fld, grid, cfg_seed, tols, data)

    def to_dict(self) -> dict:
        out = {"suite": self.suite, "seed": self.seed}
        if self.space is not None:
            out["space"] = self.space
        if self.field is not None:
            out["field"] = self.field
        out["grid"] = self.grid
        out["tolerances"] = self.tolerances
        out.update(self.options)
        return out

    def need_space(self) -> Space:
        if self.space is None:
            raise ConfigError(f"suite {self.suite!r} needs a 'space'")
        return build_space(self.space)

    def need_field(self, space: Space):
        if self.field is None:
            raise ConfigError(f"suite {self.suite!r} needs a 'field'")
        return build_field(self.field, space)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _shrunk_linspace(interval, n, margin=0.05):
    lo, hi = (float(x) for x in interval)
    w = hi - lo
    return np.linspace(lo + margin * w, hi - margin * w, n)


def _merge(name, reports, tolerance, note=""):
    pts, vals = [], []
    for r in reports:
        for p, d in r.samples:
            pts.append(p)
            vals.append(d)
    notes = sorted({r.note for r in reports if r.note})
    return DefectReport.from_samples(name, pts, vals, tolerance, note=note or "; ".join(notes))


def _static_grids(cfg: SuiteConfig, spec):
    t_samples = _shrunk_linspace(spec.t_domain, cfg.grid["t_samples"])
    L = spec.base
    base = sample_box(L.domain, cfg.grid["base_samples"], seed=cfg.seed)
    if L.dim == 1:
        base = _shrunk_linspace(L.domain[0], cfg.grid["base_samples"])[:, None]
    return t_samples, base


def _option(cfg, key, default=None, required=False):
    if key in cfg.options:
        return cfg.options[key]
    if required:
        raise ConfigError(f"suite {cfg.suite!r} needs option {key!r}")
    return default


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def suite_lemma1(cfg: SuiteConfig):
    space = cfg.need_space()
    spec = space.require_static()
    samples = sample_box(space.metric.domain, cfg.grid["samples"], seed=cfg.seed)
    return lemma1_residuals(spec, S, samples, tolerance=cfg.tolerances["lemma1"])


def suite_lemma2(cfg: SuiteConfig):
    space = cfg.need_space()
    spec = space.require_static()
    if spec.eps != -1 or spec.base.dim < 2:
        raise ConfigError("lemma2 needs a Lorentzian static product (eps = -1) with dim L >= 2")
    L = spec.base
    M = build_static(spec)
    rng = np.random.default_rng(cfg.seed)
    points = sample_box(L.domain, cfg.grid["samples"], seed=cfg.seed)
    res, scale, indep = [], [], []
    for p in points:
        v, w = random_orthonormal_pair(L(p), rng)
        lhs, rhs = curluz_sides(spec, S, p, v, w)
        res.append(abs(lhs - rhs))
        plane = static_null_plane(spec, p, v, w)
        curv = curvature_tensors(M, S, plane.base)
        k = lightlike_sectional(M, S, plane, curv)
        worst = 0.0
        for c in SCALE_FACTORS:
            kc = lightlike_sectional(M, S, plane.scaled(c), curv)
            ref = c * c * k
            worst = max(worst, abs(kc - ref) / abs(ref) if ref != 0 else abs(kc))
        scale.append(worst)
        worst = 0.0
        for _ in range(10):
            a = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
            b = rng.uniform(-2.0, 2.0)
            other = DegeneratePlane(plane.base, plane.u, a * plane.v + b * plane.u)
            worst = max(worst, abs(lightlike_sectional(M, S, other, curv) - k))
        indep.append(worst)
    return [
        DefectReport.from_samples("lemma2", points, res, cfg.tolerances["lemma2"]),
        DefectReport.from_samples("scale_law", points, scale, cfg.tolerances["scale_law"]),
        DefectReport.from_samples("v_independence", points, indep, cfg.tolerances["v_independence"]),
    ]


def _field_checks(cfg, space, V, which=("killing", "frobenius", "r1", "r2", "r3")):
    M = space.metric
    spec = space.require_static()
    out = []
    samples = sample_box(M.domain, cfg.grid["samples"], seed=cfg.seed)
    if "killing" in which:
        out.append(killing_defect(M, S, V, samples, cfg.tolerances["killing"]))
    if "frobenius" in which:
        out.append(frobenius_defect(M, S, V, samples, cfg.tolerances["frobenius"]))
    if {"r1", "r2", "r3"} & set(which):
        t_samples, base = _static_grids(cfg, spec)
        r1, r2, r3 = projection_residuals(spec, V, t_samples, base, S, cfg.tolerances["projection"])
        out.extend(r for key, r in zip(("r1", "r2", "r3"), (r1, r2, r3)) if key in which)
    return out


def suite_prop31(cfg: SuiteConfig):
    space = cfg.need_space()
    return _field_checks(cfg, space, cfg.need_field(space), ("killing", "frobenius", "r1", "r2"))


def suite_prop41(cfg: SuiteConfig):
    space = cfg.need_space()
    return _field_checks(cfg, space, cfg.need_field(space), ("killing", "frobenius", "r3"))


def suite_prop42(cfg: SuiteConfig):
    space = cfg.need_space()
    spec = space.require_static()
    V = cfg.need_field(space)
    t_grid = _option(cfg, "t_grid")
    if t_grid is None:
        t_grid = _shrunk_linspace(spec.t_domain, cfg.grid["t_samples"])
    t_grid = [float(t) for t in t_grid]
    if not t_grid:
        raise ConfigError("t_grid must be nonempty")
    L = spec.base
    n_base = cfg.grid["base_samples"]
    if L.dim == 1:
        base = _shrunk_linspace(L.domain[0], n_base)[:, None]
    else:
        base = sample_box(L.domain, n_base, seed=cfg.seed)
    verdicts = dichotomy_scan(spec, V, t_grid, base, S)
    reports = [
        DefectReport.from_samples(
            "no_mixed",
            [[v.t] for v in verdicts],
            [1.0 if v.verdict == MIXED else 0.0 for v in verdicts],
            0.0,
            note=", ".join(f"t={v.t:.6g}: {v.verdict}" for v in verdicts),
        )
    ]
    expect = _option(cfg, "expect", {}) or {}
    if not isinstance(expect, dict):
        raise ConfigError("expect must map t values to verdicts")
    for key, want in expect.items():
        t = float(key)
        got = dichotomy_scan(spec, V, [t], base, S)[0]
        reports.append(
            DefectReport.from_samples(f"verdict[t={key}]", [[t]], [0.0 if got.verdict == want else 1.0], 0.0,
                                      note=f"expected {want}, got {got.verdict}")
        )
    t0 = _option(cfg, "t0")
    if t0 is not None:
        prop = proportionality_check(spec, V, float(t0), t_grid, base, cfg.tolerances["proportional"])
        reports.append(
            DefectReport.from_samples("proportional", [[float(t0)]], [prop.max_relative_residual],
                                      cfg.tolerances["proportional"])
        )
        reports.append(
            DefectReport.from_samples("h_t0_normalized", [[float(t0)]], [abs(prop.h[float(t0)] - 1.0)], 1e-9)
        )
    return reports


def suite_prop45(cfg: SuiteConfig):
    families = _option(cfg, "families", list(cat.FAMILY_SURFACE))
    eps_list = _option(cfg, "eps", [-1, 1])
    r = float(_option(cfg, "r", 1.0))
    draws = cfg.grid["draws"]
    warp = _option(cfg, "warp")
    rng = np.random.default_rng(cfg.seed)
    reports = []
    for fam_name in families:
        if fam_name not in cat.FAMILY_SURFACE:
            raise ConfigError(f"unknown field family {fam_name!r}")
        for eps in eps_list:
            surface = {"kind": cat.FAMILY_SURFACE[fam_name], "eps": eps, "r": r}
            targets = [("", surface)]
            if warp is not None:
                if not isinstance(warp, dict):
                    raise ConfigError("warp must be an object with N and lam")
                targets.append(("/warped", {"kind": cat.WARPED, "N": warp.get("N"), "lam": warp.get("lam"),
                                            "fiber": surface}))
            for suffix, desc in targets:
                space = build_space(desc)
                collected = {}
                indep = []
                for _ in range(draws):
                    alpha, beta, gamma = rng.uniform(-2.0, 2.0, 3)
                    if fam_name == "Prop45_4":
                        alpha, beta = 0.0, 1.0
                    fdesc = {"family": fam_name, "alpha": float(alpha), "beta": float(beta), "gamma": float(gamma)}
                    V = build_field(fdesc, space)
                    for rep in _field_checks(cfg, space, V):
                        collected.setdefault(rep.identity_name, []).append(rep)
                    n = space.static.base.dim
                    pts = sample_box(space.metric.domain, cfg.grid["points"], seed=cfg.seed)
                    best = max(float(np.linalg.norm(V(q)[:n])) for q in pts)
                    indep.append(([alpha, beta, gamma], 0.0 if best > INDEPENDENCE_FLOOR else 1.0))
                prefix = f"{fam_name}[eps={eps:+d}]{suffix}"
                for key, reps in collected.items():
                    reports.append(_merge(f"{prefix}/{key}", reps, reps[0].tolerance))
                reports.append(
                    DefectReport.from_samples(f"{prefix}/independent_of_dt", [p for p, _ in indep],
                                              [d for _, d in indep], 0.0)
                )
    return reports


def suite_ode(cfg: SuiteConfig):
    opts = _option(cfg, "ode", {"k": 1.0, "eps": -1}) or {}
    try:
        k = float(opts.get("k", 1.0))
        eps = int(opts.get("eps", -1))
        kw = {key: float(opts[key]) for key in ("r", "b", "alpha", "beta") if key in opts}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid ode options: {exc}") from exc
    if eps not in (1, -1):
        raise ConfigError("eps must be +1 or -1")
    sols = cat.ode_solution_catalog(k, eps, **kw)
    s_grid = np.linspace(-3.0, 3.0, cfg.grid["samples"])
    reports = []
    if k < 0:
        reports.append(DefectReport.from_samples("k_negative_empty", [[k]], [float(len(sols))], 0.0))
    for sol in sols:
        c_res, h_res = cat.ode_residuals(sol.c, sol.h, sol.k, sol.eps, s_grid)
        reports.append(DefectReport.from_samples(f"ode[{sol.name}]/c", [[k]], [c_res], cfg.tolerances["ode"]))
        reports.append(DefectReport.from_samples(f"ode[{sol.name}]/h", [[k]], [h_res], cfg.tolerances["ode"]))
        c_fd, h_fd = cat.ode_residuals(sol.c.fn, sol.h.fn, sol.k, sol.eps, s_grid)
        reports.append(DefectReport.from_samples(f"ode[{sol.name}]/c_fd", [[k]], [c_fd], cfg.tolerances["ode_fd"]))
        reports.append(DefectReport.from_samples(f"ode[{sol.name}]/h_fd", [[k]], [h_fd], cfg.tolerances["ode_fd"]))
    return reports


def suite_cor34(cfg: SuiteConfig):
    space = cfg.need_space()
    M = space.metric
    tol = cfg.tolerances["null"]
    planes = cfg.grid["planes"]
    if space.separable is not None:
        sep = space.separable
        if sep.eps != -1:
            raise ConfigError("cor34-null needs a Lorentzian fiber (eps = -1)")
        n = sep.base.dim
        rng = np.random.default_rng(cfg.seed)
        pts = sample_box(M.domain, cfg.grid["points"], seed=cfg.seed)
        plane_vals, scan_vals = [], []
        for q in pts:
            gN = sep.base(q[:n])
            a = rng.standard_normal(n)
            v = a / np.sqrt(a @ gN @ a)
            plane_vals.append(abs(lightlike_sectional(M, S, flat_null_plane(sep, q, v))))
            scan_vals.append(null_curvature_scan(M, S, q, planes, cfg.seed).min_abs)
        return [
            DefectReport.from_samples("flat_null_plane", pts, plane_vals, tol),
            DefectReport.from_samples("scan_min_abs", pts, scan_vals, tol),
        ]
    points = _option(cfg, "points", required=True)
    need = float(_option(cfg, "min_abs_required", 0.5))
    pts, short, notes = [], [], []
    for q in points:
        scan = null_curvature_scan(M, S, np.asarray(q, dtype=float), planes, cfg.seed)
        pts.append(q)
        short.append(max(0.0, need - scan.min_abs))
        notes.append(f"min|K_u|={scan.min_abs:.6g}")
    return [DefectReport.from_samples("null_margin", pts, short, 0.0, note="; ".join(notes))]


def suite_thm52(cfg: SuiteConfig):
    space = cfg.need_space()
    M = space.metric
    samples = sample_box(M.domain, cfg.grid["samples"], seed=cfg.seed)
    delta, rep = einstein_defect(M, S, samples, tolerance=cfg.tolerances["einstein"])
    reports = [rep]
    expect = _option(cfg, "expect_delta")
    if expect is not None:
        reports.append(
            DefectReport.from_samples("delta_fit", [[delta]], [abs(delta - float(expect))], cfg.tolerances["delta"])
        )
    chain = _option(cfg, "chain")
    if chain is not None:
        if not isinstance(chain, dict):
            raise ConfigError("chain must be an object")
        sep = space.require_separable()
        try:
            ccfg = EinsteinChainConfig(**{k: float(v) for k, v in chain.items()})
        except TypeError as exc:
            raise ConfigError(f"invalid chain config: {exc}") from exc
        base = sep.base_static()
        pts = sample_box(base.domain, cfg.grid["points"], seed=cfg.seed)
        reports.extend(einstein_chain_residuals(sep, ccfg, pts, S, cfg.tolerances["chain"]))
    return reports


DEFAULT_TOD = [
    {"k": [2.0, 0.0, -1.0], "domain": [[-0.9, 0.9], [-1.0, 1.0]]},
    {"k": [2.0, 0.0, 0.0], "domain": [[-0.9, 0.9], [-1.0, 1.0]]},
    {"k": [2.0, 0.0, 1.0], "domain": [[-0.9, 0.9], [-1.0, 1.0]]},
    {"k": [1.0, -1.0, 0.0], "domain": [[2.0, 5.0], [-1.0, 1.0]]},
]


def suite_tod(cfg: SuiteConfig):
    entries = _option(cfg, "tod", DEFAULT_TOD)
    if not isinstance(entries, list) or not entries:
        raise ConfigError("tod must be a nonempty list of {k, domain}")
    reports = []
    for entry in entries:
        space = build_space({"kind": cat.TOD, **entry})
        k1, k2, k3 = space.catalog.k
        M = space.metric
        pts = sample_box(M.domain, cfg.grid["samples"], seed=cfg.seed)
        diffs = [abs(gaussian_curvature(M, S, p) - cat.tod_curvature(k1, k2, k3, p[0])) for p in pts]
        label = ",".join(f"{x:g}" for x in (k1, k2, k3))
        reports.append(DefectReport.from_samples(f"tod[{label}]", pts, diffs, cfg.tolerances["tod"]))
    return reports


def suite_flow(cfg: SuiteConfig):
    space = cfg.need_space()
    M = space.metric
    V = cfg.need_field(space)
    leaf = build_leaf(_option(cfg, "leaf", required=True), space)
    fcfg = build_flow(_option(cfg, "flow"))
    tol = cfg.tolerances["flow"]
    pull, norm = verify_flow_decomposition(M, V, leaf, fcfg, tol)
    pull2, norm2 = verify_flow_decomposition(M, V, leaf, fcfg.halved(), tol)
    taus = np.linspace(-fcfg.max_time, fcfg.max_time, fcfg.n_times)
    pts, gaps = [], []
    for y in np.asarray(leaf.params, dtype=float).reshape(len(leaf.params), -1):
        x = leaf.point(y)
        a = flow_samples(M, V, x, taus, fcfg)
        b = flow_samples(M, V, x, taus, fcfg.halved())
        for tau, xa, xb in zip(taus, a, b):
            pts.append(np.append(y, tau))
            gaps.append(float(np.max(np.abs(xa - xb))))
    sh = cfg.tolerances["step_halving"]
    defect_gap = [abs(pull.sup_defect - pull2.sup_defect), abs(norm.sup_defect - norm2.sup_defect)]
    return [
        pull,
        norm,
        DefectReport.from_samples("step_halving_points", pts, gaps, sh),
        DefectReport.from_samples("step_halving_defects", [[0.0], [1.0]], defect_gap, sh),
    ]


def suite_bianchi(cfg: SuiteConfig):
    space = cfg.need_space()
    M = space.metric
    tol = cfg.tolerances
    pts = sample_box(M.domain, cfg.grid["samples"], seed=cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    rows = {k: [] for k in ("christoffel_symmetry", "metric_compatibility", "first_bianchi", "ricci_symmetry",
                            "richardson_agreement", "sectional_invariance")}
    for p in pts:
        curv = curvature_tensors(M, S, p)
        G, g = curv.gamma, curv.metric
        rows["christoffel_symmetry"].append(float(np.max(np.abs(G - np.transpose(G, (0, 2, 1))))))
        dg = M.first_derivatives(p, S)
        comp = dg - np.einsum("lki,lj->kij", G, g) - np.einsum("lkj,il->kij", G, g)
        rows["metric_compatibility"].append(float(np.max(np.abs(comp))))
        R = curv.riemann
        cyc = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
        rows["first_bianchi"].append(float(np.max(np.abs(cyc))))
        rows["ricci_symmetry"].append(float(np.max(np.abs(curv.ricci - curv.ricci.T))))
        rich = gradient_fd(M.fn, p, M.domain, S.step, True)
        plain = gradient_fd(M.fn, p, M.domain, S.step / 2, False)
        rows["richardson_agreement"].append(float(np.max(np.abs(rich - plain))))
        rows["sectional_invariance"].append(_sectional_invariance(M, p, curv, rng) if M.dim >= 2 else 0.0)
    names = {
        "christoffel_symmetry": "christoffel_symmetry",
        "metric_compatibility": "metric_compatibility",
        "first_bianchi": "bianchi",
        "ricci_symmetry": "ricci_symmetry",
        "richardson_agreement": "richardson",
        "sectional_invariance": "sectional_invariance",
    }
    return [DefectReport.from_samples(k, pts, v, tol[names[k]]) for k, v in rows.items()]


def _sectional_invariance(M, p, curv, rng) -> float:
    """Relative change of K under a random change of basis of a random plane."""
    for _ in range(100):
        v, w = rng.standard_normal(M.dim), rng.standard_normal(M.dim)
        A = rng.uniform(-2.0, 2.0, (2, 2))
        if abs(np.linalg.det(A)) < 0.1:
            continue
        try:
            k = sectional_curvature(M, S, p, v, w, curv)
            k2 = sectional_curvature(M, S, p, A[0, 0] * v + A[0, 1] * w, A[1, 0] * v + A[1, 1] * w, curv)
        except DegeneratePlaneError:
            continue
        q = (v @ curv.metric @ v) * (w @ curv.metric @ w) - (v @ curv.metric @ w) ** 2
        if abs(q) < 1e-3:
            continue
        return abs(k - k2) / max(1.0, abs(k))
    raise DegeneratePlaneError("could not draw a nondegenerate plane")


RUNNERS = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "prop31": suite_prop31,
    "prop41": suite_prop41,
    "prop42-scan": suite_prop42,
    "prop45-catalog": suite_prop45,
    "ode": suite_ode,
    "cor34-null": suite_cor34,
    "thm52-einstein": suite_thm52,
    "tod-family": suite_tod,
    "flow-decomp": suite_flow,
    "bianchi-sanity": suite_bianchi,
}


def run_suite(cfg: SuiteConfig) -> SuiteReport:
    """Run one named suite; deterministic for a fixed config and seed (apart from ``ms``)."""
    start = time.perf_counter()
    reports = RUNNERS[cfg.suite](cfg)
    ms = (time.perf_counter() - start) * 1000.0
    return SuiteReport.from_reports(cfg.suite, reports, cfg.to_dict(), ms)
