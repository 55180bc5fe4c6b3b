"""JSON descriptors for spaces, fields and leaves.

Expression strings are parsed with sympy and compiled with ``lambdify``;
gradients, Hessians and Jacobians of expressions are derived symbolically.
Chart coordinates are always available as ``x0, x1, ...``; spaces also expose
readable names (``s, t`` on surfaces, ``u, v`` on Tod surfaces, ...).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import parse_expr, standard_transformations

from . import catalog as cat
from .errors import ConfigError, GeometryError
from .flow import FlowConfig, Leaf
from .manifold import MetricField, ScalarField, VectorField, coordinate_field
from .products import (
    Profile1D,
    SeparableWarpSpec,
    StaticProductSpec,
    build_static,
    flat_metric,
)

_ALLOWED = {
    name: getattr(sp, name)
    for name in (
        "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "atan", "asinh", "acosh", "atanh", "pi", "E",
        "Abs",
    )
}


def _symbols(dim: int, names=()):
    xs = sp.symbols(f"x0:{dim}") if dim else ()
    table = {str(x): x for x in xs}
    for n, x in zip(names, xs):
        table[n] = x
    return list(xs), table


def parse(expr, table) -> sp.Expr:
    if isinstance(expr, (int, float)):
        return sp.Float(expr) if isinstance(expr, float) else sp.Integer(expr)
    if not isinstance(expr, str):
        raise ConfigError(f"expected an expression string, got {expr!r}")
    local = dict(_ALLOWED)
    local.update(table)
    try:
        out = parse_expr(expr, local_dict=local, global_dict={"__builtins__": {}, **_sympy_core()},
                         transformations=standard_transformations)
    except Exception as exc:  # sympy raises a zoo of exception types on bad input
        raise ConfigError(f"cannot parse expression {expr!r}: {exc}") from exc
    unknown = {str(s) for s in out.free_symbols} - {str(v) for v in table.values()}
    if unknown:
        raise ConfigError(f"expression {expr!r} uses unknown symbols {sorted(unknown)}")
    return out


def _sympy_core():
    return {"Integer": sp.Integer, "Float": sp.Float, "Rational": sp.Rational, "Symbol": sp.Symbol}


def _compile(expr, xs):
    fn = sp.lambdify([xs], expr, modules="numpy")
    return lambda p: fn(np.asarray(p, dtype=float))


def scalar_from_expr(expr, dim: int, names=(), label="") -> ScalarField:
    xs, table = _symbols(dim, names)
    e = parse(expr, table)
    val = _compile(e, xs)
    grad_e = [sp.diff(e, x) for x in xs]
    hess_e = [[sp.diff(gi, x) for x in xs] for gi in grad_e]
    grad = _compile(sp.Matrix(grad_e) if xs else sp.Matrix([]), xs)
    hess = _compile(sp.Matrix(hess_e) if xs else sp.Matrix([]), xs)
    return ScalarField(
        lambda p: float(val(p)),
        lambda p: np.asarray(grad(p), dtype=float).reshape(dim),
        lambda p: np.asarray(hess(p), dtype=float).reshape(dim, dim),
        name=label or str(expr),
    )


def profile_from_expr(expr, var="s") -> Profile1D:
    xs, table = _symbols(1, (var,))
    e = parse(expr, table)
    fns = [sp.lambdify(xs[0], sp.diff(e, xs[0], k), modules="numpy") for k in range(3)]
    return Profile1D(lambda x: float(fns[0](x)), lambda x: float(fns[1](x)), lambda x: float(fns[2](x)), str(expr))


def field_from_exprs(components, dim: int, names=(), label="") -> VectorField:
    if len(components) != dim:
        raise ConfigError(f"field needs {dim} components, got {len(components)}")
    xs, table = _symbols(dim, names)
    es = [parse(c, table) for c in components]
    val = _compile(sp.Matrix(es), xs)
    jac = _compile(sp.Matrix(es).jacobian(sp.Matrix(xs)), xs)
    return VectorField(
        dim,
        lambda p: np.asarray(val(p), dtype=float).reshape(dim),
        lambda p: np.asarray(jac(p), dtype=float).reshape(dim, dim),
        name=label or f"({', '.join(map(str, components))})",
    )


# ---------------------------------------------------------------------------
# spaces
# ---------------------------------------------------------------------------


@dataclass
class Space:
    """A built space with every product structure the descriptor provides."""

    metric: MetricField
    names: tuple
    static: StaticProductSpec | None = None
    separable: SeparableWarpSpec | None = None
    catalog: cat.CatalogSpace | None = None
    descriptor: dict = field(default_factory=dict)

    def __post_init__(self):
        names = tuple(self.names)
        if len(names) != self.metric.dim:
            names = tuple(f"x{i}" for i in range(self.metric.dim))
        self.names = names

    def require_static(self) -> StaticProductSpec:
        if self.static is None:
            raise ConfigError(f"space kind {self.descriptor.get('kind')!r} has no static product structure")
        return self.static

    def require_separable(self) -> SeparableWarpSpec:
        if self.separable is None:
            raise ConfigError(f"space kind {self.descriptor.get('kind')!r} is not a warped product N x_lam (R x_c R)")
        return self.separable


def _get(desc, key, default=None, kind=None):
    if key not in desc:
        if default is None:
            raise ConfigError(f"descriptor {desc.get('kind', '?')!r} is missing {key!r}")
        return default
    val = desc[key]
    if kind is not None and not isinstance(val, kind):
        raise ConfigError(f"{key!r} must be {kind}, got {val!r}")
    return val


def _interval(val, label):
    try:
        a = np.asarray(val, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{label} must be numeric") from exc
    if a.shape != (2,) or not np.all(np.isfinite(a)) or not a[0] < a[1]:
        raise ConfigError(f"{label} must be an increasing interval [lo, hi], got {val!r}")
    return tuple(float(x) for x in a)


def _box(val, dim, label="domain"):
    try:
        a = np.asarray(val, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{label} must be numeric") from exc
    if a.shape != (dim, 2) or not np.all(a[:, 0] < a[:, 1]):
        raise ConfigError(f"{label} must be {dim} increasing intervals, got {val!r}")
    return a


def _eps(desc, default=-1):
    e = desc.get("eps", default)
    if e not in (1, -1):
        raise ConfigError(f"eps must be +1 or -1, got {e!r}")
    return int(e)


def _number(desc, key, default):
    v = desc.get(key, default)
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not np.isfinite(v):
        raise ConfigError(f"{key!r} must be a finite number, got {v!r}")
    return float(v)


def _surface_catalog(desc) -> cat.CatalogSpace:
    domain = desc.get("domain")
    if domain is not None:
        domain = tuple(map(tuple, _box(domain, 2)))
    return cat.CatalogSpace(desc["kind"], _eps(desc, 1), _number(desc, "r", 1.0), domain=domain)


def build_space(desc) -> Space:
    """Build a :class:`Space` from a JSON descriptor (see README for the schema)."""
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigError(f"space descriptor must be an object with a 'kind', got {desc!r}")
    kind = desc["kind"]
    try:
        return _BUILDERS[kind](desc)
    except KeyError as exc:
        if kind not in _BUILDERS:
            raise ConfigError(f"unknown space kind {kind!r}; expected one of {sorted(_BUILDERS)}") from exc
        raise ConfigError(f"descriptor {kind!r} is missing {exc}") from exc
    except GeometryError as exc:
        raise ConfigError(f"invalid {kind} space: {exc}") from exc


def _surface(desc):
    c = _surface_catalog(desc)
    return Space(cat.catalog_metric(c), ("s", "t"), cat.static_spec(c), cat.separable_spec(c), c, desc)


def _flat(desc):
    dim = int(_get(desc, "dim", kind=int))
    signs = desc.get("signs")
    return Space(flat_metric(dim, _box(_get(desc, "domain"), dim), signs), tuple(desc.get("coords", ())), descriptor=desc)


def _expr_metric(desc):
    dim = int(_get(desc, "dim", kind=int))
    names = tuple(desc.get("coords", ()))
    rows = _get(desc, "components", kind=list)
    if len(rows) != dim or any(len(r) != dim for r in rows):
        raise ConfigError(f"metric components must be a {dim}x{dim} matrix")
    xs, table = _symbols(dim, names)
    mat = sp.Matrix([[parse(e, table) for e in r] for r in rows])
    if mat != mat.T:
        raise ConfigError("metric components must be symmetric")
    fn = _compile(mat, xs)
    M = MetricField(dim, _box(_get(desc, "domain"), dim), lambda p: np.asarray(fn(p), dtype=float),
                    name=desc.get("name", "expr"))
    return Space(M, names, descriptor=desc)


def _static_product(desc):
    base = build_space(_get(desc, "base", kind=dict))
    n = base.metric.dim
    f = scalar_from_expr(_get(desc, "f"), n, base.names, "f")
    spec = StaticProductSpec(base.metric, f, _eps(desc), _interval(desc.get("t_domain", (-5.0, 5.0)), "t_domain"))
    return Space(build_static(spec), base.names + ("t",), spec, descriptor=desc)


def _fiber_profile(desc):
    c = profile_from_expr(_get(desc, "c"), "s")
    return c, _eps(desc), _interval(desc.get("s_domain", cat.DEFAULT_BOX), "s_domain"), _interval(
        desc.get("t_domain", cat.DEFAULT_BOX), "t_domain"
    )


def _warped(desc):
    N = build_space(_get(desc, "N", kind=dict))
    n = N.metric.dim
    lam = scalar_from_expr(_get(desc, "lam"), n, N.names, "lam")
    fib = _get(desc, "fiber", kind=dict)
    names = N.names + ("s", "t")
    if fib.get("kind") == "profile":
        c, eps, s_box, t_box = _fiber_profile(fib)
        sep = SeparableWarpSpec(N.metric, lam, c, eps, s_box, t_box)
        return Space(sep.metric(), names, sep.static_spec(), sep, None, desc)
    fiber = _surface_catalog(fib)
    space = cat.CatalogSpace(cat.WARPED, N=N.metric, lam=lam, fiber=fiber)
    return Space(cat.catalog_metric(space), names, cat.static_spec(space), cat.separable_spec(space), space, desc)


def _doubly(desc):
    N = build_space(_get(desc, "N", kind=dict))
    n = N.metric.dim
    lam = scalar_from_expr(_get(desc, "lam"), n, N.names, "lam")
    f = scalar_from_expr(_get(desc, "f"), n, N.names, "f")
    s_box = _interval(desc.get("s_domain", cat.DEFAULT_BOX), "s_domain")
    t_box = _interval(desc.get("t_domain", cat.DEFAULT_BOX), "t_domain")
    space = cat.CatalogSpace(cat.DOUBLY_WARPED, _eps(desc), N=N.metric, lam=lam, f=f, domain=(s_box, t_box))
    return Space(cat.catalog_metric(space), N.names + ("s", "t"), cat.static_spec(space), None, space, desc)


def _tod(desc):
    k = _get(desc, "k", kind=list)
    if len(k) != 3:
        raise ConfigError("TodSurface needs k = [k1, k2, k3]")
    box = _box(_get(desc, "domain"), 2)
    space = cat.CatalogSpace(cat.TOD, k=tuple(float(x) for x in k), domain=tuple(map(tuple, box)))
    return Space(cat.catalog_metric(space), ("u", "v"), catalog=space, descriptor=desc)


def _direct(desc):
    parts = [build_space(d) for d in _get(desc, "factors", kind=list)]
    if len(parts) < 2:
        raise ConfigError("DirectProductSurfaces needs at least two factors")
    M = cat.direct_product([p.metric for p in parts])
    return Space(M, (), descriptor=desc)


_BUILDERS = {
    cat.R2EPS: _surface,
    cat.H2EPS: _surface,
    cat.H2HAT: _surface,
    cat.WARPED: _warped,
    cat.DOUBLY_WARPED: _doubly,
    cat.TOD: _tod,
    cat.DIRECT: _direct,
    "StaticProduct": _static_product,
    "flat": _flat,
    "expr": _expr_metric,
}


# ---------------------------------------------------------------------------
# fields, leaves, flows
# ---------------------------------------------------------------------------


def build_field(desc, space: Space) -> VectorField:
    if not isinstance(desc, dict):
        raise ConfigError(f"field descriptor must be an object, got {desc!r}")
    dim = space.metric.dim
    if "family" in desc:
        if space.catalog is None:
            raise ConfigError("field families need a catalog surface or a warped catalog space")
        fam = cat.StaticFieldFamily(
            desc["family"],
            _number(desc, "alpha", 0.0),
            _number(desc, "beta", 1.0),
            _number(desc, "gamma", 0.0),
        )
        V = cat.catalog_field(space.catalog, fam)
    elif desc.get("kind") == "coordinate":
        axis = desc.get("axis")
        if isinstance(axis, str):
            if axis not in space.names:
                raise ConfigError(f"unknown coordinate {axis!r}; space has {space.names}")
            axis = space.names.index(axis)
        if not isinstance(axis, int) or not 0 <= axis < dim:
            raise ConfigError(f"coordinate axis must be in [0, {dim}), got {axis!r}")
        V = coordinate_field(dim, axis)
    elif desc.get("kind") == "expr":
        V = field_from_exprs(_get(desc, "components", kind=list), dim, space.names)
    else:
        raise ConfigError("field descriptor needs 'family' or kind 'coordinate' / 'expr'")
    if "perturbation" in desc:
        V = V + build_field(desc["perturbation"], space)
    return V


def build_leaf(desc, space: Space) -> Leaf:
    """``{"embed": [exprs in y0, y1, ...], "params": [[...], ...] | {"lo", "hi", "n"}}``."""
    if not isinstance(desc, dict):
        raise ConfigError("leaf descriptor must be an object")
    embed = _get(desc, "embed", kind=list)
    if len(embed) != space.metric.dim:
        raise ConfigError(f"leaf embedding needs {space.metric.dim} components")
    params = _get(desc, "params")
    if isinstance(params, dict):
        lo = np.atleast_1d(np.asarray(_get(params, "lo"), dtype=float))
        hi = np.atleast_1d(np.asarray(_get(params, "hi"), dtype=float))
        n = int(params.get("n", 5))
        if lo.shape != hi.shape or n < 1:
            raise ConfigError("leaf params need matching lo/hi and n >= 1")
        axes = [np.linspace(a, b, n) for a, b in zip(lo, hi)]
        params = np.array(list(itertools.product(*axes)))
    else:
        params = np.asarray(params, dtype=float)
        params = params.reshape(len(params), -1)
    if len(params) < 1:
        raise ConfigError("leaf needs at least one parameter point")
    k = params.shape[1]
    ys = sp.symbols(f"y0:{k}")
    table = {str(y): y for y in ys}
    exprs = [parse(e, table) for e in embed]
    fn = sp.lambdify([ys], sp.Matrix(exprs), modules="numpy")
    dim = space.metric.dim
    return Leaf(lambda y: np.asarray(fn(np.asarray(y, dtype=float)), dtype=float).reshape(dim), params)


def build_flow(desc) -> FlowConfig:
    desc = desc or {}
    try:
        return FlowConfig(float(desc.get("step", 1e-3)), float(desc.get("max_time", 0.5)), int(desc.get("n_times", 5)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid flow config: {exc}") from exc
