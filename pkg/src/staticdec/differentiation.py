"""Finite-difference stencils with domain clamping and Richardson extrapolation.

Every stencil here has O(h^2) leading error, so a single Richardson step with
ratio 2 (``(4 D(h/2) - D(h)) / 3``) lifts it to O(h^4).  Near the edge of the
domain box the central stencil is replaced by a one-sided one of the same
order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# offsets in units of h, weights in units of 1/h (first) or 1/h^2 (second)
_FIRST = {
    "central": ((-1.0, 1.0), (-0.5, 0.5)),
    "forward": ((0.0, 1.0, 2.0), (-1.5, 2.0, -0.5)),
    "backward": ((0.0, -1.0, -2.0), (1.5, -2.0, 0.5)),
}
_SECOND = {
    "central": ((-1.0, 0.0, 1.0), (1.0, -2.0, 1.0)),
    "forward": ((0.0, 1.0, 2.0, 3.0), (2.0, -5.0, 4.0, -1.0)),
    "backward": ((0.0, -1.0, -2.0, -3.0), (2.0, -5.0, 4.0, -1.0)),
}
# how far (in units of h) each stencil reaches to the left and right
_REACH = {"central": (1.0, 1.0), "forward": (0.0, 3.0), "backward": (3.0, 0.0)}

_DOMAIN_SLACK = 1e-12


@dataclass(frozen=True)
class DerivativeScheme:
    """Step sizes and options for numerical differentiation.

    ``step`` is used for first derivatives, ``step2`` for second derivatives.
    ``degeneracy_floor`` bounds ``|det g|`` and plane denominators from below.
    """

    step: float = 1e-5
    step2: float = 1e-3
    richardson: bool = True
    degeneracy_floor: float = 1e-12

    def __post_init__(self):
        if not (self.step > 0 and self.step2 > 0):
            raise ValueError("derivative steps must be positive")
        if not self.degeneracy_floor > 0:
            raise ValueError("degeneracy_floor must be positive")


DEFAULT_SCHEME = DerivativeScheme()


def as_domain(domain, dim: int) -> np.ndarray:
    """Normalize a domain box to a ``(dim, 2)`` float array (``None`` -> unbounded)."""
    if domain is None:
        box = np.empty((dim, 2))
        box[:, 0] = -np.inf
        box[:, 1] = np.inf
        return box
    box = np.asarray(domain, dtype=float).reshape(dim, 2)
    if np.any(box[:, 0] > box[:, 1]):
        raise ValueError(f"empty domain box {box.tolist()}")
    return box


def in_domain(p, domain: np.ndarray, slack: float = _DOMAIN_SLACK) -> bool:
    p = np.asarray(p, dtype=float)
    return bool(np.all(p >= domain[:, 0] - slack) and np.all(p <= domain[:, 1] + slack))


def check_point(p, domain: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (domain.shape[0],):
        raise DomainError(f"point has shape {p.shape}, chart dimension is {domain.shape[0]}")
    if not np.all(np.isfinite(p)):
        raise DomainError(f"non-finite point {p.tolist()}")
    if not in_domain(p, domain):
        raise DomainError(f"point {p.tolist()} outside domain {domain.tolist()}")
    return p


def _kind(x: float, lo: float, hi: float, h: float) -> str:
    # widest stencil used with step h reaches 3h on one side
    for kind in ("central", "forward", "backward"):
        left, right = _REACH[kind]
        if x - left * h >= lo - _DOMAIN_SLACK and x + right * h <= hi + _DOMAIN_SLACK:
            return kind
    raise DomainError(f"domain interval [{lo}, {hi}] too narrow for step {h} at {x}")


def _first_terms(kind, h):
    offs, wts = _FIRST[kind]
    return [(o * h, w / h) for o, w in zip(offs, wts)]


def _second_terms(kind, h):
    offs, wts = _SECOND[kind]
    return [(o * h, w / h**2) for o, w in zip(offs, wts)]


def _combine(fn, p, terms_by_axis):
    """Sum ``w * fn(p + offset)`` over a tensor-product stencil."""
    total = None
    grids = [[(ax, o, w) for o, w in terms] for ax, terms in terms_by_axis]

    def rec(level, shift, weight):
        nonlocal total
        if level == len(grids):
            val = weight * np.asarray(fn(p + shift), dtype=float)
            total = val if total is None else total + val
            return
        for ax, o, w in grids[level]:
            if w == 0.0:
                continue
            s = shift.copy()
            s[ax] += o
            rec(level + 1, s, weight * w)

    rec(0, np.zeros_like(p), 1.0)
    return total


def _richardson(estimate, h, richardson):
    if not richardson:
        return estimate(h)
    coarse = estimate(h)
    fine = estimate(h / 2)
    return (4.0 * fine - coarse) / 3.0


def gradient_fd(fn, p, domain=None, step=DEFAULT_SCHEME.step, richardson=True):
    """First partial derivatives of ``fn`` at ``p``.

    Returns an array of shape ``(dim, *fn(p).shape)`` with ``out[i] = d_i fn``.
    """
    p = np.asarray(p, dtype=float)
    dim = p.shape[0]
    box = as_domain(domain, dim)
    out = []
    # stencil kind is fixed at the coarse step so both Richardson levels match
    kinds = [_kind(p[i], box[i, 0], box[i, 1], step) for i in range(dim)]
    for i in range(dim):

        def est(h, i=i):
            return _combine(fn, p, [(i, _first_terms(kinds[i], h))])

        out.append(_richardson(est, step, richardson))
    return np.array(out)


def hessian_fd(fn, p, domain=None, step=DEFAULT_SCHEME.step2, richardson=True):
    """Second partial derivatives of ``fn`` at ``p``, shape ``(dim, dim, *out)``."""
    p = np.asarray(p, dtype=float)
    dim = p.shape[0]
    box = as_domain(domain, dim)
    res = [[None] * dim for _ in range(dim)]
    kinds = [_kind(p[i], box[i, 0], box[i, 1], step) for i in range(dim)]
    for i in range(dim):

        def pure(h, i=i):
            return _combine(fn, p, [(i, _second_terms(kinds[i], h))])

        res[i][i] = _richardson(pure, step, richardson)
        for j in range(i + 1, dim):

            def mixed(h, i=i, j=j):
                return _combine(
                    fn, p, [(i, _first_terms(kinds[i], h)), (j, _first_terms(kinds[j], h))]
                )

            res[i][j] = res[j][i] = _richardson(mixed, step, richardson)
    return np.array(res)


def derivative_1d(fn, x: float, step: float = 1e-5, order: int = 1) -> float:
    """Plain central difference of a scalar function of one variable."""
    if order == 1:
        return (fn(x + step) - fn(x - step)) / (2 * step)
    if order == 2:
        return (fn(x + step) - 2 * fn(x) + fn(x - step)) / step**2
    raise ValueError("order must be 1 or 2")
