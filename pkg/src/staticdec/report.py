"""Defect reports and sample grids."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc


@dataclass(frozen=True)
class DefectReport:
    """Sup-norm residual of a named identity over a set of sample points.

    ``samples`` holds ``(point, local_defect)`` pairs in evaluation order.  An
    empty sample list has ``sup_defect == 0``; ``note`` says why it is empty.
    """

    identity_name: str
    sup_defect: float
    samples: tuple = ()
    tolerance: float = 0.0
    passed: bool = True
    note: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @classmethod
    def from_samples(cls, name, points, defects, tolerance, note="", extra=None):
        defects = [float(d) for d in defects]
        samples = tuple((np.asarray(p, dtype=float), d) for p, d in zip(points, defects))
        if defects:
            # nan must propagate into the sup rather than be skipped by max()
            sup = float(np.max(defects))
        else:
            sup = 0.0
        passed = bool(sup <= tolerance)  # False for nan
        return cls(name, sup, samples, float(tolerance), passed, note, dict(extra or {}))

    @property
    def worst_point(self) -> list[float]:
        if not self.samples:
            return []
        defects = np.array([d for _, d in self.samples])
        idx = int(np.nanargmax(defects)) if not np.all(np.isnan(defects)) else 0
        if np.any(np.isnan(defects)):
            idx = int(np.flatnonzero(np.isnan(defects))[0])
        return [float(x) for x in self.samples[idx][0]]

    def __str__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.identity_name}: sup={self.sup_defect:.3e} tol={self.tolerance:.1e}"


def sample_box(domain, n: int = 100, seed: int = 0, margin: float = 0.05) -> np.ndarray:
    """Scrambled Halton points in the domain box, shrunk by ``margin`` of each width.

    The margin keeps finite-difference stencils away from the box faces.
    """
    box = np.asarray(domain, dtype=float)
    if n < 1:
        raise ValueError("need at least one sample")
    if not np.all(np.isfinite(box)):
        raise ValueError("sampling needs a bounded domain box")
    dim = box.shape[0]
    if dim == 0:
        return np.zeros((n, 0))
    width = box[:, 1] - box[:, 0]
    lo = box[:, 0] + margin * width
    hi = box[:, 1] - margin * width
    unit = qmc.Halton(d=dim, scramble=True, seed=seed).random(n)
    return lo + unit * (hi - lo)


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("STATICDEC_THREADS", "1")))
    except ValueError:
        return 1


def map_samples(fn, samples):
    """``[fn(s) for s in samples]``, threaded when STATICDEC_THREADS > 1; order is kept."""
    n = thread_count()
    if n == 1:
        return [fn(s) for s in samples]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, samples))
