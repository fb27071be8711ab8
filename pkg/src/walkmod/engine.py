"""Projected ascent for smooth concave maximization over the nonnegative orthant.

Two step rules share one arc search: plain projected gradient (step along
the gradient, spectral step-size guess) and a two-metric projected Newton
step (Bertsekas) that scales only the free coordinates. The dual of the
modulus program and the cone-membership NNLS both run on this.

Sufficient increase is tested on ``obj.gain`` when the objective provides
it, so progress stays measurable once value changes drop below the
roundoff of the value itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Protocol

import numpy as np
from scipy import linalg


class ConcaveObjective(Protocol):
    def evaluate(self, x: np.ndarray) -> tuple[float, np.ndarray, Any]:
        """Return ``(value, gradient, state)``."""

    def curvature(self, x: np.ndarray, state: Any, free: np.ndarray) -> np.ndarray:
        """Negative Hessian restricted to ``free`` (positive semidefinite)."""

    # Optional: ``gain(x, state, dx, state_new) -> f(x + dx) - f(x)`` computed
    # without cancellation. Near the optimum the plain difference of two
    # values is pure roundoff and cannot steer the line search.


@dataclass
class AscentResult:
    x: np.ndarray
    value: float
    grad: np.ndarray
    state: Any
    iterations: int
    residual: float
    converged: bool


_SIGMA = 1e-4


def projected_ascent(
    obj: ConcaveObjective,
    x0: np.ndarray,
    residual: Callable[[np.ndarray, np.ndarray, Any], float],
    *,
    tol: float,
    max_iter: int,
    method: str = "newton",
) -> AscentResult:
    if method not in ("newton", "gradient"):
        raise ValueError(f"unknown method {method!r}")
    x = np.maximum(np.asarray(x0, dtype=float), 0.0)
    f, g, st = obj.evaluate(x)
    step = 1.0
    prev = None
    r = residual(x, g, st)
    k = 0
    while k < max_iter:
        if r <= tol:
            return AscentResult(x, f, g, st, k, r, True)
        k += 1
        pg = x - np.maximum(x + g, 0.0)
        eps_k = min(1e-3, float(np.max(np.abs(pg))))
        binding = (x <= eps_k) & (g < 0)
        free = ~binding

        accepted = False
        if method == "newton" and free.any():
            d = g.copy()
            H = obj.curvature(x, st, free)
            # proximal shift: rank-deficient curvature (more walks than
            # edges) still gives a bounded step, and it vanishes at the optimum
            scale = max(1.0, float(np.max(np.diag(H)))) if H.size else 1.0
            shift = 1e-12 * scale + float(np.max(np.abs(pg)))
            try:
                c = linalg.cho_factor(H + shift * np.eye(H.shape[0]), lower=True, check_finite=False)
                d[free] = linalg.cho_solve(c, g[free], check_finite=False)
            except (linalg.LinAlgError, ValueError):
                d = None
            if d is not None and np.all(np.isfinite(d)):
                accepted, x_new, out = _arc_search(obj, x, f, g, st, d, free, 1.0)
        if not accepted:
            if prev is not None:
                s = x - prev[0]
                y = prev[1] - g
                sy = float(s @ y)
                if sy > 0:
                    step = float(s @ s) / sy
            accepted, x_new, out = _arc_search(obj, x, f, g, st, g, None, step)
        if not accepted:
            break
        prev = (x, g)
        x = x_new
        f, g, st = out
        r = residual(x, g, st)
    return AscentResult(x, f, g, st, k, r, r <= tol)


def _arc_search(obj, x, f, g, st, d, free, alpha):
    gain = getattr(obj, "gain", None)
    slack = 8 * np.finfo(float).eps * max(1.0, abs(f))
    for _ in range(80):
        x_new = np.maximum(x + alpha * d, 0.0)
        dx = x_new - x
        if not np.any(dx):
            return False, x, None
        out = obj.evaluate(x_new)
        if free is None:
            pred = float(g @ dx)
        else:
            pred = alpha * float(g[free] @ d[free]) + float(g[~free] @ dx[~free])
        if not np.isfinite(out[0]):
            alpha *= 0.5
            continue
        if gain is not None:
            ok = gain(x, st, dx, out[2]) >= _SIGMA * pred
        else:
            ok = out[0] >= f + _SIGMA * pred - slack
        if ok:
            return True, x_new, out
        alpha *= 0.5
    return False, x, None
