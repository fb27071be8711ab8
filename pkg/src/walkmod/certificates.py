"""Independent checks on a computed modulus.

KKT residuals, extraction of the positive-multiplier subfamily, a cone
membership test for that subfamily, the electrical (Laplacian) route to
``Cap(A, B)``, and exhaustive enumeration for small graphs.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import linalg
from scipy.sparse.linalg import cg

from .engine import projected_ascent
from .errors import (
    DimensionMismatch,
    EmptyFamily,
    NotConverged,
    OverlappingSets,
    TooLarge,
    UnitLengthViolation,
)
from .graph import Graph, laplacian
from .oracles import ConnectingFamily, ExplicitFamily, ViaFamily
from .solver import ModulusResult, Status, solve_inner
from .walks import Walk, multiplicity_matrix, p_energy


@dataclass(frozen=True)
class KktReport:
    primal_infeasibility: float
    dual_infeasibility: float
    stationarity_residual: float
    complementarity_residual: float

    def max_residual(self) -> float:
        return max(
            self.primal_infeasibility,
            self.dual_infeasibility,
            self.stationarity_residual,
            self.complementarity_residual,
        )

    def passes(self, tol: float) -> bool:
        return self.max_residual() <= tol

    def to_json(self) -> dict:
        return {k: float(v) for k, v in asdict(self).items()}


def kkt_check(g: Graph, walks: Sequence[Walk], rho, lam, p: float = 2.0) -> KktReport:
    rho = np.asarray(rho, dtype=float)
    lam = np.asarray(lam, dtype=float)
    if rho.shape != (g.m,):
        raise DimensionMismatch(f"density has shape {rho.shape}, graph has {g.m} edges")
    if lam.shape != (len(walks),):
        raise DimensionMismatch(f"{lam.shape[0]} multipliers for {len(walks)} walks")
    if not walks:
        zero = 0.0
        stat = float(np.max(np.abs(p * np.clip(rho, 0, None) ** (p - 1)), initial=0.0))
        return KktReport(zero, zero, stat, zero)
    slack = np.array([1 - rho[list(w.edge_indices)].sum() for w in walks])
    # sum_i lam_i m(gamma_i, e) accumulated edge by edge
    s = np.zeros(g.m)
    for li, w in zip(lam, walks):
        for e in w.edge_indices:
            s[e] += li
    grad = p * np.abs(rho) ** (p - 1) * np.sign(rho)
    return KktReport(
        primal_infeasibility=float(np.max(np.maximum(slack, 0))),
        dual_infeasibility=float(np.max(np.maximum(-lam, 0))),
        stationarity_residual=float(np.max(np.abs(grad - s))),
        complementarity_residual=float(np.max(np.abs(lam * slack))),
    )


def extract_beurling_subfamily(result: ModulusResult, threshold: float | None = None) -> list[Walk]:
    """Walks of the active family whose multiplier exceeds ``threshold``.

    The default threshold is ``1e-8 * max(lambda)``. Walks whose rho-length
    is off 1 by more than the inner tolerance are dropped as well: by
    complementarity their multipliers are solver noise.
    """
    if result.status is not Status.CONVERGED:
        raise NotConverged(f"result status is {result.status.value}")
    lam = np.asarray(result.multipliers)
    if threshold is None:
        threshold = 1e-8 * float(lam.max(initial=0.0))
    rho = result.density
    return [
        w for w, li in zip(result.active_family, lam)
        if li > threshold and abs(float(rho[list(w.edge_indices)].sum()) - 1) <= result.inner_tol
    ]


class _ConeFit:
    """``max -1/2 ||X^T c - b||^2`` over ``c >= 0``."""

    def __init__(self, X, b):
        self.X = X
        self.XT = X.T.tocsr()
        self.b = b

    def evaluate(self, c):
        r = self.XT @ c - self.b
        return -0.5 * float(r @ r), -(self.X @ r), r

    def gain(self, c, r, dc, r_new):
        dr = self.XT @ dc
        return -float(dr @ (r + 0.5 * dr))

    def curvature(self, c, state, free):
        Xf = self.X[np.flatnonzero(free)]
        return (Xf @ Xf.T).toarray()


def cone_residual(g: Graph, walks: Sequence[Walk], target) -> tuple[float, np.ndarray]:
    """Relative distance from ``target`` to the cone spanned by the walks' multiplicity vectors."""
    if not walks:
        raise EmptyFamily("cone of an empty family")
    b = np.asarray(target, dtype=float)
    scale = float(np.linalg.norm(b))
    if scale == 0:
        return 0.0, np.zeros(len(walks))
    X = multiplicity_matrix(walks, g.m)
    fit = _ConeFit(X, b / scale)

    def kkt(c, grad, _):
        return float(np.max(np.abs(c - np.maximum(c + grad, 0.0)), initial=0.0))

    c0 = np.zeros(len(walks))
    res = projected_ascent(fit, c0, kkt, tol=1e-13, max_iter=500)
    r = res.state
    return float(np.linalg.norm(r)), res.x * scale


def verify_beurling_criterion(
    g: Graph,
    subfamily: Sequence[Walk],
    rho,
    tol: float = 1e-6,
    p: float = 2.0,
    return_residual: bool = False,
):
    """Check that ``rho`` is extremal as certified by ``subfamily``.

    Every walk must have unit rho-length within ``tol``; then the
    criterion holds iff ``rho**(p-1)`` lies in the cone generated by the
    walks' multiplicity vectors (for ``p = 2`` this is ``rho`` itself).
    """
    rho = np.asarray(rho, dtype=float)
    for w in subfamily:
        ell = float(rho[list(w.edge_indices)].sum())
        if abs(ell - 1) > tol:
            raise UnitLengthViolation(f"{w!r} has rho-length {ell:.9g}, not 1")
    resid, _ = cone_residual(g, list(subfamily), np.clip(rho, 0, None) ** (p - 1))
    ok = resid <= tol
    return (ok, resid) if return_residual else ok


# ---------------------------------------------------------------------------
# capacity


@dataclass(frozen=True)
class CapacitaryFunction:
    values: np.ndarray
    A: frozenset[int]
    B: frozenset[int]

    def harmonic_residual(self, g: Graph) -> float:
        fixed = self.A | self.B
        Lu = laplacian(g, as_sparse=True) @ self.values
        free = [x for x in range(g.n) if x not in fixed]
        return float(np.max(np.abs(Lu[free]), initial=0.0))


def effective_conductance(g: Graph, A: Iterable[int], B: Iterable[int]) -> tuple[float, CapacitaryFunction]:
    """``Cap(A, B)`` from the Dirichlet problem ``Lu = 0`` off ``A | B``.

    ``u`` is 0 on ``A`` and 1 on ``B``; the capacity is the sum over
    undirected edges of ``(u(x) - u(y))**2``.
    """
    A = frozenset(int(a) for a in A)
    B = frozenset(int(b) for b in B)
    if not A or not B:
        raise ValueError("A and B must be nonempty")
    if A & B:
        raise OverlappingSets(f"A and B share vertices {sorted(A & B)}")
    u = np.zeros(g.n)
    u[list(B)] = 1.0
    free = np.array([x for x in range(g.n) if x not in A and x not in B], dtype=np.int64)
    if free.size:
        L = laplacian(g, as_sparse=True)
        bmask = np.zeros(g.n)
        bmask[list(B)] = 1.0
        rhs = -(L @ bmask)[free]
        Lff = L[free][:, free]
        if g.n <= 2000:
            u[free] = linalg.solve(Lff.toarray(), rhs, assume_a="pos")
        else:
            sol, info = cg(Lff, rhs, rtol=1e-12, maxiter=10 * g.n)
            if info != 0:
                raise RuntimeError(f"conjugate gradient did not converge (info={info})")
            u[free] = sol
    if g.m:
        x, y = np.array(g.edges).T
        cap = float(((u[x] - u[y]) ** 2).sum())
    else:
        cap = 0.0
    return cap, CapacitaryFunction(u, A, B)


# ---------------------------------------------------------------------------
# exhaustive oracle


def brute_force_modulus(
    g: Graph,
    family,
    p: float = 2.0,
    *,
    tol: float = 1e-9,
    max_paths: int = 5000,
) -> tuple[float, np.ndarray]:
    """Modulus of a family solved over an enumerated essential subfamily.

    Connecting families are replaced by their simple ``A -> B`` paths and
    via families by concatenated pairs of simple paths; explicit families
    are used as given.
    """
    if isinstance(family, (list, tuple)):
        family = ExplicitFamily(tuple(family))
    if not isinstance(family, (ConnectingFamily, ViaFamily, ExplicitFamily)):
        raise TypeError(f"cannot enumerate family of type {type(family).__name__}")
    if family.has_constant_walk():
        return float("inf"), np.zeros(g.m)
    walks = family.candidate_walks(limit=max_paths)
    if len(walks) > max_paths:
        raise TooLarge(f"{len(walks)} walks exceed the limit of {max_paths}")
    if not walks:
        return 0.0, np.zeros(g.m)
    rho, _ = solve_inner(g, walks, p, tol, iter_cap=5000)
    return float(p_energy(rho, p)), rho


def certificate_json(
    g: Graph,
    result: ModulusResult,
    *,
    tol: float = 1e-6,
) -> dict:
    """Everything ``walkmod cert`` prints, as a JSON-ready dict."""
    report = kkt_check(g, result.active_family, result.density, result.multipliers, result.p)
    out = {"kkt": report.to_json(), "beurling_subfamily": [], "cone_residual": None, "cap_ab": None}
    if result.status is Status.CONVERGED:
        sub = extract_beurling_subfamily(result)
        out["beurling_subfamily"] = [w.labels() for w in sub]
        if sub:
            resid, _ = cone_residual(g, sub, np.clip(result.density, 0, None) ** (result.p - 1))
            out["cone_residual"] = resid
    spec = result.family_spec
    if spec and spec.get("kind") == "connect" and result.p == 2:
        A, B = g.indices(spec["A"]), g.indices(spec["B"])
        if not A & B:
            out["cap_ab"] = effective_conductance(g, A, B)[0]
    return out
