"""Constraint generation for the p-modulus of a walk family.

The outer loop asks the family's oracle for a rho-shortest walk and stops
once that walk is nearly admissible; otherwise the walk joins the active
family and the inner convex program is re-solved through its Lagrangian
dual, warm-started from the previous multipliers.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .engine import projected_ascent
from .errors import (
    EmptyFamily,
    InnerIterationLimit,
    InvalidConfig,
    InvalidP,
    TrivialWalkInFamily,
)
from .graph import Graph
from .walks import Walk, multiplicity_matrix, p_energy, rho_length


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    INFINITE_MODULUS = "InfiniteModulus"
    ITERATION_LIMIT = "IterationLimit"


def _check_p(p: float) -> float:
    p = float(p)
    if not (p > 1 and math.isfinite(p)):
        raise InvalidP(f"p must satisfy 1 < p < inf, got {p}")
    return p


def density_error_bound(p: float, eps_tol: float) -> float:
    """Relative p-norm distance between the returned and the extremal density.

    ``2**(1-1/p) * eps**(1/p)`` for ``p >= 2`` and
    ``(2*eps/(p-1))**(1-1/p)`` for ``1 < p < 2``.
    """
    p = _check_p(p)
    if not 0 <= eps_tol < 1:
        raise InvalidConfig(f"eps_tol must lie in (0, 1), got {eps_tol}")
    if p >= 2:
        return 2 ** (1 - 1 / p) * eps_tol ** (1 / p)
    return (2 * eps_tol / (p - 1)) ** (1 - 1 / p)


# ---------------------------------------------------------------------------
# inner program


class _Dual:
    """Lagrangian dual of ``min sum rho^p  s.t.  X rho >= 1``.

    With ``s = X^T lam`` the minimizing density is ``(s/p)^(1/(p-1))`` and
    the dual value is ``sum(lam) - (p-1) * sum((s/p)^(p/(p-1)))``.
    """

    def __init__(self, X, p: float):
        self.X = X
        self.XT = X.T.tocsr()
        self.p = p
        self.q = p / (p - 1)
        self.r = 1 / (p - 1)

    def density(self, lam: np.ndarray) -> np.ndarray:
        s = np.maximum(self.XT @ lam, 0.0)
        return (s / self.p) ** self.r

    def evaluate(self, lam):
        s = np.maximum(self.XT @ lam, 0.0)
        base = s / self.p
        rho = base**self.r
        value = float(lam.sum() - (self.p - 1) * (base**self.q).sum())
        ell = self.X @ rho
        return value, 1.0 - ell, (s, rho, ell)

    def gain(self, lam, state, dlam, state_new):
        s = state[0]
        ds = self.XT @ dlam
        diff = np.empty_like(s)
        # (s + ds)^q - s^q without cancellation
        pos = s > 0
        ratio = np.maximum(ds[pos] / s[pos], -1.0)
        with np.errstate(divide="ignore"):  # log1p(-1) = -inf, expm1 -> -1 is exact
            diff[pos] = s[pos] ** self.q * np.expm1(self.q * np.log1p(ratio))
        diff[~pos] = np.maximum(ds[~pos], 0.0) ** self.q
        return float(dlam.sum() - (self.p - 1) * self.p ** -self.q * diff.sum())

    def curvature(self, lam, state, free):
        s, rho, _ = state
        p = self.p
        if p == 2:
            dr = np.full(s.shape, 0.5)
        else:
            floor = 1e-8 * max(float(s.max(initial=0.0)), 1e-300)
            base = np.maximum(s, floor) / p
            dr = base ** (self.r - 1) / (p * (p - 1))
        Xf = self.X[np.flatnonzero(free)]
        H = (Xf.multiply(dr) @ Xf.T).toarray()
        return H


def _kkt_residual(lam, grad, state):
    pg = float(np.max(np.abs(lam - np.maximum(lam + grad, 0.0)), initial=0.0))
    infeas = float(np.max(grad, initial=0.0))
    cs = float(np.max(np.abs(lam * grad), initial=0.0))
    return max(pg, infeas, cs)


def _initial_multipliers(walks: Sequence[Walk], p: float) -> np.ndarray:
    # each walk on its own: rho = 1/hops along it, lam = p rho^(p-1)
    hops = np.array([w.hops for w in walks], dtype=float)
    return p * hops ** (1 - p) / len(walks)


def solve_inner(
    g: Graph,
    walks: Sequence[Walk],
    p: float = 2.0,
    tol: float = 1e-8,
    iter_cap: int = 1000,
    *,
    lam0: np.ndarray | None = None,
    method: str = "newton",
) -> tuple[np.ndarray, np.ndarray]:
    """Extremal density and multipliers for a finite family.

    Maximizes the dual over ``lam >= 0`` until primal infeasibility,
    complementary slackness and the projected dual gradient are all at or
    below ``tol``. Stationarity holds by construction of the returned
    density.

    Raises
    ------
    TrivialWalkInFamily
        A constant walk makes the program infeasible.
    InnerIterationLimit
        ``iter_cap`` iterations were not enough to reach ``tol``.
    """
    p = _check_p(p)
    walks = list(walks)
    if not walks:
        raise EmptyFamily("inner program needs at least one walk")
    if any(w.is_trivial for w in walks):
        raise TrivialWalkInFamily("family contains a constant walk; no density is admissible")
    X = multiplicity_matrix(walks, g.m)
    dual = _Dual(X, p)
    if lam0 is None:
        lam0 = _initial_multipliers(walks, p)
    elif len(lam0) != len(walks):
        raise ValueError("lam0 must have one entry per walk")
    res = projected_ascent(dual, lam0, _kkt_residual, tol=tol, max_iter=iter_cap, method=method)
    if not res.converged:
        raise InnerIterationLimit(
            f"inner solve stopped after {res.iterations} iterations at KKT residual "
            f"{res.residual:.3e} (target {tol:.1e})"
        )
    return res.state[1], res.x


# ---------------------------------------------------------------------------
# outer loop


@dataclass(frozen=True)
class SolverConfig:
    """Outer-loop settings.

    ``method`` picks the inner dual engine: ``"gradient"`` (projected
    gradient with Barzilai-Borwein steps, the default) or ``"newton"``
    (two-metric projected Newton). A gradient solve that hits
    ``max_inner_iterations`` is finished by Newton from where it stopped.
    """

    p: float = 2.0
    eps_tol: float = 1e-2
    inner_tol: float | None = None
    max_outer_iterations: int | None = None
    max_inner_iterations: int = 1000
    method: str = "gradient"

    def __post_init__(self):
        _check_p(self.p)
        if not 0 < self.eps_tol < 1:
            raise InvalidConfig(f"eps_tol must lie in (0, 1), got {self.eps_tol}")
        if self.inner_tol is not None and self.inner_tol <= 0:
            raise InvalidConfig("inner_tol must be positive")
        if self.max_outer_iterations is not None and self.max_outer_iterations < 1:
            raise InvalidConfig("max_outer_iterations must be positive")
        if self.max_inner_iterations < 1:
            raise InvalidConfig("max_inner_iterations must be positive")
        if self.method not in ("gradient", "newton"):
            raise InvalidConfig(f"unknown inner method {self.method!r}")

    @property
    def resolved_inner_tol(self) -> float:
        return self.inner_tol if self.inner_tol is not None else self.eps_tol * 1e-4

    def outer_cap(self, g: Graph) -> int:
        return self.max_outer_iterations if self.max_outer_iterations is not None else 10 * max(g.m, 1)


@dataclass
class ModulusResult:
    modulus: float
    density: np.ndarray
    active_family: list[Walk]
    multipliers: np.ndarray
    relative_value_error_bound: float
    relative_density_error_bound: float
    outer_iterations: int
    status: Status
    p: float
    eps_tol: float
    inner_tol: float
    upper_bound: float = math.inf
    energy_history: list[float] = field(default_factory=list)
    graph: Graph | None = field(default=None, repr=False)
    family_spec: dict | None = None

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def to_json(self) -> dict:
        out = {
            "modulus": _num(self.modulus),
            "p": self.p,
            "eps_tol": self.eps_tol,
            "status": self.status.value,
            "density": [float(x) for x in self.density],
            "active_family": [w.labels() for w in self.active_family],
            "multipliers": [float(x) for x in self.multipliers],
            "value_error_bound": self.relative_value_error_bound,
            "density_error_bound": self.relative_density_error_bound,
            "outer_iterations": self.outer_iterations,
            "inner_tol": self.inner_tol,
            "upper_bound": _num(self.upper_bound),
        }
        if self.family_spec is not None:
            out["family"] = self.family_spec
        return out

    @classmethod
    def from_json(cls, g: Graph, data: dict) -> "ModulusResult":
        walks = [Walk.from_labels(g, w) for w in data["active_family"]]
        return cls(
            modulus=float(data["modulus"]) if data["modulus"] is not None else math.inf,
            density=np.asarray(data["density"], dtype=float),
            active_family=walks,
            multipliers=np.asarray(data["multipliers"], dtype=float),
            relative_value_error_bound=float(data["value_error_bound"]),
            relative_density_error_bound=float(data["density_error_bound"]),
            outer_iterations=int(data["outer_iterations"]),
            status=Status(data["status"]),
            p=float(data["p"]),
            eps_tol=float(data["eps_tol"]),
            inner_tol=float(data.get("inner_tol", float(data["eps_tol"]) * 1e-4)),
            upper_bound=float(data["upper_bound"]) if data.get("upper_bound") is not None else math.inf,
            graph=g,
            family_spec=data.get("family"),
        )


def _num(x: float):
    return None if not math.isfinite(x) else float(x)


def solve_modulus(g: Graph, oracle, cfg: SolverConfig | None = None) -> ModulusResult:
    """Approximate ``Mod_p`` of the family behind ``oracle``.

    On ``Converged`` the returned value ``Mod_p(Gamma')`` satisfies
    ``Mod_p(Gamma') <= Mod_p(Gamma) <= Mod_p(Gamma') / (1 - eps_tol)``.
    """
    cfg = cfg or SolverConfig()
    p, eps = cfg.p, cfg.eps_tol
    tol = cfg.resolved_inner_tol
    cap = cfg.outer_cap(g)
    m = g.m

    rho = np.zeros(m)
    lam = np.zeros(0)
    active: list[Walk] = []
    seen: set[bytes] = set()
    history: list[float] = []
    iterations = 0

    def result(status, upper=math.inf):
        if status is Status.INFINITE_MODULUS:
            value = math.inf
        else:
            value = float(p_energy(rho, p))
        return ModulusResult(
            modulus=value,
            density=rho.copy(),
            active_family=list(active),
            multipliers=lam.copy(),
            relative_value_error_bound=eps,
            relative_density_error_bound=density_error_bound(p, eps),
            outer_iterations=iterations,
            status=status,
            p=p,
            eps_tol=eps,
            inner_tol=tol,
            upper_bound=upper,
            energy_history=history,
            graph=g,
            family_spec=oracle.to_spec() if hasattr(oracle, "to_spec") else None,
        )

    while True:
        gamma = oracle.shortest(rho)
        if gamma.is_trivial:
            return result(Status.INFINITE_MODULUS)
        ell = float(rho_length(gamma, rho))
        upper = float(p_energy(rho, p)) / ell**p if ell > 0 else math.inf
        if ell**p >= 1 - eps:
            return result(Status.CONVERGED, upper)
        if iterations >= cap:
            return result(Status.ITERATION_LIMIT, upper)
        key = gamma.multiplicities().tobytes()
        if key in seen:
            # a walk we already enforce looks short: the inner solve is too loose
            tol /= 10
            if tol < 1e-15:
                return result(Status.ITERATION_LIMIT, upper)
            lam0 = lam
        else:
            seen.add(key)
            active.append(gamma)
            lam0 = np.append(lam, 0.0)
        iterations += 1
        try:
            rho, lam = solve_inner(g, active, p, tol, cfg.max_inner_iterations, lam0=lam0, method=cfg.method)
        except InnerIterationLimit:
            if cfg.method == "newton":
                raise
            # gradient ascent stalls on badly scaled duals; finish with Newton
            rho, lam = solve_inner(g, active, p, tol, cfg.max_inner_iterations, lam0=lam0, method="newton")
        history.append(float(p_energy(rho, p)))
