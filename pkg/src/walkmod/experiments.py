"""Experiment harnesses producing plot-ready CSV rows."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .certificates import effective_conductance, extract_beurling_subfamily
from .errors import InvalidProbability, NTooSmall
from .generators import gen_choked, gnp_probability_range, house, sample_connected_gnp
from .graph import Graph
from .oracles import ConnectingFamily, ViaFamily
from .solver import SolverConfig, solve_modulus

CHOKED_COLUMNS = ["N", "num_walks", "mod_gamma_prime", "mod_gamma", "value_error_bound", "status"]
GNP_COLUMNS = [
    "sample", "seed", "p_edge", "num_edges", "num_walks", "modulus",
    "value_error_bound", "status", "draws",
]
VIA_COLUMNS = ["edge", "u", "v", "weight", "relative_weight", "band"]


def _fmt(x) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def rows_to_csv(rows: Iterable[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def run_choked_table(N_list: Iterable[int], eps_tol: float = 1e-2, p: float = 2.0) -> list[dict]:
    """Modulus of walks 2 -> N on the choked graph, next to the Laplacian value."""
    rows = []
    for N in N_list:
        g = gen_choked(N)
        a, b = g.index("2"), g.index(str(N))
        res = solve_modulus(g, ConnectingFamily(g, {a}, {b}), SolverConfig(p=p, eps_tol=eps_tol))
        cap = effective_conductance(g, {a}, {b})[0] if p == 2 else float("nan")
        rows.append({
            "N": N,
            "num_walks": len(res.active_family),
            "mod_gamma_prime": res.modulus,
            "mod_gamma": cap,
            "value_error_bound": res.relative_value_error_bound,
            "status": res.status.value,
        })
    return rows


def _gnp_sample(args) -> dict:
    n, eps_tol, seed, i, p = args
    rng = np.random.default_rng([seed, i])
    lo, hi = gnp_probability_range(n)
    p_edge = float(rng.uniform(lo, hi))
    g, draws = sample_connected_gnp(n, p_edge, rng)
    res = solve_modulus(g, ConnectingFamily(g, {0}, {1}), SolverConfig(p=p, eps_tol=eps_tol))
    return {
        "sample": i,
        "seed": seed,
        "p_edge": p_edge,
        "num_edges": g.m,
        "num_walks": len(res.active_family),
        "modulus": res.modulus,
        "value_error_bound": res.relative_value_error_bound,
        "status": res.status.value,
        "draws": draws,
    }


def run_gnp_sweep(
    n: int,
    samples: int,
    eps_tol: float = 1e-2,
    seed: int = 0,
    *,
    p: float = 2.0,
    jobs: int = 1,
) -> list[dict]:
    """Walks needed for vertices 1 -> 2 over random connected G(n, p_edge).

    ``p_edge`` is uniform on ``[2 log(n)/n, 1]``. Sample ``i`` draws from
    ``default_rng([seed, i])``, so rows do not depend on ``jobs``.
    """
    if n < 3:
        raise NTooSmall("sweep needs n >= 3")
    if samples < 1:
        raise ValueError("samples must be positive")
    tasks = [(n, eps_tol, seed, i, p) for i in range(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_gnp_sample, tasks))
    return [_gnp_sample(t) for t in tasks]


class PathCountEstimate(NamedTuple):
    log_exact: float
    log_bound: float


def expected_simple_paths_lower_bound(n: int, p_edge: float) -> PathCountEstimate:
    """Natural logs of the expected number of simple 1 -> 2 paths in G(n, p).

    ``log_exact`` is the log of ``sum_k (n-2)!/(n-k-1)! p^k`` (k = 1..n-1);
    ``log_bound`` keeps only the last term and applies the Stirling lower
    bound to ``(n-2)!``.
    """
    if n < 3:
        raise NTooSmall("need n >= 3")
    if not 0 < p_edge <= 1:
        raise InvalidProbability(f"edge probability must lie in (0, 1], got {p_edge}")
    lp = math.log(p_edge)
    terms = np.array([math.lgamma(n - 1) - math.lgamma(n - k) + k * lp for k in range(1, n)])
    top = terms.max()
    log_exact = float(top + math.log(np.exp(terms - top).sum()))
    log_bound = (n - 1) * lp + (n - 1.5) * math.log(n - 2) - (n - 2) + 0.5 * math.log(2 * math.pi)
    return PathCountEstimate(log_exact, log_bound)


def run_via_demo(
    g: Graph,
    A: Iterable[int],
    c: int,
    B: Iterable[int],
    eps_tol: float = 1e-2,
    p: float = 2.0,
) -> tuple[dict, list[dict]]:
    """Edge weights of the approximate extremal density for an A -> c -> B family.

    Bands follow the usual colouring: ``high`` at 75% of the maximum weight
    or more, ``mid`` from 25% to 75%, ``low`` below.
    """
    res = solve_modulus(g, ViaFamily(g, frozenset(A), c, frozenset(B)), SolverConfig(p=p, eps_tol=eps_tol))
    rho = res.density
    top = float(rho.max(initial=0.0)) or 1.0
    rows = []
    for i, (u, v) in enumerate(g.edges):
        rel = float(rho[i]) / top
        band = "high" if rel >= 0.75 else "mid" if rel >= 0.25 else "low"
        rows.append({
            "edge": i, "u": g.label(u), "v": g.label(v),
            "weight": float(rho[i]), "relative_weight": rel, "band": band,
        })
    summary = {"modulus": res.modulus, "num_walks": len(res.active_family), "status": res.status.value}
    return summary, rows


def run_house_demo(eps_tol: float = 1e-6, p: float = 2.0) -> dict:
    g = house()
    res = solve_modulus(g, ConnectingFamily(g, {g.index("1")}, {g.index("2")}), SolverConfig(p=p, eps_tol=eps_tol))
    out = res.to_json()
    if res.converged:
        out["beurling_subfamily"] = [w.labels() for w in extract_beurling_subfamily(res)]
    return out


@dataclass
class ExperimentSpec:
    kind: str
    parameters: dict = field(default_factory=dict)
    output: str | None = None
    eps_tol: float = 1e-2
    p: float = 2.0


def run_experiment(spec: ExperimentSpec) -> str:
    """Run an experiment and return its CSV (or JSON for ``house-demo``) text."""
    import json

    prm = spec.parameters
    if spec.kind == "choked-table":
        rows = run_choked_table(prm.get("N", [10, 40, 160]), spec.eps_tol, spec.p)
        return rows_to_csv(rows, CHOKED_COLUMNS)
    if spec.kind == "gnp-sweep":
        rows = run_gnp_sweep(
            int(prm.get("n", 23)), int(prm.get("samples", 100)), spec.eps_tol,
            int(prm.get("seed", 0)), p=spec.p, jobs=int(prm.get("jobs", 1)),
        )
        return rows_to_csv(rows, GNP_COLUMNS)
    if spec.kind == "via-demo":
        g = prm["graph"]
        _, rows = run_via_demo(g, g.indices(prm["A"]), g.index(prm["c"]), g.indices(prm["B"]), spec.eps_tol, spec.p)
        return rows_to_csv(rows, VIA_COLUMNS)
    if spec.kind == "house-demo":
        return json.dumps(run_house_demo(spec.eps_tol, spec.p), indent=2) + "\n"
    raise ValueError(f"unknown experiment kind {spec.kind!r}")
