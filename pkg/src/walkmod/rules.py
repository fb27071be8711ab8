"""Checkers for the standard comparison rules of modulus.

Each rule computes both sides on a concrete instance and reports whether
the (in)equality holds. Families are given as spec dicts (see
:func:`walkmod.oracles.family_from_spec`); ``"explicit"`` families may also
be plain lists of vertex-label lists.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .certificates import brute_force_modulus
from .errors import TooLarge, UnknownRule
from .graph import Graph, induced_subgraph
from .oracles import ConnectingFamily, ExplicitFamily, family_from_spec
from .solver import SolverConfig, density_error_bound, solve_modulus
from .walks import Walk, dominates


@dataclass
class RuleReport:
    rule: str
    lhs: float
    rhs: float
    relation: str
    passed: bool
    details: dict = field(default_factory=dict)

    def __str__(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.rule}: {self.lhs:.12g} {self.relation} {self.rhs:.12g}"


def _family(g: Graph, spec):
    if isinstance(spec, list):
        spec = {"kind": "explicit", "walks": spec}
    return family_from_spec(g, spec)


def _modulus(g: Graph, fam, p: float, tol: float) -> float:
    try:
        value, _ = brute_force_modulus(g, fam, p, tol=tol)
    except TooLarge:
        res = solve_modulus(g, fam, SolverConfig(p=p, eps_tol=1e-6, inner_tol=tol))
        value = res.modulus
    return value


def _separates(g: Graph, A, B, C) -> bool:
    """True when every walk from ``A`` to ``B`` meets ``C``."""
    if (A | B) & C:
        return True
    seen = set(A)
    queue = deque(A)
    while queue:
        x = queue.popleft()
        if x in B:
            return False
        for y, _ in g.neighbors(x):
            if y not in seen and y not in C:
                seen.add(y)
                queue.append(y)
    return True


def _leq(a, b, tol):
    return a <= b + tol


def rule_suite(g: Graph, configuration: dict) -> RuleReport:
    """Check one rule on one instance.

    ``configuration["rule"]`` selects the rule; the other keys are the
    instance parameters. ``p`` (default 2) and ``tol`` (default 1e-8) are
    shared by all rules.
    """
    cfg = dict(configuration)
    rule = cfg.pop("rule", None)
    p = float(cfg.pop("p", 2.0))
    tol = float(cfg.pop("tol", 1e-8))
    inner = min(tol * 1e-2, 1e-10)
    mod = lambda fam: _modulus(g, fam, p, inner)  # noqa: E731
    idx = g.indices

    if rule == "monotonicity":
        small = _family(g, cfg["smaller"])
        big = _family(g, cfg["larger"])
        if isinstance(small, ExplicitFamily) and isinstance(big, ExplicitFamily):
            if not set(small.walks) <= set(big.walks):
                raise ValueError("monotonicity needs nested families")
        a, b = mod(small), mod(big)
        return RuleReport(rule, a, b, "<=", _leq(a, b, tol))

    if rule == "subadditivity":
        parts = [_family(g, s) for s in cfg["families"]]
        union = ExplicitFamily(tuple(w for f in parts for w in f.candidate_walks()))
        lhs = mod(union)
        rhs = sum(mod(f) for f in parts)
        return RuleReport(rule, lhs, rhs, "<=", _leq(lhs, rhs, tol))

    if rule == "shorter_walks":
        short = _family(g, cfg["shorter"])
        long_ = _family(g, cfg["longer"])
        sw, lw = short.candidate_walks(), long_.candidate_walks()
        if not all(any(dominates(s, w) for s in sw) for w in lw):
            raise ValueError("some walk of the longer family dominates no walk of the shorter one")
        lhs, rhs = mod(long_), mod(short)
        return RuleReport(rule, lhs, rhs, "<=", _leq(lhs, rhs, tol))

    if rule == "parallel":
        f1, f2 = _family(g, cfg["first"]), _family(g, cfg["second"])
        w1, w2 = f1.candidate_walks(), f2.candidate_walks()
        v1 = set().union(*(w.vertices for w in w1))
        v2 = set().union(*(w.vertices for w in w2))
        if v1 & v2:
            raise ValueError("parallel rule needs vertex-disjoint families")
        union = ExplicitFamily(tuple(w1 + w2))
        lhs = mod(union)
        rhs = mod(f1) + mod(f2)
        return RuleReport(rule, lhs, rhs, "==", abs(lhs - rhs) <= tol)

    if rule == "serial":
        A1, A2, C = idx(cfg["A1"]), idx(cfg["A2"]), idx(cfg["C"])
        if not _separates(g, A1, A2, C):
            raise ValueError("C is not a cut between A1 and A2")
        whole = mod(ConnectingFamily(g, A1, A2))
        m1 = mod(ConnectingFamily(g, A1, C))
        m2 = mod(ConnectingFamily(g, A2, C))
        lhs, rhs = 1 / whole, 1 / m1 + 1 / m2
        return RuleReport(rule, lhs, rhs, ">=", _leq(rhs, lhs, tol), {"mod": whole, "mod1": m1, "mod2": m2})

    if rule == "basic_estimate":
        fam = _family(g, cfg["family"])
        # every member has at least as many hops as the hop-shortest one
        L = fam.shortest(np.ones(g.m)).hops
        value = mod(fam)
        bound = g.m / L**2
        detail = {"L": L, "tight": abs(value - bound) <= tol}
        return RuleReport(rule, value, bound, "<=", _leq(value, bound, tol), detail)

    if rule == "symmetry":
        fam = _family(g, cfg["family"])
        T = {g.index(a): g.index(b) for a, b in cfg["map"].items()}
        for v in range(g.n):
            T.setdefault(v, v)
        if any(T[T[v]] != v for v in range(g.n)):
            raise ValueError("map is not an involution")
        emap = []
        for u, v in g.edges:
            e = g.edge_index(T[u], T[v])
            if e is None:
                raise ValueError("map is not a graph automorphism")
            emap.append(e)
        eps = float(cfg.get("eps_tol", 1e-2))
        res = solve_modulus(g, fam, SolverConfig(p=p, eps_tol=eps))
        rho = res.density
        asym = float(np.max(np.abs(rho - rho[emap])))
        bound = 2 * density_error_bound(p, eps)
        return RuleReport(rule, asym, bound, "<=", asym <= bound, {"modulus": res.modulus})

    if rule == "extension_i":
        A, B, B2 = idx(cfg["A"]), idx(cfg["B"]), idx(cfg["B_prime"])
        if not B <= B2:
            raise ValueError("extension (i) needs B to be a subset of B'")
        a, b = mod(ConnectingFamily(g, A, B)), mod(ConnectingFamily(g, A, B2))
        return RuleReport(rule, a, b, "<=", _leq(a, b, tol))

    if rule == "extension_ii":
        A, B, C = idx(cfg["A"]), idx(cfg["B"]), idx(cfg["C"])
        if not _separates(g, A, B, C):
            raise ValueError("C is not a cut between A and B")
        a, b = mod(ConnectingFamily(g, A, B)), mod(ConnectingFamily(g, A, C))
        return RuleReport(rule, a, b, "<=", _leq(a, b, tol))

    if rule == "extension_iii":
        A, B = idx(cfg["A"]), idx(cfg["B"])
        H = induced_subgraph(g, idx(cfg["H"]))
        a = mod(ConnectingFamily(g, A, B, within=H))
        b = mod(ConnectingFamily(g, A, B))
        return RuleReport(rule, a, b, "<=", _leq(a, b, tol))

    raise UnknownRule(f"unknown rule {rule!r}")


RULES = (
    "monotonicity",
    "subadditivity",
    "shorter_walks",
    "parallel",
    "serial",
    "basic_estimate",
    "symmetry",
    "extension_i",
    "extension_ii",
    "extension_iii",
)


def explicit(g: Graph, *walks) -> list[Walk]:
    """Shorthand: ``explicit(g, [1, 2], [1, 3, 2])`` -> list of walks by label."""
    return [Walk.from_labels(g, w) for w in walks]
