"""p-modulus of walk families on finite graphs.

Constraint generation against shortest-walk oracles, with KKT and
Beurling-subfamily certificates and an effective-conductance cross-check.
"""
from .certificates import (
    CapacitaryFunction,
    KktReport,
    brute_force_modulus,
    cone_residual,
    effective_conductance,
    extract_beurling_subfamily,
    kkt_check,
    verify_beurling_criterion,
)
from .generators import gen_choked, gen_gnp, house
from .graph import Graph, Subgraph, induced_subgraph, laplacian, parse_edge_list
from .oracles import (
    ConnectingFamily,
    ExplicitFamily,
    ViaFamily,
    dijkstra_shortest,
    explicit_family_shortest,
    family_from_spec,
    via_shortest,
)
from .rules import RuleReport, rule_suite
from .solver import (
    ModulusResult,
    SolverConfig,
    Status,
    density_error_bound,
    solve_inner,
    solve_modulus,
)
from .walks import Walk, dominates, multiplicity_vector, p_energy, rho_length

__version__ = "0.1.0"

__all__ = [
    "CapacitaryFunction",
    "ConnectingFamily",
    "ExplicitFamily",
    "Graph",
    "KktReport",
    "ModulusResult",
    "RuleReport",
    "SolverConfig",
    "Status",
    "Subgraph",
    "ViaFamily",
    "Walk",
    "brute_force_modulus",
    "cone_residual",
    "density_error_bound",
    "dijkstra_shortest",
    "dominates",
    "effective_conductance",
    "explicit_family_shortest",
    "extract_beurling_subfamily",
    "family_from_spec",
    "gen_choked",
    "gen_gnp",
    "house",
    "induced_subgraph",
    "kkt_check",
    "laplacian",
    "multiplicity_vector",
    "p_energy",
    "parse_edge_list",
    "rho_length",
    "rule_suite",
    "solve_inner",
    "solve_modulus",
    "verify_beurling_criterion",
    "via_shortest",
]
