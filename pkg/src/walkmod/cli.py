"""Command-line interface: ``walkmod {mod,cap,cert,gen,exp}``.

Exit status is 0 on success, 1 for usage or input errors and 2 when the
computation itself fails. ``WALKMOD_TOL`` overrides the default
``--tol``.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import experiments as ex
from .certificates import certificate_json, effective_conductance
from .errors import GraphError, InvalidConfig, InvalidP, WalkmodError
from .generators import HOUSE_EDGE_LIST, gen_choked, sample_connected_gnp
from .graph import Graph, parse_edge_list
from .oracles import family_from_spec
from .solver import ModulusResult, SolverConfig, solve_modulus


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _default_tol() -> float:
    raw = os.environ.get("WALKMOD_TOL")
    if raw is None:
        return 1e-2
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"WALKMOD_TOL={raw!r} is not a number") from None


def _read_text(path: str | None) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_graph(path: str | None) -> Graph:
    text = _read_text(path)
    if text.lstrip().startswith("{"):
        return Graph.from_json(json.loads(text))
    return parse_edge_list(text)


def _labels(raw: str) -> list[str]:
    return [x for x in raw.split(",") if x]


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------


def cmd_mod(args) -> int:
    g = load_graph(args.graph)
    fam = family_from_spec(g, args.family)
    cfg = SolverConfig(
        p=args.p,
        eps_tol=args.tol,
        inner_tol=args.inner_tol,
        max_outer_iterations=args.max_outer,
    )
    res = solve_modulus(g, fam, cfg)
    if args.json:
        _write(json.dumps(res.to_json(), indent=2) + "\n", args.out)
    else:
        lines = [
            f"status: {res.status.value}",
            f"modulus: {res.modulus:.10g}",
            f"upper_bound: {res.upper_bound:.10g}",
            f"active_walks: {len(res.active_family)}",
            f"value_error_bound: {res.relative_value_error_bound:.3g}",
            f"density_error_bound: {res.relative_density_error_bound:.6g}",
        ]
        _write("\n".join(lines) + "\n", args.out)
    return 0


def cmd_cap(args) -> int:
    g = load_graph(args.graph)
    A, B = g.indices(_labels(args.A)), g.indices(_labels(args.B))
    cap, u = effective_conductance(g, A, B)
    if args.json:
        payload = {"cap": cap, "potential": {g.label(i): float(x) for i, x in enumerate(u.values)}}
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        sys.stdout.write(f"{cap:.10g}\n")
    return 0


def cmd_cert(args) -> int:
    g = load_graph(args.graph)
    with open(args.result, encoding="utf-8") as fh:
        res = ModulusResult.from_json(g, json.load(fh))
    sys.stdout.write(json.dumps(certificate_json(g, res), indent=2) + "\n")
    return 0


def cmd_gen(args) -> int:
    if args.kind == "house":
        g = parse_edge_list(HOUSE_EDGE_LIST)
        header = "# house graph\n"
    elif args.kind == "choked":
        g = gen_choked(args.N)
        header = f"# choked graph N={args.N}\n"
    else:
        rng = np.random.default_rng(args.seed)
        g, draws = sample_connected_gnp(args.n, args.p, rng)
        header = f"# G(n={args.n}, p={args.p!r}) seed={args.seed} draws={draws}\n"
    text = json.dumps(g.to_json()) + "\n" if args.json else header + g.to_edge_list()
    _write(text, args.out)
    return 0


def cmd_exp(args) -> int:
    prm: dict = {}
    if args.kind == "choked-table":
        prm["N"] = [int(x) for x in _labels(args.N)]
    elif args.kind == "gnp-sweep":
        prm.update(n=args.n, samples=args.samples, seed=args.seed, jobs=args.jobs)
    elif args.kind == "via-demo":
        if args.graph is None or args.A is None or args.B is None or args.c is None:
            raise UsageError("via-demo needs --graph, --A, --c and --B")
        g = load_graph(args.graph)
        prm.update(graph=g, A=_labels(args.A), c=args.c, B=_labels(args.B))
    spec = ex.ExperimentSpec(args.kind, prm, args.out, args.tol, args.p)
    _write(ex.run_experiment(spec), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    tol = _default_tol()
    ap = _Parser(prog="walkmod", description="p-modulus of walk families on graphs")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    m = sub.add_parser("mod", help="approximate the modulus of a walk family")
    m.add_argument("--graph", default="-", help="edge list or graph JSON (default: stdin)")
    m.add_argument("--family", required=True, help="connect:A:B, via:A:c:B or a JSON family spec")
    m.add_argument("--p", type=float, default=2.0)
    m.add_argument("--tol", type=float, default=tol, help="stopping tolerance eps_tol")
    m.add_argument("--inner-tol", type=float, default=None)
    m.add_argument("--max-outer", type=int, default=None)
    m.add_argument("--json", action="store_true")
    m.add_argument("--out", default=None)
    m.set_defaults(func=cmd_mod)

    c = sub.add_parser("cap", help="effective conductance between two vertex sets")
    c.add_argument("--graph", default="-")
    c.add_argument("--A", required=True)
    c.add_argument("--B", required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_cap)

    ce = sub.add_parser("cert", help="KKT report and Beurling subfamily for a saved result")
    ce.add_argument("--result", required=True)
    ce.add_argument("--graph", required=True)
    ce.set_defaults(func=cmd_cert)

    gsub = sub.add_parser("gen", help="write a graph as an edge list").add_subparsers(
        dest="kind", required=True, parser_class=_Parser
    )
    gh = gsub.add_parser("house")
    gc = gsub.add_parser("choked")
    gc.add_argument("--N", type=int, required=True)
    gg = gsub.add_parser("gnp")
    gg.add_argument("--n", type=int, required=True)
    gg.add_argument("--p", type=float, required=True)
    gg.add_argument("--seed", type=int, default=0)
    for sp in (gh, gc, gg):
        sp.add_argument("--out", default=None)
        sp.add_argument("--json", action="store_true")
        sp.set_defaults(func=cmd_gen)

    e = sub.add_parser("exp", help="run an experiment and write CSV")
    e.add_argument("kind", choices=["choked-table", "gnp-sweep", "via-demo", "house-demo"])
    e.add_argument("--N", default="10,40,160", help="comma-separated sizes for choked-table")
    e.add_argument("--n", type=int, default=23)
    e.add_argument("--samples", type=int, default=100)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--graph", default=None)
    e.add_argument("--A", default=None)
    e.add_argument("--c", default=None)
    e.add_argument("--B", default=None)
    e.add_argument("--tol", type=float, default=tol)
    e.add_argument("--p", type=float, default=2.0)
    e.add_argument("--out", default=None)
    e.set_defaults(func=cmd_exp)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, GraphError, InvalidConfig, InvalidP, ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"walkmod: error: {exc}", file=sys.stderr)
        return 1
    except WalkmodError as exc:
        print(f"walkmod: solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
