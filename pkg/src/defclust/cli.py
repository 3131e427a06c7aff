"""Command-line surface: gen | colour | verify | oracle | params | run.

Exit codes: 0 success, 2 hypothesis-violation witness produced (or manifest
expectation missed), 3 oracle cap refusal, 1 other errors.  Every randomized
engine takes a --seed (manifests must set one); --threads is accepted for
interface stability, and since every engine is single-threaded and
deterministic the output never depends on it.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import constructions as cons
from . import graphio
from .colouring import Colouring, ListAssignment, audit
from .errors import DefclustError, HypothesisViolation, OracleCapExceeded
from .graphs import Graph
from . import greedy, oracle, planar, separators, structural

EXIT_OK, EXIT_ERROR, EXIT_WITNESS, EXIT_CAP = 0, 1, 2, 3


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HypothesisViolation as e:
        print(f"hypothesis-violation: {e}", file=sys.stderr)
        print(f"witness: {e.witness}", file=sys.stderr)
        return EXIT_WITNESS
    except OracleCapExceeded as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_CAP
    except (DefclustError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="defclust", description=__doc__)
    p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; engines are deterministic")
    sub = p.add_subparsers(required=True)

    g = sub.add_parser("gen", help="emit a construction")
    g.add_argument("construction", choices=sorted(_GENERATORS))
    g.add_argument("--h", type=int, default=2)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--c", type=int, default=2)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--s", type=int, default=2)
    g.add_argument("--t", type=int, default=2)
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--r", type=int, default=3)
    g.add_argument("--g", dest="girth", type=int, default=4)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--ops", default="prime", help="xkc operation list, comma separated")
    g.add_argument("--base", default="path", choices=("path", "star"))
    g.add_argument("--format", default="edgelist", choices=("edgelist", "graph6", "dimacs", "tri"))
    g.set_defaults(func=_cmd_gen)

    c = sub.add_parser("colour", help="run a colouring engine on a graph file")
    c.add_argument("engine", choices=sorted(_ENGINES))
    c.add_argument("graph", help="input file, '-' for stdin")
    c.add_argument("--format", default="edgelist", choices=("edgelist", "graph6", "dimacs", "tri"))
    c.add_argument("--d", type=int, default=1)
    c.add_argument("--k", type=int, default=2)
    c.add_argument("--l", type=int, default=10)
    c.add_argument("--t", type=int, default=5)
    c.add_argument("--g", dest="genus", type=int, default=0)
    c.add_argument("--n-tree", type=int, default=4)
    c.add_argument("--r", type=int, default=1)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--base-colouring", help="colouring file (defect2cluster input)")
    c.add_argument("--dot", action="store_true", help="also print a DOT rendering")
    c.add_argument("--out-colouring", help="write the colouring to this file")
    c.set_defaults(func=_cmd_colour)

    v = sub.add_parser("verify", help="audit a colouring file against a graph")
    v.add_argument("graph")
    v.add_argument("colouring")
    v.add_argument("--format", default="edgelist", choices=("edgelist", "graph6", "dimacs"))
    v.set_defaults(func=_cmd_verify)

    o = sub.add_parser("oracle", help="exact desk-scale questions")
    o.add_argument("question", choices=sorted(_ORACLES))
    o.add_argument("graph")
    o.add_argument("--format", default="edgelist", choices=("edgelist", "graph6", "dimacs"))
    o.add_argument("--d", type=int, default=1)
    o.add_argument("--c", type=int, default=2)
    o.add_argument("--cap", type=int, default=None)
    o.add_argument("--minor", help="second graph file for has-minor")
    o.add_argument("--minor-format", default="edgelist", choices=("edgelist", "graph6", "dimacs"))
    o.set_defaults(func=_cmd_oracle)

    pa = sub.add_parser("params", help="closed-form parameter calculators")
    pa.add_argument("formula", choices=("oow-light-bound", "mad-defect", "thickness-light", "c-t", "lovasz"))
    pa.add_argument("--s", type=int, default=2)
    pa.add_argument("--t", type=int, default=2)
    pa.add_argument("--delta", default="0")
    pa.add_argument("--nabla", default="0")
    pa.add_argument("--m", default="4")
    pa.add_argument("--g", dest="genus", type=int, default=0)
    pa.add_argument("--k", type=int, default=1)
    pa.add_argument("--d", type=int, default=1)
    pa.set_defaults(func=_cmd_params)

    r = sub.add_parser("run", help="execute a JSON experiment manifest")
    r.add_argument("manifest")
    r.set_defaults(func=_cmd_run)
    return p


# -- gen --------------------------------------------------------------------------


_GENERATORS = {
    "standard-defect": lambda a: cons.standard_defect(a.h, a.d),
    "standard-cluster": lambda a: cons.standard_cluster(a.h, a.c),
    "kst-star": lambda a: cons.kst_star(a.s, a.t),
    "outerplanar-gadget": lambda a: cons.outerplanar_gadget(),
    "kkn-gadget": lambda a: cons.kkn_gadget(a.s, a.d),
    "xkc": lambda a: cons.xkc_family(a.k, a.c, (a.base, *[o for o in a.ops.split(",") if o])),
    "gk-gadget": lambda a: cons.gk_circumference_gadget(a.k, a.c),
    "thickness-gadget": lambda a: cons.thickness_gadgets(a.n),
    "high-girth-regular": lambda a: cons.high_girth_regular(a.r, a.girth, seed=a.seed),
    "hex-grid": lambda a: cons.hex_grid(a.k),
    "random-triangulation": lambda a: cons.random_plane_triangulation(a.n, seed=a.seed),
    "random-outerplanar": lambda a: cons.random_maximal_outerplanar(a.n, seed=a.seed),
    "random-planar": lambda a: cons.random_planar(a.n, seed=a.seed),
}


def _cmd_gen(a) -> int:
    obj = _GENERATORS[a.construction](a)
    comments: list[str] = []
    if isinstance(obj, cons.MarkedTriangulation):
        comments = [
            f"# arc_ab {' '.join(map(str, obj.arc_ab))}",
            f"# arc_bc {' '.join(map(str, obj.arc_bc))}",
            f"# arc_cd {' '.join(map(str, obj.arc_cd))}",
            f"# arc_da {' '.join(map(str, obj.arc_da))}",
        ]
        if a.format == "tri":
            sys.stdout.write(graphio.write_triangulation(obj.tri))
            print("\n".join(comments))
            return EXIT_OK
        obj = obj.tri.graph
    elif isinstance(obj, cons.ThicknessWitness):
        comments = [
            "# part1 " + " ".join(f"{u}-{v}" for u, v in obj.parts[0]),
            "# part2 " + " ".join(f"{u}-{v}" for u, v in obj.parts[1]),
        ]
        obj = obj.graph
    elif isinstance(obj, tuple):  # kkn gadget: (graph, lists)
        G, lists = obj
        comments = [
            f"# list {v} " + " ".join(map(str, sorted(lists[v]))) for v in range(G.n)
        ]
        obj = G
    if isinstance(obj, graphio.PlaneTriangulation):
        if a.format == "tri":
            sys.stdout.write(graphio.write_triangulation(obj))
            return EXIT_OK
        obj = obj.graph
    if a.format == "tri":
        raise DefclustError(f"{a.construction} does not carry an embedding")
    sys.stdout.write(graphio.write_graph(obj, a.format))
    if comments:
        print("\n".join(comments))
    return EXIT_OK


# -- colour -----------------------------------------------------------------------


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _load_graph(a, attr="graph"):
    text = _read_input(getattr(a, attr))
    if a.format == "tri":
        return graphio.read_triangulation(text)
    return graphio.read_graph(text, a.format)


_ENGINES = {
    "lovasz",
    "outerplanar2",
    "poh",
    "genus3",
    "light-edge",
    "surface4",
    "minor-free",
    "tree-peel",
    "thickness-peel",
    "immersion2",
    "vdhw-defect",
    "vdhw-cluster",
    "circumference",
    "defect2cluster",
}


def _run_engine(a, G) -> tuple[Graph, Colouring, dict]:
    extra: dict = {}
    if a.engine == "poh":
        if not isinstance(G, graphio.PlaneTriangulation):
            raise DefclustError("poh needs --format tri input (embeddings are inputs)")
        T = G
        chi = planar.poh_three_colour(T)
        return T.graph, chi, extra
    if isinstance(G, graphio.PlaneTriangulation):
        G = G.graph
    if a.engine == "lovasz":
        run = greedy.lovasz_defective(G, a.d)
        extra["iterations"] = run.moves
        return G, run.colouring, extra
    if a.engine == "outerplanar2":
        return G, planar.outerplanar_two_colour(G), extra
    if a.engine == "genus3":
        return G, planar.genus_three_colour(G, a.genus), extra
    if a.engine == "light-edge":
        L = ListAssignment.uniform(G.n, a.k + 1)
        return G, greedy.light_edge_colour(G, L, a.k, a.l), extra
    if a.engine == "surface4":
        run = separators.surface_four_colour(G, ListAssignment.uniform(G.n, 4), a.genus)
        extra["islands"] = len(run.islands)
        return G, run.colouring, extra
    if a.engine == "minor-free":
        run = separators.minor_free_colour(G, ListAssignment.uniform(G.n, a.t - 1), a.t)
        extra["islands"] = len(run.islands)
        return G, run.colouring, extra
    if a.engine == "tree-peel":
        return G, greedy.tree_subgraph_peel(G, a.n_tree, a.r), extra
    if a.engine == "thickness-peel":
        L = ListAssignment.uniform(G.n, 6 * a.k + 1)
        return G, greedy.thickness_peel(G, L, a.k, a.genus), extra
    if a.engine == "immersion2":
        return G, structural.immersion_two_colour(G, a.t), extra
    if a.engine in ("vdhw-defect", "vdhw-cluster"):
        run = structural.vdhw_colour(G, a.t)
        chi = run.defect_colouring if a.engine == "vdhw-defect" else run.cluster_colouring
        extra["parts"] = len(run.parts)
        return G, chi, extra
    if a.engine == "circumference":
        return G, structural.circumference_colour(G, a.k), extra
    if a.engine == "defect2cluster":
        if not a.base_colouring:
            raise DefclustError("defect2cluster needs --base-colouring")
        base = graphio.read_colouring(_read_input(a.base_colouring), G.n)
        conv = structural.defect2_to_cluster(G, base, seed=a.seed)
        extra["transversal"] = len(conv.transversal)
        return G, conv.colouring, extra
    raise DefclustError(f"unknown engine {a.engine}")


def _cmd_colour(a) -> int:
    G = _load_graph(a)
    host, chi, extra = _run_engine(a, G)
    extra.setdefault("seed", a.seed)
    cert = audit(host, chi)
    sys.stdout.write(graphio.write_report(host, chi, cert, extra))
    if a.out_colouring:
        with open(a.out_colouring, "w") as fh:
            fh.write(graphio.write_colouring(chi))
    if a.dot:
        sys.stdout.write(graphio.write_dot(host, chi))
    return EXIT_OK


def _cmd_verify(a) -> int:
    G = graphio.read_graph(_read_input(a.graph), a.format)
    chi = graphio.read_colouring(_read_input(a.colouring), G.n)
    cert = audit(G, chi)
    sys.stdout.write(graphio.write_report(G, chi, cert))
    return EXIT_OK


_ORACLES = {
    "min-colours-defect",
    "min-colours-clustering",
    "has-minor",
    "ctd",
    "circumference",
    "min-balanced-separator",
}


def _cmd_oracle(a) -> int:
    G = graphio.read_graph(_read_input(a.graph), a.format)
    q = a.question
    if q == "min-colours-defect":
        kw = {"cap": a.cap} if a.cap else {}
        print(oracle.min_colours_defect(G, a.d, **kw))
    elif q == "min-colours-clustering":
        kw = {"cap": a.cap} if a.cap else {}
        print(oracle.min_colours_clustering(G, a.c, **kw))
    elif q == "has-minor":
        if not a.minor:
            raise DefclustError("has-minor needs --minor FILE")
        H = graphio.read_graph(_read_input(a.minor), a.minor_format)
        kw = {"g_cap": a.cap} if a.cap else {}
        print("true" if oracle.has_minor(G, H, **kw) else "false")
    elif q == "ctd":
        kw = {"cap": a.cap} if a.cap else {}
        print(oracle.connected_tree_depth(G, **kw))
    elif q == "circumference":
        kw = {"cap": a.cap} if a.cap else {}
        print(oracle.circumference(G, **kw))
    elif q == "min-balanced-separator":
        kw = {"cap": a.cap} if a.cap else {}
        S = oracle.min_balanced_separator(G, **kw)
        print(" ".join(map(str, sorted(S))))
    return EXIT_OK


def _cmd_params(a) -> int:
    if a.formula == "oow-light-bound":
        print(greedy.oow_light_bound(a.s, a.t, Fraction(a.delta), Fraction(a.nabla)))
    elif a.formula == "mad-defect":
        k, d = greedy.mad_defect_params(Fraction(a.m))
        print(f"k={k} d={d}")
    elif a.formula == "thickness-light":
        print(greedy.thickness_light_bound(a.genus, a.k))
    elif a.formula == "c-t":
        print(separators.minor_free_clustering_bound(a.t))
    elif a.formula == "lovasz":
        print(f"k={greedy.lovasz_colour_count(int(a.delta), a.d)}")
    return EXIT_OK


def _cmd_run(a) -> int:
    man = graphio.ExperimentManifest.from_json(_read_input(a.manifest))
    ns = argparse.Namespace(
        engine=man.engine,
        seed=man.seed,
        format=man.graph.get("format", "edgelist"),
        d=man.params.get("d", 1),
        k=man.params.get("k", 2),
        l=man.params.get("l", 10),
        t=man.params.get("t", 5),
        genus=man.params.get("g", 0),
        n_tree=man.params.get("n_tree", 4),
        r=man.params.get("r", 1),
        base_colouring=man.params.get("base_colouring"),
    )
    if "file" in man.graph:
        text = _read_input(man.graph["file"])
        G = (
            graphio.read_triangulation(text)
            if ns.format == "tri"
            else graphio.read_graph(text, ns.format)
        )
    elif "generator" in man.graph:
        spec = dict(man.graph["generator"])
        name = spec.pop("name")
        gen_ns = argparse.Namespace(
            h=spec.get("h", 2), d=spec.get("d", 2), c=spec.get("c", 2),
            k=spec.get("k", 2), s=spec.get("s", 2), t=spec.get("t", 2),
            n=spec.get("n", 10), r=spec.get("r", 3), girth=spec.get("girth", 4),
            seed=spec.get("seed", man.seed), ops=spec.get("ops", "prime"),
            base=spec.get("base", "path"), format="edgelist",
        )
        G = _GENERATORS[name](gen_ns)
        if isinstance(G, cons.MarkedTriangulation):
            G = G.tri
        elif isinstance(G, cons.ThicknessWitness):
            G = G.graph
        elif isinstance(G, tuple):
            G = G[0]
    else:
        raise DefclustError("manifest graph needs 'file' or 'generator'")
    host, chi, extra = _run_engine(ns, G)
    extra["seed"] = man.seed
    cert = audit(host, chi)
    report = graphio.write_report(host, chi, cert, extra)
    sys.stdout.write(report)
    bounds = {"colours": cert.k, "defect": cert.defect, "clustering": cert.clustering}
    for key, limit in man.expect.items():
        if key not in bounds:
            raise DefclustError(f"unknown expectation {key!r}")
        if bounds[key] > limit:
            print(f"expectation failed: {key} = {bounds[key]} > {limit}", file=sys.stderr)
            return EXIT_WITNESS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
