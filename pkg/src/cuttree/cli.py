"""Command-line surface: generate, build, verify, decompose, bench."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .expander import decompose, serialize_decomposition
from .fastgh import AlgoParams
from .generators import FAMILIES, GeneratorSpec, generate
from .ghtree import parse_tree, serialize_tree
from .graph import dump_graph, load_graph
from .harness import bench, verify_tree


def _read_graph(path: str, largest_component: bool):
    return load_graph(Path(path).read_text(), largest_component=largest_component)


def _cmd_gen(args: argparse.Namespace) -> int:
    params = {}
    for key in ("p", "p_in"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    for key in ("a", "b", "clusters", "size", "inter", "attach"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    spec = GeneratorSpec(args.family, args.n, seed=args.seed, params=params)
    g = generate(spec)
    Path(args.output).write_text(dump_graph(g))
    print(f"wrote {args.output}: n={g.n} m={g.m} family={args.family} seed={args.seed}")
    return 0


def _params_from_args(args: argparse.Namespace, n: int) -> AlgoParams:
    if args.preset == "paper-asymptotic":
        base = AlgoParams.paper_asymptotic(n, seed=args.seed)
    else:
        base = AlgoParams.desk(seed=args.seed)
    overrides = {
        "phi": args.phi,
        "pivot_samples": args.pivot_samples,
        "size_threshold": args.size_threshold,
        "prep_rounds": args.prep_rounds,
        "small_large_cap": args.cap,
        "min_cluster_work": args.min_cluster_work,
        "round_cap": args.round_cap,
    }
    for name, value in overrides.items():
        if value is not None:
            setattr(base, name, value)
            if name == "phi":
                base.alpha = value
    return base


def _cmd_build(args: argparse.Namespace) -> int:
    g = _read_graph(args.input, args.largest_component)
    params = _params_from_args(args, g.n)
    result = bench(g, args.algo, params)
    Path(args.output).write_text(serialize_tree(result.tree))
    if args.manifest:
        if result.manifest is not None:
            Path(args.manifest).write_text(result.manifest.to_text())
        else:
            Path(args.manifest).write_text(
                '{\n  "algo": "classic",\n'
                f'  "flow_calls": {result.counters.calls},\n'
                f'  "flow_edges": {result.counters.edge_volume}\n'
                "}\n"
            )
    print(f"wrote {args.output}")
    print(result.summary())
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    g = _read_graph(args.input, args.largest_component)
    tree = parse_tree(Path(args.tree).read_text())
    if tree.n != g.n:
        print(f"tree covers {tree.n} vertices but graph has {g.n}", file=sys.stderr)
        return 1
    mode = "sampled" if args.sample is not None else "all-pairs"
    report = verify_tree(g, tree, mode=mode, sample_k=args.sample or 0, seed=args.seed)
    print(
        f"pairs checked: {report.pairs_checked}; mismatches: {len(report.mismatches)};"
        f" cut sides valid: {report.cut_side_valid}; elapsed: {report.elapsed:.3f}s"
    )
    for a, b, tv, gv in report.mismatches[:20]:
        print(f"  mismatch ({a + 1},{b + 1}): tree={tv} graph={gv}")
    return 0 if report.accepted else 1


def _cmd_decompose(args: argparse.Namespace) -> int:
    g = _read_graph(args.input, args.largest_component)
    alpha = args.alpha if args.alpha is not None else args.phi
    dec = decompose(
        g,
        alpha,
        args.phi,
        b1=args.b1,
        b2=args.b2,
        use_log_budgets=args.log_budgets,
    )
    Path(args.output).write_text(serialize_decomposition(dec))
    status = "best-effort" if dec.best_effort else "certified"
    print(f"wrote {args.output}: {len(dec.clusters)} clusters ({status})")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    g = _read_graph(args.input, args.largest_component)
    params = _params_from_args(args, g.n)
    result = bench(g, args.algo, params)
    print(result.summary())
    if args.output:
        if result.manifest is not None:
            Path(args.output).write_text(result.manifest.to_text())
        else:
            Path(args.output).write_text(
                '{\n  "algo": "classic",\n'
                f'  "flow_calls": {result.counters.calls},\n'
                f'  "flow_edges": {result.counters.edge_volume}\n'
                "}\n"
            )
    return 0


def _add_param_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", choices=("desk", "paper-asymptotic"), default="desk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi", type=float, default=None)
    p.add_argument("--pivot-samples", dest="pivot_samples", type=int, default=None)
    p.add_argument("--size-threshold", dest="size_threshold", type=int, default=None)
    p.add_argument("--prep-rounds", dest="prep_rounds", type=int, default=None)
    p.add_argument("--cap", type=int, default=None, help="small/large classification cap")
    p.add_argument(
        "--min-cluster-work", dest="min_cluster_work", type=int, default=None
    )
    p.add_argument("--round-cap", dest="round_cap", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuttree",
        description="Cut-equivalent trees of connected simple graphs, with "
        "verification oracles and expander-decomposition-guided builders.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a connected simple graph")
    p_gen.add_argument("--family", choices=FAMILIES, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", required=True)
    p_gen.add_argument("--p", type=float, default=None, help="gnp edge probability")
    p_gen.add_argument("--a", type=int, default=None, help="barbell left size")
    p_gen.add_argument("--b", type=int, default=None, help="barbell right size")
    p_gen.add_argument("--clusters", type=int, default=None)
    p_gen.add_argument("--size", type=int, default=None, help="planted cluster size")
    p_gen.add_argument("--p-in", dest="p_in", type=float, default=None)
    p_gen.add_argument("--inter", type=int, default=None, help="bridges per cluster pair")
    p_gen.add_argument("--attach", type=int, default=None, help="powerlaw attachments")
    p_gen.set_defaults(func=_cmd_gen)

    p_build = sub.add_parser("build", help="construct a cut-equivalent tree")
    p_build.add_argument("--algo", choices=("classic", "cond", "uncond"), required=True)
    p_build.add_argument("-i", "--input", required=True)
    p_build.add_argument("-o", "--output", required=True)
    p_build.add_argument("--manifest", default=None)
    p_build.add_argument("--largest-component", action="store_true")
    _add_param_flags(p_build)
    p_build.set_defaults(func=_cmd_build)

    p_verify = sub.add_parser("verify", help="check a tree against the graph")
    p_verify.add_argument("-i", "--input", required=True)
    p_verify.add_argument("-t", "--tree", required=True)
    group = p_verify.add_mutually_exclusive_group()
    group.add_argument("--all-pairs", action="store_true", default=True)
    group.add_argument("--sample", type=int, default=None, metavar="K")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--largest-component", action="store_true")
    p_verify.set_defaults(func=_cmd_verify)

    p_dec = sub.add_parser("decompose", help="certified expander decomposition")
    p_dec.add_argument("--phi", type=float, required=True)
    p_dec.add_argument("--alpha", type=float, default=None)
    p_dec.add_argument("--b1", type=float, default=4.0)
    p_dec.add_argument("--b2", type=float, default=8.0)
    p_dec.add_argument("--log-budgets", action="store_true")
    p_dec.add_argument("-i", "--input", required=True)
    p_dec.add_argument("-o", "--output", required=True)
    p_dec.add_argument("--largest-component", action="store_true")
    p_dec.set_defaults(func=_cmd_decompose)

    p_bench = sub.add_parser("bench", help="run a builder and report counters")
    p_bench.add_argument("--algo", choices=("classic", "cond", "uncond"), required=True)
    p_bench.add_argument("-i", "--input", required=True)
    p_bench.add_argument("-o", "--output", default=None, help="manifest output path")
    p_bench.add_argument("--largest-component", action="store_true")
    _add_param_flags(p_bench)
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
