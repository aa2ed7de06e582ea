"""Command-line front end: ``check``, ``oracle``, ``spq``, ``gen``, ``compare``, ``bench``."""

from __future__ import annotations

import argparse
import json
import random
import statistics
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from .assemble import decide_upward_planar
from .errors import UplanarError
from .generate import MODES, generate, random_block_tree
from .graph import Digraph, block_cut_tree, format_graph, is_connected, parse_graph, validate_partial_two_tree
from .oracle import oracle_certificate, oracle_feasible_set, oracle_upward_planar
from .rooted import rooted_feasible_sets
from .spq import build_spq
from .unrooted import test_biconnected

EXIT_YES, EXIT_NO, EXIT_INPUT = 0, 1, 2


def _emit(args: argparse.Namespace, report: dict, text: str) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(text)


def _load(path: str, strict_simple: bool = False) -> Digraph:
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return parse_graph(text, strict_simple=strict_simple)


def _find_edge(g: Digraph, text: str) -> int:
    try:
        tail, head = (int(x) for x in text.split(","))
    except ValueError:
        raise UplanarError(f"--rooted expects TAIL,HEAD, got {text!r}") from None
    for e, (a, b) in enumerate(g.edges):
        if (a, b) == (tail, head):
            return e
    raise UplanarError(f"no edge {tail}->{head} in the input")


def _shape_list(fs) -> list[str]:
    return [str(s) for s in fs.ordered()]


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------


def cmd_check(args: argparse.Namespace) -> int:
    g = _load(args.file, args.strict_simple)
    if not validate_partial_two_tree(g):
        raise UplanarError("input is not a directed partial 2-tree (K4 minor found)")
    if args.rooted:
        return _check_rooted(args, g)
    verdict = decide_upward_planar(g, acyclic_fast_path=args.acyclic_fast_path,
                                   first_hit=args.first_hit, keep_sets=args.dump_feasible or args.dump_arcs)
    report = {
        "verdict": verdict.upward,
        "method": "algorithm",
        "timings_ms": verdict.timings_ms,
        "stats": {
            "n": g.n,
            "m": g.m,
            "components": verdict.components,
            "blocks": len(verdict.blocks),
            "spq_nodes": [b.spq_nodes for b in verdict.blocks],
        },
        "cyclic_shortcut": verdict.cyclic_shortcut,
    }
    lines = [f"upward planar: {'yes' if verdict.upward else 'no'}"]
    if args.explain:
        report["root_block"] = verdict.root_block
        report["blocks"] = [
            {"edges": list(b.edges), "vertices": list(b.vertices), "upward": b.upward,
             "nonempty_roots": b.nonempty_roots, "rejected_at": b.rejected_at, "arcs_computed": b.arcs_computed}
            for b in verdict.blocks
        ]
        if verdict.cyclic_shortcut:
            lines.append("rejected by the acyclicity fast path")
        if verdict.root_block is not None:
            lines.append(f"accepting root block: {verdict.root_block}")
        for i, b in enumerate(verdict.blocks):
            state = "upward" if b.upward else "not upward"
            if b.rejected_at is not None:
                state += f" (two empty neighbors at SPQ node {b.rejected_at})"
            lines.append(f"block {i}: {len(b.vertices)} vertices, {len(b.edges)} edges, "
                         f"{b.nonempty_roots} root edges with nonempty sets, {state}")
    if args.dump_feasible:
        report["root_sets"] = {str(e): _shape_list(fs) for e, fs in sorted(verdict.root_sets.items())}
        for e, fs in sorted(verdict.root_sets.items()):
            lines.append(f"F[root e{e}] size {len(fs)}: {' '.join(_shape_list(fs))}")
    if args.dump_arcs:
        arcs = []
        for tree in verdict.trees:
            res = test_biconnected(tree)
            arcs.append({f"{mu}->{tau}": len(fs) for (mu, tau), fs in sorted(res.arcs.items())})
        report["arcs"] = arcs
        for i, block_arcs in enumerate(arcs):
            lines.append(f"block {i} arcs: " + ", ".join(f"{k}:{v}" for k, v in block_arcs.items()))
    _emit(args, report, "\n".join(lines))
    return EXIT_YES if verdict.upward else EXIT_NO


def _check_rooted(args: argparse.Namespace, g: Digraph) -> int:
    e = _find_edge(g, args.rooted)
    if not is_connected(g):
        raise UplanarError("--rooted needs a connected input")
    bct = block_cut_tree(g)
    block = next(b for b in bct.blocks if e in b)
    tree = build_spq(g, block)
    _, root = rooted_feasible_sets(tree, e)
    report = {"verdict": bool(root), "method": "algorithm", "root_edge": e,
              "block_edges": list(block), "root_set_size": len(root)}
    lines = [f"block of edge {e} upward planar with the edge on the outer face: {'yes' if root else 'no'}",
             f"|F| = {len(root)}"]
    if args.dump_feasible:
        report["root_set"] = _shape_list(root)
        lines.extend(_shape_list(root))
    _emit(args, report, "\n".join(lines))
    return EXIT_YES if root else EXIT_NO


# ---------------------------------------------------------------------------
# oracle / spq / gen
# ---------------------------------------------------------------------------


def cmd_oracle(args: argparse.Namespace) -> int:
    g = _load(args.file, args.strict_simple)
    verdict = oracle_upward_planar(g)
    report: dict = {"verdict": verdict, "method": "oracle"}
    lines = [f"upward planar (exhaustive): {'yes' if verdict else 'no'}"]
    if args.certificate and verdict and is_connected(g):
        cert = oracle_certificate(g)
        if cert is not None:
            report["certificate"] = cert.to_json()
            lines.append(json.dumps(cert.to_json()))
    _emit(args, report, "\n".join(lines))
    return EXIT_YES if verdict else EXIT_NO


def cmd_spq(args: argparse.Namespace) -> int:
    g = _load(args.file, args.strict_simple)
    if not is_connected(g):
        raise UplanarError("spq needs a connected input")
    bct = block_cut_tree(g)
    report = {"blocks": []}
    lines = []
    for i, block in enumerate(bct.blocks):
        tree = build_spq(g, block)
        root_edge = args.root_edge if args.root_edge in block else block[0]
        report["blocks"].append({"edges": list(block), "root_edge": root_edge, "tree": tree.to_json()})
        lines.append(f"block {i} rooted at edge {root_edge}:")
        lines.append(tree.rooted_view(root_edge).render())
    _emit(args, report, "\n".join(lines))
    return EXIT_YES


def cmd_gen(args: argparse.Namespace) -> int:
    g = generate(args.n, args.seed, args.mode)
    text = format_graph(g)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def compare_instance(g: Digraph, feasible_sets: bool, inject_fault: bool = False) -> Optional[str]:
    """Description of the first disagreement between algorithm and oracle, or ``None``."""
    algo = decide_upward_planar(g).upward
    if inject_fault:
        algo = not algo
    truth = oracle_upward_planar(g)
    if algo != truth:
        return f"verdict: algorithm={algo} oracle={truth}"
    if not feasible_sets or not is_connected(g):
        return None
    for block in block_cut_tree(g).blocks:
        tree = build_spq(g, block)
        for e in block:
            view = tree.rooted_view(e)
            sets, _ = rooted_feasible_sets(tree, e)
            for mu, fs in sets.items():
                p = view.parent(mu)
                sub, old = g.subgraph(tree.pertinent_edges(mu, p))
                u, v = tree.poles[(mu, p)]
                expected = oracle_feasible_set(sub, (old.index(u), old.index(v)))
                if expected != fs:
                    return f"feasible set of node {mu} toward {p} (root edge {e}) differs"
    return None


def minimize(g: Digraph, still_fails) -> Digraph:
    """Greedily drop edges (keeping the graph connected) while the failure persists."""
    current = g
    changed = True
    while changed and current.m > 1:
        changed = False
        for e in range(current.m):
            edges = [x for i, x in enumerate(current.edges) if i != e]
            used = sorted({v for ed in edges for v in ed})
            relabel = {v: i for i, v in enumerate(used)}
            cand = Digraph.from_edges(len(used), [(relabel[a], relabel[b]) for a, b in edges])
            if is_connected(cand) and still_fails(cand):
                current = cand
                changed = True
                break
    return current


def _compare_instances(count: int, max_n: int, seed: int):
    rng = random.Random(seed)
    for i in range(count):
        n = rng.randint(3, max_n)
        kind = i % 5
        if kind < 4:
            yield generate(n, rng.randrange(1 << 30), MODES[kind])
        else:
            yield random_block_tree(n, rng.randrange(1 << 30), blocks=rng.randint(2, max(2, min(3, n - 1))))


def cmd_compare(args: argparse.Namespace) -> int:
    checked = 0
    for g in _compare_instances(args.count, args.max_n, args.seed):
        problem = compare_instance(g, args.feasible_sets, args.inject_fault)
        checked += 1
        if problem is not None:
            small = minimize(g, lambda h: compare_instance(h, args.feasible_sets, args.inject_fault) is not None)
            Path(args.reproducer).write_text(format_graph(small))
            report = {"checked": checked, "mismatch": problem, "reproducer": args.reproducer,
                      "instance": format_graph(g)}
            _emit(args, report, f"MISMATCH after {checked} instances: {problem}\n"
                                f"minimized reproducer written to {args.reproducer}\n{format_graph(small)}")
            return EXIT_NO
    _emit(args, {"checked": checked, "mismatch": None}, f"{checked} instances, no mismatch")
    return EXIT_YES


# ---------------------------------------------------------------------------
# bench
# ---------------------------------------------------------------------------


def bench(sizes: Sequence[int], seed: int, reps: int = 5, mode: str = "dag-oriented",
          first_hit: bool = True) -> tuple[list[dict], float]:
    """Median runtime per size and the fitted log-log slope."""
    import numpy as np

    rows = []
    for n in sizes:
        g = generate(n, seed, mode)
        times = []
        verdict = None
        for _ in range(reps):
            t = time.perf_counter()
            verdict = decide_upward_planar(g, first_hit=first_hit).upward
            times.append((time.perf_counter() - t) * 1000)
        rows.append({"n": n, "m": g.m, "seed": seed, "mode": mode, "verdict": verdict,
                     "median_ms": round(statistics.median(times), 3)})
    xs = np.log([r["n"] for r in rows])
    ys = np.log([max(r["median_ms"], 1e-6) for r in rows])
    slope = float(np.polyfit(xs, ys, 1)[0]) if len(rows) >= 2 else float("nan")
    return rows, slope


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = sorted(args.sizes)
    rows, slope = bench(sizes, args.seed, args.reps, args.mode, not args.all_roots)
    text = "\n".join([f"{'n':>8} {'m':>8} {'verdict':>8} {'median ms':>12}"]
                     + [f"{r['n']:>8} {r['m']:>8} {str(r['verdict']):>8} {r['median_ms']:>12.1f}" for r in rows]
                     + [f"log-log slope: {slope:.3f}"])
    _emit(args, {"rows": rows, "slope": slope}, text)
    return EXIT_YES


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uplanar", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--strict-simple", action="store_true", help="reject parallel and antiparallel edges")

    p = sub.add_parser("check", help="decide upward planarity")
    p.add_argument("file", help="graph file ('-' for stdin)")
    common(p)
    p.add_argument("--rooted", metavar="TAIL,HEAD", help="only test embeddings with this edge on the outer face")
    p.add_argument("--dump-feasible", action="store_true", help="print root feasible sets")
    p.add_argument("--dump-arcs", action="store_true", help="print per-arc feasible-set sizes")
    p.add_argument("--explain", action="store_true", help="per-block summary and accepting root block")
    p.add_argument("--first-hit", action=argparse.BooleanOptionalAction, default=True,
                   help="stop a single-block run at the first nonempty root set (default on)")
    p.add_argument("--acyclic-fast-path", action="store_true", help="reject cyclic inputs before the DP")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="exhaustive verdict for small inputs")
    p.add_argument("file")
    common(p)
    p.add_argument("--certificate", action="store_true", help="print one embedding certificate")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("spq", help="print the SPQ-tree of every block")
    p.add_argument("file")
    common(p)
    p.add_argument("--root-edge", type=int, default=-1)
    p.set_defaults(func=cmd_spq)

    p = sub.add_parser("gen", help="generate a random instance")
    p.add_argument("n", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=MODES, default="partial")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="differential test against the oracle")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--max-n", type=int, default=7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--feasible-sets", action="store_true", help="also compare every node's feasible set")
    p.add_argument("--inject-fault", action="store_true", help="flip the algorithm's verdict (harness self-test)")
    p.add_argument("--reproducer", default="mismatch.txt")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="runtime scaling on generated instances")
    p.add_argument("--sizes", type=int, nargs="+", default=[1000, 2000, 4000, 8000])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--mode", choices=MODES, default="dag-oriented")
    p.add_argument("--all-roots", action="store_true", help="compute every root set (no early exit)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UplanarError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
