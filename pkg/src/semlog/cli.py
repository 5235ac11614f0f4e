"""Command-line surface: run, ground, check, bench, classify.

Exit codes: 0 success; 2 parse/validation error; 3 solver capability error;
4 grounding cap exceeded; 5 non-convergence; 6 cross-check disagreement.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import statistics
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from . import CORPUS_ALL, corpus_text
from .frontend import (
    FrontendError,
    Instance,
    build_instance,
    check_instance_against,
    classify,
    parse_facts,
    parse_program,
)
from .decomposition import CyclicVerdict, build_hypergraph, dump_tree, gyo_join_tree
from .grounding import (
    CapExceeded,
    CyclicRuleError,
    STRATEGIES,
    ground_program,
)
from .semirings import semiring_from_token
from .solver import (
    METHODS,
    NonConvergence,
    SolverCapabilityError,
    applicable_methods,
    kleene_program,
    solve_grounding,
)

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAPABILITY = 3
EXIT_CAP_EXCEEDED = 4
EXIT_NONCONVERGENCE = 5
EXIT_DISAGREEMENT = 6

EXIT_CODE_HELP = (
    "exit codes: 0 success, 2 parse/validation error, 3 solver capability "
    "error, 4 grounding size cap exceeded, 5 non-convergence, "
    "6 cross-check disagreement"
)


@dataclass
class RunConfig:
    program: str
    facts: Optional[str] = None
    semiring: str = "boolean"
    strategy: str = "auto"
    solver: str = "auto"
    max_iters: Optional[int] = None
    output: str = "tsv"
    explain: bool = False
    seed: int = 0
    cap_size: Optional[int] = None


@dataclass
class StatsReport:
    m: int
    n: int
    grounding_size: int
    canonical_size: Optional[int]
    strategies: list
    solver: str
    wall_time: float
    solver_stats: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [
            f"m\t{self.m}",
            f"n\t{self.n}",
            f"grounding_size\t{self.grounding_size}",
        ]
        if self.canonical_size is not None:
            out.append(f"canonical_size\t{self.canonical_size}")
        for bs in self.strategies:
            out.append(f"strategy\t{bs.rule}[{bs.body}]\t{bs.strategy}")
        out.append(f"solver\t{self.solver}")
        for key in ("popped", "semiring_ops", "iterations"):
            if key in self.solver_stats:
                out.append(f"{key}\t{self.solver_stats[key]}")
        out.append(f"wall_time\t{self.wall_time:.4f}")
        return out


def _load_program_text(token: str) -> str:
    if token.startswith("corpus:"):
        return corpus_text(token.split(":", 1)[1])
    with open(token) as fh:
        return fh.read()


def _load_inputs(cfg: RunConfig):
    program = parse_program(_load_program_text(cfg.program))
    sr = semiring_from_token(cfg.semiring)
    if cfg.facts is None:
        instance = build_instance({}, sr)
    else:
        with open(cfg.facts) as fh:
            instance = parse_facts(fh.read(), sr)
    check_instance_against(program, instance)
    return program, instance


def _format_atom(symbol: str, args: tuple[str, ...]) -> str:
    return f"{symbol}({','.join(args)})"


def cmd_run(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    program, instance = _load_inputs(cfg)
    g, report = ground_program(
        program, instance, strategy=cfg.strategy, cap=cfg.cap_size
    )
    sol = solve_grounding(g, method=cfg.solver, max_iters=cfg.max_iters)
    rel = sol.relation(g, program.target)
    wall = time.perf_counter() - t0
    stats = StatsReport(
        m=instance.m,
        n=instance.n,
        grounding_size=g.size,
        canonical_size=sol.stats.get("canonical_size"),
        strategies=report,
        solver=sol.method,
        wall_time=wall,
        solver_stats=sol.stats,
    )
    if cfg.output == "structured":
        doc = {
            "target": program.target,
            "relation": {
                _format_atom(program.target, t): instance.semiring.format_value(v)
                for t, v in sorted(rel.items())
            },
            "stats": {
                "m": stats.m,
                "n": stats.n,
                "grounding_size": stats.grounding_size,
                "canonical_size": stats.canonical_size,
                "strategies": [
                    {"rule": b.rule, "body": b.body, "strategy": b.strategy}
                    for b in report
                ],
                "solver": sol.method,
                "wall_time": wall,
            },
        }
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for t in sorted(rel):
            print(f"{_format_atom(program.target, t)}\t{instance.semiring.format_value(rel[t])}")
        for line in stats.lines():
            print(line, file=sys.stderr)
    return EXIT_OK


def cmd_ground(cfg: RunConfig) -> int:
    program, instance = _load_inputs(cfg)
    g, report = ground_program(
        program, instance, strategy=cfg.strategy, cap=cfg.cap_size
    )
    if cfg.explain:
        for rule in program.rules:
            for bi, body in enumerate(rule.bodies):
                tree = gyo_join_tree(build_hypergraph(body))
                print(f"% rule {rule.head_pred} body {bi}:")
                if isinstance(tree, CyclicVerdict):
                    print("%   cyclic; residue edges:", [e.id for e in tree.residue])
                else:
                    chosen = next(
                        b for b in report if b.rule == rule.head_pred and b.body == bi
                    )
                    root = chosen.root if chosen.root is not None else 0
                    print(f"%   strategy {chosen.strategy}")
                    for line in dump_tree(tree, root, body).splitlines():
                        print(f"%   {line}")
    if cfg.output == "structured":
        print(json.dumps(g.to_record(), indent=2, sort_keys=True))
    else:
        sys.stdout.write(g.to_text())
    return EXIT_OK


def cmd_check(cfg: RunConfig, max_n: int = 12) -> int:
    program, instance = _load_inputs(cfg)
    if instance.n > max_n:
        print(
            f"check requires n <= {max_n} (got {instance.n}): "
            "the reference evaluation is exponential in rule width",
            file=sys.stderr,
        )
        return EXIT_PARSE
    oracle = kleene_program(program, instance)[program.target]
    rows = []
    ok = True
    first_diff = None
    for strategy in ("naive", "acyclic", "auto"):
        try:
            g, _ = ground_program(program, instance, strategy=strategy)
        except CyclicRuleError:
            rows.append((strategy, "-", "cyclic"))
            continue
        for method in applicable_methods(instance.semiring):
            sol = solve_grounding(g, method=method, max_iters=cfg.max_iters)
            rel = sol.relation(g, program.target)
            agree = rel == oracle
            rows.append((strategy, method, "agree" if agree else "DISAGREE"))
            if not agree and first_diff is None:
                ok = False
                diff_keys = set(rel) ^ set(oracle)
                diff_keys |= {k for k in set(rel) & set(oracle) if rel[k] != oracle[k]}
                first_diff = _format_atom(program.target, min(diff_keys))
    print(f"oracle: kleene_program on {program.target} ({len(oracle)} tuples)")
    for strategy, method, verdict in rows:
        print(f"{strategy}\t{method}\t{verdict}")
    if not ok:
        print(f"first differing atom: {first_diff}", file=sys.stderr)
        return EXIT_DISAGREEMENT
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    program = parse_program(_load_program_text(cfg.program))
    for key, value in classify(program).as_dict().items():
        print(f"{key}\t{str(value).lower()}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Bench
# ---------------------------------------------------------------------------


def gen_path(n: int, rng: random.Random) -> list[tuple[str, str, int]]:
    nodes = [f"v{i}" for i in range(n)]
    return [(nodes[i], nodes[i + 1], rng.randint(1, 10)) for i in range(n - 1)]


def gen_random_graph(n: int, m: int, rng: random.Random) -> list[tuple[str, str, int]]:
    nodes = [f"v{i}" for i in range(n)]
    m = min(m, n * n)
    seen = set()
    while len(seen) < m:
        seen.add((rng.randrange(n), rng.randrange(n)))
    return [(nodes[a], nodes[b], rng.randint(1, 10)) for a, b in sorted(seen)]


def gen_grid(k: int, rng: random.Random) -> list[tuple[str, str, int]]:
    def name(i, j):
        return f"v{i}_{j}"

    edges = []
    for i in range(k):
        for j in range(k):
            if j + 1 < k:
                edges.append((name(i, j), name(i, j + 1), rng.randint(1, 10)))
            if i + 1 < k:
                edges.append((name(i, j), name(i + 1, j), rng.randint(1, 10)))
    return edges


def build_bench_instance(program, family: str, size: int, semiring, rng, nodes=None) -> Instance:
    """Random instance for one bench cell.

    Every binary EDB receives an independently drawn edge set of ~`size`
    facts; unary EDBs cover all generated nodes with the multiplicative
    identity, so instance.m reflects the realized total.
    """
    if family == "path":
        make = lambda: gen_path(size + 1, rng)
    elif family == "grid":
        k = max(2, int(math.isqrt(size // 2)) + 1)
        make = lambda: gen_grid(k, rng)
    elif family == "random-graph":
        n = nodes if nodes else max(4, 2 * int(math.isqrt(size)))
        make = lambda: gen_random_graph(n, size, rng)
    else:
        raise ValueError(f"unknown bench family {family!r}")

    def annot(w):
        if semiring.name == "tropical":
            return float(w)
        if semiring.name == "naturals":
            return 1
        return semiring.one

    relations: dict[str, dict[tuple[str, ...], object]] = {}
    all_nodes: set[str] = set()
    for pred, arity in sorted(program.edb_schema.items()):
        if arity == 2:
            rel = {}
            for a, b, w in make():
                rel[(a, b)] = annot(w)
                all_nodes.update((a, b))
            relations[pred] = rel
    for pred, arity in sorted(program.edb_schema.items()):
        if arity == 1:
            relations[pred] = {(v,): semiring.one for v in sorted(all_nodes)}
        elif arity != 2:
            raise ValueError(f"bench cannot generate arity-{arity} EDB {pred}")
    return build_instance(relations, semiring)


def loglog_slope(xs: list[float], ys: list[float]) -> float:
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    return statistics.linear_regression(lx, ly).slope


def cmd_bench(cfg: RunConfig, family: str, sizes: list[int], nodes: Optional[int]) -> int:
    program = parse_program(_load_program_text(cfg.program))
    sr = semiring_from_token(cfg.semiring)
    print("index,family,size,m,n,grounding_size,canonical_size,solver,wall_time,status")
    rows = []
    for idx, size in enumerate(sizes):
        rng = random.Random(f"{cfg.seed}:{family}:{size}")
        instance = build_bench_instance(program, family, size, sr, rng, nodes)
        t0 = time.perf_counter()
        try:
            g, _ = ground_program(program, instance, strategy=cfg.strategy, cap=cfg.cap_size)
            sol = solve_grounding(g, method=cfg.solver, max_iters=cfg.max_iters)
        except CapExceeded:
            print(f"{idx},{family},{size},{instance.m},{instance.n},,,,"
                  f"{time.perf_counter() - t0:.4f},cap-exceeded")
            continue
        wall = time.perf_counter() - t0
        csize = sol.stats.get("canonical_size", "")
        print(
            f"{idx},{family},{size},{instance.m},{instance.n},{g.size},"
            f"{csize},{sol.method},{wall:.4f},ok"
        )
        rows.append((instance.m, instance.n, g.size))
    if len(rows) >= 2:
        ms = [r[0] for r in rows]
        ns = [r[1] for r in rows]
        gs = [r[2] for r in rows]
        print(f"slope |G| vs m: {loglog_slope(ms, gs):.3f}", file=sys.stderr)
        print(f"slope |G| vs n: {loglog_slope(ns, gs):.3f}", file=sys.stderr)
        print(
            f"slope |G| vs m*n: {loglog_slope([m * n for m, n in zip(ms, ns)], gs):.3f}",
            file=sys.stderr,
        )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, facts: bool = True) -> None:
    p.add_argument("--program", required=True,
                   help="program file path or corpus:<name> "
                        f"(corpus: {', '.join(CORPUS_ALL)})")
    if facts:
        p.add_argument("--facts", help="fact file (one annotated fact per line)")
    p.add_argument("--semiring", default="boolean",
                   help="boolean | tropical | naturals | set:<k1,...> | access")
    p.add_argument("--strategy", default="auto", choices=STRATEGIES)
    p.add_argument("--solver", default="auto", choices=METHODS)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--output", default="tsv", choices=("tsv", "structured"))
    p.add_argument("--explain", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap-size", type=int, default=None,
                   help="abort grounding beyond this size")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="semlog", epilog=EXIT_CODE_HELP)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("run", "ground", "check"):
        _add_common(sub.add_parser(name, epilog=EXIT_CODE_HELP))
    _add_common(sub.add_parser("classify", epilog=EXIT_CODE_HELP), facts=False)
    bench = sub.add_parser("bench", epilog=EXIT_CODE_HELP)
    _add_common(bench, facts=False)
    bench.add_argument("--family", default="path",
                       choices=("path", "random-graph", "grid"))
    bench.add_argument("--sizes", default="1024,2048,4096",
                       help="comma-separated size schedule")
    bench.add_argument("--nodes", type=int, default=None,
                       help="fix the node count for random-graph")
    return ap


def _config_from(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        program=args.program,
        facts=getattr(args, "facts", None),
        semiring=args.semiring,
        strategy=args.strategy,
        solver=args.solver,
        max_iters=args.max_iters,
        output=args.output,
        explain=args.explain,
        seed=args.seed,
        cap_size=args.cap_size,
    )


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = _config_from(args)
    try:
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "ground":
            return cmd_ground(cfg)
        if args.command == "check":
            return cmd_check(cfg)
        if args.command == "classify":
            return cmd_classify(cfg)
        if args.command == "bench":
            sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
            return cmd_bench(cfg, args.family, sizes, args.nodes)
        raise AssertionError(args.command)
    except (FrontendError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SolverCapabilityError as exc:
        print(f"capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except CyclicRuleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP_EXCEEDED
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    raise SystemExit(main())
