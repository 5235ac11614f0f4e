#!/usr/bin/env python3
"""Grounding-size scaling benches: CSV rows plus log-log slopes.

Runs the two standard schedules (star program vs m; APSP on paths vs m*n)
and any extra schedule given on the command line via the semlog CLI.
"""

import argparse
import random
import sys
import time

from semlog import corpus_program, tropical
from semlog.cli import build_bench_instance, loglog_slope
from semlog.grounding import ground_program
from semlog.solver import solve_grounding


def bench(program_name, family, sizes, seed=0, strategy="auto"):
    prog = corpus_program(program_name)
    sr = tropical()
    rows = []
    for size in sizes:
        rng = random.Random(f"{seed}:{program_name}:{family}:{size}")
        inst = build_bench_instance(prog, family, size, sr, rng)
        t0 = time.perf_counter()
        g, _ = ground_program(prog, inst, strategy=strategy)
        sol = solve_grounding(g, method="auto")
        wall = time.perf_counter() - t0
        rows.append((size, inst.m, inst.n, g.size, wall))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("program,family,size,m,n,grounding_size,wall_time")
    star = bench("ex51_star", "random-graph", [1024, 2048, 4096, 8192, 16384],
                 seed=args.seed)
    for r in star:
        print("ex51_star,random-graph,%d,%d,%d,%d,%.4f" % r)
    apsp = bench("apsp", "path", [31, 63, 127, 255], seed=args.seed)
    for r in apsp:
        print("apsp,path,%d,%d,%d,%d,%.4f" % r)

    s1 = loglog_slope([r[1] for r in star], [r[3] for r in star])
    s2 = loglog_slope([r[1] * r[2] for r in apsp], [r[3] for r in apsp])
    print(f"# slope ex51_star |G| vs m: {s1:.3f}", file=sys.stderr)
    print(f"# slope apsp |G| vs m*n:  {s2:.3f}", file=sys.stderr)


if __name__ == "__main__":
    main()
