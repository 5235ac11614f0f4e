"""Fixpoint solvers over grounded equation systems.

The grounding is first rewritten into 2-canonical form (every equation is
y = a (+) b or y = a (x) b).  Two specialized least-fixpoint solvers run on
that form: a worklist solver for finite-rank semirings and a priority-queue
solver for absorptive, totally ordered ones.  Kleene iteration is kept both
on the canonical system and directly on programs as independent oracles.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from .frontend import Instance, Program, SumProdQuery
from .grounding import KIND_COEFF, KIND_VAR, Grounding


class SolverError(Exception):
    pass


class SolverCapabilityError(SolverError):
    """The chosen solver does not support this semiring."""


class NonConvergence(SolverError):
    def __init__(self, iterations: int):
        super().__init__(f"no fixpoint after {iterations} iterations")
        self.iterations = iterations


OP_PLUS = "+"
OP_TIMES = "*"


class TwoCanonicalSystem:
    """Equations (lhs, op, a, b) over interned nodes.

    Nodes 0 and 1 are the constant additive/multiplicative identities;
    coefficient nodes are constants, every variable node has exactly one
    defining equation.  `uses[v]` lists each equation index once per
    occurrence of v as an operand, so an equation appears twice when both
    operands are v.
    """

    def __init__(self, semiring):
        self.semiring = semiring
        self.init_values: list = [semiring.zero, semiring.one]
        self.is_const: list[bool] = [True, True]
        self.names: list[str] = ["__zero", "__one"]
        self.equations: list[tuple[int, str, int, int]] = []
        self.uses: dict[int, list[int]] = {}
        self.origin: dict[int, int] = {}  # node -> grounding atom id
        self.node_of_atom: dict[int, int] = {}

    ZERO = 0
    ONE = 1

    def new_const(self, value, name: str) -> int:
        nid = len(self.init_values)
        self.init_values.append(value)
        self.is_const.append(True)
        self.names.append(name)
        return nid

    def new_var(self, name: str) -> int:
        nid = len(self.init_values)
        self.init_values.append(self.semiring.zero)
        self.is_const.append(False)
        self.names.append(name)
        return nid

    def add_equation(self, lhs: int, op: str, a: int, b: int) -> None:
        eq = len(self.equations)
        self.equations.append((lhs, op, a, b))
        for operand in (a, b):
            if not self.is_const[operand]:
                self.uses.setdefault(operand, []).append(eq)

    @property
    def size(self) -> int:
        """Occurrence count: one left-hand side plus two operands per equation."""
        return 3 * len(self.equations)

    def num_vars(self) -> int:
        return sum(1 for c in self.is_const if not c)


def to_two_canonical(g: Grounding) -> TwoCanonicalSystem:
    """Rewrite sums of monomials into chains of binary equations.

    Length-1 monomials are used directly inside sum chains; a whole
    equation consisting of one length-1 monomial becomes y = x (x) one.
    The result has size at most 4x the grounding's.
    """
    sys = TwoCanonicalSystem(g.semiring)
    fresh = itertools.count()

    def node_for(aid: int) -> int:
        nid = sys.node_of_atom.get(aid)
        if nid is None:
            name = g.atom_name(aid)
            if g.kinds[aid] == KIND_COEFF:
                nid = sys.new_const(g.values[aid], name)
            else:
                nid = sys.new_var(name)
            sys.node_of_atom[aid] = nid
            sys.origin[nid] = aid
        return nid

    def product_chain(operands: list[int], out: Optional[int]) -> int:
        """Chain of (x) equations; the last one targets `out` if given."""
        acc = operands[0]
        for i, nxt in enumerate(operands[1:], start=2):
            last = i == len(operands)
            lhs = out if (last and out is not None) else sys.new_var(f"__t{next(fresh)}")
            sys.add_equation(lhs, OP_TIMES, acc, nxt)
            acc = lhs
        return acc

    for head, monos in g.equations.items():
        hv = node_for(head)
        if not monos:
            sys.add_equation(hv, OP_PLUS, sys.ZERO, sys.ZERO)
            continue
        if len(monos) == 1:
            ops = [node_for(a) for a in monos[0]]
            if len(ops) == 1:
                sys.add_equation(hv, OP_TIMES, ops[0], sys.ONE)
            else:
                product_chain(ops, hv)
            continue
        summands = []
        for mono in monos:
            ops = [node_for(a) for a in mono]
            summands.append(ops[0] if len(ops) == 1 else product_chain(ops, None))
        acc = summands[0]
        for i, nxt in enumerate(summands[1:], start=2):
            last = i == len(summands)
            lhs = hv if last else sys.new_var(f"__t{next(fresh)}")
            sys.add_equation(lhs, OP_PLUS, acc, nxt)
            acc = lhs
    return sys


# ---------------------------------------------------------------------------
# Solutions
# ---------------------------------------------------------------------------


@dataclass
class Solution:
    """Values for every grounding IDB atom plus solver counters."""

    semiring: object
    atom_values: dict[int, object]  # grounding atom id -> value
    method: str
    stats: dict = field(default_factory=dict)

    def relation(self, g: Grounding, symbol: str) -> dict[tuple[str, ...], object]:
        """Non-zero tuples of one IDB symbol."""
        zero = self.semiring.zero
        out = {}
        for aid, value in self.atom_values.items():
            if g.symbols[aid] == symbol and value != zero:
                out[g.tuples[aid]] = value
        return out

    def named(self, g: Grounding) -> dict[str, object]:
        return {g.atom_name(a): v for a, v in self.atom_values.items()}


def _extract(sys: TwoCanonicalSystem, values, g: Grounding, method, stats) -> Solution:
    atom_values = {}
    for aid, kind in enumerate(g.kinds):
        if kind != KIND_VAR:
            continue
        nid = sys.node_of_atom.get(aid)
        atom_values[aid] = values[nid] if nid is not None else g.semiring.zero
    return Solution(g.semiring, atom_values, method, stats)


# ---------------------------------------------------------------------------
# Worklist solver (finite rank)
# ---------------------------------------------------------------------------


def solve_rank(
    sys: TwoCanonicalSystem,
    on_update: Optional[Callable[[int, object], None]] = None,
) -> tuple[list, dict]:
    """Worklist least fixpoint for finite-rank semirings.

    Every variable climbs the natural order at most r times, so each
    equation re-evaluates at most 2r times after the seeding pass.
    Returns (values, stats).
    """
    sr = sys.semiring
    if sr.finite_rank is None:
        raise SolverCapabilityError(
            f"semiring {sr.name} has no declared finite rank"
        )
    plus, times = sr.plus_fn, sr.times_fn
    apply = {OP_PLUS: plus, OP_TIMES: times}
    values = list(sys.init_values)
    visits = [0] * len(sys.equations)
    loop_ops = 0
    queue = []

    def assign(lhs: int, new) -> None:
        values[lhs] = new
        if on_update is not None:
            on_update(lhs, new)
        queue.extend(sys.uses.get(lhs, ()))

    # Seeding pass: evaluate every equation once.
    init_ops = len(sys.equations)
    for lhs, op, a, b in sys.equations:
        new = apply[op](values[a], values[b])
        if new != values[lhs]:
            assign(lhs, new)

    while queue:
        eq = queue.pop()
        lhs, op, a, b = sys.equations[eq]
        visits[eq] += 1
        loop_ops += 1
        new = apply[op](values[a], values[b])
        if new != values[lhs]:
            assign(lhs, new)

    stats = {
        "init_ops": init_ops,
        "loop_ops": loop_ops,
        "equation_visits": visits,
        "max_equation_visits": max(visits, default=0),
    }
    return values, stats


# ---------------------------------------------------------------------------
# Priority-queue solver (absorptive, total order)
# ---------------------------------------------------------------------------


def solve_absorptive(sys: TwoCanonicalSystem) -> tuple[list, dict]:
    """Dijkstra-style least fixpoint for absorptive, totally ordered semirings.

    Pops variables in descending natural order (ascending sort key) and
    freezes each on first pop; products can only stay below their factors,
    so a frozen value is final.  Stale heap entries are skipped lazily.
    Returns (values, stats).
    """
    sr = sys.semiring
    if not (sr.is_absorptive and sr.is_total_order and sr.key_fn is not None):
        raise SolverCapabilityError(
            f"semiring {sr.name} is not absorptive with a total order key"
        )
    plus, times, key = sr.plus_fn, sr.times_fn, sr.key_fn
    apply = {OP_PLUS: plus, OP_TIMES: times}
    values = list(sys.init_values)
    frozen = [c for c in sys.is_const]  # constants are born final
    heap: list[tuple[object, int]] = []

    def relax(eq_idx: int) -> None:
        lhs, op, a, b = sys.equations[eq_idx]
        if frozen[lhs]:
            return
        cand = apply[op](values[a], values[b])
        new = plus(values[lhs], cand)
        if new != values[lhs]:
            values[lhs] = new
            heapq.heappush(heap, (key(new), lhs))

    for eq_idx in range(len(sys.equations)):
        relax(eq_idx)
    # Variables never relaxed stay at the additive identity; freeze them via
    # the heap too so the pop discipline covers every variable exactly once.
    for nid, const in enumerate(sys.is_const):
        if not const:
            heapq.heappush(heap, (key(values[nid]), nid))

    pops: list[tuple[int, object]] = []
    stale = 0
    while heap:
        k, nid = heapq.heappop(heap)
        if frozen[nid] or k != key(values[nid]):
            stale += 1
            continue
        frozen[nid] = True
        pops.append((nid, values[nid]))
        for eq_idx in sys.uses.get(nid, ()):
            relax(eq_idx)

    stats = {"pops": pops, "popped": len(pops), "stale_skips": stale}
    return values, stats


# ---------------------------------------------------------------------------
# Kleene iteration
# ---------------------------------------------------------------------------


def kleene_system(
    sys: TwoCanonicalSystem, max_iters: Optional[int] = None
) -> tuple[list, dict]:
    """Synchronous Kleene iteration on the canonical system."""
    sr = sys.semiring
    apply = {OP_PLUS: sr.plus_fn, OP_TIMES: sr.times_fn}
    if max_iters is None:
        max_iters = 10 * sys.num_vars() + 10
    values = list(sys.init_values)
    for it in range(1, max_iters + 1):
        nxt = list(values)
        for lhs, op, a, b in sys.equations:
            nxt[lhs] = apply[op](values[a], values[b])
        if nxt == values:
            return values, {"iterations": it}
        values = nxt
    raise NonConvergence(max_iters)


def kleene_grounding(g: Grounding, max_iters: Optional[int] = None) -> Solution:
    """Synchronous Kleene iteration directly on the grounding (sums of
    monomials), independent of the 2-canonical rewriting."""
    sr = g.semiring
    plus, times, zero = sr.plus_fn, sr.times_fn, sr.zero
    heads = list(g.equations)
    if max_iters is None:
        max_iters = 10 * len(heads) + 10
    values = {h: zero for h in heads}
    for it in range(1, max_iters + 1):
        nxt = {}
        for head, monos in g.equations.items():
            acc = zero
            for mono in monos:
                prod = sr.one
                dead = False
                for aid in mono:
                    v = g.values[aid] if g.kinds[aid] == KIND_COEFF else values[aid]
                    prod = times(prod, v)
                    if prod == zero:
                        dead = True
                        break
                if not dead:
                    acc = plus(acc, prod)
            nxt[head] = acc
        if nxt == values:
            atom_values = dict(values)
            return Solution(sr, atom_values, "kleene", {"iterations": it})
        values = nxt
    raise NonConvergence(max_iters)


def _join_body(body: SumProdQuery, rels, callback) -> None:
    """Enumerate assignments by joining materialized relations atom by atom."""
    atoms = body.atoms

    def rec(i: int, asg: dict[int, str]):
        if i == len(atoms):
            callback(asg)
            return
        rel = rels.get(atoms[i].pred, {})
        args = atoms[i].args
        if all(v in asg for v in args):
            if tuple(asg[v] for v in args) in rel:
                rec(i + 1, asg)
            return
        for fact in sorted(rel):
            trail = []
            ok = True
            for v, c in zip(args, fact):
                if v in asg:
                    if asg[v] != c:
                        ok = False
                        break
                else:
                    asg[v] = c
                    trail.append(v)
            if ok:
                rec(i + 1, asg)
            for v in trail:
                del asg[v]

    rec(0, {})


def kleene_program(
    program: Program, instance: Instance, max_iters: Optional[int] = None
) -> dict[str, dict[tuple[str, ...], object]]:
    """Grounding-free oracle: synchronous rule application to a fixpoint.

    IDB atoms join against the previous iterate's non-zero tuples (absent
    tuples hold the additive identity and annihilate their monomial).
    Returns per-IDB maps of non-zero tuples.
    """
    sr = instance.semiring
    plus, times, zero = sr.plus_fn, sr.times_fn, sr.zero
    current: dict[str, dict[tuple[str, ...], object]] = {
        p: {} for p in program.idb_schema
    }
    if max_iters is None:
        domain_n = max(1, instance.n)
        bound = sum(domain_n ** a for a in program.idb_schema.values())
        max_iters = 10 * bound + 10

    for it in range(1, max_iters + 1):
        rels = dict(instance.relations)
        rels.update(current)
        nxt: dict[str, dict[tuple[str, ...], object]] = {
            p: {} for p in program.idb_schema
        }
        for rule in program.rules:
            out = nxt[rule.head_pred]
            for body in rule.bodies:

                def emit(asg, body=body, out=out):
                    prod = sr.one
                    for atom in body.atoms:
                        prod = times(prod, rels[atom.pred][tuple(asg[v] for v in atom.args)])
                    if prod == zero:
                        return
                    key = tuple(asg[v] for v in body.head_vars)
                    out[key] = plus(out[key], prod) if key in out else prod

                _join_body(body, rels, emit)
        for p in nxt:
            nxt[p] = {k: v for k, v in nxt[p].items() if v != zero}
        if nxt == current:
            return current
        current = nxt
    raise NonConvergence(max_iters)


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

METHODS = ("auto", "rank", "absorptive", "kleene")

# Above this rank the worklist solver's 2r-visits bound stops being a win
# and the priority-queue solver (when applicable) takes over.
RANK_THRESHOLD = 64


def pick_method(sr) -> str:
    if sr.finite_rank is not None and sr.finite_rank <= RANK_THRESHOLD:
        return "rank"
    if sr.is_absorptive and sr.is_total_order and sr.key_fn is not None:
        return "absorptive"
    return "kleene"


def applicable_methods(sr) -> list[str]:
    out = []
    if sr.finite_rank is not None:
        out.append("rank")
    if sr.is_absorptive and sr.is_total_order and sr.key_fn is not None:
        out.append("absorptive")
    out.append("kleene")
    return out


def solve_grounding(
    g: Grounding,
    method: str = "auto",
    max_iters: Optional[int] = None,
    on_update: Optional[Callable[[int, object], None]] = None,
) -> Solution:
    """Canonicalize and solve, picking a solver the semiring supports."""
    if method not in METHODS:
        raise ValueError(f"unknown solver method {method!r}")
    if method == "auto":
        method = pick_method(g.semiring)
    if method == "kleene":
        sol = kleene_grounding(g, max_iters=max_iters)
        sol.stats["grounding_size"] = g.size
        return sol
    sys = to_two_canonical(g)
    if method == "rank":
        values, stats = solve_rank(sys, on_update=on_update)
        stats["semiring_ops"] = stats["init_ops"] + stats["loop_ops"]
    else:
        values, stats = solve_absorptive(sys)
    stats["canonical_size"] = sys.size
    stats["grounding_size"] = g.size
    return _extract(sys, values, g, method, stats)
