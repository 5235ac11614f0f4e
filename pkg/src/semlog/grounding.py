"""Grounding a program + instance into a system of polynomial equations.

Three strategies: naive enumeration over the active domain, the join-tree
recursion for acyclic bodies (optionally rooted free-connex), and the
specialized construction for linear bodies when every IDB has arity <= 2.
All strategies write into the same `Grounding` sink so rules can mix.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .decomposition import (
    CyclicVerdict,
    JoinTree,
    build_hypergraph,
    choose_root,
    free_connex_root,
    gyo_join_tree,
    top_map,
)
from .frontend import Atom, Instance, Program, Rule, SumProdQuery

KIND_COEFF = 0
KIND_VAR = 1


class GroundingError(Exception):
    pass


class CapExceeded(GroundingError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"grounding size {size} exceeds cap {cap}")
        self.size = size
        self.cap = cap


class CyclicRuleError(GroundingError):
    pass


class StrategyNotApplicable(GroundingError):
    pass


class Grounding:
    """Interned ground atoms plus equations: IDB variable -> sum of monomials.

    A monomial is a tuple of atom ids in rule-body order.  `size` counts
    every coefficient/variable occurrence plus one per left-hand side.
    """

    def __init__(self, semiring, cap: Optional[int] = None):
        self.semiring = semiring
        self.cap = cap
        self._index: dict[tuple[str, tuple[str, ...]], int] = {}
        self.symbols: list[str] = []
        self.tuples: list[tuple[str, ...]] = []
        self.kinds: list[int] = []
        self.values: list[object] = []
        self.equations: dict[int, list[tuple[int, ...]]] = {}
        self.tracked_size = 0

    # -- interning ---------------------------------------------------------

    def _intern(self, symbol: str, args: tuple[str, ...], kind: int, value=None) -> int:
        key = (symbol, args)
        aid = self._index.get(key)
        if aid is None:
            aid = len(self.symbols)
            self._index[key] = aid
            self.symbols.append(symbol)
            self.tuples.append(args)
            self.kinds.append(kind)
            self.values.append(value)
        elif self.kinds[aid] != kind:
            raise GroundingError(f"atom {symbol}{args} interned with both kinds")
        return aid

    def intern_var(self, symbol: str, args: tuple[str, ...]) -> int:
        return self._intern(symbol, args, KIND_VAR)

    def intern_coeff(self, symbol: str, args: tuple[str, ...], value) -> int:
        return self._intern(symbol, args, KIND_COEFF, value)

    def atom_name(self, aid: int) -> str:
        prefix = "x" if self.kinds[aid] == KIND_VAR else "e"
        parts = (self.symbols[aid],) + self.tuples[aid]
        return prefix + "_" + "_".join(parts)

    # -- equation building -------------------------------------------------

    def ensure_equation(self, head: int) -> None:
        if head not in self.equations:
            self.equations[head] = []
            self._grow(1)

    def add_monomial(self, head: int, mono: Iterable[int]) -> None:
        mono = tuple(mono)
        if head in self.equations:
            self.equations[head].append(mono)
            self._grow(len(mono))
        else:
            self.equations[head] = [mono]
            self._grow(1 + len(mono))

    def _grow(self, amount: int) -> None:
        self.tracked_size += amount
        if self.cap is not None and self.tracked_size > self.cap:
            raise CapExceeded(self.tracked_size, self.cap)

    def finalize(self) -> "Grounding":
        """Give every referenced IDB variable an equation (empty RHS = zero)."""
        for aid, kind in enumerate(self.kinds):
            if kind == KIND_VAR:
                self.ensure_equation(aid)
        return self

    # -- measures ----------------------------------------------------------

    @property
    def size(self) -> int:
        return sum(
            1 + sum(len(m) for m in monos) for monos in self.equations.values()
        )

    def variable_ids(self) -> list[int]:
        return [a for a, k in enumerate(self.kinds) if k == KIND_VAR]

    def atoms_of(self, symbol: str) -> dict[tuple[str, ...], int]:
        return {
            self.tuples[a]: a
            for a, s in enumerate(self.symbols)
            if s == symbol and self.kinds[a] == KIND_VAR
        }

    def to_text(self) -> str:
        lines = []
        for head in sorted(self.equations, key=self.atom_name):
            monos = self.equations[head]
            if monos:
                rhs = " + ".join(
                    " * ".join(self.atom_name(a) for a in mono) for mono in monos
                )
            else:
                rhs = "0"
            lines.append(f"{self.atom_name(head)} = {rhs} ;")
        return "\n".join(lines) + ("\n" if lines else "")

    def to_record(self) -> dict:
        return {
            "semiring": self.semiring.name,
            "size": self.size,
            "equations": {
                self.atom_name(head): [
                    [self.atom_name(a) for a in mono] for mono in monos
                ]
                for head, monos in sorted(
                    self.equations.items(), key=lambda kv: self.atom_name(kv[0])
                )
            },
        }


def active_domain(instance: Instance) -> tuple[str, ...]:
    """Sorted distinct constants across all stored EDB facts."""
    return tuple(
        sorted({c for rel in instance.relations.values() for t in rel for c in t})
    )


# ---------------------------------------------------------------------------
# Naive grounding
# ---------------------------------------------------------------------------


def _enumerate_body(body: SumProdQuery, instance: Instance, domain, callback):
    """Backtracking enumeration of variable assignments satisfying the body.

    EDB atoms iterate stored facts (absent tuples annihilate the product);
    IDB atoms range over the active domain.  `callback` sees the complete
    assignment dict.
    """
    atoms = body.atoms
    rels = instance.relations

    def rec(i: int, asg: dict[int, str]):
        if i == len(atoms):
            callback(asg)
            return
        atom = atoms[i]
        if not atom.is_idb:
            rel = rels.get(atom.pred, {})
            if all(v in asg for v in atom.args):
                if tuple(asg[v] for v in atom.args) in rel:
                    rec(i + 1, asg)
                return
            for fact in sorted(rel):
                trail = []
                ok = True
                for v, c in zip(atom.args, fact):
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
        else:
            unbound = sorted({v for v in atom.args if v not in asg})
            for combo in itertools.product(domain, repeat=len(unbound)):
                for v, c in zip(unbound, combo):
                    asg[v] = c
                rec(i + 1, asg)
                for v in unbound:
                    del asg[v]

    rec(0, {})


def _ground_body_naive(
    rule: Rule, body: SumProdQuery, instance: Instance, g: Grounding
) -> None:
    domain = active_domain(instance)
    rels = instance.relations

    def emit(asg: dict[int, str]):
        mono = []
        for atom in body.atoms:
            t = tuple(asg[v] for v in atom.args)
            if atom.is_idb:
                mono.append(g.intern_var(atom.pred, t))
            else:
                mono.append(g.intern_coeff(atom.pred, t, rels[atom.pred][t]))
        head = g.intern_var(rule.head_pred, tuple(asg[v] for v in body.head_vars))
        g.add_monomial(head, mono)

    _enumerate_body(body, instance, domain, emit)


def ground_naive(
    program: Program, instance: Instance, cap: Optional[int] = None
) -> Grounding:
    """Replace variables by all active-domain constants, dropping monomials
    annihilated by absent EDB facts; every IDB ground instance gets an
    equation even when its RHS is empty."""
    g = Grounding(instance.semiring, cap=cap)
    domain = active_domain(instance)
    for sym, arity in program.idb_schema.items():
        for t in itertools.product(domain, repeat=arity):
            g.ensure_equation(g.intern_var(sym, t))
    for rule in program.rules:
        for body in rule.bodies:
            _ground_body_naive(rule, body, instance, g)
    return g.finalize()


# ---------------------------------------------------------------------------
# Acyclic grounding (join-tree recursion)
# ---------------------------------------------------------------------------


@dataclass
class _GNode:
    """Join-tree node as seen by the grounder: bag + the atom to enumerate."""

    bag: frozenset[int]
    pred: str
    args: tuple[int, ...]
    is_idb: bool
    relation: Optional[dict] = None  # EDB facts; None for IDB atoms


def _gnodes_from_tree(tree: JoinTree, instance: Instance) -> dict[int, _GNode]:
    nodes = {}
    for edge in tree.nodes:
        atom = edge.atom
        rel = None if atom.is_idb else instance.relations.get(atom.pred, {})
        nodes[edge.id] = _GNode(edge.vertices, atom.pred, atom.args, atom.is_idb, rel)
    return nodes


def _node_assignments(node: _GNode, domain):
    """Yield (assignment over the bag, EDB value or None)."""
    if node.is_idb:
        bagvars = sorted(node.bag)
        for combo in itertools.product(domain, repeat=len(bagvars)):
            yield dict(zip(bagvars, combo)), None
    else:
        for fact in sorted(node.relation or {}):
            asg: dict[int, str] = {}
            ok = True
            for v, c in zip(node.args, fact):
                if v in asg:
                    if asg[v] != c:
                        ok = False
                        break
                else:
                    asg[v] = c
            if ok:
                yield asg, node.relation[fact]


def _subtree_head_vars(
    root: int, children: dict[int, list[int]], nodes: dict[int, _GNode], head_set
) -> dict[int, frozenset[int]]:
    h_sub: dict[int, frozenset[int]] = {}

    def walk(u: int) -> frozenset[int]:
        acc = nodes[u].bag & head_set
        for c in children[u]:
            acc |= walk(c)
        h_sub[u] = acc
        return acc

    walk(root)
    return h_sub


def _ground_tree(
    root: int,
    nodes: dict[int, _GNode],
    children: dict[int, list[int]],
    head_pred: str,
    head_args: tuple[int, ...],
    head_set: frozenset[int],
    domain,
    g: Grounding,
    fresh_prefix: str,
) -> None:
    """Refactor/Ground/Recurse along a rooted join tree.

    Each tree edge (s, t) introduces the fresh IDB named
    ``<fresh_prefix>_e<s>_<t>`` over (bag(s) & bag(t)) | H_t.
    """
    h_sub = _subtree_head_vars(root, children, nodes, head_set)

    def ground_node(s: int, pred: str, args: tuple[int, ...]) -> None:
        node = nodes[s]
        e_st = {
            t: tuple(sorted((node.bag & nodes[t].bag) | h_sub[t]))
            for t in children[s]
        }
        fresh = {t: f"{fresh_prefix}_e{s}_{t}" for t in children[s]}
        span = set(node.bag)
        for e in e_st.values():
            span |= set(e)
        extra = tuple(sorted(span - node.bag))

        for base, value in _node_assignments(node, domain):
            for combo in itertools.product(domain, repeat=len(extra)):
                asg = base if not extra else {**base, **dict(zip(extra, combo))}
                head = g.intern_var(pred, tuple(asg[v] for v in args))
                if node.is_idb:
                    own = g.intern_var(node.pred, tuple(asg[v] for v in node.args))
                else:
                    own = g.intern_coeff(
                        node.pred, tuple(asg[v] for v in node.args), value
                    )
                mono = [own] + [
                    g.intern_var(fresh[t], tuple(asg[v] for v in e_st[t]))
                    for t in children[s]
                ]
                g.add_monomial(head, mono)

        for t in children[s]:
            ground_node(t, fresh[t], e_st[t])

    ground_node(root, head_pred, head_args)


def ground_acyclic_rule(
    body: SumProdQuery,
    tree: JoinTree,
    root: int,
    instance: Instance,
    g: Grounding,
    head_pred: str,
    rule_tag: str,
) -> None:
    """Ground one acyclic sum-prod body along a rooted join tree."""
    _, children, _ = tree.rooted_at(root)
    nodes = _gnodes_from_tree(tree, instance)
    _ground_tree(
        root,
        nodes,
        children,
        head_pred,
        body.head_vars,
        body.head_set,
        active_domain(instance),
        g,
        f"__u_r{rule_tag}",
    )


# ---------------------------------------------------------------------------
# Linear, arity <= 2 construction
# ---------------------------------------------------------------------------


def _eval_edb_tree(
    root: int,
    nodes: dict[int, _GNode],
    children: dict[int, list[int]],
    out_vars: tuple[int, ...],
    semiring,
) -> dict[tuple[str, ...], object]:
    """Directly evaluate an EDB-only subtree, aggregated onto `out_vars`.

    Bottom-up join of each node's facts with its children's messages; the
    sum over eliminated variables distributes through the products.
    """
    plus, times, zero = semiring.plus_fn, semiring.times_fn, semiring.zero

    def eval_node(u: int) -> dict[tuple[str, ...], object]:
        node = nodes[u]
        if node.is_idb:
            raise StrategyNotApplicable("IDB atom inside an EDB-only subtree")
        bagvars = tuple(sorted(node.bag))
        rel: dict[tuple[str, ...], object] = {}
        for asg, value in _node_assignments(node, ()):
            rel[tuple(asg[v] for v in bagvars)] = value
        for c in children[u]:
            crel = eval_node(c)
            cvars = tuple(sorted(nodes[c].bag))
            shared = tuple(sorted(node.bag & nodes[c].bag))
            idx = [cvars.index(v) for v in shared]
            msg: dict[tuple[str, ...], object] = {}
            for key, v in crel.items():
                pkey = tuple(key[i] for i in idx)
                msg[pkey] = plus(msg[pkey], v) if pkey in msg else v
            sidx = [bagvars.index(v) for v in shared]
            rel = {
                key: times(v, msg[tuple(key[i] for i in sidx)])
                for key, v in rel.items()
                if tuple(key[i] for i in sidx) in msg
            }
        return rel

    bagvars = tuple(sorted(nodes[root].bag))
    idx = [bagvars.index(v) for v in out_vars]
    out: dict[tuple[str, ...], object] = {}
    for key, v in eval_node(root).items():
        pkey = tuple(key[i] for i in idx)
        out[pkey] = plus(out[pkey], v) if pkey in out else v
    return {k: v for k, v in out.items() if v != zero}


def ground_linear_acyclic2(
    program: Program,
    body: SumProdQuery,
    instance: Instance,
    g: Grounding,
    head_pred: str,
    rule_tag: str,
) -> None:
    """Grounding for a linear acyclic body when all IDB arities are <= 2.

    Rooted at a node holding the first head variable.  When the body IDB is
    a leaf this is exactly the join-tree recursion; otherwise the subtree
    below the IDB is reduced to a chain of join-project rules (or folded
    into a fresh IDB when no head variable is trapped below it), keeping
    the grounding within O(m * n).
    """
    if len(body.idb_atoms()) > 1:
        raise StrategyNotApplicable("body is not linear")
    if program.arity_bound > 2:
        raise StrategyNotApplicable("an IDB has arity > 2")
    tree = gyo_join_tree(build_hypergraph(body))
    if isinstance(tree, CyclicVerdict):
        raise StrategyNotApplicable("body is cyclic")
    domain = active_domain(instance)
    nodes = _gnodes_from_tree(tree, instance)

    if not body.idb_atoms():
        root = free_connex_root(tree, body.head_set)
        if root is None:
            root = choose_root(tree, body.head_set)
        ground_acyclic_rule(body, tree, root, instance, g, head_pred, rule_tag)
        return

    t_node = next(nid for nid, nd in nodes.items() if nd.is_idb)
    if body.head_set:
        candidates = [n.id for n in tree.nodes if n.vertices & body.head_set]
    else:
        candidates = [n.id for n in tree.nodes]

    # Prefer any rooting that turns the IDB node into a leaf: that is the
    # plain join-tree recursion, unconditionally correct.
    rest = [n.id for n in tree.nodes if n.id not in candidates]
    for r in candidates + rest:
        if r == t_node:
            continue
        _, children, _ = tree.rooted_at(r)
        if not children[t_node]:
            ground_acyclic_rule(body, tree, r, instance, g, head_pred, rule_tag)
            return
    candidates = [r for r in candidates if r != t_node]
    if not candidates:
        raise StrategyNotApplicable("head variables occur only in the IDB atom")
    root = candidates[0]
    parent, children, _ = tree.rooted_at(root)

    h_sub = _subtree_head_vars(root, children, nodes, body.head_set)
    t_bag = nodes[t_node].bag
    trapped = sorted(h_sub[t_node] - t_bag)

    if not trapped:
        _ground_via_substitution(
            tree, nodes, children, t_node, root, body, domain, g, head_pred, rule_tag
        )
        return
    if len(trapped) > 1:
        raise StrategyNotApplicable("more than one head variable below the IDB")
    y = trapped[0]

    join_vars = t_bag & nodes[parent[t_node]].bag
    if len(join_vars) != 1:
        raise StrategyNotApplicable("IDB shares more than one variable upward")
    (z,) = join_vars

    _ground_via_chain(
        tree, nodes, children, t_node, root, y, z, body, domain, g, head_pred, rule_tag
    )


def _collect_subtree(children: dict[int, list[int]], root: int) -> list[int]:
    out = [root]
    for c in children[root]:
        out.extend(_collect_subtree(children, c))
    return out


def _ground_via_substitution(
    tree, nodes, children, t_node, root, body, domain, g, head_pred, rule_tag
) -> None:
    """Fold the subtree under the IDB into a fresh IDB, then reground with
    that fresh IDB as a leaf."""
    sub_vars = tuple(sorted(nodes[t_node].bag))
    sub_pred = f"__u_r{rule_tag}_sub{t_node}"
    _ground_tree(
        t_node,
        nodes,
        children,
        sub_pred,
        sub_vars,
        frozenset(sub_vars),
        domain,
        g,
        f"__u_r{rule_tag}_s{t_node}",
    )
    pruned = dict(nodes)
    pruned_children = {k: list(v) for k, v in children.items()}
    for u in _collect_subtree(children, t_node):
        pruned_children[u] = []
    pruned[t_node] = _GNode(
        frozenset(sub_vars), sub_pred, sub_vars, True, None
    )
    _ground_tree(
        root,
        pruned,
        pruned_children,
        head_pred,
        body.head_vars,
        body.head_set,
        domain,
        g,
        f"__u_r{rule_tag}",
    )


def _ground_via_chain(
    tree, nodes, children, t_node, root, y, z, body, domain, g, head_pred, rule_tag
) -> None:
    """Reduce the IDB-to-TOP(y) path to join-project rules of O(m*n) each."""
    semiring = g.semiring

    # Locate t_y: the node closest to t_node (within its subtree) holding y.
    sub_ids = _collect_subtree(children, t_node)
    depth = {t_node: 0}
    for u in sub_ids:
        for c in children[u]:
            depth[c] = depth[u] + 1
    holders = [u for u in sub_ids if y in nodes[u].bag]
    t_y = min(holders, key=lambda u: (depth[u], u))
    path = [t_y]
    par = {c: u for u in sub_ids for c in children[u]}
    while path[-1] != t_node:
        path.append(par[path[-1]])
    path.reverse()  # t_node .. t_y

    # Materialize side branches and path relations as local EDBs.
    side_rels: list[tuple[int, tuple[int, ...], dict]] = []
    for c in children[t_node]:
        if c != path[1]:
            conn = tuple(sorted(nodes[t_node].bag & nodes[c].bag))
            side_rels.append(
                (c, conn, _eval_edb_tree(c, nodes, children, conn, semiring))
            )
    path_rels: list[tuple[int, tuple[int, ...], dict, str]] = []
    for i, q in enumerate(path[1:], start=1):
        qvars = tuple(sorted(nodes[q].bag))
        if q == t_y:
            rel = _eval_edb_tree(q, nodes, children, qvars, semiring)
        else:
            sub_nodes = dict(nodes)
            sub_children = {k: list(v) for k, v in children.items()}
            sub_children[q] = [c for c in children[q] if c != path[i + 1]]
            rel = _eval_edb_tree(q, sub_nodes, sub_children, qvars, semiring)
        path_rels.append((q, qvars, rel, f"__e_r{rule_tag}_p{q}"))

    # Chain of join-project rules along the path.
    idb = nodes[t_node]
    prev_pred, prev_args = idb.pred, idb.args
    prev_keep = tuple(sorted(idb.bag))
    later_bags = [nodes[q].bag for q in path[1:]]
    for i, (q, qvars, rel, rel_name) in enumerate(path_rels, start=1):
        later = frozenset().union(*later_bags[i:]) if i < len(later_bags) else frozenset()
        keep = tuple(sorted({z} | (nodes[q].bag & (later | {y}))))
        link_pred = f"__u_r{rule_tag}_chain{i}"
        extra = tuple(sorted(set(prev_keep) - nodes[q].bag))
        for fact in sorted(rel):
            base = dict(zip(qvars, fact))
            for combo in itertools.product(domain, repeat=len(extra)):
                asg = {**base, **dict(zip(extra, combo))}
                mono = [g.intern_var(prev_pred, tuple(asg[v] for v in prev_args))]
                ok = True
                if i == 1:
                    for sid, conn, srel in side_rels:
                        key = tuple(asg[v] for v in conn)
                        if key not in srel:
                            ok = False
                            break
                        mono.append(
                            g.intern_coeff(f"__e_r{rule_tag}_side{sid}", key, srel[key])
                        )
                if not ok:
                    continue
                mono.append(g.intern_coeff(rel_name, fact, rel[fact]))
                head = g.intern_var(link_pred, tuple(asg[v] for v in keep))
                g.add_monomial(head, mono)
        prev_pred, prev_args, prev_keep = link_pred, keep, keep

    # Reground the outer tree with the chain result as a leaf IDB.
    pruned = dict(nodes)
    pruned_children = {k: list(v) for k, v in children.items()}
    for u in _collect_subtree(children, t_node):
        pruned_children[u] = []
    pruned[t_node] = _GNode(frozenset(prev_keep), prev_pred, prev_keep, True, None)
    _ground_tree(
        root,
        pruned,
        pruned_children,
        head_pred,
        body.head_vars,
        body.head_set,
        domain,
        g,
        f"__u_r{rule_tag}",
    )


# ---------------------------------------------------------------------------
# Program-level driver
# ---------------------------------------------------------------------------

STRATEGIES = ("naive", "acyclic", "auto")


@dataclass(frozen=True)
class BodyStrategy:
    rule: str
    body: int
    strategy: str
    root: Optional[int] = None


def ground_program(
    program: Program,
    instance: Instance,
    strategy: str = "auto",
    cap: Optional[int] = None,
    prune: bool = False,
) -> tuple[Grounding, list[BodyStrategy]]:
    """Ground every rule body, picking a per-body strategy and reporting it."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    report: list[BodyStrategy] = []
    if strategy == "naive":
        g = ground_naive(program, instance, cap=cap)
        report = [
            BodyStrategy(rule.head_pred, bi, "naive")
            for rule in program.rules
            for bi in range(len(rule.bodies))
        ]
        return (prune_unreachable(g) if prune else g), report

    g = Grounding(instance.semiring, cap=cap)
    for ri, rule in enumerate(program.rules):
        for bi, body in enumerate(rule.bodies):
            tag = f"{ri}b{bi}"
            tree = gyo_join_tree(build_hypergraph(body))
            if isinstance(tree, CyclicVerdict):
                if strategy == "acyclic":
                    raise CyclicRuleError(
                        f"rule {rule.head_pred} body {bi} is cyclic"
                    )
                _ground_body_naive(rule, body, instance, g)
                report.append(BodyStrategy(rule.head_pred, bi, "naive"))
                continue
            fc = free_connex_root(tree, body.head_set)
            if fc is not None:
                ground_acyclic_rule(body, tree, fc, instance, g, rule.head_pred, tag)
                report.append(
                    BodyStrategy(rule.head_pred, bi, "acyclic-free-connex", fc)
                )
                continue
            if strategy == "auto":
                try:
                    ground_linear_acyclic2(
                        program, body, instance, g, rule.head_pred, tag
                    )
                    report.append(BodyStrategy(rule.head_pred, bi, "linear-arity2"))
                    continue
                except StrategyNotApplicable:
                    pass
            root = choose_root(tree, body.head_set)
            ground_acyclic_rule(body, tree, root, instance, g, rule.head_pred, tag)
            report.append(BodyStrategy(rule.head_pred, bi, "acyclic", root))
    g.finalize()
    return (prune_unreachable(g) if prune else g), report


def prune_unreachable(g: Grounding) -> Grounding:
    """Drop IDB equations that can never leave the additive identity.

    A variable is supported once some monomial has all its variable
    operands supported; unsupported variables stay at zero in the least
    fixpoint, so removing their equations (and the monomials mentioning
    them) preserves it.
    """
    supported: set[int] = set()
    changed = True
    while changed:
        changed = False
        for head, monos in g.equations.items():
            if head in supported:
                continue
            for mono in monos:
                if all(
                    g.kinds[a] == KIND_COEFF or a in supported for a in mono
                ):
                    supported.add(head)
                    changed = True
                    break

    pruned = Grounding(g.semiring)
    pruned._index = g._index
    pruned.symbols = g.symbols
    pruned.tuples = g.tuples
    pruned.kinds = g.kinds
    pruned.values = g.values
    for head, monos in g.equations.items():
        if head not in supported:
            continue
        pruned.equations[head] = [
            m
            for m in monos
            if all(g.kinds[a] == KIND_COEFF or a in supported for a in m)
        ]
    pruned.tracked_size = pruned.size
    return pruned
