"""Tree decompositions, the nice normal form, and a min-fill heuristic.

A :class:`NiceTreeDecomposition` stores its nodes in a list in which every
child precedes its parent, so a single forward pass is a valid bottom-up DP
order. The root is the last node and has an empty bag.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ContractViolation
from .graph import Graph

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


@dataclass
class NiceNode:
    kind: str
    bag: frozenset
    children: tuple = ()
    vertex: Optional[int] = None  # the introduced / forgotten / leaf vertex


@dataclass
class NiceTreeDecomposition:
    nodes: list = field(default_factory=list)

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    def _add(self, kind, bag, children=(), vertex=None) -> int:
        self.nodes.append(NiceNode(kind, frozenset(bag), tuple(children), vertex))
        return len(self.nodes) - 1

    def validate(self, G: Graph) -> None:
        """Raise ContractViolation unless this is a nice decomposition of ``G``."""
        if not self.nodes:
            raise ContractViolation("empty decomposition")
        parent = {}
        for idx, nd in enumerate(self.nodes):
            for c in nd.children:
                if not 0 <= c < idx:
                    raise ContractViolation(f"node {idx} has child {c} that does not precede it")
                if c in parent:
                    raise ContractViolation(f"node {c} has two parents")
                parent[c] = idx
            kids = [self.nodes[c].bag for c in nd.children]
            if nd.kind == LEAF:
                ok = not kids and len(nd.bag) == 1 and nd.vertex in nd.bag
            elif nd.kind == INTRODUCE:
                ok = (len(kids) == 1 and nd.vertex in nd.bag and nd.vertex not in kids[0]
                      and nd.bag == kids[0] | {nd.vertex})
            elif nd.kind == FORGET:
                ok = (len(kids) == 1 and nd.vertex in kids[0]
                      and nd.bag == kids[0] - {nd.vertex})
            elif nd.kind == JOIN:
                ok = len(kids) == 2 and kids[0] == nd.bag and kids[1] == nd.bag
            else:
                ok = False
            if not ok:
                raise ContractViolation(f"node {idx} violates the {nd.kind} node shape")
        if len(parent) != len(self.nodes) - 1:
            raise ContractViolation("decomposition is not a single rooted tree")
        if self.nodes[self.root].bag:
            raise ContractViolation("root bag must be empty")
        where = {v: [] for v in G.vertices()}
        for idx, nd in enumerate(self.nodes):
            for v in nd.bag:
                if v not in where:
                    raise ContractViolation(f"bag contains unknown vertex {v}")
                where[v].append(idx)
        for v, occ in where.items():
            if not occ:
                raise ContractViolation(f"vertex {v} is in no bag")
            # connected iff exactly one occurrence has its parent outside the set
            occ_set = set(occ)
            tops = [i for i in occ if parent.get(i) not in occ_set]
            if len(tops) != 1:
                raise ContractViolation(f"bags containing vertex {v} are not connected")
        for u, v in G.edges():
            if not any(u in nd.bag and v in nd.bag for nd in self.nodes):
                raise ContractViolation(f"edge {u}-{v} is not inside any bag")


def _make_nice(bags: Sequence[frozenset], tree_adj: dict, root: int) -> NiceTreeDecomposition:
    """Normalize an arbitrary tree decomposition into nice form."""
    D = NiceTreeDecomposition()

    def retarget(node: int, have: frozenset, want: frozenset) -> int:
        for v in sorted(have - want):
            have = have - {v}
            node = D._add(FORGET, have, (node,), v)
        for v in sorted(want - have):
            have = have | {v}
            node = D._add(INTRODUCE, have, (node,), v)
        return node

    def build(t: int, parent: Optional[int]) -> int:
        bag = bags[t]
        kids = [c for c in sorted(tree_adj[t]) if c != parent]
        if not kids:
            if not bag:
                raise ContractViolation("empty leaf bag")
            first = min(bag)
            node = D._add(LEAF, {first}, (), first)
            return retarget(node, frozenset({first}), bag)
        subs = [retarget(build(c, t), bags[c], bag) for c in kids]
        node = subs[0]
        for other in subs[1:]:
            node = D._add(JOIN, bag, (node, other))
        return node

    # drop empty bags so that every leaf has a vertex
    top = build(root, None)
    retarget(top, bags[root], frozenset())
    return D


def path_decomposition(bags: Sequence) -> NiceTreeDecomposition:
    """Nice form of the path whose consecutive nodes carry ``bags``."""
    bags = [frozenset(b) for b in bags if b]
    if not bags:
        raise ContractViolation("path decomposition needs a non-empty bag")
    adj = {k: set() for k in range(len(bags))}
    for k in range(len(bags) - 1):
        adj[k].add(k + 1)
        adj[k + 1].add(k)
    return _make_nice(bags, adj, len(bags) - 1)


def min_fill_ordering(G: Graph) -> list:
    adj = {v: set(G.neighbors(v)) for v in G.vertices()}
    order = []
    while adj:
        def fill(v):
            nb = list(adj[v])
            return sum(1 for a in range(len(nb)) for b in range(a + 1, len(nb))
                       if nb[b] not in adj[nb[a]])
        v = min(adj, key=lambda u: (fill(u), len(adj[u]), u))
        nb = adj.pop(v)
        for a in nb:
            adj[a].discard(v)
            adj[a] |= nb - {a}
        order.append(v)
    return order


def decomposition_from_ordering(G: Graph, order: Sequence[int]) -> NiceTreeDecomposition:
    """Tree decomposition induced by eliminating vertices in ``order``."""
    pos = {v: k for k, v in enumerate(order)}
    adj = {v: set(G.neighbors(v)) for v in G.vertices()}
    bags = []
    later_nbrs = []
    for v in order:
        nb = {u for u in adj[v] if pos[u] > pos[v]}
        for a in nb:
            adj[a] |= nb - {a}
        bags.append(frozenset(nb | {v}))
        later_nbrs.append(nb)
    tree = {k: set() for k in range(len(order))}
    roots = []
    for k, nb in enumerate(later_nbrs):
        if nb:
            parent = pos[min(nb, key=pos.__getitem__)]
            tree[k].add(parent)
            tree[parent].add(k)
        else:
            roots.append(k)
    # one tree per connected component; chain the component roots together
    for a, b in zip(roots, roots[1:]):
        tree[a].add(b)
        tree[b].add(a)
    return _make_nice(bags, tree, roots[-1])


def nice_decomposition(G: Graph, hint: Optional[Sequence] = None) -> NiceTreeDecomposition:
    """Nice decomposition from path ``hint`` bags if given, else min-fill."""
    if hint is not None:
        D = path_decomposition(hint)
    else:
        D = decomposition_from_ordering(G, min_fill_ordering(G))
    D.validate(G)
    return D
