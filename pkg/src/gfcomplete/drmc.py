"""Distinct-row-bounded completion through clique covers of the compatibility graph.

Two rows are compatible when they agree wherever both are determined; a set of
rows can be completed to a single common row exactly when it is a clique of
the compatibility graph. Minimising distinct rows is therefore minimum clique
cover, solved here by dynamic programming over a nice tree decomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .equations import DEFAULT_ENUMERATION_BUDGET
from .errors import ContractViolation, ResourceLimitError
from .graph import Graph
from .matrix import MISSING, IncompleteMatrix, distinct_rows, is_consistent
from .params import comb_cover, covering_rows
from .rmc import iter_completions
from .status import Status
from .treedecomp import (FORGET, INTRODUCE, JOIN, LEAF, NiceTreeDecomposition,
                         nice_decomposition)

CompatibilityGraph = Graph
BRUTE_FORCE_CLIQUE_LIMIT = 12


def rows_compatible(r1, r2) -> bool:
    return all(a is MISSING or b is MISSING or a == b for a, b in zip(r1, r2))


def compatibility_graph(M: IncompleteMatrix) -> Graph:
    rows = M.rows
    edges = [(u, v) for u in range(M.m) for v in range(u + 1, M.m)
             if rows_compatible(rows[u], rows[v])]
    return Graph(M.m, edges)


def completion_from_cover(M: IncompleteMatrix, partition) -> IncompleteMatrix:
    """Fill each part's missing cells with the part's determined value (or 0)."""
    seen = sorted(v for part in partition for v in part)
    if seen != list(range(M.m)):
        raise ContractViolation("partition must cover every row exactly once")
    out = [list(r) for r in M.rows]
    for part in partition:
        for j in range(M.n):
            vals = {M.rows[i][j] for i in part} - {MISSING}
            if len(vals) > 1:
                raise ContractViolation(
                    f"rows {sorted(part)} disagree in column {j}; the part is not a clique")
            fill = vals.pop() if vals else 0
            for i in part:
                out[i][j] = fill
    return M.with_rows(out)


# -- clique cover on a tree decomposition ---------------------------------------

@dataclass
class _Record:
    count: int
    back: object = None  # child key (introduce/forget) or key pair (join)


def _key(parts) -> tuple:
    """Canonical record key: sorted ``(vertices, closed)`` pairs, empty parts dropped.

    A part is closed once one of its vertices has been forgotten. No vertex
    introduced later can be adjacent to a forgotten one, so closed parts
    never grow again.
    """
    return tuple(sorted((tuple(sorted(vs)), closed) for vs, closed in parts if vs))


def clique_cover_table(G: Graph, D: NiceTreeDecomposition) -> list:
    """Per-node map from bag partitions (with closed flags) to minimal records."""
    tables = []
    for nd in D.nodes:
        table: dict = {}

        def offer(key, count, back=None):
            cur = table.get(key)
            if cur is None or count < cur.count:
                table[key] = _Record(count, back)

        if nd.kind == LEAF:
            offer((((nd.vertex,), False),), 1)
        elif nd.kind == INTRODUCE:
            v = nd.vertex
            for key, rec in tables[nd.children[0]].items():
                for k, (vs, closed) in enumerate(key):
                    if not closed and all(G.has_edge(v, u) for u in vs):
                        parts = list(key)
                        parts[k] = (vs + (v,), False)
                        offer(_key(parts), rec.count, key)
                offer(_key(key + (((v,), False),)), rec.count + 1, key)
        elif nd.kind == FORGET:
            v = nd.vertex
            for key, rec in tables[nd.children[0]].items():
                parts = [(tuple(u for u in vs if u != v), closed or v in vs) for vs, closed in key]
                offer(_key(parts), rec.count, key)
        elif nd.kind == JOIN:
            left, right = (tables[c] for c in nd.children)
            by_shape: dict = {}
            for key, rec in right.items():
                by_shape.setdefault(tuple(vs for vs, _ in key), []).append((key, rec))
            for lkey, lrec in left.items():
                for rkey, rrec in by_shape.get(tuple(vs for vs, _ in lkey), ()):
                    # forgotten vertices on different sides are never adjacent
                    if any(a and b for (_, a), (_, b) in zip(lkey, rkey)):
                        continue
                    merged = tuple((vs, a or b) for (vs, a), (_, b) in zip(lkey, rkey))
                    offer(merged, lrec.count + rrec.count - len(lkey), (lkey, rkey))
        tables.append(table)
    return tables


def _reconstruct(D: NiceTreeDecomposition, tables: list) -> list:
    labels = {}
    counter = [0]

    def fresh():
        counter[0] += 1
        return counter[0] - 1

    # (node, record key, {bag part vertices -> clique label})
    stack = [(D.root, (), {})]
    while stack:
        idx, key, part_label = stack.pop()
        nd = D.nodes[idx]
        rec = tables[idx][key]
        if nd.kind == LEAF:
            labels[nd.vertex] = part_label[(nd.vertex,)]
        elif nd.kind == INTRODUCE:
            v = nd.vertex
            mapping = {}
            for vs, _ in key:
                if v in vs:
                    labels[v] = part_label[vs]
                rest = tuple(u for u in vs if u != v)
                if rest:
                    mapping[rest] = part_label[vs]
            stack.append((nd.children[0], rec.back, mapping))
        elif nd.kind == FORGET:
            v = nd.vertex
            mapping = {}
            for vs, _ in rec.back:
                rest = tuple(u for u in vs if u != v)
                mapping[vs] = part_label[rest] if rest else fresh()
                if v in vs:
                    labels[v] = mapping[vs]
            stack.append((nd.children[0], rec.back, mapping))
        elif nd.kind == JOIN:
            for c, child_key in zip(nd.children, rec.back):
                stack.append((c, child_key, dict(part_label)))
    groups = {}
    for v, lab in labels.items():
        groups.setdefault(lab, []).append(v)
    return sorted(sorted(g) for g in groups.values())


def min_clique_cover_tw(G: Graph, D: NiceTreeDecomposition) -> list:
    """Minimum partition of V(G) into cliques via the decomposition DP."""
    D.validate(G)
    tables = clique_cover_table(G, D)
    if () not in tables[D.root]:
        raise AssertionError("root table lacks the empty partition")
    partition = _reconstruct(D, tables)
    assert len(partition) == tables[D.root][()].count
    return partition


def clique_cover_tw(G: Graph, D: NiceTreeDecomposition, k: int) -> Optional[list]:
    """A partition of V(G) into at most ``k`` cliques, or None."""
    partition = min_clique_cover_tw(G, D)
    return partition if len(partition) <= k else None


def clique_number(G: Graph) -> int:
    """Size of a largest clique (Bron-Kerbosch with pivoting)."""
    best = 0 if G.n == 0 else 1

    def expand(size, cand, excl):
        nonlocal best
        if not cand and not excl:
            best = max(best, size)
            return
        if size + len(cand) <= best:
            return
        pivot = max(cand | excl, key=lambda u: len(cand & G.adj[u]))
        for v in sorted(cand - G.adj[pivot]):
            expand(size + 1, cand & G.adj[v], excl & G.adj[v])
            cand = cand - {v}
            excl = excl | {v}

    expand(0, set(G.vertices()), set())
    return best


def brute_force_clique_cover(G: Graph, limit: Optional[int] = BRUTE_FORCE_CLIQUE_LIMIT,
                             k: Optional[int] = None) -> Optional[list]:
    """Exact clique partition by exhaustive search.

    Every partition into cliques is reached exactly once by letting the
    lowest unassigned vertex pick the clique it belongs to. Branches are cut
    when the blocks used plus ceil(remaining / clique number) cannot beat the
    incumbent. Without ``k`` the minimum partition is returned; with ``k`` the
    first partition into at most ``k`` cliques, or None.
    """
    if limit is not None and G.n > limit:
        raise ResourceLimitError(f"{G.n} vertices exceed the brute-force limit of {limit}")
    if G.n == 0:
        return []
    omega = clique_number(G)
    bound = [G.n + 1 if k is None else k + 1]
    best = [None]
    assigned = [False] * G.n
    blocks: list = []
    remaining = [G.n]

    def cliques_from(v):
        cand = sorted(u for u in G.adj[v] if u > v and not assigned[u])
        out = []

        def grow(clique, pool):
            out.append(clique)
            for idx, u in enumerate(pool):
                grow(clique + [u], [w for w in pool[idx + 1:] if w in G.adj[u]])

        grow([v], cand)
        out.sort(key=len, reverse=True)
        return out

    def rec(start):
        if len(blocks) + -(-remaining[0] // omega) >= bound[0]:
            return
        v = next((u for u in range(start, G.n) if not assigned[u]), None)
        if v is None:
            best[0] = [list(b) for b in blocks]
            bound[0] = len(blocks)
            return
        for clique in cliques_from(v):
            for u in clique:
                assigned[u] = True
            remaining[0] -= len(clique)
            blocks.append(clique)
            rec(v + 1)
            blocks.pop()
            remaining[0] += len(clique)
            for u in clique:
                assigned[u] = False
            if k is not None and best[0] is not None:
                return

    rec(0)
    if best[0] is None:
        return None
    return sorted(sorted(b) for b in best[0])


# -- structured decompositions ---------------------------------------------------

def row_hint_bags(M: IncompleteMatrix) -> list:
    """Path bags R ∪ P, R the rows holding a missing cell, P a class of equal rows.

    Complete rows are pairwise incompatible unless identical, so grouping the
    identical ones keeps every edge inside a bag.
    """
    R = covering_rows(M).rows
    classes: dict = {}
    for i in range(M.m):
        if i not in R:
            classes.setdefault(M.rows[i], []).append(i)
    if not classes:
        return [frozenset(R)]
    return [frozenset(R) | frozenset(c) for c in sorted(classes.values())]


def comb_hint_bags(M: IncompleteMatrix) -> list:
    """Path bags R ∪ P with (R, C) a minimum mixed cover and P a class of
    non-cover rows that agree on every column outside C."""
    w = comb_cover(M)
    keep = [j for j in range(M.n) if j not in w.cols]
    classes: dict = {}
    for i in range(M.m):
        if i not in w.rows:
            classes.setdefault(tuple(M.rows[i][j] for j in keep), []).append(i)
    if not classes:
        return [frozenset(w.rows)]
    return [frozenset(w.rows) | frozenset(c) for c in sorted(classes.values())]


@dataclass
class DrmcResult:
    status: Status
    matrix: Optional[IncompleteMatrix] = None
    partition: Optional[list] = None
    distinct: Optional[int] = None
    method: str = ""
    width: Optional[int] = None
    extra: dict = field(default_factory=dict)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


def check_drmc_solution(M: IncompleteMatrix, result: DrmcResult, t: int) -> None:
    if result.status is not Status.SAT:
        return
    Mc = result.matrix
    if Mc is None or not is_consistent(Mc, M):
        raise AssertionError("DRMC solver returned an inconsistent completion")
    dr = distinct_rows(Mc)
    if dr > t:
        raise AssertionError(f"DRMC solver returned {dr} distinct rows > t={t}")
    if result.partition is not None:
        for part in result.partition:
            if len({Mc.rows[i] for i in part}) != 1:
                raise AssertionError("rows of one part differ after completion")
    result.distinct = dr


def choose_decomposition(M: IncompleteMatrix, G: Graph, method: str = "auto"):
    """Return ``(method, decomposition)``; ``auto`` takes the narrowest candidate."""
    builders = {
        "row": lambda: nice_decomposition(G, row_hint_bags(M)),
        "comb": lambda: nice_decomposition(G, comb_hint_bags(M)),
        "heuristic": lambda: nice_decomposition(G),
    }
    if method != "auto":
        if method not in builders:
            raise ContractViolation(f"unknown decomposition method {method!r}")
        return method, builders[method]()
    best = None
    for name in ("row", "comb", "heuristic"):
        D = builders[name]()
        if best is None or D.width < best[1].width:
            best = (name, D)
    return best


def solve_drmc(M: IncompleteMatrix, t: int, method: str = "auto") -> DrmcResult:
    """Decide whether ``M`` completes to at most ``t`` distinct rows."""
    G = compatibility_graph(M)
    name, D = choose_decomposition(M, G, method)
    partition = min_clique_cover_tw(G, D)
    if len(partition) > t:
        return DrmcResult(Status.UNSAT, method=name, width=D.width,
                          extra={"min_distinct": len(partition)})
    result = DrmcResult(Status.SAT, completion_from_cover(M, partition), partition,
                        method=name, width=D.width)
    check_drmc_solution(M, result, t)
    return result


def brute_force_min_distinct(M: IncompleteMatrix, budget: int = DEFAULT_ENUMERATION_BUDGET):
    size = M.p ** M.num_missing
    if size > budget:
        raise ResourceLimitError(
            f"{M.p}^{M.num_missing} = {size} completions exceed the budget of {budget}")
    best, best_rows = None, None
    for rows in iter_completions(M):
        d = len(set(rows))
        if best is None or d < best:
            best, best_rows = d, rows
            if d == 1:
                break
    return best, IncompleteMatrix(M.p, best_rows)


def brute_force_drmc(M: IncompleteMatrix, t: int,
                     budget: int = DEFAULT_ENUMERATION_BUDGET) -> DrmcResult:
    best, Mc = brute_force_min_distinct(M, budget)
    if best <= t:
        result = DrmcResult(Status.SAT, Mc, method="brute-force")
        check_drmc_solution(M, result, t)
        return result
    return DrmcResult(Status.UNSAT, method="brute-force", extra={"min_distinct": best})
