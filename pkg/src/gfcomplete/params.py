"""The structural parameters row, col and comb with witness cover sets.

Indices are 0-based throughout; the CLI converts to 1-based for display.
"""

from __future__ import annotations

from dataclasses import dataclass

from .matrix import IncompleteMatrix


@dataclass(frozen=True)
class CoverWitness:
    rows: frozenset
    cols: frozenset

    @property
    def value(self) -> int:
        return len(self.rows) + len(self.cols)

    def covers(self, M: IncompleteMatrix) -> bool:
        return all(i in self.rows or j in self.cols for i, j in M.missing_cells())


def covering_rows(M: IncompleteMatrix) -> CoverWitness:
    return CoverWitness(frozenset(i for i, _ in M.missing_cells()), frozenset())


def covering_cols(M: IncompleteMatrix) -> CoverWitness:
    return CoverWitness(frozenset(), frozenset(j for _, j in M.missing_cells()))


def _max_matching(adj: dict) -> dict:
    """Augmenting-path maximum matching; returns right -> left."""
    match_right = {}

    def augment(u, seen):
        for w in adj[u]:
            if w in seen:
                continue
            seen.add(w)
            if w not in match_right or augment(match_right[w], seen):
                match_right[w] = u
                return True
        return False

    for u in sorted(adj):
        augment(u, set())
    return match_right


def comb_cover(M: IncompleteMatrix) -> CoverWitness:
    """Minimum set of rows plus columns covering every missing cell.

    Builds the bipartite row/column graph of the missing cells, takes a
    maximum matching, and reads off a minimum vertex cover with Koenig's
    construction started from the unmatched rows. On ties this keeps rows
    in preference to columns.
    """
    adj = {}
    for i, j in M.missing_cells():
        adj.setdefault(i, []).append(j)
    for i in adj:
        adj[i].sort()
    match_right = _max_matching(adj)
    match_left = {u: w for w, u in match_right.items()}

    # alternating reachability from unmatched left vertices
    reached_left = set()
    reached_right = set()
    stack = [u for u in sorted(adj) if u not in match_left]
    reached_left.update(stack)
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in reached_right or match_left.get(u) == w:
                continue
            reached_right.add(w)
            v = match_right.get(w)
            if v is not None and v not in reached_left:
                reached_left.add(v)
                stack.append(v)

    rows = frozenset(u for u in adj if u not in reached_left)
    cols = frozenset(reached_right)
    witness = CoverWitness(rows, cols)
    assert witness.value == len(match_right)
    return witness
