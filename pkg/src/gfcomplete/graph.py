"""Minimal undirected simple graph on vertices 0..n-1 plus the edge-list format."""

from __future__ import annotations

from typing import Iterable

from .errors import ContractViolation, ParseError


class Graph:
    def __init__(self, n: int, edges: Iterable = ()):
        self.n = n
        self.adj = [set() for _ in range(n)]
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ContractViolation(f"self-loop at {u}")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise ContractViolation(f"edge {u}-{v} outside 0..{self.n - 1}")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> set:
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list:
        return sorted((u, v) for u in range(self.n) for v in self.adj[u] if u < v)

    def edge_set(self) -> set:
        return set(self.edges())

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def is_clique(self, vs) -> bool:
        vs = list(vs)
        return all(vs[b] in self.adj[vs[a]] for a in range(len(vs)) for b in range(a + 1, len(vs)))

    def complement(self) -> "Graph":
        return Graph(self.n, [(u, v) for u in range(self.n) for v in range(u + 1, self.n)
                              if v not in self.adj[u]])

    def has_k4(self) -> bool:
        """True iff some vertex neighbourhood contains a triangle."""
        for v in range(self.n):
            nb = sorted(self.adj[v])
            for a in range(len(nb)):
                for b in range(a + 1, len(nb)):
                    if nb[b] not in self.adj[nb[a]]:
                        continue
                    if self.adj[nb[a]] & self.adj[nb[b]] & set(nb[b + 1:]):
                        return True
        return False

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edges()})"


def parse_edge_list(text: str) -> Graph:
    """``n`` on the first non-comment line, then ``u v`` pairs, 1-based."""
    g = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            vals = [int(x) for x in toks]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if g is None:
            if len(vals) != 1 or vals[0] < 1:
                raise ParseError("first line must be the vertex count", lineno)
            g = Graph(vals[0])
            continue
        if len(vals) != 2:
            raise ParseError("edge lines must be 'u v'", lineno)
        u, v = vals
        if not (1 <= u <= g.n and 1 <= v <= g.n) or u == v:
            raise ParseError(f"bad edge {u} {v}", lineno)
        g.add_edge(u - 1, v - 1)
    if g is None:
        raise ParseError("empty graph file")
    return g


def format_edge_list(g: Graph) -> str:
    lines = [str(g.n)] + [f"{u + 1} {v + 1}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"
