"""Shared instance generators and small exhaustive oracles for the tests."""

import itertools
import random

from gfcomplete.equations import EquationSystem, Polynomial
from gfcomplete.graph import Graph
from gfcomplete.matrix import MISSING, IncompleteMatrix

X = MISSING

COVER_EXAMPLE = IncompleteMatrix.from_rows([
    [1, 1, 1, 0, X, 1],
    [0, 0, 1, 0, X, 1],
    [0, X, X, 0, X, X],
    [1, 1, 0, 1, 0, 1],
], 2)

COMPAT_EXAMPLE = IncompleteMatrix.from_rows([
    [1, X, 0, X, X, 1],
    [1, 0, 0, 1, X, X],
    [1, 0, X, 1, 0, 1],
    [1, 0, 1, 1, 0, X],
    [1, 0, 1, 1, 0, 0],
], 2)


def random_matrix(rng, p, m, n, missing):
    """Random incomplete matrix of a random target rank with ``missing`` holes.

    Drawing a low-rank base first keeps both SAT and UNSAT outcomes common.
    """
    r = rng.randint(1, min(m, n))
    A = [[rng.randrange(p) for _ in range(r)] for _ in range(m)]
    B = [[rng.randrange(p) for _ in range(n)] for _ in range(r)]
    rows = [[sum(A[i][k] * B[k][j] for k in range(r)) % p for j in range(n)] for i in range(m)]
    if rng.random() < 0.3:
        i, j = rng.randrange(m), rng.randrange(n)
        rows[i][j] = (rows[i][j] + 1) % p
    for c in rng.sample(range(m * n), missing):
        rows[c // n][c % n] = X
    return IncompleteMatrix.from_rows(rows, p)


def random_graph(rng, n, prob):
    g = Graph(n)
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < prob:
            g.add_edge(u, v)
    return g


def vertex_separation_bags(G, order):
    """Path decomposition along ``order``: bag i holds order[i] plus every
    earlier vertex that still has a neighbour at position >= i."""
    pos = {v: k for k, v in enumerate(order)}
    last = {v: max([pos[v]] + [pos[u] for u in G.neighbors(v)]) for v in order}
    return [frozenset([v] + [u for u in order[:k] if last[u] >= k]) for k, v in enumerate(order)]


def exhaustive_min_cover(M):
    """Smallest number of rows plus columns covering all missing cells."""
    cells = M.missing_cells()
    lines = sorted({("r", i) for i, _ in cells} | {("c", j) for _, j in cells})
    for size in range(len(lines) + 1):
        for pick in itertools.combinations(lines, size):
            s = set(pick)
            if all(("r", i) in s or ("c", j) in s for i, j in cells):
                return size
    raise AssertionError("unreachable")


def random_system(rng, p, nvars, neqs, quad_prob=0.4):
    vs = [("x", 0, k) for k in range(nvars)]
    eqs = []
    for _ in range(neqs):
        terms = [(rng.randrange(p), ())]
        for v in vs:
            if rng.random() < 0.6:
                terms.append((rng.randrange(1, p), (v,)))
        if rng.random() < quad_prob:
            u, w = rng.choice(vs), rng.choice(vs)
            terms.append((rng.randrange(1, p), (u, w)))
        eqs.append(Polynomial.from_terms(p, terms))
    return EquationSystem.of(p, eqs), vs


def planted_system(rng, p, nvars, neqs):
    """Quadratic system built to vanish at a hidden random point."""
    vs = [("x", 0, k) for k in range(nvars)]
    point = {v: rng.randrange(p) for v in vs}
    eqs = []
    for _ in range(neqs):
        terms = []
        for u, w in itertools.combinations_with_replacement(vs, 2):
            if rng.random() < 0.15:
                terms.append((rng.randrange(1, p), (u, w)))
        for v in vs:
            if rng.random() < 0.4:
                terms.append((rng.randrange(1, p), (v,)))
        poly = Polynomial.from_terms(p, terms)
        terms.append((-poly.evaluate(point), ()))
        eqs.append(Polynomial.from_terms(p, terms))
    return EquationSystem.of(p, eqs), point


def solutions(S, variables):
    """All assignments of ``variables`` satisfying ``S``."""
    out = []
    for values in itertools.product(range(S.p), repeat=len(variables)):
        a = dict(zip(variables, values))
        if S.is_satisfied_by(a):
            out.append(a)
    return out


def cubic_graphs(n):
    """Every labelled 3-regular graph on vertices 0..n-1."""
    deg = [0] * n
    edges = []

    def rec(v):
        if v == n:
            yield Graph(n, list(edges))
            return
        need = 3 - deg[v]
        if need < 0:
            return
        later = [u for u in range(v + 1, n) if deg[u] < 3]
        for pick in itertools.combinations(later, need):
            for u in pick:
                deg[u] += 1
                edges.append((v, u))
            deg[v] += need
            yield from rec(v + 1)
            deg[v] -= need
            for u in pick:
                deg[u] -= 1
                edges.pop()

    yield from rec(0)
