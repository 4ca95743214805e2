import itertools
import random

import pytest

from gfcomplete.drmc import (brute_force_clique_cover, brute_force_drmc,
                             brute_force_min_distinct, clique_cover_tw, comb_hint_bags,
                             compatibility_graph, completion_from_cover, min_clique_cover_tw,
                             row_hint_bags, solve_drmc)
from gfcomplete.errors import ContractViolation, ResourceLimitError
from gfcomplete.graph import Graph
from gfcomplete.matrix import IncompleteMatrix, distinct_rows, is_consistent
from gfcomplete.params import comb_cover, covering_rows
from gfcomplete.status import Status
from gfcomplete.treedecomp import (JOIN, decomposition_from_ordering, nice_decomposition)

from _fixtures import COMPAT_EXAMPLE, X, random_graph, random_matrix

COMPAT_EXAMPLE_EDGES = {(0, 1), (0, 2), (1, 2), (2, 3), (3, 4)}


def is_clique_partition(G, parts):
    assert sorted(v for p in parts for v in p) == list(range(G.n))
    return all(G.is_clique(p) for p in parts)


def test_compat_example_graph():
    assert compatibility_graph(COMPAT_EXAMPLE).edge_set() == COMPAT_EXAMPLE_EDGES


def test_distinct_complete_rows_are_incompatible():
    M = IncompleteMatrix.from_rows([[0, 1], [1, 0], [1, 1]], 2)
    assert compatibility_graph(M).edges() == []


def test_all_missing_is_complete_graph():
    G = compatibility_graph(IncompleteMatrix.all_missing(4, 2, 3))
    assert len(G.edges()) == 6


def test_completion_from_cover_compat_example():
    Mc = completion_from_cover(COMPAT_EXAMPLE, [[0, 1, 2], [3, 4]])
    assert is_consistent(Mc, COMPAT_EXAMPLE)
    assert distinct_rows(Mc) == 2


def test_completion_from_cover_singletons_fill_zero():
    M = IncompleteMatrix.from_rows([[X, 1], [0, X]], 3)
    assert completion_from_cover(M, [[0], [1]]).rows == ((0, 1), (0, 0))


def test_completion_from_cover_rejects_non_clique():
    with pytest.raises(ContractViolation):
        completion_from_cover(COMPAT_EXAMPLE, [[0, 3], [1], [2], [4]])


def test_completion_from_cover_identity_on_complete():
    M = IncompleteMatrix.from_rows([[1, 0], [1, 0], [0, 1]], 2)
    assert completion_from_cover(M, [[0, 1], [2]]) == M


def test_brute_force_clique_cover_examples():
    K5 = Graph(5, list(itertools.combinations(range(5), 2)))
    assert len(brute_force_clique_cover(K5)) == 1
    assert len(brute_force_clique_cover(compatibility_graph(COMPAT_EXAMPLE))) == 2
    C5 = Graph(5, [(k, (k + 1) % 5) for k in range(5)])
    assert len(brute_force_clique_cover(C5)) == 3
    assert brute_force_clique_cover(C5, k=2) is None


def test_brute_force_clique_cover_limit():
    with pytest.raises(ResourceLimitError):
        brute_force_clique_cover(Graph(13))
    assert len(brute_force_clique_cover(Graph(13), limit=None)) == 13


def test_dp_small_examples():
    K3 = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert clique_cover_tw(K3, nice_decomposition(K3), 1) == [[0, 1, 2]]
    E = Graph(4)
    D = nice_decomposition(E)
    assert clique_cover_tw(E, D, 3) is None
    assert clique_cover_tw(E, D, 4) == [[0], [1], [2], [3]]


def test_dp_star_does_not_merge_leaves():
    # the centre can join at most one leaf; leaves are pairwise non-adjacent
    G = Graph(4, [(1, 2), (1, 3), (0, 1)])
    parts = min_clique_cover_tw(G, nice_decomposition(G))
    assert len(parts) == 3 and is_clique_partition(G, parts)


def test_dp_rejects_invalid_decomposition():
    G = Graph(3, [(0, 1), (1, 2), (0, 2)])
    D = nice_decomposition(Graph(3))
    with pytest.raises(ContractViolation):
        clique_cover_tw(G, D, 3)


@pytest.mark.parametrize("prob", [0.3, 0.5, 0.7])
def test_dp_join_heavy_decompositions(prob):
    rng = random.Random(int(prob * 100))
    joins = 0
    for _ in range(40):
        n = rng.randint(1, 10)
        G = random_graph(rng, n, prob)
        opt = len(brute_force_clique_cover(G))
        order = list(range(n))
        rng.shuffle(order)
        D = decomposition_from_ordering(G, order)
        parts = min_clique_cover_tw(G, D)
        assert len(parts) == opt
        assert is_clique_partition(G, parts)
        joins += sum(nd.kind == JOIN for nd in D.nodes)
    assert joins > 0


def _distinct_row_matrices(rng, count):
    out = []
    while len(out) < count:
        p = rng.choice([2, 3])
        m, n = rng.randint(2, 7), rng.randint(2, 4)
        M = random_matrix(rng, p, m, n, rng.randint(0, min(5, m * n)))
        if len(set(M.rows)) == m:
            out.append(M)
    return out


def test_hint_width_ceilings():
    for M in _distinct_row_matrices(random.Random(8), 150):
        G = compatibility_graph(M)
        R = covering_rows(M).rows
        assert nice_decomposition(G, row_hint_bags(M)).width <= len(R)
        w = comb_cover(M)
        D = nice_decomposition(G, comb_hint_bags(M))
        assert D.width <= len(w.rows) + (M.p + 1) ** len(w.cols) - 1


def test_hint_bags_valid_with_duplicate_rows():
    rng = random.Random(10)
    for _ in range(100):
        p = rng.choice([2, 3])
        M = random_matrix(rng, p, 6, 2, rng.randint(0, 4))
        G = compatibility_graph(M)
        nice_decomposition(G, row_hint_bags(M)).validate(G)
        nice_decomposition(G, comb_hint_bags(M)).validate(G)


def test_compat_example_decisions():
    assert solve_drmc(COMPAT_EXAMPLE, 1).status is Status.UNSAT
    res = solve_drmc(COMPAT_EXAMPLE, 2)
    assert res.status is Status.SAT
    assert distinct_rows(res.matrix) == 2


def test_complete_matrix_drmc():
    M = IncompleteMatrix.from_rows([[1, 0], [1, 0], [0, 1]], 2)
    assert solve_drmc(M, 1).status is Status.UNSAT
    assert solve_drmc(M, 2).matrix == M


def test_brute_force_drmc_trivial_shapes():
    assert brute_force_drmc(IncompleteMatrix.all_missing(1, 1, 5), 1).matrix.rows == ((0,),)
    assert brute_force_drmc(IncompleteMatrix.all_missing(3, 2, 2), 1).status is Status.SAT
    M = IncompleteMatrix.from_rows([[0, 1], [1, 0]], 2)
    assert brute_force_drmc(M, 1).status is Status.UNSAT
    with pytest.raises(ResourceLimitError):
        brute_force_drmc(IncompleteMatrix.all_missing(5, 5, 2), 1, budget=1000)


@pytest.mark.parametrize("method", ["row", "comb", "heuristic", "auto"])
def test_methods_agree_with_oracle(method):
    rng = random.Random(hash(method) % 1000)
    for _ in range(60):
        p = rng.choice([2, 3])
        m, n = rng.randint(2, 6), rng.randint(1, 4)
        M = random_matrix(rng, p, m, n, rng.randint(0, min(5, m * n)))
        best, _ = brute_force_min_distinct(M)
        for t in range(1, M.m + 1):
            res = solve_drmc(M, t, method)
            assert res.sat == (best <= t)
            if res.sat:
                assert is_consistent(res.matrix, M) and distinct_rows(res.matrix) <= t


def test_duplicate_rows_counted_once():
    M = IncompleteMatrix.from_rows([[1, 0], [1, 0], [1, 0]], 2)
    assert solve_drmc(M, 1).status is Status.SAT
