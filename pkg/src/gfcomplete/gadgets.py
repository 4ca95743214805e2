"""Instance generators for the hardness constructions, plus small oracles.

* 3-SAT-2 formulas (three distinct literals per clause, every literal in
  exactly two clauses) with a DIMACS reader/writer and a DPLL decider;
* the partition-into-triangles graph built from such a formula;
* the seven-column DRMC matrix whose compatibility graph is that graph;
* the GF(2) pattern matrix built from a graph for the coloring reduction.

Literals use DIMACS convention: ``+i`` / ``-i`` for variable i (1-based).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .errors import ContractViolation, ParseError, ResourceLimitError
from .gf import next_prime_above
from .graph import Graph
from .matrix import MISSING, IncompleteMatrix

RANDOM_3SAT2_RETRIES = 10_000


@dataclass(frozen=True)
class Cnf3Sat2:
    n: int
    clauses: tuple

    @property
    def m(self) -> int:
        return len(self.clauses)

    def validate(self) -> None:
        if self.n < 1:
            raise ContractViolation("formula needs at least one variable")
        counts = {}
        for j, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise ContractViolation(f"clause {j + 1} has {len(clause)} literals, expected 3")
            if len(set(clause)) != 3:
                raise ContractViolation(f"clause {j + 1} repeats a literal")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n:
                    raise ContractViolation(f"literal {lit} out of range 1..{self.n}")
                counts[lit] = counts.get(lit, 0) + 1
        for i in range(1, self.n + 1):
            for lit in (i, -i):
                if counts.get(lit, 0) != 2:
                    raise ContractViolation(
                        f"literal {lit} occurs {counts.get(lit, 0)} times, expected 2")

    def evaluate(self, assignment) -> bool:
        """``assignment[i]`` is the truth value of variable i (1-based)."""
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)


def random_3sat2(n: int, seed: int) -> Cnf3Sat2:
    """Random legal formula: shuffle the 4n occurrence slots into triples."""
    if n < 3 or n % 3:
        raise ContractViolation(f"3-SAT-2 needs n divisible by 3 (n >= 3), got {n}")
    rng = random.Random(seed)
    slots = [lit for i in range(1, n + 1) for lit in (i, i, -i, -i)]
    for _ in range(RANDOM_3SAT2_RETRIES):
        rng.shuffle(slots)
        clauses = tuple(tuple(slots[k:k + 3]) for k in range(0, len(slots), 3))
        if all(len(set(c)) == 3 for c in clauses):
            phi = Cnf3Sat2(n, clauses)
            phi.validate()
            return phi
    raise ResourceLimitError(f"no legal 3-SAT-2 assembly for n={n} after {RANDOM_3SAT2_RETRIES} shuffles")


def parse_dimacs(text: str) -> Cnf3Sat2:
    n = m = None
    clauses = []
    pending = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            toks = line.split()
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("header must be 'p cnf n m'", lineno, 1)
            try:
                n, m = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError("non-integer in header", lineno, 1) from None
            continue
        if n is None:
            raise ParseError("clause before 'p cnf' header", lineno, 1)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(lit)
    if n is None:
        raise ParseError("missing 'p cnf' header")
    if pending:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) != m:
        raise ParseError(f"header declares {m} clauses, found {len(clauses)}")
    phi = Cnf3Sat2(n, tuple(clauses))
    try:
        phi.validate()
    except ContractViolation as exc:
        raise ParseError(f"not a 3-SAT-2 formula: {exc}") from None
    return phi


def format_dimacs(phi: Cnf3Sat2) -> str:
    lines = [f"p cnf {phi.n} {phi.m}"]
    lines += [" ".join(str(l) for l in c) + " 0" for c in phi.clauses]
    return "\n".join(lines) + "\n"


def dpll(phi: Cnf3Sat2) -> Optional[dict]:
    """Satisfying assignment ``{var: bool}`` or None (unit propagation + branching)."""

    def simplify(clauses, lit):
        out = []
        for c in clauses:
            if lit in c:
                continue
            c2 = tuple(l for l in c if l != -lit)
            if not c2:
                return None
            out.append(c2)
        return out

    def solve(clauses, assign):
        while True:
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            assign = {**assign, abs(unit): unit > 0}
            clauses = simplify(clauses, unit)
            if clauses is None:
                return None
        if not clauses:
            return assign
        lit = clauses[0][0]
        for choice in (lit, -lit):
            reduced = simplify(clauses, choice)
            if reduced is not None:
                got = solve(reduced, {**assign, abs(choice): choice > 0})
                if got is not None:
                    return got
        return None

    got = solve([tuple(c) for c in phi.clauses], {})
    if got is None:
        return None
    full = {i: got.get(i, False) for i in range(1, phi.n + 1)}
    assert phi.evaluate(full)
    return full


# -- partition into triangles -----------------------------------------------------

@dataclass
class PitGraph:
    """Graph plus vertex labels and the occurrence map f.

    Labels: ``("x", i)``, ``("xo", i, o)``, ``("nxo", i, o)``,
    ``("l", j, r, o)``, ``("h", j, o)``, ``("g", k, o)`` with 1-based indices.
    ``occurrence[(j, r)]`` is the label of f(j, r).
    """

    graph: Graph
    labels: list
    occurrence: dict

    def index(self) -> dict:
        return {lab: k for k, lab in enumerate(self.labels)}


def _vertex_labels(phi: Cnf3Sat2) -> list:
    labels = []
    for i in range(1, phi.n + 1):
        labels += [("x", i), ("xo", i, 1), ("xo", i, 2), ("nxo", i, 1), ("nxo", i, 2)]
    for j in range(1, phi.m + 1):
        for r in range(1, 4):
            labels += [("l", j, r, 1), ("l", j, r, 2)]
        labels += [("h", j, 1), ("h", j, 2)]
    for k in range(1, 2 * phi.n - phi.m + 1):
        labels += [("g", k, 1), ("g", k, 2)]
    return labels


def occurrence_map(phi: Cnf3Sat2) -> dict:
    """f(j, r): first unused superscript of the literal, in clause order."""
    used = {}
    f = {}
    for j, clause in enumerate(phi.clauses, start=1):
        for r, lit in enumerate(clause, start=1):
            o = used.get(lit, 0) + 1
            used[lit] = o
            f[(j, r)] = ("xo" if lit > 0 else "nxo", abs(lit), o)
    return f


def gen_pit_from_3sat2(phi: Cnf3Sat2) -> PitGraph:
    phi.validate()
    labels = _vertex_labels(phi)
    idx = {lab: k for k, lab in enumerate(labels)}
    f = occurrence_map(phi)
    g = Graph(len(labels))

    def edge(a, b):
        g.add_edge(idx[a], idx[b])

    for i in range(1, phi.n + 1):
        for kind in ("xo", "nxo"):
            edge(("x", i), (kind, i, 1))
            edge(("x", i), (kind, i, 2))
            edge((kind, i, 1), (kind, i, 2))
    hs = [("h", j, o) for j in range(1, phi.m + 1) for o in (1, 2)]
    for j in range(1, phi.m + 1):
        for r in range(1, 4):
            l1, l2 = ("l", j, r, 1), ("l", j, r, 2)
            edge(l1, l2)
            edge(l1, f[(j, r)])
            edge(l2, f[(j, r)])
            for o in (1, 2):
                edge(("h", j, o), l1)
                edge(("h", j, o), l2)
    for k in range(1, 2 * phi.n - phi.m + 1):
        edge(("g", k, 1), ("g", k, 2))
        for h in hs:
            edge(("g", k, 1), h)
            edge(("g", k, 2), h)
    return PitGraph(g, labels, f)


def seven_column_modulus(phi: Cnf3Sat2) -> int:
    return next_prime_above(max(phi.n, phi.m, 2 * phi.n - phi.m, 6))


def _row_vector(label, phi: Cnf3Sat2, f: dict) -> tuple:
    X = MISSING
    kind = label[0]
    if kind == "x":
        return (label[1], X, 0, 0, 0, 0, 0)
    if kind in ("xo", "nxo"):
        i, o = label[1], label[2]
        sign = 1 if kind == "xo" else 0
        return (i, sign, X, X, 0, 0, 0) if o == 1 else (i, sign, X, 0, X, 0, 0)
    if kind == "l":
        j, r = label[1], label[2]
        fkind, i, o = f[(j, r)]
        sign = 1 if fkind == "xo" else 0
        return (i, sign, j, 1, X, X, 0) if o == 1 else (i, sign, j, X, 1, X, 0)
    if kind == "h":
        return (X, X, label[1], 1, 1, label[2], X)
    if kind == "g":
        return (X, X, X, X, X, X, label[1])
    raise ContractViolation(f"unknown vertex label {label!r}")


def gen_seven_column_drmc(phi: Cnf3Sat2):
    """Seven-column DRMC instance ``(M, t)`` whose compatibility graph is the PIT graph.

    Row k of M belongs to vertex ``gen_pit_from_3sat2(phi).labels[k]`` and
    t = |V| / 3.
    """
    phi.validate()
    labels = _vertex_labels(phi)
    f = occurrence_map(phi)
    p = seven_column_modulus(phi)
    M = IncompleteMatrix.from_rows([_row_vector(lab, phi, f) for lab in labels], p)
    return M, len(labels) // 3


def gen_2drmc_from_coloring(G: Graph, r: int):
    """GF(2) pattern: ones on the diagonal, 0 on edges, missing on non-edges."""
    rows = [[1 if i == j else (0 if G.has_edge(i, j) else MISSING) for j in range(G.n)]
            for i in range(G.n)]
    return IncompleteMatrix.from_rows(rows, 2), r


def find_triangle_partition(G: Graph) -> Optional[list]:
    """Exhaustive search for a partition of V(G) into triangles."""
    if G.n % 3:
        return None
    covered = [False] * G.n
    chosen = []

    def rec():
        v = next((u for u in range(G.n) if not covered[u]), None)
        if v is None:
            return True
        covered[v] = True
        nb = sorted(u for u in G.neighbors(v) if not covered[u])
        for a in range(len(nb)):
            for b in range(a + 1, len(nb)):
                x, y = nb[a], nb[b]
                if G.has_edge(x, y):
                    covered[x] = covered[y] = True
                    chosen.append((v, x, y))
                    if rec():
                        return True
                    chosen.pop()
                    covered[x] = covered[y] = False
        covered[v] = False
        return False

    return [list(t) for t in chosen] if rec() else None
