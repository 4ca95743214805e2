"""Polynomial equation systems of degree at most two over GF(p).

A variable is a hashable tuple ``(kind, i, j)``; the solvers use

* ``("x", z, y)`` for the missing cell at row z, column y,
* ``("a", d, i)`` for the coefficient of row i when expressing row d,
* ``("b", h, j)`` for the coefficient of column j when expressing column h.

A monomial is a sorted tuple of at most two variables (the empty tuple is the
constant term). Each equation is a :class:`Polynomial` read as ``poly == 0``.
Variable elimination records ``(x, expression)`` pairs so that any solution of
the reduced system can be lifted back to the original one.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

from .errors import ContractViolation
from .status import Status

Assignment = Dict[tuple, int]

DEFAULT_ENUMERATION_BUDGET = 2**24
DEFAULT_RANDOM_TRIALS = 20_000


def x_var(z: int, y: int) -> tuple:
    return ("x", z, y)


def a_var(d: int, i: int) -> tuple:
    return ("a", d, i)


def b_var(h: int, j: int) -> tuple:
    return ("b", h, j)


def _mono(*vs) -> tuple:
    return tuple(sorted(vs))


def _mono_key(mono: tuple):
    return (len(mono), mono)


@dataclass(frozen=True)
class Term:
    coefficient: int
    vars: tuple


class Polynomial:
    """Fully simplified polynomial: one coefficient per monomial, none zero."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: Optional[Dict[tuple, int]] = None):
        self.p = p
        clean = {}
        if terms:
            for mono, c in terms.items():
                c %= p
                if c:
                    if len(mono) > 2:
                        raise ContractViolation(f"monomial {mono} has degree > 2")
                    clean[tuple(sorted(mono))] = c
        self.terms = clean

    @classmethod
    def from_terms(cls, p: int, terms: Iterable) -> "Polynomial":
        """Sum ``(coefficient, vars)`` pairs, merging like monomials."""
        acc: Dict[tuple, int] = {}
        for c, vs in terms:
            mono = _mono(*vs)
            acc[mono] = (acc.get(mono, 0) + c) % p
        return cls(p, acc)

    @classmethod
    def _raw(cls, p: int, terms: dict) -> "Polynomial":
        obj = cls.__new__(cls)
        obj.p = p
        obj.terms = terms
        return obj

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    @property
    def is_linear(self) -> bool:
        return all(len(m) <= 1 for m in self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant(self) -> int:
        return self.terms.get((), 0)

    def variables(self) -> set:
        return {v for mono in self.terms for v in mono}

    def coefficient(self, *vs) -> int:
        return self.terms.get(_mono(*vs), 0)

    def sorted_terms(self) -> list:
        return [Term(self.terms[m], m) for m in sorted(self.terms, key=_mono_key)]

    def evaluate(self, assignment: Assignment) -> int:
        p = self.p
        total = 0
        for mono, c in self.terms.items():
            for v in mono:
                c = c * assignment[v] % p
            total += c
        return total % p

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for t in self.sorted_terms():
            body = "*".join(_var_name(v) for v in t.vars)
            if not body:
                parts.append(str(t.coefficient))
            elif t.coefficient == 1:
                parts.append(body)
            else:
                parts.append(f"{t.coefficient}*{body}")
        return " + ".join(parts)


Equation = Polynomial


def _var_name(v) -> str:
    if isinstance(v, tuple) and len(v) == 3:
        return f"{v[0]}[{v[1]},{v[2]}]"
    return str(v)


def _substitute_poly(poly: Polynomial, x, gamma: Polynomial) -> Polynomial:
    p = poly.p
    out: Dict[tuple, int] = {}

    def add(mono, c):
        c = (out.get(mono, 0) + c) % p
        if c:
            out[mono] = c
        else:
            out.pop(mono, None)

    for mono, c in poly.terms.items():
        k = mono.count(x)
        if k == 0:
            add(mono, c)
        elif k == 1:
            rest = tuple(v for v in mono if v != x)
            for gm, gc in gamma.terms.items():
                add(_mono(*rest, *gm), c * gc)
        else:
            for (m1, c1), (m2, c2) in itertools.product(gamma.terms.items(), repeat=2):
                add(_mono(*m1, *m2), c * c1 * c2)
    for mono in out:
        if len(mono) > 2:
            raise ContractViolation("substitution produced a term of degree > 2")
    return Polynomial._raw(p, out)


@dataclass(frozen=True)
class EquationSystem:
    p: int
    equations: tuple = ()
    eliminated: tuple = ()

    @classmethod
    def of(cls, p: int, equations: Iterable[Polynomial]) -> "EquationSystem":
        eqs = tuple(e for e in equations if not e.is_zero)
        for e in eqs:
            if e.p != p:
                raise ContractViolation(f"equation over GF({e.p}) in a GF({p}) system")
        return cls(p, eqs, ())

    def __len__(self):
        return len(self.equations)

    def variables(self) -> list:
        vs = set()
        for e in self.equations:
            vs |= e.variables()
        return sorted(vs)

    def is_satisfied_by(self, assignment: Assignment) -> bool:
        return all(e.evaluate(assignment) == 0 for e in self.equations)

    def back_substitute(self, assignment: Assignment) -> Assignment:
        """Lift a solution of the live equations to every eliminated variable.

        Live variables absent from ``assignment`` are taken as 0.
        """
        full = dict(assignment)
        for v in self.variables():
            full.setdefault(v, 0)
        for x, gamma in reversed(self.eliminated):
            for v in gamma.variables():
                full.setdefault(v, 0)
            full[x] = gamma.evaluate(full)
        return full


class _Infeasible:
    """Marker for a system reduced to a contradiction such as ``1 = 0``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFEASIBLE"

    def __bool__(self):
        return False


INFEASIBLE = _Infeasible()


def substitute(S: EquationSystem, i: int, x) -> EquationSystem:
    """Remove linear equation ``i``, solve it for ``x`` and substitute everywhere."""
    if not 0 <= i < len(S.equations):
        raise ContractViolation(f"equation index {i} out of range")
    eq = S.equations[i]
    if not eq.is_linear:
        raise ContractViolation(f"equation {i} is not linear: {eq!r}")
    c = eq.terms.get((x,), 0)
    if not c:
        raise ContractViolation(f"variable {x!r} does not occur in equation {i}")
    p = S.p
    neg_inv = (-pow(c, p - 2, p)) % p
    gamma = Polynomial._raw(p, {m: v * neg_inv % p for m, v in eq.terms.items() if m != (x,)})
    new_eqs = []
    for k, e in enumerate(S.equations):
        if k == i:
            continue
        if any(x in m for m in e.terms):
            e = _substitute_poly(e, x, gamma)
            if e.is_zero:
                continue
        new_eqs.append(e)
    return EquationSystem(p, tuple(new_eqs), S.eliminated + ((x, gamma),))


def eliminate_all_linear(S: EquationSystem):
    """Substitute away linear equations until only quadratic ones remain.

    Returns :data:`INFEASIBLE` if a nonzero constant equation appears.
    """
    cur = S
    while True:
        pick = None
        for idx, e in enumerate(cur.equations):
            if e.is_linear:
                if len(e.terms) == 1 and () in e.terms or not e.terms:
                    return INFEASIBLE
                pick = idx
                break
        if pick is None:
            return cur
        eq = cur.equations[pick]
        x = min(m[0] for m in eq.terms if len(m) == 1)
        cur = substitute(cur, pick, x)


# -- linear solving ----------------------------------------------------------

def solve_dense(rows, nvars: int, p: int) -> Optional[list]:
    """Solve ``A v = b`` given augmented rows ``[a_0..a_{n-1}, b]`` mod p.

    Free variables are set to 0. Returns None when inconsistent. ``rows`` is
    consumed.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for col in range(nvars):
        piv = None
        for k in range(r, nrows):
            if rows[k][col]:
                piv = k
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[col], p - 2, p)
        if inv != 1:
            prow = [v * inv % p for v in prow]
            rows[r] = prow
        for k in range(nrows):
            if k != r:
                f = rows[k][col]
                if f:
                    rows[k] = [(a - f * b) % p for a, b in zip(rows[k], prow)]
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    for k in range(r, nrows):
        if rows[k][nvars]:
            return None
    sol = [0] * nvars
    for k, col in enumerate(pivots):
        sol[col] = rows[k][nvars]
    return sol


def _dense_linear(equations, variables: list, p: int) -> list:
    index = {v: k for k, v in enumerate(variables)}
    n = len(variables)
    rows = []
    for e in equations:
        row = [0] * (n + 1)
        for mono, c in e.terms.items():
            if mono:
                row[index[mono[0]]] = c
            else:
                row[n] = (-c) % p
        rows.append(row)
    return rows


def solve_linear(S: EquationSystem) -> Optional[Assignment]:
    """Gaussian elimination; some solution (free variables 0) or None."""
    for e in S.equations:
        if not e.is_linear:
            raise ContractViolation(f"nonlinear equation passed to solve_linear: {e!r}")
    variables = S.variables()
    sol = solve_dense(_dense_linear(S.equations, variables, S.p), len(variables), S.p)
    if sol is None:
        return None
    return dict(zip(variables, sol))


# -- quadratic solving -------------------------------------------------------

@dataclass
class QuadraticResult:
    status: Status
    assignment: Optional[Assignment] = None
    branch_vars: tuple = field(default=())


def _branch_set(equations) -> list:
    """Variables whose fixing leaves every equation linear (greedy cover)."""
    chosen = set()
    pairs = []
    for e in equations:
        for mono in e.terms:
            if len(mono) == 2:
                u, v = mono
                if u == v:
                    chosen.add(u)
                else:
                    pairs.append((u, v))
    while True:
        open_pairs = [(u, v) for u, v in pairs if u not in chosen and v not in chosen]
        if not open_pairs:
            break
        counts: Dict[tuple, int] = {}
        for u, v in open_pairs:
            counts[u] = counts.get(u, 0) + 1
            counts[v] = counts.get(v, 0) + 1
        best = max(counts.values())
        chosen.add(min(v for v, c in counts.items() if c == best))
    return sorted(chosen)


class _Compiled:
    """Equations split so that fixing the branch variables yields linear rows."""

    def __init__(self, equations, branch: list, p: int):
        self.p = p
        self.branch = branch
        bindex = {v: k for k, v in enumerate(branch)}
        bset = set(branch)
        self.free = sorted({v for e in equations for v in e.variables()} - bset)
        findex = {v: k for k, v in enumerate(self.free)}
        self.eqs = []
        for e in equations:
            const = []   # (coef, [branch idx...])
            lin = []     # (coef, free idx, [branch idx...])
            for mono, c in e.terms.items():
                bs = [bindex[v] for v in mono if v in bset]
                fs = [findex[v] for v in mono if v not in bset]
                if not fs:
                    const.append((c, bs))
                else:
                    lin.append((c, fs[0], bs))
            self.eqs.append((const, lin))

    def linear_rows(self, values) -> list:
        p = self.p
        n = len(self.free)
        rows = []
        for const, lin in self.eqs:
            row = [0] * (n + 1)
            acc = 0
            for c, bs in const:
                for b in bs:
                    c = c * values[b]
                acc += c
            row[n] = (-acc) % p
            for c, f, bs in lin:
                for b in bs:
                    c = c * values[b]
                row[f] = (row[f] + c) % p
            rows.append(row)
        return rows

    def try_values(self, values) -> Optional[Assignment]:
        sol = solve_dense(self.linear_rows(values), len(self.free), self.p)
        if sol is None:
            return None
        out = dict(zip(self.branch, values))
        out.update(zip(self.free, sol))
        return out


def solve_quadratic(S: EquationSystem, budget: int = DEFAULT_ENUMERATION_BUDGET,
                    seed: int = 0, random_trials: int = DEFAULT_RANDOM_TRIALS) -> QuadraticResult:
    """Find a solution of a system of degree <= 2, or prove there is none.

    A set of branch variables is chosen so that fixing them makes every
    equation linear. If the p**len(branch) assignments fit in ``budget`` they
    are all tried, each followed by Gaussian elimination, which decides the
    system exactly. Otherwise seeded random assignments of the branch
    variables are tried; failing that the result is UNKNOWN, never UNSAT.
    Returned assignments are always re-checked against ``S``.
    """
    for e in S.equations:
        if e.degree > 2:
            raise ContractViolation(f"equation of degree {e.degree} in quadratic solver")
    p = S.p
    branch = _branch_set(S.equations)
    comp = _Compiled(S.equations, branch, p)

    def verified(sol):
        if not S.is_satisfied_by(sol):
            raise AssertionError("quadratic solver produced a non-solution")
        return QuadraticResult(Status.SAT, sol, tuple(branch))

    if p ** len(branch) <= budget:
        for values in itertools.product(range(p), repeat=len(branch)):
            sol = comp.try_values(values)
            if sol is not None:
                return verified(sol)
        return QuadraticResult(Status.UNSAT, None, tuple(branch))

    rng = random.Random(seed)
    for _ in range(random_trials):
        values = [rng.randrange(p) for _ in branch]
        sol = comp.try_values(values)
        if sol is not None:
            return verified(sol)
    return QuadraticResult(Status.UNKNOWN, None, tuple(branch))
