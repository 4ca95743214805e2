import random

import pytest

from gfcomplete.equations import (INFEASIBLE, EquationSystem, Polynomial, eliminate_all_linear,
                                  solve_linear, solve_quadratic, substitute)
from gfcomplete.errors import ContractViolation
from gfcomplete.status import Status

from _fixtures import planted_system, random_system, solutions

x, y, z = ("x", 0, 0), ("x", 0, 1), ("x", 0, 2)


def P(p, *terms):
    return Polynomial.from_terms(p, terms)


def test_simplification_merges_and_drops_zero_terms():
    e = P(3, (1, (x,)), (2, (x,)), (1, (y, x)), (1, (x, y)))
    assert e.terms == {(x, y): 2}
    assert e.degree == 2 and not e.is_linear


def test_degree_three_rejected():
    with pytest.raises(ContractViolation):
        Polynomial(2, {(x, y, z): 1})


def test_substitute_example_gf2():
    S = EquationSystem.of(2, [P(2, (1, (x,)), (1, (y,)), (1, ())), P(2, (1, (x, z)), (1, (y,)))])
    T = substitute(S, 0, x)
    assert T.equations == (P(2, (1, (z,)), (1, (y, z)), (1, (y,))),)
    assert T.eliminated[0][0] == x
    assert T.eliminated[0][1] == P(2, (1, (y,)), (1, ()))


def test_substitute_only_variable_gf3():
    S = EquationSystem.of(3, [P(3, (1, (x,)), (1, ()))])
    T = substitute(S, 0, x)
    assert len(T) == 0
    assert T.eliminated == ((x, P(3, (2, ()))),)
    assert T.back_substitute({}) == {x: 2}


def test_substitute_contract():
    S = EquationSystem.of(2, [P(2, (1, (x, y)), (1, ())), P(2, (1, (x,)))])
    with pytest.raises(ContractViolation):
        substitute(S, 0, x)
    with pytest.raises(ContractViolation):
        substitute(S, 1, y)


def test_eliminate_all_linear_feasible():
    S = EquationSystem.of(5, [P(5, (1, (x,)), (1, (y,)), (4, ())), P(5, (1, (y,)), (3, ()))])
    T = eliminate_all_linear(S)
    assert len(T) == 0
    assert S.is_satisfied_by(T.back_substitute({}))


def test_eliminate_all_linear_contradiction():
    S = EquationSystem.of(2, [P(2, (1, (x,)), (1, ())), P(2, (1, (x,)))])
    assert eliminate_all_linear(S) is INFEASIBLE


def test_eliminate_leaves_only_quadratic():
    rng = random.Random(4)
    for _ in range(50):
        S, _ = random_system(rng, 3, 4, 4)
        T = eliminate_all_linear(S)
        if T is not INFEASIBLE:
            assert all(e.degree == 2 for e in T.equations)
            assert len(T.eliminated) <= len(S)


def test_solve_linear_examples():
    S = EquationSystem.of(2, [P(2, (1, (x,)), (1, (y,)), (1, ())), P(2, (1, (y,)), (1, ()))])
    assert solve_linear(S) == {x: 0, y: 1}
    S = EquationSystem.of(2, [P(2, (1, (x,)), (1, ())), P(2, (1, (x,)))])
    assert solve_linear(S) is None
    with pytest.raises(ContractViolation):
        solve_linear(EquationSystem.of(2, [P(2, (1, (x, y)))]))


def test_solve_linear_random_consistent_gf5():
    rng = random.Random(10)
    vs = [("a", 0, k) for k in range(10)]
    for _ in range(20):
        point = {v: rng.randrange(5) for v in vs}
        eqs = []
        for _ in range(rng.randint(3, 12)):
            terms = [(rng.randrange(5), (v,)) for v in vs]
            e = P(5, *terms)
            eqs.append(P(5, *terms, (-e.evaluate(point), ())))
        S = EquationSystem.of(5, eqs)
        sol = solve_linear(S)
        assert sol is not None and S.is_satisfied_by(sol)


def test_solve_quadratic_examples():
    r = solve_quadratic(EquationSystem.of(2, [P(2, (1, (x, y)), (1, ()))]))
    assert r.status is Status.SAT and r.assignment == {x: 1, y: 1}
    r = solve_quadratic(EquationSystem.of(3, [P(3, (1, (x, x)), (1, ()))]))
    assert r.status is Status.UNSAT


def test_solve_quadratic_planted_gf3():
    rng = random.Random(6)
    for _ in range(30):
        S, _ = planted_system(rng, 3, 6, 5)
        r = solve_quadratic(S)
        assert r.status is Status.SAT and S.is_satisfied_by(r.assignment)


def test_solve_quadratic_randomized_branch_is_one_sided():
    # budget 1 forces the randomized path
    rng = random.Random(8)
    for _ in range(20):
        S, _ = planted_system(rng, 3, 6, 3)
        r = solve_quadratic(S, budget=1, seed=1)
        assert r.status in (Status.SAT, Status.UNKNOWN)
        if r.status is Status.SAT:
            assert S.is_satisfied_by(r.assignment)
    r = solve_quadratic(EquationSystem.of(3, [P(3, (1, (x, x)), (1, ()))]), budget=1,
                        random_trials=50)
    assert r.status is Status.UNKNOWN


def test_solve_quadratic_matches_exhaustive():
    rng = random.Random(12)
    for _ in range(100):
        p = rng.choice([2, 3])
        S, vs = random_system(rng, p, 3, rng.randint(1, 4), quad_prob=0.8)
        r = solve_quadratic(S)
        assert (r.status is Status.SAT) == bool(solutions(S, S.variables()))


def test_substitution_preserves_solutions():
    rng = random.Random(3)
    checked = 0
    while checked < 100:
        p = rng.choice([2, 3])
        S, vs = random_system(rng, p, 3, 3)
        lin = [(i, min(m[0] for m in e.terms if len(m) == 1))
               for i, e in enumerate(S.equations) if e.is_linear and any(len(m) == 1 for m in e.terms)]
        if not lin:
            continue
        i, v = rng.choice(lin)
        T = substitute(S, i, v)
        rest = [u for u in vs if u != v]
        residual = solutions(T, rest)
        assert bool(residual) == bool(solutions(S, vs))
        for a in residual:
            assert S.is_satisfied_by(T.back_substitute(a))
        checked += 1
