"""Rank-bounded completion over GF(p).

Three exact solvers are provided, each keyed on a different cover of the
missing cells:

* :func:`solve_rmc_row` branches on row signatures (I, D): which covering rows
  stay independent of the complete rows, and with which coefficients every
  other covering row depends on them. Each branch is a linear system.
* :func:`solve_rmc_col` runs the row solver on the transpose.
* :func:`solve_rmc_comb` branches on paired row/column signatures for a
  minimum mixed cover; each branch is a quadratic system that is reduced by
  linear substitution and then handed to :func:`solve_quadratic`.

:func:`brute_force_rmc` enumerates all completions and serves as the oracle.
All indices are 0-based.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb as binom
from typing import Optional

from .equations import (DEFAULT_ENUMERATION_BUDGET, EquationSystem, INFEASIBLE,
                        Polynomial, a_var, b_var, eliminate_all_linear,
                        solve_dense, solve_quadratic, x_var)
from .errors import ResourceLimitError
from .matrix import (MISSING, IncompleteMatrix, is_consistent, rank, rank_rows,
                     transpose)
from .params import comb_cover, covering_rows
from .status import Status


@dataclass(frozen=True)
class RowSignature:
    """``independent`` is I; ``deps[d][i]`` is the coefficient of row i in row d."""

    independent: tuple
    deps: dict = field(hash=False, compare=True)


@dataclass(frozen=True)
class CombSignature:
    rows: RowSignature
    cols: RowSignature

    @property
    def size(self) -> int:
        return len(self.rows.independent) + len(self.cols.independent)


@dataclass
class RmcResult:
    status: Status
    matrix: Optional[IncompleteMatrix] = None
    rank: Optional[int] = None
    signature: object = None
    # |I| (+ |I_C|) plus the rank of the complete block; equals the minimum
    # achievable rank whenever every smaller signature level was refuted
    certified_rank: Optional[int] = None
    signatures_tried: int = 0

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


def check_rmc_solution(M: IncompleteMatrix, result: RmcResult, t: int) -> None:
    """Soundness guard applied to every SAT answer before it is returned."""
    if result.status is not Status.SAT:
        return
    Mc = result.matrix
    if Mc is None or not is_consistent(Mc, M):
        raise AssertionError("RMC solver returned an inconsistent completion")
    r = rank(Mc)
    if r > t:
        raise AssertionError(f"RMC solver returned rank {r} > t={t}")
    result.rank = r


def _trivial(M: IncompleteMatrix, t: int) -> Optional[RmcResult]:
    if t < 0:
        return RmcResult(Status.UNSAT)
    if M.is_complete:
        r = rank(M)
        if r <= t:
            return RmcResult(Status.SAT, M, r, certified_rank=r)
        return RmcResult(Status.UNSAT, certified_rank=r)
    if t >= min(M.m, M.n):
        Z = M.fill({})
        return RmcResult(Status.SAT, Z, rank(Z))
    return None


# -- signatures ---------------------------------------------------------------

def count_row_signatures(k: int, p: int) -> int:
    """Number of signatures over a k-element cover: sum_s C(k,s) p^(s(k-s))."""
    return sum(binom(k, s) * p ** (s * (k - s)) for s in range(k + 1))


def iter_row_signatures(cover, p: int, size: Optional[int] = None):
    """Signatures over ``cover`` ordered by |I| ascending, then lexicographically."""
    cover = sorted(cover)
    sizes = range(len(cover) + 1) if size is None else [size]
    for s in sizes:
        for I in itertools.combinations(cover, s):
            rest = [d for d in cover if d not in I]
            for coeffs in itertools.product(range(p), repeat=len(rest) * s):
                deps = {d: dict(zip(I, coeffs[k * s:(k + 1) * s])) for k, d in enumerate(rest)}
                yield RowSignature(I, deps)


# -- row parameter ------------------------------------------------------------

class _RowSystem:
    """Linear system template for one matrix and a fixed covering-row set."""

    def __init__(self, M: IncompleteMatrix, R: list):
        self.M = M
        self.R = R
        self.rest = [i for i in range(M.m) if i not in set(R)]
        self.xcells = [(i, j) for i in R for j in range(M.n) if M.rows[i][j] is MISSING]
        self.xindex = {c: k for k, c in enumerate(self.xcells)}

    def solve(self, sig: RowSignature) -> Optional[dict]:
        """Values of the missing cells for a matching completion, or None."""
        M, p = self.M, self.M.p
        rows_m = M.rows
        nx = len(self.xcells)
        na = len(self.rest)
        dependents = [d for d in self.R if d not in sig.independent]
        nvars = nx + na * len(dependents)
        eqs = []
        for k, d in enumerate(dependents):
            coeffs = sig.deps[d]
            base = nx + k * na
            drow = rows_m[d]
            for j in range(M.n):
                row = [0] * (nvars + 1)
                rhs = 0
                v = drow[j]
                if v is MISSING:
                    row[self.xindex[(d, j)]] = 1
                else:
                    rhs -= v
                for q, i in enumerate(self.rest):
                    row[base + q] = (-rows_m[i][j]) % p
                for i, c in coeffs.items():
                    if not c:
                        continue
                    w = rows_m[i][j]
                    if w is MISSING:
                        idx = self.xindex[(i, j)]
                        row[idx] = (row[idx] - c) % p
                    else:
                        rhs += c * w
                row[nvars] = rhs % p
                eqs.append(row)
        sol = solve_dense(eqs, nvars, p)
        if sol is None:
            return None
        return {cell: sol[k] for k, cell in enumerate(self.xcells)}


def _first_valid(M: IncompleteMatrix, R: list, sigs: list):
    system = _RowSystem(M, R)
    for k, sig in enumerate(sigs):
        fill = system.solve(sig)
        if fill is not None:
            return k, fill
    return None


def _row_search(M: IncompleteMatrix, max_level: Optional[int], jobs: int = 1):
    """Lowest-|I| valid row signature with |I| <= max_level.

    Returns ``(sig, fill, tried, residual_rank)``; ``sig`` is None when no
    such signature exists. With ``jobs > 1`` each level is split into chunks
    checked in worker processes; the earliest valid signature in enumeration
    order wins, so the answer does not depend on ``jobs``.
    """
    R = sorted(covering_rows(M).rows)
    system = _RowSystem(M, R)
    residual = rank_rows([M.rows[i] for i in system.rest], M.p)
    top = len(R) if max_level is None else min(len(R), max_level)
    tried = 0
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        for s in range(top + 1):
            if pool is None:
                for sig in iter_row_signatures(R, M.p, s):
                    tried += 1
                    fill = system.solve(sig)
                    if fill is not None:
                        return sig, fill, tried, residual
                continue
            sigs = list(iter_row_signatures(R, M.p, s))
            size = max(1, -(-len(sigs) // (4 * jobs)))
            chunks = [sigs[k:k + size] for k in range(0, len(sigs), size)]
            found = list(pool.map(_first_valid, [M] * len(chunks), [R] * len(chunks), chunks))
            for c, hit in enumerate(found):
                if hit is not None:
                    k, fill = hit
                    return chunks[c][k], fill, tried + c * size + k + 1, residual
            tried += len(sigs)
    finally:
        if pool is not None:
            pool.shutdown()
    return None, None, tried, residual


def solve_rmc_row(M: IncompleteMatrix, t: int, jobs: int = 1) -> RmcResult:
    """Decide whether ``M`` has a completion of rank <= t (row signatures)."""
    res = _trivial(M, t)
    if res is not None:
        return res
    R = covering_rows(M).rows
    residual = rank_rows([M.rows[i] for i in range(M.m) if i not in R], M.p)
    if residual > t:
        return RmcResult(Status.UNSAT)
    sig, fill, tried, residual = _row_search(M, t - residual, jobs)
    if sig is None:
        return RmcResult(Status.UNSAT, signatures_tried=tried)
    result = RmcResult(Status.SAT, M.fill(fill), signature=sig,
                       certified_rank=len(sig.independent) + residual, signatures_tried=tried)
    check_rmc_solution(M, result, t)
    return result


def min_rank_row(M: IncompleteMatrix) -> RmcResult:
    """Minimum-rank completion via the row-signature search (no cut-off)."""
    if M.is_complete:
        r = rank(M)
        return RmcResult(Status.SAT, M, r, certified_rank=r)
    sig, fill, tried, residual = _row_search(M, None)
    # I = R with no dependents is always valid, so the search cannot fail
    assert sig is not None
    result = RmcResult(Status.SAT, M.fill(fill), signature=sig,
                       certified_rank=len(sig.independent) + residual, signatures_tried=tried)
    check_rmc_solution(M, result, result.certified_rank)
    return result


def solve_rmc_col(M: IncompleteMatrix, t: int, jobs: int = 1) -> RmcResult:
    """Column-cover variant: transpose, solve by rows, transpose back."""
    res = solve_rmc_row(transpose(M), t, jobs)
    if res.matrix is not None:
        res.matrix = transpose(res.matrix)
    if res.status is Status.SAT:
        check_rmc_solution(M, res, t)
    return res


# -- comb parameter -----------------------------------------------------------

def _cell(M: IncompleteMatrix, z: int, y: int):
    v = M.rows[z][y]
    return x_var(z, y) if v is MISSING else v


def _add_product(acc: dict, c: int, u, v, p: int) -> None:
    """acc += c * u * v where u, v are ints or variables."""
    vs = []
    for f in (u, v):
        if isinstance(f, int):
            c = c * f
        else:
            vs.append(f)
    c %= p
    if not c:
        return
    mono = tuple(sorted(vs))
    acc[mono] = (acc.get(mono, 0) + c) % p


def build_comb_system(M: IncompleteMatrix, R: list, C: list, sig: CombSignature) -> EquationSystem:
    """Equations asserting that a completion of ``M`` matches ``sig``.

    Dependent covering rows are combinations of the non-covering rows plus the
    independent covering rows. Dependent covering columns, restricted to the
    non-covering rows, are combinations of the non-covering columns plus the
    independent covering columns.
    """
    p = M.p
    rset, cset = set(R), set(C)
    rest_rows = [i for i in range(M.m) if i not in rset]
    rest_cols = [j for j in range(M.n) if j not in cset]
    eqs = []
    for d, coeffs in sig.rows.deps.items():
        for y in range(M.n):
            acc: dict = {}
            _add_product(acc, 1, _cell(M, d, y), 1, p)
            for i in rest_rows:
                _add_product(acc, -1, a_var(d, i), _cell(M, i, y), p)
            for i, c in coeffs.items():
                _add_product(acc, -c, _cell(M, i, y), 1, p)
            eqs.append(Polynomial._raw(p, {m: v for m, v in acc.items() if v}))
    for h, coeffs in sig.cols.deps.items():
        for z in rest_rows:
            acc = {}
            _add_product(acc, 1, _cell(M, z, h), 1, p)
            for j in rest_cols:
                _add_product(acc, -1, b_var(h, j), M.rows[z][j], p)
            for i, c in coeffs.items():
                _add_product(acc, -c, _cell(M, z, i), 1, p)
            eqs.append(Polynomial._raw(p, {m: v for m, v in acc.items() if v}))
    return EquationSystem.of(p, eqs)


def iter_comb_signatures(R, C, p: int, size: int):
    """All comb signatures with |I_R| + |I_C| == size."""
    for sr in range(0, min(size, len(R)) + 1):
        sc = size - sr
        if sc > len(C):
            continue
        for rs in iter_row_signatures(R, p, sr):
            for cs in iter_row_signatures(C, p, sc):
                yield CombSignature(rs, cs)


def solve_rmc_comb(M: IncompleteMatrix, t: int, seed: int = 0,
                   budget: int = DEFAULT_ENUMERATION_BUDGET) -> RmcResult:
    """Decide rank <= t using a minimum row+column cover of the missing cells.

    UNKNOWN is returned only if no signature was validated and at least one
    was abandoned because its residual quadratic system was too large.
    """
    res = _trivial(M, t)
    if res is not None:
        return res
    cover = comb_cover(M)
    R, C = sorted(cover.rows), sorted(cover.cols)
    rest_rows = [i for i in range(M.m) if i not in cover.rows]
    rest_cols = [j for j in range(M.n) if j not in cover.cols]
    block = [[M.rows[i][j] for j in rest_cols] for i in rest_rows]
    residual = rank_rows(block, M.p) if rest_cols else 0
    tried = 0
    undecided = False
    for s in range(0, min(t - residual, len(R) + len(C)) + 1):
        for sig in iter_comb_signatures(R, C, M.p, s):
            tried += 1
            reduced = eliminate_all_linear(build_comb_system(M, R, C, sig))
            if reduced is INFEASIBLE:
                continue
            q = solve_quadratic(reduced, budget=budget, seed=seed * 1_000_003 + tried)
            if q.status is Status.UNKNOWN:
                undecided = True
                continue
            if q.status is Status.UNSAT:
                continue
            full = reduced.back_substitute(q.assignment)
            fill = {(z, y): full.get(x_var(z, y), 0) for z, y in M.missing_cells()}
            result = RmcResult(Status.SAT, M.fill(fill), signature=sig,
                               certified_rank=s + residual, signatures_tried=tried)
            check_rmc_solution(M, result, t)
            return result
    status = Status.UNKNOWN if undecided else Status.UNSAT
    return RmcResult(status, signatures_tried=tried)


# -- oracle -------------------------------------------------------------------

def _check_budget(M: IncompleteMatrix, budget: int) -> None:
    size = M.p ** M.num_missing
    if size > budget:
        raise ResourceLimitError(
            f"{M.p}^{M.num_missing} = {size} completions exceed the budget of {budget}")


def iter_completions(M: IncompleteMatrix):
    """Yield every completion as a tuple of row tuples (row-major fill order)."""
    cells = M.missing_cells()
    base = [list(r) for r in M.rows]
    for values in itertools.product(range(M.p), repeat=len(cells)):
        for (i, j), v in zip(cells, values):
            base[i][j] = v
        yield tuple(tuple(r) for r in base)


def brute_force_min_rank(M: IncompleteMatrix, budget: int = DEFAULT_ENUMERATION_BUDGET):
    """Minimum rank over all completions and one completion achieving it."""
    _check_budget(M, budget)
    floor = rank_rows([r for r in M.rows if MISSING not in r], M.p)
    best, best_rows = None, None
    for rows in iter_completions(M):
        r = rank_rows(rows, M.p)
        if best is None or r < best:
            best, best_rows = r, rows
            if r == floor:
                break
    return best, IncompleteMatrix(M.p, best_rows)


def brute_force_rmc(M: IncompleteMatrix, t: int,
                    budget: int = DEFAULT_ENUMERATION_BUDGET) -> RmcResult:
    best, Mc = brute_force_min_rank(M, budget)
    if best <= t:
        result = RmcResult(Status.SAT, Mc, best, certified_rank=best)
        check_rmc_solution(M, result, t)
        return result
    return RmcResult(Status.UNSAT, certified_rank=best)
