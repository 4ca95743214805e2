"""Incomplete matrices over GF(p), rank, consistency and the text file format.

A missing entry is stored as ``None`` (exported as :data:`MISSING`) so that it
can never collide with a field value, including over GF(2).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import ContractViolation, ParseError
from .gf import PrimeField

MISSING = None
MISSING_TOKEN = "*"

Row = tuple


@dataclass(frozen=True)
class IncompleteMatrix:
    """An m x n grid whose cells hold residues mod p or :data:`MISSING`."""

    p: int
    rows: tuple

    def __post_init__(self):
        PrimeField(self.p)
        if not self.rows:
            raise ContractViolation("matrix needs at least one row")
        n = len(self.rows[0])
        if n == 0:
            raise ContractViolation("matrix needs at least one column")
        for i, row in enumerate(self.rows):
            if len(row) != n:
                raise ContractViolation(f"row {i} has {len(row)} entries, expected {n}")
            for v in row:
                if v is not MISSING and not (isinstance(v, int) and 0 <= v < self.p):
                    raise ContractViolation(f"entry {v!r} is not a residue mod {self.p}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Optional[int]]], p: int) -> "IncompleteMatrix":
        """Build from nested iterables; ints are reduced mod p, None means missing."""
        return cls(p, tuple(tuple(MISSING if v is MISSING else int(v) % p for v in r) for r in rows))

    @classmethod
    def zeros(cls, m: int, n: int, p: int) -> "IncompleteMatrix":
        return cls(p, tuple((0,) * n for _ in range(m)))

    @classmethod
    def all_missing(cls, m: int, n: int, p: int) -> "IncompleteMatrix":
        return cls(p, tuple((MISSING,) * n for _ in range(m)))

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.rows[0])

    @property
    def shape(self) -> tuple:
        return (self.m, self.n)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def is_missing(self, i: int, j: int) -> bool:
        return self.rows[i][j] is MISSING

    def missing_cells(self) -> list:
        return [(i, j) for i, row in enumerate(self.rows)
                for j, v in enumerate(row) if v is MISSING]

    @property
    def num_missing(self) -> int:
        return sum(v is MISSING for row in self.rows for v in row)

    @property
    def is_complete(self) -> bool:
        return self.num_missing == 0

    def fill(self, values) -> "IncompleteMatrix":
        """Replace missing cells; ``values`` maps (i, j) to a residue, default 0."""
        get = values.get if hasattr(values, "get") else (lambda key, d: values[key])
        return IncompleteMatrix(self.p, tuple(
            tuple(get((i, j), 0) % self.p if v is MISSING else v for j, v in enumerate(row))
            for i, row in enumerate(self.rows)))

    def fill_sequence(self, values: Sequence[int]) -> "IncompleteMatrix":
        """Fill missing cells in row-major order from ``values``."""
        it = iter(values)
        return IncompleteMatrix(self.p, tuple(
            tuple(next(it) if v is MISSING else v for v in row) for row in self.rows))

    def with_rows(self, rows) -> "IncompleteMatrix":
        return IncompleteMatrix(self.p, tuple(tuple(r) for r in rows))

    def __str__(self):
        return format_matrix(self)


def _require_complete(M: IncompleteMatrix, what: str) -> None:
    if not M.is_complete:
        raise ContractViolation(f"{what} requires a complete matrix")


def rank_rows(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank over GF(p) of a list of complete row vectors."""
    if not rows:
        return 0
    if p == 2:
        basis = {}
        for row in rows:
            v = 0
            for bit in row:
                v = (v << 1) | bit
            while v:
                top = v.bit_length()
                if top in basis:
                    v ^= basis[top]
                else:
                    basis[top] = v
                    break
        return len(basis)
    work = [list(r) for r in rows]
    n = len(work[0])
    r = 0
    for col in range(n):
        pivot = None
        for i in range(r, len(work)):
            if work[i][col] % p:
                pivot = i
                break
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = pow(work[r][col], p - 2, p)
        prow = [(x * inv) % p for x in work[r]]
        work[r] = prow
        for i in range(r + 1, len(work)):
            f = work[i][col] % p
            if f:
                row_i = work[i]
                work[i] = [(a - f * b) % p for a, b in zip(row_i, prow)]
        r += 1
        if r == len(work):
            break
    return r


def rank(M: IncompleteMatrix) -> int:
    """Dimension of the row space of a complete matrix over GF(M.p)."""
    _require_complete(M, "rank")
    return rank_rows(M.rows, M.p)


def distinct_rows(M: IncompleteMatrix) -> int:
    _require_complete(M, "distinct_rows")
    return len(set(M.rows))


def is_consistent(Mc: IncompleteMatrix, M: IncompleteMatrix) -> bool:
    """True iff complete ``Mc`` agrees with ``M`` on every determined cell."""
    if Mc.p != M.p or Mc.shape != M.shape:
        raise ContractViolation(
            f"shape/modulus mismatch: {Mc.shape} over GF({Mc.p}) vs {M.shape} over GF({M.p})")
    _require_complete(Mc, "is_consistent")
    for rc, r in zip(Mc.rows, M.rows):
        for a, b in zip(rc, r):
            if b is not MISSING and a != b:
                return False
    return True


def transpose(M: IncompleteMatrix) -> IncompleteMatrix:
    return IncompleteMatrix(M.p, tuple(zip(*M.rows)))


def _normalize_range(rng, size: int, axis: str) -> list:
    if rng is None:
        return list(range(size))
    if isinstance(rng, slice):
        return list(range(size))[rng]
    idx = list(rng)
    for i in idx:
        if not (isinstance(i, int) and 0 <= i < size):
            raise ContractViolation(f"{axis} index {i!r} out of range [0, {size})")
    return idx


def submatrix(M: IncompleteMatrix, row_range=None, col_range=None) -> IncompleteMatrix:
    """Block of ``M`` selected by 0-based index lists, slices, or None (= all)."""
    if isinstance(row_range, slice) and (row_range.stop or 0) > M.m:
        raise ContractViolation(f"row slice {row_range} exceeds {M.m} rows")
    if isinstance(col_range, slice) and (col_range.stop or 0) > M.n:
        raise ContractViolation(f"column slice {col_range} exceeds {M.n} columns")
    rows = _normalize_range(row_range, M.m, "row")
    cols = _normalize_range(col_range, M.n, "column")
    if not rows or not cols:
        raise ContractViolation("submatrix must be non-empty")
    return IncompleteMatrix(M.p, tuple(tuple(M.rows[i][j] for j in cols) for i in rows))


# -- file format -------------------------------------------------------------

def parse_matrix(text: str) -> IncompleteMatrix:
    """Parse the ``p m n`` header format; ``*`` marks a missing entry."""
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = _tokens_with_columns(raw)
        if header is None:
            if len(tokens) != 3:
                raise ParseError("header must be 'p m n'", lineno, 1)
            vals = []
            for col, tok in tokens:
                if not tok.isdigit():
                    raise ParseError(f"expected a non-negative integer, got {tok!r}", lineno, col)
                vals.append(int(tok))
            p, m, n = vals
            if m < 1 or n < 1:
                raise ParseError("m and n must be at least 1", lineno, 1)
            try:
                PrimeField(p)
            except ContractViolation as exc:
                raise ParseError(str(exc), lineno, tokens[0][0]) from None
            header = (p, m, n)
            continue
        p, m, n = header
        if len(rows) == m:
            raise ParseError(f"more than {m} matrix rows", lineno, 1)
        if len(tokens) != n:
            raise ParseError(f"expected {n} entries, found {len(tokens)}", lineno, 1)
        row = []
        for col, tok in tokens:
            if tok == MISSING_TOKEN:
                row.append(MISSING)
            elif tok.isdigit() and int(tok) < p:
                row.append(int(tok))
            else:
                raise ParseError(f"entry {tok!r} is neither '*' nor a residue mod {p}", lineno, col)
        rows.append(tuple(row))
    if header is None:
        raise ParseError("missing 'p m n' header", None)
    if len(rows) != header[1]:
        raise ParseError(f"expected {header[1]} rows, found {len(rows)}", None)
    return IncompleteMatrix(header[0], tuple(rows))


def _tokens_with_columns(line: str) -> list:
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def format_matrix(M: IncompleteMatrix) -> str:
    lines = [f"{M.p} {M.m} {M.n}"]
    for row in M.rows:
        lines.append(" ".join(MISSING_TOKEN if v is MISSING else str(v) for v in row))
    return "\n".join(lines) + "\n"


def read_matrix(path) -> IncompleteMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(M: IncompleteMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_matrix(M))
