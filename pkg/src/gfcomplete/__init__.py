"""Exact rank- and distinct-row-minimizing matrix completion over GF(p)."""

from .drmc import (brute_force_clique_cover, brute_force_drmc, clique_cover_tw,
                   compatibility_graph, completion_from_cover, solve_drmc)
from .equations import (EquationSystem, Polynomial, eliminate_all_linear,
                        solve_linear, solve_quadratic, substitute)
from .errors import ContractViolation, ParseError, ResourceLimitError
from .gf import FieldElement, PrimeField, fp_add, fp_inv, fp_mul
from .matrix import (MISSING, IncompleteMatrix, distinct_rows, is_consistent,
                     parse_matrix, rank, submatrix, transpose)
from .params import CoverWitness, comb_cover, covering_cols, covering_rows
from .rmc import (brute_force_rmc, solve_rmc_col, solve_rmc_comb,
                  solve_rmc_row)
from .status import Status

__version__ = "0.1.0"
