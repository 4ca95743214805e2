"""Command-line front end.

Exit codes: 0 SAT (or success), 1 UNSAT, 2 input or usage error, 3 UNKNOWN.
"""

from __future__ import annotations

import argparse
import logging
import random
import sys

from . import drmc, rmc
from .equations import DEFAULT_ENUMERATION_BUDGET
from .errors import ContractViolation, ParseError, ResourceLimitError
from .gadgets import (format_dimacs, gen_2drmc_from_coloring, gen_pit_from_3sat2,
                      gen_seven_column_drmc, parse_dimacs, random_3sat2)
from .graph import format_edge_list, parse_edge_list
from .matrix import (IncompleteMatrix, distinct_rows, format_matrix, is_consistent,
                     parse_matrix, rank)
from .params import comb_cover, covering_cols, covering_rows
from .status import Status

log = logging.getLogger("gfcomplete")

EXIT_SAT, EXIT_UNSAT, EXIT_ERROR, EXIT_UNKNOWN = 0, 1, 2, 3
EXIT_FOR = {Status.SAT: EXIT_SAT, Status.UNSAT: EXIT_UNSAT, Status.UNKNOWN: EXIT_UNKNOWN}


class CliError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _load_matrix(path: str) -> IncompleteMatrix:
    try:
        return parse_matrix(_read_text(path))
    except ParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(text: str, output) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ids(indices) -> str:
    return ",".join(str(i + 1) for i in sorted(indices))


def cmd_params(args) -> int:
    M = _load_matrix(args.input)
    r, c, w = covering_rows(M), covering_cols(M), comb_cover(M)
    print(f"row={r.value} col={c.value} comb={w.value}")
    print(f"row_set={_ids(r.rows)}")
    print(f"col_set={_ids(c.cols)}")
    print(f"comb_rows={_ids(w.rows)}")
    print(f"comb_cols={_ids(w.cols)}")
    return 0


def _pick_rmc_param(M: IncompleteMatrix) -> str:
    values = {"row": covering_rows(M).value, "col": covering_cols(M).value,
              "comb": comb_cover(M).value}
    return min(("row", "col", "comb"), key=lambda k: values[k])


def _verify_and_print(problem: str, M: IncompleteMatrix, status: Status, Mc, t: int, output) -> int:
    if status is not Status.SAT:
        print(status)
        return EXIT_FOR[status]
    text = format_matrix(Mc)
    reparsed = parse_matrix(text)
    value = rank(reparsed) if problem == "rmc" else distinct_rows(reparsed)
    if not is_consistent(reparsed, M) or value > t:
        raise CliError(f"internal error: completion failed re-verification ({problem}={value})")
    print(status)
    _emit(text, output)
    return EXIT_SAT


def cmd_solve(args) -> int:
    M = _load_matrix(args.input)
    if args.problem == "rmc":
        param = _pick_rmc_param(M) if args.param == "auto" else args.param
        if param not in ("row", "col", "comb"):
            raise CliError(f"--param {param} is not available for rmc")
        log.info("rmc via %s parameter", param)
        if param == "row":
            res = rmc.solve_rmc_row(M, args.t, jobs=args.jobs)
        elif param == "col":
            res = rmc.solve_rmc_col(M, args.t, jobs=args.jobs)
        else:
            res = rmc.solve_rmc_comb(M, args.t, seed=args.seed, budget=args.budget)
        log.info("signatures tried: %d", res.signatures_tried)
        return _verify_and_print("rmc", M, res.status, res.matrix, args.t, args.output)
    method = {"auto": "auto", "row": "row", "comb": "comb", "heuristic": "heuristic"}.get(args.param)
    if method is None:
        raise CliError(f"--param {args.param} is not available for drmc")
    res = drmc.solve_drmc(M, args.t, method)
    log.info("drmc via %s decomposition of width %d", res.method, res.width)
    return _verify_and_print("drmc", M, res.status, res.matrix, args.t, args.output)


def cmd_oracle(args) -> int:
    M = _load_matrix(args.input)
    try:
        if args.problem == "rmc":
            res = rmc.brute_force_rmc(M, args.t, budget=args.budget)
        else:
            res = drmc.brute_force_drmc(M, args.t, budget=args.budget)
    except ResourceLimitError as exc:
        raise CliError(str(exc)) from None
    return _verify_and_print(args.problem, M, res.status, res.matrix, args.t, args.output)


def _formula(args):
    if args.cnf:
        try:
            return parse_dimacs(_read_text(args.cnf))
        except ParseError as exc:
            raise CliError(f"{args.cnf}: {exc}") from None
    if args.n is None:
        raise CliError("give --n or --cnf")
    return random_3sat2(args.n, args.seed)


def _emit_with_t(text: str, t: int, output) -> None:
    if output:
        _emit(text, output)
        print(f"t={t}")
    else:
        sys.stdout.write(f"# t={t}\n" + text)


def cmd_gen(args) -> int:
    kind = args.kind
    if kind == "sat2":
        if args.n is None:
            raise CliError("gen sat2 needs --n")
        _emit(format_dimacs(random_3sat2(args.n, args.seed)), args.output)
    elif kind == "pit":
        pit = gen_pit_from_3sat2(_formula(args))
        labels = "".join(f"# {k + 1} {lab}\n" for k, lab in enumerate(pit.labels))
        _emit(labels + format_edge_list(pit.graph), args.output)
    elif kind == "sat7col":
        M, t = gen_seven_column_drmc(_formula(args))
        _emit_with_t(format_matrix(M), t, args.output)
    elif kind == "coloring2drmc":
        if not args.graph:
            raise CliError("gen coloring2drmc needs --graph")
        try:
            G = parse_edge_list(_read_text(args.graph))
        except ParseError as exc:
            raise CliError(f"{args.graph}: {exc}") from None
        r = args.r if args.r is not None else max(1, G.n // 3)
        M, t = gen_2drmc_from_coloring(G, r)
        _emit_with_t(format_matrix(M), t, args.output)
    elif kind == "random-matrix":
        for name in ("p", "m", "n"):
            if getattr(args, name) is None:
                raise CliError(f"gen random-matrix needs --{name}")
        cells = args.m * args.n
        missing = args.missing or 0
        if not 0 <= missing <= cells:
            raise CliError(f"--missing must be in 0..{cells}")
        rng = random.Random(args.seed)
        rows = [[rng.randrange(args.p) for _ in range(args.n)] for _ in range(args.m)]
        for c in rng.sample(range(cells), missing):
            rows[c // args.n][c % args.n] = None
        _emit(format_matrix(IncompleteMatrix.from_rows(rows, args.p)), args.output)
    return 0


def _nonneg(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a -v given before it
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS)
    ap = argparse.ArgumentParser(prog="gfcomplete",
                                 description="Exact matrix completion over GF(p).")
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params", parents=[common],
                        help="report row/col/comb and witness sets")
    sp.add_argument("input")
    sp.set_defaults(func=cmd_params)

    for name, func, helptext in (("solve", cmd_solve, "run a parameterized solver"),
                                 ("oracle", cmd_oracle, "exhaustive search over completions")):
        sp = sub.add_parser(name, help=helptext, parents=[common])
        sp.add_argument("problem", choices=["rmc", "drmc"])
        sp.add_argument("input")
        sp.add_argument("--t", type=_nonneg, required=True)
        sp.add_argument("--budget", type=_positive, default=DEFAULT_ENUMERATION_BUDGET)
        sp.add_argument("-o", "--output")
        if name == "solve":
            sp.add_argument("--param", default="auto",
                            choices=["auto", "row", "col", "comb", "heuristic"])
            sp.add_argument("--seed", type=_nonneg, default=0)
            sp.add_argument("--jobs", type=_positive, default=1)
        sp.set_defaults(func=func)

    sp = sub.add_parser("gen", parents=[common], help="write a generated instance")
    sp.add_argument("kind", choices=["sat2", "pit", "sat7col", "coloring2drmc", "random-matrix"])
    sp.add_argument("--n", type=_positive)
    sp.add_argument("--m", type=_positive)
    sp.add_argument("--p", type=_positive)
    sp.add_argument("--missing", type=_nonneg)
    sp.add_argument("--r", type=_positive)
    sp.add_argument("--cnf")
    sp.add_argument("--graph")
    sp.add_argument("--seed", type=_nonneg, default=0)
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_gen)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CliError, ContractViolation, ResourceLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
