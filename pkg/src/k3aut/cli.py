"""Command-line entry point: ``k3aut compute | verify-paper | oracle | pell``."""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import aut, claims, lattice, pell
from .lattice import GramForm, family_gram
from .quadratic import DomainError, is_perfect_square
from .report import ReportDocument, render_text

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_UNSUPPORTED = 3


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _parse_gram(text: str) -> tuple[int, int, int]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) != 3:
        raise CLIError(f"--gram needs three integers g00,g01,g11, got {text!r}", EXIT_INVALID)
    try:
        return tuple(int(p) for p in parts)  # type: ignore[return-value]
    except ValueError:
        raise CLIError(f"--gram entries must be integers, got {text!r}", EXIT_INVALID) from None


def _form_from_args(args) -> tuple[GramForm, dict]:
    if args.gram is not None and args.family is not None:
        raise CLIError("give either --gram or --family/--d, not both", EXIT_INVALID)
    if args.gram is not None:
        g = _parse_gram(args.gram)
        if g[0] % 2 or g[2] % 2:
            raise CLIError(f"form {g} is not even (odd diagonal entry)", EXIT_UNSUPPORTED)
        if g[0] * g[2] - g[1] * g[1] == 0:
            raise CLIError(f"form {g} is degenerate", EXIT_UNSUPPORTED)
        Q = GramForm(*g)
        echo = {"gram": list(g)}
    elif args.family is not None:
        if args.d is None:
            raise CLIError("--family needs --d", EXIT_INVALID)
        try:
            Q = family_gram(args.family, args.d)
        except DomainError as exc:
            raise CLIError(str(exc), EXIT_INVALID) from None
        echo = {"family": args.family, "d": args.d}
    else:
        raise CLIError("give --gram g00,g01,g11 or --family {L,M} --d <odd int>", EXIT_INVALID)
    if lattice.signature(Q) != (1, 1):
        raise CLIError(f"{Q} has signature {lattice.signature(Q)}; only (1,1) is supported", EXIT_UNSUPPORTED)
    return Q, echo


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _depth(args) -> int:
    return args.depth if args.depth is not None else aut.default_depth()


def build_document(Q: GramForm, echo: dict, depth: int) -> ReportDocument:
    start = time.perf_counter()
    rep = aut.aut_group(Q, depth=depth)
    elapsed = time.perf_counter() - start
    return ReportDocument.from_aut(rep, {**echo, "depth": depth}, elapsed)


def cmd_compute(args) -> int:
    Q, echo = _form_from_args(args)
    doc = build_document(Q, echo, _depth(args))
    _emit(doc.to_json() if args.format == "json" else render_text(doc), args.out)
    return EXIT_OK


def cmd_verify_paper(args) -> int:
    try:
        results = claims.run_case(args.case)
    except DomainError as exc:
        raise CLIError(str(exc), EXIT_INVALID) from None
    counts = claims.summary(results)
    if args.format == "json":
        text = json.dumps({"results": [r.to_json() for r in results], "summary": counts}, indent=2, sort_keys=True) + "\n"
    else:
        lines = [r.line() for r in results]
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in counts.items()))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_FAIL if counts[claims.FAIL] else EXIT_OK


def cmd_oracle(args) -> int:
    if args.bound < 0:
        raise CLIError("--bound must be nonnegative", EXIT_INVALID)
    Q, echo = _form_from_args(args)
    found = lattice.brute_force_isometries(Q, args.bound)
    gens = lattice.isometry_generators(Q)
    ball = aut.word_ball(gens.named, aut.CLOSURE_LENGTH)
    rows = []
    for M in found:
        hit = ball.get(M.entries)
        rows.append({"matrix": list(M.entries), "det": M.det, "word": None if hit is None else aut.render_word(hit[1])})
    matched = sum(r["word"] is not None for r in rows)
    in_box = sorted(e for e in ball if max(map(abs, e)) <= args.bound)
    extra = [list(e) for e in in_box if e not in {M.entries for M in found}]
    if args.format == "json":
        payload = {"input": {**echo, "bound": args.bound}, "isometries": rows, "matched": matched, "words_outside_oracle": extra}
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"isometries of {Q} with entries in [-{args.bound}, {args.bound}]: {len(rows)}"]
        for r in rows:
            a, b, c, d = r["matrix"]
            lines.append(f"  [[{a}, {b}], [{c}, {d}]]  det {r['det']:+d}  = {r['word'] or 'no word of length <= 12'}")
        lines.append(f"matched to generator words: {matched}/{len(rows)}")
        lines.append(f"generator words inside the box but missing from the scan: {len(extra)}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK if matched == len(rows) and not extra else EXIT_FAIL


def cmd_pell(args) -> int:
    D, N = args.D, args.N
    if D < 2 or is_perfect_square(D) is not None:
        raise CLIError(f"D must be a positive non-square, got {D}", EXIT_INVALID)
    if N not in pell.PELL_RHS:
        raise CLIError(f"N must be one of {pell.PELL_RHS}, got {N}", EXIT_INVALID)
    if args.count < 1:
        raise CLIError("--count must be positive", EXIT_INVALID)
    problem = pell.PellProblem(D, N)
    fund = pell.solve_fundamental(problem)
    lines = [f"a^2 - {D} b^2 = {N}"]
    payload: dict = {"D": D, "N": N}
    if fund is None:
        cert = pell.unsolvability_certificate(D, N)
        lines.append(f"unsolvable ({cert})")
        payload.update(solvable=False, certificate=None if cert is None else str(cert))
    else:
        unit = pell.fundamental_unit(D)
        sols = pell.solution_stream(fund, unit, args.count)
        lines.append(f"solvable; fundamental solution ({fund.a}, {fund.b})")
        for s in sols:
            lines.append(f"  ({s.a}, {s.b})  check: {s.a}^2 - {D}*{s.b}^2 = {s.a * s.a - D * s.b * s.b}")
        payload.update(solvable=True, fundamental=[fund.a, fund.b], solutions=[[s.a, s.b] for s in sols])
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _add_form_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=lattice.FAMILIES)
    p.add_argument("--d", type=int)
    p.add_argument("--gram", help="g00,g01,g11")


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="write output to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="k3aut", description="Automorphisms of K3 surfaces with rank-2 Picard lattice")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute the automorphism group report")
    _add_form_args(p)
    _add_output_args(p)
    p.add_argument("--depth", type=int, default=None,
                   help=f"free-product certificate depth (default {aut.DEFAULT_DEPTH}, or $K3AUT_DEPTH)")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify-paper", help="re-check the published L_d and M_d statements")
    p.add_argument("--case", default="all", help="l3, ld:<d>, md:<d> or all")
    _add_output_args(p)
    p.set_defaults(func=cmd_verify_paper)

    p = sub.add_parser("oracle", help="brute-force isometry search and word coverage")
    _add_form_args(p)
    _add_output_args(p)
    p.add_argument("--bound", type=int, default=30)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("pell", help="solve a^2 - D b^2 = N for N in {1, -1, 4, -4}")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--count", type=int, default=3)
    _add_output_args(p)
    p.set_defaults(func=cmd_pell)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"k3aut: error: {exc}", file=sys.stderr)
        return exc.code
    except DomainError as exc:
        print(f"k3aut: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
