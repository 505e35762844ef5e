"""Command-line interface.

Subcommands:

* ``expand``  -- emit one coefficient table (JSON, CSV, or LaTeX),
* ``verify``  -- run verification suites and persist deterministic reports,
* ``table``   -- LaTeX rendering shortcut for ``expand``.

All output is exact-rational and fully determined by the flags; ``verify``
writes its reports under ``reports/<command>/<seed>/`` so that two runs with
the same seed and configuration produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import closed_forms, oracle
from .algebra import CoeffTable
from .rationals import PoleError, SampleExhausted
from .serialization import jsonable, table_to_csv, table_to_json, table_to_latex
from .verifier import SUITES, SuiteConfig, run_equivalence_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from exc


def _default_threads() -> int:
    env = os.environ.get("ORJUHL_THREADS")
    if env is not None and env.isdigit() and int(env) >= 1:
        return int(env)
    return os.cpu_count() or 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orjuhl",
        description="Exact symbolic expansion and verification of conformal "
        "operator coefficient tables.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker count (env ORJUHL_THREADS; execution is sequential, the "
        "flag only caps planned parallelism)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_expand_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("subject", choices=["gjms", "or", "linear", "dml"])
        p.add_argument("--k", type=int, help="order parameter k (gjms/or/linear)")
        p.add_argument("--n", type=_rational, help="dimension parameter n (or)")
        p.add_argument("--ell", type=_rational, help="weight parameter (linear)")
        p.add_argument("--m", type=int, help="operator length M (dml)")
        p.add_argument("--l", type=_rational, help="index parameter L (dml)")
        p.add_argument("--n-exp", type=int, default=0, help="power exponent N (dml)")
        p.add_argument(
            "--with-f", action="store_true", help="insert the formal function f (dml)"
        )
        p.add_argument(
            "--source",
            choices=["oracle", "closed-form"],
            default="oracle",
            help="expansion engine (default: oracle)",
        )
        p.add_argument("--output", type=Path, help="output file (default: stdout)")

    p_expand = sub.add_parser("expand", help="emit one coefficient table")
    add_expand_flags(p_expand)
    p_expand.add_argument(
        "--format", choices=["json", "csv", "latex"], default="json"
    )

    p_table = sub.add_parser("table", help="LaTeX rendering of one table")
    add_expand_flags(p_table)

    p_verify = sub.add_parser("verify", help="run verification suites")
    p_verify.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--samples", type=int)
    p_verify.add_argument("--max-k", type=int)
    p_verify.add_argument("--max-m", type=int)
    p_verify.add_argument("--max-u", type=int)
    p_verify.add_argument("--max-v", type=int)
    p_verify.add_argument("--max-weight", type=int)
    p_verify.add_argument("--margin", type=int)
    p_verify.add_argument(
        "--report-dir", type=Path, default=Path("reports"), help="report root"
    )
    return parser


def _require(args: argparse.Namespace, parser: argparse.ArgumentParser, *names: str):
    values = []
    for name in names:
        v = getattr(args, name)
        if v is None:
            parser.error(f"subject {args.subject!r} requires --{name.replace('_', '-')}")
        values.append(v)
    return values


def _expand_table(args: argparse.Namespace, parser: argparse.ArgumentParser) -> CoeffTable:
    use_oracle = args.source == "oracle"
    if args.subject == "gjms":
        (k,) = _require(args, parser, "k")
        return oracle.oracle_P2k(k) if use_oracle else closed_forms.cf_P2k(k)
    if args.subject == "or":
        k, n = _require(args, parser, "k", "n")
        return oracle.oracle_D2k(k, n) if use_oracle else closed_forms.cf_D2k(k, n)
    if args.subject == "linear":
        k, ell = _require(args, parser, "k", "ell")
        return oracle.oracle_D2kI(k, ell) if use_oracle else closed_forms.cf_D2kI(k, ell)
    m, l = _require(args, parser, "m", "l")
    if args.with_f:
        fn = oracle.oracle_DML_PN_f if use_oracle else closed_forms.cf_DML_PN_f
    else:
        fn = oracle.oracle_DML_PN if use_oracle else closed_forms.cf_DML_PN
    return fn(m, l, args.n_exp)


def _render(table: CoeffTable, fmt: str) -> str:
    if fmt == "json":
        return table_to_json(table)
    if fmt == "csv":
        return table_to_csv(table)
    return table_to_latex(table) + "\n"


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text)


def cmd_expand(args, parser, fmt: str) -> int:
    try:
        table = _expand_table(args, parser)
    except PoleError as exc:
        print(f"pole error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(_render(table, fmt), args.output)
    return EXIT_OK


def cmd_verify(args, parser) -> int:
    overrides = {}
    for field, flag in [
        ("samples", "samples"),
        ("max_k", "max_k"),
        ("max_m", "max_m"),
        ("max_weight", "max_weight"),
        ("margin", "margin"),
    ]:
        v = getattr(args, flag)
        if v is not None:
            overrides[field] = v
    if args.max_u is not None:
        overrides["max_u"] = args.max_u
        overrides["max_u_bilinear"] = args.max_u
    if args.max_v is not None:
        overrides["max_v"] = args.max_v
        overrides["max_v_bilinear"] = args.max_v
    cfg = SuiteConfig(seed=args.seed, **overrides)
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    try:
        records = run_equivalence_suite(cfg, names)
    except (PoleError, SampleExhausted) as exc:
        print(f"sampling failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out_dir = args.report_dir / "verify" / str(args.seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    all_passed = True
    for record in records:
        passed = record["passed"]
        all_passed = all_passed and passed
        path = out_dir / f"{record['suite']}.json"
        path.write_text(json.dumps(jsonable(record), indent=2, sort_keys=True) + "\n")
        print(f"{record['suite']}: {'pass' if passed else 'FAIL'} "
              f"({len(record['cells'])} cells) -> {path}")
    return EXIT_OK if all_passed else EXIT_FAIL


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # --threads is honored as a cap but execution stays single-threaded so
    # that report bytes are reproducible across machines.
    args.threads = args.threads if args.threads else _default_threads()
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    if args.command == "expand":
        return cmd_expand(args, parser, args.format)
    if args.command == "table":
        return cmd_expand(args, parser, "latex")
    return cmd_verify(args, parser)


if __name__ == "__main__":
    sys.exit(main())
