"""Command line interface: bench, verify and multiply subcommands.

Exit codes: 0 on success, 1 on verification failure, 2 on bad arguments
or unusable inputs.
"""

from __future__ import annotations

import argparse
import sys

from .bench import BenchConfig, render_csv, render_markdown, run_bench, verify_mode
from .modular import PrimeField, find_order_element
from .rings import FloatPoly, float_sparse_mul, integer_sparse_mul, rational_sparse_mul
from .series import TruncatedSeries, series_mul
from .sparse import (
    QQ,
    ZZ,
    SparsePoly,
    _radices_over,
    sparse_mul_given_support,
    sumset_support,
)
from .spolyio import dump_spoly, load_spoly, load_support


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(",") if part)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spmul",
        description="Sparse polynomial and truncated series products: "
        "benchmarks, verification and one-shot file products.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("bench", help="time naive vs fast products")
    b.add_argument("--mode", choices=("series", "sparse", "integer"), default="series")
    b.add_argument("--vars", type=int, default=2, dest="nvars")
    b.add_argument("--degrees", type=_int_list, default=(12, 22, 42),
                   help="comma-separated truncation orders (series mode)")
    b.add_argument("--terms", type=_int_list, default=(50, 100, 200),
                   help="comma-separated term counts (sparse/integer modes)")
    b.add_argument("--prime", type=int, default=3 * 2**30 + 1)
    b.add_argument("--seed", type=int, default=42)
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--format", choices=("csv", "markdown"), default="csv", dest="fmt")
    b.add_argument("--out", default=None, help="output path (default stdout)")
    b.add_argument("--timeout", type=float, default=60.0,
                   help="seconds before a cell is emitted empty")
    b.add_argument("--max-exponent", type=int, default=50, dest="max_exponent")
    b.add_argument("--coeff-bits", type=int, default=128, dest="coeff_bits")
    b.add_argument("--check", action="store_true",
                   help="re-check fast results against the naive product")
    b.add_argument("--parallel", action="store_true",
                   help="run correctness checks (never timings) in parallel")

    v = sub.add_parser("verify", help="oracle-equivalence suite")
    v.add_argument("--ring", choices=("fp", "z", "q", "f64", "all"), default="all")
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--instances", type=int, default=20)
    v.add_argument("--inject-fault", action="store_true", dest="inject_fault",
                   help="flip one coefficient to prove the harness catches it")

    m = sub.add_parser("multiply", help="multiply two SPOLY files")
    m.add_argument("--in", dest="inputs", action="append", required=True,
                   help="input SPOLY path (give exactly twice)")
    m.add_argument("--out", required=True, help="output SPOLY path")
    m.add_argument("--support", default=None,
                   help="optional support file bounding the product support")
    return parser


def _cmd_bench(args) -> int:
    try:
        config = BenchConfig(
            mode=args.mode, nvars=args.nvars, degrees=args.degrees,
            terms=args.terms, prime=args.prime, seed=args.seed,
            trials=args.trials, fmt=args.fmt, timeout=args.timeout,
            check=args.check, parallel=args.parallel,
            max_exponent=args.max_exponent, coeff_bits=args.coeff_bits,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    notices: list = []
    rows = run_bench(config, notices)
    for notice in notices:
        print(f"note: {notice}", file=sys.stderr)
    if not rows:
        print("error: every cell was skipped", file=sys.stderr)
        return 1
    text = render_csv(rows) if config.fmt == "csv" else render_markdown(rows)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    rings = ("fp", "z", "q", "f64") if args.ring == "all" else (args.ring,)
    report = verify_mode(rings=rings, seed=args.seed, instances=args.instances,
                         inject_fault=args.inject_fault)
    sys.stdout.write(report.render())
    return 0 if report.failed == 0 else 1


def _multiply(a, b, support):
    if type(a) is not type(b):
        raise ValueError("inputs must share one SPOLY header form")
    if support is not None and not isinstance(a, SparsePoly):
        raise ValueError("support files apply to sparse polynomial products only")
    if isinstance(a, TruncatedSeries):
        if (a.field.p, a.nvars, a.degree) != (b.field.p, b.nvars, b.degree):
            raise ValueError("series shapes differ")
        w = find_order_element(a.field, a.degree ** (a.nvars - 1))
        return series_mul(a, b, w)
    if isinstance(a, FloatPoly):
        return float_sparse_mul(a, b)
    assert isinstance(a, SparsePoly)
    if isinstance(a.ring, PrimeField):
        if not isinstance(b.ring, PrimeField) or a.ring.p != b.ring.p:
            raise ValueError("moduli differ")
        X = support if support is not None else sumset_support(a, b)
        km = _radices_over(
            (X.exponents, (e for e, _ in a.terms), (e for e, _ in b.terms)), a.nvars
        )
        w = find_order_element(a.ring, km.total)
        return sparse_mul_given_support(a, b, X, w)
    if a.ring is ZZ:
        return integer_sparse_mul(a, b, support)
    if a.ring is QQ:
        return rational_sparse_mul(a, b, support)
    raise ValueError("unsupported ring")


def _cmd_multiply(args) -> int:
    if len(args.inputs) != 2:
        print("error: give --in exactly twice", file=sys.stderr)
        return 2
    try:
        a = load_spoly(args.inputs[0])
        b = load_spoly(args.inputs[1])
        support = load_support(args.support) if args.support else None
        result = _multiply(a, b, support)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    dump_spoly(result, args.out)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bench":
        return _cmd_bench(args)
    if args.command == "verify":
        return _cmd_verify(args)
    return _cmd_multiply(args)


if __name__ == "__main__":
    sys.exit(main())
