"""Benchmark harness: random instances, naive-vs-fast timings, tables.

Instance generation is fully deterministic from the configured seed: every
cell derives its own integer seed from a stable hash of the seed and the
cell coordinates, so reruns are bit-identical.  Timings use the monotonic
clock and report the median of the configured trials after one discarded
warm-up run; a cell whose warm-up exceeds the timeout is emitted empty.
Rows run sequentially to keep timings clean; correctness re-checks (not
timings) can run in a thread pool with parallel=True.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import random
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field

import gmpy2

from .densepoly import _mul
from .modular import PrimeField, find_order_element, is_prime
from .rings import FloatPoly, integer_sparse_mul, rational_sparse_mul
from .sparse import (
    QQ,
    ZZ,
    SparsePoly,
    naive_mul,
    sparse_mul_given_support,
    sumset_support,
)
from .series import TruncatedSeries, initial_segment, naive_series_mul, series_mul

DEFAULT_PRIME = 3 * 2**30 + 1

_MODES = ("series", "sparse", "integer")


def stable_seed(*parts) -> int:
    """A process-independent 64-bit seed derived from the given parts."""
    text = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")


def max_exponent_for_field(p: int, nvars: int, requested: int) -> int:
    """Largest input exponent cap so the sumset box volume stays below p.

    Inputs capped at e give sumset exponents up to 2e, hence a radix box
    of volume (2e + 1)**nvars, which must stay within the multiplicative
    group order p - 1 for the evaluation points to remain distinct.
    """
    root = int(gmpy2.iroot(p - 1, nvars)[0])
    cap = (root - 1) // 2
    return max(0, min(requested, cap))


def random_sparse_poly(rng: random.Random, field_or_ring, nvars: int,
                       terms: int, max_exponent: int,
                       coeff_bits: int | None = None) -> SparsePoly:
    """A polynomial with `terms` distinct exponents drawn from a box.

    Over a prime field the coefficients are uniform nonzero residues; over
    ZZ they are nonzero signed integers of at most coeff_bits bits.
    """
    box = (max_exponent + 1) ** nvars
    terms = min(terms, box)
    exps = set()
    while len(exps) < terms:
        exps.add(tuple(rng.randint(0, max_exponent) for _ in range(nvars)))
    pairs = []
    if isinstance(field_or_ring, PrimeField):
        p = field_or_ring.p
        for e in sorted(exps):
            pairs.append((e, rng.randrange(1, p)))
    else:
        bits = coeff_bits or 32
        for e in sorted(exps):
            c = rng.getrandbits(bits) or 1
            if rng.random() < 0.5:
                c = -c
            pairs.append((e, c))
    return SparsePoly(nvars, pairs, field_or_ring)


def random_series(rng: random.Random, field: PrimeField, nvars: int, degree: int) -> TruncatedSeries:
    """A dense-in-segment series with uniform coefficients."""
    size = initial_segment(nvars, degree).size
    p = field.p
    return TruncatedSeries(field, nvars, degree, [rng.randrange(p) for _ in range(size)])


def random_rational_poly(rng: random.Random, nvars: int, terms: int,
                         max_exponent: int, max_den: int = 1 << 16) -> SparsePoly:
    from fractions import Fraction

    exps = set()
    terms = min(terms, (max_exponent + 1) ** nvars)
    while len(exps) < terms:
        exps.add(tuple(rng.randint(0, max_exponent) for _ in range(nvars)))
    pairs = [
        (e, Fraction(rng.randint(-(1 << 20), 1 << 20), rng.randint(1, max_den)))
        for e in sorted(exps)
    ]
    return SparsePoly(nvars, pairs, QQ)


def random_dyadic_float_poly(rng: random.Random, nvars: int, terms: int,
                             max_exponent: int, mantissa_bits: int,
                             precision: int = 53, eta: int = 0) -> FloatPoly:
    """A float polynomial whose coefficients are exact dyadics."""
    exps = set()
    terms = min(terms, (max_exponent + 1) ** nvars)
    while len(exps) < terms:
        exps.add(tuple(rng.randint(0, max_exponent) for _ in range(nvars)))
    pairs = []
    for e in sorted(exps):
        m = rng.randint(1, (1 << mantissa_bits) - 1)
        if rng.random() < 0.5:
            m = -m
        pairs.append((e, math.ldexp(m, rng.randint(-8, 8))))
    return FloatPoly(nvars, pairs, precision=precision, eta=eta)


# ---------------------------------------------------------------------------
# benchmark configuration and rows
# ---------------------------------------------------------------------------


@dataclass
class BenchConfig:
    mode: str = "series"
    nvars: int = 2
    degrees: tuple = (12, 22, 42)
    terms: tuple = (50, 100, 200)
    prime: int = DEFAULT_PRIME
    seed: int = 42
    trials: int = 5
    fmt: str = "csv"
    timeout: float = 60.0
    check: bool = False
    parallel: bool = False
    max_exponent: int = 50
    coeff_bits: int = 128

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {_MODES}")
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.trials < 1:
            raise ValueError("at least one trial is required")
        if self.fmt not in ("csv", "markdown"):
            raise ValueError("format must be csv or markdown")
        self.degrees = tuple(int(d) for d in self.degrees)
        self.terms = tuple(int(t) for t in self.terms)


@dataclass
class BenchRow:
    """One benchmark cell: the size column is the product support size."""

    d: int
    size: int
    naive_ms: float | None
    fast_ms: float | None
    dense_ms: float | None

    CSV_FIELDS = ("d", "size", "naive_ms", "fast_ms", "dense_ms")

    def to_csv_row(self) -> list:
        def cell(v):
            return "" if v is None else repr(v)

        return [str(self.d), str(self.size), cell(self.naive_ms),
                cell(self.fast_ms), cell(self.dense_ms)]

    @classmethod
    def from_csv_row(cls, row: list) -> "BenchRow":
        def num(v):
            return None if v == "" else float(v)

        return cls(d=int(row[0]), size=int(row[1]), naive_ms=num(row[2]),
                   fast_ms=num(row[3]), dense_ms=num(row[4]))


def _timed(fn, trials: int, timeout: float):
    """Median runtime in ms over `trials` runs after one warm-up, or None.

    The warm-up run doubles as the timeout probe: if it exceeds the
    timeout the cell is abandoned.
    """
    t0 = time.perf_counter()
    result = fn()
    warm = time.perf_counter() - t0
    if warm > timeout:
        return None, result
    times = []
    for _ in range(trials):
        t0 = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times) * 1e3, result


def _dense_product_ms(field: PrimeField, size: int, trials: int, seed: int) -> float:
    rng = random.Random(seed)
    a = [rng.randrange(field.p) for _ in range(size)]
    b = [rng.randrange(field.p) for _ in range(size)]
    times = []
    _mul(a, b, field)
    for _ in range(trials):
        t0 = time.perf_counter()
        _mul(a, b, field)
        times.append(time.perf_counter() - t0)
    return statistics.median(times) * 1e3


def run_bench(config: BenchConfig, notices: list | None = None) -> list:
    """Execute the configured benchmark and return one row per cell."""
    field = PrimeField(config.prime)
    rows = []
    checks = []
    if config.mode == "series":
        n = config.nvars
        for d in config.degrees:
            if d ** max(n - 1, 0) > config.prime - 1:
                if notices is not None:
                    notices.append(
                        f"skipped d={d}: d**(n-1) exceeds the group order of F_{config.prime}"
                    )
                continue
            seg_size = initial_segment(n, d).size
            rng = random.Random(stable_seed(config.seed, "series", n, d))
            a = random_series(rng, field, n, d)
            b = random_series(rng, field, n, d)
            w = find_order_element(field, d ** (n - 1))
            fast_ms, fast_res = _timed(lambda: series_mul(a, b, w), config.trials, config.timeout)
            naive_ms, naive_res = _timed(lambda: naive_series_mul(a, b), config.trials, config.timeout)
            dense_ms = _dense_product_ms(field, seg_size, config.trials,
                                         stable_seed(config.seed, "dense", d))
            rows.append(BenchRow(d=d, size=seg_size, naive_ms=naive_ms,
                                 fast_ms=fast_ms, dense_ms=dense_ms))
            if config.check and fast_res is not None and naive_res is not None:
                checks.append((fast_res, naive_res, d))
    else:
        n = config.nvars
        cap = max_exponent_for_field(config.prime, n, config.max_exponent)
        for t in config.terms:
            rng = random.Random(stable_seed(config.seed, config.mode, n, t))
            if config.mode == "sparse":
                a = random_sparse_poly(rng, field, n, t, cap)
                b = random_sparse_poly(rng, field, n, t, cap)
                X = sumset_support(a, b)
                w = find_order_element(field, 1)
                fast_fn = lambda: sparse_mul_given_support(a, b, X, w)
            else:
                a = random_sparse_poly(rng, ZZ, n, t, config.max_exponent,
                                       coeff_bits=config.coeff_bits)
                b = random_sparse_poly(rng, ZZ, n, t, config.max_exponent,
                                       coeff_bits=config.coeff_bits)
                X = sumset_support(a, b)
                fast_fn = lambda: integer_sparse_mul(a, b, X)
            size = len(X)
            fast_ms, fast_res = _timed(fast_fn, config.trials, config.timeout)
            naive_ms, naive_res = _timed(lambda: naive_mul(a, b), config.trials, config.timeout)
            dense_ms = _dense_product_ms(field, size, config.trials,
                                         stable_seed(config.seed, "dense", t))
            rows.append(BenchRow(d=t, size=size, naive_ms=naive_ms,
                                 fast_ms=fast_ms, dense_ms=dense_ms))
            if config.check and fast_res is not None and naive_res is not None:
                checks.append((fast_res, naive_res, t))
    _run_checks(checks, config, notices)
    return rows


def _run_checks(checks, config: BenchConfig, notices):
    if not checks:
        return
    def one(item):
        fast_res, naive_res, label = item
        return label, fast_res == naive_res

    if config.parallel:
        with ThreadPoolExecutor() as pool:
            results = list(pool.map(one, checks))
    else:
        results = [one(c) for c in checks]
    for label, ok in results:
        if not ok:
            raise ArithmeticError(f"fast and naive products disagree at {label}")
        if notices is not None:
            notices.append(f"check ok at {label}")


def render_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(BenchRow.CSV_FIELDS)
    for row in rows:
        writer.writerow(row.to_csv_row())
    return buf.getvalue()


def parse_csv(text: str) -> list:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != BenchRow.CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {header}")
    return [BenchRow.from_csv_row(row) for row in reader if row]


def render_markdown(rows) -> str:
    """A transposed table: one column per cell, one line per measurement."""
    def fmt(v):
        return "" if v is None else f"{v:.3g}"

    header = ["d"] + [str(r.d) for r in rows]
    naive = ["naive (ms)"] + [fmt(r.naive_ms) for r in rows]
    fast = ["fast (ms)"] + [fmt(r.fast_ms) for r in rows]
    size = ["size"] + [str(r.size) for r in rows]
    dense = ["dense product (ms)"] + [fmt(r.dense_ms) for r in rows]
    lines = []
    lines.append("| " + " | ".join(header) + " |")
    lines.append("|" + "---|" * len(header))
    for line in (naive, fast, size, dense):
        lines.append("| " + " | ".join(line) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verification mode
# ---------------------------------------------------------------------------


@dataclass
class VerifyReport:
    lines: list = dataclass_field(default_factory=list)
    passed: int = 0
    failed: int = 0

    def record(self, name: str, ok: int, total: int) -> None:
        self.passed += ok
        self.failed += total - ok
        self.lines.append(f"{name}: {ok}/{total} ok")

    def render(self) -> str:
        tail = "PASS" if self.failed == 0 else f"FAIL ({self.failed} failures)"
        return "\n".join(self.lines + [f"total: {self.passed} passed, {self.failed} failed", tail]) + "\n"


def verify_mode(rings=("fp", "z", "q", "f64"), seed: int = 42,
                instances: int = 20, inject_fault: bool = False) -> VerifyReport:
    """Oracle-equivalence suite across coefficient rings.

    Deterministic for a fixed seed; inject_fault flips one coefficient of
    one fast product to prove the harness detects disagreement.
    """
    report = VerifyReport()
    field = PrimeField(DEFAULT_PRIME)
    if "fp" in rings:
        rng = random.Random(stable_seed(seed, "verify-fp"))
        ok = 0
        for k in range(instances):
            n = rng.randint(1, 4)
            cap = max_exponent_for_field(field.p, n, 30)
            a = random_sparse_poly(rng, field, n, rng.randint(1, 60), cap)
            b = random_sparse_poly(rng, field, n, rng.randint(1, 60), cap)
            X = sumset_support(a, b)
            w = find_order_element(field, 1)
            got = sparse_mul_given_support(a, b, X, w)
            if inject_fault and k == 0 and got.terms:
                e0, c0 = got.terms[0]
                got = SparsePoly(got.nvars,
                                 [(e0, c0 + 1)] + list(got.terms[1:]), got.ring)
            ok += got == naive_mul(a, b)
        report.record("fp sparse", ok, instances)
        ok = 0
        shapes = ((2, 8), (3, 5), (4, 4))
        for n, d in shapes:
            sa = random_series(rng, field, n, d)
            sb = random_series(rng, field, n, d)
            w = find_order_element(field, d ** (n - 1))
            ok += series_mul(sa, sb, w) == naive_series_mul(sa, sb)
        report.record("fp series", ok, len(shapes))
    if "z" in rings:
        rng = random.Random(stable_seed(seed, "verify-z"))
        total = max(instances // 2, 4)
        ok = 0
        for _ in range(total):
            n = rng.randint(1, 3)
            a = random_sparse_poly(rng, ZZ, n, rng.randint(1, 30), 12, coeff_bits=rng.choice((20, 140)))
            b = random_sparse_poly(rng, ZZ, n, rng.randint(1, 30), 12, coeff_bits=rng.choice((20, 140)))
            ok += integer_sparse_mul(a, b) == naive_mul(a, b)
        report.record("z integer", ok, total)
    if "q" in rings:
        rng = random.Random(stable_seed(seed, "verify-q"))
        total = max(instances // 3, 3)
        ok = 0
        for _ in range(total):
            n = rng.randint(1, 2)
            a = random_rational_poly(rng, n, rng.randint(1, 15), 8)
            b = random_rational_poly(rng, n, rng.randint(1, 15), 8)
            expected = naive_mul(a, b)
            ok += (rational_sparse_mul(a, b) == expected
                   and rational_sparse_mul(a, b, heuristic=True) == expected)
        report.record("q rational", ok, total)
    if "f64" in rings:
        rng = random.Random(stable_seed(seed, "verify-f64"))
        total = max(instances // 2, 4)
        ok = 0
        for _ in range(total):
            n = rng.randint(1, 2)
            a = random_dyadic_float_poly(rng, n, rng.randint(1, 12), 6, mantissa_bits=20)
            b = random_dyadic_float_poly(rng, n, rng.randint(1, 12), 6, mantissa_bits=20)
            got = float_mul_check(a, b)
            ok += got
        report.record("f64 float", ok, total)
    return report


def float_mul_check(a: FloatPoly, b: FloatPoly) -> bool:
    """Compare the float product against an exact rational oracle."""
    from fractions import Fraction

    from .rings import _round_to_precision, float_sparse_mul

    got = float_sparse_mul(a, b)
    acc: dict = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            k = tuple(x + y for x, y in zip(ea, eb))
            acc[k] = acc.get(k, Fraction(0)) + Fraction(ca) * Fraction(cb)
    want = sorted(
        (e, _round_to_precision(v, min(a.precision, b.precision)))
        for e, v in acc.items()
        if v
    )
    return list(got.terms) == [t for t in want if t[1] != 0.0]
