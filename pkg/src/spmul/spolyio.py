"""SPOLY 1 text format for polynomials, series and support sets.

The first non-comment line is the header; `#` starts a comment anywhere
and blank lines are ignored.  Header forms:

    p <modulus> n <nvars>            prime-field coefficients
    ring z n <nvars>                 integer coefficients
    ring q n <nvars>                 rational coefficients, written a/b
    ring f64 eta <eta> n <nvars>     binary64 floating coefficients

A truncated series additionally carries `trunc <d>` at the end of the
header and must use a prime-field header.  Every following line is one
term: nvars space-separated exponents and then the coefficient.  Floats
are written with repr, which round-trips binary64 exactly.  Support files
use the header `n <nvars>` and exponent-only rows.
"""

from __future__ import annotations

import io
from fractions import Fraction

from .modular import PrimeField
from .rings import FloatPoly
from .series import TruncatedSeries
from .sparse import QQ, ZZ, SparsePoly, SupportSet


def _header_tokens(obj) -> list:
    if isinstance(obj, TruncatedSeries):
        return ["p", str(obj.field.p), "n", str(obj.nvars), "trunc", str(obj.degree)]
    if isinstance(obj, FloatPoly):
        return ["ring", "f64", "eta", str(obj.eta), "n", str(obj.nvars)]
    if isinstance(obj, SparsePoly):
        if isinstance(obj.ring, PrimeField):
            return ["p", str(obj.ring.p), "n", str(obj.nvars)]
        if obj.ring is ZZ:
            return ["ring", "z", "n", str(obj.nvars)]
        if obj.ring is QQ:
            return ["ring", "q", "n", str(obj.nvars)]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _term_lines(obj):
    if isinstance(obj, TruncatedSeries):
        seg = obj.segment()
        for exp, c in zip(seg.exponents, obj.coeffs):
            if c:
                yield " ".join(map(str, exp)) + f" {c}"
        return
    if isinstance(obj, FloatPoly):
        for exp, c in obj.terms:
            yield " ".join(map(str, exp)) + f" {c!r}"
        return
    for exp, c in obj.terms:
        yield " ".join(map(str, exp)) + f" {c}"


def dump_spoly(obj, f) -> None:
    """Write a polynomial or series to a text file object or path."""
    if isinstance(f, (str, bytes)):
        with open(f, "w") as handle:
            dump_spoly(obj, handle)
        return
    f.write(" ".join(_header_tokens(obj)) + "\n")
    for line in _term_lines(obj):
        f.write(line + "\n")


def dumps_spoly(obj) -> str:
    buf = io.StringIO()
    dump_spoly(obj, buf)
    return buf.getvalue()


def _content_lines(f):
    for raw in f:
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def _parse_header(tokens: list) -> dict:
    kv = {}
    if tokens and tokens[0] == "ring":
        kv["ring"] = tokens[1]
        tokens = tokens[2:]
    it = iter(tokens)
    for key in it:
        kv[key] = next(it)
    return kv


def load_spoly(f):
    """Read a polynomial or series; the return type follows the header."""
    if isinstance(f, (str, bytes)):
        with open(f) as handle:
            return load_spoly(handle)
    lines = _content_lines(f)
    try:
        header = next(lines)
    except StopIteration:
        raise ValueError("empty SPOLY file") from None
    kv = _parse_header(header.split())
    if "n" not in kv:
        raise ValueError(f"header {header!r} lacks the variable count")
    nvars = int(kv["n"])

    if "p" in kv:
        field = PrimeField(int(kv["p"]))
        terms = [(exp, int(c)) for exp, c in _read_terms(lines, nvars)]
        if "trunc" in kv:
            return TruncatedSeries.from_terms(field, nvars, int(kv["trunc"]), terms)
        return SparsePoly(nvars, terms, field)
    ring = kv.get("ring")
    if ring == "z":
        return SparsePoly(nvars, [(e, int(c)) for e, c in _read_terms(lines, nvars)], ZZ)
    if ring == "q":
        return SparsePoly(
            nvars, [(e, Fraction(c)) for e, c in _read_terms(lines, nvars)], QQ
        )
    if ring == "f64":
        eta = int(kv.get("eta", 0))
        terms = [(e, float(c)) for e, c in _read_terms(lines, nvars)]
        return FloatPoly(nvars, terms, eta=eta)
    raise ValueError(f"unrecognized SPOLY header {header!r}")


def _read_terms(lines, nvars: int):
    for line in lines:
        parts = line.split()
        if len(parts) != nvars + 1:
            raise ValueError(
                f"term line {line!r} should hold {nvars} exponents and a coefficient"
            )
        yield tuple(int(e) for e in parts[:nvars]), parts[nvars]


def dump_support(X: SupportSet, f) -> None:
    """Write a support set: header `n <nvars>`, one exponent row per line."""
    if isinstance(f, (str, bytes)):
        with open(f, "w") as handle:
            dump_support(X, handle)
        return
    f.write(f"n {X.nvars}\n")
    for exp in X.exponents:
        f.write(" ".join(map(str, exp)) + "\n")


def load_support(f) -> SupportSet:
    if isinstance(f, (str, bytes)):
        with open(f) as handle:
            return load_support(handle)
    lines = _content_lines(f)
    try:
        header = next(lines).split()
    except StopIteration:
        raise ValueError("empty support file") from None
    if len(header) != 2 or header[0] != "n":
        raise ValueError("support header must be `n <nvars>`")
    nvars = int(header[1])
    exps = []
    for line in lines:
        parts = line.split()
        if len(parts) != nvars:
            raise ValueError(f"support row {line!r} should hold {nvars} exponents")
        exps.append(tuple(int(e) for e in parts))
    return SupportSet(nvars, exps)
