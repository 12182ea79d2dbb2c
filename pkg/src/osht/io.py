"""Scheme (JSON), coefficient and signal (CSV) file formats.

Floats are written with 17 significant digits so every value round-trips.
"""
from __future__ import annotations

import csv
import json
import math

import numpy as np

from .errors import FileFormatError, SchemeError
from .sampling import METHODS, SamplingScheme
from .transform import HarmonicCoeffs, SpatialSignal, flat_index

__all__ = [
    "fmt_float",
    "write_scheme",
    "read_scheme",
    "write_coeffs",
    "read_coeffs",
    "write_signal",
    "read_signal",
]


def fmt_float(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def scheme_to_json(scheme):
    theta = ", ".join(fmt_float(t) for t in scheme.theta)
    return f'{{"bandlimit": {scheme.L}, "method": "{scheme.method}", "theta": [{theta}]}}\n'


def write_scheme(scheme, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scheme_to_json(scheme))


def read_scheme(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FileFormatError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise FileFormatError(path, None, "expected a JSON object")
    missing = {"bandlimit", "method", "theta"} - doc.keys()
    if missing:
        raise FileFormatError(path, None, f"missing keys: {', '.join(sorted(missing))}")
    L, method, theta = doc["bandlimit"], doc["method"], doc["theta"]
    if not isinstance(L, int) or isinstance(L, bool) or L < 1:
        raise FileFormatError(path, None, f"bandlimit must be a positive integer, got {L!r}")
    if method not in METHODS:
        raise FileFormatError(path, None, f"method must be one of {METHODS}, got {method!r}")
    if not isinstance(theta, list) or not all(
        isinstance(t, (int, float)) and not isinstance(t, bool) for t in theta
    ):
        raise FileFormatError(path, None, "theta must be a list of numbers")
    try:
        return SamplingScheme(L, np.array(theta, dtype=float), method)
    except SchemeError as exc:
        raise FileFormatError(path, None, str(exc)) from None


def _read_rows(path, header):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        first = next(reader, None)
        if first is None:
            raise FileFormatError(path, 1, "empty file")
        if [h.strip() for h in first] != header:
            raise FileFormatError(path, 1, f"expected header {','.join(header)}, got {','.join(first)}")
        for row in reader:
            if not row:
                continue
            if len(row) != len(header):
                raise FileFormatError(path, reader.line_num, f"expected {len(header)} fields, got {len(row)}")
            yield reader.line_num, row


def _parse_int(path, line, s, name):
    try:
        return int(s)
    except ValueError:
        raise FileFormatError(path, line, f"{name} must be an integer, got {s!r}") from None


def _parse_float(path, line, s, name):
    try:
        v = float(s)
    except ValueError:
        raise FileFormatError(path, line, f"{name} must be a number, got {s!r}") from None
    if not math.isfinite(v):
        raise FileFormatError(path, line, f"{name} must be finite, got {s!r}")
    return v


def write_coeffs(coeffs, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("l,m,re,im\n")
        for l in range(coeffs.L):
            for m in range(-l, l + 1):
                v = coeffs.values[flat_index(l, m)]
                fh.write(f"{l},{m},{fmt_float(v.real)},{fmt_float(v.imag)}\n")


def read_coeffs(path):
    values = []
    for idx, (line, row) in enumerate(_read_rows(path, ["l", "m", "re", "im"])):
        l = _parse_int(path, line, row[0], "l")
        m = _parse_int(path, line, row[1], "m")
        if l < 0 or abs(m) > l:
            raise FileFormatError(path, line, f"invalid degree/order (l={l}, m={m})")
        if flat_index(l, m) != idx:
            raise FileFormatError(path, line, f"rows must be sorted by l^2+l+m; expected index {idx}")
        values.append(complex(_parse_float(path, line, row[2], "re"), _parse_float(path, line, row[3], "im")))
    n = len(values)
    L = math.isqrt(n)
    if n == 0 or L * L != n:
        raise FileFormatError(path, None, f"coefficient count {n} is not a positive square")
    return HarmonicCoeffs(L, np.array(values))


def write_signal(signal, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write("ring,j,re,im\n")
        for k, ring in enumerate(signal.rings):
            for j, v in enumerate(ring):
                fh.write(f"{k},{j},{fmt_float(v.real)},{fmt_float(v.imag)}\n")


def read_signal(path):
    values = []
    k, j = 0, 0
    for line, row in _read_rows(path, ["ring", "j", "re", "im"]):
        rk = _parse_int(path, line, row[0], "ring")
        rj = _parse_int(path, line, row[1], "j")
        if (rk, rj) != (k, j):
            raise FileFormatError(path, line, f"expected ring={k}, j={j} (ring-major order), got ring={rk}, j={rj}")
        values.append(complex(_parse_float(path, line, row[2], "re"), _parse_float(path, line, row[3], "im")))
        j += 1
        if j == 2 * k + 1:
            k, j = k + 1, 0
    n = len(values)
    L = math.isqrt(n)
    if n == 0 or L * L != n or j != 0:
        raise FileFormatError(path, None, f"sample count {n} does not fill complete rings")
    return SpatialSignal.from_flat(L, np.array(values))
