"""Scaled associated Legendre functions and spherical harmonics.

``P~_l^m(theta) = Y_l^m(theta, 0)``: orthonormal on the sphere, Condon-Shortley
phase included.  Evaluation uses the fixed-order ascending-degree recurrence

    P~_m^m     = (-1)^m sqrt((2m+1)/(4 pi) * prod_{i<=m} (2i-1)/(2i)) sin^m theta
    P~_{m+1}^m = sqrt(2m+3) cos theta P~_m^m
    P~_l^m     = a_lm (cos theta P~_{l-1}^m - b_lm P~_{l-2}^m)

with every value carried as a (mantissa, binary exponent) pair.  Rescaling
is by exact powers of two, so the mantissa arithmetic rounds exactly as the
unscaled recurrence would while intermediates never over- or underflow.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidBandlimit, InvalidDegreeOrder

__all__ = [
    "scaled_legendre",
    "scaled_legendre_column",
    "legendre_table",
    "spherical_harmonic",
]

_FOUR_PI = 4.0 * math.pi
_SHIFT = 400
_BIG = 2.0 ** _SHIFT
_SMALL = 2.0 ** -_SHIFT


def _check_bandlimit(L):
    if int(L) != L or L < 1:
        raise InvalidBandlimit(f"band-limit must be a positive integer, got {L!r}")


def _recurrence(m, theta, L):
    """Rows l = m..L-1 of P~_l^m at the colatitudes ``theta`` (m >= 0).

    Returns an array of shape (L - m, len(theta)).
    """
    theta = np.asarray(theta, dtype=float)
    n = L - m
    out = np.zeros((n, theta.size))
    x = np.cos(theta)
    pole = (theta == 0.0) | (theta == math.pi)
    # cos is not exactly +-1 at the float nearest pi; pin it
    x = np.where(theta == 0.0, 1.0, np.where(theta == math.pi, -1.0, x))

    mant = np.full(theta.size, 1.0 / math.sqrt(_FOUR_PI))
    expo = np.zeros(theta.size, dtype=int)
    if m > 0:
        s = np.sin(theta)
        for i in range(1, m + 1):
            mant = -math.sqrt((2.0 * i + 1.0) / (2.0 * i)) * s * mant
            small = np.abs(mant) < _SMALL
            if small.any():
                mant = np.where(small, mant * _BIG, mant)
                expo = np.where(small, expo - _SHIFT, expo)
        mant = np.where(pole, 0.0, mant)
        expo = np.where(pole, 0, expo)

    def emit(row, mant, expo):
        out[row] = np.ldexp(mant, expo)

    emit(0, mant, expo)
    if n == 1:
        return out
    prev2 = mant
    prev1 = math.sqrt(2 * m + 3) * x * mant
    emit(1, prev1, expo)
    for row in range(2, n):
        l = m + row
        a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
        b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
        cur = a * (x * prev1 - b * prev2)
        big = np.abs(cur) >= _BIG
        if big.any():
            cur = np.where(big, cur / _BIG, cur)
            prev1 = np.where(big, prev1 / _BIG, prev1)
            expo = np.where(big, expo + _SHIFT, expo)
        emit(row, cur, expo)
        prev2, prev1 = prev1, cur
    return out


def _sign(m):
    return -1.0 if (m < 0 and m % 2) else 1.0


def scaled_legendre_column(m, theta, L):
    """P~_l^m(theta) for l = |m| .. L-1 as a 1-D array."""
    _check_bandlimit(L)
    if abs(m) >= L:
        raise InvalidDegreeOrder(f"order |m|={abs(m)} must be < L={L}")
    col = _recurrence(abs(m), np.atleast_1d(float(theta)), L)[:, 0]
    return col * _sign(m)


def scaled_legendre(l, m, theta):
    """P~_l^m(theta) = Y_l^m(theta, 0)."""
    if l < 0 or abs(m) > l:
        raise InvalidDegreeOrder(f"need 0 <= |m| <= l, got l={l}, m={m}")
    return float(scaled_legendre_column(m, theta, l + 1)[-1])


def legendre_table(m, theta, L):
    """Matrix T[i, j] = P~_{|m|+j}^m(theta[i]), shape (len(theta), L-|m|)."""
    _check_bandlimit(L)
    if abs(m) >= L:
        raise InvalidDegreeOrder(f"order |m|={abs(m)} must be < L={L}")
    return _recurrence(abs(m), np.atleast_1d(np.asarray(theta, dtype=float)), L).T * _sign(m)


def spherical_harmonic(l, m, theta, phi):
    return scaled_legendre(l, m, theta) * complex(math.cos(m * phi), math.sin(m * phi))
