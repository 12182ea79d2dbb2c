"""Forward and inverse spherical harmonic transforms on optimal-dimensionality schemes.

Coefficients are stored flat: ``f[l*l + l + m]`` for 0 <= l < L, |m| <= l.
Signals are ragged: ring k holds 2k+1 complex samples at longitudes
2 pi j / (2k+1).

The forward transform works through orders |m| = L-1 .. 0.  The ring DFT on
ring k only resolves orders modulo 2k+1, so the bin for order m also carries
every m' = m (mod 2k+1) with |m'| < L.  All such m' satisfy |m'| > k >= |m|
and have been solved already; their contribution is subtracted before the
order-m system is assembled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, InvalidDegreeOrder, OracleCapExceeded, SingularSystemError
from .legendre import legendre_table
from .sampling import SINGULAR_FLOOR, SamplingScheme, order_matrix

__all__ = [
    "HarmonicCoeffs",
    "SpatialSignal",
    "OrderSystem",
    "RingSpectrum",
    "flat_index",
    "build_Pm",
    "ring_dft",
    "order_system",
    "forward_sht",
    "inverse_sht",
    "synthesize_direct",
    "dense_lsq_sht",
    "ORACLE_CAP",
]

ORACLE_CAP = 32
TWO_PI = 2.0 * math.pi


def flat_index(l, m):
    return l * l + l + m


@dataclass(frozen=True, eq=False)
class HarmonicCoeffs:
    L: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.L * self.L,):
            raise DimensionMismatch(
                f"expected {self.L * self.L} coefficients for L={self.L}, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, L):
        return cls(L, np.zeros(L * L, dtype=complex))

    @classmethod
    def indicator(cls, L, l, m):
        if not (0 <= l < L and abs(m) <= l):
            raise InvalidDegreeOrder(f"(l={l}, m={m}) outside band-limit L={L}")
        c = np.zeros(L * L, dtype=complex)
        c[flat_index(l, m)] = 1.0
        return cls(L, c)

    def __getitem__(self, lm):
        l, m = lm
        return self.values[flat_index(l, m)]

    def order(self, m):
        """f_m = [f_{|m|,m}, ..., f_{L-1,m}]."""
        ls = np.arange(abs(m), self.L)
        return self.values[ls * ls + ls + m]

    def __add__(self, other):
        _same_L(self.L, other.L)
        return HarmonicCoeffs(self.L, self.values + other.values)

    def __sub__(self, other):
        _same_L(self.L, other.L)
        return HarmonicCoeffs(self.L, self.values - other.values)

    def __mul__(self, a):
        return HarmonicCoeffs(self.L, self.values * a)

    __rmul__ = __mul__

    def max_abs_diff(self, other):
        _same_L(self.L, other.L)
        return float(np.max(np.abs(self.values - other.values)))


@dataclass(frozen=True, eq=False)
class SpatialSignal:
    L: int
    rings: tuple

    def __post_init__(self):
        rings = tuple(np.asarray(r, dtype=complex) for r in self.rings)
        if len(rings) != self.L:
            raise DimensionMismatch(f"expected {self.L} rings, got {len(rings)}")
        for k, r in enumerate(rings):
            if r.shape != (2 * k + 1,):
                raise DimensionMismatch(f"ring {k} must hold {2 * k + 1} samples, got shape {r.shape}")
        object.__setattr__(self, "rings", rings)

    @classmethod
    def from_flat(cls, L, samples):
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != (L * L,):
            raise DimensionMismatch(f"expected {L * L} samples for L={L}, got shape {samples.shape}")
        # ring k occupies [k^2, (k+1)^2)
        return cls(L, tuple(samples[k * k:(k + 1) * (k + 1)] for k in range(L)))

    @classmethod
    def zeros(cls, L):
        return cls.from_flat(L, np.zeros(L * L, dtype=complex))

    def flat(self):
        return np.concatenate(self.rings)

    def max_abs(self):
        return float(np.max(np.abs(self.flat())))

    def __add__(self, other):
        _same_L(self.L, other.L)
        return SpatialSignal.from_flat(self.L, self.flat() + other.flat())

    def __sub__(self, other):
        _same_L(self.L, other.L)
        return SpatialSignal.from_flat(self.L, self.flat() - other.flat())

    def __mul__(self, a):
        return SpatialSignal.from_flat(self.L, self.flat() * a)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class OrderSystem:
    m: int
    Pm: np.ndarray
    gm: np.ndarray


@dataclass(frozen=True, eq=False)
class RingSpectrum:
    """D[m + k] = D_m(theta_k) for m = -k .. k."""

    k: int
    D: np.ndarray

    def __getitem__(self, m):
        if abs(m) > self.k:
            raise InvalidDegreeOrder(f"ring {self.k} resolves |m| <= {self.k}, got m={m}")
        return self.D[m + self.k]


def _same_L(a, b):
    if a != b:
        raise DimensionMismatch(f"band-limit mismatch: {a} != {b}")


def _check_bound(scheme, obj, what):
    if obj.L != scheme.L:
        raise DimensionMismatch(f"{what} has band-limit {obj.L}, scheme has {scheme.L}")


def build_Pm(scheme: SamplingScheme, m: int) -> np.ndarray:
    """P_m(i, j) = P~_{|m|+j}^m(theta_{|m|+i}) (0-based)."""
    if abs(m) >= scheme.L:
        raise InvalidDegreeOrder(f"order |m|={abs(m)} must be < L={scheme.L}")
    return order_matrix(scheme.theta, m, scheme.L)


def ring_dft(signal: SpatialSignal, k: int) -> RingSpectrum:
    """D_m = (2 pi / n) sum_j f_j exp(-i m phi_j), |m| <= k, n = 2k+1."""
    if not 0 <= k < signal.L:
        raise DimensionMismatch(f"ring index {k} outside 0..{signal.L - 1}")
    n = 2 * k + 1
    spec = np.fft.fft(signal.rings[k]) * (TWO_PI / n)
    ms = np.arange(-k, k + 1)
    return RingSpectrum(k, spec[ms % n])


class _Tables:
    """Legendre values P~_l^m(theta_k) for all rings, m >= 0.

    ``tab[m]`` has shape (L, L-m): row k is ring k, column j is degree m+j.
    """

    def __init__(self, scheme):
        self.L = scheme.L
        self.tab = [legendre_table(m, scheme.theta, scheme.L) for m in range(scheme.L)]

    def ring_values(self, m, rings):
        t = self.tab[abs(m)][rings]
        return -t if (m < 0 and m % 2) else t


def _fold_bins(L, k):
    """Orders |m'| < L grouped by their bin m' mod (2k+1)."""
    n = 2 * k + 1
    ms = np.arange(-(L - 1), L)
    return ms, ms % n


def forward_sht(scheme: SamplingScheme, signal: SpatialSignal, _tables=None, _trace=None) -> HarmonicCoeffs:
    """Recover the L^2 coefficients from samples on ``scheme``.

    ``_trace``, if a dict, receives the assembled g_m vectors keyed by m.
    """
    _check_bound(scheme, signal, "signal")
    L = scheme.L
    tables = _tables or _Tables(scheme)
    n_of = [2 * k + 1 for k in range(L)]
    # bins[k][b]: ring-k DFT bin b, progressively stripped of aliased orders
    bins = [np.fft.fft(signal.rings[k]) * (TWO_PI / n_of[k]) for k in range(L)]
    out = np.zeros(L * L, dtype=complex)

    for mabs in range(L - 1, -1, -1):
        rings = np.arange(mabs, L)
        P = tables.ring_values(mabs, rings)
        if not np.all(np.any(P != 0.0, axis=1)):
            raise SingularSystemError(mabs)
        try:
            lu = scipy.linalg.lu_factor(P, check_finite=False)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise SingularSystemError(mabs) from exc
        if np.min(np.abs(np.diag(lu[0]))) < SINGULAR_FLOOR:
            raise SingularSystemError(mabs)

        orders = (mabs,) if mabs == 0 else (mabs, -mabs)
        g = np.empty((L - mabs, len(orders)), dtype=complex)
        for c, m in enumerate(orders):
            g[:, c] = [bins[k][m % n_of[k]] for k in rings]
            if _trace is not None:
                _trace[m] = g[:, c].copy()
        # g_m carries the 2 pi of the ring integral: g_m = 2 pi P_m f_m
        sol = scipy.linalg.lu_solve(lu, g / TWO_PI, check_finite=False)
        ls = np.arange(mabs, L)
        for c, m in enumerate(orders):
            # P_{-m} = (-1)^m P_m
            fm = sol[:, c] * (-1.0 if (m < 0 and mabs % 2) else 1.0)
            out[ls * ls + ls + m] = fm
            if mabs == 0:
                continue
            # strip this order from rings that cannot resolve it
            alias_rings = np.arange(0, min(mabs, L))
            if alias_rings.size:
                vals = TWO_PI * (tables.ring_values(m, alias_rings) @ fm)
                for k, v in zip(alias_rings, vals):
                    assert abs(m) > k
                    bins[k][m % n_of[k]] -= v
    return HarmonicCoeffs(L, out)


def order_system(scheme, signal, m):
    """The assembled order-m system (P_m, g_m) as forward_sht sees it."""
    trace = {}
    forward_sht(scheme, signal, _trace=trace)
    return OrderSystem(m, build_Pm(scheme, m), trace[m])


def inverse_sht(scheme: SamplingScheme, coeffs: HarmonicCoeffs, _tables=None) -> SpatialSignal:
    """Synthesis by folding orders into ring bins and an inverse DFT per ring."""
    _check_bound(scheme, coeffs, "coefficients")
    L = scheme.L
    tables = _tables or _Tables(scheme)
    # G[k, m + L - 1] = sum_l f_{l,m} P~_l^m(theta_k)
    G = np.zeros((L, 2 * L - 1), dtype=complex)
    all_rings = np.arange(L)
    for mabs in range(L):
        for m in ((mabs,) if mabs == 0 else (mabs, -mabs)):
            G[:, m + L - 1] = tables.ring_values(m, all_rings) @ coeffs.order(m)
    rings = []
    ms = np.arange(-(L - 1), L)
    for k in range(L):
        n = 2 * k + 1
        b = np.zeros(n, dtype=complex)
        np.add.at(b, ms % n, G[k])
        rings.append(np.fft.ifft(b) * n)
    return SpatialSignal(L, tuple(rings))


def synthesize_direct(scheme, coeffs):
    """Pointwise sum of f_lm Y_l^m over every sample; O(L^4), reference path."""
    _check_bound(scheme, coeffs, "coefficients")
    return SpatialSignal.from_flat(scheme.L, _design_matrix(scheme) @ coeffs.values)


def _design_matrix(scheme):
    L = scheme.L
    A = np.zeros((L * L, L * L), dtype=complex)
    for mabs in range(L):
        tab = legendre_table(mabs, scheme.theta, L)
        for m in ((mabs,) if mabs == 0 else (mabs, -mabs)):
            t = -tab if (m < 0 and mabs % 2) else tab
            cols = np.array([flat_index(l, m) for l in range(mabs, L)])
            for k in range(L):
                phi = scheme.longitudes(k)
                rows = slice(k * k, (k + 1) * (k + 1))
                A[rows, cols] = np.exp(1j * m * phi)[:, None] * t[k][None, :]
    return A


def dense_lsq_sht(scheme, signal, cap=ORACLE_CAP):
    """Least-squares solve of the full L^2 x L^2 system; test oracle only."""
    _check_bound(scheme, signal, "signal")
    if scheme.L > cap:
        raise OracleCapExceeded(f"dense oracle capped at L={cap}, got L={scheme.L}")
    A = _design_matrix(scheme)
    f, *_ = np.linalg.lstsq(A, signal.flat(), rcond=None)
    return HarmonicCoeffs(scheme.L, f)
