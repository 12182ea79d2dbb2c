import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ascending_scheme, elimination_scheme
from oracles import direct_synthesis
from osht.errors import DimensionMismatch, InvalidDegreeOrder, OracleCapExceeded, SingularSystemError
from osht.legendre import scaled_legendre
from osht.transform import (
    HarmonicCoeffs,
    SpatialSignal,
    build_Pm,
    dense_lsq_sht,
    flat_index,
    forward_sht,
    inverse_sht,
    order_system,
    ring_dft,
    synthesize_direct,
)


def random_coeffs(L, seed):
    rng = np.random.default_rng(seed)
    return HarmonicCoeffs(L, rng.random(L * L) + 1j * rng.random(L * L))


def ring_signal(L, k, func):
    samples = np.zeros(L * L, dtype=complex)
    sig = SpatialSignal.from_flat(L, samples)
    rings = list(sig.rings)
    phi = 2 * math.pi * np.arange(2 * k + 1) / (2 * k + 1)
    rings[k] = func(phi)
    return SpatialSignal(L, tuple(rings))


# containers -----------------------------------------------------------------

def test_flat_index_layout():
    seen = [flat_index(l, m) for l in range(6) for m in range(-l, l + 1)]
    assert seen == list(range(36))


def test_containers_validate():
    with pytest.raises(DimensionMismatch):
        HarmonicCoeffs(3, np.zeros(8))
    with pytest.raises(DimensionMismatch):
        SpatialSignal(2, (np.zeros(1), np.zeros(2)))
    with pytest.raises(DimensionMismatch):
        SpatialSignal.from_flat(3, np.zeros(10))
    with pytest.raises(InvalidDegreeOrder):
        HarmonicCoeffs.indicator(3, 3, 0)


# build_Pm --------------------------------------------------------------------

def test_build_Pm_last_order():
    s = elimination_scheme(6)
    P = build_Pm(s, 5)
    assert P.shape == (1, 1)
    assert P[0, 0] == scaled_legendre(5, 5, s.theta[5])


def test_build_Pm_L2_order0():
    s = elimination_scheme(2)
    P = build_Pm(s, 0)
    t0, t1 = s.theta
    expected = [
        [scaled_legendre(0, 0, t0), scaled_legendre(1, 0, t0)],
        [scaled_legendre(0, 0, t1), scaled_legendre(1, 0, t1)],
    ]
    np.testing.assert_array_equal(P, expected)


@pytest.mark.parametrize("m", range(1, 10))
def test_build_Pm_negative_order(m):
    s = elimination_scheme(10)
    np.testing.assert_array_equal(build_Pm(s, -m), (-1) ** m * build_Pm(s, m))


def test_build_Pm_invalid_order():
    with pytest.raises(InvalidDegreeOrder):
        build_Pm(elimination_scheme(4), 4)


# ring_dft ----------------------------------------------------------------------

def test_ring_dft_single_exponential():
    sig = ring_signal(5, 3, lambda phi: np.exp(2j * phi))
    D = ring_dft(sig, 3)
    assert D.D.shape == (7,)
    for m in range(-3, 4):
        assert abs(D[m] - (2 * math.pi if m == 2 else 0)) < 1e-13


def test_ring_dft_aliasing():
    sig = ring_signal(5, 1, lambda phi: np.exp(3j * phi))
    D = ring_dft(sig, 1)
    assert abs(D[0] - 2 * math.pi) < 1e-13
    assert abs(D[1]) < 1e-13 and abs(D[-1]) < 1e-13


def test_ring_dft_constant():
    sig = ring_signal(5, 4, lambda phi: np.full(phi.shape, 2.5 - 1j))
    D = ring_dft(sig, 4)
    assert abs(D[0] - 2 * math.pi * (2.5 - 1j)) < 1e-13
    assert np.max(np.abs(np.delete(D.D, 4))) < 1e-13


def test_ring_dft_direct_sum_agreement():
    rng = np.random.default_rng(0)
    L = 40
    sig = SpatialSignal.from_flat(L, rng.normal(size=L * L) + 1j * rng.normal(size=L * L))
    for k in (0, 5, 31, 39):
        n = 2 * k + 1
        phi = 2 * math.pi * np.arange(n) / n
        for m in range(-k, k + 1):
            direct = 2 * math.pi / n * np.sum(sig.rings[k] * np.exp(-1j * m * phi))
            assert abs(ring_dft(sig, k)[m] - direct) < 1e-12


def test_ring_dft_aliasing_identity():
    # D_m(theta_k) = sum_{m' = m mod 2k+1} G_{m'}(theta_k)
    L = 9
    s = elimination_scheme(L)
    c = random_coeffs(L, 4)
    sig = inverse_sht(s, c)
    for k in (0, 2, 4):
        n = 2 * k + 1
        for m in range(-k, k + 1):
            total = 0
            for mp in range(-(L - 1), L):
                if (mp - m) % n == 0:
                    total += 2 * math.pi * sum(
                        c[l, mp] * scaled_legendre(l, mp, s.theta[k]) for l in range(abs(mp), L)
                    )
            assert abs(ring_dft(sig, k)[m] - total) < 1e-12


# inverse ---------------------------------------------------------------------

def test_inverse_indicator_00():
    s = elimination_scheme(6)
    sig = inverse_sht(s, HarmonicCoeffs.indicator(6, 0, 0))
    np.testing.assert_allclose(sig.flat(), 1 / math.sqrt(4 * math.pi), rtol=1e-14)


def test_inverse_zero():
    s = elimination_scheme(6)
    assert np.all(inverse_sht(s, HarmonicCoeffs.zeros(6)).flat() == 0)


def test_inverse_fold_matches_direct_sum():
    s = elimination_scheme(12)
    c = random_coeffs(12, 5)
    fast = inverse_sht(s, c).flat()
    assert np.max(np.abs(fast - synthesize_direct(s, c).flat())) <= 1e-12
    assert np.max(np.abs(fast - direct_synthesis(s, c.values))) <= 1e-12


def test_inverse_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        inverse_sht(elimination_scheme(4), HarmonicCoeffs.zeros(5))


# forward ---------------------------------------------------------------------

def test_forward_L1_constant():
    s = elimination_scheme(1)
    sig = SpatialSignal.from_flat(1, [3.0 - 2j])
    f = forward_sht(s, sig)
    assert abs(f.values[0] - (3.0 - 2j) * math.sqrt(4 * math.pi)) < 1e-14


def test_round_trip_L16():
    s = elimination_scheme(16)
    c = random_coeffs(16, 11)
    assert forward_sht(s, inverse_sht(s, c)).max_abs_diff(c) <= 1e-10


@pytest.mark.parametrize("lm", [(0, 0), (3, -2), (7, 7), (7, -7), (5, 0), (6, 4)])
def test_indicator_recovery(lm):
    L = 8
    s = elimination_scheme(L)
    c = HarmonicCoeffs.indicator(L, *lm)
    assert forward_sht(s, inverse_sht(s, c)).max_abs_diff(c) <= 1e-10


@pytest.mark.parametrize("L", [2, 4, 8, 16, 32])
def test_round_trip_elimination(L):
    s = elimination_scheme(L)
    for seed in range(3):
        c = random_coeffs(L, seed)
        assert forward_sht(s, inverse_sht(s, c)).max_abs_diff(c) <= 1e-8


@pytest.mark.parametrize("L", [2, 4, 8])
def test_ascending_forward_is_singular(L):
    s = ascending_scheme(L)
    with pytest.raises(SingularSystemError):
        forward_sht(s, inverse_sht(s, random_coeffs(L, 0)))


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_round_trip_property(L, seed):
    s = elimination_scheme(L)
    c = random_coeffs(L, seed)
    assert forward_sht(s, inverse_sht(s, c)).max_abs_diff(c) <= 1e-11


def test_forward_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        forward_sht(elimination_scheme(4), SpatialSignal.zeros(3))


def test_order_system_consistency():
    L = 10
    s = elimination_scheme(L)
    c = random_coeffs(L, 8)
    sig = inverse_sht(s, c)
    for m in range(-(L - 1), L):
        sysm = order_system(s, sig, m)
        expected = [
            2 * math.pi * sum(c[l, m] * scaled_legendre(l, m, s.theta[k]) for l in range(abs(m), L))
            for k in range(abs(m), L)
        ]
        np.testing.assert_allclose(sysm.gm, expected, rtol=0, atol=1e-10)
        assert sysm.Pm.shape == (L - abs(m), L - abs(m))


@given(st.integers(0, 2**32 - 1), st.complex_numbers(max_magnitude=10), st.complex_numbers(max_magnitude=10))
def test_linearity(seed, a, b):
    L = 8
    s = elimination_scheme(L)
    rng = np.random.default_rng(seed)
    x = SpatialSignal.from_flat(L, rng.normal(size=L * L) + 1j * rng.normal(size=L * L))
    y = SpatialSignal.from_flat(L, rng.normal(size=L * L) + 1j * rng.normal(size=L * L))
    lhs = forward_sht(s, a * x + b * y)
    rhs = a * forward_sht(s, x) + b * forward_sht(s, y)
    assert lhs.max_abs_diff(rhs) <= 1e-10


@pytest.mark.parametrize("L", [5, 12])
def test_real_signal_conjugate_symmetry(L):
    s = elimination_scheme(L)
    sig = inverse_sht(s, random_coeffs(L, 2))
    real = SpatialSignal.from_flat(L, sig.flat().real)
    f = forward_sht(s, real)
    for l in range(L):
        for m in range(1, l + 1):
            assert abs(f[l, -m] - (-1) ** m * np.conj(f[l, m])) <= 1e-9


# dense oracle ----------------------------------------------------------------

def test_dense_oracle_agrees_L16():
    s = elimination_scheme(16)
    for seed in range(2):
        sig = inverse_sht(s, random_coeffs(16, 100 + seed))
        assert dense_lsq_sht(s, sig).max_abs_diff(forward_sht(s, sig)) <= 1e-8


def test_dense_oracle_indicator_L8():
    s = elimination_scheme(8)
    for lm in [(0, 0), (4, -3), (7, 6)]:
        c = HarmonicCoeffs.indicator(8, *lm)
        assert dense_lsq_sht(s, inverse_sht(s, c)).max_abs_diff(c) <= 1e-10


def test_dense_oracle_zero_and_cap():
    s = elimination_scheme(4)
    assert np.all(dense_lsq_sht(s, SpatialSignal.zeros(4)).values == 0)
    with pytest.raises(OracleCapExceeded):
        dense_lsq_sht(elimination_scheme(6), SpatialSignal.zeros(6), cap=5)
