"""Ring placement for optimal-dimensionality sampling and conditioning reports.

A scheme assigns each of the L candidate colatitudes

    Omega_t = pi (2t + 1) / (2L - 1),   t = 0 .. L-1

to a ring index k; ring k carries 2k+1 equispaced longitudes.  The order-m
system matrix uses rings |m| .. L-1, so the placement decides how well every
per-order solve is conditioned.
"""
from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidBandlimit, SchemeError, SingularSystemError
from .legendre import legendre_table

__all__ = [
    "METHODS",
    "CandidateGrid",
    "SamplingScheme",
    "ConditionReport",
    "EliminationStep",
    "candidate_grid",
    "design_elimination",
    "design_ascending",
    "design",
    "condition_report",
    "condition_number",
    "order_matrix",
]

log = logging.getLogger(__name__)

METHODS = ("elimination", "ascending")
TIE_RTOL = 1e-12
SINGULAR_FLOOR = 1e-300
GRID_ATOL = 1e-12


def _check_bandlimit(L):
    if isinstance(L, bool) or int(L) != L or L < 1:
        raise InvalidBandlimit(f"band-limit must be a positive integer, got {L!r}")
    return int(L)


@dataclass(frozen=True, eq=False)
class CandidateGrid:
    L: int
    angles: np.ndarray


def candidate_grid(L):
    L = _check_bandlimit(L)
    t = np.arange(L, dtype=float)
    angles = math.pi * (2 * t + 1) / (2 * L - 1)
    # the formula gives pi at t = L-1 only up to rounding; pin it
    angles[-1] = math.pi
    angles.flags.writeable = False
    return CandidateGrid(L, angles)


@dataclass(frozen=True, eq=False)
class SamplingScheme:
    """Ring colatitudes ``theta[k]``; ring k holds 2k+1 longitudes."""

    L: int
    theta: np.ndarray
    method: str

    def __post_init__(self):
        L = _check_bandlimit(self.L)
        theta = np.array(self.theta, dtype=float)
        if theta.shape != (L,):
            raise SchemeError(f"theta must have {L} entries, got shape {theta.shape}")
        if self.method not in METHODS:
            raise SchemeError(f"unknown placement method {self.method!r}")
        grid = candidate_grid(L).angles
        order = np.argsort(theta, kind="stable")
        if np.max(np.abs(theta[order] - grid)) > GRID_ATOL:
            raise SchemeError("theta is not a permutation of the candidate grid")
        # snap onto the exact grid values (keeps the pole exactly at pi)
        snapped = np.empty(L)
        snapped[order] = grid
        snapped.flags.writeable = False
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "theta", snapped)

    @property
    def n_samples(self):
        return self.L * self.L

    def ring_sizes(self):
        return [2 * k + 1 for k in range(self.L)]

    def longitudes(self, k):
        n = 2 * k + 1
        return 2.0 * math.pi * np.arange(n) / n

    def same_as(self, other):
        return (
            self.L == other.L
            and self.method == other.method
            and np.array_equal(self.theta, other.theta)
        )


@dataclass(frozen=True, eq=False)
class ConditionReport:
    L: int
    kappa: np.ndarray
    kappa_max: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "kappa_max", float(np.max(self.kappa)))


@dataclass(frozen=True)
class EliminationStep:
    """One greedy step: order whose matrix was scored, candidates and scores."""

    order: int
    candidates: tuple
    kappas: tuple
    chosen: int


def order_matrix(theta, m, L):
    """P_m with rows theta[|m|:] (ring order) and columns l = |m| .. L-1."""
    theta = np.asarray(theta, dtype=float)
    return legendre_table(m, theta[abs(m):], L)


def condition_number(A):
    """Ratio of extreme singular values; +inf for (numerically) singular A.

    An exactly zero row, which a pole row produces for m != 0, counts as
    singular without consulting the SVD.
    """
    A = np.asarray(A, dtype=float)
    if not np.all(np.any(A != 0.0, axis=-1)):
        return math.inf
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] < SINGULAR_FLOOR:
        return math.inf
    return float(s[0] / s[-1])


def _batched_kappa(stack):
    zero_row = ~np.all(np.any(stack != 0.0, axis=-1), axis=-1)
    s = np.linalg.svd(stack, compute_uv=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        kappa = s[:, 0] / s[:, -1]
    kappa[zero_row | (s[:, -1] < SINGULAR_FLOOR)] = math.inf
    return kappa


def _workers():
    env = os.environ.get("OSHT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            log.warning("ignoring non-integer OSHT_THREADS=%r", env)
    return os.cpu_count() or 1


def _removal_kappas(table):
    """kappa of ``table`` with each row removed in turn."""
    n = table.shape[0]
    keep = np.array([[i for i in range(n) if i != j] for j in range(n)], dtype=int)
    workers = min(_workers(), n)
    if workers <= 1 or n < 16:
        return _batched_kappa(table[keep])
    chunks = np.array_split(np.arange(n), workers)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(lambda idx: _batched_kappa(table[keep[idx]]), chunks)
        return np.concatenate(list(parts))


def pick_removal(kappas):
    """Index of the minimal kappa; ties within TIE_RTOL go to the lower index.

    Candidates are in ascending colatitude, so the lower index is the
    smaller angle.
    """
    best = 0
    for j in range(1, len(kappas)):
        kb, kj = kappas[best], kappas[j]
        if math.isinf(kb) and not math.isinf(kj):
            best = j
        elif not math.isinf(kj) and kj < kb and (kb - kj) > TIE_RTOL * kb:
            best = j
    return best


def design_elimination(L, trace=None):
    """Greedy condition-number minimisation (elimination method).

    At step s the working set holds L - s angles; removing one leaves
    L - s - 1 rows, exactly what P_{s+1} needs.  The removal giving the
    smallest cond(P_{s+1}) is assigned to ring s.  If ``trace`` is a list,
    one :class:`EliminationStep` per step is appended to it.
    """
    L = _check_bandlimit(L)
    remaining = list(candidate_grid(L).angles)
    theta = []
    for s in range(L - 1):
        m = s + 1
        table = legendre_table(m, np.array(remaining), L)
        kappas = _removal_kappas(table)
        j = pick_removal(kappas)
        if trace is not None:
            trace.append(EliminationStep(m, tuple(remaining), tuple(float(k) for k in kappas), j))
        log.debug("L=%d step %d: removed %.6f (kappa=%g)", L, s, remaining[j], kappas[j])
        theta.append(remaining.pop(j))
    theta.append(remaining[0])
    return SamplingScheme(L, np.array(theta), "elimination")


def design_ascending(L):
    L = _check_bandlimit(L)
    return SamplingScheme(L, candidate_grid(L).angles.copy(), "ascending")


def design(L, method):
    if method == "elimination":
        return design_elimination(L)
    if method == "ascending":
        return design_ascending(L)
    raise SchemeError(f"unknown placement method {method!r}")


def condition_report(scheme, allow_singular=False):
    """cond(P_m) for m = 0 .. L-1.

    Raises :class:`SingularSystemError` naming the first singular order
    unless ``allow_singular``, in which case such orders report +inf.
    """
    L = scheme.L
    kappa = np.empty(L)
    for m in range(L):
        kappa[m] = condition_number(order_matrix(scheme.theta, m, L))
        if math.isinf(kappa[m]) and not allow_singular:
            raise SingularSystemError(m, f"P_{m} is singular for the {scheme.method} scheme, L={L}")
    return ConditionReport(L, kappa)
