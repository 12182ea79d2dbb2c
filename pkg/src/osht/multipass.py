"""Multi-pass SHT: transform the synthesis residual and accumulate corrections."""
from __future__ import annotations

from dataclasses import dataclass, field

from .transform import HarmonicCoeffs, SpatialSignal, _check_bound, _Tables, forward_sht, inverse_sht

__all__ = ["MultipassResult", "residual", "multipass_sht", "DEFAULT_MAX_PASSES"]

DEFAULT_MAX_PASSES = 20


@dataclass(frozen=True, eq=False)
class MultipassResult:
    coeffs: HarmonicCoeffs
    passes: int
    residual_history: list
    # coefficient iterate after each accepted pass, first pass included
    iterates: list = field(default_factory=list, repr=False)


def residual(scheme, signal, coeffs, _tables=None):
    """r = f - sum f~_lm Y_l^m at every sample of ``scheme``."""
    _check_bound(scheme, signal, "signal")
    _check_bound(scheme, coeffs, "coefficients")
    return signal - inverse_sht(scheme, coeffs, _tables=_tables)


def multipass_sht(scheme, signal: SpatialSignal, max_passes=DEFAULT_MAX_PASSES, keep_iterates=False, _tables=None):
    """Refine ``forward_sht`` until the max-abs residual stops decreasing.

    Stops at the first pass whose residual is not strictly smaller than its
    predecessor's (a tie counts as no progress) or after ``max_passes``;
    the returned coefficients are the last accepted iterate.
    """
    if max_passes < 1:
        raise ValueError(f"max_passes must be >= 1, got {max_passes}")
    tables = _tables or _Tables(scheme)
    coeffs = forward_sht(scheme, signal, _tables=tables)
    r = residual(scheme, signal, coeffs, _tables=tables)
    history = [r.max_abs()]
    iterates = [coeffs] if keep_iterates else []

    while len(history) < max_passes:
        candidate = coeffs + forward_sht(scheme, r, _tables=tables)
        r_next = residual(scheme, signal, candidate, _tables=tables)
        if not r_next.max_abs() < history[-1]:
            break
        coeffs, r = candidate, r_next
        history.append(r.max_abs())
        if keep_iterates:
            iterates.append(coeffs)

    assert all(b < a for a, b in zip(history, history[1:]))
    return MultipassResult(coeffs, len(history), history, iterates)
