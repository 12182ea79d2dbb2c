"""Optimal-dimensionality spherical harmonic transforms.

Ring placement by greedy condition-number elimination, the per-order
iterative SHT with ring aliasing correction, and a multi-pass refinement.
"""
from .errors import (
    DimensionMismatch,
    FileFormatError,
    InvalidBandlimit,
    InvalidDegreeOrder,
    OracleCapExceeded,
    OshtError,
    SchemeError,
    SingularSystemError,
)
from .legendre import legendre_table, scaled_legendre, scaled_legendre_column, spherical_harmonic
from .multipass import MultipassResult, multipass_sht, residual
from .sampling import (
    CandidateGrid,
    ConditionReport,
    SamplingScheme,
    candidate_grid,
    condition_report,
    design,
    design_ascending,
    design_elimination,
)
from .transform import (
    HarmonicCoeffs,
    OrderSystem,
    RingSpectrum,
    SpatialSignal,
    build_Pm,
    dense_lsq_sht,
    forward_sht,
    inverse_sht,
    ring_dft,
)

__version__ = "0.1.0"
