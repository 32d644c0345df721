"""Wavelet log-scale estimation of long-range dependence (Hurst exponent)."""

__version__ = "0.1.0"

from .dwt import DetailPyramid, WaveletFilter, coeff_count, daubechies_filter, dwt_pyramid
from .estimator import (
    EstimationError,
    HurstFit,
    LogscaleDiagram,
    LogscalePoint,
    Memory,
    classify_memory,
    estimate,
    goodness_of_fit,
    hurst_from_alpha,
    logscale_diagram,
    select_alignment,
    wavelet_variance,
    wls_fit,
)
from .ingest import (
    IngestError,
    PriceSeries,
    ReturnSeries,
    abs_returns,
    dyadic_window,
    load_raw_series,
    load_series,
    log_returns,
)
from .synth import (
    FgnSpec,
    SpectralConstant,
    fbm_from_fgn,
    fgn_autocovariance,
    generate_fgn,
    generate_white_noise,
    replicate_rng,
    spectral_constant,
)
