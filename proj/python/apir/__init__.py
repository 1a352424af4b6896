"""Band-limited impulse excitation and allpass-chirp FIR identification."""

from ._apir import (
    ApirError,
    DivisionBlowup,
    InvalidArgument,
    add_noise,
    apply_allpass,
    band_limited_impulse,
    dft,
    force_system,
    idft,
    in_band_error,
    invert_phase,
    linear_chirp_phase,
    make_reference,
    naive_deconvolve,
    random_fir_system,
    recover_impulse_model,
    stacked_capture,
    time_domain_impulse,
)

__all__ = [
    "ApirError",
    "DivisionBlowup",
    "InvalidArgument",
    "add_noise",
    "apply_allpass",
    "band_limited_impulse",
    "dft",
    "force_system",
    "idft",
    "in_band_error",
    "invert_phase",
    "linear_chirp_phase",
    "make_reference",
    "naive_deconvolve",
    "random_fir_system",
    "recover_impulse_model",
    "stacked_capture",
    "time_domain_impulse",
]
