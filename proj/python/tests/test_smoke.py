import numpy as np
import pytest

import apir

N = 4096
FS = 48000.0
BAND = (100.0, 20000.0)


def test_dft_matches_numpy():
    x = np.random.default_rng(1).standard_normal(256)
    np.testing.assert_allclose(apir.dft(x), np.fft.fft(x), atol=1e-10)
    np.testing.assert_allclose(apir.idft(apir.dft(x)), x, atol=1e-12)


def test_impulse_bins():
    d = apir.band_limited_impulse(8, 8.0, 1.0, 2.0)
    np.testing.assert_array_equal(d, [0, 0.25, 0.25, 0, 0, 0, 0.25, 0.25])


def test_allpass_preserves_magnitude():
    d = apir.band_limited_impulse(N, FS, *BAND)
    phi = apir.linear_chirp_phase(N, FS, *BAND, 0.06)
    r = apir.apply_allpass(d, phi, FS)
    np.testing.assert_allclose(np.abs(r), np.abs(d), rtol=1e-15)
    back = apir.apply_allpass(r, apir.invert_phase(phi, FS), FS)
    np.testing.assert_allclose(back, d, atol=1e-15)


def test_noiseless_recovery():
    r, phi, scale = apir.make_reference(N, FS, *BAND)
    h = apir.random_fir_system(N, FS, 1024, 7)
    y = apir.force_system(h, r, FS)
    truth = np.fft.fft(h)
    res = apir.recover_impulse_model(y, phi, FS, *BAND, reference_scale=scale, truth=truth)
    assert res["in_band_error"] < 1e-9
    assert res["model"].shape == (N,)


def test_naive_division_blows_up_out_of_band():
    phi = apir.linear_chirp_phase(N, FS, *BAND, 0.06)
    r_spec = apir.apply_allpass(apir.band_limited_impulse(N, FS, *BAND), phi, FS)
    h = apir.random_fir_system(N, FS, 256, 3)
    y = apir.force_system(h, apir.idft(r_spec, FS), FS)
    with pytest.raises(apir.DivisionBlowup) as info:
        apir.naive_deconvolve(apir.dft(y, FS), r_spec, fs=FS)
    bins = info.value.args[1]
    assert 0 in bins and N // 2 in bins
    floored = apir.naive_deconvolve(apir.dft(y, FS), r_spec, floor=1e-9, fs=FS)
    assert np.all(np.isfinite(floored))


def test_stacking_and_noise():
    r, _, _ = apir.make_reference(N, FS, *BAND)
    y = apir.force_system(apir.random_fir_system(N, FS, 512, 1), r, FS)
    noisy = apir.add_noise(y, 20.0, 5, FS)
    snr = 10 * np.log10(np.sum(y**2) / np.sum((noisy - y) ** 2))
    assert abs(snr - 20.0) < 0.1
    stacked = apir.stacked_capture(y, 20.0, 16, 5, FS)
    assert np.sum((stacked - y) ** 2) < np.sum((noisy - y) ** 2) / 4


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError, match="f_a"):
        apir.band_limited_impulse(64, 48000.0, 30000.0, 40000.0)
    with pytest.raises(apir.InvalidArgument):
        apir.make_reference(64, 64.0, 4.0, 16.0, sweep="log")
