"""EMI waveform and timing tests."""

import numpy as np
import pytest
from pydantic import ValidationError

from emiclean.core.fourier import ifft2c
from emiclean.sim.schemas import EmiKind, EmiScenario
from emiclean.sim.waveforms import acquisition_times, expected_emi_location, gen_emi_waveform, instantaneous_frequency
from tests.conftest import DWELL_S, TONE_HZ, TONE_PIXEL, TR_S


def test_acquisition_times():
    """t[k, j] = start + j TR + k dwell."""
    t = acquisition_times(4, 3, dwell_s=1e-5, tr_s=0.05, start_s=2.0)
    assert t.shape == (4, 3)
    assert t[0, 0] == 2.0
    assert t[3, 2] == pytest.approx(2.0 + 2 * 0.05 + 3 * 1e-5)
    assert np.all(np.diff(t, axis=0) > 0)


# ── Scenarios ────────────────────────────────────────────────────────────


def test_none_is_zero():
    wave = gen_emi_waveform(EmiScenario(kind=EmiKind.NONE, amplitude=3.0), np.linspace(0, 1, 10))
    assert not wave.any()


def test_tone_at_zero_offset():
    """A zero-offset tone is the constant 1 + 0i."""
    wave = gen_emi_waveform(EmiScenario(kind=EmiKind.TONE, f_offset_hz=0.0), acquisition_times(8, 8, DWELL_S, TR_S))
    np.testing.assert_array_equal(wave, np.ones((8, 8), dtype=complex))


def test_amplitude_scales():
    t = np.linspace(0, 1e-3, 50)
    base = gen_emi_waveform(EmiScenario(kind=EmiKind.TONE, f_offset_hz=1000.0), t)
    loud = gen_emi_waveform(EmiScenario(kind=EmiKind.TONE, f_offset_hz=1000.0, amplitude=4.0), t)
    np.testing.assert_allclose(loud, 4.0 * base)


def test_square_flips_every_50_us():
    """A 10 kHz square envelope changes sign every 50 microseconds."""
    t = np.arange(200) * 1e-6 + 0.5e-6
    wave = gen_emi_waveform(EmiScenario(kind=EmiKind.SQUARE_AM, f_offset_hz=0.0, mod_rate_hz=10_000.0), t)
    expected = np.where((np.arange(200) // 50) % 2 == 0, 1.0, -1.0)
    np.testing.assert_array_equal(wave.real, expected)


def test_white_am_needs_generator():
    with pytest.raises(ValueError):
        gen_emi_waveform(EmiScenario(kind=EmiKind.WHITE_AM), np.zeros(4))


def test_white_am_seeded():
    """Same seed, same envelope; the carrier magnitude follows the Gaussian envelope."""
    scenario = EmiScenario(kind=EmiKind.WHITE_AM, f_offset_hz=500.0)
    t = np.linspace(0, 0.01, 1000)
    a = gen_emi_waveform(scenario, t, np.random.default_rng(9))
    b = gen_emi_waveform(scenario, t, np.random.default_rng(9))
    np.testing.assert_array_equal(a, b)
    np.testing.assert_allclose(np.abs(a), np.abs(np.random.default_rng(9).standard_normal(1000)))


def test_sweep_span():
    """A +-10 kHz, 1 Hz sweep covers [f - 10k, f + 10k] once per second."""
    scenario = EmiScenario(kind=EmiKind.SWEEP, f_offset_hz=2_000.0, sweep_span_hz=10_000.0, sweep_rate_hz=1.0)
    t = np.linspace(0.0, 1.0, 100_001)
    f = instantaneous_frequency(scenario, t)
    assert f.min() == pytest.approx(-8_000.0, abs=1.0)
    assert f.max() == pytest.approx(12_000.0, abs=1.0)
    np.testing.assert_allclose(instantaneous_frequency(scenario, t + 1.0), f, atol=1e-6)


def test_sweep_phase_matches_frequency():
    """The phase increment between close samples matches the instantaneous frequency."""
    scenario = EmiScenario(kind=EmiKind.SWEEP, f_offset_hz=0.0, sweep_span_hz=10_000.0)
    dt = 1e-7
    for t0 in (0.1, 0.3, 0.6, 0.9):
        pair = gen_emi_waveform(scenario, np.array([t0, t0 + dt]))
        measured = np.angle(pair[1] / pair[0]) / (2 * np.pi * dt)
        assert measured == pytest.approx(instantaneous_frequency(scenario, np.array([t0 + dt / 2]))[0], rel=1e-3)


def test_sweep_needs_span():
    with pytest.raises(ValidationError):
        EmiScenario(kind=EmiKind.SWEEP, sweep_span_hz=0.0)


def test_inactive_scenarios():
    assert not EmiScenario(kind=EmiKind.NONE, amplitude=5.0).active
    assert not EmiScenario(kind=EmiKind.TONE, amplitude=0.0).active
    assert EmiScenario(kind=EmiKind.TONE).active


# ── Image-domain location ────────────────────────────────────────────────


def test_expected_location():
    """The grid-aligned tone maps to pixel (2, 48)."""
    assert expected_emi_location(TONE_HZ, 64, 64, DWELL_S, TR_S) == TONE_PIXEL
    assert expected_emi_location(0.0, 64, 64, DWELL_S, TR_S) == (32, 32)


def test_tone_lands_on_expected_pixel():
    """ifft2c of the sampled tone puts its energy on the predicted pixel."""
    scenario = EmiScenario(kind=EmiKind.TONE, f_offset_hz=TONE_HZ)
    wave = gen_emi_waveform(scenario, acquisition_times(64, 64, DWELL_S, TR_S))
    image = np.abs(ifft2c(wave)) ** 2
    assert np.unravel_index(image.argmax(), image.shape) == TONE_PIXEL
    assert image[TONE_PIXEL] / image.sum() > 0.999


def test_square_am_concentrated_in_column():
    """Square AM with an integer number of periods per TR stays in the tone's column."""
    scenario = EmiScenario(kind=EmiKind.SQUARE_AM, f_offset_hz=TONE_HZ, mod_rate_hz=10_000.0)
    times = acquisition_times(64, 64, DWELL_S, TR_S, start_s=DWELL_S / 4)
    energy = np.abs(ifft2c(gen_emi_waveform(scenario, times))) ** 2
    assert energy[:, TONE_PIXEL[1]].sum() / energy.sum() >= 0.9
