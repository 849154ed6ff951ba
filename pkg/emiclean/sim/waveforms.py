"""EMI waveforms sampled on the acquisition time grid.

Sample k of phase-encode line j is acquired at start + j * TR + k * dwell,
so a narrow-band interferer folds into a band of image columns whose
position follows from its frequency, the dwell time and TR.
"""

import numpy as np

from emiclean.sim.schemas import EmiKind, EmiScenario


def acquisition_times(kx: int, ky: int, dwell_s: float, tr_s: float, start_s: float = 0.0) -> np.ndarray:
    """Sample times in seconds, shape (kx, ky)."""
    k = np.arange(kx)[:, None]
    j = np.arange(ky)[None, :]
    return start_s + j * tr_s + k * dwell_s


def _carrier(f_hz: float, t: np.ndarray) -> np.ndarray:
    return np.exp(2j * np.pi * np.mod(f_hz * t, 1.0))


def _square(rate_hz: float, t: np.ndarray) -> np.ndarray:
    # +1 on the first half of each period, like sign(sin(2 pi f t))
    return np.where(np.mod(rate_hz * t, 1.0) < 0.5, 1.0, -1.0)


def _triangle(u: np.ndarray) -> np.ndarray:
    return np.where(u < 0.5, 4.0 * u - 1.0, 3.0 - 4.0 * u)


def _triangle_integral(u: np.ndarray) -> np.ndarray:
    return np.where(u < 0.5, 2.0 * u**2 - u, -2.0 * u**2 + 3.0 * u - 1.0)


def instantaneous_frequency(scenario: EmiScenario, t: np.ndarray) -> np.ndarray:
    """Baseband frequency in Hz of the interferer at times ``t``."""
    t = np.asarray(t, dtype=np.float64)
    if scenario.kind == EmiKind.SWEEP:
        u = np.mod(scenario.sweep_rate_hz * t, 1.0)
        return scenario.f_offset_hz + scenario.sweep_span_hz * _triangle(u)
    return np.full_like(t, scenario.f_offset_hz)


def gen_emi_waveform(
    scenario: EmiScenario,
    times: np.ndarray,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Complex interferer at ``times``, scaled by the scenario amplitude.

    Raises ValueError if white_am is requested without a generator.
    """
    t = np.asarray(times, dtype=np.float64)
    if scenario.kind == EmiKind.NONE:
        return np.zeros(t.shape, dtype=np.complex128)

    f0 = scenario.f_offset_hz
    if scenario.kind == EmiKind.TONE:
        wave = _carrier(f0, t)
    elif scenario.kind == EmiKind.SQUARE_AM:
        wave = _carrier(f0, t) * _square(scenario.mod_rate_hz, t)
    elif scenario.kind == EmiKind.WHITE_AM:
        if rng is None:
            raise ValueError("white_am needs a seeded random generator")
        wave = _carrier(f0, t) * rng.standard_normal(t.shape)
    elif scenario.kind == EmiKind.SWEEP:
        u = np.mod(scenario.sweep_rate_hz * t, 1.0)
        cycles = f0 * t + (scenario.sweep_span_hz / scenario.sweep_rate_hz) * _triangle_integral(u)
        wave = np.exp(2j * np.pi * np.mod(cycles, 1.0))
    else:
        raise ValueError(f"unknown EMI kind {scenario.kind}")
    return scenario.amplitude * wave


def expected_emi_location(f_hz: float, kx: int, ky: int, dwell_s: float, tr_s: float) -> tuple[int, int]:
    """Image (row, column) where a pure tone at ``f_hz`` lands after ifft2c.

    Exact when f * dwell * kx and f * TR * ky are integers; otherwise the
    nearest grid location of the (spread) peak.
    """
    readout_cycles = f_hz * dwell_s * kx
    line_cycles = np.mod(f_hz * tr_s * ky, ky)
    row = int(np.mod(kx // 2 - round(readout_cycles), kx))
    col = int(np.mod(ky // 2 - round(line_cycles), ky))
    return row, col
