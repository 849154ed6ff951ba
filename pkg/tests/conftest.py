import numpy as np
import pytest

from emiclean.sim.phantom import make_phantom
from emiclean.sim.schemas import CouplingModel, EmiKind, EmiScenario

# Grid-aligned tone for 64 x 64 at dwell 10 us, TR 50 ms: 30 readout cycles,
# 150000 line cycles (48 mod 64), so it lands exactly on image pixel (2, 48).
TONE_HZ = 46_875.0
TONE_PIXEL = (2, 48)
DWELL_S = 1e-5
TR_S = 0.05


@pytest.fixture
def rng():
    """Seeded generator so every test draws the same numbers."""
    return np.random.default_rng(1234)


@pytest.fixture
def disc64():
    """64 x 64 uniform disc; row 2 is background."""
    return make_phantom("uniform_disc", 64)


@pytest.fixture
def tone_scenario():
    return EmiScenario(kind=EmiKind.TONE, f_offset_hz=TONE_HZ, amplitude=5.0)


@pytest.fixture
def noiseless_coupling():
    """Four coils, two sensors, no thermal noise."""
    return CouplingModel(
        coil_gains=[0.8 + 0.3j, -0.5j, 1.2, 0.4 - 0.9j],
        sensor_gains=[1.0, 0.5j],
        signal_gains=[1.0, 0.9 - 0.2j, 0.7j, 0.5],
        sigma_img=0.0,
        sigma_emi=0.0,
        dwell_s=DWELL_S,
        tr_s=TR_S,
    )


def complex_normal(rng: np.random.Generator, shape, scale: float = 1.0) -> np.ndarray:
    """Complex Gaussian with std ``scale`` per real component."""
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def relative_error(actual: np.ndarray, expected: np.ndarray) -> float:
    return float(np.linalg.norm(actual - expected) / np.linalg.norm(expected))
