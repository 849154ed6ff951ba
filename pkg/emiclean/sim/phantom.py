"""Synthetic test objects with intensities in [0, 1] on an n x n grid centered at n // 2."""

from dataclasses import dataclass

import numpy as np

from emiclean.sim.schemas import PhantomKind


@dataclass(frozen=True)
class Phantom:
    kind: PhantomKind
    intensity: np.ndarray

    @property
    def n(self) -> int:
        return self.intensity.shape[0]


def _radius_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    offsets = np.arange(n) - n // 2
    return np.meshgrid(offsets, offsets, indexing="ij")


def _disc(x: np.ndarray, y: np.ndarray, cx: float, cy: float, radius: float) -> np.ndarray:
    return (x - cx) ** 2 + (y - cy) ** 2 <= radius**2


def _uniform_disc(n: int) -> np.ndarray:
    x, y = _radius_grid(n)
    return _disc(x, y, 0.0, 0.0, 0.4 * n).astype(np.float64)


def _contrast_discs(n: int) -> np.ndarray:
    x, y = _radius_grid(n)
    img = 0.4 * _disc(x, y, 0.0, 0.0, 0.4 * n)
    levels = np.linspace(0.55, 1.0, 6)
    for k, level in enumerate(levels):
        angle = 2.0 * np.pi * k / len(levels)
        cx, cy = 0.22 * n * np.cos(angle), 0.22 * n * np.sin(angle)
        img[_disc(x, y, cx, cy, max(0.07 * n, 1.0))] = level
    return img


def _resolution_dots(n: int) -> np.ndarray:
    x, y = _radius_grid(n)
    img = 0.3 * _disc(x, y, 0.0, 0.0, 0.4 * n)
    pitches = sorted({max(2, round(p * n / 64)) for p in (6, 4, 3, 2)}, reverse=True)
    for k, pitch in enumerate(pitches):
        angle = 2.0 * np.pi * k / len(pitches) + np.pi / 4
        cx = int(round(n // 2 + 0.2 * n * np.cos(angle)))
        cy = int(round(n // 2 + 0.2 * n * np.sin(angle)))
        for i in (-1, 0, 1):
            for j in (-1, 0, 1):
                img[np.clip(cx + i * pitch, 0, n - 1), np.clip(cy + j * pitch, 0, n - 1)] = 1.0
    return img


_BUILDERS = {
    PhantomKind.UNIFORM_DISC: _uniform_disc,
    PhantomKind.CONTRAST_DISCS: _contrast_discs,
    PhantomKind.RESOLUTION_DOTS: _resolution_dots,
}


def make_phantom(kind: PhantomKind | str, n: int) -> Phantom:
    """Deterministic n x n phantom of the given kind."""
    if n < 2:
        raise ValueError(f"phantom size must be >= 2, got {n}")
    kind = PhantomKind(kind)
    intensity = _BUILDERS[kind](n)
    intensity.setflags(write=False)
    return Phantom(kind=kind, intensity=intensity)
