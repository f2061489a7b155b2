"""Synthetic test signals."""

from __future__ import annotations

import numpy as np

from .core import SampledSignal


def gaussian_chirp(
    centre: float = 0.0,
    width: float = 1.0,
    freq: float = 0.0,
    rate: float = 0.0,
    *,
    t0: float = -30.0,
    dt: float = 60.0 / 1024,
    n: int = 1024,
    amplitude: complex = 1.0,
) -> SampledSignal:
    """``amplitude * exp(-(t-c)^2/(2 w^2) + i(freq (t-c) + rate (t-c)^2 / 2))``."""
    t = t0 + dt * np.arange(n)
    s = t - centre
    return SampledSignal(t0, dt, amplitude * np.exp(-0.5 * (s / width) ** 2 + 1j * (freq * s + 0.5 * rate * s * s)))


def builtin_chirp(f0: float = 2.0, f1: float = 20.0, T: float = 4.0, n: int = 1024) -> SampledSignal:
    """Gaussian-enveloped linear chirp sweeping ``f0 -> f1`` Hz over ``[-T/2, T/2]``.

    The window is ``[-T, T)`` with ``n`` samples and the envelope has
    standard deviation ``T/6``.
    """
    dt = 2.0 * T / n
    t = -T + dt * np.arange(n)
    phase = 2.0 * np.pi * (0.5 * (f0 + f1) * t + 0.5 * (f1 - f0) / T * t * t)
    return SampledSignal(-T, dt, np.exp(-0.5 * (t / (T / 6.0)) ** 2 + 1j * phase))


def random_packets(
    rng: np.random.Generator,
    *,
    n_packets: int = 4,
    centre_range: tuple[float, float] = (-4.0, 4.0),
    freq_range: tuple[float, float] = (-2.0, 2.0),
    width_range: tuple[float, float] = (0.7, 1.5),
    t0: float = -30.0,
    dt: float = 60.0 / 1024,
    n: int = 1024,
) -> SampledSignal:
    """Sum of Gaussian wave packets with random complex amplitudes.

    Every packet is effectively band-limited and time-limited, so the
    sampled signal is well resolved when the ranges sit well inside the
    window and below the Nyquist frequency.
    """
    t = t0 + dt * np.arange(n)
    vals = np.zeros(n, dtype=complex)
    for _ in range(n_packets):
        amp = rng.normal() + 1j * rng.normal()
        c = rng.uniform(*centre_range)
        w = rng.uniform(*width_range)
        om = rng.uniform(*freq_range)
        vals += amp * np.exp(-0.5 * ((t - c) / w) ** 2 + 1j * om * (t - c))
    return SampledSignal(t0, dt, vals)


def normalized(f: SampledSignal) -> SampledSignal:
    nrm = f.norm()
    return f if nrm == 0 else f * (1.0 / nrm)
