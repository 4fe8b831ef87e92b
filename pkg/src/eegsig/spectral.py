"""Discrete Fourier transforms and one-sided power spectra.

``dft_naive`` evaluates the transform definition by direct summation and acts
as the correctness oracle for the radix-2 ``fft``. ``power_spectrum`` produces
the one-sided periodogram used for display and band inspection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ComplexSpectrum:
    """DFT bins X_k plus the transform length they came from."""

    values: np.ndarray
    n: int

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.complex128)
        object.__setattr__(self, "values", values)
        if len(values) != self.n:
            raise ValueError(f"{len(values)} bins but n={self.n}")


@dataclass(frozen=True)
class SpectrumResult:
    """One-sided power spectrum: frequencies 0..fs/2 and nonnegative power."""

    frequencies_hz: np.ndarray
    power: np.ndarray
    sample_rate_hz: float

    def __post_init__(self):
        if len(self.frequencies_hz) != len(self.power):
            raise ValueError("frequency and power axes differ in length")

    def peak_frequency_hz(self) -> float:
        return float(self.frequencies_hz[int(np.argmax(self.power))])


def dft_naive(x) -> ComplexSpectrum:
    """Direct O(N^2) summation of X_k = sum_n x_n exp(-2j pi k n / N).

    Valid for any N >= 1; used as the reference the fast transform is
    checked against.
    """
    x = np.asarray(x, dtype=np.complex128)
    n = len(x)
    if n == 0:
        raise ValueError("cannot transform an empty signal")
    # One row per output bin; the k-th row of twiddles is w^(k*j mod N),
    # which avoids re-evaluating exp() N^2 times.
    w = np.exp(-2j * np.pi * np.arange(n) / n)
    j = np.arange(n)
    out = np.empty(n, dtype=np.complex128)
    for k in range(n):
        out[k] = np.dot(w[(k * j) % n], x)
    return ComplexSpectrum(out, n)


def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


def fft(x) -> ComplexSpectrum:
    """Radix-2 decimation-in-time transform; requires power-of-two length."""
    x = np.asarray(x, dtype=np.complex128)
    n = len(x)
    if n == 0 or n & (n - 1):
        raise ValueError(f"fft length must be a power of two, got {n}")
    if n == 1:
        return ComplexSpectrum(x.copy(), 1)
    out = x[_bit_reverse_indices(n)]
    size = 2
    while size <= n:
        half = size // 2
        twiddle = np.exp(-2j * np.pi * np.arange(half) / size)
        blocks = out.reshape(-1, size)
        even = blocks[:, :half]
        odd = blocks[:, half:] * twiddle
        out = np.concatenate([even + odd, even - odd], axis=1).reshape(-1)
        size *= 2
    return ComplexSpectrum(out, n)


def ifft(s: ComplexSpectrum) -> np.ndarray:
    """Inverse transform x_n = (1/N) sum_k X_k exp(+2j pi k n / N)."""
    values = np.asarray(s.values, dtype=np.complex128)
    n = len(values)
    if n == 0 or n & (n - 1):
        raise ValueError(f"ifft length must be a power of two, got {n}")
    return np.conj(fft(np.conj(values)).values) / n


def next_power_of_two(n: int) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1 << (n - 1).bit_length()


def power_spectrum(x, sample_rate_hz: float) -> SpectrumResult:
    """One-sided power spectrum of a real signal.

    The signal is demeaned (so padding adds no DC leakage), zero-padded to the
    next power of two M, and transformed. power[k] = |X_k|^2 / (M * N) with
    interior bins doubled, so the bins sum to the population variance of the
    input; the frequency axis is k * fs / M for k = 0..M/2.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("power_spectrum expects a 1-D signal")
    n = len(x)
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if sample_rate_hz <= 0:
        raise ValueError(f"sample rate must be positive, got {sample_rate_hz}")
    m = next_power_of_two(n)
    padded = np.zeros(m)
    padded[:n] = x - x.mean()
    spec = fft(padded)
    half = m // 2
    power = np.abs(spec.values[: half + 1]) ** 2 / (m * n)
    power[1:half] *= 2.0
    freqs = np.arange(half + 1) * (sample_rate_hz / m)
    return SpectrumResult(freqs, power, sample_rate_hz)
