"""Spectra: the radix-2 transform against its brute-force oracle, and the
one-sided power spectrum used by the band/spectrum views."""

import time

import numpy as np

from eegsig import dft_naive, fft, ifft, power_spectrum

rng = np.random.default_rng(7)

# the fast transform must agree with the direct summation of the definition
x = rng.standard_normal(2048) + 1j * rng.standard_normal(2048)
t0 = time.perf_counter()
slow = dft_naive(x)
t1 = time.perf_counter()
fast = fft(x)
t2 = time.perf_counter()
rel = np.linalg.norm(fast.values - slow.values) / np.linalg.norm(slow.values)
print(f"N=2048: naive {t1 - t0:.3f}s, radix-2 {t2 - t1:.4f}s, "
      f"relative difference {rel:.2e}")

back = ifft(fast)
print(f"inverse round-trip max error: {np.max(np.abs(back - x)):.2e}")

# Parseval ties time-domain energy to the spectrum
energy_time = np.sum(np.abs(x) ** 2)
energy_freq = np.sum(np.abs(fast.values) ** 2) / len(x)
print(f"Parseval: {energy_time:.6f} vs {energy_freq:.6f}")

# a 10 Hz tone in 10 s at 250 Hz lands on the bin nearest 10 Hz
FS = 250.0
t = np.arange(2500) / FS
spectrum = power_spectrum(np.sin(2 * np.pi * 10 * t) + 0.3 * rng.standard_normal(2500), FS)
print(f"\ntone + noise: peak at {spectrum.peak_frequency_hz():.2f} Hz "
      f"({len(spectrum.power)} one-sided bins)")

# total one-sided power equals the population variance
noise = rng.standard_normal(2500)
spectrum = power_spectrum(noise, FS)
print(f"white noise: total power {spectrum.power.sum():.4f} vs variance {noise.var():.4f}")
