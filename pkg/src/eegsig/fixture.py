"""Seeded synthetic EEG datasets shaped like the reference recordings.

Every trial is 7 channels (c3, c4, p3, p4, o1, o2, EOG) x 2500 samples at
250 Hz. Each class emphasizes one rhythm band with class-specific amplitude
ratios on top of 1/f-like background noise; a shared EOG channel carries
blink transients that bleed into the scalp channels at random gains, giving
the ICA stage something real to remove.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .core import Recording, TaskLabel, TrialSet, save_trialset
from .wavelet import BAND_ORDER

SCALP_CHANNELS = ("c3", "c4", "p3", "p4", "o1", "o2")
CHANNELS = SCALP_CHANNELS + ("EOG",)
DEFAULT_SAMPLE_RATE = 250.0
DEFAULT_SAMPLES = 2500

# mental-task names for the default five-class fixture
TASK_NAMES = ("baseline", "multiplication", "letter-composing", "rotation", "counting")

# class-emphasized oscillation frequencies per band (Hz), inside dyadic edges
_BAND_TONES = {
    "delta": (1.0, 2.5),
    "theta": (4.5, 6.0),
    "alpha": (9.0, 11.0),
    "beta": (18.0, 24.0),
    "gamma": (35.0, 45.0),
}


def _one_over_f_noise(rng: np.random.Generator, n: int, sample_rate_hz: float,
                      rms: float) -> np.ndarray:
    white = rng.standard_normal(n)
    spectrum = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n, d=1.0 / sample_rate_hz)
    spectrum /= np.sqrt(np.maximum(freqs, 1.0))
    noise = np.fft.irfft(spectrum, n)
    return noise * (rms / max(noise.std(), 1e-12))


def _blink_train(rng: np.random.Generator, n: int, sample_rate_hz: float) -> np.ndarray:
    """A few smooth biphasic eye-blink pulses at random times."""
    t = np.arange(n) / sample_rate_hz
    out = np.zeros(n)
    for _ in range(int(rng.integers(3, 7))):
        center = rng.uniform(0.5, t[-1] - 0.5)
        width = rng.uniform(0.10, 0.18)
        amp = rng.uniform(40.0, 80.0)
        z = (t - center) / width
        out += amp * np.exp(-0.5 * z ** 2) * (1.0 - 0.35 * z)
    return out


def _band_oscillation(rng: np.random.Generator, t: np.ndarray, band: str) -> np.ndarray:
    sig = np.zeros_like(t)
    for f in _BAND_TONES[band]:
        freq = f * rng.uniform(0.95, 1.05)
        sig += np.sin(2.0 * np.pi * freq * t + rng.uniform(0.0, 2.0 * np.pi))
    return sig / max(sig.std(), 1e-12)


def class_band_amplitudes(class_id: int, classes: int) -> dict[str, float]:
    """Amplitude per rhythm band for one class; each class emphasizes its own
    band with a class-specific ratio so band power alone separates them."""
    amps = {band: 1.0 + 0.15 * ((class_id + i) % classes) for i, band in enumerate(BAND_ORDER)}
    emphasized = BAND_ORDER[class_id % len(BAND_ORDER)]
    amps[emphasized] = 6.0 + 0.5 * (class_id // len(BAND_ORDER))
    return amps


def make_trial(rng: np.random.Generator, class_id: int, classes: int,
               sample_rate_hz: float = DEFAULT_SAMPLE_RATE,
               n_samples: int = DEFAULT_SAMPLES) -> np.ndarray:
    """One 7 x n_samples trial for the given class."""
    t = np.arange(n_samples) / sample_rate_hz
    amps = class_band_amplitudes(class_id, classes)
    blink = _blink_train(rng, n_samples, sample_rate_hz)
    blink_gains = rng.uniform(0.08, 0.30, size=len(SCALP_CHANNELS))
    data = np.zeros((len(CHANNELS), n_samples))
    for ch in range(len(SCALP_CHANNELS)):
        channel_gain = rng.uniform(0.8, 1.2)
        sig = np.zeros(n_samples)
        for band in BAND_ORDER:
            sig += amps[band] * _band_oscillation(rng, t, band)
        sig *= channel_gain
        sig += _one_over_f_noise(rng, n_samples, sample_rate_hz, rms=0.8)
        sig += blink_gains[ch] * blink
        data[ch] = sig
    data[-1] = blink + rng.standard_normal(n_samples) * 0.5
    return data


def generate_trialset(classes: int = 5, trials_per_class: int = 20,
                      seed: int = 0,
                      sample_rate_hz: float = DEFAULT_SAMPLE_RATE,
                      n_samples: int = DEFAULT_SAMPLES) -> TrialSet:
    """Build the synthetic labeled trial set in memory, fully seeded."""
    if classes < 2:
        raise ValueError("need at least 2 classes")
    if trials_per_class < 1:
        raise ValueError("need at least 1 trial per class")
    labels = [
        TaskLabel(c, TASK_NAMES[c] if c < len(TASK_NAMES) else f"task-{c}")
        for c in range(classes)
    ]
    rng = np.random.default_rng(seed)
    trials = []
    trial_labels = []
    for c in range(classes):
        for _ in range(trials_per_class):
            data = make_trial(rng, c, classes, sample_rate_hz, n_samples)
            trials.append(Recording(sample_rate_hz, CHANNELS, data, trial_label=labels[c]))
            trial_labels.append(labels[c])
    return TrialSet(tuple(trials), tuple(trial_labels))


def generate_fixture(out_dir: str | Path, classes: int = 5, trials_per_class: int = 20,
                     seed: int = 0,
                     sample_rate_hz: float = DEFAULT_SAMPLE_RATE,
                     n_samples: int = DEFAULT_SAMPLES) -> Path:
    """Write a synthetic dataset (manifest + per-trial CSVs); returns the
    manifest path. Identical arguments produce byte-identical files."""
    ts = generate_trialset(classes, trials_per_class, seed, sample_rate_hz, n_samples)
    return save_trialset(ts, out_dir, name=f"synthetic-{classes}x{trials_per_class}-seed{seed}")


def blink_recording(seed: int = 0, sample_rate_hz: float = DEFAULT_SAMPLE_RATE,
                    n_samples: int = DEFAULT_SAMPLES
                    ) -> tuple[Recording, np.ndarray, np.ndarray]:
    """A blink-contaminated recording plus its ground truth.

    Returns (recording, clean_scalp, blink_template) where clean_scalp holds
    the six scalp channels before the blink was mixed in. Each scalp channel
    carries a distinct oscillation so the mixture has full rank and the blink
    is the only cross-channel source.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(n_samples) / sample_rate_hz
    freqs = (3.0, 6.0, 9.5, 12.0, 19.0, 26.0)
    clean = np.vstack([
        np.sin(2.0 * np.pi * f * t + rng.uniform(0, 2 * np.pi)) +
        0.05 * rng.standard_normal(n_samples)
        for f in freqs
    ])
    blink = _blink_train(rng, n_samples, sample_rate_hz) / 20.0
    gains = rng.uniform(0.3, 0.9, size=len(SCALP_CHANNELS))
    data = np.zeros((len(CHANNELS), n_samples))
    data[: len(SCALP_CHANNELS)] = clean + gains[:, None] * blink
    data[-1] = blink + 0.02 * rng.standard_normal(n_samples)
    rec = Recording(sample_rate_hz, CHANNELS, data)
    return rec, clean, blink
