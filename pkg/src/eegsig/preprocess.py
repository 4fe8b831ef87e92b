"""Noise and artifact removal: windowed-sinc low-pass FIR plus FastICA.

The ICA path follows the classic recipe — demean, whiten via the covariance
eigendecomposition, then symmetric fixed-point iteration — with a square
(components = channels) model, so the unmixing/mixing pair is an exact matrix
inverse and zeroing component activations before remixing removes artifacts
without changing the recording's shape. Components are scored against the EOG
reference channel by absolute Pearson correlation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Recording


@dataclass(frozen=True)
class FilterKernel:
    """Odd-length linear-phase FIR taps with unit DC gain."""

    taps: np.ndarray
    cutoff_hz: float
    sample_rate_hz: float

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.float64)
        object.__setattr__(self, "taps", taps)
        if len(taps) % 2 == 0:
            raise ValueError(f"tap count must be odd, got {len(taps)}")
        if abs(taps.sum() - 1.0) > 1e-6:
            raise ValueError(f"DC gain must be 1, got {taps.sum()!r}")

    @property
    def group_delay(self) -> int:
        return (len(self.taps) - 1) // 2

    def frequency_response(self, freqs_hz) -> np.ndarray:
        """Complex response at the given frequencies by direct summation."""
        freqs = np.atleast_1d(np.asarray(freqs_hz, dtype=np.float64))
        k = np.arange(len(self.taps))
        omega = 2.0 * np.pi * freqs / self.sample_rate_hz
        return (self.taps * np.exp(-1j * np.outer(omega, k))).sum(axis=1)


def design_lowpass(cutoff_hz: float, sample_rate_hz: float, num_taps: int = 101) -> FilterKernel:
    """Hamming-windowed sinc low-pass, normalized to unit DC gain."""
    if num_taps % 2 == 0 or num_taps < 3:
        raise ValueError(f"num_taps must be odd and >= 3, got {num_taps}")
    if not (0 < cutoff_hz < sample_rate_hz / 2):
        raise ValueError(
            f"cutoff {cutoff_hz} Hz must sit strictly below Nyquist "
            f"({sample_rate_hz / 2} Hz)"
        )
    n = np.arange(num_taps) - (num_taps - 1) / 2
    fc = cutoff_hz / sample_rate_hz  # cycles per sample
    taps = 2.0 * fc * np.sinc(2.0 * fc * n)
    taps *= np.hamming(num_taps)
    taps /= taps.sum()
    return FilterKernel(taps, cutoff_hz, sample_rate_hz)


def apply_filter(r: Recording, k: FilterKernel) -> Recording:
    """Convolve every channel with the kernel, compensating group delay.

    Edges are zero-padded, so the output has exactly the input length and is
    time-aligned with it.
    """
    if k.sample_rate_hz != r.sample_rate_hz:
        raise ValueError(
            f"kernel designed for {k.sample_rate_hz} Hz, recording is "
            f"{r.sample_rate_hz} Hz"
        )
    delay = k.group_delay
    out = np.empty_like(r.data)
    for i in range(r.n_channels):
        full = np.convolve(r.data[i], k.taps, mode="full")
        out[i] = full[delay:delay + r.n_samples]
    return r.with_data(out)


@dataclass(frozen=True)
class IcaConfig:
    max_iterations: int = 1000
    tolerance: float = 1e-6
    nonlinearity: str = "tanh"
    seed: int = 0

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not (0 < self.tolerance < 1):
            raise ValueError("tolerance must be in (0, 1)")
        if self.nonlinearity not in ("tanh", "cube"):
            raise ValueError(f"nonlinearity must be tanh or cube, got {self.nonlinearity!r}")


@dataclass(frozen=True)
class IcaModel:
    """Square unmixing W, its inverse A, component activations, channel means."""

    unmixing: np.ndarray  # (components, channels)
    mixing: np.ndarray  # (channels, components)
    activations: np.ndarray  # (components, samples)
    channel_means: np.ndarray  # (channels,)
    converged: bool = True
    iterations: int = 0

    @property
    def n_components(self) -> int:
        return self.unmixing.shape[0]

    def reconstruct(self, keep_out: set[int] | None = None) -> np.ndarray:
        """Mix activations back to channel space, optionally zeroing components."""
        acts = self.activations
        if keep_out:
            acts = acts.copy()
            acts[sorted(keep_out), :] = 0.0
        return self.mixing @ acts + self.channel_means[:, None]


@dataclass(frozen=True)
class ComponentScore:
    component_index: int
    abs_correlation: float
    constant_series: bool = False


def _sym_decorrelate(w: np.ndarray) -> np.ndarray:
    # W <- (W W^T)^(-1/2) W
    s, u = np.linalg.eigh(w @ w.T)
    return (u * (1.0 / np.sqrt(s))) @ u.T @ w


def _whiten(data: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (whitened, sphering matrix, means); raises on rank deficiency."""
    means = data.mean(axis=1)
    centered = data - means[:, None]
    cov = centered @ centered.T / centered.shape[1]
    eigvals, eigvecs = np.linalg.eigh(cov)
    if eigvals[0] < 1e-12 * eigvals[-1]:
        raise ValueError(
            "data is rank deficient (an eigenvalue of the channel covariance "
            f"is below 1e-12 x largest: {eigvals[0]:.3e} vs {eigvals[-1]:.3e})"
        )
    sphering = (eigvecs / np.sqrt(eigvals)).T  # rows scale the PC projections
    return sphering @ centered, sphering, means


def whitened_covariance(r: Recording) -> np.ndarray:
    """Covariance of the whitened data; identity within tolerance by design.

    Exposed so tests can check the whitening step in isolation.
    """
    white, _, _ = _whiten(np.asarray(r.data, dtype=np.float64))
    return white @ white.T / white.shape[1]


def fast_ica(r: Recording, cfg: IcaConfig = IcaConfig()) -> IcaModel:
    """Estimate a square unmixing matrix by symmetric fixed-point iteration.

    Deterministic for a fixed seed. If the iteration has not converged after
    max_iterations the last iterate is returned with ``converged=False``
    rather than raising; a partial unmixing is still usable interactively.
    """
    data = np.asarray(r.data, dtype=np.float64)
    n_ch, n_samp = data.shape
    if n_samp <= n_ch:
        raise ValueError(f"need more samples ({n_samp}) than channels ({n_ch})")
    white, sphering, means = _whiten(data)

    rng = np.random.default_rng(cfg.seed)
    w = _sym_decorrelate(rng.standard_normal((n_ch, n_ch)))
    converged = False
    iterations = cfg.max_iterations
    for it in range(1, cfg.max_iterations + 1):
        projected = w @ white
        if cfg.nonlinearity == "tanh":
            g = np.tanh(projected)
            g_prime_mean = (1.0 - g ** 2).mean(axis=1)
        else:
            g = projected ** 3
            g_prime_mean = (3.0 * projected ** 2).mean(axis=1)
        w_new = _sym_decorrelate(g @ white.T / n_samp - g_prime_mean[:, None] * w)
        drift = np.max(np.abs(np.abs(np.einsum("ij,ij->i", w_new, w)) - 1.0))
        w = w_new
        if drift < cfg.tolerance:
            converged = True
            iterations = it
            break

    unmixing = w @ sphering
    mixing = np.linalg.inv(unmixing)
    activations = unmixing @ (data - means[:, None])
    return IcaModel(unmixing, mixing, activations, means, converged, iterations)


def _pearson(a: np.ndarray, b: np.ndarray) -> tuple[float, bool]:
    # max == min is the robust constant test; std of a constant series can
    # come out as a few ulp instead of exactly zero
    if np.ptp(a) == 0.0 or np.ptp(b) == 0.0:
        return 0.0, True
    sa = a.std()
    sb = b.std()
    r = float(np.mean((a - a.mean()) * (b - b.mean())) / (sa * sb))
    return r, False


def score_components(m: IcaModel, reference) -> list[ComponentScore]:
    """|Pearson r| of every component activation against a reference series,
    sorted descending. Constant series score 0 and are flagged."""
    reference = np.asarray(reference, dtype=np.float64)
    if len(reference) != m.activations.shape[1]:
        raise ValueError(
            f"reference has {len(reference)} samples, activations have "
            f"{m.activations.shape[1]}"
        )
    scores = []
    for i in range(m.n_components):
        r, constant = _pearson(m.activations[i], reference)
        scores.append(ComponentScore(i, min(abs(r), 1.0), constant))
    return sorted(scores, key=lambda s: -s.abs_correlation)


def reject_components(r: Recording, m: IcaModel, indices) -> Recording:
    """Rebuild the recording with the given component activations zeroed."""
    indices = set(int(i) for i in indices)
    bad = [i for i in indices if not 0 <= i < m.n_components]
    if bad:
        raise IndexError(f"component indices {sorted(bad)} out of range "
                         f"0..{m.n_components - 1}")
    return r.with_data(m.reconstruct(keep_out=indices))


def demean(r: Recording) -> Recording:
    """Remove each channel's mean."""
    return r.with_data(r.data - r.data.mean(axis=1, keepdims=True))
