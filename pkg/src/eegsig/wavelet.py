"""Multilevel orthonormal wavelet transform and EEG rhythm-band splitting.

The analysis bank convolves with a low-pass/high-pass quadrature mirror pair
under periodic extension and keeps even-indexed outputs, halving the length at
every level. With the 8-tap Daubechies filter pair the bank is orthonormal, so
the inverse is the transpose and reconstruction is exact to rounding error.

At 250 Hz with 5 levels the dyadic sub-bands line up with the five clinical
EEG rhythms: the level-5 approximation covers delta, the level-5..2 details
cover theta/alpha/beta/gamma, and the finest detail (62.5-125 Hz) is discarded
as out-of-band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# 8-tap orthonormal Daubechies low-pass (scaling) coefficients, 4 vanishing
# moments. Standard tabulated values; the constructor re-checks the QMF
# identities rather than trusting the transcription.
_DB4_LOW = (
    0.23037781330885523,
    0.71484657055254153,
    0.63088076792959036,
    -0.02798376941698385,
    -0.18703481171888114,
    0.03084138183598697,
    0.03288301166698295,
    -0.01059740178499728,
)

BAND_ORDER = ("delta", "theta", "alpha", "beta", "gamma")

# Clinical band edges in Hz; gamma is open-ended ("above 30").
NOMINAL_EDGES = {
    "delta": (0.5, 4.0),
    "theta": (4.0, 8.0),
    "alpha": (8.0, 13.0),
    "beta": (14.0, 30.0),
    "gamma": (30.0, math.inf),
}


@dataclass(frozen=True)
class WaveletFilterPair:
    """Orthonormal analysis pair: low_pass g and high_pass h = mirror of g."""

    low_pass: np.ndarray
    high_pass: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.low_pass, dtype=np.float64)
        h = np.asarray(self.high_pass, dtype=np.float64)
        object.__setattr__(self, "low_pass", g)
        object.__setattr__(self, "high_pass", h)
        n = len(g)
        if len(h) != n:
            raise ValueError("filter lengths differ")
        tol = 1e-10
        if abs(g.sum() - math.sqrt(2.0)) > tol:
            raise ValueError(f"low-pass taps must sum to sqrt(2), got {g.sum()!r}")
        if abs(np.dot(g, g) - 1.0) > tol or abs(np.dot(h, h) - 1.0) > tol:
            raise ValueError("filter taps must have unit energy")
        mirror = np.array([(-1.0) ** k * g[n - 1 - k] for k in range(n)])
        if np.max(np.abs(h - mirror)) > tol:
            raise ValueError("high-pass is not the quadrature mirror of low-pass")
        for m in range(1, n // 2):
            if abs(np.dot(g[: n - 2 * m], g[2 * m :])) > tol:
                raise ValueError(f"low-pass not orthogonal to its shift by {2 * m}")

    def __len__(self) -> int:
        return len(self.low_pass)


def db4_pair() -> WaveletFilterPair:
    """The 8-tap, 4-vanishing-moment Daubechies analysis pair."""
    g = np.array(_DB4_LOW)
    n = len(g)
    h = np.array([(-1.0) ** k * g[n - 1 - k] for k in range(n)])
    return WaveletFilterPair(g, h)


@dataclass(frozen=True)
class WaveletDecomposition:
    """Approximation A_L plus detail sequences D_1..D_L (level 1 = finest)."""

    approximation: np.ndarray
    details: tuple[np.ndarray, ...]
    original_length: int
    levels: int
    sample_rate_hz: float

    def __post_init__(self):
        if self.levels < 1:
            raise ValueError("levels must be >= 1")
        if len(self.details) != self.levels:
            raise ValueError(f"{len(self.details)} detail sequences for {self.levels} levels")
        for j, d in enumerate(self.details, start=1):
            expect = self.original_length // (2 ** j)
            if len(d) != expect:
                raise ValueError(f"detail level {j} has {len(d)} coefficients, want {expect}")
        if len(self.approximation) != self.original_length // (2 ** self.levels):
            raise ValueError("approximation length inconsistent with levels")

    def detail(self, level: int) -> np.ndarray:
        return self.details[level - 1]

    def subband_names(self) -> list[str]:
        """Coefficient group names, finest detail first, approximation last."""
        return [f"D{j}" for j in range(1, self.levels + 1)] + [f"A{self.levels}"]


@dataclass(frozen=True)
class RhythmBand:
    """A clinical EEG band together with the dyadic sub-band(s) backing it."""

    name: str
    nominal_low_hz: float
    nominal_high_hz: float
    dyadic_low_hz: float
    dyadic_high_hz: float
    subbands: tuple[str, ...]


def _analysis_step(x: np.ndarray, taps: np.ndarray) -> np.ndarray:
    # y[m] = sum_j taps[j] * x[(2m - j) mod N], m = 0..N/2-1
    n = len(x)
    out = np.zeros(n // 2)
    positions = 2 * np.arange(n // 2)
    for j, t in enumerate(taps):
        out += t * x[(positions - j) % n]
    return out


def dwt_level(x, pair: WaveletFilterPair) -> tuple[np.ndarray, np.ndarray]:
    """One analysis level under periodic extension.

    Returns (approx, detail), each half the input length. Requires an even
    input at least as long as the filters so the periodic wrap is unambiguous.
    """
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    if n % 2:
        raise ValueError(f"input length must be even, got {n}")
    if n < len(pair):
        raise ValueError(f"input length {n} shorter than the {len(pair)}-tap filters")
    return _analysis_step(x, pair.low_pass), _analysis_step(x, pair.high_pass)


def _synthesis_step(approx: np.ndarray, detail: np.ndarray,
                    pair: WaveletFilterPair) -> np.ndarray:
    half = len(approx)
    if len(detail) != half:
        raise ValueError("approximation/detail lengths differ")
    n = 2 * half
    out = np.zeros(n)
    positions = 2 * np.arange(half)
    # Transpose of the analysis operator: x[(2m - j) mod N] += g[j] a[m] + h[j] d[m]
    for j in range(len(pair)):
        idx = (positions - j) % n
        out[idx] += pair.low_pass[j] * approx + pair.high_pass[j] * detail
    return out


def dwt_multilevel(x, levels: int, pair: WaveletFilterPair | None = None
                   , sample_rate_hz: float = 0.0) -> WaveletDecomposition:
    """Iterate the analysis bank on successive approximations.

    The input length must be divisible by 2**levels; callers pad first (see
    pad_to_multiple) when it is not.
    """
    if pair is None:
        pair = db4_pair()
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    if n % (2 ** levels):
        raise ValueError(
            f"length {n} not divisible by 2^{levels}={2 ** levels}; pad the signal first"
        )
    details: list[np.ndarray] = []
    approx = x
    for _ in range(levels):
        approx, detail = dwt_level(approx, pair)
        details.append(detail)
    return WaveletDecomposition(approx, tuple(details), n, levels, sample_rate_hz)


def idwt(d: WaveletDecomposition, pair: WaveletFilterPair | None = None) -> np.ndarray:
    """Invert dwt_multilevel; exact up to floating-point rounding."""
    if pair is None:
        pair = db4_pair()
    approx = np.asarray(d.approximation, dtype=np.float64)
    for level in range(d.levels, 0, -1):
        approx = _synthesis_step(approx, np.asarray(d.detail(level)), pair)
    if len(approx) != d.original_length:
        raise ValueError("coefficient lengths inconsistent with original length")
    return approx


def pad_to_multiple(x, multiple: int) -> tuple[np.ndarray, int]:
    """Symmetrically extend x to the next multiple of ``multiple``.

    Returns (padded, offset) where x == padded[offset:offset+len(x)]. Mirror
    extension avoids the edge steps a zero pad would introduce.
    """
    x = np.asarray(x, dtype=np.float64)
    n = len(x)
    if multiple < 1:
        raise ValueError("multiple must be >= 1")
    pad = (-n) % multiple
    if pad == 0:
        return x.copy(), 0
    left = pad // 2
    right = pad - left
    if max(left, right) > n:
        raise ValueError(f"cannot mirror-pad {n} samples by {pad}")
    pieces = []
    if left:
        pieces.append(x[:left][::-1])
    pieces.append(x)
    if right:
        pieces.append(x[-right:][::-1])
    return np.concatenate(pieces), left


def band_map(sample_rate_hz: float, levels: int) -> list[RhythmBand]:
    """Map decomposition sub-bands onto the five EEG rhythm bands.

    Assignment runs bottom-up: A_L -> delta, D_L -> theta, up through
    D_{L-3} -> gamma; any finer details are left unmapped (out-of-band).
    The combination is rejected unless every band's dyadic range overlaps its
    clinical range by at least half the narrower width, which holds for the
    reference 250 Hz / 5-level configuration.
    """
    if sample_rate_hz <= 0:
        raise ValueError("sample rate must be positive")
    if levels < 4:
        raise ValueError(
            f"{levels} level(s) yield {levels + 1} sub-bands; "
            "five distinct rhythm bands need at least 4 levels"
        )
    nyquist = sample_rate_hz / 2.0

    def dyadic_range(name: str) -> tuple[float, float]:
        if name.startswith("A"):
            return 0.0, sample_rate_hz / 2 ** (levels + 1)
        j = int(name[1:])
        return sample_rate_hz / 2 ** (j + 1), sample_rate_hz / 2 ** j

    assignment = {
        "delta": (f"A{levels}",),
        "theta": (f"D{levels}",),
        "alpha": (f"D{levels - 1}",),
        "beta": (f"D{levels - 2}",),
        "gamma": (f"D{levels - 3}",),
    }
    bands: list[RhythmBand] = []
    for name in BAND_ORDER:
        lo, hi = NOMINAL_EDGES[name]
        subs = assignment[name]
        dy_lo = min(dyadic_range(s)[0] for s in subs)
        dy_hi = max(dyadic_range(s)[1] for s in subs)
        overlap = min(dy_hi, min(hi, nyquist)) - max(dy_lo, lo)
        narrower = min(dy_hi - dy_lo, min(hi, nyquist) - lo)
        if overlap < 0.5 * narrower:
            raise ValueError(
                f"no usable mapping at fs={sample_rate_hz} Hz, levels={levels}: "
                f"{name} band ({lo}-{hi} Hz) barely overlaps sub-band "
                f"{subs} ({dy_lo:.4g}-{dy_hi:.4g} Hz)"
            )
        bands.append(RhythmBand(name, lo, hi, dy_lo, dy_hi, subs))
    return bands


def reconstruct_band(d: WaveletDecomposition, band: RhythmBand,
                     pair: WaveletFilterPair | None = None) -> np.ndarray:
    """Signal rebuilt from only the coefficient groups mapped to one band."""
    keep = set(band.subbands)
    known = set(d.subband_names())
    if not keep <= known:
        raise ValueError(f"band {band.name} needs sub-bands {sorted(keep - known)} "
                         f"not present in a {d.levels}-level decomposition")
    return reconstruct_subbands(d, keep, pair)


def reconstruct_subbands(d: WaveletDecomposition, keep,
                         pair: WaveletFilterPair | None = None) -> np.ndarray:
    """Inverse transform with every coefficient group outside ``keep`` zeroed."""
    keep = set(keep)
    approx = np.asarray(d.approximation)
    if f"A{d.levels}" not in keep:
        approx = np.zeros_like(approx)
    details = tuple(
        np.asarray(det) if f"D{j}" in keep else np.zeros_like(det)
        for j, det in enumerate(d.details, start=1)
    )
    masked = WaveletDecomposition(approx, details, d.original_length, d.levels,
                                  d.sample_rate_hz)
    return idwt(masked, pair)
