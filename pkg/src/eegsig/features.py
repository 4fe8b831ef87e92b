"""Per-trial feature extraction: statistics, entropy, and band power.

Each selected channel is split into rhythm bands with the wavelet bank and
summarized by up to five scalars per band. Columns follow a frozen order —
channels in recording order, bands delta..gamma, features
(mean, variance, std, entropy, band_power) — named ``<channel>.<band>.<feature>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import wavelet
from .core import Recording, TrialSet
from .spectral import power_spectrum

FEATURE_ORDER = ("mean", "variance", "std", "entropy", "band_power")


@dataclass(frozen=True)
class Pmf:
    """Histogram-derived probability mass function over amplitude bins."""

    probabilities: np.ndarray
    bin_edges: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=np.float64)
        edges = np.asarray(self.bin_edges, dtype=np.float64)
        if len(edges) != len(p) + 1:
            raise ValueError("need one more bin edge than probabilities")
        if (p < 0).any():
            raise ValueError("probabilities must be nonnegative")
        if abs(p.sum() - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {p.sum()!r}, not 1")
        if (np.diff(edges) <= 0).any():
            raise ValueError("bin edges must be strictly increasing")
        object.__setattr__(self, "probabilities", p)
        object.__setattr__(self, "bin_edges", edges)


@dataclass(frozen=True)
class EntropyConfig:
    bins: int = 16
    log_base: float = 2.0

    def __post_init__(self):
        if self.bins < 2:
            raise ValueError("need at least 2 bins")
        if self.log_base not in (2.0, math.e, 10.0):
            raise ValueError("log base must be 2, e, or 10")


@dataclass(frozen=True)
class FeatureConfig:
    """What to extract: which bands, which per-band features, how to bin."""

    bands: tuple[str, ...] = wavelet.BAND_ORDER
    per_band_features: tuple[str, ...] = FEATURE_ORDER
    entropy: EntropyConfig = field(default_factory=EntropyConfig)
    include_broadband_spectrum_peak: bool = False
    include_eog: bool = False
    wavelet_levels: int = 5

    def __post_init__(self):
        bands = tuple(self.bands)
        feats = tuple(self.per_band_features)
        unknown = set(bands) - set(wavelet.BAND_ORDER)
        if unknown:
            raise ValueError(f"unknown band(s) {sorted(unknown)}")
        unknown = set(feats) - set(FEATURE_ORDER)
        if unknown:
            raise ValueError(f"unknown feature(s) {sorted(unknown)}")
        if not bands or not feats:
            raise ValueError("select at least one band and one feature")
        # normalize to canonical order so the column contract is stable
        object.__setattr__(self, "bands",
                           tuple(b for b in wavelet.BAND_ORDER if b in bands))
        object.__setattr__(self, "per_band_features",
                           tuple(f for f in FEATURE_ORDER if f in feats))

    def to_dict(self) -> dict:
        return {
            "bands": list(self.bands),
            "per_band_features": list(self.per_band_features),
            "entropy": {"bins": self.entropy.bins, "log_base": self.entropy.log_base},
            "include_broadband_spectrum_peak": self.include_broadband_spectrum_peak,
            "include_eog": self.include_eog,
            "wavelet_levels": self.wavelet_levels,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "FeatureConfig":
        kwargs = {}
        if "bands" in doc:
            kwargs["bands"] = tuple(doc["bands"])
        if "per_band_features" in doc:
            kwargs["per_band_features"] = tuple(doc["per_band_features"])
        if "entropy" in doc:
            ent = doc["entropy"]
            base = float(ent.get("log_base", 2.0))
            if ent.get("log_base") == "e":
                base = math.e
            kwargs["entropy"] = EntropyConfig(int(ent.get("bins", 16)), base)
        for key in ("include_broadband_spectrum_peak", "include_eog"):
            if key in doc:
                kwargs[key] = bool(doc[key])
        if "wavelet_levels" in doc:
            kwargs["wavelet_levels"] = int(doc["wavelet_levels"])
        return cls(**kwargs)


@dataclass(frozen=True)
class FeatureMatrix:
    """trials x features values with aligned integer labels."""

    values: np.ndarray
    feature_names: tuple[str, ...]
    labels: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        labels = np.asarray(self.labels, dtype=np.int64)
        names = tuple(self.feature_names)
        if values.ndim != 2:
            raise ValueError("feature values must be 2-D")
        if values.shape[1] != len(names):
            raise ValueError(f"{values.shape[1]} columns but {len(names)} names")
        if len(set(names)) != len(names):
            raise ValueError("feature names must be unique")
        if values.shape[0] != len(labels):
            raise ValueError(f"{values.shape[0]} rows but {len(labels)} labels")
        if not np.isfinite(values).all():
            rows, cols = np.argwhere(~np.isfinite(values))[0]
            raise ValueError(f"non-finite feature value at row {rows}, column "
                             f"{names[cols]!r}")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "feature_names", names)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def select_rows(self, idx) -> "FeatureMatrix":
        idx = np.asarray(idx)
        return FeatureMatrix(self.values[idx], self.feature_names, self.labels[idx])


def mean(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("mean of empty sequence")
    return float(x.mean())


def variance(x) -> float:
    """Population variance (divisor n, not n-1)."""
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("variance of empty sequence")
    return float(np.mean((x - x.mean()) ** 2))


def std_dev(x) -> float:
    return math.sqrt(variance(x))


def histogram_pmf(x, cfg: EntropyConfig = EntropyConfig()) -> Pmf:
    """Equal-width amplitude histogram normalized to a pmf.

    The rightmost bin is closed so max(x) is counted. A constant signal gets
    degenerate edges widened by +-0.5 and all mass in the bin holding the value.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("cannot bin an empty sequence")
    lo, hi = float(x.min()), float(x.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    counts, edges = np.histogram(x, bins=cfg.bins, range=(lo, hi))
    return Pmf(counts / x.size, edges)


def shannon_entropy(p: Pmf, base: float = 2.0) -> float:
    """-sum p_i log_base(p_i), with 0 log 0 taken as 0.

    Base 2 gives bits, e nats, 10 hartleys.
    """
    probs = p.probabilities
    nz = probs[probs > 0]
    return float(-np.sum(nz * np.log(nz) / math.log(base)))


def band_power(band_signal) -> float:
    """Mean squared amplitude of a band-limited signal."""
    x = np.asarray(band_signal, dtype=np.float64)
    if x.size == 0:
        raise ValueError("band power of empty sequence")
    return float(np.mean(x ** 2))


def _band_signals(samples: np.ndarray, sample_rate_hz: float,
                  cfg: FeatureConfig) -> dict[str, np.ndarray]:
    bands = {b.name: b for b in wavelet.band_map(sample_rate_hz, cfg.wavelet_levels)}
    padded, offset = wavelet.pad_to_multiple(samples, 2 ** cfg.wavelet_levels)
    decomp = wavelet.dwt_multilevel(padded, cfg.wavelet_levels,
                                    sample_rate_hz=sample_rate_hz)
    n = len(samples)
    out = {}
    for name in cfg.bands:
        rec = wavelet.reconstruct_band(decomp, bands[name])
        out[name] = rec[offset:offset + n]
    return out


def _scalar_feature(kind: str, signal: np.ndarray, cfg: FeatureConfig) -> float:
    if kind == "mean":
        return mean(signal)
    if kind == "variance":
        return variance(signal)
    if kind == "std":
        return std_dev(signal)
    if kind == "entropy":
        return shannon_entropy(histogram_pmf(signal, cfg.entropy), cfg.entropy.log_base)
    if kind == "band_power":
        return band_power(signal)
    raise ValueError(f"unknown feature {kind!r}")


def feature_names(channels, cfg: FeatureConfig) -> list[str]:
    """The frozen column-name contract for a channel layout and config."""
    names = []
    for ch in channels:
        for band in cfg.bands:
            for feat in cfg.per_band_features:
                names.append(f"{ch}.{band}.{feat}")
        if cfg.include_broadband_spectrum_peak:
            names.append(f"{ch}.broadband.spectrum_peak")
    return names


def extract_features(ts: TrialSet, cfg: FeatureConfig = FeatureConfig()) -> FeatureMatrix:
    """Build the trials x features matrix for a labeled trial set.

    The EOG reference channel is skipped unless cfg.include_eog is set.
    Failures are re-raised with the offending (trial, channel) named.
    """
    if not ts.trials:
        raise ValueError("cannot extract features from an empty trial set")
    reference = ts.trials[0]
    channels = [
        c for i, c in enumerate(reference.channels)
        if cfg.include_eog or i != reference.eog_index()
    ]
    if not channels:
        raise ValueError("no channels left to extract features from")
    names = feature_names(channels, cfg)
    rows = np.empty((len(ts.trials), len(names)))
    for t, trial in enumerate(ts.trials):
        col = 0
        for ch in channels:
            samples = trial.data[trial.channel_index(ch)]
            try:
                per_band = _band_signals(samples, trial.sample_rate_hz, cfg)
                for band in cfg.bands:
                    for feat in cfg.per_band_features:
                        rows[t, col] = _scalar_feature(feat, per_band[band], cfg)
                        col += 1
                if cfg.include_broadband_spectrum_peak:
                    rows[t, col] = power_spectrum(
                        samples, trial.sample_rate_hz).peak_frequency_hz()
                    col += 1
            except ValueError as exc:
                raise ValueError(f"trial {t}, channel {ch!r}: {exc}") from exc
    return FeatureMatrix(rows, tuple(names), ts.label_ids())


def save_feature_csv(fm: FeatureMatrix, path: str | Path) -> Path:
    """CSV with a feature-name header row plus a trailing label column."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(list(fm.feature_names) + ["label"]) + "\n")
        for row, label in zip(fm.values, fm.labels):
            fh.write(",".join(f"{v:.17g}" for v in row) + f",{label}\n")
    return path


def load_feature_csv(path: str | Path) -> FeatureMatrix:
    path = Path(path)
    lines = [ln for ln in path.read_text().splitlines() if ln.strip()]
    if not lines:
        raise ValueError(f"empty feature file {path}")
    header = lines[0].split(",")
    if header[-1] != "label":
        raise ValueError(f"{path}: last column must be 'label', got {header[-1]!r}")
    names = tuple(header[:-1])
    values = []
    labels = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(header):
            raise ValueError(f"{path}: row has {len(cells)} cells, want {len(header)}")
        values.append([float(c) for c in cells[:-1]])
        labels.append(int(cells[-1]))
    return FeatureMatrix(np.array(values, dtype=np.float64).reshape(len(labels), len(names)),
                         names, np.array(labels, dtype=np.int64))
