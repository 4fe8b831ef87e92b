"""Canonical data model for multichannel EEG recordings and labeled trial sets.

A dataset on disk is a JSON manifest (name, sample rate, channel list, label
table, trial file list) plus one headerless CSV per trial, one row per channel.
A packed single-file alternative stores the same content in a NumPy ``.npz``
archive. Amplitudes are kept as float64 and assumed to be microvolts.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

EOG_NAME = "EOG"

MANIFEST_FORMAT = "csv-manifest"
PACKED_FORMAT = "packed-binary"


class DatasetError(ValueError):
    """Raised when a dataset on disk violates the interchange contract."""


@dataclass(frozen=True)
class TaskLabel:
    """One class in a dataset's label table (e.g. a mental task)."""

    id: int
    name: str

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"label id must be >= 0, got {self.id}")
        if not self.name:
            raise ValueError("label name must be non-empty")


@dataclass(frozen=True)
class Recording:
    """One multichannel recording segment.

    ``data`` has shape (channels, samples) and is frozen after construction;
    operations that change samples return new recordings.
    """

    sample_rate_hz: float
    channels: tuple[str, ...]
    data: np.ndarray
    trial_label: TaskLabel | None = None

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError(f"sample_rate_hz must be > 0, got {self.sample_rate_hz}")
        data = np.asarray(self.data, dtype=np.float64)
        if data.ndim != 2:
            raise ValueError(f"data must be 2-D (channels x samples), got ndim={data.ndim}")
        channels = tuple(str(c) for c in self.channels)
        if len(channels) != data.shape[0]:
            raise ValueError(
                f"{len(channels)} channel names for {data.shape[0]} data rows"
            )
        if data.shape[1] < 1:
            raise ValueError("every channel needs at least one sample")
        if any(not c for c in channels):
            raise ValueError("channel names must be non-empty")
        if len(set(channels)) != len(channels):
            raise ValueError(f"duplicate channel names in {channels}")
        data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "channels", channels)

    @property
    def n_channels(self) -> int:
        return self.data.shape[0]

    @property
    def n_samples(self) -> int:
        return self.data.shape[1]

    def channel_index(self, name: str) -> int:
        """Index of a channel by name; the reserved EOG name matches any case."""
        try:
            return self.channels.index(name)
        except ValueError:
            pass
        if name.upper() == EOG_NAME:
            for i, c in enumerate(self.channels):
                if c.upper() == EOG_NAME:
                    return i
        raise KeyError(f"unknown channel {name!r}; have {list(self.channels)}")

    def eog_index(self) -> int | None:
        """Index of the EOG reference channel, or None if absent."""
        for i, c in enumerate(self.channels):
            if c.upper() == EOG_NAME:
                return i
        return None

    def with_data(self, data: np.ndarray) -> "Recording":
        """Copy of this recording with the same metadata and new samples."""
        return Recording(self.sample_rate_hz, self.channels, data, self.trial_label)

    def content_hash(self) -> str:
        return hashlib.sha256(self.data.tobytes()).hexdigest()


@dataclass(frozen=True)
class TrialSet:
    """Trials plus aligned labels; all trials share layout and sample rate."""

    trials: tuple[Recording, ...]
    labels: tuple[TaskLabel, ...]

    def __post_init__(self):
        trials = tuple(self.trials)
        labels = tuple(self.labels)
        if len(trials) != len(labels):
            raise ValueError(f"{len(trials)} trials but {len(labels)} labels")
        if trials:
            first = trials[0]
            for i, t in enumerate(trials):
                if t.channels != first.channels:
                    raise ValueError(f"trial {i} channel layout differs from trial 0")
                if t.sample_rate_hz != first.sample_rate_hz:
                    raise ValueError(f"trial {i} sample rate differs from trial 0")
        object.__setattr__(self, "trials", trials)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.trials)

    @property
    def channels(self) -> tuple[str, ...]:
        return self.trials[0].channels if self.trials else ()

    @property
    def sample_rate_hz(self) -> float:
        if not self.trials:
            raise ValueError("empty trial set has no sample rate")
        return self.trials[0].sample_rate_hz

    def label_ids(self) -> np.ndarray:
        return np.array([lab.id for lab in self.labels], dtype=np.int64)

    def label_table(self) -> list[TaskLabel]:
        table = {lab.id: lab for lab in self.labels}
        return [table[i] for i in sorted(table)]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of validate(); ok iff no error-severity issue."""

    issues: tuple[tuple[str, str], ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(sev != "error" for sev, _ in self.issues)

    def errors(self) -> list[str]:
        return [msg for sev, msg in self.issues if sev == "error"]

    def warnings(self) -> list[str]:
        return [msg for sev, msg in self.issues if sev == "warning"]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "issues": [list(i) for i in self.issues]}


def _read_trial_csv(path: Path, trial_index: int) -> np.ndarray:
    rows: list[list[float]] = []
    try:
        text = path.read_text()
    except OSError as exc:
        raise DatasetError(f"trial {trial_index}: cannot read {path}: {exc}") from exc
    for line_no, line in enumerate(text.splitlines()):
        if not line.strip():
            continue
        try:
            rows.append([float(cell) for cell in line.split(",")])
        except ValueError as exc:
            raise DatasetError(
                f"trial {trial_index}: bad number in {path} line {line_no + 1}: {exc}"
            ) from exc
    if not rows:
        raise DatasetError(f"trial {trial_index}: {path} is empty")
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise DatasetError(
            f"trial {trial_index}: ragged rows in {path} (lengths {sorted(widths)})"
        )
    return np.array(rows, dtype=np.float64)


def _parse_manifest(doc: dict, base: Path) -> TrialSet:
    for key in ("sample_rate_hz", "channels", "labels", "trials"):
        if key not in doc:
            raise DatasetError(f"manifest missing field {key!r}")
    sample_rate = float(doc["sample_rate_hz"])
    channels = [str(c) for c in doc["channels"]]
    table = {int(l["id"]): TaskLabel(int(l["id"]), str(l["name"])) for l in doc["labels"]}
    trials: list[Recording] = []
    labels: list[TaskLabel] = []
    for i, entry in enumerate(doc["trials"]):
        label_id = int(entry["label_id"])
        if label_id not in table:
            raise DatasetError(
                f"trial {i}: label id {label_id} not in manifest label table {sorted(table)}"
            )
        data = _read_trial_csv(base / entry["file"], i)
        if data.shape[0] != len(channels):
            raise DatasetError(
                f"trial {i}: {data.shape[0]} rows but manifest lists "
                f"{len(channels)} channels"
            )
        label = table[label_id]
        trials.append(Recording(sample_rate, channels, data, trial_label=label))
        labels.append(label)
    return TrialSet(tuple(trials), tuple(labels))


def load_trialset(path: str | Path, format: str = MANIFEST_FORMAT) -> TrialSet:
    """Load a labeled trial set from disk.

    Parameters
    ----------
    path : path to the manifest JSON (csv-manifest) or the .npz archive
        (packed-binary).
    format : ``"csv-manifest"`` or ``"packed-binary"``.
    """
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"no such dataset file: {path}")
    if format == MANIFEST_FORMAT:
        try:
            doc = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise DatasetError(f"malformed manifest {path}: {exc}") from exc
        return _parse_manifest(doc, path.parent)
    if format == PACKED_FORMAT:
        with np.load(path, allow_pickle=False) as archive:
            meta = json.loads(str(archive["meta"]))
            sample_rate = float(meta["sample_rate_hz"])
            channels = [str(c) for c in meta["channels"]]
            table = {
                int(l["id"]): TaskLabel(int(l["id"]), str(l["name"]))
                for l in meta["labels"]
            }
            trials = []
            labels = []
            for i, label_id in enumerate(meta["trial_label_ids"]):
                if int(label_id) not in table:
                    raise DatasetError(f"trial {i}: label id {label_id} not in table")
                label = table[int(label_id)]
                data = np.asarray(archive[f"trial_{i:04d}"], dtype=np.float64)
                trials.append(Recording(sample_rate, channels, data, trial_label=label))
                labels.append(label)
        return TrialSet(tuple(trials), tuple(labels))
    raise ValueError(f"unknown format {format!r}; use {MANIFEST_FORMAT} or {PACKED_FORMAT}")


def save_trialset(ts: TrialSet, path: str | Path, format: str = MANIFEST_FORMAT,
                  name: str = "dataset") -> Path:
    """Write a trial set to disk; returns the manifest/archive path.

    csv-manifest writes ``<path>/manifest.json`` plus one CSV per trial;
    packed-binary writes a single ``.npz`` at ``path``.
    """
    path = Path(path)
    table = ts.label_table()
    if format == MANIFEST_FORMAT:
        path.mkdir(parents=True, exist_ok=True)
        entries = []
        for i, (trial, label) in enumerate(zip(ts.trials, ts.labels)):
            fname = f"trial_{i:04d}.csv"
            _write_matrix_csv(trial.data, path / fname)
            entries.append({"file": fname, "label_id": label.id})
        doc = {
            "name": name,
            "sample_rate_hz": ts.sample_rate_hz if ts.trials else 0.0,
            "channels": list(ts.channels),
            "labels": [{"id": l.id, "name": l.name} for l in table],
            "trials": entries,
        }
        manifest = path / "manifest.json"
        manifest.write_text(json.dumps(doc, indent=2) + "\n")
        return manifest
    if format == PACKED_FORMAT:
        meta = {
            "name": name,
            "sample_rate_hz": ts.sample_rate_hz if ts.trials else 0.0,
            "channels": list(ts.channels),
            "labels": [{"id": l.id, "name": l.name} for l in table],
            "trial_label_ids": [l.id for l in ts.labels],
        }
        arrays = {f"trial_{i:04d}": t.data for i, t in enumerate(ts.trials)}
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savez(path, meta=json.dumps(meta), **arrays)
        return path
    raise ValueError(f"unknown format {format!r}")


def validate(ts: TrialSet) -> ValidationReport:
    """Check a trial set against the data-model invariants.

    Structural violations are errors; NaN/Inf samples and a missing EOG
    reference channel (which disables automatic artifact scoring) are warnings.
    """
    issues: list[tuple[str, str]] = []
    if ts.trials:
        first = ts.trials[0]
        if first.sample_rate_hz <= 0:
            issues.append(("error", f"sample rate must be positive, got {first.sample_rate_hz}"))
        names = first.channels
        if len(set(names)) != len(names):
            issues.append(("error", f"duplicate channel names: {names}"))
        if any(not n for n in names):
            issues.append(("error", "empty channel name"))
        for i, trial in enumerate(ts.trials):
            if trial.channels != names:
                issues.append(("error", f"trial {i}: channel layout differs from trial 0"))
            if trial.sample_rate_hz != first.sample_rate_hz:
                issues.append(("error", f"trial {i}: sample rate differs from trial 0"))
            bad = ~np.isfinite(trial.data)
            if bad.any():
                ch, idx = np.argwhere(bad)[0]
                issues.append((
                    "warning",
                    f"non-finite sample at trial {i}, channel {trial.channels[ch]!r}, "
                    f"index {idx}",
                ))
        if first.eog_index() is None:
            issues.append((
                "warning",
                f"no {EOG_NAME!r} channel; automatic artifact scoring is disabled",
            ))
    return ValidationReport(tuple(issues))


def slice_channel(r: Recording, channel: str, start: int, stop: int) -> np.ndarray:
    """Copy of one channel's half-open sample window [start, stop)."""
    idx = r.channel_index(channel)  # raises KeyError for unknown names
    if not (0 <= start <= stop <= r.n_samples):
        raise IndexError(
            f"window [{start}, {stop}) out of range for {r.n_samples} samples"
        )
    return r.data[idx, start:stop].copy()


def _write_matrix_csv(data: np.ndarray, path: Path) -> None:
    # %.17g round-trips float64 exactly, which is stronger than the 15
    # significant digits the interchange contract requires.
    with open(path, "w") as fh:
        for row in np.atleast_2d(data):
            fh.write(",".join(f"{v:.17g}" for v in row))
            fh.write("\n")


def export_recording(r: Recording, path: str | Path) -> Path:
    """Write one recording as a channels x samples CSV plus a metadata sidecar.

    The sidecar is ``<path>.meta.json`` with the sample rate, channel names
    and the trial label, enough for load_recording to reverse the export.
    """
    path = Path(path)
    try:
        _write_matrix_csv(r.data, path)
    except OSError as exc:
        raise OSError(f"cannot write recording to {path}: {exc}") from exc
    meta = {
        "sample_rate_hz": r.sample_rate_hz,
        "channels": list(r.channels),
        "trial_label": None if r.trial_label is None
        else {"id": r.trial_label.id, "name": r.trial_label.name},
    }
    Path(str(path) + ".meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    return path


def load_recording(path: str | Path) -> Recording:
    """Inverse of export_recording."""
    path = Path(path)
    if not path.exists():
        raise DatasetError(f"no such recording file: {path}")
    meta_path = Path(str(path) + ".meta.json")
    if not meta_path.exists():
        raise DatasetError(f"missing metadata sidecar: {meta_path}")
    meta = json.loads(meta_path.read_text())
    data = _read_trial_csv(path, 0)
    label = None
    if meta.get("trial_label") is not None:
        label = TaskLabel(int(meta["trial_label"]["id"]), str(meta["trial_label"]["name"]))
    return Recording(float(meta["sample_rate_hz"]), [str(c) for c in meta["channels"]],
                     data, trial_label=label)
