"""Datasets on disk: generate a synthetic one, load it back, poke at it.

A dataset is a JSON manifest next to one headerless CSV per trial
(channels x samples). The generator writes the reference layout:
7 channels (c3 c4 p3 p4 o1 o2 EOG) x 2500 samples at 250 Hz.
"""

import json
import tempfile
from pathlib import Path

from eegsig import generate_fixture, load_trialset, slice_channel, validate

workdir = Path(tempfile.mkdtemp(prefix="eegsig-demo-"))

manifest = generate_fixture(workdir / "data", classes=5, trials_per_class=2, seed=42)
print(f"wrote {manifest}")
print(json.dumps(json.loads(manifest.read_text()), indent=2)[:400], "...\n")

ts = load_trialset(manifest)
print(f"loaded {len(ts)} trials, channels {ts.channels}, fs {ts.sample_rate_hz} Hz")
print("labels:", [(l.id, l.name) for l in ts.label_table()])

report = validate(ts)
print(f"\nvalidation ok={report.ok}, issues={list(report.issues)}")

# half-open sample windows come back as copies; the recording is immutable
trial = ts.trials[0]
window = slice_channel(trial, "c3", 0, 8)
print(f"\nfirst 8 samples of c3: {window.round(3)}")
window[:] = 0  # scribbling on the copy cannot touch the recording
assert slice_channel(trial, "c3", 0, 8).any()
print("source recording unchanged after mutating the slice")
