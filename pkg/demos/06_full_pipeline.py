"""The whole workflow from one config document, as the CLI and service run it:
load -> validate -> low-pass -> ICA -> features -> train/evaluate.

Every stage leaves its artifacts in the output directory, and two runs with
the same seed are byte-identical.
"""

import json
import tempfile
from pathlib import Path

from eegsig import PipelineConfig, generate_fixture, run_pipeline

workdir = Path(tempfile.mkdtemp(prefix="eegsig-demo-"))
manifest = generate_fixture(workdir / "data", classes=5, trials_per_class=8, seed=9)

config = {
    "input": str(manifest),
    "preprocess": {
        "lowpass": {"cutoff_hz": 40.0, "taps": 101},
        "ica": {"enabled": True, "threshold": 0.7},
    },
    "features": {"bands": ["delta", "theta", "alpha", "beta", "gamma"]},
    "classifier": {"kind": "mlp", "hyperparameters": {"hidden": 20, "epochs": 300}},
    "evaluation": {"report_training_accuracy": True, "cv_folds": 5},
    "seed": 9,
}
(workdir / "config.json").write_text(json.dumps(config, indent=2))

report = run_pipeline(PipelineConfig.from_dict(config), workdir / "out")

print("stage timings:")
for stage in report.stages:
    print(f"  {stage['stage']:<9} {stage['seconds']:.2f}s")

rejected = sum(len(r) for r in report.ica_rejections)
print(f"\nICA rejected {rejected} components across {len(report.ica_rejections)} trials")
print(f"features: {report.feature_summary['rows']} x {report.feature_summary['columns']}")
print(f"training accuracy: {report.metrics['training']['accuracy']:.3f}")
print(f"5-fold CV accuracy: {report.metrics['cross_validation']['mean_accuracy']:.3f}")

print("\nartifacts:")
for name, path in report.artifacts.items():
    print(f"  {name}: {path}")

again = run_pipeline(PipelineConfig.from_dict(config), workdir / "out2")
same = ((workdir / "out" / "features.csv").read_bytes()
        == (workdir / "out2" / "features.csv").read_bytes())
print(f"\nsecond run byte-identical features: {same}, "
      f"equal metrics: {report.metrics == again.metrics}")
