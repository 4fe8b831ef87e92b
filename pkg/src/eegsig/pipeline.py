"""Config-driven end-to-end run: load, validate, filter, ICA, features, train.

Every enabled stage persists its artifacts into the output directory
(filtered/clean datasets, per-trial ICA matrices, the feature CSV, the model
and metrics JSON), and the whole run is deterministic for a fixed seed. Stage
failures abort with the stage named; artifacts written so far are kept for
inspection.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import classify, features
from .core import (Recording, TrialSet, load_trialset, save_trialset, validate)
from .preprocess import (IcaConfig, IcaModel, apply_filter, design_lowpass,
                         fast_ica, reject_components, score_components)

logger = logging.getLogger("eegsig")

DEFAULT_ICA_THRESHOLD = 0.7
DEFAULT_LOWPASS_CUTOFF_HZ = 40.0
DEFAULT_LOWPASS_TAPS = 101


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name for reporting."""

    def __init__(self, stage: str, cause: Exception | str):
        self.stage = stage
        self.cause = str(cause)
        super().__init__(f"stage {stage!r} failed: {cause}")


@dataclass(frozen=True)
class LowpassSettings:
    cutoff_hz: float = DEFAULT_LOWPASS_CUTOFF_HZ
    taps: int = DEFAULT_LOWPASS_TAPS


@dataclass(frozen=True)
class IcaSettings:
    enabled: bool = True
    threshold: float = DEFAULT_ICA_THRESHOLD
    manual_reject: tuple[int, ...] = ()
    max_iterations: int = 1000
    tolerance: float = 1e-6
    nonlinearity: str = "tanh"


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one end-to-end run needs; JSON-serializable."""

    input: str
    lowpass: LowpassSettings | None = field(default_factory=LowpassSettings)
    ica: IcaSettings | None = field(default_factory=IcaSettings)
    features: features.FeatureConfig = field(default_factory=features.FeatureConfig)
    classifier_kind: str = "mlp"
    hyperparameters: dict = field(default_factory=dict)
    report_training_accuracy: bool = True
    cv_folds: int | None = 5
    seed: int = 0

    @classmethod
    def from_dict(cls, doc: dict) -> "PipelineConfig":
        if "input" not in doc:
            raise ValueError("config needs an 'input' manifest path")
        pre = doc.get("preprocess", {}) or {}
        lowpass = None
        if "lowpass" in pre and pre["lowpass"] is not None:
            lp = pre["lowpass"]
            lowpass = LowpassSettings(
                float(lp.get("cutoff_hz", DEFAULT_LOWPASS_CUTOFF_HZ)),
                int(lp.get("taps", DEFAULT_LOWPASS_TAPS)),
            )
        ica = None
        if "ica" in pre and pre["ica"] is not None:
            entry = pre["ica"]
            ica = IcaSettings(
                enabled=bool(entry.get("enabled", True)),
                threshold=float(entry.get("threshold", DEFAULT_ICA_THRESHOLD)),
                manual_reject=tuple(int(i) for i in entry.get("manual_reject", [])),
                max_iterations=int(entry.get("max_iterations", 1000)),
                tolerance=float(entry.get("tolerance", 1e-6)),
                nonlinearity=str(entry.get("nonlinearity", "tanh")),
            )
            if not ica.enabled:
                ica = None
        clf = doc.get("classifier", {}) or {}
        kind = str(clf.get("kind", "mlp"))
        hyper = dict(clf.get("hyperparameters", {}))
        ev = doc.get("evaluation", {}) or {}
        cv = ev.get("cv_folds")
        return cls(
            input=str(doc["input"]),
            lowpass=lowpass,
            ica=ica,
            features=features.FeatureConfig.from_dict(doc.get("features", {}) or {}),
            classifier_kind=kind,
            hyperparameters=hyper,
            report_training_accuracy=bool(ev.get("report_training_accuracy", True)),
            cv_folds=None if cv is None else int(cv),
            seed=int(doc.get("seed", 0)),
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "PipelineConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        return {
            "input": self.input,
            "preprocess": {
                "lowpass": None if self.lowpass is None else {
                    "cutoff_hz": self.lowpass.cutoff_hz, "taps": self.lowpass.taps},
                "ica": None if self.ica is None else {
                    "enabled": True,
                    "threshold": self.ica.threshold,
                    "manual_reject": list(self.ica.manual_reject),
                    "max_iterations": self.ica.max_iterations,
                    "tolerance": self.ica.tolerance,
                    "nonlinearity": self.ica.nonlinearity,
                },
            },
            "features": self.features.to_dict(),
            "classifier": {"kind": self.classifier_kind,
                           "hyperparameters": self.hyperparameters},
            "evaluation": {"report_training_accuracy": self.report_training_accuracy,
                           "cv_folds": self.cv_folds},
            "seed": self.seed,
        }


@dataclass
class PipelineReport:
    stages: list[dict] = field(default_factory=list)
    validation: dict = field(default_factory=dict)
    ica_rejections: list[list[int]] = field(default_factory=list)
    feature_summary: dict = field(default_factory=dict)
    metrics: dict = field(default_factory=dict)
    artifacts: dict = field(default_factory=dict)
    seed: int = 0

    def add_stage(self, name: str, seconds: float, **extra) -> None:
        self.stages.append({"stage": name, "seconds": round(seconds, 6), **extra})

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "stages": self.stages,
            "validation": self.validation,
            "ica_rejections": self.ica_rejections,
            "feature_summary": self.feature_summary,
            "metrics": self.metrics,
            "artifacts": self.artifacts,
        }

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(self.to_dict(), indent=2) + "\n")
        return path


def filter_trialset(ts: TrialSet, settings: LowpassSettings) -> TrialSet:
    kernel = design_lowpass(settings.cutoff_hz, ts.sample_rate_hz, settings.taps)
    trials = tuple(apply_filter(t, kernel) for t in ts.trials)
    return TrialSet(trials, ts.labels)


def ica_clean_trial(trial: Recording, settings: IcaSettings,
                    seed: int) -> tuple[Recording, IcaModel, list[int]]:
    """Run ICA on one trial and reject EOG-correlated plus manual components."""
    model = fast_ica(trial, IcaConfig(settings.max_iterations, settings.tolerance,
                                      settings.nonlinearity, seed))
    rejected = set(settings.manual_reject)
    eog = trial.eog_index()
    if eog is not None:
        for s in score_components(model, trial.data[eog]):
            if s.abs_correlation > settings.threshold:
                rejected.add(s.component_index)
    cleaned = reject_components(trial, model, rejected)
    return cleaned, model, sorted(rejected)


def ica_clean_trialset(ts: TrialSet, settings: IcaSettings, seed: int,
                       ) -> tuple[TrialSet, list[IcaModel], list[list[int]]]:
    cleaned = []
    models = []
    rejections = []
    for trial in ts.trials:
        out, model, rejected = ica_clean_trial(trial, settings, seed)
        cleaned.append(out)
        models.append(model)
        rejections.append(rejected)
    return TrialSet(tuple(cleaned), ts.labels), models, rejections


def save_ica_artifacts(models: list[IcaModel], rejections: list[list[int]],
                       out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, (model, rejected) in enumerate(zip(models, rejections)):
        np.savez(
            out_dir / f"trial_{i:04d}.npz",
            unmixing=model.unmixing,
            mixing=model.mixing,
            activations=model.activations,
            channel_means=model.channel_means,
            rejected=np.array(rejected, dtype=np.int64),
            converged=np.array([model.converged]),
        )


def train_and_evaluate(fm: features.FeatureMatrix, kind: str, hyper: dict,
                       seed: int, cv_folds: int | None,
                       report_training: bool = True) -> tuple[classify.TrainedClassifier, dict]:
    clf = classify.fit_classifier(fm, kind, hyper, seed)
    metrics: dict = {"classifier": kind, "hyperparameters": clf.hyperparameters,
                     "seed": seed}
    if report_training:
        train_metrics = classify.evaluate(clf.predict(fm.values), fm.labels,
                                          clf.n_classes)
        metrics["training"] = train_metrics.to_dict()
    if cv_folds:
        metrics["cross_validation"] = classify.cross_validate(
            fm, kind, hyper, cv_folds, seed)
    if kind == "mlp":
        metrics["loss_curve"] = list(clf.model.loss_curve)
    return clf, metrics


def run_pipeline(cfg: PipelineConfig, out_dir: str | Path) -> PipelineReport:
    """Execute every configured stage, persisting artifacts along the way."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report = PipelineReport(seed=cfg.seed)
    report.artifacts["output_dir"] = str(out)

    def run_stage(name: str, fn):
        start = time.perf_counter()
        try:
            result = fn()
        except StageError:
            raise
        except Exception as exc:
            report.add_stage(name, time.perf_counter() - start, failed=True)
            report.save(out / "report.json")
            raise StageError(name, exc) from exc
        report.add_stage(name, time.perf_counter() - start)
        return result

    ts = run_stage("load", lambda: load_trialset(cfg.input))
    logger.info("loaded %d trial(s) from %s", len(ts), cfg.input)

    def validate_stage():
        rep = validate(ts)
        report.validation = rep.to_dict()
        (out / "validation.json").write_text(json.dumps(rep.to_dict(), indent=2) + "\n")
        if not rep.ok:
            raise ValueError("; ".join(rep.errors()))
        return rep

    run_stage("validate", validate_stage)

    current = ts
    if cfg.lowpass is not None:
        def lowpass_stage():
            filtered = filter_trialset(ts, cfg.lowpass)
            report.artifacts["filtered"] = str(
                save_trialset(filtered, out / "filtered", name="filtered"))
            return filtered

        current = run_stage("lowpass", lowpass_stage)
        logger.info("low-pass filtered at %.1f Hz", cfg.lowpass.cutoff_hz)

    if cfg.ica is not None:
        filtered = current

        def ica_stage():
            cleaned, models, rejections = ica_clean_trialset(
                filtered, cfg.ica, cfg.seed)
            report.ica_rejections = rejections
            save_ica_artifacts(models, rejections, out / "ica")
            report.artifacts["ica"] = str(out / "ica")
            report.artifacts["clean"] = str(
                save_trialset(cleaned, out / "clean", name="clean"))
            return cleaned

        current = run_stage("ica", ica_stage)
        n_rejected = sum(len(r) for r in report.ica_rejections)
        logger.info("ICA rejected %d component(s) across %d trial(s)",
                    n_rejected, len(ts))

    def features_stage():
        fm = features.extract_features(current, cfg.features)
        report.artifacts["features"] = str(
            features.save_feature_csv(fm, out / "features.csv"))
        report.feature_summary = {
            "rows": fm.n_rows,
            "columns": fm.n_features,
            "feature_names": list(fm.feature_names),
        }
        return fm

    fm = run_stage("features", features_stage)
    logger.info("extracted %d feature(s) for %d trial(s)", fm.n_features, fm.n_rows)

    def train_stage():
        clf, metrics = train_and_evaluate(
            fm, cfg.classifier_kind, cfg.hyperparameters, cfg.seed,
            cfg.cv_folds, cfg.report_training_accuracy)
        report.metrics = metrics
        report.artifacts["model"] = str(
            classify.save_classifier(clf, out / "model.json"))
        (out / "metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")
        report.artifacts["metrics"] = str(out / "metrics.json")
        return clf

    run_stage("train", train_stage)
    if "training" in report.metrics:
        logger.info("training accuracy %.4f", report.metrics["training"]["accuracy"])
    if "cross_validation" in report.metrics:
        logger.info("cv mean accuracy %.4f",
                    report.metrics["cross_validation"]["mean_accuracy"])

    report.save(out / "report.json")
    return report
