"""Command-line entry points: one subcommand per pipeline stage plus
generate-fixture, the end-to-end pipeline, and the HTTP service.

Stage subcommands share a working directory (--out) and compose: preprocess
writes filtered/, ica writes clean/ and ica/, features writes features.csv,
train writes model.json and metrics.json. Running them in sequence reproduces
a single `pipeline` run bit for bit.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import classify, features
from .core import DatasetError, load_trialset, save_trialset, validate
from .fixture import generate_fixture
from .pipeline import (PipelineConfig, StageError, filter_trialset,
                       ica_clean_trialset, run_pipeline, save_ica_artifacts,
                       train_and_evaluate)

logger = logging.getLogger("eegsig")


def _setup_logging(level: str) -> None:
    level = os.environ.get("EEGSIG_LOG", level)
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
    )


def _load_config(args) -> PipelineConfig:
    cfg = PipelineConfig.from_json(args.config)
    if args.seed is not None:
        cfg = PipelineConfig(**{**cfg.__dict__, "seed": args.seed})
    return cfg


def _resolve_input(cfg: PipelineConfig, workdir: Path, explicit: str | None,
                   stages=("clean", "filtered")) -> Path:
    """Newest available stage output in the working directory, else the
    config's input manifest."""
    if explicit:
        return Path(explicit)
    for stage in stages:
        candidate = workdir / stage / "manifest.json"
        if candidate.exists():
            return candidate
    return Path(cfg.input)


def cmd_validate(args) -> int:
    cfg = _load_config(args)
    ts = load_trialset(cfg.input)
    report = validate(ts)
    print(json.dumps(report.to_dict(), indent=2))
    return 0 if report.ok else 1


def cmd_preprocess(args) -> int:
    cfg = _load_config(args)
    if cfg.lowpass is None:
        print("config has no lowpass settings; nothing to do", file=sys.stderr)
        return 1
    out = Path(args.out)
    source = _resolve_input(cfg, out, args.input, stages=())
    ts = load_trialset(source)
    filtered = filter_trialset(ts, cfg.lowpass)
    manifest = save_trialset(filtered, out / "filtered", name="filtered")
    logger.info("wrote %s", manifest)
    print(str(manifest))
    return 0


def cmd_ica(args) -> int:
    cfg = _load_config(args)
    if cfg.ica is None:
        print("config has no ica settings; nothing to do", file=sys.stderr)
        return 1
    out = Path(args.out)
    source = _resolve_input(cfg, out, args.input, stages=("filtered",))
    ts = load_trialset(source)
    cleaned, models, rejections = ica_clean_trialset(ts, cfg.ica, cfg.seed)
    save_ica_artifacts(models, rejections, out / "ica")
    manifest = save_trialset(cleaned, out / "clean", name="clean")
    logger.info("wrote %s (rejected %s)", manifest,
                sum(len(r) for r in rejections))
    print(str(manifest))
    return 0


def cmd_features(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    if out.suffix == ".csv":
        csv_path, workdir = out, out.parent
    else:
        csv_path, workdir = out / "features.csv", out
    source = _resolve_input(cfg, workdir, args.input)
    ts = load_trialset(source)
    fm = features.extract_features(ts, cfg.features)
    features.save_feature_csv(fm, csv_path)
    logger.info("wrote %s (%d x %d)", csv_path, fm.n_rows, fm.n_features)
    print(str(csv_path))
    return 0


def cmd_train(args) -> int:
    cfg = _load_config(args)
    out = Path(args.out)
    csv_path = Path(args.features) if args.features else out / "features.csv"
    fm = features.load_feature_csv(csv_path)
    clf, metrics = train_and_evaluate(fm, cfg.classifier_kind, cfg.hyperparameters,
                                      cfg.seed, cfg.cv_folds,
                                      cfg.report_training_accuracy)
    classify.save_classifier(clf, out / "model.json")
    (out / "metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")
    print(json.dumps(metrics.get("training", {}), indent=2))
    return 0


def cmd_evaluate(args) -> int:
    out = Path(args.out)
    model_path = Path(args.model) if args.model else out / "model.json"
    csv_path = Path(args.features) if args.features else out / "features.csv"
    clf = classify.load_classifier(model_path)
    fm = features.load_feature_csv(csv_path)
    metrics = classify.evaluate(clf.predict(fm.values), fm.labels, clf.n_classes)
    doc = metrics.to_dict()
    (out / "evaluation.json").write_text(json.dumps(doc, indent=2) + "\n")
    print(json.dumps(doc, indent=2))
    return 0


def cmd_pipeline(args) -> int:
    cfg = _load_config(args)
    report = run_pipeline(cfg, args.out)
    print(json.dumps(report.metrics, indent=2))
    return 0


def cmd_generate_fixture(args) -> int:
    manifest = generate_fixture(args.out, classes=args.classes,
                                trials_per_class=args.per_class, seed=args.seed or 0)
    print(str(manifest))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(state_dir=args.state_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="eegsig",
        description="EEG preprocessing, feature extraction and classification",
    )
    parser.add_argument("--log-level", default="INFO",
                        help="logging level (EEGSIG_LOG env var overrides)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    common = {"--config": dict(required=True, help="pipeline config JSON"),
              "--seed": dict(type=int, default=None, help="override config seed")}

    p = add("validate", cmd_validate, help="check a dataset against the data model")
    for flag, kw in common.items():
        p.add_argument(flag, **kw)

    for name, fn, extra in (
        ("preprocess", cmd_preprocess, "apply the configured low-pass filter"),
        ("ica", cmd_ica, "estimate ICA per trial and reject artifact components"),
        ("features", cmd_features, "extract the feature matrix"),
    ):
        p = add(name, fn, help=extra)
        for flag, kw in common.items():
            p.add_argument(flag, **kw)
        p.add_argument("--out", required=True,
                       help="working directory (or .csv path for features)")
        p.add_argument("--in", dest="input", default=None,
                       help="explicit input manifest (defaults to prior stage output)")

    p = add("train", cmd_train, help="fit the configured classifier")
    for flag, kw in common.items():
        p.add_argument(flag, **kw)
    p.add_argument("--out", required=True)
    p.add_argument("--features", default=None, help="feature CSV (default <out>/features.csv)")

    p = add("evaluate", cmd_evaluate, help="apply a saved model to a feature CSV")
    p.add_argument("--out", required=True)
    p.add_argument("--model", default=None)
    p.add_argument("--features", default=None)

    p = add("pipeline", cmd_pipeline, help="run every configured stage end to end")
    for flag, kw in common.items():
        p.add_argument(flag, **kw)
    p.add_argument("--out", required=True)

    p = add("generate-fixture", cmd_generate_fixture,
            help="write a synthetic labeled dataset")
    p.add_argument("--classes", type=int, default=5)
    p.add_argument("--per-class", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = add("serve", cmd_serve, help="run the HTTP analysis service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8750)
    p.add_argument("--state-dir", default=None,
                   help="persist per-session artifacts under this directory")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.log_level)
    try:
        return args.fn(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
