"""JSON-over-HTTP analysis service: the programmatic face of the interactive
workflow.

A session holds one dataset and its derived stages (filtered, ICA/clean,
features, classification runs). Stage mutations are whole-stage replacements
serialized per session; anything downstream of a mutated stage is dropped so
clients always see consistent prerequisites. All numbers in responses come
straight from the library; the service never post-processes them.
"""

from __future__ import annotations

import itertools
import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import classify, features
from .core import (PACKED_FORMAT, DatasetError, Recording, TaskLabel, TrialSet,
                   load_trialset, slice_channel, validate)
from .pipeline import (DEFAULT_ICA_THRESHOLD, IcaSettings, LowpassSettings,
                       filter_trialset, ica_clean_trial, train_and_evaluate)
from .preprocess import IcaModel, score_components
from .spectral import power_spectrum
from .wavelet import band_map

STAGES = ("raw", "filtered", "clean")


class ApiError(Exception):
    def __init__(self, status: int, message: str):
        self.status = status
        self.message = message
        super().__init__(message)


def _bad_request(msg: str) -> ApiError:
    return ApiError(400, msg)


def _not_found(msg: str) -> ApiError:
    return ApiError(404, msg)


def _conflict(msg: str) -> ApiError:
    return ApiError(409, msg)


@dataclass
class Session:
    id: str
    lock: threading.Lock = field(default_factory=threading.Lock)
    raw: TrialSet | None = None
    validation: dict | None = None
    filtered: TrialSet | None = None
    filter_settings: dict | None = None
    ica_settings: IcaSettings | None = None
    ica_models: list[IcaModel] | None = None
    rejections: list[list[int]] | None = None  # applied per trial
    clean: list[Recording] | None = None
    feature_config: features.FeatureConfig | None = None
    feature_matrix: features.FeatureMatrix | None = None
    runs: list[dict] = field(default_factory=list)
    run_counter: "itertools.count" = field(default_factory=lambda: itertools.count(1))

    def drop_filtered(self):
        self.filtered = None
        self.filter_settings = None
        self.drop_ica()

    def drop_ica(self):
        self.ica_settings = None
        self.ica_models = None
        self.rejections = None
        self.clean = None
        self.drop_features()

    def drop_features(self):
        self.feature_config = None
        self.feature_matrix = None
        self.runs = []

    def dataset(self) -> TrialSet:
        if self.raw is None:
            raise _conflict("no dataset loaded; POST dataset first")
        return self.raw

    def stage_trialset(self, stage: str) -> TrialSet:
        ts = self.dataset()
        if stage == "raw":
            return ts
        if stage == "filtered":
            if self.filtered is None:
                raise _conflict("filter stage not run; POST filter first")
            return self.filtered
        if stage == "clean":
            if self.clean is None:
                raise _conflict("ICA stage not run; POST ica first")
            return TrialSet(tuple(self.clean), ts.labels)
        if stage == "auto":
            if self.clean is not None:
                return TrialSet(tuple(self.clean), ts.labels)
            return self.filtered if self.filtered is not None else ts
        raise _bad_request(f"unknown stage {stage!r}; choose from {STAGES}")

    def trial(self, stage: str, index: int) -> Recording:
        ts = self.stage_trialset(stage)
        if not 0 <= index < len(ts):
            raise _not_found(f"trial {index} out of range 0..{len(ts) - 1}")
        return ts.trials[index]

    def summary(self) -> dict:
        out = {
            "id": self.id,
            "stages": {
                "dataset": self.raw is not None,
                "filtered": self.filtered is not None,
                "ica": self.ica_models is not None,
                "features": self.feature_matrix is not None,
                "runs": len(self.runs),
            },
        }
        if self.raw is not None:
            ts = self.raw
            out["dataset"] = {
                "trials": len(ts),
                "channels": list(ts.channels),
                "sample_rate_hz": ts.sample_rate_hz if len(ts) else 0.0,
                "samples_per_trial": ts.trials[0].n_samples if len(ts) else 0,
                "labels": [{"id": l.id, "name": l.name} for l in ts.label_table()],
                "trial_label_ids": [int(l.id) for l in ts.labels],
                "validation": self.validation,
            }
        if self.filter_settings:
            out["filter"] = self.filter_settings
        if self.rejections is not None:
            out["ica"] = {"rejections": self.rejections,
                          "threshold": self.ica_settings.threshold}
        if self.feature_matrix is not None:
            out["features"] = {"rows": self.feature_matrix.n_rows,
                               "columns": self.feature_matrix.n_features}
        return out


def _parse_inline_dataset(doc: dict) -> TrialSet:
    try:
        sample_rate = float(doc["sample_rate_hz"])
        channels = [str(c) for c in doc["channels"]]
        table = {int(l["id"]): TaskLabel(int(l["id"]), str(l["name"]))
                 for l in doc.get("labels", [])}
        trials = []
        labels = []
        for i, entry in enumerate(doc["trials"]):
            label_id = int(entry.get("label_id", 0))
            label = table.get(label_id, TaskLabel(label_id, f"task-{label_id}"))
            data = np.asarray(entry["data"], dtype=np.float64)
            trials.append(Recording(sample_rate, channels, data, trial_label=label))
            labels.append(label)
        return TrialSet(tuple(trials), tuple(labels))
    except ApiError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise _bad_request(f"malformed inline dataset: {exc}") from exc


def create_app(state_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="eegsig service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    state_path = Path(state_dir) if state_dir else None

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content={"error": exc.message})

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(Exception)
    async def _internal_error(request: Request, exc: Exception):
        return JSONResponse(
            status_code=500,
            content={"error": f"internal error in {request.url.path}: {exc}"},
        )

    def get_session(session_id: str) -> Session:
        try:
            return sessions[session_id]
        except KeyError:
            raise _not_found(f"unknown session {session_id!r}") from None

    @app.post("/sessions")
    def create_session() -> dict:
        session = Session(id=uuid.uuid4().hex[:12])
        sessions[session.id] = session
        return {"id": session.id}

    @app.get("/sessions/{session_id}")
    def session_summary(session_id: str) -> dict:
        return get_session(session_id).summary()

    @app.post("/sessions/{session_id}/dataset")
    def post_dataset(session_id: str, body: dict) -> dict:
        session = get_session(session_id)
        if "path" in body:
            path = Path(str(body["path"]))
            fmt = str(body.get("format", PACKED_FORMAT if path.suffix == ".npz"
                                else "csv-manifest"))
            try:
                ts = load_trialset(path, fmt)
            except DatasetError as exc:
                raise _bad_request(str(exc)) from exc
        elif "inline" in body:
            ts = _parse_inline_dataset(body["inline"])
        else:
            raise _bad_request("body must carry 'path' or 'inline'")
        if len(ts) == 0:
            raise _bad_request("dataset has no trials")
        with session.lock:
            session.raw = ts
            session.validation = validate(ts).to_dict()
            session.drop_filtered()
        return session.summary()

    # 'from' is a Python keyword, so the window endpoint reads its own query
    @app.get("/sessions/{session_id}/channels/{name}")
    def get_channel_window(session_id: str, name: str, request: Request,
                           stage: str = "raw", trial: int = 0) -> dict:
        session = get_session(session_id)
        rec = session.trial(stage, trial)
        try:
            idx = rec.channel_index(name)
        except KeyError as exc:
            raise _not_found(str(exc)) from exc
        q = request.query_params
        try:
            start = int(q.get("from", 0))
            stop = int(q.get("to", rec.n_samples))
        except ValueError as exc:
            raise _bad_request(f"from/to must be integers: {exc}") from exc
        try:
            samples = slice_channel(rec, rec.channels[idx], start, stop)
        except IndexError as exc:
            raise _bad_request(str(exc)) from exc
        return {
            "channel": rec.channels[idx],
            "stage": stage,
            "trial": trial,
            "from": start,
            "to": stop,
            "sample_rate_hz": rec.sample_rate_hz,
            "samples": samples.tolist(),
        }

    @app.post("/sessions/{session_id}/filter")
    def post_filter(session_id: str, body: dict) -> dict:
        session = get_session(session_id)
        ts = session.dataset()
        settings = LowpassSettings(
            cutoff_hz=float(body.get("cutoff_hz", 40.0)),
            taps=int(body.get("taps", 101)),
        )
        try:
            filtered = filter_trialset(ts, settings)
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        with session.lock:
            session.filtered = filtered
            session.filter_settings = {"cutoff_hz": settings.cutoff_hz,
                                       "taps": settings.taps}
            session.drop_ica()
        return session.summary()

    @app.post("/sessions/{session_id}/ica")
    def post_ica(session_id: str, body: dict | None = None) -> dict:
        session = get_session(session_id)
        body = body or {}
        source = session.stage_trialset(
            "filtered" if session.filtered is not None else "raw")
        try:
            settings = IcaSettings(
                enabled=True,
                threshold=float(body.get("threshold", DEFAULT_ICA_THRESHOLD)),
                manual_reject=(),
                max_iterations=int(body.get("max_iterations", 1000)),
                tolerance=float(body.get("tolerance", 1e-6)),
                nonlinearity=str(body.get("nonlinearity", "tanh")),
            )
            seed = int(body.get("seed", 0))
            cleaned, models, rejections = [], [], []
            for trial in source.trials:
                out, model, rejected = ica_clean_trial(trial, settings, seed)
                cleaned.append(out)
                models.append(model)
                rejections.append(rejected)
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        with session.lock:
            session.ica_settings = settings
            session.ica_models = models
            session.rejections = rejections
            session.clean = cleaned
            session.drop_features()
        return {
            "trials": len(models),
            "converged": [m.converged for m in models],
            "rejections": rejections,
            "threshold": settings.threshold,
        }

    @app.get("/sessions/{session_id}/ica/components")
    def get_components(session_id: str, trial: int = 0) -> dict:
        session = get_session(session_id)
        if session.ica_models is None:
            raise _conflict("ICA stage not run; POST ica first")
        if not 0 <= trial < len(session.ica_models):
            raise _not_found(f"trial {trial} out of range")
        model = session.ica_models[trial]
        source = session.stage_trialset(
            "filtered" if session.filtered is not None else "raw")
        rec = source.trials[trial]
        eog = rec.eog_index()
        scores = {}
        if eog is not None:
            for s in score_components(model, rec.data[eog]):
                scores[s.component_index] = {
                    "abs_correlation": s.abs_correlation,
                    "constant_series": s.constant_series,
                }
        return {
            "trial": trial,
            "converged": model.converged,
            "rejected": session.rejections[trial],
            "components": [
                {
                    "index": i,
                    "score": scores.get(i, {}).get("abs_correlation"),
                    "constant_series": scores.get(i, {}).get("constant_series", False),
                    "activation": model.activations[i].tolist(),
                }
                for i in range(model.n_components)
            ],
        }

    @app.post("/sessions/{session_id}/ica/reject")
    def post_reject(session_id: str, body: dict) -> dict:
        session = get_session(session_id)
        if session.ica_models is None:
            raise _conflict("ICA stage not run; POST ica first")
        trial = int(body.get("trial", 0))
        if not 0 <= trial < len(session.ica_models):
            raise _not_found(f"trial {trial} out of range")
        if "indices" not in body or not isinstance(body["indices"], list):
            raise _bad_request("body must carry an 'indices' list")
        model = session.ica_models[trial]
        indices = []
        for raw_idx in body["indices"]:
            idx = int(raw_idx)
            if not 0 <= idx < model.n_components:
                raise _bad_request(
                    f"component index {idx} out of range 0..{model.n_components - 1}")
            indices.append(idx)
        source = session.stage_trialset(
            "filtered" if session.filtered is not None else "raw")
        rec = source.trials[trial]
        with session.lock:
            session.rejections[trial] = sorted(set(indices))
            cleaned = rec.with_data(model.reconstruct(keep_out=set(indices)))
            session.clean[trial] = cleaned
            session.drop_features()
        return {"trial": trial, "rejected": session.rejections[trial]}

    @app.get("/sessions/{session_id}/bands/{band}")
    def get_band(session_id: str, band: str, channel: str, trial: int = 0,
                 stage: str = "auto") -> dict:
        session = get_session(session_id)
        rec = session.trial(stage, trial)
        try:
            bands = {b.name: b for b in band_map(rec.sample_rate_hz, 5)}
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        if band not in bands:
            raise _not_found(f"unknown band {band!r}; have {sorted(bands)}")
        try:
            idx = rec.channel_index(channel)
        except KeyError as exc:
            raise _not_found(str(exc)) from exc
        cfg = features.FeatureConfig(bands=(band,))
        signal = features._band_signals(rec.data[idx], rec.sample_rate_hz, cfg)[band]
        info = bands[band]
        return {
            "band": band,
            "channel": rec.channels[idx],
            "trial": trial,
            "stage": stage,
            "nominal_range_hz": [info.nominal_low_hz, info.nominal_high_hz],
            "dyadic_range_hz": [info.dyadic_low_hz, info.dyadic_high_hz],
            "sample_rate_hz": rec.sample_rate_hz,
            "samples": signal.tolist(),
        }

    @app.get("/sessions/{session_id}/spectrum")
    def get_spectrum(session_id: str, channel: str, trial: int = 0,
                     stage: str = "auto") -> dict:
        session = get_session(session_id)
        rec = session.trial(stage, trial)
        try:
            idx = rec.channel_index(channel)
        except KeyError as exc:
            raise _not_found(str(exc)) from exc
        spectrum = power_spectrum(rec.data[idx], rec.sample_rate_hz)
        return {
            "channel": rec.channels[idx],
            "trial": trial,
            "stage": stage,
            "frequencies_hz": spectrum.frequencies_hz.tolist(),
            "power": spectrum.power.tolist(),
            "peak_frequency_hz": spectrum.peak_frequency_hz(),
        }

    @app.post("/sessions/{session_id}/features")
    def post_features(session_id: str, body: dict | None = None) -> dict:
        session = get_session(session_id)
        source = session.stage_trialset("auto")
        try:
            cfg = features.FeatureConfig.from_dict(body or {})
            fm = features.extract_features(source, cfg)
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        with session.lock:
            session.feature_config = cfg
            session.feature_matrix = fm
            session.runs = []
        return {"rows": fm.n_rows, "columns": fm.n_features,
                "feature_names": list(fm.feature_names)}

    @app.get("/sessions/{session_id}/features")
    def get_features(session_id: str, offset: int = 0, limit: int = 50) -> dict:
        session = get_session(session_id)
        fm = session.feature_matrix
        if fm is None:
            raise _conflict("features not computed; POST features first")
        if offset < 0 or limit < 0:
            raise _bad_request("offset and limit must be nonnegative")
        rows = fm.values[offset:offset + limit]
        labels = fm.labels[offset:offset + limit]
        return {
            "feature_names": list(fm.feature_names),
            "offset": offset,
            "total": fm.n_rows,
            "rows": rows.tolist(),
            "labels": labels.tolist(),
        }

    @app.post("/sessions/{session_id}/classify")
    def post_classify(session_id: str, body: dict | None = None) -> dict:
        session = get_session(session_id)
        body = body or {}
        fm = session.feature_matrix
        if fm is None:
            raise _conflict("features not computed; POST features first")
        kind = str(body.get("kind", "mlp"))
        hyper = dict(body.get("hyperparameters", {}))
        cv_raw = body.get("cv_folds", 5)
        cv_folds = None if cv_raw in (None, 0) else int(cv_raw)
        seed = int(body.get("seed", 0))
        try:
            clf, metrics = train_and_evaluate(fm, kind, hyper, seed, cv_folds)
        except ValueError as exc:
            raise _bad_request(str(exc)) from exc
        with session.lock:
            run_id = next(session.run_counter)
            run = {"run": run_id, **metrics}
            session.runs.append(run)
        if state_path is not None:
            run_dir = state_path / session.id / f"run_{run_id:03d}"
            classify.save_classifier(clf, run_dir / "model.json")
            (run_dir / "metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")
        return run

    @app.get("/sessions/{session_id}/runs/{run_id}")
    def get_run(session_id: str, run_id: int) -> dict:
        session = get_session(session_id)
        if not session.runs:
            raise _conflict("no classification run yet; POST classify first")
        for run in session.runs:
            if run["run"] == run_id:
                return run
        raise _not_found(f"unknown run {run_id}")

    return app
