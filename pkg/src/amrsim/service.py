"""JSON-over-HTTP session service for interactive prescribing.

Exposes environment sessions (a human or scripted client acts as the
prescribing agent) plus read access to completed run folders for the
viewer UI. Active-session payloads carry only observed quantities; the
true resistance trajectory and infection counts appear exclusively in the
reveal block returned once the episode finishes.

Endpoints (all JSON, api_version field on every payload):
    POST   /api/sessions                create a session
    GET    /api/sessions/{id}           current session descriptor
    POST   /api/sessions/{id}/step      submit one action vector
    GET    /api/sessions/{id}/history   everything previously served
    DELETE /api/sessions/{id}           drop a session
    GET    /api/runs                    list completed run folders
    GET    /api/runs/{id}/metrics       parsed metrics rows for one run
"""

from __future__ import annotations

import csv
import io
import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .config import ConfigError, ExperimentConfig, default_config, load_umbrella, set_by_path, validate_config
from .env import PrescribingEnv
from .experiment import results_root

API_VERSION = 1
DEFAULT_SESSION_CAPACITY = 64
DEFAULT_IDLE_EXPIRY_SECONDS = 3600


class CreateSessionRequest(BaseModel):
    seed: int = 0
    config_path: Optional[str] = None
    overrides: dict[str, Any] = {}


class StepRequest(BaseModel):
    actions: list[int]


@dataclass
class SessionState:
    session_id: str
    env: PrescribingEnv
    config: ExperimentConfig
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_used: float = field(default_factory=time.monotonic)
    step_index: int = 0
    status: str = "active"
    history: list[dict[str, Any]] = field(default_factory=list)
    # truth accumulated for the post-episode reveal only
    true_sigma_trajectory: list[list[float]] = field(default_factory=list)
    true_infected_counts: list[int] = field(default_factory=list)
    cumulative: dict[str, float] = field(
        default_factory=lambda: {"overall": 0.0, "individual": 0.0, "community": 0.0}
    )
    outcome_counts: dict[str, int] = field(default_factory=dict)
    reveal: Optional[dict[str, Any]] = None


def _observed_payload(env: PrescribingEnv) -> dict[str, Any]:
    return {
        "observed_antibiogram": [float(v) for v in env.antibiogram],
        "patients": [
            {"slot": i, "pi_hat": o.pi_hat, **{k: float(v) for k, v in o.extras.items()}}
            for i, o in enumerate(env.observed_patients)
        ],
    }


def _descriptor(session: SessionState) -> dict[str, Any]:
    env = session.env
    slots, choices = env.action_space_descriptor()
    return {
        "api_version": API_VERSION,
        "session_id": session.session_id,
        "status": session.status,
        "step_index": session.step_index,
        "max_time_steps": env.max_time_steps,
        "antibiotics": env.antibiotic_names,
        "action_space": {"num_slots": slots, "choices_per_slot": choices},
        **_observed_payload(env),
        **({"reveal": session.reveal} if session.reveal is not None else {}),
    }


def create_app(
    results_dir: str | Path | None = None,
    capacity: int = DEFAULT_SESSION_CAPACITY,
    idle_expiry_seconds: float = DEFAULT_IDLE_EXPIRY_SECONDS,
    static_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="amrsim session service")
    sessions: dict[str, SessionState] = {}
    registry_lock = threading.Lock()
    runs_root = results_root(results_dir)

    def _purge_expired() -> None:
        now = time.monotonic()
        stale = [
            sid for sid, s in sessions.items()
            if now - s.last_used > idle_expiry_seconds
        ]
        for sid in stale:
            del sessions[sid]

    def _get_session(session_id: str) -> SessionState:
        with registry_lock:
            _purge_expired()
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
        session.last_used = time.monotonic()
        return session

    # -- sessions --------------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    def create_session(req: CreateSessionRequest):
        try:
            if req.config_path is not None:
                config = load_umbrella(req.config_path)
            else:
                config = default_config()
            for path, value in req.overrides.items():
                set_by_path(config, path, value)
            validate_config(config)
        except ConfigError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        session_id = uuid.uuid4().hex
        env = PrescribingEnv(config)
        env.reset(req.seed)
        session = SessionState(session_id=session_id, env=env, config=config)
        session.true_sigma_trajectory.append([float(v) for v in env.balloons.sigma])
        with registry_lock:
            _purge_expired()
            if len(sessions) >= capacity:
                raise HTTPException(
                    status_code=503,
                    detail=f"session capacity ({capacity}) exceeded; "
                    "delete an existing session or retry later",
                )
            sessions[session_id] = session
        return _descriptor(session)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        with session.lock:
            return _descriptor(session)

    @app.post("/api/sessions/{session_id}/step")
    def submit_step(session_id: str, req: StepRequest):
        session = _get_session(session_id)
        with session.lock:
            if session.status != "active":
                raise HTTPException(
                    status_code=409, detail="session already finished; no further steps"
                )
            env = session.env
            slots, choices = env.action_space_descriptor()
            if len(req.actions) != slots:
                raise HTTPException(
                    status_code=422,
                    detail=f"action vector has length {len(req.actions)}, expected {slots}",
                )
            for slot, a in enumerate(req.actions):
                if not 0 <= a < choices:
                    raise HTTPException(
                        status_code=422,
                        detail=f"action {a} at slot {slot} is outside the valid "
                        f"range [0, {choices - 1}]",
                    )
            result = env.step(req.actions)
            bd = result.info["breakdown"]
            session.step_index += 1
            session.cumulative["overall"] += bd.overall
            session.cumulative["individual"] += bd.individual_mean
            session.cumulative["community"] += bd.community_mean
            for outcome in bd.outcomes:
                session.outcome_counts[outcome.result] = (
                    session.outcome_counts.get(outcome.result, 0) + 1
                )
            session.true_sigma_trajectory.append(
                [float(v) for v in result.info["true_sigma"]]
            )
            session.true_infected_counts.append(
                sum(1 for inf in result.info["true_infected"] if inf)
            )
            finished = result.truncated
            payload: dict[str, Any] = {
                "api_version": API_VERSION,
                "session_id": session.session_id,
                "step_index": session.step_index,
                "finished": finished,
                "actions": list(req.actions),
                "reward": {
                    "overall": bd.overall,
                    "individual": bd.individual_mean,
                    "community": bd.community_mean,
                },
                **_observed_payload(env),
            }
            session.history.append(
                {
                    "step_index": session.step_index,
                    "actions": list(req.actions),
                    "reward": payload["reward"],
                    "observed_antibiogram": payload["observed_antibiogram"],
                }
            )
            if finished:
                session.status = "finished"
                session.reveal = {
                    "true_sigma_trajectory": session.true_sigma_trajectory,
                    "true_infected_counts": session.true_infected_counts,
                    "cumulative_reward": dict(session.cumulative),
                    "outcome_counts": dict(session.outcome_counts),
                }
                payload["reveal"] = session.reveal
            return payload

    @app.get("/api/sessions/{session_id}/history")
    def get_history(session_id: str):
        session = _get_session(session_id)
        with session.lock:
            return {
                "api_version": API_VERSION,
                "session_id": session.session_id,
                "status": session.status,
                "steps": session.history,
                **({"reveal": session.reveal} if session.reveal is not None else {}),
            }

    @app.delete("/api/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str):
        with registry_lock:
            if session_id not in sessions:
                raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")
            del sessions[session_id]

    # -- run viewer ------------------------------------------------------

    @app.get("/api/runs")
    def list_runs():
        runs = []
        if runs_root.is_dir():
            for entry in sorted(runs_root.iterdir()):
                if not entry.is_dir():
                    continue
                run: dict[str, Any] = {"run_id": entry.name}
                summary_path = entry / "summary.json"
                try:
                    if summary_path.exists():
                        run["summary"] = json.loads(summary_path.read_text(encoding="utf-8"))
                    config_path = entry / "resolved_config.yaml"
                    if config_path.exists():
                        run["resolved_config"] = config_path.read_text(encoding="utf-8")
                except (OSError, json.JSONDecodeError) as exc:
                    run["error"] = str(exc)
                runs.append(run)
        return {"api_version": API_VERSION, "runs": runs}

    @app.get("/api/runs/{run_id}/metrics")
    def get_run_metrics(run_id: str):
        metrics_path = runs_root / run_id / "metrics.csv"
        if not metrics_path.exists():
            raise HTTPException(status_code=404, detail=f"no metrics for run {run_id!r}")
        text = metrics_path.read_text(encoding="utf-8")
        rows = list(csv.DictReader(io.StringIO(text)))
        return {"api_version": API_VERSION, "run_id": run_id, "rows": rows}

    # -- static UI assets -------------------------------------------------

    if static_dir is not None:
        static_path = Path(static_dir)

        @app.get("/")
        def index():
            return FileResponse(static_path / "index.html")

        app.mount("/assets", StaticFiles(directory=static_path / "assets"), name="assets")

    return app
