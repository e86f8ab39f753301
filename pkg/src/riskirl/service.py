"""Local HTTP + WebSocket facade for the companion UI.

One session per process: a single environment with a shared demonstration
list, posteriors by id, and per-posterior selections. Mutating endpoints
serialize on a lock; training snapshots the demo list at submission, so a
run never sees mid-training edits. Results are produced by the same core
functions the CLI uses, so /train and /select match CLI outputs exactly.

Endpoints
---------
GET    /env                      environment JSON (byte-equivalent round-trip)
GET    /demos                    demonstration-set JSON
POST   /demos                    {"states": [[x, y], ...]} -> {"id": n}
DELETE /demos/{id}
POST   /train                    {"beta": b, "prior": {"kind": ..., "alpha": [...]}}
                                 -> {"token": t} (poll GET /train/{token})
GET    /train/{token}            {"status": "running"|"done", "posterior_id": p}
GET    /posterior/{id}/marginals
GET    /posterior/{id}/entropy
POST   /select                   {"epsilon": e, "posterior_id": p?}
                                 -> weights + costmap (stored for /plan)
POST   /plan                     {"start": [x,y], "goal": [x,y], "model": p}
WS     /teleop                   {"action": "up|down|left|right|stay"} ->
                                 {"state": [x, y], "features": [bits]};
                                 {"action": "commit"} stores the recorded
                                 trajectory as a demonstration.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, Response, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from . import bayes, planner, riskselect
from .envmodel import (
    ACTIONS,
    DemonstrationSet,
    InvalidTrajectory,
    Trajectory,
    environment_to_json,
    load_demonstrations,
    load_environment,
    step,
    validate_trajectory,
)
from .harness import ExperimentConfig, _feature_index


@dataclass
class Session:
    env: object
    env_bytes: bytes
    start: tuple[int, int]
    goal: tuple[int, int]
    weight_set: tuple[float, ...]
    beta_default: float
    epsilon_default: float
    dangerous_feature: int | None
    demos: list[Trajectory] = field(default_factory=list)
    posteriors: dict = field(default_factory=dict)
    selections: dict = field(default_factory=dict)
    train_jobs: dict = field(default_factory=dict)
    next_posterior_id: int = 1
    next_token: int = 1
    lock: threading.Lock = field(default_factory=threading.Lock)
    training_active: bool = False


def _error(status: int, message: str, **extra):
    return JSONResponse(status_code=status, content={"error": message, **extra})


def create_app(cfg: ExperimentConfig, ui_dir: str | None = None) -> FastAPI:
    env = load_environment(cfg.train_environment)
    start, goal = cfg.start, cfg.goal
    preloaded: list[Trajectory] = []
    if cfg.demos_path is not None and cfg.demos_path.exists():
        dset = load_demonstrations(cfg.demos_path, env)
        preloaded = list(dset.trajectories)
        start = start or dset.start
        goal = goal or dset.goal
    if start is None or goal is None:
        raise ValueError("service needs 'start' and 'goal' (config or demos file)")

    dangerous = None
    if cfg.dangerous_feature in env.feature_names:
        dangerous = _feature_index(env, cfg.dangerous_feature)

    session = Session(
        env=env,
        env_bytes=environment_to_json(env).encode(),
        start=tuple(start),
        goal=tuple(goal),
        weight_set=cfg.weight_set,
        beta_default=cfg.beta,
        epsilon_default=cfg.epsilon,
        dangerous_feature=dangerous,
        demos=preloaded,
    )

    app = FastAPI(title="riskirl service")
    app.state.session = session

    @app.get("/env")
    def get_env():
        return Response(content=session.env_bytes, media_type="application/json")

    @app.get("/demos")
    def get_demos():
        return {
            "start": list(session.start),
            "goal": list(session.goal),
            "trajectories": [[list(s) for s in t.states] for t in session.demos],
        }

    def _validated_demo(states_raw):
        states = tuple((int(x), int(y)) for x, y in states_raw)
        traj = Trajectory(states)
        validate_trajectory(traj, session.env)
        if traj.start() != session.start:
            raise InvalidTrajectory(
                f"trajectory starts at {traj.start()}, expected {session.start}", index=0
            )
        return traj

    @app.post("/demos")
    def post_demos(body: dict):
        if "states" not in body:
            return _error(400, "body needs 'states'")
        try:
            traj = _validated_demo(body["states"])
        except InvalidTrajectory as exc:
            return _error(400, str(exc), index=exc.index)
        except (TypeError, ValueError) as exc:
            return _error(400, f"malformed states: {exc}")
        with session.lock:
            session.demos.append(traj)
            demo_id = len(session.demos) - 1
        return {"id": demo_id, "count": len(session.demos)}

    @app.delete("/demos/{demo_id}")
    def delete_demo(demo_id: int):
        with session.lock:
            if not 0 <= demo_id < len(session.demos):
                return _error(404, f"no demonstration with id {demo_id}")
            session.demos.pop(demo_id)
        return {"count": len(session.demos)}

    def _run_training(token: int, beta: float, prior: bayes.PriorSpec, demos_snapshot):
        try:
            space = bayes.RewardSpace.build(session.weight_set, session.env.n_features)
            dset = DemonstrationSet(
                trajectories=demos_snapshot, start=session.start, goal=session.goal
            )
            post = bayes.compute_posterior(session.env, dset, beta, space, prior)
            marginals = bayes.all_marginals(post, space)
            entropies = [riskselect.normalized_entropy(m) for m in marginals]
            with session.lock:
                pid = session.next_posterior_id
                session.next_posterior_id += 1
                session.posteriors[pid] = {
                    "space": space,
                    "posterior": post,
                    "marginals": marginals,
                    "entropies": entropies,
                    "beta": beta,
                }
                session.train_jobs[token] = {"status": "done", "posterior_id": pid}
        except Exception as exc:  # surfaced via the poll endpoint
            with session.lock:
                session.train_jobs[token] = {"status": "failed", "error": str(exc)}
        finally:
            session.training_active = False

    @app.post("/train")
    def post_train(body: dict | None = None):
        body = body or {}
        beta = float(body.get("beta", session.beta_default))
        prior_raw = body.get("prior", {"kind": bayes.MODIFIED_UNIFORM})
        try:
            prior = bayes.PriorSpec(
                kind=prior_raw.get("kind", bayes.MODIFIED_UNIFORM),
                alpha=tuple(prior_raw["alpha"]) if "alpha" in prior_raw else None,
            )
        except ValueError as exc:
            return _error(400, str(exc))
        with session.lock:
            if session.training_active:
                return _error(409, "training already in progress")
            if not session.demos:
                return _error(400, "no demonstrations recorded")
            session.training_active = True
            token = session.next_token
            session.next_token += 1
            session.train_jobs[token] = {"status": "running"}
            demos_snapshot = list(session.demos)
        thread = threading.Thread(
            target=_run_training, args=(token, beta, prior, demos_snapshot), daemon=True
        )
        thread.start()
        return {"token": token}

    @app.get("/train/{token}")
    def get_train(token: int):
        job = session.train_jobs.get(token)
        if job is None:
            return _error(404, f"unknown training token {token}")
        return job

    def _posterior_entry(pid):
        if pid is None:
            if not session.posteriors:
                return None
            pid = max(session.posteriors)
        return session.posteriors.get(pid), pid

    @app.get("/posterior/{pid}/marginals")
    def get_marginals(pid: int):
        entry = session.posteriors.get(pid)
        if entry is None:
            return _error(404, f"unknown posterior id {pid}")
        return {
            "features": list(session.env.feature_names),
            "weight_set": list(entry["space"].weight_set),
            "marginals": [[float(p) for p in m.probs] for m in entry["marginals"]],
        }

    @app.get("/posterior/{pid}/entropy")
    def get_entropy(pid: int):
        entry = session.posteriors.get(pid)
        if entry is None:
            return _error(404, f"unknown posterior id {pid}")
        return {
            "features": list(session.env.feature_names),
            "entropy": [float(h) for h in entry["entropies"]],
        }

    @app.post("/select")
    def post_select(body: dict | None = None):
        body = body or {}
        epsilon = float(body.get("epsilon", session.epsilon_default))
        found = _posterior_entry(body.get("posterior_id"))
        if found is None or found[0] is None:
            return _error(404, "no trained posterior")
        entry, pid = found
        try:
            weights = riskselect.select_weights(
                entry["marginals"],
                riskselect.SelectionConfig(epsilon),
                entry["space"].weight_set,
            )
        except ValueError as exc:
            return _error(400, str(exc))
        cm = riskselect.build_costmap(session.env, weights)
        with session.lock:
            session.selections[pid] = {"epsilon": epsilon, "weights": weights, "costmap": cm}
        return {
            "posterior_id": pid,
            "epsilon": epsilon,
            "features": list(session.env.feature_names),
            "weights": [float(v) for v in weights],
            "costmap": {
                "width": cm.width,
                "height": cm.height,
                "costs": [None if not np.isfinite(c) else float(c) for c in cm.costs],
            },
        }

    @app.post("/plan")
    def post_plan(body: dict):
        for key in ("start", "goal"):
            if key not in body:
                return _error(400, f"body needs '{key}'")
        pid = body.get("model")
        found = _posterior_entry(pid)
        if found is None or found[0] is None:
            return _error(404, f"unknown posterior id {pid}")
        _, pid = found
        selection = session.selections.get(pid)
        if selection is None:
            return _error(409, f"posterior {pid} has no selection yet (POST /select first)")
        start = tuple(int(v) for v in body["start"])
        goal = tuple(int(v) for v in body["goal"])
        spec = None
        if session.dangerous_feature is not None:
            spec = planner.RiskSpec(dangerous_feature=session.dangerous_feature)
        try:
            result = planner.plan(
                selection["costmap"], start, goal, env=session.env, risk_spec=spec
            )
        except planner.UnreachableGoal as exc:
            return _error(409, str(exc))
        except ValueError as exc:
            return _error(400, str(exc))
        return result.to_dict()

    @app.websocket("/teleop")
    async def teleop(ws: WebSocket):
        await ws.accept()
        current = session.start
        pending = [current]

        def state_message():
            bits = session.env.features_at(current)
            return {"state": list(current), "features": [int(b) for b in bits]}

        await ws.send_json(state_message())
        try:
            while True:
                msg = await ws.receive_json()
                action = msg.get("action")
                if action in ACTIONS:
                    current = step(session.env, current, action)
                    pending.append(current)
                    await ws.send_json(state_message())
                elif action == "commit":
                    traj = Trajectory(tuple(pending))
                    try:
                        validate_trajectory(traj, session.env)
                    except InvalidTrajectory as exc:
                        await ws.send_json({"error": str(exc), "index": exc.index})
                        continue
                    with session.lock:
                        session.demos.append(traj)
                        demo_id = len(session.demos) - 1
                    current = session.start
                    pending = [current]
                    await ws.send_json({"committed": demo_id, **state_message()})
                else:
                    await ws.send_json(
                        {"error": f"unknown action {action!r}", "actions": list(ACTIONS)}
                    )
        except WebSocketDisconnect:
            pass

    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
