"""Experiment CLI: train, select, plan, evaluate, demo-gen, serve.

All commands take ``--config <path>`` pointing at an experiment JSON:

    {"train_environment": "train.json",
     "demos": "demos.json",                  # or "demo_generator": {...}
     "start": [x, y], "goal": [x, y],        # session start/goal (optional
                                             #  when a demos file carries them)
     "test_scenarios": [{"name": "T1", "environment": "test.json",
                         "start": [x, y], "goal": [x, y]}, ...],
     "weight_set": [-2, -1, 0, 1],
     "beta": 0.3, "epsilon": 0.01,
     "dirichlet_alpha": [a1, ...],
     "models": ["rabrl-uniform", "rabrl-dirichlet", "maxent-baseline"],
     "dangerous_feature": "water",
     "baseline": {"learning_rate": 0.1, "iterations": 200},
     "output_dir": "out"}

Input paths resolve relative to the config file; ``output_dir`` resolves
relative to the working directory. Exit codes: 0 success, 2 config error,
3 runtime error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bayes, planner, riskselect
from .demonstrator import generate_demos
from .envmodel import (
    DemonstrationSet,
    Environment,
    InvalidEnvironment,
    InvalidTrajectory,
    load_demonstrations,
    load_environment,
    save_demonstrations,
)
from .maxent import FitDivergence, maxent_irl_fit

MODEL_RABRL_UNIFORM = "rabrl-uniform"
MODEL_RABRL_DIRICHLET = "rabrl-dirichlet"
MODEL_BASELINE = "maxent-baseline"
KNOWN_MODELS = (MODEL_RABRL_UNIFORM, MODEL_RABRL_DIRICHLET, MODEL_BASELINE)


class ConfigError(Exception):
    """Invalid or incomplete experiment configuration."""


@dataclass
class Scenario:
    name: str
    environment: Path
    start: tuple[int, int]
    goal: tuple[int, int]


@dataclass
class ExperimentConfig:
    train_environment: Path
    demos_path: Path | None
    demo_generator: dict | None
    start: tuple[int, int] | None
    goal: tuple[int, int] | None
    scenarios: list[Scenario]
    weight_set: tuple[float, ...]
    beta: float
    epsilon: float
    dirichlet_alpha: tuple[float, ...] | None
    models: list[str]
    dangerous_feature: str
    baseline_learning_rate: float
    baseline_iterations: int
    output_dir: Path
    base_dir: Path = field(repr=False, default=Path("."))


def _require(raw: dict, key: str):
    if key not in raw:
        raise ConfigError(f"config missing required key {key!r}")
    return raw[key]


def _pair(value, what: str) -> tuple[int, int]:
    try:
        x, y = value
        return (int(x), int(y))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what} must be an [x, y] pair, got {value!r}") from exc


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config JSON parse failure in {path}: {exc}") from exc
    base = path.parent

    train_env = base / _require(raw, "train_environment")
    if not train_env.exists():
        raise ConfigError(f"train environment file not found: {train_env}")

    demos_path = None
    if raw.get("demos") is not None:
        demos_path = base / raw["demos"]
    demo_generator = raw.get("demo_generator")
    if demos_path is None and demo_generator is None:
        raise ConfigError("config needs either 'demos' or 'demo_generator'")
    if demos_path is not None and demo_generator is None and not demos_path.exists():
        raise ConfigError(f"demonstration file not found: {demos_path}")

    scenarios = []
    for i, entry in enumerate(raw.get("test_scenarios", [])):
        env_path = base / _require(entry, "environment")
        if not env_path.exists():
            raise ConfigError(f"scenario environment file not found: {env_path}")
        scenarios.append(
            Scenario(
                name=str(entry.get("name", f"S{i}")),
                environment=env_path,
                start=_pair(_require(entry, "start"), "scenario start"),
                goal=_pair(_require(entry, "goal"), "scenario goal"),
            )
        )

    models = list(_require(raw, "models"))
    if not models:
        raise ConfigError("model list is empty")
    for m in models:
        if m not in KNOWN_MODELS:
            raise ConfigError(f"unknown model {m!r}; expected one of {KNOWN_MODELS}")

    alpha = raw.get("dirichlet_alpha")
    if MODEL_RABRL_DIRICHLET in models and alpha is None:
        raise ConfigError("rabrl-dirichlet requires 'dirichlet_alpha'")

    baseline = raw.get("baseline", {})
    epsilon = float(raw.get("epsilon", 0.01))
    if not 0.0 <= epsilon <= 1.0:
        raise ConfigError(f"epsilon {epsilon} outside [0, 1]")

    return ExperimentConfig(
        train_environment=train_env,
        demos_path=demos_path,
        demo_generator=demo_generator,
        start=_pair(raw["start"], "start") if "start" in raw else None,
        goal=_pair(raw["goal"], "goal") if "goal" in raw else None,
        scenarios=scenarios,
        weight_set=tuple(float(v) for v in raw.get("weight_set", (-2, -1, 0, 1))),
        beta=float(raw.get("beta", 0.3)),
        epsilon=epsilon,
        dirichlet_alpha=tuple(float(a) for a in alpha) if alpha is not None else None,
        models=models,
        dangerous_feature=str(_require(raw, "dangerous_feature")),
        baseline_learning_rate=float(baseline.get("learning_rate", 0.1)),
        baseline_iterations=int(baseline.get("iterations", 200)),
        output_dir=Path(raw.get("output_dir", "out")),
        base_dir=base,
    )


def load_demos(cfg: ExperimentConfig, env: Environment) -> DemonstrationSet:
    if cfg.demos_path is not None and cfg.demos_path.exists():
        return load_demonstrations(cfg.demos_path, env)
    if cfg.demo_generator is None:
        raise ConfigError(f"demonstration file not found: {cfg.demos_path}")
    return _generate_from_spec(cfg, env, seed=None)


def _generate_from_spec(cfg, env, seed=None) -> DemonstrationSet:
    gen = cfg.demo_generator
    if gen is None:
        raise ConfigError("config has no 'demo_generator' section")
    try:
        return generate_demos(
            env,
            np.asarray(gen["true_weights"], dtype=float),
            beta=float(gen.get("beta", 1.0)),
            count=int(gen.get("count", 1)),
            seed=int(seed if seed is not None else gen.get("seed", 0)),
            start=_pair(_require(gen, "start"), "generator start"),
            goal=_pair(_require(gen, "goal"), "generator goal"),
        )
    except KeyError as exc:
        raise ConfigError(f"demo_generator missing key {exc}") from exc


def _feature_index(env: Environment, name: str) -> int:
    if name not in env.feature_names:
        raise ConfigError(
            f"dangerous feature {name!r} not among features {env.feature_names}"
        )
    return env.feature_names.index(name)


def _rabrl_models(cfg) -> list[str]:
    return [m for m in cfg.models if m != MODEL_BASELINE]


def _prior_for(cfg, model: str) -> bayes.PriorSpec:
    if model == MODEL_RABRL_UNIFORM:
        return bayes.PriorSpec(bayes.MODIFIED_UNIFORM)
    return bayes.PriorSpec(bayes.DIRICHLET, alpha=cfg.dirichlet_alpha)


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def train_artifacts(cfg: ExperimentConfig) -> dict:
    """Compute posteriors, marginals, entropies, and baseline weights.

    Pure of the filesystem apart from reading inputs; cmd_train persists
    the result. The service reuses this for API/CLI parity.
    """
    env = load_environment(cfg.train_environment)
    demos = load_demos(cfg, env)
    space = bayes.RewardSpace.build(cfg.weight_set, env.n_features)

    result: dict = {"env": env, "demos": demos, "space": space, "posteriors": {}}
    for model in _rabrl_models(cfg):
        post = bayes.compute_posterior(env, demos, cfg.beta, space, _prior_for(cfg, model))
        marginals = bayes.all_marginals(post, space)
        entropies = [riskselect.normalized_entropy(m) for m in marginals]
        result["posteriors"][model] = {
            "posterior": post,
            "marginals": marginals,
            "entropies": entropies,
        }
    if MODEL_BASELINE in cfg.models:
        result["baseline_weights"] = maxent_irl_fit(
            env,
            demos,
            learning_rate=cfg.baseline_learning_rate,
            iterations=cfg.baseline_iterations,
        )
    return result


def cmd_train(cfg: ExperimentConfig) -> dict:
    art = train_artifacts(cfg)
    env = art["env"]
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)

    entropy_table: dict[str, list[float]] = {}
    for model, data in art["posteriors"].items():
        _write(out / f"posterior-{model}.json", bayes.posterior_to_json(data["posterior"]))
        _write(
            out / f"marginals-{model}.json",
            bayes.marginals_to_json(data["marginals"], env.feature_names),
        )
        entropy_table[model] = [float(h) for h in data["entropies"]]

    _write(
        out / "entropy.json",
        json.dumps(
            {"features": list(env.feature_names), "models": entropy_table},
            separators=(",", ":"),
        )
        + "\n",
    )
    with (out / "entropy.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "feature", "entropy"])
        for model, values in entropy_table.items():
            for name, h in zip(env.feature_names, values):
                writer.writerow([model, name, f"{h:.6f}"])

    if "baseline_weights" in art:
        _write(
            out / "baseline-weights.json",
            json.dumps(
                {
                    "features": list(env.feature_names),
                    "weights": [float(v) for v in art["baseline_weights"]],
                },
                separators=(",", ":"),
            )
            + "\n",
        )
    return art


def _load_posterior(path: Path) -> tuple[bayes.RewardSpace, bayes.Posterior]:
    if not path.exists():
        raise RuntimeError(f"trained artifact missing: {path} (run train first)")
    raw = json.loads(path.read_text())
    dimension = len(raw["vectors"][0])
    space = bayes.RewardSpace.build(raw["weight_set"], dimension)
    post = bayes.Posterior(space=space, mass=np.array(raw["mass"], dtype=float))
    return space, post


def _load_baseline(out: Path) -> np.ndarray:
    path = out / "baseline-weights.json"
    if not path.exists():
        raise RuntimeError(f"trained artifact missing: {path} (run train first)")
    return np.array(json.loads(path.read_text())["weights"], dtype=float)


def select_weights_for(cfg: ExperimentConfig, model: str, epsilon: float) -> np.ndarray:
    """Selected weight vector for one model from persisted train artifacts."""
    out = cfg.output_dir
    if model == MODEL_BASELINE:
        return _load_baseline(out)
    space, post = _load_posterior(out / f"posterior-{model}.json")
    marginals = bayes.all_marginals(post, space)
    return riskselect.select_weights(
        marginals, riskselect.SelectionConfig(epsilon), space.weight_set
    )


def cmd_select(cfg: ExperimentConfig, epsilon: float | None = None) -> dict[str, np.ndarray]:
    eps = cfg.epsilon if epsilon is None else float(epsilon)
    env = load_environment(cfg.train_environment)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    selections: dict[str, np.ndarray] = {}
    for model in cfg.models:
        w = select_weights_for(cfg, model, eps)
        selections[model] = w
        _write(
            out / f"selection-{model}.json",
            json.dumps(
                {
                    "model": model,
                    "epsilon": eps if model != MODEL_BASELINE else None,
                    "features": list(env.feature_names),
                    "weights": [float(v) for v in w],
                },
                separators=(",", ":"),
            )
            + "\n",
        )
        cm = riskselect.build_costmap(env, w)
        riskselect.save_costmap(cm, out / f"costmap-train-{model}.json")
        riskselect.save_costmap_pgm(cm, out / f"costmap-train-{model}.pgm")
    with (out / "weights.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "feature", "weight"])
        for model in cfg.models:
            for name, v in zip(env.feature_names, selections[model]):
                writer.writerow([model, name, f"{float(v):.6f}"])
    return selections


def _plan_scenario(cfg, scenario: Scenario, model: str, weights) -> planner.PlanResult:
    env = load_environment(scenario.environment)
    spec = planner.RiskSpec(dangerous_feature=_feature_index(env, cfg.dangerous_feature))
    cm = riskselect.build_costmap(env, weights)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    riskselect.save_costmap(cm, out / f"costmap-{scenario.name}-{model}.json")
    riskselect.save_costmap_pgm(cm, out / f"costmap-{scenario.name}-{model}.pgm")
    result = planner.plan(cm, scenario.start, scenario.goal, env=env, risk_spec=spec)
    _write(
        out / f"plan-{scenario.name}-{model}.json",
        json.dumps(result.to_dict(), separators=(",", ":")) + "\n",
    )
    return result


def cmd_plan(cfg: ExperimentConfig, scenario_name: str) -> dict[str, planner.PlanResult]:
    matches = [s for s in cfg.scenarios if s.name == scenario_name]
    if not matches:
        raise ConfigError(
            f"unknown scenario {scenario_name!r}; have {[s.name for s in cfg.scenarios]}"
        )
    scenario = matches[0]
    results = {}
    for model in cfg.models:
        weights = select_weights_for(cfg, model, cfg.epsilon)
        results[model] = _plan_scenario(cfg, scenario, model, weights)
    return results


def cmd_evaluate(cfg: ExperimentConfig, scatter: str | None = None):
    if not cfg.scenarios:
        raise ConfigError("config has no test_scenarios to evaluate")
    records = []
    for scenario in cfg.scenarios:
        for model in cfg.models:
            weights = select_weights_for(cfg, model, cfg.epsilon)
            result = _plan_scenario(cfg, scenario, model, weights)
            records.append(
                planner.PlanRecord(scenario=scenario.name, model=model, run=0, result=result)
            )
    rows, summary = planner.evaluate(records)

    out = cfg.output_dir
    with (out / "metrics.csv").open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "model", "run", "risk", "path_length"])
        for row in rows:
            writer.writerow(
                [row["scenario"], row["model"], row["run"],
                 f"{row['risk']:.6f}", row["path_length"]]
            )
    _write(out / "summary.json", json.dumps({"rows": summary}, separators=(",", ":")) + "\n")
    if scatter:
        _write_scatter(rows, scatter)
    return rows, summary


def _write_scatter(rows, path: str) -> None:
    # optional image output; data lives in metrics.csv either way
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 4))
    models = sorted({r["model"] for r in rows})
    markers = ["o", "s", "^", "D", "v"]
    for i, model in enumerate(models):
        xs = [r["path_length"] for r in rows if r["model"] == model]
        ys = [r["risk"] for r in rows if r["model"] == model]
        ax.scatter(xs, ys, label=model, marker=markers[i % len(markers)])
    ax.set_xlabel("path length")
    ax.set_ylabel("risk")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_demo_gen(cfg: ExperimentConfig, seed: int | None = None) -> Path:
    env = load_environment(cfg.train_environment)
    demos = _generate_from_spec(cfg, env, seed=seed)
    target = cfg.demos_path
    if target is None:
        target = cfg.output_dir / "demos.json"
        target.parent.mkdir(parents=True, exist_ok=True)
    save_demonstrations(demos, target)
    return target


def cmd_serve(cfg: ExperimentConfig, port: int, ui_dir: str | None = None) -> None:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(cfg, ui_dir=ui_dir), host="127.0.0.1", port=port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskirl",
        description="Learn risk-averse grid navigation rewards from demonstrations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="experiment config JSON")
        p.add_argument("--output", help="override config output_dir")
        return p

    add("train", "compute posteriors, marginals, entropies, baseline weights")
    p = add("select", "select weights and emit costmaps for the training grid")
    p.add_argument("--epsilon", type=float, help="acceptable-risk level override")
    p = add("plan", "plan one test scenario for every model")
    p.add_argument("--scenario", required=True)
    p = add("evaluate", "plan all scenarios and emit metrics.csv / summary.json")
    p.add_argument("--scatter", help="also write a risk vs path-length scatter image")
    p = add("demo-gen", "sample demonstrations from the config's generator spec")
    p.add_argument("--seed", type=int, help="override generator seed")
    p = add("serve", "run the local HTTP/WebSocket service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="directory of built frontend assets to serve at /")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.output:
            cfg.output_dir = Path(args.output)
        if args.command == "train":
            cmd_train(cfg)
        elif args.command == "select":
            cmd_select(cfg, epsilon=args.epsilon)
        elif args.command == "plan":
            cmd_plan(cfg, args.scenario)
        elif args.command == "evaluate":
            cmd_evaluate(cfg, scatter=args.scatter)
        elif args.command == "demo-gen":
            cmd_demo_gen(cfg, seed=args.seed)
        elif args.command == "serve":
            cmd_serve(cfg, port=args.port, ui_dir=args.ui)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (
        InvalidEnvironment,
        InvalidTrajectory,
        FitDivergence,
        bayes.DegeneratePosterior,
        planner.UnreachableGoal,
        RuntimeError,
        ValueError,
        OSError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
