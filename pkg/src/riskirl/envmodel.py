"""Feature-labeled gridworld, trajectories, and their JSON formats.

Coordinates are ``(x, y)`` with ``0 <= x < width`` and ``0 <= y < height``;
cell index ``y * width + x`` (row-major). Every cell carries a binary feature
vector of length D. Transitions are deterministic: an action either moves to
the 4-adjacent cell or stays in place when blocked by a boundary or obstacle.

File formats
------------
Environment JSON::

    {"width": W, "height": H, "features": [names...],
     "cells": [[bit, ...] per cell, row-major],
     "obstacles": [[x, y], ...], "discount": g, "horizon": N}

Demonstration JSON::

    {"start": [x, y], "goal": [x, y], "trajectories": [[[x, y], ...], ...]}

``save_environment``/``save_demonstrations`` emit a canonical byte encoding,
so serialize(load(path)) is byte-identical for canonicalized inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

Cell = tuple[int, int]

ACTIONS = ("up", "down", "left", "right", "stay")

_ACTION_DELTA = {
    "up": (0, -1),
    "down": (0, 1),
    "left": (-1, 0),
    "right": (1, 0),
    "stay": (0, 0),
}


class InvalidEnvironment(ValueError):
    """Environment file failed to parse or violates an invariant."""


class InvalidTrajectory(ValueError):
    """Trajectory violates an invariant; ``index`` is the offending state."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class Environment:
    """Gridworld without a reward function.

    Attributes
    ----------
    width, height : int
        Grid dimensions.
    feature_names : tuple of str
        Ordered semantic labels; D = len(feature_names).
    cell_features : np.ndarray, shape (width*height, D)
        Binary feature vector per cell, row-major.
    obstacles : frozenset of (x, y)
        Impassable cells.
    discount : float
        In [0, 1); retained for format fidelity (finite-horizon planning
        sums undiscounted rewards).
    horizon : int
        Maximum trajectory length in steps.
    """

    width: int
    height: int
    feature_names: tuple[str, ...]
    cell_features: np.ndarray = field(repr=False)
    obstacles: frozenset[Cell]
    discount: float
    horizon: int

    def __post_init__(self):
        self.cell_features.setflags(write=False)

    @property
    def n_cells(self) -> int:
        return self.width * self.height

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def index(self, cell: Cell) -> int:
        return cell[1] * self.width + cell[0]

    def cell(self, index: int) -> Cell:
        return (index % self.width, index // self.width)

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_obstacle(self, cell: Cell) -> bool:
        return cell in self.obstacles

    def features_at(self, cell: Cell) -> np.ndarray:
        if not self.in_bounds(cell):
            raise InvalidEnvironment(f"cell {cell} outside {self.width}x{self.height} grid")
        return self.cell_features[self.index(cell)]


@dataclass(frozen=True)
class Trajectory:
    """Ordered state sequence; the unit of demonstration and of plan output."""

    states: tuple[Cell, ...]

    @property
    def length(self) -> int:
        return len(self.states)

    @property
    def steps(self) -> int:
        return len(self.states) - 1

    def start(self) -> Cell:
        return self.states[0]

    def end(self) -> Cell:
        return self.states[-1]


@dataclass
class DemonstrationSet:
    """Demonstration trajectories sharing a start cell and an absorbing goal."""

    trajectories: list[Trajectory]
    start: Cell
    goal: Cell

    def __post_init__(self):
        if not self.trajectories:
            raise InvalidTrajectory("demonstration set is empty")
        for i, traj in enumerate(self.trajectories):
            if traj.start() != tuple(self.start):
                raise InvalidTrajectory(
                    f"trajectory {i} starts at {traj.start()}, expected start {tuple(self.start)}",
                    index=0,
                )


def step(env: Environment, state: Cell, action: str) -> Cell:
    """Apply a deterministic action; blocked moves are self-transitions."""
    if action not in _ACTION_DELTA:
        raise ValueError(f"unknown action {action!r}; expected one of {ACTIONS}")
    dx, dy = _ACTION_DELTA[action]
    nxt = (state[0] + dx, state[1] + dy)
    if not env.in_bounds(nxt) or env.is_obstacle(nxt):
        return state
    return nxt


def validate_trajectory(traj: Trajectory, env: Environment) -> None:
    """Check adjacency, obstacle avoidance, and bounds; raise InvalidTrajectory."""
    if traj.length < 1:
        raise InvalidTrajectory("trajectory has no states")
    for i, s in enumerate(traj.states):
        if not env.in_bounds(s):
            raise InvalidTrajectory(f"state {i} at {s} is outside the grid", index=i)
        if env.is_obstacle(s):
            raise InvalidTrajectory(f"state {i} at {s} is an obstacle cell", index=i)
        if i > 0:
            px, py = traj.states[i - 1]
            dist = abs(s[0] - px) + abs(s[1] - py)
            if dist > 1:
                raise InvalidTrajectory(
                    f"state {i} at {s} is not adjacent to previous state ({px}, {py})",
                    index=i,
                )


def feature_count(traj: Trajectory, env: Environment) -> np.ndarray:
    """Per-feature visit counts: component i is the number of trajectory
    states whose feature i is set. Returned as float64 for direct use in
    dot products and gradients."""
    counts = np.zeros(env.n_features)
    for i, s in enumerate(traj.states):
        if not env.in_bounds(s):
            raise InvalidTrajectory(f"state {i} at {s} is outside the grid", index=i)
        counts += env.cell_features[env.index(s)]
    return counts


def _validate_environment(env: Environment) -> None:
    if env.width < 1 or env.height < 1:
        raise InvalidEnvironment(f"grid {env.width}x{env.height} has no cells")
    if env.n_features < 1:
        raise InvalidEnvironment("environment declares no features")
    if not (0.0 <= env.discount < 1.0):
        raise InvalidEnvironment(f"discount {env.discount} outside [0, 1)")
    if env.horizon < 1:
        raise InvalidEnvironment(f"horizon {env.horizon} must be >= 1")
    if env.cell_features.shape != (env.n_cells, env.n_features):
        raise InvalidEnvironment(
            f"cells array has shape {env.cell_features.shape}, "
            f"expected ({env.n_cells}, {env.n_features})"
        )
    bits = env.cell_features
    if not np.isin(bits, (0, 1)).all():
        bad = int(np.argwhere(~np.isin(bits, (0, 1)))[0][0])
        raise InvalidEnvironment(f"cell {bad} has a non-binary feature value")
    for obs in env.obstacles:
        if not env.in_bounds(obs):
            raise InvalidEnvironment(f"obstacle {obs} is outside the grid")
    obstacle_idx = {env.index(o) for o in env.obstacles}
    for idx in range(env.n_cells):
        if idx in obstacle_idx:
            continue
        if bits[idx].sum() == 0:
            raise InvalidEnvironment(f"cell {idx} at {env.cell(idx)} has no feature set")


def make_environment(
    width: int,
    height: int,
    feature_names,
    cell_features,
    obstacles=(),
    discount: float = 0.95,
    horizon: int = 32,
) -> Environment:
    """Build and validate an Environment from in-memory data."""
    env = Environment(
        width=int(width),
        height=int(height),
        feature_names=tuple(feature_names),
        cell_features=np.asarray(cell_features, dtype=np.int64),
        obstacles=frozenset((int(x), int(y)) for x, y in obstacles),
        discount=float(discount),
        horizon=int(horizon),
    )
    _validate_environment(env)
    return env


def parse_environment(text: str) -> Environment:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidEnvironment(f"environment JSON parse failure: {exc}") from exc
    try:
        return make_environment(
            width=raw["width"],
            height=raw["height"],
            feature_names=raw["features"],
            cell_features=raw["cells"],
            obstacles=raw.get("obstacles", []),
            discount=raw["discount"],
            horizon=raw["horizon"],
        )
    except KeyError as exc:
        raise InvalidEnvironment(f"environment JSON missing key {exc}") from exc


def load_environment(path) -> Environment:
    """Load and validate an environment JSON file."""
    return parse_environment(Path(path).read_text())


def environment_to_json(env: Environment) -> str:
    """Canonical serialization; stable byte-for-byte across runs."""
    obj = {
        "width": env.width,
        "height": env.height,
        "features": list(env.feature_names),
        "cells": [[int(b) for b in row] for row in env.cell_features],
        "obstacles": [list(c) for c in sorted(env.obstacles)],
        "discount": env.discount,
        "horizon": env.horizon,
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def save_environment(env: Environment, path) -> None:
    Path(path).write_text(environment_to_json(env))


def parse_demonstrations(text: str, env: Environment) -> DemonstrationSet:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidTrajectory(f"demonstration JSON parse failure: {exc}") from exc
    try:
        start = tuple(int(v) for v in raw["start"])
        goal = tuple(int(v) for v in raw["goal"])
        trajs = [
            Trajectory(tuple((int(x), int(y)) for x, y in states))
            for states in raw["trajectories"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidTrajectory(f"demonstration JSON malformed: {exc}") from exc
    for traj in trajs:
        validate_trajectory(traj, env)
    return DemonstrationSet(trajectories=trajs, start=start, goal=goal)


def load_demonstrations(path, env: Environment) -> DemonstrationSet:
    """Load demonstrations and validate each trajectory against ``env``."""
    return parse_demonstrations(Path(path).read_text(), env)


def demonstrations_to_json(demos: DemonstrationSet) -> str:
    obj = {
        "start": list(demos.start),
        "goal": list(demos.goal),
        "trajectories": [[list(s) for s in t.states] for t in demos.trajectories],
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def save_demonstrations(demos: DemonstrationSet, path) -> None:
    Path(path).write_text(demonstrations_to_json(demos))
