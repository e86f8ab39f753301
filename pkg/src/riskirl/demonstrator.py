"""Scripted demonstration sampling for automated experiments.

Demonstrations are drawn from the same Boltzmann policy the likelihood
model assumes, so the scripted demonstrator is exactly beta-rational with
respect to it. Sampling is seeded and deterministic.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from .envmodel import ACTIONS, Cell, DemonstrationSet, Environment, Trajectory, step
from .maxent import soft_value_iteration
from .planner import UnreachableGoal


def _reachable(env: Environment, start: Cell, goal: Cell) -> bool:
    seen = {tuple(start)}
    queue = deque([tuple(start)])
    goal = tuple(goal)
    while queue:
        cell = queue.popleft()
        if cell == goal:
            return True
        for action in ACTIONS[:4]:
            nxt = step(env, cell, action)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return False


def generate_demos(
    env: Environment,
    true_weights,
    beta: float,
    count: int,
    seed: int,
    start: Cell,
    goal: Cell,
) -> DemonstrationSet:
    """Sample ``count`` trajectories from the soft-value-iteration policy
    under ``true_weights``; each terminates at the goal or at the horizon."""
    if count < 1:
        raise ValueError(f"count {count} must be >= 1")
    start = tuple(start)
    goal = tuple(goal)
    if not _reachable(env, start, goal):
        raise UnreachableGoal(start, goal)

    horizon = env.horizon
    dp = soft_value_iteration(env, true_weights, beta, horizon, start, goal)
    policy = np.exp(dp.log_policy)  # (h, S, A)
    rng = np.random.default_rng(seed)

    trajectories = []
    for _ in range(count):
        states = [start]
        current = start
        for t in range(horizon):
            if current == goal:
                break
            probs = policy[t, env.index(current)]
            action = ACTIONS[rng.choice(len(ACTIONS), p=probs)]
            current = step(env, current, action)
            states.append(current)
        trajectories.append(Trajectory(tuple(states)))
    return DemonstrationSet(trajectories=trajectories, start=start, goal=goal)
