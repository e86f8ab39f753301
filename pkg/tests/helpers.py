"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the production code paths: partition
sums and feature expectations come from explicit enumeration of action
sequences, and minimum path costs from exhaustive simple-path search.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from riskirl.envmodel import ACTIONS, Environment, make_environment, step

FEATURE_CHARS = {"g": "grass", "d": "dirt", "r": "road", "w": "water"}


def env_from_rows(
    rows: list[str],
    order: str | None = None,
    discount: float = 0.95,
    horizon: int = 16,
) -> Environment:
    """Build a one-hot environment from a character grid.

    Each char is one feature (named via FEATURE_CHARS when known, else the
    char itself); ``order`` fixes the feature index order, defaulting to
    sorted chars. ``#`` marks an obstacle (all-zero feature row).
    """
    height = len(rows)
    width = len(rows[0])
    chars = list(order) if order else sorted({c for row in rows for c in row if c != "#"})
    features = [FEATURE_CHARS.get(c, c) for c in chars]
    index = {c: i for i, c in enumerate(chars)}
    cells = []
    obstacles = []
    for y, row in enumerate(rows):
        assert len(row) == width, "ragged row"
        for x, ch in enumerate(row):
            bits = [0] * len(features)
            if ch == "#":
                obstacles.append((x, y))
            else:
                bits[index[ch]] = 1
            cells.append(bits)
    return make_environment(
        width, height, features, cells, obstacles, discount=discount, horizon=horizon
    )


def rollout(env: Environment, start, actions, goal=None) -> list[tuple[int, int]]:
    """States visited by an action sequence, with an absorbing goal."""
    states = [tuple(start)]
    current = tuple(start)
    for action in actions:
        if goal is not None and current == tuple(goal):
            states.append(current)
            continue
        current = step(env, current, action)
        states.append(current)
    return states


def enumerate_trajectories(env, start, steps, goal=None):
    """Yield (states, feature_counts) for every action sequence of length
    ``steps``; the brute-force realization space behind the partition sum."""
    for seq in itertools.product(ACTIONS, repeat=steps):
        states = rollout(env, start, seq, goal)
        counts = np.zeros(env.n_features)
        for s in states:
            counts += env.cell_features[env.index(s)]
        yield states, counts


def brute_force_log_partition(env, weights, beta, steps, start, goal=None) -> float:
    w = np.asarray(weights, dtype=float)
    total = 0.0
    for _, counts in enumerate_trajectories(env, start, steps, goal):
        total += math.exp(beta * float(w @ counts))
    return math.log(total)


def brute_force_expected_counts(env, weights, beta, steps, start, goal=None) -> np.ndarray:
    w = np.asarray(weights, dtype=float)
    total = 0.0
    acc = np.zeros(env.n_features)
    for _, counts in enumerate_trajectories(env, start, steps, goal):
        weight = math.exp(beta * float(w @ counts))
        total += weight
        acc += weight * counts
    return acc / total


def brute_force_min_cost(costmap, start, goal):
    """Exhaustive minimum entered-cell cost over simple paths (<= 16 cells)."""
    start, goal = tuple(start), tuple(goal)
    best = [math.inf]

    def neighbors(cell):
        x, y = cell
        for nxt in ((x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)):
            if costmap.in_bounds(nxt) and not costmap.is_impassable(nxt):
                yield nxt

    def dfs(cell, cost, visited):
        if cost >= best[0]:
            return
        if cell == goal:
            best[0] = cost
            return
        for nxt in neighbors(cell):
            if nxt in visited:
                continue
            dfs(nxt, cost + costmap.cost_at(nxt), visited | {nxt})

    dfs(start, 0.0, {start})
    return best[0]
