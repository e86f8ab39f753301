"""Maximum-entropy trajectory distribution over deterministic gridworlds.

A trajectory is realized by an action sequence of fixed length h from a
start cell (goal absorbing when given). Its probability is Boltzmann in the
summed state rewards,

    P(xi | w) = exp(beta * w . phi(xi)) / Z,

where phi(xi) counts all visited states including the start and Z sums
exp(beta * w . phi) over all |A|^h action sequences. Blocked actions are
self-transitions, so distinct action sequences can realize the same state
sequence; probabilities here are per realization. All computation is in
log space; the horizon is finite, so returns are summed undiscounted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .envmodel import (
    ACTIONS,
    Cell,
    DemonstrationSet,
    Environment,
    Trajectory,
    feature_count,
    step,
    validate_trajectory,
)


class FitDivergence(RuntimeError):
    """Gradient ascent produced non-finite weights."""

    def __init__(self, iteration: int):
        super().__init__(f"weights became non-finite at iteration {iteration}")
        self.iteration = iteration


@dataclass
class SoftDP:
    """Result of a soft backward/forward pass for one (start, horizon).

    Attributes
    ----------
    log_partition : float
        log Z for the configured start cell and step count.
    log_policy : np.ndarray, shape (h, S, A)
        Per-timestep action log-probabilities; rows normalize to 1.
    visitation : np.ndarray, shape (h+1, S)
        Per-timestep state visitation distribution; each row sums to 1.
    values : np.ndarray, shape (h+1, S)
        values[k][s] = log sum over k-step action sequences from s of
        exp(beta * reward of the states entered after s).
    """

    log_partition: float
    log_policy: np.ndarray
    visitation: np.ndarray
    values: np.ndarray


def next_state_table(env: Environment, goal: Cell | None = None) -> np.ndarray:
    """(S, A) table of successor cell indices; the goal row self-loops."""
    table = np.empty((env.n_cells, len(ACTIONS)), dtype=np.int64)
    for idx in range(env.n_cells):
        cell = env.cell(idx)
        if env.is_obstacle(cell):
            table[idx, :] = idx
            continue
        if goal is not None and cell == tuple(goal):
            table[idx, :] = idx
            continue
        for a, action in enumerate(ACTIONS):
            table[idx, a] = env.index(step(env, cell, action))
    return table


def cell_rewards(env: Environment, weights) -> np.ndarray:
    """Per-cell linear reward r(s) = w . phi(s), flat over cell indices."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (env.n_features,):
        raise ValueError(f"weights shape {w.shape} != (D,) = ({env.n_features},)")
    if not np.isfinite(w).all():
        raise ValueError("weights must be finite")
    return env.cell_features @ w


def _backward(ns: np.ndarray, rewards: np.ndarray, beta: float, steps: int):
    """Soft backward recursion.

    Returns (values, log_policy_by_remaining) where values has shape
    (steps+1, S) and log_policy_by_remaining[k-1] is the policy with k
    steps remaining.
    """
    n_states, n_actions = ns.shape
    values = np.zeros((steps + 1, n_states))
    log_pi = np.zeros((steps, n_states, n_actions))
    scored = beta * rewards  # entering-state reward contribution
    for k in range(1, steps + 1):
        q = scored[ns] + values[k - 1][ns]
        values[k] = logsumexp(q, axis=1)
        log_pi[k - 1] = q - values[k][:, None]
    return values, log_pi


def soft_value_iteration(
    env: Environment,
    weights,
    beta: float,
    horizon: int,
    start: Cell,
    goal: Cell | None = None,
) -> SoftDP:
    """Boltzmann trajectory distribution over length-``horizon`` action
    sequences from ``start``; at beta=0 every sequence is equiprobable."""
    if horizon < 1:
        raise ValueError(f"horizon {horizon} must be >= 1")
    if beta < 0:
        raise ValueError(f"beta {beta} must be >= 0")
    rewards = cell_rewards(env, weights)
    ns = next_state_table(env, goal)
    values, log_pi_rem = _backward(ns, rewards, beta, horizon)

    start_idx = env.index(tuple(start))
    # policy at timestep t has horizon - t steps remaining
    log_policy = log_pi_rem[::-1]

    visitation = np.zeros((horizon + 1, env.n_cells))
    visitation[0, start_idx] = 1.0
    for t in range(horizon):
        pi_t = np.exp(log_policy[t])
        flow = visitation[t][:, None] * pi_t
        nxt = np.zeros(env.n_cells)
        for a in range(len(ACTIONS)):
            np.add.at(nxt, ns[:, a], flow[:, a])
        visitation[t + 1] = nxt

    log_z = beta * rewards[start_idx] + values[horizon, start_idx]
    return SoftDP(
        log_partition=float(log_z),
        log_policy=log_policy,
        visitation=visitation,
        values=values,
    )


def log_partitions(
    env: Environment,
    weights,
    beta: float,
    max_steps: int,
    start: Cell,
    goal: Cell | None = None,
) -> np.ndarray:
    """log Z for every step count 0..max_steps in one backward pass."""
    rewards = cell_rewards(env, weights)
    ns = next_state_table(env, goal)
    values, _ = _backward(ns, rewards, beta, max(max_steps, 1))
    start_idx = env.index(tuple(start))
    return beta * rewards[start_idx] + values[: max_steps + 1, start_idx]


def batched_log_partitions(
    env: Environment,
    weight_matrix,
    beta: float,
    max_steps: int,
    start: Cell,
    goal: Cell | None = None,
) -> np.ndarray:
    """log Z for each of N weight vectors at once; shape (N, max_steps+1).

    One vectorized backward pass over an (N, S) reward batch; the reduction
    order is fixed, so results are deterministic.
    """
    w = np.asarray(weight_matrix, dtype=float)
    if w.ndim != 2 or w.shape[1] != env.n_features:
        raise ValueError(f"weight matrix shape {w.shape} != (N, {env.n_features})")
    rewards = w @ env.cell_features.T  # (N, S)
    ns = next_state_table(env, goal)
    start_idx = env.index(tuple(start))

    n = w.shape[0]
    values = np.zeros((n, env.n_cells))
    out = np.empty((n, max_steps + 1))
    out[:, 0] = beta * rewards[:, start_idx]
    scored = beta * rewards
    for k in range(1, max_steps + 1):
        q = scored[:, ns] + values[:, ns]  # (N, S, A)
        values = logsumexp(q, axis=2)
        out[:, k] = beta * rewards[:, start_idx] + values[:, start_idx]
    return out


def trajectory_log_likelihood(
    env: Environment,
    weights,
    beta: float,
    traj: Trajectory,
    goal: Cell | None = None,
) -> float:
    """log P(xi | w, beta) with Z conditioned on the trajectory's start cell
    and step count. Depends on xi only through its feature counts."""
    validate_trajectory(traj, env)
    steps = traj.steps
    counts = feature_count(traj, env)
    w = np.asarray(weights, dtype=float)
    log_z = log_partitions(env, w, beta, steps, traj.start(), goal)[steps]
    return float(beta * (w @ counts) - log_z)


def demo_log_likelihood(
    env: Environment, weights, beta: float, demos: DemonstrationSet
) -> float:
    """Joint log-likelihood of a demonstration set (trajectories i.i.d., so
    likelihoods multiply; each has its own length-matched partition)."""
    w = np.asarray(weights, dtype=float)
    max_steps = max(t.steps for t in demos.trajectories)
    log_z = log_partitions(env, w, beta, max_steps, demos.start, demos.goal)
    total = 0.0
    for traj in demos.trajectories:
        counts = feature_count(traj, env)
        total += beta * (w @ counts) - log_z[traj.steps]
    return float(total)


def expected_feature_counts(
    env: Environment,
    weights,
    beta: float,
    horizon: int,
    start: Cell,
    goal: Cell | None = None,
) -> np.ndarray:
    """E[phi(xi)] under the trajectory distribution, by the forward pass over
    visitation distributions (no enumeration)."""
    dp = soft_value_iteration(env, weights, beta, horizon, start, goal)
    occupancy = dp.visitation.sum(axis=0)  # expected visits per cell
    return env.cell_features.T @ occupancy


def demo_log_likelihood_gradient(
    env: Environment, weights, beta: float, demos: DemonstrationSet
) -> np.ndarray:
    """Gradient of demo_log_likelihood in w:
    beta * sum_i (phi(xi_i) - E[phi | steps_i])."""
    w = np.asarray(weights, dtype=float)
    grad = np.zeros(env.n_features)
    expected_by_steps: dict[int, np.ndarray] = {}
    for traj in demos.trajectories:
        if traj.steps not in expected_by_steps:
            expected_by_steps[traj.steps] = expected_feature_counts(
                env, w, beta, traj.steps, demos.start, demos.goal
            )
        grad += feature_count(traj, env) - expected_by_steps[traj.steps]
    return beta * grad


def maxent_irl_fit(
    env: Environment,
    demos: DemonstrationSet,
    learning_rate: float = 0.1,
    iterations: int = 200,
    init_weights=None,
) -> np.ndarray:
    """Baseline gradient-ascent reward learner (beta fixed at 1).

    Ascends the demonstration log-likelihood with gradient
    (empirical mean feature count) - (mean expected feature count); a
    feature absent from every cell has zero gradient, so its weight stays
    at its initialization exactly.
    """
    if iterations < 1:
        raise ValueError(f"iterations {iterations} must be >= 1")
    if init_weights is None:
        w = np.zeros(env.n_features)
    else:
        w = np.array(init_weights, dtype=float)
        if w.shape != (env.n_features,):
            raise ValueError(f"init weights shape {w.shape} != ({env.n_features},)")

    n = len(demos.trajectories)
    empirical = sum(feature_count(t, env) for t in demos.trajectories) / n
    # divergence is detected by the explicit finiteness check, so intermediate
    # overflow on a diverging run need not warn
    with np.errstate(over="ignore", invalid="ignore"):
        for it in range(iterations):
            expected_by_steps: dict[int, np.ndarray] = {}
            expected = np.zeros(env.n_features)
            for traj in demos.trajectories:
                if traj.steps not in expected_by_steps:
                    expected_by_steps[traj.steps] = expected_feature_counts(
                        env, w, 1.0, traj.steps, demos.start, demos.goal
                    )
                expected += expected_by_steps[traj.steps]
            w = w + learning_rate * (empirical - expected / n)
            if not np.isfinite(w).all():
                raise FitDivergence(it)
    return w
