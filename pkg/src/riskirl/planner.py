"""Cost-minimizing grid planning and risk/path-length metrics.

Uniform-cost search over the 4-connected grid; a move costs the entered
cell's value and the start cell is free, so a path's total cost equals its
summed entered-cell costs. Ties break deterministically: the frontier pops
by (cost, x, y) and neighbors relax in (x, y) order, with strictly-better
relaxation only.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .envmodel import Cell, Environment, Trajectory
from .riskselect import Costmap


class UnreachableGoal(RuntimeError):
    def __init__(self, start: Cell, goal: Cell):
        super().__init__(f"goal {tuple(goal)} unreachable from {tuple(start)}")
        self.start = tuple(start)
        self.goal = tuple(goal)


@dataclass
class RiskSpec:
    """Designates the dangerous terrain feature for the risk metric."""

    dangerous_feature: int


@dataclass
class PlanResult:
    trajectory: Trajectory
    total_cost: float
    path_length: int
    risk: float

    def to_dict(self) -> dict:
        return {
            "trajectory": [list(s) for s in self.trajectory.states],
            "total_cost": self.total_cost,
            "path_length": self.path_length,
            "risk": self.risk,
        }


def _neighbors(cm: Costmap, cell: Cell):
    x, y = cell
    candidates = [(x - 1, y), (x + 1, y), (x, y - 1), (x, y + 1)]
    candidates.sort()
    for c in candidates:
        if cm.in_bounds(c) and not cm.is_impassable(c):
            yield c


def plan(
    cm: Costmap,
    start: Cell,
    goal: Cell,
    env: Environment | None = None,
    risk_spec: RiskSpec | None = None,
) -> PlanResult:
    """Minimum-total-cost path from start to goal.

    When ``env`` and ``risk_spec`` are given, the result's risk field is the
    fraction of path states on the dangerous feature; otherwise 0.0.
    """
    start = tuple(start)
    goal = tuple(goal)
    for name, cell in (("start", start), ("goal", goal)):
        if not cm.in_bounds(cell):
            raise ValueError(f"{name} {cell} outside the costmap")
        if cm.is_impassable(cell):
            raise ValueError(f"{name} {cell} is impassable")

    dist = {start: 0.0}
    parent: dict[Cell, Cell] = {}
    frontier = [(0.0, start[0], start[1])]
    done = set()
    while frontier:
        cost, x, y = heapq.heappop(frontier)
        cell = (x, y)
        if cell in done:
            continue
        done.add(cell)
        if cell == goal:
            break
        for nxt in _neighbors(cm, cell):
            alt = cost + cm.cost_at(nxt)
            if nxt not in dist or alt < dist[nxt]:
                dist[nxt] = alt
                parent[nxt] = cell
                heapq.heappush(frontier, (alt, nxt[0], nxt[1]))
    if goal not in done:
        raise UnreachableGoal(start, goal)

    states = [goal]
    while states[-1] != start:
        states.append(parent[states[-1]])
    traj = Trajectory(tuple(reversed(states)))

    risk = 0.0
    if risk_spec is not None:
        if env is None:
            raise ValueError("risk computation needs the environment")
        risk = risk_of(traj, env, risk_spec)
    return PlanResult(
        trajectory=traj,
        total_cost=dist[goal],
        path_length=traj.length,
        risk=risk,
    )


def risk_of(traj: Trajectory, env: Environment, spec: RiskSpec) -> float:
    """Fraction of trajectory states whose cell has the dangerous feature."""
    if not 0 <= spec.dangerous_feature < env.n_features:
        raise IndexError(f"dangerous feature {spec.dangerous_feature} out of range")
    hits = sum(
        int(env.cell_features[env.index(s)][spec.dangerous_feature]) for s in traj.states
    )
    return hits / traj.length


@dataclass
class PlanRecord:
    """One planning run, labeled for aggregation."""

    scenario: str
    model: str
    run: int
    result: PlanResult


def evaluate(records: list[PlanRecord]):
    """Per-run rows plus mean risk and mean path length per (scenario, model)."""
    if not records:
        raise ValueError("no plan records to evaluate")
    rows = [
        {
            "scenario": r.scenario,
            "model": r.model,
            "run": r.run,
            "risk": r.result.risk,
            "path_length": r.result.path_length,
        }
        for r in records
    ]
    groups: dict[tuple[str, str], list[PlanResult]] = {}
    for r in records:
        groups.setdefault((r.scenario, r.model), []).append(r.result)
    summary = [
        {
            "scenario": scenario,
            "model": model,
            "mean_risk": float(np.mean([p.risk for p in results])),
            "mean_path_length": float(np.mean([p.path_length for p in results])),
            "runs": len(results),
        }
        for (scenario, model), results in sorted(groups.items())
    ]
    return rows, summary
