import numpy as np
import pytest

from riskirl.envmodel import Trajectory, validate_trajectory
from riskirl.planner import (
    PlanRecord,
    RiskSpec,
    UnreachableGoal,
    evaluate,
    plan,
    risk_of,
)
from riskirl.riskselect import Costmap, build_costmap

from helpers import brute_force_min_cost, env_from_rows


def costmap_from_grid(rows):
    """Rows of cost values; None marks an obstacle."""
    height, width = len(rows), len(rows[0])
    flat = [np.inf if c is None else float(c) for row in rows for c in row]
    return Costmap(width=width, height=height, costs=np.array(flat),
                   provenance=np.zeros(1))


class TestPlan:
    def test_uniform_costmap_manhattan_path(self):
        cm = costmap_from_grid([[1, 1, 1], [1, 1, 1], [1, 1, 1]])
        res = plan(cm, (0, 0), (2, 2))
        assert res.path_length == 5
        assert res.total_cost == pytest.approx(4.0)

    def test_detour_around_expensive_cell(self):
        # direct route crosses a cost-100 cell; a 2-cell detour over cheap
        # cells wins (exhaustively verified)
        delta = 0.001
        cm = costmap_from_grid(
            [
                [delta, delta, delta, delta],
                [delta, 100.0, 1.0, delta],
                [delta, 1.0, 1.0, delta],
            ]
        )
        res = plan(cm, (0, 1), (3, 1))
        assert (1, 1) not in res.trajectory.states
        assert res.total_cost == pytest.approx(brute_force_min_cost(cm, (0, 1), (3, 1)))

    def test_start_equals_goal(self):
        cm = costmap_from_grid([[1, 1]])
        res = plan(cm, (1, 0), (1, 0))
        assert res.trajectory.states == ((1, 0),)
        assert res.total_cost == 0.0
        assert res.path_length == 1

    def test_unreachable_goal(self):
        cm = costmap_from_grid([[1, None, 1]])
        with pytest.raises(UnreachableGoal):
            plan(cm, (0, 0), (2, 0))

    def test_impassable_start_rejected(self):
        cm = costmap_from_grid([[None, 1]])
        with pytest.raises(ValueError, match="impassable"):
            plan(cm, (0, 0), (1, 0))

    @pytest.mark.parametrize("seed", range(12))
    def test_optimal_on_random_small_grids(self, seed):
        rng = np.random.default_rng(seed)
        width = int(rng.integers(2, 5))
        height = int(rng.integers(2, 5))
        while width * height > 16:
            height = int(rng.integers(2, 5))
        costs = rng.uniform(0.001, 5.0, size=width * height)
        # sprinkle obstacles, keeping corners open
        for idx in range(width * height):
            if rng.random() < 0.15 and idx not in (0, width * height - 1):
                costs[idx] = np.inf
        cm = Costmap(width=width, height=height, costs=costs, provenance=np.zeros(1))
        start, goal = (0, 0), (width - 1, height - 1)
        oracle = brute_force_min_cost(cm, start, goal)
        if np.isinf(oracle):
            with pytest.raises(UnreachableGoal):
                plan(cm, start, goal)
            return
        res = plan(cm, start, goal)
        assert res.total_cost == pytest.approx(oracle, rel=1e-12)
        validate_env = env_from_rows(["a" * width] * height)
        validate_trajectory(res.trajectory, validate_env)

    def test_deterministic_tie_breaking(self):
        cm = costmap_from_grid([[1, 1, 1], [1, 1, 1], [1, 1, 1]])
        first = plan(cm, (0, 0), (2, 2)).trajectory
        for _ in range(20):
            assert plan(cm, (0, 0), (2, 2)).trajectory == first


class TestRisk:
    def test_no_dangerous_states(self, corridor):
        spec = RiskSpec(dangerous_feature=corridor.feature_names.index("grass"))
        traj = Trajectory(((0, 1), (1, 1), (2, 1)))
        assert risk_of(traj, corridor, spec) == 0.0

    def test_all_dangerous(self, corridor):
        spec = RiskSpec(dangerous_feature=corridor.feature_names.index("road"))
        traj = Trajectory(((0, 1), (1, 1), (2, 1)))
        assert risk_of(traj, corridor, spec) == 1.0

    def test_fraction(self):
        env = env_from_rows(["wwgggggg"], order="gw", horizon=8)
        traj = Trajectory(tuple((x, 0) for x in range(8)))
        spec = RiskSpec(dangerous_feature=1)
        assert risk_of(traj, env, spec) == 0.25

    def test_bad_feature_index(self, corridor):
        with pytest.raises(IndexError):
            risk_of(Trajectory(((0, 1),)), corridor, RiskSpec(dangerous_feature=9))

    def test_risk_monotone_as_dangerous_weight_drops(self):
        # direct route fords a water band, a road detour runs along the top;
        # the top-reward cell stays off the dangerous feature, so lowering
        # w_danger can only push the plan away from it
        rows = [
            "rrrrr",
            "gwwwg",
            "ggggg",
        ]
        env = env_from_rows(rows, order="grw", horizon=16)
        spec = RiskSpec(dangerous_feature=2)
        risks = []
        for w_danger in (1.0, 0.5, 0.0, -0.5, -1.0, -2.0, -4.0):
            cm = build_costmap(env, [-0.5, 1.0, w_danger])
            res = plan(cm, (0, 1), (4, 1), env=env, risk_spec=spec)
            risks.append(res.risk)
        assert all(b <= a + 1e-12 for a, b in zip(risks, risks[1:]))
        assert risks[0] > 0.0
        assert risks[-1] == 0.0


class TestEvaluate:
    def _result(self, risk, length):
        traj = Trajectory(tuple((x, 0) for x in range(length)))
        from riskirl.planner import PlanResult

        return PlanResult(trajectory=traj, total_cost=1.0,
                          path_length=length, risk=risk)

    def test_single_plan_means_equal_values(self):
        rows, summary = evaluate(
            [PlanRecord("T1", "m", 0, self._result(0.25, 4))]
        )
        assert summary == [
            {"scenario": "T1", "model": "m", "mean_risk": 0.25,
             "mean_path_length": 4.0, "runs": 1}
        ]
        assert rows[0]["risk"] == 0.25

    def test_zero_risks_average_to_zero(self):
        records = [
            PlanRecord("T2", "m", i, self._result(0.0, 5)) for i in range(5)
        ]
        _, summary = evaluate(records)
        assert summary[0]["mean_risk"] == 0.0

    def test_mean_path_length(self):
        records = [
            PlanRecord("T1", "m", 0, self._result(0.0, 3)),
            PlanRecord("T1", "m", 1, self._result(0.0, 5)),
        ]
        _, summary = evaluate(records)
        assert summary[0]["mean_path_length"] == 4.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            evaluate([])
