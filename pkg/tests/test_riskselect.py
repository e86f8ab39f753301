import json
import math
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from riskirl.bayes import Marginal
from riskirl.riskselect import (
    SelectionConfig,
    build_costmap,
    costmap_to_json,
    load_costmap,
    normalized_entropy,
    save_costmap,
    save_costmap_pgm,
    select_weights,
)

from helpers import env_from_rows

W4 = (-2.0, -1.0, 0.0, 1.0)


def marginal(probs, index=0):
    return Marginal(feature_index=index, weight_set=W4, probs=np.asarray(probs, float))


class TestNormalizedEntropy:
    def test_uniform_is_exactly_one(self):
        assert normalized_entropy(marginal([0.25] * 4)) == 1.0

    def test_point_mass_is_exactly_zero(self):
        assert normalized_entropy(marginal([0.0, 0.0, 1.0, 0.0])) == 0.0

    def test_half_bit(self):
        # two equal halves: 1 bit of 2 possible bits
        assert normalized_entropy(marginal([0.5, 0.5, 0.0, 0.0])) == pytest.approx(0.5)

    def test_custom_normalization_divisor(self):
        m = marginal([0.25] * 4)
        assert normalized_entropy(m, normalization=4.0) == pytest.approx(0.5)

    @given(st.lists(st.floats(0.001, 1.0), min_size=2, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_bounds(self, raw):
        p = np.array(raw) / np.sum(raw)
        m = Marginal(feature_index=0, weight_set=tuple(range(len(p))), probs=p)
        h = normalized_entropy(m)
        assert 0.0 <= h <= 1.0


class TestSelectWeights:
    def test_uniform_marginal_gets_lowest(self):
        out = select_weights([marginal([0.25] * 4)], SelectionConfig(0.01), W4)
        assert out.tolist() == [-2.0]

    def test_point_mass_gets_expectation(self):
        out = select_weights(
            [marginal([0.0, 0.0, 0.0, 1.0])], SelectionConfig(0.5), W4
        )
        assert out.tolist() == [1.0]

    def test_expectation_is_real_valued(self):
        out = select_weights(
            [marginal([0.5, 0.0, 0.0, 0.5])], SelectionConfig(0.3), W4
        )
        assert out.tolist() == [-0.5]

    def test_high_entropy_pair_flips_at_eps_005(self):
        # two near-uniform marginals with entropies ~0.974 and ~0.980: below
        # the 0.99 threshold they keep expectations, at 0.95 both drop to -2
        m_a = marginal([0.34, 0.28, 0.22, 0.16])
        m_b = marginal([0.33, 0.27, 0.23, 0.17])
        for m, expected_h in ((m_a, 0.9735), (m_b, 0.9801)):
            h_oracle = -sum(p * math.log2(p) for p in m.probs) / math.log2(4)
            assert h_oracle == pytest.approx(expected_h, abs=5e-4)
        tight = select_weights([m_a, m_b], SelectionConfig(0.01), W4)
        assert tight[0] == pytest.approx(m_a.expectation())
        assert tight[1] == pytest.approx(m_b.expectation())
        loose = select_weights([m_a, m_b], SelectionConfig(0.05), W4)
        assert loose.tolist() == [-2.0, -2.0]

    def test_threshold_monotone_in_epsilon(self):
        marginals = [
            marginal([0.25, 0.25, 0.25, 0.25]),
            marginal([0.4, 0.3, 0.2, 0.1]),
            marginal([0.7, 0.1, 0.1, 0.1]),
            marginal([0.0, 1.0, 0.0, 0.0]),
        ]
        lowest_sets = []
        for eps in (0.0, 0.001, 0.01, 0.05, 0.2, 0.5, 0.9, 1.0):
            out = select_weights(marginals, SelectionConfig(eps), W4)
            lowest_sets.append({i for i, v in enumerate(out) if v == -2.0})
        for small, big in zip(lowest_sets, lowest_sets[1:]):
            assert small <= big

    def test_empty_marginals_rejected(self):
        with pytest.raises(ValueError):
            select_weights([], SelectionConfig(0.1), W4)

    def test_epsilon_range_enforced(self):
        with pytest.raises(ValueError):
            SelectionConfig(-0.1)
        with pytest.raises(ValueError):
            SelectionConfig(1.5)


class TestBuildCostmap:
    def test_constant_reward_gives_floor_everywhere(self):
        env = env_from_rows(["aa", "aa"])
        cm = build_costmap(env, [0.7])
        assert np.allclose(cm.costs, 0.001)

    def test_one_hot_arithmetic(self):
        env = env_from_rows(["ab", "ba"], order="ab")
        cm = build_costmap(env, [1.0, 0.0])
        assert cm.cost_at((0, 0)) == pytest.approx(0.001)  # feature a
        assert cm.cost_at((1, 0)) == pytest.approx(1.001)  # feature b

    def test_obstacles_impassable(self):
        env = env_from_rows(["a#", "aa"])
        cm = build_costmap(env, [1.0])
        assert cm.is_impassable((1, 0))
        assert not cm.is_impassable((0, 0))

    def test_costs_strictly_positive(self):
        env = env_from_rows(["abc", "cab"], order="abc")
        cm = build_costmap(env, [-1.5, 0.0, 2.0])
        finite = cm.costs[np.isfinite(cm.costs)]
        assert (finite > 0).all()

    def test_reward_shift_preserves_cost_ordering(self):
        env = env_from_rows(["abc", "cab"], order="abc")
        base = build_costmap(env, [0.3, -0.7, 1.1])
        shifted = build_costmap(env, [0.3 + 5.0, -0.7 + 5.0, 1.1 + 5.0])
        assert np.allclose(base.costs, shifted.costs)

    def test_non_finite_weights_rejected(self):
        env = env_from_rows(["aa"])
        with pytest.raises(ValueError):
            build_costmap(env, [np.nan])


class TestCostmapExport:
    def test_json_round_trip(self, tmp_path):
        env = env_from_rows(["ab#", "bab"], order="ab")
        cm = build_costmap(env, [0.25, -0.75])
        path = tmp_path / "costmap.json"
        save_costmap(cm, path)
        loaded = load_costmap(path)
        assert loaded.width == cm.width and loaded.height == cm.height
        assert np.allclose(loaded.costs[np.isfinite(cm.costs)],
                           cm.costs[np.isfinite(cm.costs)])
        assert np.isinf(loaded.costs[env.index((2, 0))])
        obj = json.loads(costmap_to_json(cm))
        assert obj["costs"][env.index((2, 0))] is None
        assert obj["weights"] == [0.25, -0.75]

    def test_pgm_format_and_sidecar(self, tmp_path):
        env = env_from_rows(["ab", "b#"], order="ab")
        cm = build_costmap(env, [1.0, -1.0])
        path = tmp_path / "costmap.pgm"
        save_costmap_pgm(cm, path)
        blob = path.read_bytes()
        header, rest = blob.split(b"\n65535\n", 1)
        assert header == b"P5\n2 2"
        values = struct.unpack(">4H", rest)
        sidecar = json.loads((tmp_path / "costmap.pgm.json").read_text())
        assert values[env.index((1, 1))] == sidecar["obstacle_value"] == 65535
        # rescaling: value * scale + cost_min recovers the costs
        for idx in (0, 1, 2):
            recovered = values[idx] * sidecar["scale"] + sidecar["cost_min"]
            assert recovered == pytest.approx(float(cm.costs[idx]), abs=1e-4)
