"""Entropy-thresholded weight selection and costmap generation.

A feature whose marginal posterior is too uncertain (normalized Shannon
entropy at or above 1 - epsilon) gets the lowest admissible weight; every
other feature gets its marginal expectation. The selected weights turn the
feature grid into a strictly positive traversal costmap.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bayes import Marginal
from .envmodel import Cell, Environment

COST_FLOOR = 0.001


@dataclass(frozen=True)
class SelectionConfig:
    """Selection parameters.

    ``normalization`` overrides the entropy divisor (default log2 of the
    marginal's support size, so a uniform marginal scores exactly 1).
    """

    epsilon: float
    entropy_base: float = 2.0
    normalization: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon {self.epsilon} outside [0, 1]")


@dataclass
class Costmap:
    """Nonnegative traversal cost per cell; obstacles carry +inf."""

    width: int
    height: int
    costs: np.ndarray = field(repr=False)  # flat, row-major, inf on obstacles
    provenance: np.ndarray = field(repr=False)  # weights the map was built from

    def cost_at(self, cell: Cell) -> float:
        return float(self.costs[cell[1] * self.width + cell[0]])

    def is_impassable(self, cell: Cell) -> bool:
        return not np.isfinite(self.cost_at(cell))

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height


def normalized_entropy(
    m: Marginal, base: float = 2.0, normalization: float | None = None
) -> float:
    """Shannon entropy of the marginal divided by log2 of its support size,
    clamped to [0, 1]; 0 log 0 taken as 0."""
    p = np.asarray(m.probs, dtype=float)
    nonzero = p > 0
    h = -np.sum(p[nonzero] * np.log(p[nonzero]) / np.log(base))
    divisor = normalization if normalization is not None else np.log(len(p)) / np.log(base)
    return float(min(max(h / divisor, 0.0), 1.0))


def select_weights(
    marginals: list[Marginal], cfg: SelectionConfig, weight_set
) -> np.ndarray:
    """One weight per feature: min(weight_set) when the marginal entropy
    reaches 1 - epsilon, otherwise the marginal expectation (real-valued)."""
    if not marginals:
        raise ValueError("no marginals to select from")
    ws = [float(v) for v in weight_set]
    lowest = min(ws)
    out = np.empty(len(marginals))
    for i, m in enumerate(marginals):
        h = normalized_entropy(m, cfg.entropy_base, cfg.normalization)
        if h >= 1.0 - cfg.epsilon:
            out[i] = lowest
        else:
            out[i] = m.expectation()
    return out


def build_costmap(env: Environment, weights, floor: float = COST_FLOOR) -> Costmap:
    """cost(c) = max over cells of r - r(c) + floor, with r(c) = w . phi(c);
    strictly positive everywhere, +inf on obstacles."""
    w = np.asarray(weights, dtype=float)
    if w.shape != (env.n_features,):
        raise ValueError(f"weights shape {w.shape} != ({env.n_features},)")
    if not np.isfinite(w).all():
        raise ValueError("weights must be finite")
    rewards = env.cell_features @ w
    passable = np.ones(env.n_cells, dtype=bool)
    for obs in env.obstacles:
        passable[env.index(obs)] = False
    top = rewards[passable].max()
    costs = np.where(passable, top - rewards + floor, np.inf)
    return Costmap(width=env.width, height=env.height, costs=costs, provenance=w.copy())


def costmap_to_json(cm: Costmap) -> str:
    costs = [None if not np.isfinite(c) else float(c) for c in cm.costs]
    obstacles = [
        [i % cm.width, i // cm.width]
        for i in range(len(cm.costs))
        if not np.isfinite(cm.costs[i])
    ]
    obj = {
        "width": cm.width,
        "height": cm.height,
        "costs": costs,
        "obstacles": obstacles,
        "weights": [float(v) for v in cm.provenance],
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def save_costmap(cm: Costmap, path) -> None:
    Path(path).write_text(costmap_to_json(cm))


def load_costmap(path) -> Costmap:
    raw = json.loads(Path(path).read_text())
    costs = np.array(
        [np.inf if c is None else float(c) for c in raw["costs"]], dtype=float
    )
    return Costmap(
        width=int(raw["width"]),
        height=int(raw["height"]),
        costs=costs,
        provenance=np.array(raw["weights"], dtype=float),
    )


def save_costmap_pgm(cm: Costmap, path) -> None:
    """16-bit binary PGM raster for external planners.

    Finite costs rescale linearly onto 0..65534 (low = cheap); obstacles
    are written as 65535. The affine transform back to costs is recorded in
    a ``<path>.json`` sidecar.
    """
    path = Path(path)
    finite = cm.costs[np.isfinite(cm.costs)]
    lo, hi = float(finite.min()), float(finite.max())
    scale = (hi - lo) / 65534.0 if hi > lo else 0.0
    values = np.zeros(len(cm.costs), dtype=np.uint16)
    for i, c in enumerate(cm.costs):
        if not np.isfinite(c):
            values[i] = 65535
        elif scale > 0:
            values[i] = int(round((c - lo) / scale))
        else:
            values[i] = 0
    header = f"P5\n{cm.width} {cm.height}\n65535\n".encode("ascii")
    body = struct.pack(f">{len(values)}H", *values.tolist())
    path.write_bytes(header + body)
    sidecar = {
        "cost_min": lo,
        "cost_max": hi,
        "scale": scale,
        "obstacle_value": 65535,
        "weights": [float(v) for v in cm.provenance],
    }
    Path(str(path) + ".json").write_text(
        json.dumps(sidecar, separators=(",", ":")) + "\n"
    )
