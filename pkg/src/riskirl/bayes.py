"""Discrete posterior over linear reward weight vectors.

The reward space holds all |W|^D weight vectors over a discrete per-feature
value set W, ordered lexicographically with feature 0 as the most
significant digit and values in weight-set order (itertools.product order).
Point scores are likelihood times prior, evaluated in log space and
normalized by their sum.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln, logsumexp

from .envmodel import DemonstrationSet, Environment, feature_count
from .maxent import batched_log_partitions

MODIFIED_UNIFORM = "modifiedUniform"
DIRICHLET = "dirichlet"


class DegeneratePosterior(RuntimeError):
    """Every point product of likelihood and prior is zero."""


@dataclass(frozen=True)
class RewardSpace:
    """All candidate weight vectors W^D in a fixed documented order."""

    weight_set: tuple[float, ...]
    dimension: int
    vectors: np.ndarray  # (|W|^D, D)

    @classmethod
    def build(cls, weight_set, dimension: int) -> "RewardSpace":
        ws = tuple(float(v) for v in weight_set)
        if len(ws) < 2:
            raise ValueError("weight set needs at least two values")
        if len(set(ws)) != len(ws):
            raise ValueError("weight set values must be distinct")
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        vectors = np.array(list(itertools.product(ws, repeat=dimension)))
        vectors.setflags(write=False)
        return cls(weight_set=ws, dimension=dimension, vectors=vectors)

    @property
    def size(self) -> int:
        return len(self.weight_set) ** self.dimension

    def value_indices(self, feature_index: int) -> np.ndarray:
        """Index into weight_set of component ``feature_index`` for every
        vector, derived from the lexicographic ordering."""
        if not 0 <= feature_index < self.dimension:
            raise IndexError(f"feature index {feature_index} out of range")
        base = len(self.weight_set)
        stride = base ** (self.dimension - 1 - feature_index)
        return (np.arange(self.size) // stride) % base

    def contains(self, w) -> bool:
        w = np.asarray(w, dtype=float)
        return w.shape == (self.dimension,) and all(v in self.weight_set for v in w)


@dataclass
class Posterior:
    """Probability mass per reward vector, aligned to RewardSpace order."""

    space: RewardSpace
    mass: np.ndarray

    def argmax_vector(self) -> np.ndarray:
        return self.space.vectors[int(np.argmax(self.mass))]


@dataclass
class Marginal:
    """Distribution of one feature's weight over the weight set."""

    feature_index: int
    weight_set: tuple[float, ...]
    probs: np.ndarray

    def expectation(self) -> float:
        return float(np.dot(self.weight_set, self.probs))


@dataclass(frozen=True)
class PriorSpec:
    """Which prior to use; dirichlet requires all alpha_i > 1."""

    kind: str
    alpha: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in (MODIFIED_UNIFORM, DIRICHLET):
            raise ValueError(f"unknown prior kind {self.kind!r}")
        if self.kind == DIRICHLET:
            if self.alpha is None:
                raise ValueError("dirichlet prior requires alpha")
            if any(a <= 1.0 for a in self.alpha):
                raise ValueError("dirichlet prior requires every alpha_i > 1")


def modified_uniform_prior(w, space: RewardSpace) -> float:
    """Uniform over the reward space except constant vectors, which get
    probability zero (a constant reward makes every demonstration look
    equally good)."""
    w = np.asarray(w, dtype=float)
    if not space.contains(w):
        raise ValueError(f"vector {w.tolist()} is not in the reward space")
    if np.all(w == w[0]):
        return 0.0
    return 1.0 / (space.size - len(space.weight_set))


def softmax(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    shifted = w - w.max()
    e = np.exp(shifted)
    return e / e.sum()


def log_dirichlet_prior(w, alpha) -> float:
    """Log Dirichlet(alpha) density at softmax(w); used as an unnormalized
    prior score over the discrete space."""
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 1.0):
        raise ValueError("dirichlet prior requires every alpha_i > 1")
    w = np.asarray(w, dtype=float)
    if w.shape != alpha.shape:
        raise ValueError(f"weight shape {w.shape} != alpha shape {alpha.shape}")
    p = softmax(w)
    log_beta = gammaln(alpha).sum() - gammaln(alpha.sum())
    return float(np.dot(alpha - 1.0, np.log(p)) - log_beta)


def dirichlet_prior(w, alpha) -> float:
    return float(np.exp(log_dirichlet_prior(w, alpha)))


def log_prior_scores(space: RewardSpace, prior: PriorSpec) -> np.ndarray:
    """Log prior score for every vector in the space (-inf where zero)."""
    if prior.kind == MODIFIED_UNIFORM:
        non_constant = space.size - len(space.weight_set)
        if non_constant == 0:  # D = 1: every vector is constant
            return np.full(space.size, -np.inf)
        scores = np.full(space.size, -np.log(non_constant))
        constant = np.all(space.vectors == space.vectors[:, :1], axis=1)
        scores[constant] = -np.inf
        return scores
    return np.array([log_dirichlet_prior(v, prior.alpha) for v in space.vectors])


def posterior_from_log_scores(space: RewardSpace, log_scores) -> Posterior:
    """Normalize unnormalized log point scores into a Posterior.

    Invariant to adding a constant to every score. Raises
    DegeneratePosterior when every score is -inf.
    """
    scores = np.asarray(log_scores, dtype=float)
    if scores.shape != (space.size,):
        raise ValueError(f"scores shape {scores.shape} != ({space.size},)")
    if np.all(np.isneginf(scores)):
        raise DegeneratePosterior("all posterior point products are zero")
    mass = np.exp(scores - logsumexp(scores))
    mass /= mass.sum()
    return Posterior(space=space, mass=mass)


def compute_posterior(
    env: Environment,
    demos: DemonstrationSet,
    beta: float,
    space: RewardSpace,
    prior: PriorSpec,
) -> Posterior:
    """Point-evaluate likelihood x prior over the whole reward space and
    normalize by the sum. Trajectories contribute independent likelihoods,
    each with its own length-matched partition."""
    if space.dimension != env.n_features:
        raise ValueError(
            f"reward space dimension {space.dimension} != environment D {env.n_features}"
        )
    steps = [t.steps for t in demos.trajectories]
    counts = np.array([feature_count(t, env) for t in demos.trajectories])
    log_z = batched_log_partitions(
        env, space.vectors, beta, max(steps), demos.start, demos.goal
    )  # (N, max_steps + 1)
    loglik = beta * (counts @ space.vectors.T).sum(axis=0)  # (N,)
    loglik -= log_z[:, steps].sum(axis=1)
    return posterior_from_log_scores(space, loglik + log_prior_scores(space, prior))


def marginalize(post: Posterior, space: RewardSpace, feature_index: int) -> Marginal:
    """Sum posterior mass over all vectors sharing each value of one feature."""
    idx = space.value_indices(feature_index)
    probs = np.zeros(len(space.weight_set))
    np.add.at(probs, idx, post.mass)
    return Marginal(
        feature_index=feature_index, weight_set=space.weight_set, probs=probs
    )


def all_marginals(post: Posterior, space: RewardSpace) -> list[Marginal]:
    return [marginalize(post, space, i) for i in range(space.dimension)]


def posterior_to_json(post: Posterior) -> str:
    obj = {
        "weight_set": list(post.space.weight_set),
        "vectors": [[float(v) for v in row] for row in post.space.vectors],
        "mass": [float(m) for m in post.mass],
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"


def marginals_to_json(marginals: list[Marginal], feature_names) -> str:
    obj = {
        "features": list(feature_names),
        "weight_set": list(marginals[0].weight_set) if marginals else [],
        "marginals": [[float(p) for p in m.probs] for m in marginals],
    }
    return json.dumps(obj, separators=(",", ":")) + "\n"
