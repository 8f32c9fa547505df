"""Tabular softmax policies over finite trajectory spaces.

Two shapes are supported: a single-step categorical policy over N answers,
and a depth-T autoregressive policy over a vocabulary of size V with one
logit row per prefix-tree node (fully tabular). Both are backed by one flat
float64 logit vector, so every probability, gradient, and expectation is
exact and enumerable.

Trajectories are tuples of token indices; the enumeration order is
lexicographic, and a trajectory's position in that order is its *leaf
index* (the mixed-radix value of its digits). Internal helpers work on
leaf indices; the public operations accept and return tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, ShapeMismatchError

Trajectory = tuple[int, ...]

DEFAULT_SPACE_CAP = 2**20


@dataclass(frozen=True)
class Categorical:
    """Single-step policy over ``n_answers`` answers (one logit row)."""

    n_answers: int

    def __post_init__(self) -> None:
        if self.n_answers < 2:
            raise ShapeMismatchError("categorical policy needs at least 2 answers")

    @property
    def vocab(self) -> int:
        return self.n_answers

    @property
    def horizon(self) -> int:
        return 1


@dataclass(frozen=True)
class Autoregressive:
    """Depth-``horizon`` policy over a ``vocab``-token alphabet, tabular."""

    vocab: int
    horizon: int

    def __post_init__(self) -> None:
        if self.vocab < 2:
            raise ShapeMismatchError("autoregressive policy needs vocab >= 2")
        if self.horizon < 1:
            raise ShapeMismatchError("autoregressive policy needs horizon >= 1")


Shape = Categorical | Autoregressive


def space_size(shape: Shape) -> int:
    """Number of trajectories, V**T."""
    return shape.vocab**shape.horizon


def node_count(shape: Shape) -> int:
    """Prefix-tree nodes carrying a logit row: 1 + V + ... + V**(T-1)."""
    v, t = shape.vocab, shape.horizon
    return (v**t - 1) // (v - 1)


def param_count(shape: Shape) -> int:
    return node_count(shape) * shape.vocab


def level_offsets(shape: Shape) -> np.ndarray:
    """offsets[t] = index of the first node at depth t (t in 0..T)."""
    v, t = shape.vocab, shape.horizon
    return np.array([(v**d - 1) // (v - 1) for d in range(t + 1)], dtype=np.int64)


@dataclass(frozen=True)
class Policy:
    """Immutable tabular softmax policy: a shape plus its flat logit vector."""

    shape: Shape
    logits: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.logits, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != param_count(self.shape):
            raise ShapeMismatchError(
                f"expected {param_count(self.shape)} logits for {self.shape}, "
                f"got array of shape {arr.shape}"
            )
        if not np.all(np.isfinite(arr)):
            raise ShapeMismatchError("logits must be finite")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "logits", arr)

    @property
    def param_count(self) -> int:
        return self.logits.shape[0]


def uniform_policy(shape: Shape) -> Policy:
    return Policy(shape, np.zeros(param_count(shape)))


# ---------------------------------------------------------------------------
# internal engine: softmax rows, leaf probabilities, index arithmetic
# ---------------------------------------------------------------------------

def softmax_rows(shape: Shape, logits: np.ndarray) -> np.ndarray:
    """Row-wise stable softmax of the logit table, shape (n_nodes, V).

    Rows are normalized by the last element of a cumulative sum so the
    reduction order matches the sequential kernels exactly.
    """
    rows = logits.reshape(node_count(shape), shape.vocab)
    e = np.exp(rows - rows.max(axis=1, keepdims=True))
    z = np.cumsum(e, axis=1)[:, -1:]
    return e / z


def trajectory_probs(shape: Shape, logits: np.ndarray) -> np.ndarray:
    """Probabilities of all V**T trajectories in lexicographic order."""
    v, t = shape.vocab, shape.horizon
    rows = softmax_rows(shape, logits)
    offs = level_offsets(shape)
    probs = np.ones(1)
    for depth in range(t):
        level = rows[offs[depth]:offs[depth + 1]]
        probs = (probs[:, None] * level).ravel()
    return probs


def trajectory_to_index(shape: Shape, y: Sequence[int]) -> int:
    """Leaf index (lexicographic rank) of a trajectory; validates it."""
    v, t = shape.vocab, shape.horizon
    if len(y) != t:
        raise ShapeMismatchError(f"expected trajectory of length {t}, got {len(y)}")
    idx = 0
    for token in y:
        token = int(token)
        if not 0 <= token < v:
            raise ShapeMismatchError(f"token {token} outside vocabulary [0, {v})")
        idx = idx * v + token
    return idx


def index_to_trajectory(shape: Shape, idx: int) -> Trajectory:
    v, t = shape.vocab, shape.horizon
    digits = []
    for _ in range(t):
        digits.append(idx % v)
        idx //= v
    return tuple(reversed(digits))


def set_to_indices(shape: Shape, trajectories: Iterable[Sequence[int]]) -> np.ndarray:
    """Sorted, deduplicated leaf indices of a trajectory set."""
    idx = {trajectory_to_index(shape, y) for y in trajectories}
    return np.array(sorted(idx), dtype=np.int64)


def visit_coords(shape: Shape) -> np.ndarray:
    """(S, T) array: flat logit coordinate used at each step of each trajectory.

    Row s lists, per depth t, the coordinate node*V + token the trajectory
    with leaf index s passes through. This is the lookup table the Monte
    Carlo kernels use to turn sampled leaf indices into score-vector
    updates.
    """
    v, t = shape.vocab, shape.horizon
    s = space_size(shape)
    offs = level_offsets(shape)
    leaf = np.arange(s, dtype=np.int64)
    coords = np.empty((s, t), dtype=np.int64)
    for depth in range(t):
        prefix_rank = leaf // v ** (t - depth)
        token = (leaf // v ** (t - depth - 1)) % v
        coords[:, depth] = (offs[depth] + prefix_rank) * v + token
    return coords


def _visited_rows(shape: Shape, idx: int) -> list[tuple[int, int]]:
    """(node, token) pairs a trajectory passes through, root first."""
    v, t = shape.vocab, shape.horizon
    offs = level_offsets(shape)
    out = []
    for depth in range(t):
        prefix_rank = idx // v ** (t - depth)
        token = (idx // v ** (t - depth - 1)) % v
        out.append((int(offs[depth] + prefix_rank), int(token)))
    return out


def _row_softmax(logits: np.ndarray, node: int, v: int) -> np.ndarray:
    row = logits[node * v:(node + 1) * v]
    e = np.exp(row - row.max())
    return e / np.cumsum(e)[-1]


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def prob(policy: Policy, y: Sequence[int]) -> float:
    """Probability of one trajectory: product of per-step softmax factors."""
    idx = trajectory_to_index(policy.shape, y)
    v = policy.shape.vocab
    p = 1.0
    for node, token in _visited_rows(policy.shape, idx):
        p *= float(_row_softmax(policy.logits, node, v)[token])
    return p


def log_prob_grad(policy: Policy, y: Sequence[int]) -> np.ndarray:
    """Exact gradient of log prob(y) w.r.t. all logits.

    Each visited row contributes one-hot(token) − softmax(row); rows of
    unvisited prefixes stay zero.
    """
    idx = trajectory_to_index(policy.shape, y)
    v = policy.shape.vocab
    grad = np.zeros(policy.param_count)
    for node, token in _visited_rows(policy.shape, idx):
        sm = _row_softmax(policy.logits, node, v)
        grad[node * v:(node + 1) * v] = -sm
        grad[node * v + token] += 1.0
    return grad


def enumerate_support(
    policy: Policy, cap: int = DEFAULT_SPACE_CAP
) -> list[tuple[Trajectory, float]]:
    """All (trajectory, probability) pairs in lexicographic order.

    Raises CapacityError when the space exceeds ``cap`` — enumeration is the
    correctness oracle for everything else, so it refuses to truncate.
    """
    s = space_size(policy.shape)
    if s > cap:
        raise CapacityError(
            f"trajectory space {s} exceeds enumeration cap {cap}"
        )
    probs = trajectory_probs(policy.shape, policy.logits)
    return [
        (index_to_trajectory(policy.shape, i), float(probs[i])) for i in range(s)
    ]


def sample(policy: Policy, rng: np.random.Generator, n: int) -> list[Trajectory]:
    """n i.i.d. trajectories via inverse-CDF over the lexicographic order."""
    if n < 1:
        raise ValueError("need n >= 1 samples")
    idx = sample_indices(policy, rng, n)
    return [index_to_trajectory(policy.shape, int(i)) for i in idx]


def sample_indices(policy: Policy, rng: np.random.Generator, n) -> np.ndarray:
    """Leaf-index form of :func:`sample`; ``n`` may be an int or a shape tuple."""
    probs = trajectory_probs(policy.shape, policy.logits)
    cdf = np.cumsum(probs)
    u = rng.random(n)
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, probs.shape[0] - 1).astype(np.int64)


def mass(policy: Policy, trajectories: Iterable[Sequence[int]]) -> float:
    """Total probability of a trajectory set (exact, by summation)."""
    idx = set_to_indices(policy.shape, trajectories)
    if idx.size == 0:
        return 0.0
    probs = trajectory_probs(policy.shape, policy.logits)
    return float(np.cumsum(probs[idx])[-1])


def mass_grad(policy: Policy, trajectories: Iterable[Sequence[int]]) -> np.ndarray:
    """Exact gradient of mass(policy, set) w.r.t. all logits.

    Equals sum over members of prob(y) * log_prob_grad(y), assembled per
    prefix-tree level from member through-masses: the coordinate (node, v)
    gets thru(node, v) − softmax(node)[v] * thru(node).
    """
    shape = policy.shape
    idx = set_to_indices(shape, trajectories)
    grad = np.zeros(policy.param_count)
    if idx.size == 0:
        return grad
    v, t = shape.vocab, shape.horizon
    probs = trajectory_probs(shape, policy.logits)
    member_probs = probs[idx]
    rows = softmax_rows(shape, policy.logits)
    offs = level_offsets(shape)
    for depth in range(t):
        child_rank = idx // v ** (t - depth - 1)  # prefix rank at depth+1
        thru_child = np.bincount(
            child_rank, weights=member_probs, minlength=v ** (depth + 1)
        )
        thru_node = thru_child.reshape(v**depth, v).sum(axis=1)
        level_rows = rows[offs[depth]:offs[depth + 1]]
        level_grad = thru_child - level_rows.ravel() * np.repeat(thru_node, v)
        grad[offs[depth] * v:offs[depth + 1] * v] = level_grad
    return grad


def apply_update(policy: Policy, direction: np.ndarray, eta: float) -> Policy:
    """New policy with logits + eta * direction; the input is untouched."""
    direction = np.asarray(direction, dtype=np.float64)
    if direction.shape != policy.logits.shape:
        raise ShapeMismatchError(
            f"direction shape {direction.shape} != params shape {policy.logits.shape}"
        )
    if eta <= 0:
        raise ValueError("step size eta must be > 0")
    return Policy(policy.shape, policy.logits + eta * direction)
