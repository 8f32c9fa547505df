"""Verifiable-reward environments: binary verifiers, mode partitions, scenarios.

Verifiers are extensional — an explicit set of correct trajectories — which
is the exact idealization of unit-test / exact-match checking on an
enumerable space. A ModePartition splits the correct set into a discovered
mode M1 and an undiscovered mode M2; both relations are machine-checked at
construction and the objects are immutable afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import log
from typing import Iterable, Sequence

import numpy as np

from . import policy as pol
from .errors import CapacityError, PartitionError, ShapeMismatchError
from .policy import (
    Autoregressive,
    Categorical,
    Policy,
    Shape,
    Trajectory,
    DEFAULT_SPACE_CAP,
)


def _as_trajectory_set(members: Iterable[Sequence[int]]) -> frozenset[Trajectory]:
    out = set()
    for y in members:
        if isinstance(y, (int, np.integer)):
            y = (int(y),)
        out.add(tuple(int(tok) for tok in y))
    return frozenset(out)


@dataclass(frozen=True)
class Verifier:
    """Deterministic binary verifier: V(y) = 1 iff y is in the correct set."""

    correct_set: frozenset[Trajectory]

    def __init__(self, correct_set: Iterable[Sequence[int]]):
        object.__setattr__(self, "correct_set", _as_trajectory_set(correct_set))

    def indices(self, shape: Shape) -> np.ndarray:
        """Sorted leaf indices of the correct set under ``shape``."""
        return pol.set_to_indices(shape, self.correct_set)

    def bits(self, shape: Shape) -> np.ndarray:
        """uint8 indicator over the full lexicographic trajectory space."""
        bits = np.zeros(pol.space_size(shape), dtype=np.uint8)
        bits[self.indices(shape)] = 1
        return bits


def verify(verifier: Verifier, y: Sequence[int]) -> int:
    """1 iff y is a correct trajectory."""
    if isinstance(y, (int, np.integer)):
        y = (int(y),)
    return 1 if tuple(int(tok) for tok in y) in verifier.correct_set else 0


@dataclass(frozen=True)
class ModePartition:
    """Disjoint split of a verifier's correct set into modes M1 and M2."""

    m1: frozenset[Trajectory]
    m2: frozenset[Trajectory]

    def __init__(self, m1: Iterable[Sequence[int]], m2: Iterable[Sequence[int]]):
        object.__setattr__(self, "m1", _as_trajectory_set(m1))
        object.__setattr__(self, "m2", _as_trajectory_set(m2))
        if self.m1 & self.m2:
            raise PartitionError(f"modes overlap: {sorted(self.m1 & self.m2)}")

    def validate_against(self, verifier: Verifier) -> None:
        if self.m1 | self.m2 != verifier.correct_set:
            raise PartitionError("modes do not cover the verifier's correct set")


def trivial_partition(verifier: Verifier) -> ModePartition:
    """Everything correct in M1, M2 empty — used when no partition is given."""
    return ModePartition(verifier.correct_set, ())


@dataclass(frozen=True)
class Scenario:
    """Everything one training experiment needs, in one immutable bundle."""

    policy: Policy
    verifier: Verifier
    partition: ModePartition | None = None
    k: int = 1
    eta: float = 0.05
    steps: int = 0
    master_seed: int = 0
    replicates: int = 1
    reinforce_all: bool = False  # reinforce the whole batch, not just verified samples

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.eta <= 0:
            raise ValueError("eta must be > 0")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.partition is not None:
            self.partition.validate_against(self.verifier)


# ---------------------------------------------------------------------------
# constructors
# ---------------------------------------------------------------------------

def _build_partition(
    correct: frozenset[Trajectory],
    modes: tuple[Iterable, Iterable] | None,
) -> ModePartition | None:
    if modes is None:
        return None
    partition = ModePartition(modes[0], modes[1])
    if partition.m1 | partition.m2 != correct:
        raise PartitionError("modes do not cover the correct set")
    return partition


def make_bandit(
    n_answers: int,
    correct: Iterable[int],
    modes: tuple[Iterable, Iterable] | None = None,
    logits: np.ndarray | None = None,
) -> tuple[Policy, Verifier, ModePartition | None]:
    """Categorical environment: N answers, an index set of correct ones.

    Starts uniform (zero logits) unless initial logits are supplied.
    """
    shape = Categorical(n_answers)
    verifier = Verifier(correct)
    for (answer,) in verifier.correct_set:
        if not 0 <= answer < n_answers:
            raise ShapeMismatchError(f"correct answer {answer} outside [0, {n_answers})")
    partition = _build_partition(verifier.correct_set, modes)
    if logits is None:
        policy = pol.uniform_policy(shape)
    else:
        policy = Policy(shape, logits)
    return policy, verifier, partition


def make_sequence_env(
    vocab: int,
    horizon: int,
    targets: Iterable[Sequence[int]],
    modes: tuple[Iterable, Iterable] | None = None,
    logits: np.ndarray | None = None,
    cap: int = DEFAULT_SPACE_CAP,
) -> tuple[Policy, Verifier, ModePartition | None]:
    """Autoregressive environment whose verifier is membership in ``targets``."""
    shape = Autoregressive(vocab, horizon)
    if pol.space_size(shape) > cap:
        raise CapacityError(
            f"trajectory space {pol.space_size(shape)} exceeds cap {cap}"
        )
    verifier = Verifier(targets)
    for y in verifier.correct_set:
        pol.trajectory_to_index(shape, y)  # validates length and alphabet
    partition = _build_partition(verifier.correct_set, modes)
    if logits is None:
        policy = pol.uniform_policy(shape)
    else:
        policy = Policy(shape, logits)
    return policy, verifier, partition


def epsilon_logit(epsilon: float, mode_size: int, rest_size: int) -> float:
    """Logit giving a ``mode_size``-member set mass ``epsilon`` against
    ``rest_size`` zero-logit answers: ln(eps*R / (|M|*(1-eps)))."""
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must be in (0, 1)")
    if mode_size < 1 or rest_size < 1:
        raise ValueError("need at least one member on each side")
    return log(epsilon * rest_size / (mode_size * (1.0 - epsilon)))


def make_two_mode_bandit(
    n_answers: int,
    m1: Iterable[int],
    m2: Iterable[int],
    epsilon: float,
) -> tuple[Policy, Verifier, ModePartition]:
    """Bandit with correct set M1 ∪ M2 where M2 starts with mass exactly ``epsilon``.

    M2 members share one engineered logit, everything else sits at 0; the
    achieved mass is asserted to within 1e-9 of the request.
    """
    m1_set = {int(i) for i in m1}
    m2_set = {int(i) for i in m2}
    if m1_set & m2_set:
        raise PartitionError("modes overlap")
    rest = n_answers - len(m2_set)
    logits = np.zeros(n_answers)
    level = epsilon_logit(epsilon, len(m2_set), rest)
    logits[sorted(m2_set)] = level
    policy, verifier, partition = make_bandit(
        n_answers, m1_set | m2_set, modes=(m1_set, m2_set), logits=logits
    )
    achieved = pol.mass(policy, [(i,) for i in m2_set])
    if abs(achieved - epsilon) > 1e-9:
        raise PartitionError(
            f"engineered M2 mass {achieved!r} misses target {epsilon!r}"
        )
    return policy, verifier, partition


def make_low_pass1_bandit(
    n_answers: int, correct: Iterable[int], target_pass1: float
) -> tuple[Policy, Verifier]:
    """Bandit whose correct set starts with mass exactly ``target_pass1``."""
    correct_set = {int(i) for i in correct}
    rest = n_answers - len(correct_set)
    logits = np.zeros(n_answers)
    logits[sorted(correct_set)] = epsilon_logit(target_pass1, len(correct_set), rest)
    policy, verifier, _ = make_bandit(n_answers, correct_set, logits=logits)
    achieved = pol.mass(policy, verifier.correct_set)
    if abs(achieved - target_pass1) > 1e-9:
        raise PartitionError(
            f"engineered pass@1 {achieved!r} misses target {target_pass1!r}"
        )
    return policy, verifier
