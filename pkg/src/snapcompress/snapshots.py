"""Network snapshots and snapshot sequences.

A snapshot is a static weighted contact network (symmetric adjacency
matrix) that is valid for a time interval, together with the transmission
rate of the spreading process running on it.  Sequences of contiguous
snapshots are the unit of data everything else in this package operates
on: aggregation, diffusion, pair-error scoring and compression.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SnapshotError",
    "Snapshot",
    "SnapshotSequence",
    "consecutive",
    "aggregate",
    "aggregate_group",
    "transmission_operator",
    "initial_condition",
    "tau_bounds",
]

# Relative tolerance for "interval of Y starts where interval of X ends".
TIME_TOLERANCE = 1e-9


class SnapshotError(ValueError):
    """Invalid snapshot data or an operation on incompatible snapshots."""


def _as_contact_matrix(matrix) -> np.ndarray:
    """Validate and normalize an adjacency matrix for snapshot use.

    Requires a square, symmetric, non-negative real matrix.  Diagonal
    entries (self-contacts) are meaningless for contagion between nodes;
    any nonzero ones are dropped with a warning.
    """
    m = np.array(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SnapshotError(f"contact matrix must be square, got shape {m.shape}")
    if m.shape[0] == 0:
        raise SnapshotError("contact matrix must have at least one node")
    if not np.isfinite(m).all():
        raise SnapshotError("contact matrix contains non-finite entries")
    if not np.array_equal(m, m.T):
        raise SnapshotError("contact matrix must be symmetric")
    if (m < 0).any():
        raise SnapshotError("contact matrix entries must be non-negative")
    diag = np.diagonal(m)
    dropped = int(np.count_nonzero(diag))
    if dropped:
        warnings.warn(
            f"dropped {dropped} self-contact weight(s) from snapshot diagonal",
            stacklevel=3,
        )
        np.fill_diagonal(m, 0.0)
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class Snapshot:
    """A static contact network valid over one time interval.

    Attributes:
        matrix: N x N symmetric non-negative contact-weight matrix with a
            zero diagonal.  Read-only after construction.
        duration: length of the interval, seconds (> 0).
        start_time: interval start, seconds.
        beta: transmission rate per contact-weight per second (> 0).
    """

    matrix: np.ndarray
    duration: float
    start_time: float = 0.0
    beta: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_contact_matrix(self.matrix))
        object.__setattr__(self, "duration", float(self.duration))
        object.__setattr__(self, "start_time", float(self.start_time))
        object.__setattr__(self, "beta", float(self.beta))
        if not self.duration > 0:
            raise SnapshotError(f"duration must be positive, got {self.duration}")
        if not self.beta > 0:
            raise SnapshotError(f"beta must be positive, got {self.beta}")

    @property
    def node_count(self) -> int:
        return self.matrix.shape[0]

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration

    @property
    def max_weight(self) -> float:
        return float(self.matrix.max())

    @property
    def tau(self) -> float:
        """Dimensionless spreading scale beta * duration * max weight."""
        return self.beta * self.duration * self.max_weight


def consecutive(x: Snapshot, y: Snapshot, rel_tol: float = TIME_TOLERANCE) -> bool:
    """True when the interval of ``y`` starts where the interval of ``x`` ends."""
    return math.isclose(y.start_time, x.end_time, rel_tol=rel_tol, abs_tol=rel_tol)


def _check_pair(x: Snapshot, y: Snapshot) -> None:
    if x.node_count != y.node_count:
        raise SnapshotError(
            f"snapshots have different node counts: {x.node_count} vs {y.node_count}"
        )
    if x.beta != y.beta:
        raise SnapshotError(f"snapshots have different beta: {x.beta} vs {y.beta}")
    if not consecutive(x, y):
        raise SnapshotError(
            f"snapshots are not consecutive: first ends at {x.end_time}, "
            f"second starts at {y.start_time}"
        )


def aggregate(x: Snapshot, y: Snapshot) -> Snapshot:
    """Duration-weighted average of two consecutive snapshots.

    The result spans both intervals and conserves duration-weighted
    contact mass: ``result.duration * result.matrix`` equals
    ``x.duration * x.matrix + y.duration * y.matrix`` elementwise.
    """
    _check_pair(x, y)
    total = x.duration + y.duration
    merged = (x.duration * x.matrix + y.duration * y.matrix) / total
    return Snapshot(merged, duration=total, start_time=x.start_time, beta=x.beta)


def aggregate_group(snapshots) -> Snapshot:
    """Duration-weighted average of a contiguous run of snapshots.

    Single weighted mean over the whole group; equivalent to folding
    :func:`aggregate` pairwise (weighted means are associative) but with
    fewer rounding steps.
    """
    group = list(snapshots)
    if not group:
        raise SnapshotError("cannot aggregate an empty group")
    for a, b in zip(group, group[1:]):
        _check_pair(a, b)
    total = math.fsum(s.duration for s in group)
    merged = sum(s.duration * s.matrix for s in group) / total
    return Snapshot(
        merged, duration=total, start_time=group[0].start_time, beta=group[0].beta
    )


def transmission_operator(s: Snapshot) -> np.ndarray:
    """Linearized per-snapshot propagator exponent beta * duration * matrix."""
    return s.beta * s.duration * s.matrix


def initial_condition(s: Snapshot) -> np.ndarray:
    """Patient-zero probability vector proportional to weighted node degree.

    Entries are the row sums of the contact matrix normalized to total 1.
    A snapshot with no contacts at all yields the uniform vector 1/N.
    """
    degrees = s.matrix.sum(axis=1)
    total = degrees.sum()
    if total == 0.0:
        return np.full(s.node_count, 1.0 / s.node_count)
    return degrees / total


@dataclass(frozen=True)
class SnapshotSequence:
    """Ordered, contiguous snapshots sharing a node universe and beta.

    Attributes:
        snapshots: the snapshots in chronological order.
        node_labels: external node identifier per internal index.  Defaults
            to stringified indices.
    """

    snapshots: tuple[Snapshot, ...]
    node_labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        snaps = tuple(self.snapshots)
        object.__setattr__(self, "snapshots", snaps)
        if not snaps:
            raise SnapshotError("snapshot sequence cannot be empty")
        n = snaps[0].node_count
        beta = snaps[0].beta
        for k, s in enumerate(snaps):
            if s.node_count != n:
                raise SnapshotError(
                    f"snapshot {k} has {s.node_count} nodes, expected {n}"
                )
            if s.beta != beta:
                raise SnapshotError(f"snapshot {k} has beta {s.beta}, expected {beta}")
        for k, (a, b) in enumerate(zip(snaps, snaps[1:])):
            if not consecutive(a, b):
                raise SnapshotError(
                    f"snapshots {k} and {k + 1} are not consecutive: "
                    f"{a.end_time} vs {b.start_time}"
                )
        labels = tuple(self.node_labels) or tuple(str(i) for i in range(n))
        if len(labels) != n:
            raise SnapshotError(f"{len(labels)} node labels for {n} nodes")
        if len(set(labels)) != n:
            raise SnapshotError("node labels must be unique")
        object.__setattr__(self, "node_labels", labels)

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)

    def __getitem__(self, k) -> Snapshot:
        return self.snapshots[k]

    @property
    def node_count(self) -> int:
        return self.snapshots[0].node_count

    @property
    def beta(self) -> float:
        return self.snapshots[0].beta

    @property
    def start_time(self) -> float:
        return self.snapshots[0].start_time

    @property
    def end_time(self) -> float:
        return self.snapshots[-1].end_time

    @property
    def total_duration(self) -> float:
        return math.fsum(s.duration for s in self.snapshots)

    @property
    def boundaries(self) -> tuple[float, ...]:
        """Start time of every snapshot."""
        return tuple(s.start_time for s in self.snapshots)

    def replace_snapshots(self, snapshots) -> "SnapshotSequence":
        return SnapshotSequence(tuple(snapshots), self.node_labels)


def tau_bounds(seq: SnapshotSequence) -> tuple[float, float]:
    """Range of the per-snapshot spreading scale beta * duration * max weight.

    The pair-error estimate truncates a matrix-exponential series at third
    order, which is only trustworthy for tau well below 1; callers should
    treat tau above 0.5 as suspect and tau above 1 as out of range.
    """
    taus = [s.tau for s in seq.snapshots]
    return min(taus), max(taus)
