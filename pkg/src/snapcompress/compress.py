"""Greedy chronology-preserving compression of snapshot sequences.

Each round scores every adjacent snapshot pair with the aggregation-error
estimate ``xi``, merges the cheapest pair into its duration-weighted
aggregate, and repeats until the requested snapshot count is reached.
Merging pair p only invalidates the scores of the pairs that contain the
merged snapshot, so after the initial sweep each round recomputes at most
two scores.  The even splitter, used both as the baseline to beat and as
the pre-aggregation stage for oversized inputs, partitions the timeline
into groups of near-equal total duration instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pair_error import PairError, xi
from .snapshots import Snapshot, SnapshotSequence, aggregate, aggregate_group

__all__ = [
    "MergeStep",
    "CompressionResult",
    "ErrorProfile",
    "greedy_compress",
    "even_compress",
    "error_profile",
    "pre_aggregate",
]


@dataclass(frozen=True)
class MergeStep:
    """One greedy merge: at ``step``, pair ``pair_index`` had the lowest xi."""

    step: int
    pair_index: int
    xi_value: float


@dataclass(frozen=True)
class CompressionResult:
    """Outcome of a greedy compression run.

    Attributes:
        compressed: the surviving snapshot sequence.
        boundaries: start times of the surviving snapshots.
        merge_log: the merges in execution order; pair indices refer to the
            working sequence as it stood at that step.
        final_count: length of the compressed sequence.
    """

    compressed: SnapshotSequence
    boundaries: tuple[float, ...]
    merge_log: tuple[MergeStep, ...]
    final_count: int


@dataclass(frozen=True)
class ErrorProfile:
    """Per-adjacent-pair error scores of a sequence at one resolution."""

    pair_errors: tuple[PairError, ...]
    resolution: int


def _greedy_run(
    snapshots: list[Snapshot],
    target: int,
    capture: dict[int, tuple[Snapshot, ...]] | None = None,
) -> tuple[list[Snapshot], list[MergeStep]]:
    """Merge lowest-xi adjacent pairs until ``target`` snapshots remain.

    ``capture`` collects the working snapshot tuple after every merge,
    keyed by its length, for callers that want the whole hierarchy.
    """
    working = list(snapshots)
    pair_xis = [xi(working[i], working[i + 1]).xi for i in range(len(working) - 1)]
    merge_log: list[MergeStep] = []

    step = 0
    while len(working) > target:
        step += 1
        best = min(range(len(pair_xis)), key=pair_xis.__getitem__)
        merge_log.append(MergeStep(step, best, pair_xis[best]))
        working[best : best + 2] = [aggregate(working[best], working[best + 1])]
        del pair_xis[best]
        if best > 0:
            pair_xis[best - 1] = xi(working[best - 1], working[best]).xi
        if best < len(pair_xis):
            pair_xis[best] = xi(working[best], working[best + 1]).xi
        if capture is not None:
            capture[len(working)] = tuple(working)
    return working, merge_log


def greedy_compress(seq: SnapshotSequence, target: int) -> CompressionResult:
    """Compress a sequence to ``target`` snapshots by greedy pair merging.

    Performs ``len(seq) - target`` rounds; each round merges the adjacent
    pair with the smallest combined aggregation-error score (leftmost pair
    on ties), replacing it by the duration-weighted aggregate.  Only
    adjacent pairs are ever merged, so chronology is preserved, and the
    total duration and duration-weighted contact mass are conserved.
    """
    if not 1 <= target <= len(seq):
        raise ValueError(f"target must be in [1, {len(seq)}], got {target}")
    working, merge_log = _greedy_run(list(seq.snapshots), target)
    compressed = seq.replace_snapshots(working)
    return CompressionResult(
        compressed=compressed,
        boundaries=compressed.boundaries,
        merge_log=tuple(merge_log),
        final_count=len(compressed),
    )


def even_split_points(durations, target: int) -> list[int]:
    """Deterministic near-equal-duration split of a duration list.

    Returns the ``target - 1`` interior boundary positions (in snapshot
    counts) of a contiguous partition into ``target`` groups.  Boundary k
    is placed where the cumulative duration comes closest to k/target of
    the total, preferring the earlier position on ties, while keeping
    every group non-empty.
    """
    prefix = np.cumsum(np.asarray(durations, dtype=float))
    total = prefix[-1]
    count = len(prefix)
    splits: list[int] = []
    previous = 0
    for k in range(1, target):
        quota = total * k / target
        lo = previous + 1
        hi = count - (target - k)
        candidates = np.abs(prefix[lo - 1 : hi] - quota)
        best = lo + int(np.argmin(candidates))
        splits.append(best)
        previous = best
    return splits


def even_compress(seq: SnapshotSequence, target: int) -> SnapshotSequence:
    """Aggregate a sequence into ``target`` groups of near-equal duration.

    The baseline compressor: ignores structure entirely and only balances
    wall-clock coverage.  With uniform snapshot durations this reduces to
    near-equal group sizes; ``target == len(seq)`` returns the sequence
    unchanged.
    """
    if not 1 <= target <= len(seq):
        raise ValueError(f"target must be in [1, {len(seq)}], got {target}")
    if target == len(seq):
        return seq
    splits = even_split_points([s.duration for s in seq.snapshots], target)
    bounds = [0, *splits, len(seq)]
    groups = [seq.snapshots[lo:hi] for lo, hi in zip(bounds, bounds[1:])]
    return seq.replace_snapshots(aggregate_group(g) for g in groups)


def error_profile(seq: SnapshotSequence) -> ErrorProfile:
    """Score every adjacent pair of a sequence, in chronological order."""
    if len(seq) < 2:
        raise ValueError("error profile needs at least two snapshots")
    errors = tuple(
        xi(seq.snapshots[i], seq.snapshots[i + 1], pair_index=i)
        for i in range(len(seq) - 1)
    )
    return ErrorProfile(pair_errors=errors, resolution=len(seq))


def pre_aggregate(seq: SnapshotSequence, m: int) -> SnapshotSequence:
    """Evenly coarse-grain a sequence to ``m`` snapshots.

    Identical to :func:`even_compress`; exposed under its pipeline name
    because oversized raw streams are evenly coarse-grained once, up
    front, before any per-pair scoring happens.
    """
    return even_compress(seq, m)
