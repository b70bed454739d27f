"""Validation of compressed sequences against fully temporal dynamics.

A compressed sequence is only as good as the dynamics it supports, so the
judge here is the saturating SI integrator: run the full-resolution
sequence, the greedy-compressed sequence and the evenly compressed
baseline from the same initial condition, then score each candidate curve
by the time integral of its relative distance from the temporal curve.
All curves share one time grid (the temporal run's own sample points,
which contain every snapshot boundary of every regime), so the quadrature
never interpolates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .compress import CompressionResult, _greedy_run, even_compress, greedy_compress
from .diffusion import IntegratorConfig, Trajectory, integrate_si
from .snapshots import SnapshotSequence, initial_condition

__all__ = [
    "ValidationReport",
    "SweepEntry",
    "validation_distance",
    "compare_regimes",
    "compression_sweep",
    "report_to_dict",
    "curves_to_csv",
]


@dataclass(frozen=True)
class ValidationReport:
    """Distances and curves for one compression target.

    ``relative_error_vs_full_aggregation`` rescales ``d_alg`` by the
    distance of the everything-in-one-snapshot aggregation, so 1.0 means
    "no better than ignoring time entirely" and 0 means lossless.
    """

    d_alg: float
    d_even: float
    d_full_aggregation: float
    relative_error_vs_full_aggregation: float
    target_count: int
    curve_temporal: Trajectory
    curve_alg: Trajectory
    curve_even: Trajectory
    compression: CompressionResult
    boundaries_even: tuple[float, ...]


@dataclass(frozen=True)
class SweepEntry:
    """One sweep target plus how much further greedy can go at matched error.

    ``extra_compression_count`` is the smallest snapshot count whose greedy
    distance still does not exceed the even baseline at this target;
    ``extra_compression_factor`` is target divided by that count.  Both are
    zero when no level of the greedy hierarchy meets the bound.
    """

    report: ValidationReport
    extra_compression_count: int
    extra_compression_factor: float


def validation_distance(candidate: Trajectory, reference: Trajectory) -> float:
    """Integrated relative distance between two infected-size curves.

    Composite trapezoidal rule over the shared time grid of
    |candidate - reference| / reference.  Both trajectories must be
    sampled on the same grid and the reference must be strictly positive.
    """
    t_cand, t_ref = candidate.times, reference.times
    span = float(t_ref[-1] - t_ref[0])
    if len(t_cand) != len(t_ref) or np.abs(t_cand - t_ref).max() > 1e-9 * max(span, 1.0):
        raise ValueError("trajectories are not sampled on a common time grid")
    if (reference.totals <= 0).any():
        raise ValueError("reference curve must be strictly positive")
    integrand = np.abs(candidate.totals - reference.totals) / reference.totals
    return float(np.trapezoid(integrand, t_ref))


def _relative_to_full(d_alg: float, d_full: float) -> float:
    if d_full > 0.0:
        return d_alg / d_full
    return 1.0 if d_alg == 0.0 else math.inf


def compare_regimes(
    seq: SnapshotSequence, target: int, cfg: IntegratorConfig = IntegratorConfig()
) -> ValidationReport:
    """Compress to ``target`` both greedily and evenly, and score both.

    All three regimes (plus the full aggregation used for normalization)
    are integrated from the patient-zero vector of the first
    full-resolution snapshot on the temporal run's time grid.
    """
    if not 1 <= target <= len(seq):
        raise ValueError(f"target must be in [1, {len(seq)}], got {target}")
    p0 = initial_condition(seq.snapshots[0])
    curve_temporal = integrate_si(seq, p0, cfg)
    grid = curve_temporal.times

    compression = greedy_compress(seq, target)
    even_seq = even_compress(seq, target)
    curve_alg = integrate_si(compression.compressed, p0, cfg, sample_times=grid)
    curve_even = integrate_si(even_seq, p0, cfg, sample_times=grid)
    curve_full = integrate_si(even_compress(seq, 1), p0, cfg, sample_times=grid)

    d_alg = validation_distance(curve_alg, curve_temporal)
    d_even = validation_distance(curve_even, curve_temporal)
    d_full = validation_distance(curve_full, curve_temporal)
    return ValidationReport(
        d_alg=d_alg,
        d_even=d_even,
        d_full_aggregation=d_full,
        relative_error_vs_full_aggregation=_relative_to_full(d_alg, d_full),
        target_count=target,
        curve_temporal=curve_temporal,
        curve_alg=curve_alg,
        curve_even=curve_even,
        compression=compression,
        boundaries_even=even_seq.boundaries,
    )


def compression_sweep(
    seq: SnapshotSequence,
    targets,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> list[SweepEntry]:
    """Score a set of compression targets, reusing one greedy hierarchy.

    Greedy merging is hierarchical, so a single run down to one snapshot
    yields every intermediate level; each target's report reuses those
    levels, and the extra-compression search walks further down the same
    hierarchy until the greedy distance exceeds the even baseline at that
    target.
    """
    targets = [int(t) for t in targets]
    for t in targets:
        if not 1 <= t <= len(seq):
            raise ValueError(f"target must be in [1, {len(seq)}], got {t}")

    p0 = initial_condition(seq.snapshots[0])
    curve_temporal = integrate_si(seq, p0, cfg)
    grid = curve_temporal.times
    curve_full = integrate_si(even_compress(seq, 1), p0, cfg, sample_times=grid)
    d_full = validation_distance(curve_full, curve_temporal)

    levels: dict[int, tuple] = {len(seq): tuple(seq.snapshots)}
    _, full_log = _greedy_run(list(seq.snapshots), 1, capture=levels)

    alg_cache: dict[int, tuple[Trajectory, float]] = {}

    def alg_at(count: int) -> tuple[Trajectory, float]:
        if count not in alg_cache:
            level_seq = seq.replace_snapshots(levels[count])
            curve = integrate_si(level_seq, p0, cfg, sample_times=grid)
            alg_cache[count] = (curve, validation_distance(curve, curve_temporal))
        return alg_cache[count]

    entries: list[SweepEntry] = []
    for target in targets:
        compressed = seq.replace_snapshots(levels[target])
        compression = CompressionResult(
            compressed=compressed,
            boundaries=compressed.boundaries,
            merge_log=tuple(full_log[: len(seq) - target]),
            final_count=target,
        )
        even_seq = even_compress(seq, target)
        curve_even = integrate_si(even_seq, p0, cfg, sample_times=grid)
        d_even = validation_distance(curve_even, curve_temporal)
        curve_alg, d_alg = alg_at(target)

        best = target if d_alg <= d_even else None
        for count in range(target - 1, 0, -1):
            if alg_at(count)[1] <= d_even:
                best = count
        extra_count = best if best is not None else 0
        factor = target / best if best is not None else 0.0

        entries.append(
            SweepEntry(
                report=ValidationReport(
                    d_alg=d_alg,
                    d_even=d_even,
                    d_full_aggregation=d_full,
                    relative_error_vs_full_aggregation=_relative_to_full(d_alg, d_full),
                    target_count=target,
                    curve_temporal=curve_temporal,
                    curve_alg=curve_alg,
                    curve_even=curve_even,
                    compression=compression,
                    boundaries_even=even_seq.boundaries,
                ),
                extra_compression_count=extra_count,
                extra_compression_factor=factor,
            )
        )
    return entries


def report_to_dict(report: ValidationReport, tau_range: tuple[float, float] | None = None) -> dict:
    """JSON-ready summary of a validation report (full float precision)."""
    data = {
        "target_count": report.target_count,
        "d_alg": report.d_alg,
        "d_even": report.d_even,
        "d_full_aggregation": report.d_full_aggregation,
        "relative_error_vs_full_aggregation": report.relative_error_vs_full_aggregation,
        "boundaries_alg": list(report.compression.boundaries),
        "boundaries_even": list(report.boundaries_even),
        "merge_count": len(report.compression.merge_log),
        "merge_log": [
            {"step": m.step, "pair_index": m.pair_index, "xi": m.xi_value}
            for m in report.compression.merge_log
        ],
    }
    if tau_range is not None:
        data["tau_min"], data["tau_max"] = tau_range
    return data


def curves_to_csv(report: ValidationReport, header_lines: list[str] | None = None) -> str:
    """CSV text of the three curves on the shared grid (full precision)."""
    lines = [f"# {text}" for text in (header_lines or [])]
    lines.append("time,temporal,alg,even")
    for t, x_temp, x_alg, x_even in zip(
        report.curve_temporal.times,
        report.curve_temporal.totals,
        report.curve_alg.totals,
        report.curve_even.totals,
    ):
        lines.append(f"{t!r},{x_temp!r},{x_alg!r},{x_even!r}")
    return "\n".join(lines) + "\n"
