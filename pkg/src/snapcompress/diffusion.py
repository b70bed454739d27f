"""Contagion dynamics on snapshot sequences.

Two solvers live here.  ``integrate_si`` is the ground truth: fixed-step
RK4 integration of the saturating susceptible-infected rate equation
dP/dt = (1 - P) * (beta * A P), applied piecewise with each snapshot's
matrix.  ``propagate_linear`` is the rare-infection linearization, which
replaces a snapshot by the matrix exponential of its transmission
operator; comparing the two regimes (chronological product of
exponentials vs a single aggregate exponential) is what the pair-error
module estimates without ever forming an exponential.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .snapshots import Snapshot, SnapshotSequence, _check_pair, transmission_operator

__all__ = [
    "IntegrationError",
    "IntegratorConfig",
    "Trajectory",
    "matrix_exponential",
    "integrate_si",
    "propagate_linear",
    "pair_endpoints",
]

# Probabilities may drift past [0, 1] by rounding noise; anything worse is
# treated as an integrator failure, not clamped away.
BOUNDS_SLACK = 1e-9

# Warn when beta * duration * max weight exceeds this in the linearized solver.
LINEAR_REGIME_TAU = 0.5


class IntegrationError(RuntimeError):
    """The integrator left the valid probability range."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings.

    Attributes:
        step_fraction: step size as a fraction of the shortest snapshot
            duration, at most 0.1.
        sample_count: output samples per snapshot (counting both interval
            endpoints), at least 2.
    """

    step_fraction: float = 0.02
    sample_count: int = 5

    def __post_init__(self):
        if not 0.0 < self.step_fraction <= 0.1:
            raise ValueError(f"step_fraction must be in (0, 0.1], got {self.step_fraction}")
        if self.sample_count < 2:
            raise ValueError(f"sample_count must be at least 2, got {self.sample_count}")


@dataclass(frozen=True)
class Trajectory:
    """Sampled per-node infection probabilities over time.

    Attributes:
        times: increasing sample times, seconds.
        states: probability vector per sample time, shape (len(times), N).
        totals: infected-compartment size per sample, the entry sum of each
            state.
    """

    times: np.ndarray
    states: np.ndarray
    totals: np.ndarray = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        states = np.asarray(self.states, dtype=float)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)
        if self.totals is None:
            object.__setattr__(self, "totals", states.sum(axis=1))
        else:
            object.__setattr__(self, "totals", np.asarray(self.totals, dtype=float))

    def __len__(self) -> int:
        return len(self.times)


def matrix_exponential(m: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    """exp(m) by scaling and squaring with a convergent Taylor series.

    The argument is scaled down by a power of two until its max-norm is at
    most 1, the series is summed until the next term falls below
    ``rel_tol`` relative to the running result, and the result is squared
    back up.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix_exponential needs a square matrix, got {m.shape}")
    n = m.shape[0]
    # the induced 1-norm bounds the spectral radius, so the scaled series
    # terms decay at least factorially
    scale = np.linalg.norm(m, 1)
    squarings = max(0, int(np.ceil(np.log2(scale)))) if scale > 1.0 else 0
    scaled = m / (2.0**squarings)

    result = np.eye(n) + scaled
    term = scaled
    for k in range(2, 64):
        term = term @ scaled / k
        result = result + term
        if np.abs(term).max() <= rel_tol * max(1.0, np.abs(result).max()):
            break
    else:  # pragma: no cover - norm <= 1 converges in ~20 terms
        raise ArithmeticError("matrix exponential series did not converge")

    for _ in range(squarings):
        result = result @ result
    return result


def _check_probability_vector(p0: np.ndarray, n: int) -> np.ndarray:
    p = np.asarray(p0, dtype=float)
    if p.shape != (n,):
        raise ValueError(f"probability vector has shape {p.shape}, expected ({n},)")
    if (p < 0).any() or (p > 1).any():
        raise ValueError("probability vector entries must lie in [0, 1]")
    return p.copy()


def _si_rate(beta: float, matrix: np.ndarray, p: np.ndarray) -> np.ndarray:
    return (1.0 - p) * (beta * (matrix @ p))


def _rk4_span(matrix, beta, p, span, max_step):
    """Advance p over span with uniform RK4 steps no longer than max_step."""
    steps = max(1, int(np.ceil(span / max_step - 1e-12)))
    h = span / steps
    for _ in range(steps):
        k1 = _si_rate(beta, matrix, p)
        k2 = _si_rate(beta, matrix, p + 0.5 * h * k1)
        k3 = _si_rate(beta, matrix, p + 0.5 * h * k2)
        k4 = _si_rate(beta, matrix, p + h * k3)
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        low, high = p.min(), p.max()
        if low < -BOUNDS_SLACK or high > 1.0 + BOUNDS_SLACK:
            raise IntegrationError(
                f"probabilities left [0, 1] (min {low}, max {high}); "
                "the integration step is too large"
            )
        np.clip(p, 0.0, 1.0, out=p)
    return p


def integrate_si(
    seq: SnapshotSequence,
    p0: np.ndarray,
    cfg: IntegratorConfig = IntegratorConfig(),
    sample_times: np.ndarray | None = None,
) -> Trajectory:
    """Integrate saturating SI dynamics piecewise over a snapshot sequence.

    The probability vector evolves under dP/dt = (1 - P) * (beta * A P)
    with the matrix of whichever snapshot owns the current time, and is
    continuous across snapshot boundaries.  Steps never straddle a
    boundary or a sample time.

    Args:
        seq: the snapshot sequence.
        p0: initial probabilities, one entry per node, each in [0, 1].
        cfg: step and sampling configuration.
        sample_times: optional explicit output grid.  Must be increasing
            and inside the sequence span; times past the final boundary by
            at most a relative 1e-6 are snapped to it.  When omitted, each
            snapshot is sampled at ``cfg.sample_count`` evenly spaced
            points including its endpoints.

    Returns:
        Trajectory over the requested grid, always starting at the
        sequence start time.
    """
    p = _check_probability_vector(p0, seq.node_count)
    max_step = cfg.step_fraction * min(s.duration for s in seq.snapshots)

    span_slack = 1e-6 * seq.total_duration
    end_time = seq.end_time
    if sample_times is None:
        requested = np.concatenate(
            [np.linspace(s.start_time, s.end_time, cfg.sample_count)[1:] for s in seq]
        )
    else:
        requested = np.asarray(sample_times, dtype=float)
        if requested.ndim != 1 or len(requested) == 0:
            raise ValueError("sample_times must be a non-empty 1-D array")
        if (np.diff(requested) <= 0).any():
            raise ValueError("sample_times must be strictly increasing")
        if requested[0] < seq.start_time - span_slack or requested[-1] > end_time + span_slack:
            raise ValueError(
                f"sample_times outside sequence span "
                f"[{seq.start_time}, {end_time}]"
            )
        requested = np.minimum(requested, end_time)
        requested = requested[requested > seq.start_time]

    times = [seq.start_time]
    states = [p.copy()]
    cursor = 0
    for idx, snap in enumerate(seq.snapshots):
        t = max(seq.start_time, snap.start_time)
        stop = snap.end_time
        # Sample times owned by this snapshot: inside (start, end], except the
        # final snapshot also absorbs anything snapped onto the sequence end.
        while cursor < len(requested):
            target = requested[cursor]
            if target > stop and not (idx == len(seq) - 1):
                break
            target = min(target, stop)
            if target > t:
                p = _rk4_span(snap.matrix, snap.beta, p, target - t, max_step)
                t = target
            times.append(requested[cursor])
            states.append(p.copy())
            cursor += 1
        if t < stop:
            p = _rk4_span(snap.matrix, snap.beta, p, stop - t, max_step)

    return Trajectory(np.array(times), np.array(states))


def propagate_linear(s: Snapshot, p0: np.ndarray) -> np.ndarray:
    """Rare-infection endpoint exp(T) @ p0 with T the transmission operator.

    The exponential is evaluated to machine precision, not truncated; only
    the saturation factor (1 - P) is dropped relative to ``integrate_si``.
    Warns when beta * duration * max weight exceeds 0.5, where the
    linearization stops being meaningful.
    """
    p = np.asarray(p0, dtype=float)
    if p.shape != (s.node_count,):
        raise ValueError(f"probability vector has shape {p.shape}, expected ({s.node_count},)")
    if s.tau > LINEAR_REGIME_TAU:
        warnings.warn(
            f"tau = {s.tau:.3g} exceeds {LINEAR_REGIME_TAU}; "
            "the linearized propagation is unreliable this far from the rare-infection regime",
            stacklevel=2,
        )
    return matrix_exponential(transmission_operator(s)) @ p


def pair_endpoints(
    a: Snapshot, b: Snapshot, p0: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Linearized endpoints of a consecutive pair under both regimes.

    Returns ``(temporal, aggregate)``: the temporal regime applies the two
    snapshot exponentials in chronological order, the aggregate regime
    applies the single exponential of the summed transmission operators
    (identical to the exponential of the duration-weighted aggregate
    snapshot over the combined duration).
    """
    _check_pair(a, b)
    p = np.asarray(p0, dtype=float)
    t_a = transmission_operator(a)
    t_b = transmission_operator(b)
    temporal = matrix_exponential(t_b) @ (matrix_exponential(t_a) @ p)
    agg = matrix_exponential(t_a + t_b) @ p
    return temporal, agg
