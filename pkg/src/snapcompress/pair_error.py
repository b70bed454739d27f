"""Aggregation-error estimate for a consecutive snapshot pair.

Merging two consecutive snapshots replaces the chronological product of
their linearized propagators, exp(T_B) exp(T_A), by the single aggregate
exponential exp(T_A + T_B).  The two differ exactly when the transmission
operators do not commute, and the Baker-Campbell-Hausdorff series makes
the discrepancy computable from plain matrix products: truncating
log(exp(T_B) exp(T_A)) at third order and subtracting the matching Taylor
terms of the aggregate exponential leaves a small polynomial in T_A and
T_B whose entries count two- and three-step transmission paths that
switch snapshots (respecting or violating chronology).

Weighting the elementwise absolute difference matrix by the patient-zero
vector turns that into a scalar infected-compartment discrepancy; doing
the same at the switch time catches pairs whose endpoint agrees but whose
interior dynamics do not.  The combined score ``xi`` is cheap, vanishes
for commuting pairs, and ranks adjacent pairs by how much aggregating
them would distort the dynamics - which is all the greedy compressor
needs from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .snapshots import Snapshot, _check_pair, aggregate, initial_condition, transmission_operator

__all__ = [
    "PairError",
    "bch_third_order",
    "difference_matrix_end",
    "epsilon_end",
    "difference_matrix_mid",
    "epsilon_mid",
    "xi",
]


@dataclass(frozen=True)
class PairError:
    """Aggregation-error scores for one adjacent snapshot pair.

    Attributes:
        epsilon_end: estimated infected-compartment discrepancy at the end
            of the pair's combined interval.
        epsilon_mid: the same at the switch time between the snapshots.
        xi: combined score (epsilon_end + epsilon_mid) * total duration.
        pair_index: index of the left snapshot within its sequence.
    """

    epsilon_end: float
    epsilon_mid: float
    xi: float
    pair_index: int = 0


def _word_products(a: Snapshot, b: Snapshot):
    """Transmission-operator products for every word of length <= 2.

    Letters are snapshots, a word is the ordered matrix product of each
    letter's transmission operator (rightmost letter acts first).  The
    second-order products returned here are the shared factors of every
    third-order word.
    """
    t_a = transmission_operator(a)
    t_b = transmission_operator(b)
    return t_a, t_b, t_a @ t_b, t_b @ t_a, t_a @ t_a, t_b @ t_b


def bch_third_order(a: Snapshot, b: Snapshot) -> np.ndarray:
    """Third-order truncation of log(exp(T_B) exp(T_A)).

    Expands the Baker-Campbell-Hausdorff series through triple products:
    the commutator term (T_B T_A - T_A T_B) / 2 plus the standard
    third-order nested commutators, written out as word products.  The
    exponential of the result reproduces the chronological product of the
    two snapshot exponentials up to fourth-order terms.
    """
    _check_pair(a, b)
    t_a, t_b, ab, ba, aa, bb = _word_products(a, b)
    return (
        (t_b + t_a)
        + 0.5 * (ba - ab)
        + ((bb @ t_a + ab @ t_b) + (aa @ t_b + ba @ t_a)) / 12.0
        - (ba @ t_b + ab @ t_a) / 6.0
    )


def difference_matrix_end(a: Snapshot, b: Snapshot) -> np.ndarray:
    """Endpoint difference between the temporal and aggregate propagators.

    Third-order truncation of exp(log(exp(T_B) exp(T_A))) minus
    exp(T_A + T_B).  Positive words (all length-2+ products read right to
    left as A before B) are transmission paths that switch snapshots in
    chronological order; words containing the product T_A T_B are paths
    that would need the later snapshot first.  Identically zero when the
    operators commute, and exactly zero when the two snapshots touch
    disjoint node sets (no product path can cross between them).
    """
    _check_pair(a, b)
    t_a, t_b, ab, ba, aa, bb = _word_products(a, b)
    # Grouping matters: summing the positive and negative word groups
    # pairwise keeps the cancellation exact (to the last bit) when a == b.
    second = 0.5 * (ba - ab)
    third_pos = (bb @ t_a + ba @ t_a) / 3.0
    third_neg = ((ba @ t_b + ab @ t_a) + (ab @ t_b + aa @ t_b)) / 6.0
    return second + third_pos - third_neg


def _weighted_mass(diff: np.ndarray, p0: np.ndarray) -> float:
    """Entry sum of |diff| @ p0, the scalar compartment discrepancy."""
    p = np.asarray(p0, dtype=float)
    if p.shape != (diff.shape[0],):
        raise ValueError(f"probability vector has shape {p.shape}, expected ({diff.shape[0]},)")
    return float((np.abs(diff) @ p).sum())


def epsilon_end(a: Snapshot, b: Snapshot, p0: np.ndarray) -> float:
    """Endpoint compartment discrepancy: entry sum of |D_end| @ p0."""
    return _weighted_mass(difference_matrix_end(a, b), p0)


def difference_matrix_mid(a: Snapshot, b: Snapshot) -> np.ndarray:
    """Switch-time difference between the temporal and aggregate propagators.

    At the moment the pair switches from its first snapshot to its second,
    the temporal regime has propagated under T_A alone while the aggregate
    regime has spent the same time under the duration-weighted mean
    matrix.  This is the difference of the two exponentials with both
    series truncated at third order; it can be nonzero even when the
    endpoint difference vanishes.
    """
    _check_pair(a, b)
    scale = a.beta * a.duration
    m_temp = scale * a.matrix
    m_agg = scale * aggregate(a, b).matrix
    diff = m_temp - m_agg
    temp_pow, agg_pow, factorial = m_temp, m_agg, 1.0
    for n in (2.0, 3.0):
        temp_pow = temp_pow @ m_temp
        agg_pow = agg_pow @ m_agg
        factorial *= n
        diff = diff + (temp_pow - agg_pow) / factorial
    return diff


def epsilon_mid(a: Snapshot, b: Snapshot, p0: np.ndarray) -> float:
    """Switch-time compartment discrepancy: entry sum of |D_mid| @ p0."""
    return _weighted_mass(difference_matrix_mid(a, b), p0)


def xi(a: Snapshot, b: Snapshot, pair_index: int = 0) -> PairError:
    """Combined aggregation-error score of a consecutive snapshot pair.

    Seeds the pair with the patient-zero vector of its first snapshot,
    sums the endpoint and switch-time discrepancies, and scales by the
    combined duration.  A crude absolute estimate, but it preserves the
    ranking of pairs from least to most aggregation damage, which is what
    drives the greedy compressor.
    """
    p0 = initial_condition(a)
    e_end = epsilon_end(a, b, p0)
    e_mid = epsilon_mid(a, b, p0)
    combined = (e_end + e_mid) * (a.duration + b.duration)
    return PairError(e_end, e_mid, combined, pair_index)
