import numpy as np
import pytest

from snapcompress import Snapshot, SnapshotSequence


def random_contact_matrix(rng, n, p=0.3, max_weight=1):
    """Random symmetric non-negative matrix with zero diagonal."""
    mask = rng.random((n, n)) < p
    weights = rng.integers(1, max_weight + 1, size=(n, n)).astype(float)
    m = np.triu(mask * weights, 1)
    return m + m.T


def random_snapshot(rng, n=6, p=0.4, duration=1.0, start_time=0.0, beta=0.2, max_weight=1):
    return Snapshot(
        random_contact_matrix(rng, n, p, max_weight),
        duration=duration,
        start_time=start_time,
        beta=beta,
    )


def random_sequence(rng, count=5, n=6, p=0.4, duration=1.0, beta=0.2, max_weight=1):
    snaps = [
        random_snapshot(rng, n, p, duration, k * duration, beta, max_weight)
        for k in range(count)
    ]
    return SnapshotSequence(tuple(snaps))


def edge_snapshot(n, edges, duration=1.0, start_time=0.0, beta=0.2, weight=1.0):
    """Snapshot with exactly the given undirected edges."""
    m = np.zeros((n, n))
    for i, j in edges:
        m[i, j] = m[j, i] = weight
    return Snapshot(m, duration=duration, start_time=start_time, beta=beta)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
