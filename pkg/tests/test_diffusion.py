import numpy as np
import pytest
from scipy.linalg import expm

from snapcompress import (
    IntegrationError,
    IntegratorConfig,
    Snapshot,
    SnapshotSequence,
    aggregate,
    initial_condition,
    integrate_si,
    matrix_exponential,
    pair_endpoints,
    propagate_linear,
    transmission_operator,
)

from conftest import edge_snapshot, random_sequence, random_snapshot


class TestMatrixExponential:
    def test_zero_matrix(self):
        assert np.array_equal(matrix_exponential(np.zeros((3, 3))), np.eye(3))

    def test_matches_scipy(self, rng):
        for scale in (0.05, 0.6, 3.0, 11.0):
            m = scale * (rng.random((7, 7)) - 0.3)
            ours = matrix_exponential(m)
            ref = expm(m)
            assert np.allclose(ours, ref, rtol=1e-11, atol=1e-11 * np.abs(ref).max())

    def test_rejects_non_square(self):
        with pytest.raises(ValueError, match="square"):
            matrix_exponential(np.zeros((2, 3)))


class TestIntegratorConfig:
    def test_rejects_large_step_fraction(self):
        with pytest.raises(ValueError, match="step_fraction"):
            IntegratorConfig(step_fraction=0.2)

    def test_rejects_single_sample(self):
        with pytest.raises(ValueError, match="sample_count"):
            IntegratorConfig(sample_count=1)


class TestIntegrateSi:
    def test_no_edges_keeps_state(self):
        seq = SnapshotSequence(
            tuple(Snapshot(np.zeros((3, 3)), 1.0, float(k), 0.5) for k in range(3))
        )
        p0 = np.array([0.2, 0.0, 0.7])
        traj = integrate_si(seq, p0)
        assert np.array_equal(traj.states, np.tile(p0, (len(traj), 1)))

    def test_complete_graph_preserves_symmetry(self):
        n = 5
        m = np.ones((n, n)) - np.eye(n)
        seq = SnapshotSequence((Snapshot(m, 2.0, 0.0, 0.1),))
        traj = integrate_si(seq, np.full(n, 0.1))
        spread = traj.states.max(axis=1) - traj.states.min(axis=1)
        assert np.array_equal(spread, np.zeros(len(traj)))

    def test_two_node_self_convergence(self):
        # single edge, slow spreading: compare against a 100x finer step
        edge = edge_snapshot(2, [(0, 1)], duration=2.0, beta=0.05)
        seq = SnapshotSequence((edge,))
        p0 = np.array([0.01, 0.0])
        coarse = integrate_si(seq, p0, IntegratorConfig(step_fraction=0.1))
        fine = integrate_si(seq, p0, IntegratorConfig(step_fraction=0.001))
        assert np.allclose(coarse.states[-1], fine.states[-1], atol=1e-8)

    def test_monotone_and_bounded(self, rng):
        seq = random_sequence(rng, count=4, n=8, p=0.4, duration=2.0, beta=0.3)
        p0 = initial_condition(seq.snapshots[0])
        traj = integrate_si(seq, p0)
        assert (np.diff(traj.states, axis=0) >= -1e-12).all()
        assert traj.states.min() >= 0.0
        assert traj.states.max() <= 1.0

    def test_totals_match_states(self, rng):
        seq = random_sequence(rng, count=3, n=6)
        traj = integrate_si(seq, initial_condition(seq.snapshots[0]))
        assert np.allclose(traj.totals, traj.states.sum(axis=1), atol=1e-12)

    def test_step_halving_fourth_order(self, rng):
        seq = random_sequence(rng, count=2, n=10, p=0.35, duration=5.0, beta=0.1)
        p0 = initial_condition(seq.snapshots[0])

        def endpoint(frac):
            cfg = IntegratorConfig(step_fraction=frac, sample_count=2)
            return integrate_si(seq, p0, cfg).totals[-1]

        ref = endpoint(0.1 / 32)
        err_h = abs(endpoint(0.1) - ref)
        err_h2 = abs(endpoint(0.05) - ref)
        assert 12.0 <= err_h / err_h2 <= 20.0

    def test_linear_regime_agreement(self):
        # tau <= 0.05 and rare infections: saturating and linear solutions agree
        snap = edge_snapshot(4, [(0, 1), (1, 2), (2, 3)], duration=1.0, beta=0.05)
        p0 = initial_condition(snap) * 0.01
        linear = propagate_linear(snap, p0)
        full = integrate_si(SnapshotSequence((snap,)), p0).states[-1]
        assert abs(linear.sum() - full.sum()) / full.sum() < 0.05

    def test_overlarge_dynamics_reported_not_clamped(self):
        snap = edge_snapshot(2, [(0, 1)], duration=100.0, beta=50.0)
        with pytest.raises(IntegrationError, match="step"):
            integrate_si(SnapshotSequence((snap,)), np.array([0.9, 0.0]))

    def test_rejects_bad_p0(self, rng):
        seq = random_sequence(rng, count=2)
        with pytest.raises(ValueError, match="shape"):
            integrate_si(seq, np.zeros(3))
        with pytest.raises(ValueError, match="lie in"):
            integrate_si(seq, np.full(seq.node_count, 1.5))

    def test_custom_sample_times(self, rng):
        seq = random_sequence(rng, count=3, duration=1.0)
        grid = np.array([0.0, 0.4, 1.0, 1.7, 2.3, 3.0])
        traj = integrate_si(seq, initial_condition(seq.snapshots[0]), sample_times=grid)
        assert np.array_equal(traj.times, grid)

    def test_custom_grid_matches_default_grid_states(self, rng):
        # requesting the default sample times explicitly reproduces the run
        seq = random_sequence(rng, count=3, duration=1.0, beta=0.3)
        p0 = initial_condition(seq.snapshots[0])
        base = integrate_si(seq, p0)
        again = integrate_si(seq, p0, sample_times=base.times)
        assert np.array_equal(base.states, again.states)

    def test_rejects_samples_outside_span(self, rng):
        seq = random_sequence(rng, count=2, duration=1.0)
        with pytest.raises(ValueError, match="span"):
            integrate_si(seq, initial_condition(seq.snapshots[0]), sample_times=np.array([2.5]))
        with pytest.raises(ValueError, match="increasing"):
            integrate_si(
                seq, initial_condition(seq.snapshots[0]), sample_times=np.array([0.5, 0.5])
            )


class TestPropagateLinear:
    def test_zero_matrix_identity(self):
        snap = Snapshot(np.zeros((4, 4)), duration=3.0, beta=0.2)
        p0 = np.array([0.3, 0.0, 0.1, 0.0])
        assert np.allclose(propagate_linear(snap, p0), p0, atol=0, rtol=0)

    def test_two_node_closed_form(self):
        # exp of [[0, t], [t, 0]] is [[cosh t, sinh t], [sinh t, cosh t]]
        snap = edge_snapshot(2, [(0, 1)], duration=1.0, beta=0.1)
        out = propagate_linear(snap, np.array([1.0, 0.0]))
        assert out[0] == pytest.approx(1.0050041680558035, rel=1e-12)  # cosh(0.1)
        assert out[1] == pytest.approx(0.10016675001984403, rel=1e-12)  # sinh(0.1)

    def test_commuting_split(self, rng):
        snap = random_snapshot(rng, duration=2.0, beta=0.05)
        double = Snapshot(snap.matrix, 4.0, 0.0, snap.beta)
        p0 = initial_condition(snap)
        twice = propagate_linear(snap, propagate_linear(snap, p0))
        once = propagate_linear(double, p0)
        assert np.allclose(twice, once, rtol=1e-12)

    def test_warns_outside_linear_regime(self):
        snap = edge_snapshot(2, [(0, 1)], duration=10.0, beta=0.2)
        with pytest.warns(UserWarning, match="tau"):
            propagate_linear(snap, np.array([1.0, 0.0]))


class TestPairEndpoints:
    def test_identical_pair_commutes(self, rng):
        a = random_snapshot(rng, duration=1.0, beta=0.1)
        b = Snapshot(a.matrix, 1.0, 1.0, a.beta)
        p0 = initial_condition(a)
        temporal, agg = pair_endpoints(a, b, p0)
        assert np.allclose(temporal, agg, rtol=1e-12)

    def test_disjoint_supports_commute(self):
        a = edge_snapshot(6, [(0, 1), (1, 2)], duration=1.0, beta=0.2)
        b = edge_snapshot(6, [(3, 4), (4, 5)], duration=1.0, start_time=1.0, beta=0.2)
        p0 = initial_condition(a)
        temporal, agg = pair_endpoints(a, b, p0)
        assert np.allclose(temporal, agg, rtol=1e-12)

    def test_non_commuting_pair_matches_dense_oracle(self, rng):
        a = random_snapshot(rng, n=8, duration=5.0, beta=0.024)
        b = random_snapshot(rng, n=8, duration=5.0, start_time=5.0, beta=0.024)
        p0 = initial_condition(a)
        temporal, agg = pair_endpoints(a, b, p0)
        t_a, t_b = transmission_operator(a), transmission_operator(b)
        assert np.allclose(temporal, expm(t_b) @ expm(t_a) @ p0, rtol=1e-11)
        assert np.allclose(agg, expm(t_a + t_b) @ p0, rtol=1e-11)
        assert abs(temporal.sum() - agg.sum()) > 0

    def test_aggregate_side_equals_aggregate_snapshot(self, rng):
        a = random_snapshot(rng, duration=2.0, beta=0.05)
        b = random_snapshot(rng, duration=3.0, start_time=2.0, beta=0.05)
        p0 = initial_condition(a)
        _, agg = pair_endpoints(a, b, p0)
        direct = propagate_linear(aggregate(a, b), p0)
        assert np.allclose(agg, direct, rtol=1e-12)
