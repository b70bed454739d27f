import numpy as np
import pytest

from snapcompress import (
    ActivityDriven,
    DataError,
    DegreeSequence,
    SynthConfig,
    UniformRandom,
    alternating_profile,
    bin_contacts,
    generate_synthetic,
    parse_contacts,
    pre_aggregate,
    ramp_profile,
    sequence_from_dict,
    sequence_to_dict,
)

from conftest import random_sequence


class TestParseContacts:
    def test_basic(self):
        stream = parse_contacts("100 A B\n120 B C")
        assert len(stream.events) == 2
        assert stream.node_labels == ("A", "B", "C")
        assert stream.dropped_self_contacts == 0

    def test_self_contact_dropped(self):
        stream = parse_contacts("100 A A\n120 A B")
        assert len(stream.events) == 1
        assert stream.dropped_self_contacts == 1

    def test_unsorted_input_sorted_stably(self):
        lines = ["30 C D", "10 A B", "20 B C", "10 E F"]
        stream = parse_contacts(lines)
        oracle = sorted(
            [(30.0, "C", "D"), (10.0, "A", "B"), (20.0, "B", "C"), (10.0, "E", "F")],
            key=lambda e: e[0],
        )
        assert [(e.time, e.node_a, e.node_b) for e in stream.events] == oracle
        # stable: the two t=10 events keep their input order
        assert stream.events[0].node_a == "A"

    def test_comments_blanks_and_extra_fields(self):
        text = "# header\n\n100 A B extra junk\n   \n200 B C 1 2 3\n"
        stream = parse_contacts(text)
        assert len(stream.events) == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(DataError, match="line 2"):
            parse_contacts("100 A B\n200 A")
        with pytest.raises(DataError, match="line 1.*time"):
            parse_contacts("abc A B")

    def test_empty_input(self):
        with pytest.raises(DataError, match="no contact events"):
            parse_contacts("# nothing\n")

    def test_idempotent_under_reserialization(self):
        stream = parse_contacts("30 C D\n10 A B\n20 B C")
        text = "\n".join(f"{e.time!r} {e.node_a} {e.node_b}" for e in stream.events)
        again = parse_contacts(text)
        assert again.events == stream.events
        assert again.node_labels == stream.node_labels


class TestBinContacts:
    def test_weighted_counts_and_binary(self):
        stream = parse_contacts("0 A B\n5 A B\n9 B C")
        weighted = bin_contacts(stream, resolution=10.0, beta=0.1)
        assert len(weighted) == 1
        assert weighted.snapshots[0].matrix[0, 1] == 2.0
        assert weighted.snapshots[0].matrix[1, 2] == 1.0
        binary = bin_contacts(stream, resolution=10.0, beta=0.1, weighted=False)
        assert binary.snapshots[0].matrix[0, 1] == 1.0

    def test_empty_middle_bin_kept(self):
        stream = parse_contacts("0 A B\n25 B C")
        seq = bin_contacts(stream, resolution=10.0, beta=0.1)
        assert len(seq) == 3
        assert seq.snapshots[1].matrix.sum() == 0.0
        assert all(s.duration == pytest.approx(25.0 / 3) for s in seq)

    def test_event_mass_conserved(self, rng):
        times = rng.integers(0, 1000, size=200)
        labels = [f"n{k}" for k in range(12)]
        lines = []
        for t in times:
            i, j = rng.choice(12, size=2, replace=False)
            lines.append(f"{t} {labels[i]} {labels[j]}")
        stream = parse_contacts(lines)
        seq = bin_contacts(stream, resolution=100.0, beta=0.1)
        total = sum(s.matrix.sum() for s in seq)
        assert total == 2.0 * len(stream.events)

    def test_explicit_window(self):
        stream = parse_contacts("5 A B\n15 B C")
        seq = bin_contacts(stream, resolution=10.0, beta=0.1, t_start=0.0, t_end=30.0)
        assert len(seq) == 3
        assert seq.start_time == 0.0
        assert seq.snapshots[0].matrix[0, 1] == 1.0
        with pytest.raises(DataError, match="outside"):
            bin_contacts(stream, resolution=10.0, beta=0.1, t_start=10.0, t_end=30.0)

    def test_all_events_at_one_instant(self):
        stream = parse_contacts("5 A B\n5 B C")
        seq = bin_contacts(stream, resolution=20.0, beta=0.1)
        assert len(seq) == 1
        assert seq.snapshots[0].duration == 20.0

    def test_rejects_bad_resolution(self):
        stream = parse_contacts("0 A B")
        with pytest.raises(DataError, match="resolution"):
            bin_contacts(stream, resolution=0.0, beta=0.1)

    def test_rebin_vs_pre_aggregate_scaled(self, rng):
        # pre-aggregating q fine bins averages counts while direct coarse
        # binning sums them: equal up to the group-size factor
        times = rng.uniform(0.0, 120.0, size=300)
        lines = [
            f"{t} a{rng.integers(0, 9)} b{rng.integers(0, 9)}" for t in times
        ]
        stream = parse_contacts(lines)
        fine = bin_contacts(stream, resolution=10.0, beta=0.1)  # 12 bins
        assert len(fine) == 12
        coarse_direct = bin_contacts(stream, resolution=30.0, beta=0.1)  # 4 bins
        coarse_avg = pre_aggregate(fine, 4)
        q = len(fine) // 4
        for direct, averaged in zip(coarse_direct, coarse_avg):
            assert direct.duration == pytest.approx(averaged.duration, rel=1e-12)
            assert direct.start_time == pytest.approx(averaged.start_time, rel=1e-9, abs=1e-9)
            assert np.allclose(q * averaged.matrix, direct.matrix, rtol=1e-12)


class TestGenerateSynthetic:
    def test_zero_probability_gives_empty_snapshots(self):
        cfg = SynthConfig(4, 5, 1.0, UniformRandom(0.0), seed=1, beta=0.1)
        seq = generate_synthetic(cfg)
        assert len(seq) == 4
        assert all(s.matrix.sum() == 0.0 for s in seq)

    def test_deterministic_under_seed(self):
        cfg = SynthConfig(6, 10, 2.0, UniformRandom(0.3), seed=99, beta=0.05)
        a = generate_synthetic(cfg)
        b = generate_synthetic(cfg)
        assert all(np.array_equal(x.matrix, y.matrix) for x, y in zip(a, b))
        other = generate_synthetic(
            SynthConfig(6, 10, 2.0, UniformRandom(0.3), seed=100, beta=0.05)
        )
        assert any(not np.array_equal(x.matrix, y.matrix) for x, y in zip(a, other))

    def test_edge_count_matches_binomial_expectation(self):
        n, p, count = 50, 0.1, 50
        cfg = SynthConfig(count, n, 1.0, UniformRandom(p), seed=7, beta=0.01)
        seq = generate_synthetic(cfg)
        possible = n * (n - 1) / 2
        mean_edges = np.mean([np.count_nonzero(s.matrix) / 2 for s in seq])
        sigma = np.sqrt(possible * p * (1 - p) / count)
        assert abs(mean_edges - p * possible) <= 3 * sigma

    def test_degree_sequence_exact(self):
        degrees = (3, 2, 2, 2, 1, 2)
        cfg = SynthConfig(3, 6, 1.0, DegreeSequence(degrees), seed=5, beta=0.1)
        seq = generate_synthetic(cfg)
        for s in seq:
            observed = sorted(int(d) for d in s.matrix.sum(axis=1))
            assert observed == sorted(degrees)

    @pytest.mark.parametrize(
        "degrees", [(1, 1, 1), (5, 1, 1, 1), (3, 3, 1, 1)]
    )
    def test_infeasible_degree_sequences(self, degrees):
        cfg = SynthConfig(2, len(degrees), 1.0, DegreeSequence(degrees), seed=1, beta=0.1)
        with pytest.raises(DataError, match="infeasible"):
            generate_synthetic(cfg)

    def test_activity_driven(self):
        cfg = SynthConfig(3, 8, 1.0, ActivityDriven(1.0, links_per_active=2), seed=3, beta=0.1)
        seq = generate_synthetic(cfg)
        for s in seq:
            assert np.array_equal(s.matrix, s.matrix.T)
            assert (s.matrix.sum(axis=1) >= 1).all()  # every node was active
        silent = generate_synthetic(
            SynthConfig(3, 8, 1.0, ActivityDriven(0.0), seed=3, beta=0.1)
        )
        assert all(s.matrix.sum() == 0.0 for s in silent)

    def test_activity_profile_modulates(self):
        profile = alternating_profile(6, 3, 3, low_scale=0.0)
        cfg = SynthConfig(
            6, 20, 1.0, UniformRandom(0.5), seed=11, beta=0.1, activity_profile=profile
        )
        seq = generate_synthetic(cfg)
        masses = [s.matrix.sum() for s in seq]
        assert all(m > 0 for m in masses[:3])
        assert all(m == 0 for m in masses[3:])

    def test_profile_length_validated(self):
        with pytest.raises(DataError, match="profile"):
            SynthConfig(4, 5, 1.0, UniformRandom(0.1), seed=1, activity_profile=(1.0, 0.5))

    def test_profiles(self):
        alt = alternating_profile(7, 2, 3, low_scale=0.1)
        assert alt == (1.0, 1.0, 0.1, 0.1, 0.1, 1.0, 1.0)
        ramp = ramp_profile(3, 1.0, 0.0)
        assert ramp == pytest.approx((1.0, 0.5, 0.0))


class TestSerialization:
    def test_round_trip(self, rng):
        seq = random_sequence(rng, count=4, n=5, duration=2.5, beta=0.07, max_weight=3)
        doc = sequence_to_dict(seq)
        back = sequence_from_dict(doc)
        assert back.beta == seq.beta
        assert back.node_labels == seq.node_labels
        assert len(back) == len(seq)
        for x, y in zip(seq, back):
            assert np.array_equal(x.matrix, y.matrix)
            assert x.duration == y.duration
            assert x.start_time == y.start_time

    def test_malformed_document(self):
        with pytest.raises(DataError, match="malformed"):
            sequence_from_dict({"snapshots": []})
        with pytest.raises(DataError, match="entries"):
            sequence_from_dict(
                {
                    "beta": 0.1,
                    "node_count": 2,
                    "node_labels": ["a", "b"],
                    "snapshots": [{"start_time": 0, "duration": 1, "matrix": [0, 0]}],
                }
            )
