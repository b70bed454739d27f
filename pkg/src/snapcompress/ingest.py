"""Contact-stream ingestion and synthetic sequence generation.

Raw input is a plain-text stream of timestamped undirected contacts, one
per line (``<time> <id_a> <id_b> [ignored...]``, '#' comments allowed).
Binning divides the observed time axis into equal windows and turns each
window into one snapshot whose entries count the contacts between each
node pair (or flag them, in binary mode); silent windows stay in the
sequence as zero-matrix snapshots so durations and switch-time errors
stay honest.

The synthetic generator produces seeded snapshot sequences for
experiments: per-snapshot uniform random graphs, fixed degree sequences,
or activity-driven contacts, optionally modulated by a per-snapshot
activity profile (ramps, day/night alternation) to create compressible
and incompressible epochs.

Snapshot sequences also serialize to and from a plain JSON dict here
(row-major matrices), which is the on-disk format the CLI reads and
writes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .snapshots import Snapshot, SnapshotSequence

__all__ = [
    "DataError",
    "ContactEvent",
    "ContactStream",
    "parse_contacts",
    "bin_contacts",
    "UniformRandom",
    "DegreeSequence",
    "ActivityDriven",
    "SynthConfig",
    "generate_synthetic",
    "alternating_profile",
    "ramp_profile",
    "sequence_to_dict",
    "sequence_from_dict",
]


class DataError(ValueError):
    """Malformed or unusable input data."""


@dataclass(frozen=True)
class ContactEvent:
    """One timestamped undirected contact between two distinct nodes."""

    time: float
    node_a: str
    node_b: str


@dataclass(frozen=True)
class ContactStream:
    """Parsed contact events plus the node universe they define.

    Attributes:
        events: events sorted by time (stable).
        node_labels: external id per dense internal index, in order of
            first appearance in the sorted stream.
        dropped_self_contacts: count of ``a a`` lines that were discarded.
    """

    events: tuple[ContactEvent, ...]
    node_labels: tuple[str, ...]
    dropped_self_contacts: int = 0

    @property
    def node_count(self) -> int:
        return len(self.node_labels)

    @property
    def span(self) -> tuple[float, float]:
        return self.events[0].time, self.events[-1].time

    def label_index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.node_labels)}


def parse_contacts(stream) -> ContactStream:
    """Parse a text contact stream into sorted events and a node universe.

    Accepts a string or any iterable of lines.  Each non-empty,
    non-comment line needs at least three whitespace-separated fields:
    time, id_a, id_b; extra fields are ignored.  Self-contacts are dropped
    and counted.  Malformed lines raise :class:`DataError` with their line
    number; so does an input with no usable events.
    """
    if isinstance(stream, str):
        stream = stream.splitlines()
    raw: list[ContactEvent] = []
    dropped = 0
    for lineno, line in enumerate(stream, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        fields = text.split()
        if len(fields) < 3:
            raise DataError(f"line {lineno}: expected at least 3 fields, got {len(fields)}")
        try:
            time = float(fields[0])
        except ValueError:
            raise DataError(f"line {lineno}: unparseable time {fields[0]!r}") from None
        if not math.isfinite(time):
            raise DataError(f"line {lineno}: non-finite time {fields[0]!r}")
        a, b = fields[1], fields[2]
        if a == b:
            dropped += 1
            continue
        raw.append(ContactEvent(time, a, b))
    if not raw:
        raise DataError("no contact events in input")
    raw.sort(key=lambda e: e.time)
    labels: list[str] = []
    seen: set[str] = set()
    for event in raw:
        for node in (event.node_a, event.node_b):
            if node not in seen:
                seen.add(node)
                labels.append(node)
    return ContactStream(tuple(raw), tuple(labels), dropped)


def bin_contacts(
    stream: ContactStream,
    resolution: float,
    beta: float,
    weighted: bool = True,
    t_start: float | None = None,
    t_end: float | None = None,
) -> SnapshotSequence:
    """Bin a contact stream into a snapshot sequence.

    The time axis from the first to the last event (or the explicit
    ``t_start``/``t_end`` observation window) is divided into
    ceil(span / resolution) equal windows, so every window duration is
    span / n <= resolution.  In weighted mode entry (i, j) counts the
    events between i and j inside the window; in binary mode it is 1 if
    any occurred.  Empty windows are kept as zero-matrix snapshots.
    """
    if resolution <= 0:
        raise DataError(f"resolution must be positive, got {resolution}")
    t0 = stream.events[0].time if t_start is None else float(t_start)
    t1 = stream.events[-1].time if t_end is None else float(t_end)
    if t1 < t0:
        raise DataError(f"binning window [{t0}, {t1}] is reversed")
    for event in stream.events:
        if not t0 <= event.time <= t1:
            raise DataError(f"event at t={event.time} outside binning window [{t0}, {t1}]")

    span = t1 - t0
    if span == 0.0:
        bins, width = 1, float(resolution)
    else:
        ratio = span / resolution
        bins = max(1, math.floor(ratio) + (1 if ratio - math.floor(ratio) > 1e-9 else 0))
        width = span / bins

    n = stream.node_count
    index = stream.label_index()
    matrices = np.zeros((bins, n, n))
    for event in stream.events:
        k = min(bins - 1, int((event.time - t0) / width)) if span else 0
        i, j = index[event.node_a], index[event.node_b]
        if weighted:
            matrices[k, i, j] += 1.0
            matrices[k, j, i] += 1.0
        else:
            matrices[k, i, j] = 1.0
            matrices[k, j, i] = 1.0

    snapshots = [
        Snapshot(matrices[k], duration=width, start_time=t0 + k * width, beta=beta)
        for k in range(bins)
    ]
    return SnapshotSequence(tuple(snapshots), stream.node_labels)


# --- synthetic sequences ---------------------------------------------------


@dataclass(frozen=True)
class UniformRandom:
    """Independent per-snapshot random graphs with edge probability p."""

    p: float


@dataclass(frozen=True)
class DegreeSequence:
    """Per-snapshot random relabelings of a fixed-degree-sequence graph."""

    degrees: tuple[int, ...]


@dataclass(frozen=True)
class ActivityDriven:
    """Each node activates with the given rate and links to random partners."""

    rate: float
    links_per_active: int = 1


@dataclass(frozen=True)
class SynthConfig:
    """Seeded synthetic sequence description.

    ``activity_profile``, when given, multiplies the edge probability (or
    activation rate) of each snapshot; a fixed degree sequence ignores it.
    """

    snapshot_count: int
    node_count: int
    duration_per_snapshot: float
    edge_model: UniformRandom | DegreeSequence | ActivityDriven
    seed: int
    beta: float = 1.0
    activity_profile: tuple[float, ...] | None = None
    start_time: float = 0.0

    def __post_init__(self):
        if self.snapshot_count < 2:
            raise DataError(f"snapshot_count must be at least 2, got {self.snapshot_count}")
        if self.node_count < 2:
            raise DataError(f"node_count must be at least 2, got {self.node_count}")
        if self.duration_per_snapshot <= 0:
            raise DataError("duration_per_snapshot must be positive")
        if self.activity_profile is not None:
            profile = tuple(float(x) for x in self.activity_profile)
            if len(profile) != self.snapshot_count:
                raise DataError(
                    f"activity profile has {len(profile)} entries "
                    f"for {self.snapshot_count} snapshots"
                )
            object.__setattr__(self, "activity_profile", profile)


def alternating_profile(
    count: int, high_len: int, low_len: int, low_scale: float = 0.05, high_scale: float = 1.0
) -> tuple[float, ...]:
    """Day/night-style activity profile: blocks of high then low activity."""
    if high_len < 1 or low_len < 1:
        raise ValueError("block lengths must be at least 1")
    period = high_len + low_len
    return tuple(
        high_scale if (k % period) < high_len else low_scale for k in range(count)
    )


def ramp_profile(count: int, start_scale: float, end_scale: float) -> tuple[float, ...]:
    """Linearly drifting activity profile."""
    return tuple(np.linspace(start_scale, end_scale, count))


def _degree_sequence_edges(degrees: tuple[int, ...]) -> list[tuple[int, int]]:
    """Edge list realizing a degree sequence, greedy highest-degree-first.

    Raises :class:`DataError` for infeasible sequences (odd sum, a degree
    out of range, or the greedy construction running out of partners).
    """
    n = len(degrees)
    if any(d < 0 or d > n - 1 for d in degrees):
        raise DataError("infeasible degree sequence: a degree is out of range")
    if sum(degrees) % 2:
        raise DataError("infeasible degree sequence: odd degree total")
    work = [[d, v] for v, d in enumerate(degrees)]
    edges: list[tuple[int, int]] = []
    while True:
        work.sort(key=lambda t: (-t[0], t[1]))
        d, v = work[0]
        if d == 0:
            return edges
        if d > len(work) - 1:
            raise DataError("infeasible degree sequence")
        work[0][0] = 0
        for k in range(1, d + 1):
            work[k][0] -= 1
            if work[k][0] < 0:
                raise DataError("infeasible degree sequence")
            edges.append((v, work[k][1]))


def generate_synthetic(cfg: SynthConfig) -> SnapshotSequence:
    """Generate a seeded synthetic snapshot sequence.

    Deterministic for a fixed config: one generator seeded with
    ``cfg.seed`` drives every snapshot in order.
    """
    rng = np.random.default_rng(cfg.seed)
    n = cfg.node_count
    profile = cfg.activity_profile or (1.0,) * cfg.snapshot_count
    model = cfg.edge_model

    base_edges: list[tuple[int, int]] | None = None
    if isinstance(model, DegreeSequence):
        degrees = tuple(int(d) for d in model.degrees)
        if len(degrees) != n:
            raise DataError(f"{len(degrees)} degrees for {n} nodes")
        base_edges = _degree_sequence_edges(degrees)

    upper = np.triu_indices(n, k=1)
    snapshots = []
    for k in range(cfg.snapshot_count):
        matrix = np.zeros((n, n))
        if isinstance(model, UniformRandom):
            p = min(1.0, max(0.0, model.p * profile[k]))
            mask = rng.random(len(upper[0])) < p
            matrix[upper[0][mask], upper[1][mask]] = 1.0
            matrix[upper[1][mask], upper[0][mask]] = 1.0
        elif isinstance(model, DegreeSequence):
            perm = rng.permutation(n)
            for a, b in base_edges:
                matrix[perm[a], perm[b]] = 1.0
                matrix[perm[b], perm[a]] = 1.0
        elif isinstance(model, ActivityDriven):
            rate = min(1.0, max(0.0, model.rate * profile[k]))
            links = min(model.links_per_active, n - 1)
            active = np.flatnonzero(rng.random(n) < rate)
            for node in active:
                partners = rng.choice(n - 1, size=links, replace=False)
                partners = np.where(partners >= node, partners + 1, partners)
                matrix[node, partners] = 1.0
                matrix[partners, node] = 1.0
        else:
            raise TypeError(f"unknown edge model {model!r}")
        snapshots.append(
            Snapshot(
                matrix,
                duration=cfg.duration_per_snapshot,
                start_time=cfg.start_time + k * cfg.duration_per_snapshot,
                beta=cfg.beta,
            )
        )
    return SnapshotSequence(tuple(snapshots))


# --- serialization ---------------------------------------------------------


def sequence_to_dict(seq: SnapshotSequence) -> dict:
    """JSON-ready dict for a snapshot sequence (row-major matrices)."""
    return {
        "beta": seq.beta,
        "node_count": seq.node_count,
        "node_labels": list(seq.node_labels),
        "snapshots": [
            {
                "start_time": s.start_time,
                "duration": s.duration,
                "matrix": [float(x) for x in s.matrix.ravel()],
            }
            for s in seq.snapshots
        ],
    }


def sequence_from_dict(data: dict) -> SnapshotSequence:
    """Rebuild a snapshot sequence from :func:`sequence_to_dict` output."""
    try:
        beta = float(data["beta"])
        n = int(data["node_count"])
        labels = tuple(str(x) for x in data.get("node_labels", []))
        entries = data["snapshots"]
    except (KeyError, TypeError) as exc:
        raise DataError(f"malformed sequence document: {exc}") from None
    snapshots = []
    for k, entry in enumerate(entries):
        flat = np.asarray(entry["matrix"], dtype=float)
        if flat.size != n * n:
            raise DataError(
                f"snapshot {k}: matrix has {flat.size} entries, expected {n * n}"
            )
        snapshots.append(
            Snapshot(
                flat.reshape(n, n),
                duration=float(entry["duration"]),
                start_time=float(entry["start_time"]),
                beta=beta,
            )
        )
    if not snapshots:
        raise DataError("sequence document contains no snapshots")
    return SnapshotSequence(tuple(snapshots), labels)
