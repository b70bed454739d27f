"""Command-line pipelines: synth, profile, compress, validate.

One executable with four subcommands covering the full workflow:
generate or ingest a snapshot sequence, score its adjacent pairs,
compress it greedily to a target count, and validate the compressed
dynamics against the fully temporal integration.  Configuration comes
from an optional JSON file plus flag overrides; all numeric output is
written at full double precision so reruns are byte-identical.

Exit codes: 0 success, 1 usage or configuration error, 2 data error,
3 numerical range error (per-snapshot tau above 1).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from .compress import error_profile, greedy_compress, pre_aggregate
from .diffusion import IntegratorConfig
from .ingest import (
    ActivityDriven,
    DataError,
    DegreeSequence,
    SynthConfig,
    UniformRandom,
    alternating_profile,
    bin_contacts,
    generate_synthetic,
    parse_contacts,
    ramp_profile,
    sequence_from_dict,
    sequence_to_dict,
)
from .snapshots import Snapshot, SnapshotSequence, tau_bounds
from .validation import compare_regimes, compression_sweep, curves_to_csv, report_to_dict

__all__ = ["main", "RunConfig", "TauRangeError", "TAU_WARN", "TAU_LIMIT"]

TAU_WARN = 0.5
TAU_LIMIT = 1.0


class TauRangeError(ValueError):
    """The spreading scale is too large for the third-order error estimate."""


@dataclass(frozen=True)
class RunConfig:
    """Pipeline settings shared by the analysis subcommands.

    ``beta`` of None means "take it from the input document"; binning a
    contact stream always needs an explicit value.
    """

    beta: float | None = None
    resolution: float | None = None
    bins: int | None = None
    target: int | None = None
    mode: str = "weighted"
    levels: tuple[int, ...] = ()
    step_fraction: float = 0.02
    sample_count: int = 5
    seed: int = 0
    output_dir: str = "."
    t_start: float | None = None
    t_end: float | None = None

    def integrator(self) -> IntegratorConfig:
        return IntegratorConfig(self.step_fraction, self.sample_count)


def _load_run_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        raw = json.loads(Path(args.config).read_text())
        known = {f.name for f in fields(RunConfig)}
        unknown = set(raw) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "levels" in raw:
            raw["levels"] = tuple(int(x) for x in raw["levels"])
        cfg = replace(cfg, **raw)
    overrides = {}
    for key in ("beta", "resolution", "bins", "target", "mode", "seed",
                "step_fraction", "sample_count", "t_start", "t_end"):
        value = getattr(args, key, None)
        if value is not None:
            overrides[key] = value
    if getattr(args, "levels", None):
        overrides["levels"] = tuple(int(x) for x in args.levels.split(","))
    if getattr(args, "out", None):
        overrides["output_dir"] = args.out
    if cfg.mode not in ("weighted", "binary"):
        raise ValueError(f"mode must be weighted or binary, got {cfg.mode!r}")
    return replace(cfg, **overrides)


def check_tau(seq: SnapshotSequence, hard: bool = True) -> tuple[float, float]:
    """Validate the per-snapshot spreading scale before heavy computation."""
    lo, hi = tau_bounds(seq)
    if hi > TAU_LIMIT and hard:
        raise TauRangeError(
            f"tau range [{lo:.6g}, {hi:.6g}] exceeds {TAU_LIMIT}; "
            "lower beta or use finer snapshots"
        )
    if hi > TAU_WARN:
        print(
            f"warning: tau range [{lo:.6g}, {hi:.6g}] exceeds {TAU_WARN}; "
            "the third-order error estimate degrades in this regime",
            file=sys.stderr,
        )
    return lo, hi


def _load_sequence(path: str, cfg: RunConfig) -> SnapshotSequence:
    """Load a snapshot JSON document or bin a plain-text contact stream.

    An explicit ``beta`` in the run config overrides the beta stored in a
    snapshot document (the matrices and durations are kept as is).
    """
    source = Path(path)
    if source.suffix == ".json":
        try:
            data = json.loads(source.read_text())
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}: invalid JSON: {exc}") from None
        seq = sequence_from_dict(data)
        if cfg.beta is not None and cfg.beta != seq.beta:
            seq = seq.replace_snapshots(
                Snapshot(s.matrix, s.duration, s.start_time, cfg.beta) for s in seq
            )
        return seq
    with source.open() as handle:
        stream = parse_contacts(handle)
    if cfg.beta is None:
        raise ValueError("contact input needs --beta (or a beta config key)")
    if cfg.resolution is not None:
        resolution = cfg.resolution
    elif cfg.bins is not None:
        t0 = stream.events[0].time if cfg.t_start is None else cfg.t_start
        t1 = stream.events[-1].time if cfg.t_end is None else cfg.t_end
        if t1 <= t0:
            raise DataError("binning window is empty; cannot derive resolution from bins")
        resolution = (t1 - t0) / cfg.bins
    else:
        raise ValueError("contact input needs --resolution or --bins (or config keys)")
    return bin_contacts(
        stream,
        resolution,
        beta=cfg.beta,
        weighted=cfg.mode == "weighted",
        t_start=cfg.t_start,
        t_end=cfg.t_end,
    )


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")


# --- synth -------------------------------------------------------------------


def _parse_edge_model(raw: dict):
    kind = raw.get("type")
    if kind == "uniform_random":
        return UniformRandom(float(raw["p"]))
    if kind == "degree_sequence":
        return DegreeSequence(tuple(int(d) for d in raw["degrees"]))
    if kind == "activity_driven":
        return ActivityDriven(float(raw["rate"]), int(raw.get("links_per_active", 1)))
    raise DataError(f"unknown edge model type {kind!r}")


def _parse_profile(raw, count: int):
    if raw is None:
        return None
    if isinstance(raw, list):
        return tuple(float(x) for x in raw)
    kind = raw.get("type")
    if kind == "alternating":
        return alternating_profile(
            count,
            int(raw["high_len"]),
            int(raw["low_len"]),
            float(raw.get("low_scale", 0.05)),
            float(raw.get("high_scale", 1.0)),
        )
    if kind == "ramp":
        return ramp_profile(count, float(raw["start_scale"]), float(raw["end_scale"]))
    raise DataError(f"unknown profile type {kind!r}")


def _synth_config(args) -> SynthConfig:
    raw = json.loads(Path(args.config).read_text())
    count = int(raw["snapshot_count"])
    return SynthConfig(
        snapshot_count=count,
        node_count=int(raw["node_count"]),
        duration_per_snapshot=float(raw.get("duration", 1.0)),
        edge_model=_parse_edge_model(raw["model"]),
        seed=int(raw["seed"] if args.seed is None else args.seed),
        beta=float(raw.get("beta", 1.0) if args.beta is None else args.beta),
        activity_profile=_parse_profile(raw.get("profile"), count),
        start_time=float(raw.get("start_time", 0.0)),
    )


def _emit_contacts(seq: SnapshotSequence, path: Path) -> None:
    """Write a sequence as a contact stream (integer weights only).

    Every unit of contact weight becomes one event at the middle of its
    snapshot's interval; the header records the exact rebinning recipe.
    """
    lines = [
        "# synthetic contact stream",
        f"# rebin with: --bins {len(seq)} --t-start {seq.start_time!r} --t-end {seq.end_time!r}",
    ]
    labels = seq.node_labels
    for snap in seq.snapshots:
        mid = snap.start_time + snap.duration / 2.0
        matrix = snap.matrix
        n = matrix.shape[0]
        for i in range(n):
            for j in range(i + 1, n):
                weight = matrix[i, j]
                if weight == 0.0:
                    continue
                if weight != round(weight):
                    raise DataError(
                        f"cannot emit contacts for non-integer weight {weight}"
                    )
                lines.extend(f"{mid!r} {labels[i]} {labels[j]}" for _ in range(int(round(weight))))
    path.write_text("\n".join(lines) + "\n")


def cmd_synth(args) -> int:
    cfg = _synth_config(args)
    seq = generate_synthetic(cfg)
    lo, hi = check_tau(seq, hard=False)
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    if args.emit == "contacts":
        target = out / "contacts.txt"
        _emit_contacts(seq, target)
    else:
        target = out / "synthetic.json"
        _write_json(target, sequence_to_dict(seq))
    print(
        f"synth: wrote {target} ({len(seq)} snapshots, {seq.node_count} nodes, "
        f"tau range [{lo!r}, {hi!r}])"
    )
    return 0


# --- profile -----------------------------------------------------------------


def cmd_profile(args) -> int:
    cfg = _load_run_config(args)
    seq = _load_sequence(args.input, cfg)
    levels = cfg.levels or (len(seq),)
    out = _out_dir(cfg)
    for level in levels:
        level_seq = pre_aggregate(seq, int(level))
        lo, hi = check_tau(level_seq)
        profile = error_profile(level_seq)
        lines = [
            f"# level={level} tau_min={lo!r} tau_max={hi!r}",
            "pair_start_time,xi,epsilon_end,epsilon_mid",
        ]
        for err in profile.pair_errors:
            start = level_seq.snapshots[err.pair_index].start_time
            lines.append(f"{start!r},{err.xi!r},{err.epsilon_end!r},{err.epsilon_mid!r}")
        target = out / f"profile_{level}.csv"
        target.write_text("\n".join(lines) + "\n")
        print(f"profile: wrote {target} ({len(profile.pair_errors)} pairs)")
    return 0


# --- compress ----------------------------------------------------------------


def cmd_compress(args) -> int:
    cfg = _load_run_config(args)
    if cfg.target is None:
        raise ValueError("compress needs --target (or a target config key)")
    seq = _load_sequence(args.input, cfg)
    lo, hi = check_tau(seq)
    result = greedy_compress(seq, cfg.target)
    out = _out_dir(cfg)

    compressed_doc = sequence_to_dict(result.compressed)
    compressed_doc["tau_min"], compressed_doc["tau_max"] = lo, hi
    _write_json(out / "compressed.json", compressed_doc)

    merge_lines = [f"# tau_min={lo!r} tau_max={hi!r}", "step,pair_index,xi"]
    merge_lines += [f"{m.step},{m.pair_index},{m.xi_value!r}" for m in result.merge_log]
    (out / "merge_log.csv").write_text("\n".join(merge_lines) + "\n")

    boundary_lines = ["start_time"] + [f"{b!r}" for b in result.boundaries]
    (out / "boundaries.csv").write_text("\n".join(boundary_lines) + "\n")

    print(
        f"compress: {len(seq)} -> {result.final_count} snapshots, "
        f"tau range [{lo!r}, {hi!r}], wrote {out / 'compressed.json'}"
    )
    return 0


# --- validate ----------------------------------------------------------------


def cmd_validate(args) -> int:
    cfg = _load_run_config(args)
    if cfg.target is None:
        raise ValueError("validate needs --target (or a target config key)")
    seq = _load_sequence(args.input, cfg)
    lo, hi = check_tau(seq)
    out = _out_dir(cfg)
    integrator = cfg.integrator()

    report = compare_regimes(seq, cfg.target, integrator)
    _write_json(out / "report.json", report_to_dict(report, (lo, hi)))
    (out / "curves.csv").write_text(
        curves_to_csv(report, [f"tau_min={lo!r} tau_max={hi!r}"])
    )
    print(
        f"validate: target {cfg.target}, d_alg={report.d_alg!r}, "
        f"d_even={report.d_even!r}, wrote {out / 'report.json'}"
    )

    if args.sweep:
        targets = [int(x) for x in args.sweep.split(",")]
        entries = compression_sweep(seq, targets, integrator)
        sweep_doc = [
            {
                **report_to_dict(entry.report),
                "extra_compression_count": entry.extra_compression_count,
                "extra_compression_factor": entry.extra_compression_factor,
            }
            for entry in entries
        ]
        for doc in sweep_doc:
            del doc["merge_log"]
        _write_json(out / "sweep.json", sweep_doc)
        print(f"validate: wrote {out / 'sweep.json'} ({len(entries)} targets)")
    return 0


# --- parser ------------------------------------------------------------------


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="snapshot .json or plain-text contact stream")
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--beta", type=float, help="transmission rate")
    parser.add_argument("--resolution", type=float, help="bin width in seconds")
    parser.add_argument("--bins", type=int, help="bin count (alternative to --resolution)")
    parser.add_argument("--mode", choices=("weighted", "binary"), help="bin weighting")
    parser.add_argument("--seed", type=int, help="seed recorded in the run config")
    parser.add_argument("--t-start", dest="t_start", type=float, help="binning window start")
    parser.add_argument("--t-end", dest="t_end", type=float, help="binning window end")
    parser.add_argument("--step-fraction", dest="step_fraction", type=float,
                        help="RK4 step as a fraction of the shortest duration")
    parser.add_argument("--sample-count", dest="sample_count", type=int,
                        help="output samples per snapshot")
    parser.add_argument("--out", help="output directory")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="snapcompress",
        description="Chronology-aware compression of temporal network snapshots",
    )
    sub = parser.add_subparsers(dest="command")

    p_synth = sub.add_parser("synth", help="generate a seeded synthetic sequence")
    p_synth.add_argument("--config", required=True, help="synthetic sequence JSON config")
    p_synth.add_argument("--seed", type=int, help="override the config seed")
    p_synth.add_argument("--beta", type=float, help="override the config beta")
    p_synth.add_argument("--emit", choices=("snapshots", "contacts"), default="snapshots")
    p_synth.add_argument("--out", help="output directory")
    p_synth.set_defaults(func=cmd_synth)

    p_profile = sub.add_parser("profile", help="score adjacent pairs at pre-aggregation levels")
    _add_common(p_profile)
    p_profile.add_argument("--levels", help="comma-separated pre-aggregation snapshot counts")
    p_profile.set_defaults(func=cmd_profile)

    p_compress = sub.add_parser("compress", help="greedy-compress to a target count")
    _add_common(p_compress)
    p_compress.add_argument("--target", type=int, help="snapshot count to compress to")
    p_compress.set_defaults(func=cmd_compress)

    p_validate = sub.add_parser("validate", help="compare greedy and even compression")
    _add_common(p_validate)
    p_validate.add_argument("--target", type=int, help="snapshot count to compress to")
    p_validate.add_argument("--sweep", help="comma-separated extra targets for sweep.json")
    p_validate.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if not getattr(args, "func", None):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except TauRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
