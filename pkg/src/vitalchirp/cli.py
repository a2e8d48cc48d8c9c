"""Command-line interface.

    vitalchirp simulate --config scenario.json --out bundle/
    vitalchirp process bundle/ [--duration 5] [--dc-comp] [--format csv]
    vitalchirp sweep bundle/ [--durations 5,10,20,30,40,50,60]
    vitalchirp filter-design --band 0.13 0.5 --sample-rate 50 --out dir/

Exit codes: 0 ok, 2 validation failure, 3 I/O failure, 4 processing failure.
When ``--out`` is omitted, outputs land under ``$VITALCHIRP_OUT`` (default
current directory) in a directory derived from the inputs.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import dsp, formats, pipelines
from .pipelines import TargetSelectionError
from .scenario import run_scenario, validate_scenario

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_IO = 3
EXIT_PROCESSING = 4


def _out_root() -> Path:
    return Path(os.environ.get("VITALCHIRP_OUT", "."))


def _resolve_out(explicit: str | None, default_name: str) -> Path:
    return Path(explicit) if explicit else _out_root() / default_name


def cmd_simulate(args) -> int:
    config_path = Path(args.config)
    try:
        raw = json.loads(config_path.read_text(encoding="utf-8"))
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"config is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    try:
        scenario = formats.scenario_from_dict(raw)
        if args.seed is not None:
            scenario.seed = args.seed
        report = validate_scenario(scenario)
        for warning in report.warnings:
            print(f"warning: {warning}", file=sys.stderr)
        if not report.ok:
            for violation in report.violations:
                print(violation, file=sys.stderr)
            return EXIT_VALIDATION
        bundle = run_scenario(scenario)
    except (ValueError, KeyError, TypeError) as exc:
        print(f"invalid scenario: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    config = formats.scenario_to_dict(scenario)
    out = _resolve_out(args.out, f"run-{formats.scenario_hash(config)[:8]}")
    manifest = formats.build_manifest(
        "simulate", {"config": str(config_path)}, config, scenario.seed
    )
    try:
        formats.write_bundle(bundle, out, manifest)
    except OSError as exc:
        print(f"cannot write bundle: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"bundle written to {out}")
    return EXIT_OK


def _load_bundle(bundle_dir: str):
    try:
        return formats.read_bundle(bundle_dir), EXIT_OK
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return None, EXIT_IO
    except formats.CorruptFramesError as exc:
        print(str(exc), file=sys.stderr)
        return None, EXIT_IO
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"bundle is malformed: {exc}", file=sys.stderr)
        return None, EXIT_VALIDATION


def _detect_target_ranges(frames, rel_threshold=0.3):
    """Range-profile peaks to process when a bundle carries no truth."""
    profile = pipelines.range_profile(frames)
    idx = profile.peak_indices()
    if idx.size == 0:
        return []
    keep = idx[profile.magnitudes[idx] >= rel_threshold * profile.magnitudes[idx[0]]]
    return sorted(float(profile.ranges[k]) for k in keep)


def _channel_reports(loaded, duration, dc_comp):
    reports = []
    extras = []
    for ch in loaded.channels:
        if ch.intensity is not None:
            series = ch.intensity
            rate = ch.contact_sample_rate
            if duration is not None:
                series = series[: int(round(duration * rate))]
            label = ch.contact_subject.id if ch.contact_subject else "contact"
            rep = pipelines.contact_rates(
                series, rate, truth=ch.contact_subject,
                label=f"{label}@{ch.wavelength_nm:g}nm", keep_series=True,
            )
            reports.append(rep)
            extras.append((ch, rep, None))
        if ch.frames is not None:
            frames = ch.frames if duration is None else ch.frames.truncated(duration)
            ranges = None if frames.truth else _detect_target_ranges(frames)
            if ranges == []:
                continue
            channel_reports = pipelines.contactless_rates(
                frames, target_ranges=ranges, dc_compensation=dc_comp
            )
            for rep in channel_reports:
                rep.label = f"{rep.label}@{ch.wavelength_nm:g}nm"
            reports.extend(channel_reports)
            extras.append((ch, None, frames))
    return reports, extras


def cmd_process(args) -> int:
    loaded, status = _load_bundle(args.bundle)
    if loaded is None:
        return status
    out = _resolve_out(args.out, Path(args.bundle).name + "-reports")
    try:
        reports, extras = _channel_reports(loaded, args.duration, args.dc_comp)
    except TargetSelectionError as exc:
        print(f"processing failed: {exc}", file=sys.stderr)
        return EXIT_PROCESSING
    except ValueError as exc:
        print(f"processing failed: {exc}", file=sys.stderr)
        return EXIT_PROCESSING

    try:
        out.mkdir(parents=True, exist_ok=True)
        payload = []
        for rep in reports:
            d = rep.to_dict()
            d["metadata"].pop("series", None)
            payload.append(d)
        (out / "reports.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8"
        )
        if args.format == "csv":
            _write_processing_csvs(out, extras)
    except OSError as exc:
        print(f"cannot write reports: {exc}", file=sys.stderr)
        return EXIT_IO

    for rep in reports:
        resp = "n/a" if rep.respiration_rpm is None else f"{rep.respiration_rpm:.1f}"
        heart = "n/a" if rep.heartbeat_bpm is None else f"{rep.heartbeat_bpm:.1f}"
        print(f"{rep.label} [{rep.modality}]: respiration {resp} rpm, heartbeat {heart} bpm")
    print(f"reports written to {out}")
    return EXIT_OK


def _write_processing_csvs(out: Path, extras) -> None:
    for ch, contact_rep, frames in extras:
        tag = f"{ch.wavelength_nm:g}nm"
        if contact_rep is not None and "series" in contact_rep.metadata:
            series = contact_rep.metadata["series"]
            n = series["resp_filtered"].size
            rate = contact_rep.metadata["sample_rate_hz"]
            t = np.arange(n) / rate
            formats.write_series_csv(
                out / f"contact_{tag}_waveforms.csv",
                {
                    "t_s": t,
                    "resp_filtered": series["resp_filtered"],
                    "heart_filtered": series["heart_filtered"],
                },
            )
            for band in ("resp", "heart"):
                sp = series[f"{band}_spectrum"]
                formats.write_series_csv(
                    out / f"contact_{tag}_{band}_spectrum.csv",
                    {"freq_hz": sp.frequencies, "magnitude": sp.magnitudes},
                )
        if frames is not None:
            profile = pipelines.range_profile(frames)
            formats.write_series_csv(
                out / f"range_profile_{tag}.csv",
                {"range_m": profile.ranges, "magnitude": profile.magnitudes},
            )
            for tgt in frames.truth or ():
                ext = pipelines.extract_target_phase(frames, tgt.nominal_range)
                formats.write_series_csv(
                    out / f"phase_{tag}_{tgt.subject.id}.csv",
                    {
                        "t_s": np.arange(ext.phase.size) / ext.slow_rate,
                        "phase_rad": ext.phase,
                    },
                )


def cmd_sweep(args) -> int:
    loaded, status = _load_bundle(args.bundle)
    if loaded is None:
        return status
    try:
        durations = [float(v) for v in args.durations.split(",") if v.strip()]
    except ValueError:
        print(f"cannot parse durations {args.durations!r}", file=sys.stderr)
        return EXIT_VALIDATION

    out = _resolve_out(args.out, Path(args.bundle).name + "-sweep")
    rows = []
    try:
        for ch in loaded.channels:
            if ch.intensity is not None:
                label = ch.contact_subject.id if ch.contact_subject else "contact"
                rep = pipelines.resolution_sweep(
                    ch.intensity, durations, sample_rate=ch.contact_sample_rate,
                    truth=ch.contact_subject, label=f"{label}@{ch.wavelength_nm:g}nm",
                )
                rows.extend(rep.to_rows())
            if ch.frames is not None:
                for tgt in ch.frames.truth or ():
                    rep = pipelines.resolution_sweep(
                        ch.frames, durations, target_range=tgt.nominal_range,
                    )
                    rows.extend(rep.to_rows())
    except (ValueError, TargetSelectionError) as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return EXIT_PROCESSING

    try:
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.json").write_text(
            json.dumps(rows, indent=2, sort_keys=True), encoding="utf-8"
        )
        header = ["duration_s", "modality", "label", "respiration_rpm",
                  "heartbeat_bpm", "resp_3db_hz", "heart_3db_hz", "skipped"]
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join("" if row[k] is None else str(row[k]) for k in header))
        (out / "sweep.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        print(f"cannot write sweep outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"sweep written to {out}")
    return EXIT_OK


def cmd_filter_design(args) -> int:
    try:
        spec = dsp.BandpassSpec(
            low_edge=args.band[0],
            high_edge=args.band[1],
            sample_rate=args.sample_rate,
            passband_ripple=args.ripple,
            stopband_atten=args.atten,
            order=args.order,
        )
        coeffs = dsp.design_bandpass(spec)
    except (ValueError, dsp.FilterDesignError) as exc:
        print(f"filter design failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    print("second-order sections (b0, b1, b2, a1, a2):")
    for section in coeffs.sections:
        print("  " + ", ".join(f"{v:.12g}" for v in section))

    out = _resolve_out(args.out, f"filter-{args.band[0]:g}-{args.band[1]:g}")
    try:
        out.mkdir(parents=True, exist_ok=True)
        freqs, h = dsp.frequency_response(coeffs, n=4096)
        mag_db = 20 * np.log10(np.maximum(np.abs(h), 1e-300))
        formats.write_series_csv(
            out / "response.csv", {"freq_hz": freqs, "magnitude_db": mag_db}
        )
        sections = [list(s) for s in coeffs.sections]
        (out / "coefficients.json").write_text(
            json.dumps({"sos": sections, "gain": coeffs.gain,
                        "spec": {"low_edge": spec.low_edge, "high_edge": spec.high_edge,
                                 "sample_rate": spec.sample_rate,
                                 "passband_ripple": spec.passband_ripple,
                                 "stopband_atten": spec.stopband_atten,
                                 "order": spec.order}},
                       indent=2),
            encoding="utf-8",
        )
    except OSError as exc:
        print(f"cannot write filter outputs: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"response written to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vitalchirp",
        description="Simulate and process integrated contact/contactless "
        "vital-sign monitoring scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario config into a dataset bundle")
    p_sim.add_argument("--config", required=True, help="scenario JSON file")
    p_sim.add_argument("--out", help="output bundle directory")
    p_sim.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    p_sim.set_defaults(func=cmd_simulate)

    p_proc = sub.add_parser("process", help="extract vital-sign reports from a bundle")
    p_proc.add_argument("bundle", help="bundle directory from 'simulate'")
    p_proc.add_argument("--out", help="output report directory")
    p_proc.add_argument("--duration", type=float, default=None,
                        help="process only the first N seconds")
    p_proc.add_argument("--dc-comp", action="store_true",
                        help="subtract the complex mean before arctangent demodulation")
    p_proc.add_argument("--format", choices=("json", "csv"), default="json",
                        help="'csv' also writes waveform/spectrum/phase/profile CSVs")
    p_proc.set_defaults(func=cmd_process)

    p_sweep = sub.add_parser("sweep", help="rates and resolutions vs record length")
    p_sweep.add_argument("bundle", help="bundle directory from 'simulate'")
    p_sweep.add_argument("--durations", default="5,10,20,30,40,50,60",
                         help="comma-separated seconds (default 5,10,20,30,40,50,60)")
    p_sweep.add_argument("--out", help="output directory")
    p_sweep.set_defaults(func=cmd_sweep)

    p_filt = sub.add_parser("filter-design", help="design a bandpass and dump its response")
    p_filt.add_argument("--band", type=float, nargs=2, required=True,
                        metavar=("LOW", "HIGH"), help="passband edges in Hz")
    p_filt.add_argument("--sample-rate", type=float, required=True)
    p_filt.add_argument("--ripple", type=float, default=1.0)
    p_filt.add_argument("--atten", type=float, default=40.0)
    p_filt.add_argument("--order", type=int, default=4)
    p_filt.add_argument("--out", help="output directory")
    p_filt.set_defaults(func=cmd_filter_design)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
