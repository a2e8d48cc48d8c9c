"""File formats: frames container, CSV exports, scenario config, bundles.

Frames binary container (``frames.bin``)
----------------------------------------
Byte-exact layout, little-endian throughout:

* bytes 0-3: ``uint32`` length L of the JSON header in bytes
* bytes 4 .. 4+L-1: UTF-8 JSON header with keys ``format`` ("vitalchirp-frames"),
  ``version`` (1), ``slow_count``, ``fast_count``, ``slow_rate_hz``,
  ``fast_rate_sa_s``, ``dtype`` ("<f8"), ``order`` ("C"), ``chirp`` (dict),
  ``acquisition`` (dict) and optionally ``truth`` (list of target dicts)
* remaining bytes: ``slow_count * fast_count`` float64 samples, row-major
  (slow-time rows, fast-time columns)

Bundle directory layout
-----------------------
``scenario.json`` (resolved config), ``truth.json``, ``manifest.json``,
and one ``channel_<wavelength>/`` per channel holding ``contact.csv``
(columns t_s, intensity) and/or ``frames.bin``.
"""

from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .photonics import ChirpParams, FbgProfile, IfLfmParams, IntensityRecord
from .physio import PRESET_SUBJECTS, SubjectVitals, TimeGrid
from .radar import AcquisitionParams, DechirpFrameSet, RadarTarget
from .scenario import Scenario, WdmChannel

__all__ = [
    "FRAMES_MAGIC",
    "CorruptFramesError",
    "write_frames",
    "read_frames",
    "write_frames_csv",
    "write_series_csv",
    "write_fbg_response_csv",
    "scenario_to_dict",
    "scenario_from_dict",
    "load_scenario",
    "scenario_hash",
    "build_manifest",
    "write_bundle",
    "read_bundle",
    "LoadedChannel",
    "LoadedBundle",
]

FRAMES_MAGIC = "vitalchirp-frames"
FRAMES_VERSION = 1
TOOL_NAME = "vitalchirp"
TOOL_VERSION = "0.1.0"

FLOAT_FMT = "%.12g"


class CorruptFramesError(IOError):
    """Frames container failed structural validation."""


# ---------------------------------------------------------------- frames bin

def _chirp_to_dict(chirp: ChirpParams) -> dict:
    return asdict(chirp)


def _acq_to_dict(acq: AcquisitionParams) -> dict:
    return asdict(acq)


def _subject_to_dict(subject: SubjectVitals) -> dict:
    d = asdict(subject)
    d["resp_harmonics"] = [list(h) for h in subject.resp_harmonics]
    return d


def _subject_from_dict(d: dict) -> SubjectVitals:
    d = dict(d)
    d["resp_harmonics"] = tuple((int(o), float(r)) for o, r in d.get("resp_harmonics", []))
    return SubjectVitals(**d)


def _target_to_dict(tgt: RadarTarget) -> dict:
    return {
        "subject": _subject_to_dict(tgt.subject),
        "range_m": tgt.nominal_range,
        "reflectivity": tgt.reflectivity,
    }


def _target_from_dict(d: dict) -> RadarTarget:
    return RadarTarget(
        subject=_subject_from_dict(d["subject"]),
        nominal_range=float(d["range_m"]),
        reflectivity=float(d.get("reflectivity", 1.0)),
    )


def write_frames(frames: DechirpFrameSet, path: str | Path) -> None:
    """Serialize a frame set to the binary container format above."""
    header = {
        "format": FRAMES_MAGIC,
        "version": FRAMES_VERSION,
        "slow_count": frames.slow_count,
        "fast_count": frames.fast_count,
        "slow_rate_hz": frames.slow_rate,
        "fast_rate_sa_s": frames.fast_rate,
        "dtype": "<f8",
        "order": "C",
        "chirp": _chirp_to_dict(frames.chirp),
        "acquisition": _acq_to_dict(frames.acquisition),
    }
    if frames.truth:
        header["truth"] = [_target_to_dict(t) for t in frames.truth]
    blob = json.dumps(header, sort_keys=True).encode("utf-8")
    path = Path(path)
    with path.open("wb") as fh:
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        fh.write(np.ascontiguousarray(frames.samples, dtype="<f8").tobytes())


def read_frames(path: str | Path) -> DechirpFrameSet:
    """Read a frames container, validating structure and payload size."""
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < 4:
        raise CorruptFramesError(f"{path}: truncated before header length (offset 0)")
    (hlen,) = struct.unpack("<I", raw[:4])
    if len(raw) < 4 + hlen:
        raise CorruptFramesError(f"{path}: truncated inside JSON header (offset 4)")
    try:
        header = json.loads(raw[4 : 4 + hlen].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFramesError(f"{path}: invalid JSON header (offset 4): {exc}") from exc
    if header.get("format") != FRAMES_MAGIC or header.get("version") != FRAMES_VERSION:
        raise CorruptFramesError(f"{path}: not a {FRAMES_MAGIC} v{FRAMES_VERSION} file")

    slow, fast = int(header["slow_count"]), int(header["fast_count"])
    expected = slow * fast * 8
    payload = raw[4 + hlen :]
    if len(payload) != expected:
        raise CorruptFramesError(
            f"{path}: payload of {len(payload)} bytes at offset {4 + hlen}, "
            f"expected {expected} ({slow}x{fast} float64)"
        )
    samples = np.frombuffer(payload, dtype="<f8").reshape(slow, fast).copy()
    if not np.all(np.isfinite(samples)):
        raise CorruptFramesError(f"{path}: non-finite samples in payload")
    truth = tuple(_target_from_dict(t) for t in header.get("truth", [])) or None
    return DechirpFrameSet(
        samples=samples,
        slow_rate=float(header["slow_rate_hz"]),
        fast_rate=float(header["fast_rate_sa_s"]),
        chirp=ChirpParams(**header["chirp"]),
        acquisition=AcquisitionParams(**header["acquisition"]),
        truth=truth,
    )


def write_frames_csv(frames: DechirpFrameSet, path: str | Path) -> None:
    """Plain-matrix CSV export for small frame sets (one row per slow index)."""
    np.savetxt(path, frames.samples, delimiter=",", fmt=FLOAT_FMT)


# ------------------------------------------------------------------- CSVs

def write_series_csv(path: str | Path, columns: dict[str, np.ndarray]) -> None:
    """Write named columns to CSV with a header line."""
    names = list(columns)
    data = np.column_stack([np.asarray(columns[n], dtype=float) for n in names])
    np.savetxt(path, data, delimiter=",", fmt=FLOAT_FMT,
               header=",".join(names), comments="")


def write_motion_csv(path: str | Path, grid: TimeGrid, motion_mm: np.ndarray) -> None:
    write_series_csv(path, {"t_s": grid.instants(), "x_mm": motion_mm})


def write_intensity_csv(path: str | Path, record: IntensityRecord) -> None:
    write_series_csv(
        path, {"t_s": record.grid.instants(), "intensity": record.samples}
    )


def read_intensity_csv(path: str | Path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1]


def write_fbg_response_csv(
    fbg: FbgProfile, path: str | Path, span_hz: float | None = None, points: int = 801
) -> None:
    """Export the notch transmission as (offset_GHz, transmittance_dB)."""
    from .photonics import fbg_transmission_db

    span = span_hz if span_hz is not None else 6.0 * fbg.sigma
    offsets = np.linspace(-span, span, points)
    write_series_csv(
        path,
        {
            "offset_GHz": offsets / 1e9,
            "transmittance_dB": fbg_transmission_db(fbg, offsets),
        },
    )


# --------------------------------------------------------- scenario config

def _fbg_to_dict(fbg: FbgProfile) -> dict:
    return asdict(fbg)


def _channel_to_dict(ch: WdmChannel) -> dict:
    return {
        "wavelength_nm": ch.wavelength_nm,
        "roles": sorted(ch.roles),
        "if_lfm": asdict(ch.if_lfm),
        "fbg": _fbg_to_dict(ch.fbg) if ch.fbg is not None else None,
        "fiber_length_km": ch.fiber_length_km,
        "fiber_loss_db_per_km": ch.fiber_loss_db_per_km,
        "carrier_power_mw": ch.carrier_power_mw,
        "sideband_power_mw": ch.sideband_power_mw,
        "contact_noise_rms": ch.contact_noise_rms,
    }


def scenario_to_dict(s: Scenario) -> dict:
    """Fully resolved, JSON-ready scenario description."""
    channels = []
    for ch in s.channels:
        d = _channel_to_dict(ch)
        subject = s.contact_subjects.get(ch.wavelength_nm)
        d["contact_subject"] = _subject_to_dict(subject) if subject else None
        scene = s.radar_scenes.get(ch.wavelength_nm, ())
        d["radar_targets"] = [_target_to_dict(t) for t in scene]
        channels.append(d)
    return {
        "duration_s": s.duration,
        "seed": s.seed,
        "contact_sample_rate": s.contact_sample_rate,
        "acquisition": _acq_to_dict(s.acquisition),
        "channels": channels,
    }


def _resolve_subject(entry) -> SubjectVitals:
    if isinstance(entry, str):
        if entry not in PRESET_SUBJECTS:
            raise ValueError(
                f"unknown subject preset {entry!r}; available: {sorted(PRESET_SUBJECTS)}"
            )
        return PRESET_SUBJECTS[entry]
    return _subject_from_dict(entry)


def scenario_from_dict(config: dict) -> Scenario:
    """Build a Scenario from a config dict (see README for the schema).

    Subject entries may be preset names or full parameter dicts.
    """
    channels = []
    contact_subjects = {}
    radar_scenes = {}
    for chd in config.get("channels", []):
        fbg = FbgProfile(**chd["fbg"]) if chd.get("fbg") else None
        ch = WdmChannel(
            wavelength_nm=float(chd["wavelength_nm"]),
            roles=frozenset(chd.get("roles", [])),
            if_lfm=IfLfmParams(**chd["if_lfm"]),
            fbg=fbg,
            fiber_length_km=float(chd.get("fiber_length_km", 0.0)),
            fiber_loss_db_per_km=float(chd.get("fiber_loss_db_per_km", 0.2)),
            carrier_power_mw=float(chd.get("carrier_power_mw", 1.0)),
            sideband_power_mw=float(chd.get("sideband_power_mw", 0.1)),
            contact_noise_rms=float(chd.get("contact_noise_rms", 0.005)),
        )
        channels.append(ch)
        if chd.get("contact_subject"):
            contact_subjects[ch.wavelength_nm] = _resolve_subject(chd["contact_subject"])
        targets = chd.get("radar_targets", [])
        if targets:
            radar_scenes[ch.wavelength_nm] = tuple(
                RadarTarget(
                    subject=_resolve_subject(t["subject"]),
                    nominal_range=float(t["range_m"]),
                    reflectivity=float(t.get("reflectivity", 1.0)),
                )
                for t in targets
            )
    acq = AcquisitionParams(**config.get("acquisition", {}))
    return Scenario(
        channels=tuple(channels),
        contact_subjects=contact_subjects,
        radar_scenes=radar_scenes,
        acquisition=acq,
        duration=float(config.get("duration_s", 60.0)),
        seed=int(config.get("seed", 0)),
        contact_sample_rate=float(config.get("contact_sample_rate", 50.0)),
    )


def load_scenario(path: str | Path) -> Scenario:
    with Path(path).open("r", encoding="utf-8") as fh:
        return scenario_from_dict(json.load(fh))


def scenario_hash(config: dict) -> str:
    """SHA-256 of the canonical JSON encoding of a resolved config."""
    canonical = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def build_manifest(command: str, parameters: dict, config: dict, seed: int) -> dict:
    return {
        "tool": TOOL_NAME,
        "version": TOOL_VERSION,
        "command": command,
        "parameters": parameters,
        "scenario_sha256": scenario_hash(config),
        "seed": seed,
        "created_utc": datetime.now(timezone.utc).isoformat(),
    }


# ---------------------------------------------------------------- bundles

def _channel_dirname(wavelength_nm: float) -> str:
    return f"channel_{wavelength_nm:g}"


def write_bundle(bundle, outdir: str | Path, manifest: dict | None = None) -> Path:
    """Write a scenario bundle to a directory (layout in module docstring)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    config = scenario_to_dict(bundle.scenario)
    (outdir / "scenario.json").write_text(
        json.dumps(config, indent=2, sort_keys=True), encoding="utf-8"
    )

    truth = {"channels": {}}
    for wl, result in sorted(bundle.channels.items()):
        chdir = outdir / _channel_dirname(wl)
        chdir.mkdir(exist_ok=True)
        entry = {"contact_subject": None, "targets": []}
        if result.intensity is not None:
            write_intensity_csv(chdir / "contact.csv", result.intensity)
            entry["contact_subject"] = _subject_to_dict(result.contact_subject)
            entry["contact_sample_rate"] = result.intensity.grid.sample_rate
            entry["edge_warning"] = result.intensity.edge_warning
        if result.frames is not None:
            write_frames(result.frames, chdir / "frames.bin")
            entry["targets"] = [_target_to_dict(t) for t in result.targets]
        truth["channels"][f"{wl:g}"] = entry

    (outdir / "truth.json").write_text(
        json.dumps(truth, indent=2, sort_keys=True), encoding="utf-8"
    )
    if manifest is None:
        manifest = build_manifest("simulate", {}, config, bundle.scenario.seed)
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
    )
    return outdir


@dataclass
class LoadedChannel:
    wavelength_nm: float
    intensity_t: np.ndarray | None = None
    intensity: np.ndarray | None = None
    contact_sample_rate: float = 50.0
    contact_subject: SubjectVitals | None = None
    frames: DechirpFrameSet | None = None
    targets: tuple[RadarTarget, ...] = ()


@dataclass
class LoadedBundle:
    root: Path
    config: dict
    channels: list[LoadedChannel] = field(default_factory=list)


def read_bundle(bundle_dir: str | Path) -> LoadedBundle:
    """Load a bundle directory back into processable objects."""
    root = Path(bundle_dir)
    scenario_path = root / "scenario.json"
    if not scenario_path.is_file():
        raise FileNotFoundError(f"{root} is not a bundle: missing scenario.json")
    config = json.loads(scenario_path.read_text(encoding="utf-8"))
    truth = {}
    truth_path = root / "truth.json"
    if truth_path.is_file():
        truth = json.loads(truth_path.read_text(encoding="utf-8")).get("channels", {})

    loaded = LoadedBundle(root=root, config=config)
    for chd in config.get("channels", []):
        wl = float(chd["wavelength_nm"])
        chdir = root / _channel_dirname(wl)
        entry = truth.get(f"{wl:g}", {})
        lc = LoadedChannel(wavelength_nm=wl)
        contact_csv = chdir / "contact.csv"
        if contact_csv.is_file():
            lc.intensity_t, lc.intensity = read_intensity_csv(contact_csv)
            lc.contact_sample_rate = float(
                entry.get("contact_sample_rate", config.get("contact_sample_rate", 50.0))
            )
            if entry.get("contact_subject"):
                lc.contact_subject = _subject_from_dict(entry["contact_subject"])
        frames_bin = chdir / "frames.bin"
        if frames_bin.is_file():
            lc.frames = read_frames(frames_bin)
            lc.targets = tuple(_target_from_dict(t) for t in entry.get("targets", []))
            if lc.frames.truth is None and lc.targets:
                lc.frames.truth = lc.targets
        loaded.channels.append(lc)
    return loaded
