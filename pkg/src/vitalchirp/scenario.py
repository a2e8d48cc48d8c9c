"""Multi-channel WDM deployment description and execution.

A :class:`Scenario` wires wavelengths to monitoring roles: a contact
channel carries one taped FBG sensor and one subject; a contactless
channel carries a radar scene with any number of ranged targets.  The
FBG and demultiplexer select by wavelength, so channels are ideally
isolated and execute independently; per-channel noise seeds derive only
from (global seed, wavelength), which keeps every channel's output
bit-identical no matter which other channels exist in the scenario.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .photonics import (
    FbgProfile,
    IfLfmParams,
    IntensityRecord,
    contact_intensity,
    derive_chirp,
)
from .physio import SubjectVitals, make_time_grid, synth_motion
from .pipelines import HEART_BAND, RESP_BAND
from .radar import AcquisitionParams, DechirpFrameSet, RadarTarget, synth_dechirp_frames
from .radar import unambiguous_range

__all__ = [
    "WdmChannel",
    "Scenario",
    "ValidationReport",
    "ScenarioValidationError",
    "ChannelResult",
    "ScenarioBundle",
    "validate_scenario",
    "run_scenario",
    "channel_seeds",
]

CONTACT_ROLE = "contact"
CONTACTLESS_ROLE = "contactless"

# ITU-T DWDM anchor and spacing used only for off-grid warnings.
ITU_ANCHOR_HZ = 193.1e12
ITU_SPACING_HZ = 50e9
ITU_TOLERANCE_HZ = 1e9


class ScenarioValidationError(ValueError):
    """Raised when running a scenario that fails validation."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class WdmChannel:
    """One wavelength and the monitoring roles it carries."""

    wavelength_nm: float
    roles: frozenset[str]
    if_lfm: IfLfmParams
    fbg: FbgProfile | None = None
    fiber_length_km: float = 0.0
    fiber_loss_db_per_km: float = 0.2
    carrier_power_mw: float = 1.0
    sideband_power_mw: float = 0.1
    contact_noise_rms: float = 0.005

    def __post_init__(self):
        if self.wavelength_nm <= 0:
            raise ValueError("wavelength must be > 0")
        bad = set(self.roles) - {CONTACT_ROLE, CONTACTLESS_ROLE}
        if bad:
            raise ValueError(f"unknown roles {sorted(bad)}")

    @property
    def loss_scale(self) -> float:
        return 10.0 ** (-self.fiber_loss_db_per_km * self.fiber_length_km / 10.0)


@dataclass
class Scenario:
    """Channels plus the subjects and radar scenes assigned to them."""

    channels: tuple[WdmChannel, ...]
    contact_subjects: dict[float, SubjectVitals] = field(default_factory=dict)
    radar_scenes: dict[float, tuple[RadarTarget, ...]] = field(default_factory=dict)
    acquisition: AcquisitionParams = field(default_factory=AcquisitionParams)
    duration: float = 60.0
    seed: int = 0
    contact_sample_rate: float = 50.0


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _off_itu_grid(wavelength_nm: float) -> bool:
    freq = 299792458.0 / (wavelength_nm * 1e-9)
    rem = (freq - ITU_ANCHOR_HZ) % ITU_SPACING_HZ
    return min(rem, ITU_SPACING_HZ - rem) > ITU_TOLERANCE_HZ


def _check_subject_bands(subject: SubjectVitals, where: str, violations: list[str]):
    if not RESP_BAND[0] <= subject.resp_freq <= RESP_BAND[1]:
        violations.append(
            f"{where}: respiration rate {subject.respiration_rate} rpm outside the "
            f"{RESP_BAND[0]*60:.1f}-{RESP_BAND[1]*60:.0f} rpm search band"
        )
    if not HEART_BAND[0] <= subject.heart_freq <= HEART_BAND[1]:
        violations.append(
            f"{where}: heartbeat rate {subject.heartbeat_rate} bpm outside the "
            f"{HEART_BAND[0]*60:.0f}-{HEART_BAND[1]*60:.0f} bpm search band"
        )


def validate_scenario(s: Scenario) -> ValidationReport:
    """Structural and physical checks; violations are data, not exceptions."""
    report = ValidationReport()
    seen: set[float] = set()
    by_wavelength = {}
    for ch in s.channels:
        if ch.wavelength_nm in seen:
            report.violations.append(f"duplicate wavelength {ch.wavelength_nm} nm")
        seen.add(ch.wavelength_nm)
        by_wavelength[ch.wavelength_nm] = ch
        if _off_itu_grid(ch.wavelength_nm):
            report.warnings.append(
                f"wavelength {ch.wavelength_nm} nm is more than 1 GHz off the "
                f"50 GHz ITU grid"
            )

        if CONTACT_ROLE in ch.roles:
            if ch.fbg is None:
                report.violations.append(
                    f"channel {ch.wavelength_nm} nm has the contact role but no FBG"
                )
            if ch.wavelength_nm not in s.contact_subjects:
                report.violations.append(
                    f"channel {ch.wavelength_nm} nm has the contact role but no subject"
                )
        if CONTACTLESS_ROLE in ch.roles:
            scene = s.radar_scenes.get(ch.wavelength_nm)
            if not scene:
                report.violations.append(
                    f"channel {ch.wavelength_nm} nm has the contactless role but no "
                    f"radar scene"
                )

    for wl, subject in s.contact_subjects.items():
        ch = by_wavelength.get(wl)
        if ch is None:
            report.violations.append(f"contact subject assigned to unknown channel {wl} nm")
            continue
        if CONTACT_ROLE not in ch.roles:
            report.violations.append(
                f"contact subject on channel {wl} nm which lacks the contact role"
            )
        _check_subject_bands(subject, f"channel {wl} nm contact subject {subject.id!r}",
                             report.violations)

    for wl, targets in s.radar_scenes.items():
        ch = by_wavelength.get(wl)
        if ch is None:
            report.violations.append(f"radar scene assigned to unknown channel {wl} nm")
            continue
        if CONTACTLESS_ROLE not in ch.roles:
            report.violations.append(
                f"radar scene on channel {wl} nm which lacks the contactless role"
            )
        chirp = derive_chirp(ch.if_lfm)
        r_max = unambiguous_range(chirp, s.acquisition.fast_rate)
        if s.acquisition.frame_width > ch.if_lfm.pulse_width:
            report.violations.append(
                f"channel {wl} nm: acquisition frame width {s.acquisition.frame_width} s "
                f"exceeds the chirp pulse width {ch.if_lfm.pulse_width} s"
            )
        if s.acquisition.slow_period < ch.if_lfm.pulse_period:
            report.violations.append(
                f"channel {wl} nm: acquisition slow period shorter than the chirp "
                f"pulse period"
            )
        for tgt in targets:
            if tgt.nominal_range >= r_max:
                report.violations.append(
                    f"channel {wl} nm: target {tgt.subject.id!r} at "
                    f"{tgt.nominal_range:.2f} m is beyond the unambiguous range "
                    f"R_max = {r_max:.2f} m"
                )
            _check_subject_bands(
                tgt.subject, f"channel {wl} nm target {tgt.subject.id!r}",
                report.violations,
            )
    return report


def channel_seeds(global_seed: int, wavelength_nm: float) -> tuple[int, int]:
    """Deterministic (contact, radar) noise seeds for one channel.

    Derived from (global seed, wavelength in femtometres) only, so adding
    or removing other channels never perturbs a channel's streams.
    """
    wl_key = int(round(wavelength_nm * 1e6))
    ss = np.random.SeedSequence([int(global_seed) & 0xFFFFFFFF, wl_key])
    contact_seed, radar_seed = (int(v) for v in ss.generate_state(2))
    return contact_seed, radar_seed


@dataclass
class ChannelResult:
    channel: WdmChannel
    intensity: IntensityRecord | None = None
    frames: DechirpFrameSet | None = None
    contact_subject: SubjectVitals | None = None
    targets: tuple[RadarTarget, ...] = ()


@dataclass
class ScenarioBundle:
    scenario: Scenario
    channels: dict[float, ChannelResult]


def run_scenario(s: Scenario) -> ScenarioBundle:
    """Synthesize every channel of a validated scenario.

    Link loss is applied as a pure power scale on each channel's output;
    the extraction chains are scale-invariant, so it never moves a rate.
    Bundles are deterministic under the scenario seed.
    """
    report = validate_scenario(s)
    if not report.ok:
        raise ScenarioValidationError(report.violations)

    results: dict[float, ChannelResult] = {}
    for ch in s.channels:
        contact_seed, radar_seed = channel_seeds(s.seed, ch.wavelength_nm)
        result = ChannelResult(channel=ch)

        if CONTACT_ROLE in ch.roles:
            subject = s.contact_subjects[ch.wavelength_nm]
            grid = make_time_grid(s.duration, s.contact_sample_rate)
            motion = synth_motion(subject, grid)
            record = contact_intensity(
                motion,
                ch.fbg,
                grid,
                carrier_power=ch.carrier_power_mw,
                sideband_power=ch.sideband_power_mw,
                noise_rms=ch.contact_noise_rms,
                rng_seed=contact_seed,
            )
            record.samples = record.samples * ch.loss_scale
            record.metadata["fiber_loss_scale"] = ch.loss_scale
            result.intensity = record
            result.contact_subject = subject

        if CONTACTLESS_ROLE in ch.roles:
            targets = tuple(s.radar_scenes[ch.wavelength_nm])
            chirp = derive_chirp(ch.if_lfm)
            acq = replace(s.acquisition, duration=s.duration)
            frames = synth_dechirp_frames(targets, chirp, acq, seed=radar_seed)
            frames.samples = frames.samples * ch.loss_scale
            result.frames = frames
            result.targets = targets

        results[ch.wavelength_nm] = result
    return ScenarioBundle(scenario=s, channels=results)
