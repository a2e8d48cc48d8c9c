"""De-chirped radar receiver simulation.

Synthesizes the receiver output for a scene of breathing subjects as a
slow-time x fast-time matrix of real samples.  The de-chirped echo of a
target at instantaneous range R is the closed-form beat tone

    E(t_f) ~ A cos(2 pi (rate * 2 R / c) t_f + 4 pi R / lambda_c)

so the RF waveform is never sampled; frames are generated directly at the
de-chirped output.  Acquisition is intermittent: one ``frame_width`` burst
of fast-time samples per ``slow_period``, mirroring an externally
triggered oscilloscope capture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .photonics import SPEED_OF_LIGHT, ChirpParams
from .physio import SubjectVitals, TimeGrid, synth_motion

__all__ = [
    "RadarTarget",
    "AcquisitionParams",
    "DechirpFrameSet",
    "unambiguous_range",
    "synth_dechirp_frames",
]

DEFAULT_RADAR_NOISE_RMS = 0.5


@dataclass(frozen=True)
class RadarTarget:
    """One person in the radar scene: motion model, nominal range, echo strength."""

    subject: SubjectVitals
    nominal_range: float
    reflectivity: float = 1.0

    def __post_init__(self):
        if self.nominal_range <= 0:
            raise ValueError(f"nominal_range must be > 0, got {self.nominal_range}")
        if self.reflectivity < 0:
            raise ValueError("reflectivity must be >= 0")


@dataclass(frozen=True)
class AcquisitionParams:
    """Intermittent sampling scheme for the de-chirped signal.

    ``fast_rate`` samples each captured burst, ``frame_width`` is the
    burst length (must fit inside the chirp pulse), and ``slow_period``
    is the burst repetition period.  ``noise_rms`` is the standard
    deviation of additive receiver noise relative to a unit-amplitude
    echo.  Echo amplitude falls as 1/R^amplitude_exponent.
    """

    fast_rate: float = 10e6
    slow_period: float = 20e-3
    frame_width: float = 60e-6
    duration: float = 60.0
    noise_rms: float = DEFAULT_RADAR_NOISE_RMS
    amplitude_exponent: float = 2.0

    def __post_init__(self):
        if self.fast_rate <= 0 or self.slow_period <= 0 or self.frame_width <= 0:
            raise ValueError("rates and periods must be > 0")
        if self.duration <= 0:
            raise ValueError("duration must be > 0")
        if self.fast_rate * self.frame_width < 2:
            raise ValueError("frame must contain at least 2 fast-time samples")
        if self.noise_rms < 0:
            raise ValueError("noise_rms must be >= 0")

    @property
    def slow_rate(self) -> float:
        return 1.0 / self.slow_period

    @property
    def slow_count(self) -> int:
        return int(math.floor(self.duration / self.slow_period + 1e-9))

    @property
    def fast_count(self) -> int:
        return int(round(self.frame_width * self.fast_rate))


@dataclass
class DechirpFrameSet:
    """Slow-time x fast-time matrix of real de-chirped samples."""

    samples: np.ndarray
    slow_rate: float
    fast_rate: float
    chirp: ChirpParams
    acquisition: AcquisitionParams
    truth: tuple[RadarTarget, ...] | None = None

    @property
    def slow_count(self) -> int:
        return self.samples.shape[0]

    @property
    def fast_count(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.slow_count / self.slow_rate

    def slow_times(self) -> np.ndarray:
        return np.arange(self.slow_count) / self.slow_rate

    def truncated(self, duration: float) -> "DechirpFrameSet":
        """First ``duration`` seconds of the record as a new frame set."""
        rows = int(math.floor(duration * self.slow_rate + 1e-9))
        if rows < 1 or rows > self.slow_count:
            raise ValueError(
                f"cannot truncate {self.duration:.1f} s record to {duration} s"
            )
        return DechirpFrameSet(
            samples=self.samples[:rows],
            slow_rate=self.slow_rate,
            fast_rate=self.fast_rate,
            chirp=self.chirp,
            acquisition=replace(self.acquisition, duration=rows / self.slow_rate),
            truth=self.truth,
        )


def unambiguous_range(chirp: ChirpParams, fast_rate: float) -> float:
    """Largest range whose beat tone stays below the fast-time Nyquist.

    The beat frequency is ``2 chirp_rate R / c``, so
    R_max = c (fast_rate / 2) / (2 chirp_rate).
    """
    if fast_rate <= 0:
        raise ValueError("fast_rate must be > 0")
    return SPEED_OF_LIGHT * (fast_rate / 2.0) / (2.0 * chirp.chirp_rate)


def synth_dechirp_frames(
    targets: list[RadarTarget] | tuple[RadarTarget, ...],
    chirp: ChirpParams,
    acq: AcquisitionParams,
    seed: int = 0,
) -> DechirpFrameSet:
    """Synthesize de-chirped frames for a scene of moving targets.

    Each target's chest motion is sampled once per slow-time instant and
    held through the 60 us frame (stop-and-hop: chest velocity moves the
    range by nanometres within a frame).  For slow index m and fast time
    t_f the contribution of target j is

        A_j cos(2 pi f_j(m) t_f + (4 pi / lambda_c)(R0_j + x_j(t_m)))

    with beat frequency f_j(m) = 2 chirp_rate (R0_j + x_j(t_m)) / c and
    A_j = reflectivity_j / R0_j^amplitude_exponent.  Receiver noise is a
    single pre-generated white Gaussian matrix keyed by ``seed``, scaled
    by ``noise_rms`` times the strongest target amplitude (or 1.0 for an
    empty scene), so frames are identical however the targets are
    iterated.  An empty scene yields pure noise frames.
    """
    if acq.frame_width > chirp.pulse_width:
        raise ValueError(
            f"frame_width {acq.frame_width} exceeds chirp pulse_width {chirp.pulse_width}"
        )
    if acq.slow_period < chirp.pulse_period:
        raise ValueError(
            f"slow_period {acq.slow_period} shorter than chirp pulse_period "
            f"{chirp.pulse_period}"
        )
    r_max = unambiguous_range(chirp, acq.fast_rate)
    for tgt in targets:
        if tgt.nominal_range >= r_max:
            raise ValueError(
                f"target {tgt.subject.id!r} at {tgt.nominal_range:.2f} m is beyond "
                f"the unambiguous range {r_max:.2f} m"
            )

    m_count, n_count = acq.slow_count, acq.fast_count
    t_fast = np.arange(n_count) / acq.fast_rate
    slow_grid = TimeGrid(sample_rate=acq.slow_rate, count=m_count)

    samples = np.zeros((m_count, n_count))
    amps = []
    for tgt in targets:
        x_m = synth_motion(tgt.subject, slow_grid) * 1e-3  # mm -> m
        rng_range = tgt.nominal_range + x_m
        beat = 2.0 * chirp.chirp_rate * rng_range / SPEED_OF_LIGHT
        phase = 4.0 * np.pi * rng_range / chirp.carrier_wavelength
        amp = tgt.reflectivity / tgt.nominal_range**acq.amplitude_exponent
        amps.append(amp)
        samples += amp * np.cos(
            2.0 * np.pi * beat[:, None] * t_fast[None, :] + phase[:, None]
        )

    if acq.noise_rms > 0:
        ref = max(amps) if amps else 1.0
        rng = np.random.default_rng(seed)
        samples = samples + acq.noise_rms * ref * rng.standard_normal((m_count, n_count))

    return DechirpFrameSet(
        samples=samples,
        slow_rate=acq.slow_rate,
        fast_rate=acq.fast_rate,
        chirp=chirp,
        acquisition=acq,
        truth=tuple(targets) if targets else None,
    )
