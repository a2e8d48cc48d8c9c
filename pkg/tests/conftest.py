import numpy as np
import pytest

from vitalchirp import (
    AcquisitionParams,
    FbgProfile,
    IfLfmParams,
    RadarTarget,
    derive_chirp,
)
from vitalchirp.physio import PRESET_SUBJECTS


def dft_magnitude(series, sample_rate, freq):
    """Independent single-frequency DFT oracle (explicit correlation)."""
    x = np.asarray(series, dtype=float)
    t = np.arange(x.size) / sample_rate
    return abs(np.sum(x * np.exp(-2j * np.pi * freq * t)))


def sos_response(sos, freqs, sample_rate):
    """Independent cascade evaluation H(e^{j w}) via direct polynomial math."""
    z = np.exp(-2j * np.pi * np.asarray(freqs) / sample_rate)
    h = np.ones_like(z, dtype=complex)
    for b0, b1, b2, _a0, a1, a2 in np.asarray(sos):
        h *= (b0 + b1 * z + b2 * z**2) / (1.0 + a1 * z + a2 * z**2)
    return h


@pytest.fixture(scope="session")
def if_params():
    return IfLfmParams(
        center_freq=6.6e9, bandwidth=1e9, pulse_period=100e-6, pulse_width=60e-6
    )


@pytest.fixture(scope="session")
def chirp(if_params):
    return derive_chirp(if_params)


@pytest.fixture(scope="session")
def fbg():
    return FbgProfile(notch_depth_db=17.70, fwhm_3db=11.2e9)


@pytest.fixture()
def acq():
    return AcquisitionParams()


@pytest.fixture()
def acq_quiet():
    return AcquisitionParams(noise_rms=0.0)


@pytest.fixture(scope="session")
def subjects():
    return PRESET_SUBJECTS


def two_person_scene(noise_rms=None, duration=60.0):
    """Two contactless subjects at 1.00 m and 1.65 m."""
    kwargs = {"duration": duration}
    if noise_rms is not None:
        kwargs["noise_rms"] = noise_rms
    acq = AcquisitionParams(**kwargs)
    targets = [
        RadarTarget(PRESET_SUBJECTS["subject-b"], 1.00),
        RadarTarget(PRESET_SUBJECTS["subject-c"], 1.65),
    ]
    return targets, acq
