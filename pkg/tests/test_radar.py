import numpy as np
import pytest

from vitalchirp.photonics import SPEED_OF_LIGHT
from vitalchirp.physio import SubjectVitals
from vitalchirp.radar import (
    AcquisitionParams,
    RadarTarget,
    synth_dechirp_frames,
    unambiguous_range,
)

from conftest import two_person_scene


def static_subject(label="static"):
    return SubjectVitals(label, 15.0, 80.0, resp_amplitude=0.0, heart_amplitude=0.0)


class TestUnambiguousRange:
    def test_default_acquisition_settings(self, chirp):
        r_max = unambiguous_range(chirp, 10e6)
        oracle = SPEED_OF_LIGHT * 5e6 / (2 * chirp.chirp_rate)
        assert r_max == pytest.approx(oracle, rel=1e-12)
        assert r_max == pytest.approx(11.25, abs=0.02)

    def test_linear_in_fast_rate(self, chirp):
        assert unambiguous_range(chirp, 20e6) == pytest.approx(
            2 * unambiguous_range(chirp, 10e6), rel=1e-12
        )

    def test_covers_two_person_scene(self, chirp):
        assert unambiguous_range(chirp, 10e6) > 1.65


class TestSynthFrames:
    def test_frame_matrix_shape(self, chirp, acq_quiet):
        frames = synth_dechirp_frames(
            [RadarTarget(static_subject(), 1.0)], chirp, acq_quiet
        )
        assert frames.samples.shape == (3000, 600)
        assert frames.slow_rate == pytest.approx(50.0)
        assert np.all(np.isfinite(frames.samples))

    def test_static_target_beat_tone(self, chirp, acq_quiet):
        # beat frequency oracle: 2 * chirp_rate * R / c (about 444.8 kHz at 1 m)
        frames = synth_dechirp_frames(
            [RadarTarget(static_subject(), 1.00)], chirp, acq_quiet
        )
        row = frames.samples[0]
        nfft = 16 * row.size
        mags = np.abs(np.fft.rfft(row, nfft))
        freqs = np.fft.rfftfreq(nfft, 1.0 / acq_quiet.fast_rate)
        peak = freqs[1 + np.argmax(mags[1:])]
        oracle = 2 * chirp.chirp_rate * 1.00 / SPEED_OF_LIGHT
        assert oracle == pytest.approx(444.8e3, rel=1e-3)
        assert peak == pytest.approx(oracle, abs=acq_quiet.fast_rate / row.size)

    def test_empty_scene_quiet_is_zero(self, chirp, acq_quiet):
        frames = synth_dechirp_frames([], chirp, acq_quiet)
        assert np.all(frames.samples == 0.0)
        assert frames.truth is None

    def test_empty_scene_with_noise_is_noise(self, chirp):
        acq = AcquisitionParams(noise_rms=0.3, duration=2.0)
        frames = synth_dechirp_frames([], chirp, acq, seed=3)
        assert np.std(frames.samples) == pytest.approx(0.3, rel=0.05)

    def test_two_targets_resolvable(self, chirp):
        targets, acq = two_person_scene(noise_rms=0.0)
        frames = synth_dechirp_frames(targets, chirp, acq)
        mags = np.abs(np.fft.rfft(frames.samples, axis=1)).mean(axis=0)
        interior = (mags[1:-1] >= mags[:-2]) & (mags[1:-1] >= mags[2:])
        peaks = np.flatnonzero(interior) + 1
        top2 = peaks[np.argsort(mags[peaks])[::-1][:2]]
        ranges = np.sort(
            SPEED_OF_LIGHT
            * top2
            * (acq.fast_rate / frames.fast_count)
            / (2 * chirp.chirp_rate)
        )
        bin_width = SPEED_OF_LIGHT * (acq.fast_rate / frames.fast_count) / (
            2 * chirp.chirp_rate
        )
        assert abs(ranges[0] - 1.00) <= bin_width
        assert abs(ranges[1] - 1.65) <= bin_width

    def test_superposition_noise_off(self, chirp, acq_quiet):
        a = [RadarTarget(static_subject("a"), 1.00)]
        b = [RadarTarget(static_subject("b"), 1.65)]
        fa = synth_dechirp_frames(a, chirp, acq_quiet)
        fb = synth_dechirp_frames(b, chirp, acq_quiet)
        fab = synth_dechirp_frames(a + b, chirp, acq_quiet)
        assert np.allclose(fab.samples, fa.samples + fb.samples, atol=1e-12)

    def test_deterministic_under_seed(self, chirp):
        targets, acq = two_person_scene(duration=2.0)
        fa = synth_dechirp_frames(targets, chirp, acq, seed=9)
        fb = synth_dechirp_frames(targets, chirp, acq, seed=9)
        assert np.array_equal(fa.samples, fb.samples)
        fc = synth_dechirp_frames(targets, chirp, acq, seed=10)
        assert not np.array_equal(fa.samples, fc.samples)

    def test_farther_target_weaker(self, chirp, acq_quiet):
        # equal reflectivity: the farther echo's range peak is strictly smaller
        targets = [
            RadarTarget(static_subject("near"), 1.00, reflectivity=1.0),
            RadarTarget(static_subject("far"), 1.65, reflectivity=1.0),
        ]
        frames = synth_dechirp_frames(targets, chirp, acq_quiet)
        mags = np.abs(np.fft.rfft(frames.samples, axis=1)).mean(axis=0)
        freqs = np.fft.rfftfreq(frames.fast_count, 1 / acq_quiet.fast_rate)
        ranges = SPEED_OF_LIGHT * freqs / (2 * chirp.chirp_rate)
        near_mag = mags[np.argmin(np.abs(ranges - 1.00))]
        far_mag = mags[np.argmin(np.abs(ranges - 1.65))]
        assert far_mag < near_mag

    def test_target_beyond_range_named(self, chirp, acq):
        bad = RadarTarget(static_subject("too-far"), 12.0)
        with pytest.raises(ValueError, match="too-far"):
            synth_dechirp_frames([bad], chirp, acq)

    def test_frame_width_exceeding_pulse(self, chirp):
        acq = AcquisitionParams(frame_width=80e-6)
        with pytest.raises(ValueError, match="pulse_width"):
            synth_dechirp_frames([], chirp, acq)

    def test_slow_period_shorter_than_pulse_period(self, chirp):
        acq = AcquisitionParams(slow_period=50e-6)
        with pytest.raises(ValueError, match="pulse_period"):
            synth_dechirp_frames([], chirp, acq)

    def test_truncated(self, chirp, acq_quiet):
        frames = synth_dechirp_frames([RadarTarget(static_subject(), 1.0)], chirp, acq_quiet)
        short = frames.truncated(5.0)
        assert short.slow_count == 250
        assert np.array_equal(short.samples, frames.samples[:250])
        with pytest.raises(ValueError):
            frames.truncated(120.0)


class TestAcquisitionParams:
    def test_counts(self):
        acq = AcquisitionParams()
        assert acq.slow_count == 3000
        assert acq.fast_count == 600

    def test_minimum_samples(self):
        with pytest.raises(ValueError):
            AcquisitionParams(fast_rate=10e3, frame_width=60e-6)
