import json
import struct

import numpy as np
import pytest

from vitalchirp import formats
from vitalchirp.photonics import FbgProfile, contact_intensity
from vitalchirp.physio import make_time_grid, preset_subject, synth_motion
from vitalchirp.radar import AcquisitionParams, RadarTarget, synth_dechirp_frames

from test_scenario import two_channel_scenario


@pytest.fixture()
def small_frames(chirp):
    acq = AcquisitionParams(duration=2.0, noise_rms=0.1)
    targets = [RadarTarget(preset_subject("subject-b"), 1.00)]
    return synth_dechirp_frames(targets, chirp, acq, seed=2)


class TestFramesContainer:
    def test_round_trip(self, small_frames, tmp_path):
        path = tmp_path / "frames.bin"
        formats.write_frames(small_frames, path)
        loaded = formats.read_frames(path)
        assert np.array_equal(loaded.samples, small_frames.samples)
        assert loaded.slow_rate == small_frames.slow_rate
        assert loaded.fast_rate == small_frames.fast_rate
        assert loaded.chirp == small_frames.chirp
        assert loaded.acquisition == small_frames.acquisition
        assert loaded.truth[0].subject.id == "subject-b"

    def test_layout_is_documented_format(self, small_frames, tmp_path):
        path = tmp_path / "frames.bin"
        formats.write_frames(small_frames, path)
        raw = path.read_bytes()
        (hlen,) = struct.unpack("<I", raw[:4])
        header = json.loads(raw[4 : 4 + hlen])
        assert header["format"] == "vitalchirp-frames"
        assert header["dtype"] == "<f8"
        payload = np.frombuffer(raw[4 + hlen :], dtype="<f8")
        assert payload.size == header["slow_count"] * header["fast_count"]
        assert payload[0] == small_frames.samples[0, 0]

    def test_truncated_payload_names_file_and_offset(self, small_frames, tmp_path):
        path = tmp_path / "frames.bin"
        formats.write_frames(small_frames, path)
        raw = path.read_bytes()
        path.write_bytes(raw[:-16])
        with pytest.raises(formats.CorruptFramesError) as err:
            formats.read_frames(path)
        assert "frames.bin" in str(err.value)
        assert "offset" in str(err.value)

    def test_garbage_header(self, tmp_path):
        path = tmp_path / "frames.bin"
        path.write_bytes(struct.pack("<I", 5) + b"nope!" + b"\x00" * 16)
        with pytest.raises(formats.CorruptFramesError):
            formats.read_frames(path)

    def test_frames_csv(self, small_frames, tmp_path):
        path = tmp_path / "frames.csv"
        formats.write_frames_csv(small_frames, path)
        data = np.loadtxt(path, delimiter=",")
        assert data.shape == small_frames.samples.shape
        assert np.allclose(data, small_frames.samples, rtol=1e-10)


class TestCsvExports:
    def test_motion_csv(self, tmp_path):
        grid = make_time_grid(5.0, 50.0)
        x = synth_motion(preset_subject("subject-a"), grid)
        path = tmp_path / "motion.csv"
        formats.write_motion_csv(path, grid, x)
        header = path.read_text().splitlines()[0]
        assert header == "t_s,x_mm"
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (250, 2)
        assert np.allclose(data[:, 1], x, atol=1e-9)

    def test_fbg_response_csv(self, tmp_path):
        fbg = FbgProfile(notch_depth_db=17.7, fwhm_3db=11.2e9)
        path = tmp_path / "fbg.csv"
        formats.write_fbg_response_csv(fbg, path)
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        mid = data[np.argmin(np.abs(data[:, 0]))]
        assert mid[1] == pytest.approx(-17.7, abs=1e-6)

    def test_intensity_round_trip(self, tmp_path):
        grid = make_time_grid(5.0, 50.0)
        fbg = FbgProfile(notch_depth_db=17.7, fwhm_3db=11.2e9)
        rec = contact_intensity(synth_motion(preset_subject("subject-a"), grid), fbg, grid)
        path = tmp_path / "contact.csv"
        formats.write_intensity_csv(path, rec)
        t, v = formats.read_intensity_csv(path)
        assert np.allclose(v, rec.samples, rtol=1e-10)
        assert np.allclose(t, grid.instants(), atol=1e-12)


class TestScenarioConfig:
    def test_dict_round_trip(self):
        s = two_channel_scenario(duration=10.0, seed=9)
        config = formats.scenario_to_dict(s)
        rebuilt = formats.scenario_from_dict(config)
        assert formats.scenario_to_dict(rebuilt) == config

    def test_preset_names_accepted(self):
        config = {
            "duration_s": 10.0,
            "channels": [
                {
                    "wavelength_nm": 1549.36,
                    "roles": ["contact"],
                    "if_lfm": {"center_freq": 6.6e9, "bandwidth": 1e9,
                               "pulse_period": 1e-4, "pulse_width": 6e-5},
                    "fbg": {"notch_depth_db": 17.7, "fwhm_3db": 11.2e9},
                    "contact_subject": "subject-a",
                }
            ],
        }
        s = formats.scenario_from_dict(config)
        assert s.contact_subjects[1549.36].respiration_rate == 21.0

    def test_unknown_preset_rejected(self):
        config = {
            "channels": [
                {
                    "wavelength_nm": 1549.36,
                    "roles": ["contact"],
                    "if_lfm": {"center_freq": 6.6e9, "bandwidth": 1e9,
                               "pulse_period": 1e-4, "pulse_width": 6e-5},
                    "fbg": {"notch_depth_db": 17.7, "fwhm_3db": 11.2e9},
                    "contact_subject": "subject-z",
                }
            ]
        }
        with pytest.raises(ValueError, match="preset"):
            formats.scenario_from_dict(config)

    def test_hash_stable_and_sensitive(self):
        c1 = formats.scenario_to_dict(two_channel_scenario(seed=1))
        c2 = formats.scenario_to_dict(two_channel_scenario(seed=1))
        c3 = formats.scenario_to_dict(two_channel_scenario(seed=2))
        assert formats.scenario_hash(c1) == formats.scenario_hash(c2)
        assert formats.scenario_hash(c1) != formats.scenario_hash(c3)


class TestBundleIO:
    def test_write_read_bundle(self, tmp_path):
        from vitalchirp.scenario import run_scenario

        bundle = run_scenario(two_channel_scenario(duration=10.0, seed=4))
        out = formats.write_bundle(bundle, tmp_path / "bundle")
        assert (out / "scenario.json").is_file()
        assert (out / "truth.json").is_file()
        assert (out / "manifest.json").is_file()
        assert (out / "channel_1549.36" / "contact.csv").is_file()
        assert (out / "channel_1549.36" / "frames.bin").is_file()
        assert (out / "channel_1549.92" / "contact.csv").is_file()
        assert not (out / "channel_1549.92" / "frames.bin").exists()

        loaded = formats.read_bundle(out)
        assert len(loaded.channels) == 2
        ch1 = next(c for c in loaded.channels if c.wavelength_nm == 1549.36)
        assert ch1.frames is not None
        assert ch1.contact_subject.id == "subject-a"
        assert np.array_equal(
            ch1.frames.samples, bundle.channels[1549.36].frames.samples
        )
        assert np.allclose(
            ch1.intensity, bundle.channels[1549.36].intensity.samples, rtol=1e-10
        )

    def test_missing_bundle(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            formats.read_bundle(tmp_path / "nope")
