import numpy as np
import pytest

from vitalchirp.photonics import FbgProfile, IfLfmParams
from vitalchirp.physio import SubjectVitals, preset_subject
from vitalchirp.radar import AcquisitionParams, RadarTarget
from vitalchirp.scenario import (
    Scenario,
    ScenarioValidationError,
    WdmChannel,
    channel_seeds,
    run_scenario,
    validate_scenario,
)

IF_LFM = IfLfmParams(center_freq=6.6e9, bandwidth=1e9, pulse_period=100e-6,
                     pulse_width=60e-6)


def channel(wavelength, roles, fbg=True):
    return WdmChannel(
        wavelength_nm=wavelength,
        roles=frozenset(roles),
        if_lfm=IF_LFM,
        fbg=FbgProfile(notch_depth_db=17.70, fwhm_3db=11.2e9) if fbg else None,
    )


def two_channel_scenario(duration=60.0, seed=0, noise_rms=0.5):
    """Contact+contactless on 1549.36 nm, contact only on 1549.92 nm."""
    return Scenario(
        channels=(
            channel(1549.36, ["contact", "contactless"]),
            channel(1549.92, ["contact"]),
        ),
        contact_subjects={
            1549.36: preset_subject("subject-a"),
            1549.92: preset_subject("subject-d"),
        },
        radar_scenes={
            1549.36: (
                RadarTarget(preset_subject("subject-b"), 1.00),
                RadarTarget(preset_subject("subject-c"), 1.65),
            )
        },
        acquisition=AcquisitionParams(noise_rms=noise_rms),
        duration=duration,
        seed=seed,
    )


class TestValidateScenario:
    def test_two_channel_setup_valid(self):
        report = validate_scenario(two_channel_scenario())
        assert report.ok
        assert report.violations == []
        # off-grid wavelengths only warn
        assert len(report.warnings) == 2

    def test_duplicate_wavelength(self):
        s = two_channel_scenario()
        s = Scenario(
            channels=(s.channels[0], s.channels[0]),
            contact_subjects=s.contact_subjects,
            radar_scenes=s.radar_scenes,
            acquisition=s.acquisition,
        )
        report = validate_scenario(s)
        assert any("duplicate wavelength" in v for v in report.violations)

    def test_target_beyond_unambiguous_range(self):
        s = two_channel_scenario()
        s.radar_scenes[1549.36] = (RadarTarget(preset_subject("subject-b"), 12.0),)
        report = validate_scenario(s)
        assert any("unambiguous range" in v and "11.2" in v for v in report.violations)

    def test_contact_role_needs_fbg_and_subject(self):
        s = Scenario(channels=(channel(1550.0, ["contact"], fbg=False),))
        report = validate_scenario(s)
        assert any("no FBG" in v for v in report.violations)
        assert any("no subject" in v for v in report.violations)

    def test_contactless_role_needs_scene(self):
        s = Scenario(channels=(channel(1550.0, ["contactless"]),))
        report = validate_scenario(s)
        assert any("no radar scene" in v for v in report.violations)

    def test_out_of_band_rates_flagged(self):
        slow = SubjectVitals("slow", respiration_rate=4.0, heartbeat_rate=80.0)
        s = Scenario(
            channels=(channel(1550.0, ["contact"]),),
            contact_subjects={1550.0: slow},
        )
        report = validate_scenario(s)
        assert any("search band" in v for v in report.violations)

    def test_on_grid_wavelength_no_warning(self):
        # 193.1 THz anchor itself
        wl = 299792458.0 / 193.1e12 * 1e9
        s = Scenario(
            channels=(channel(wl, ["contact"]),),
            contact_subjects={wl: preset_subject("subject-a")},
        )
        assert validate_scenario(s).warnings == []


class TestRunScenario:
    def test_three_person_two_channel_bundle(self):
        bundle = run_scenario(two_channel_scenario(duration=20.0))
        ch1 = bundle.channels[1549.36]
        ch2 = bundle.channels[1549.92]
        assert ch1.intensity is not None and ch1.frames is not None
        assert len(ch1.targets) == 2
        assert ch2.intensity is not None and ch2.frames is None
        assert ch1.frames.samples.shape == (1000, 600)
        assert ch1.intensity.samples.shape == (1000,)

    def test_two_contact_channels_no_frames(self):
        s = Scenario(
            channels=(channel(1549.36, ["contact"]), channel(1549.92, ["contact"])),
            contact_subjects={
                1549.36: preset_subject("subject-a"),
                1549.92: preset_subject("subject-b"),
            },
            duration=20.0,
        )
        bundle = run_scenario(s)
        assert all(r.frames is None for r in bundle.channels.values())
        assert sum(r.intensity is not None for r in bundle.channels.values()) == 2

    def test_empty_scenario(self):
        bundle = run_scenario(Scenario(channels=()))
        assert bundle.channels == {}

    def test_invalid_scenario_raises_with_violations(self):
        s = Scenario(channels=(channel(1550.0, ["contactless"]),))
        with pytest.raises(ScenarioValidationError) as err:
            run_scenario(s)
        assert err.value.violations

    def test_channel_isolation_bit_identical(self):
        full = run_scenario(two_channel_scenario(duration=10.0, seed=3))
        solo = Scenario(
            channels=(channel(1549.36, ["contact", "contactless"]),),
            contact_subjects={1549.36: preset_subject("subject-a")},
            radar_scenes={
                1549.36: (
                    RadarTarget(preset_subject("subject-b"), 1.00),
                    RadarTarget(preset_subject("subject-c"), 1.65),
                )
            },
            acquisition=AcquisitionParams(),
            duration=10.0,
            seed=3,
        )
        alone = run_scenario(solo)
        assert np.array_equal(
            full.channels[1549.36].intensity.samples,
            alone.channels[1549.36].intensity.samples,
        )
        assert np.array_equal(
            full.channels[1549.36].frames.samples,
            alone.channels[1549.36].frames.samples,
        )

    def test_deterministic_under_seed(self):
        a = run_scenario(two_channel_scenario(duration=10.0, seed=5))
        b = run_scenario(two_channel_scenario(duration=10.0, seed=5))
        assert np.array_equal(
            a.channels[1549.36].frames.samples, b.channels[1549.36].frames.samples
        )
        assert np.array_equal(
            a.channels[1549.92].intensity.samples, b.channels[1549.92].intensity.samples
        )
        c = run_scenario(two_channel_scenario(duration=10.0, seed=6))
        assert not np.array_equal(
            a.channels[1549.36].frames.samples, c.channels[1549.36].frames.samples
        )

    def test_fiber_loss_scales_amplitude_only(self):
        from vitalchirp.pipelines import contact_rates

        base = two_channel_scenario(duration=20.0)
        lossy = two_channel_scenario(duration=20.0)
        lossy_channels = tuple(
            WdmChannel(
                wavelength_nm=ch.wavelength_nm, roles=ch.roles, if_lfm=ch.if_lfm,
                fbg=ch.fbg, fiber_length_km=25.0, fiber_loss_db_per_km=0.2,
            )
            for ch in lossy.channels
        )
        lossy = Scenario(
            channels=lossy_channels,
            contact_subjects=lossy.contact_subjects,
            radar_scenes=lossy.radar_scenes,
            acquisition=lossy.acquisition,
            duration=20.0,
        )
        rec_base = run_scenario(base).channels[1549.92].intensity
        rec_lossy = run_scenario(lossy).channels[1549.92].intensity
        scale = 10 ** (-0.2 * 25.0 / 10)
        assert np.allclose(rec_lossy.samples, rec_base.samples * scale)
        ra = contact_rates(rec_base, truth=preset_subject("subject-d"))
        rb = contact_rates(rec_lossy, truth=preset_subject("subject-d"))
        assert ra.respiration_rpm == pytest.approx(rb.respiration_rpm, rel=1e-9)
        assert ra.heartbeat_bpm == pytest.approx(rb.heartbeat_bpm, rel=1e-9)


class TestChannelSeeds:
    def test_stable_and_distinct(self):
        a1 = channel_seeds(7, 1549.36)
        a2 = channel_seeds(7, 1549.36)
        b = channel_seeds(7, 1549.92)
        c = channel_seeds(8, 1549.36)
        assert a1 == a2
        assert a1 != b
        assert a1 != c
