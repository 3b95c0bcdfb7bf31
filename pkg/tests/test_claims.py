"""Tests for the structural claim checks."""

import pytest

from src.config import SimulationConfig
from src.core.collision_profiles import CollisionProfile, profile_of
from src.core.function_model import sample_uniform_function
from src.harness.claims import (
    check_conjugation,
    check_good_fraction,
    check_hybrid_lengths,
    check_load_fractions,
    check_maxload,
    verify_claims,
)
from src.utils.exceptions import InvalidParameterError


class TestIndividualChecks:
    def test_good_fraction_passes_on_uniform_functions(self, rng, sim_config):
        profiles = [profile_of(sample_uniform_function(1024, rng)) for _ in range(300)]
        result = check_good_fraction(profiles, sim_config)
        assert result.passed
        assert result.measured["samples"] == 300

    def test_good_fraction_fails_on_bad_profiles(self, sim_config):
        bad = CollisionProfile(n=256, counts={1: 240, 16: 16})
        result = check_good_fraction([bad] * 10, sim_config)
        assert not result.passed
        assert result.measured["fraction"] == 0.0

    def test_maxload_check(self, sim_config):
        assert check_maxload([CollisionProfile.permutation(256)] * 3, sim_config).passed
        heavy = CollisionProfile(n=256, counts={1: 224, 32: 32})
        result = check_maxload([heavy] * 3, sim_config)
        assert not result.passed
        assert result.measured["max"] == 32
        assert result.measured["exceeding"] == 3

    def test_maxload_judges_the_tail_not_the_mean(self, sim_config):
        heavy = CollisionProfile(n=256, counts={1: 224, 32: 32})
        mostly_light = [CollisionProfile.permutation(256)] * 199 + [heavy]
        result = check_maxload(mostly_light, sim_config)
        assert result.passed
        assert result.measured["exceeding"] == 1
        many_heavy = [CollisionProfile.permutation(256)] * 190 + [heavy] * 10
        result = check_maxload(many_heavy, sim_config)
        assert result.measured["mean"] < result.expected["below"]
        assert not result.passed

    def test_load_check_passed_is_plain_bool(self):
        assert type(check_load_fractions(256, seed=1, samples=2).passed) is bool

    def test_hybrid_lengths(self, rng, sim_config):
        profiles = [profile_of(sample_uniform_function(512, rng)) for _ in range(50)]
        result = check_hybrid_lengths(profiles, sim_config)
        assert result.passed
        assert result.measured["profiles"] >= 45

    def test_load_fractions_reports_both_readings(self):
        result = check_load_fractions(4096, seed=5, samples=10)
        assert result.passed
        assert result.measured["range_2"] == pytest.approx(0.1839, abs=0.01)
        assert result.expected["domain_1"] == pytest.approx(0.3679, abs=1e-4)
        assert set(result.expected["range_0"]) == {"poisson", "binomial", "tolerance"}

    def test_conjugation(self, sim_config):
        result = check_conjugation(seed=9, draws=2880, cfg=sim_config)
        assert result.passed
        assert result.measured["class_size"] == 144
        assert result.measured["hits_per_member"] == [4]


class TestVerifyClaims:
    def test_report(self):
        report = verify_claims(1024, 200, 17)
        assert [c.name for c in report.claims] == ["good", "load", "maxload", "hybrid_length", "conjugation"]
        assert report.passed
        assert (report.n, report.trials, report.seed) == (1024, 200, 17)

    def test_deterministic(self):
        assert verify_claims(64, 40, 3) == verify_claims(64, 40, 3)

    def test_small_n_rejected(self):
        with pytest.raises(InvalidParameterError):
            verify_claims(8, 10, 1)

    def test_stricter_constant_fails_maxload(self):
        strict = SimulationConfig(goodness_constant=0.5)
        report = verify_claims(1024, 30, 2, strict)
        assert not report.passed
        assert not next(c for c in report.claims if c.name == "maxload").passed

    @pytest.mark.slow
    def test_report_at_scale(self):
        report = verify_claims(1024, 10**4, 2024)
        assert report.passed
