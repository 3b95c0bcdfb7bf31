"""Tests for the Grover statevector engine and the unknown-count search."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.config import SimulationConfig
from src.core.quantum_query_sim import (
    BooleanOracle,
    StateVector,
    apply_diffusion,
    apply_phase_oracle,
    bbht_search,
    grover_search,
    grover_success_probability,
    optimal_iterations,
    success_after,
    uniform_state,
)
from src.utils.exceptions import InvalidParameterError, NormViolationError, SizeMismatchError


def first_marked(n: int, m: int) -> BooleanOracle:
    mask = np.zeros(n, dtype=bool)
    mask[:m] = True
    return BooleanOracle(mask)


class TestStateVector:
    def test_uniform_four(self):
        np.testing.assert_allclose(uniform_state(4).amplitudes, [0.5] * 4)

    def test_uniform_one(self):
        np.testing.assert_allclose(uniform_state(1).amplitudes, [1.0])

    def test_norm(self):
        assert uniform_state(37).norm() == pytest.approx(1.0, abs=1e-12)

    def test_rejects_unnormalised(self):
        with pytest.raises(NormViolationError):
            StateVector(np.array([1.0, 1.0]))

    def test_amplitudes_read_only(self):
        with pytest.raises(ValueError):
            uniform_state(2).amplitudes[0] = 1.0


class TestOperators:
    def test_phase_without_marks(self):
        o = first_marked(8, 0)
        s = uniform_state(8)
        np.testing.assert_allclose(apply_phase_oracle(s, o).amplitudes, s.amplitudes)
        assert o.query_count == 1

    def test_phase_all_marked(self):
        s = uniform_state(5)
        out = apply_phase_oracle(s, first_marked(5, 5))
        np.testing.assert_allclose(out.amplitudes, -s.amplitudes)
        np.testing.assert_allclose(out.probabilities(), s.probabilities())

    def test_phase_single_mark(self):
        out = apply_phase_oracle(uniform_state(9), first_marked(9, 1))
        assert out.amplitudes[0] == pytest.approx(-1 / 3)
        np.testing.assert_allclose(out.amplitudes[1:], 1 / 3)

    def test_phase_size_mismatch(self):
        with pytest.raises(SizeMismatchError):
            apply_phase_oracle(uniform_state(4), first_marked(5, 1))

    def test_diffusion_fixes_uniform(self):
        s = uniform_state(6)
        np.testing.assert_allclose(apply_diffusion(s).amplitudes, s.amplitudes)

    @given(seed=st.integers(min_value=0, max_value=2**32 - 1), n=st.integers(min_value=1, max_value=64))
    @settings(max_examples=100, deadline=None)
    def test_diffusion_is_involution(self, seed, n):
        rng = np.random.default_rng(seed)
        raw = rng.normal(size=n) + 1j * rng.normal(size=n)
        s = StateVector(raw / np.linalg.norm(raw))
        twice = apply_diffusion(apply_diffusion(s))
        np.testing.assert_allclose(twice.amplitudes, s.amplitudes, atol=1e-12)
        assert abs(apply_diffusion(s).norm() - 1.0) < 1e-9


class TestClosedForm:
    def test_quarter_marked_one_iteration(self):
        assert grover_success_probability(4, 1, 1) == pytest.approx(1.0, abs=1e-15)

    @pytest.mark.parametrize("n, m", [(10, 3), (64, 1), (7, 7)])
    def test_zero_iterations(self, n, m):
        assert grover_success_probability(n, m, 0) == pytest.approx(m / n)

    def test_nothing_marked(self):
        assert grover_success_probability(16, 0, 5) == 0.0

    def test_bad_marked_count(self):
        with pytest.raises(InvalidParameterError):
            grover_success_probability(4, 5, 1)

    @pytest.mark.parametrize("n, m, expected", [(4, 1, 1), (1024, 1, 25), (100, 25, 1)])
    def test_optimal_iterations(self, n, m, expected):
        assert optimal_iterations(n, m) == expected

    def test_optimal_iterations_needs_mark(self):
        with pytest.raises(InvalidParameterError):
            optimal_iterations(8, 0)

    def test_statevector_matches_closed_form(self, sim_config):
        for n in range(1, 65):
            for m in range(n + 1):
                o = first_marked(n, m)
                for k in range(21):
                    assert abs(success_after(o, k, sim_config) - grover_success_probability(n, m, k)) < 1e-9

    def test_subspace_matches_closed_form(self, subspace_config):
        for n in range(2, 65):
            for m in range(n + 1):
                o = first_marked(n, m)
                for k in range(21):
                    assert abs(success_after(o, k, subspace_config) - grover_success_probability(n, m, k)) < 1e-9

    def test_large_n_subspace(self, sim_config):
        n, m = 2**20, 37
        o = first_marked(n, m)
        k = optimal_iterations(n, m)
        assert success_after(o, k, sim_config) == pytest.approx(grover_success_probability(n, m, k), abs=1e-9)
        assert o.query_count == k


class TestGroverSearch:
    def test_single_mark_certain(self, rng):
        for _ in range(50):
            o = first_marked(4, 1)
            result = grover_search(o, 4, 1, rng)
            assert result == (0, True)
            assert o.query_count == 2

    def test_nothing_marked(self, rng):
        o = first_marked(16, 0)
        for _ in range(20):
            x, found = grover_search(o, 16, 3, rng)
            assert not found
            assert 0 <= x < 16

    def test_query_cost(self, rng):
        o = first_marked(32, 3)
        grover_search(o, 32, 5, rng)
        assert o.query_count == 6

    @pytest.mark.parametrize("engine", ["statevector", "subspace"])
    def test_empirical_rate(self, rng, sim_config, subspace_config, engine):
        cfg = sim_config if engine == "statevector" else subspace_config
        n, m, k = 64, 3, 2
        o = first_marked(n, m)
        runs = 10**4
        hits = sum(grover_search(o, n, k, rng, cfg).found for _ in range(runs))
        assert hits / runs == pytest.approx(grover_success_probability(n, m, k), abs=0.02)

    def test_subspace_measures_inside_buckets(self, rng, subspace_config):
        mask = np.zeros(50, dtype=bool)
        mask[[3, 17, 41]] = True
        o = BooleanOracle(mask)
        for _ in range(200):
            x, found = grover_search(o, 50, 3, rng, subspace_config)
            assert found == bool(mask[x])

    def test_size_mismatch(self, rng):
        with pytest.raises(SizeMismatchError):
            grover_search(first_marked(8, 1), 9, 1, rng)


class TestBBHT:
    @pytest.mark.parametrize("n, budget", [(16, 1), (64, 30), (256, 97)])
    def test_nothing_marked_spends_budget(self, rng, n, budget):
        o = first_marked(n, 0)
        result = bbht_search(o, n, budget, rng)
        assert not result.found
        assert o.query_count == budget

    def test_early_stop(self, rng):
        cfg = SimulationConfig(bbht_early_stop=True)
        n = 64
        o = first_marked(n, 0)
        result = bbht_search(o, n, 10**6, rng, cfg)
        assert not result.found
        assert o.query_count < 10**6

    def test_success_is_verified(self, rng):
        mask = np.zeros(128, dtype=bool)
        mask[[5, 90]] = True
        for _ in range(100):
            o = BooleanOracle(mask)
            x, found = bbht_search(o, 128, 40, rng)
            assert o.query_count <= 40
            if found:
                assert mask[x]

    def test_dense_marks_succeed(self, rng):
        n, runs = 64, 10**4
        hits = 0
        for _ in range(runs):
            o = first_marked(n, 16)
            hits += bbht_search(o, n, 10, rng).found
        assert hits / runs >= 0.6

    def test_budget_validated(self, rng):
        with pytest.raises(InvalidParameterError):
            bbht_search(first_marked(4, 1), 4, 0, rng)


class TestBooleanOracle:
    def test_from_predicate(self):
        o = BooleanOracle.from_predicate(10, lambda x: x % 3 == 0)
        assert o.marked_indices.tolist() == [0, 3, 6, 9]
        assert o.query_count == 0
        assert o(3) and not o(4)
        assert o.query_count == 2

    def test_mask_is_copied(self):
        mask = np.zeros(4, dtype=bool)
        o = BooleanOracle(mask)
        mask[0] = True
        assert o.marked_count == 0

    def test_probability_helper_counts(self):
        o = first_marked(16, 1)
        success_after(o, 3)
        assert o.query_count == 3
        assert math.isclose(success_after(first_marked(16, 1), 0), 1 / 16)
