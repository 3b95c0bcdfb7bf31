"""Tests for the distinguishers, the wrappers and the bias estimators."""

import itertools
import math

import numpy as np
import pytest

from src.core.collision_profiles import CollisionProfile, enumerate_class, profile_of
from src.core.distinguishers import (
    AmplifiedDistinguisher,
    BHTDistinguisher,
    ClassicalBirthday,
    ConjugatedDistinguisher,
    ConjugatedOracle,
    ConstantDistinguisher,
    DistinguisherReport,
    acceptance_rate,
    amplify,
    bht_distinguisher,
    bht_parameters,
    birthday_acceptance,
    birthday_approximation,
    build_distinguisher,
    build_marked_oracle,
    classical_birthday,
    conjugated_distinguisher,
    estimate_bias,
    hoeffding_error_bound,
    measure_hybrid_gaps,
    worst_case_distinguisher,
)
from src.core.function_model import (
    CountingOracle,
    FunctionTable,
    sample_uniform_function,
    sample_uniform_permutation,
    uniform_function_sampler,
    uniform_permutation_sampler,
)
from src.core.hybrids_reductions import build_hybrids
from src.domain.interfaces import IDistinguisher, IOracle
from src.utils.exceptions import InvalidParameterError, SimulationError


class FixedPair(IDistinguisher):
    """Queries points 0 and 1 and accepts on a collision."""

    @property
    def name(self) -> str:
        return "fixed-pair"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        a, b = oracle.query(0), oracle.query(1)
        return DistinguisherReport(
            output_bit=int(a == b),
            classical_queries=2,
            transcript=[(0, a), (1, b)],
            collision=(0, 1) if a == b else None,
        )


class Coin(IDistinguisher):
    """Accepts with probability p, no queries."""

    def __init__(self, p: float):
        self.p = p

    @property
    def name(self) -> str:
        return f"coin[{self.p}]"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        return DistinguisherReport(output_bit=int(rng.random() < self.p))


class MisreportingDistinguisher(IDistinguisher):
    @property
    def name(self) -> str:
        return "misreporting"

    def run(self, oracle: IOracle, rng: np.random.Generator) -> DistinguisherReport:
        oracle.query(0)
        return DistinguisherReport(output_bit=0, classical_queries=0)


class TestClassicalBirthday:
    def test_permutation_never_accepts(self, rng):
        for _ in range(200):
            oracle = CountingOracle(sample_uniform_permutation(64, rng))
            report = classical_birthday(oracle, 20, rng)
            assert report.output_bit == 0
            assert report.collision is None

    def test_counts_and_transcript(self, rng):
        f = sample_uniform_function(50, rng)
        oracle = CountingOracle(f)
        report = classical_birthday(oracle, 12, rng)
        assert report.classical_queries == oracle.query_count == 12
        assert report.oracle_queries == 0
        points = [x for x, _ in report.transcript]
        assert len(set(points)) == 12
        assert all(f(x) == y for x, y in report.transcript)

    def test_collision_witness(self, rng):
        oracle = CountingOracle(FunctionTable.from_values([1, 1, 1, 1]))
        report = classical_birthday(oracle, 2, rng)
        x, y = report.collision
        assert report.output_bit == 1
        assert x != y

    @pytest.mark.parametrize("q", [0, 5])
    def test_budget_range(self, rng, q):
        with pytest.raises(InvalidParameterError):
            classical_birthday(CountingOracle(FunctionTable.identity(4)), q, rng)

    def test_pair_collision_rate(self, rng):
        runs = 20000
        hits = sum(
            classical_birthday(CountingOracle(sample_uniform_function(4, rng)), 2, rng).output_bit
            for _ in range(runs)
        )
        assert hits / runs == pytest.approx(0.25, abs=0.015)

    def test_monotone_in_budget(self, rng):
        sampler = uniform_function_sampler(256)
        rates = [acceptance_rate(ClassicalBirthday(q), sampler, 1500, 11, "function") for q in (4, 12, 24, 40)]
        assert all(later >= earlier - 0.03 for earlier, later in zip(rates, rates[1:]))

    @pytest.mark.slow
    def test_matches_birthday_curve(self):
        n = 2**12
        sampler = uniform_function_sampler(n)
        for q in (16, 48, 96, 160):
            rate = acceptance_rate(ClassicalBirthday(q), sampler, 5000, 3, "function")
            assert rate == pytest.approx(birthday_acceptance(n, q), abs=0.02)


class TestMarkedOracle:
    def test_table_point_without_partner(self):
        f = FunctionTable.from_values([0, 1, 2, 3, 0])
        h = build_marked_oracle([(1, 1), (2, 2)], CountingOracle(f))
        assert not h(1) and not h(2)

    def test_external_collision_marked(self):
        f = FunctionTable.from_values([0, 1, 2, 3, 1])
        h = build_marked_oracle([(1, 1), (2, 2)], CountingOracle(f))
        assert h(4)
        assert h.marked_indices.tolist() == [4]

    def test_internal_collision_marks_both(self):
        f = FunctionTable.from_values([2, 2, 0, 1])
        h = build_marked_oracle([(0, 2), (1, 2)], CountingOracle(f))
        assert h.marked_indices.tolist() == [0, 1]

    def test_permutation_marks_nothing(self, rng):
        pi = sample_uniform_permutation(30, rng)
        points = rng.choice(30, size=6, replace=False)
        h = build_marked_oracle([(int(s), pi(int(s))) for s in points], CountingOracle(pi))
        assert h.marked_count == 0

    def test_building_is_free(self):
        oracle = CountingOracle(FunctionTable.from_values([0, 1, 1]))
        h = build_marked_oracle([(1, 1)], oracle)
        assert oracle.query_count == 0
        assert h.query_count == 0

    def test_inconsistent_entries(self):
        oracle = CountingOracle(FunctionTable.identity(4))
        with pytest.raises(InvalidParameterError):
            build_marked_oracle([(0, 3)], oracle)


class TestBHT:
    def test_permutation_never_accepts(self, rng):
        for _ in range(200):
            oracle = CountingOracle(sample_uniform_permutation(256, rng))
            report = bht_distinguisher(oracle, 7, 50, rng)
            assert report.output_bit == 0
            assert report.classical_queries == 7
            assert report.oracle_queries <= 50

    @pytest.mark.slow
    def test_permutation_soundness_at_scale(self, rng):
        n = 2**12
        for _ in range(1000):
            oracle = CountingOracle(sample_uniform_permutation(n, rng))
            assert bht_distinguisher(oracle, 16, 128, rng).output_bit == 0

    def test_internal_collision_short_circuits(self, rng):
        oracle = CountingOracle(FunctionTable.from_values([5] * 8))
        report = bht_distinguisher(oracle, 2, 100, rng)
        assert report.output_bit == 1
        assert report.oracle_queries == 0
        assert report.classical_queries == 2

    def test_found_collision_is_genuine(self, rng):
        for _ in range(100):
            f = sample_uniform_function(128, rng)
            oracle = CountingOracle(f)
            report = bht_distinguisher(oracle, 5, 40, rng)
            assert report.classical_queries == oracle.query_count == 5
            if report.output_bit:
                x, y = report.collision
                assert x != y and f(x) == f(y)

    def test_zero_search_budget(self, rng):
        oracle = CountingOracle(sample_uniform_permutation(16, rng))
        report = bht_distinguisher(oracle, 3, 0, rng)
        assert report.output_bit == 0
        assert report.oracle_queries == 0

    def test_table_size_range(self, rng):
        with pytest.raises(InvalidParameterError):
            bht_distinguisher(CountingOracle(FunctionTable.identity(4)), 5, 10, rng)

    def test_bias_small_n(self, rng):
        k, grover_budget = bht_parameters(512)
        estimate = estimate_bias(
            BHTDistinguisher(k, grover_budget),
            uniform_function_sampler(512),
            uniform_permutation_sampler(512),
            300,
            rng,
        )
        assert estimate.p_permutation == 0.0
        assert estimate.bias >= 0.3

    @pytest.mark.slow
    def test_bias_at_scale(self, rng):
        estimate = estimate_bias(
            BHTDistinguisher(16, 128),
            uniform_function_sampler(2**12),
            uniform_permutation_sampler(2**12),
            500,
            rng,
        )
        assert estimate.bias >= 0.4
        assert estimate.confidence_halfwidth < 0.05


class TestConjugation:
    def test_oracle_composition(self):
        f = FunctionTable.from_values([1, 2, 2, 0])
        pi = FunctionTable.from_values([3, 2, 0, 1])
        sigma = FunctionTable.from_values([2, 0, 3, 1])
        base = CountingOracle(f)
        virtual = ConjugatedOracle(base, pi, sigma)
        assert [virtual.query(x) for x in range(4)] == [pi(f(sigma(x))) for x in range(4)]
        assert virtual.query_count == base.query_count == 4
        np.testing.assert_array_equal(virtual.peek_table(), [pi(f(sigma(x))) for x in range(4)])
        assert virtual.to_base_value(virtual.query(0)) == f(sigma(0))

    def test_counts_unchanged(self, rng):
        f = sample_uniform_function(40, rng)
        oracle = CountingOracle(f)
        report = conjugated_distinguisher(ClassicalBirthday(9), oracle, rng)
        assert report.classical_queries == oracle.query_count == 9
        assert all(f(x) == y for x, y in report.transcript)
        if report.collision is not None:
            x, y = report.collision
            assert x != y and f(x) == f(y)

    def test_permutation_stays_permutation(self, rng):
        oracle = CountingOracle(sample_uniform_permutation(10, rng))
        pi = sample_uniform_permutation(10, rng)
        sigma = sample_uniform_permutation(10, rng)
        assert FunctionTable(n=10, values=ConjugatedOracle(oracle, pi, sigma).peek_table()).is_bijection()

    def test_exhaustive_average_over_class(self, mixed_four):
        members = enumerate_class(profile_of(mixed_four))
        class_rate = np.mean([int(g(0) == g(1)) for g in members])

        perms = [FunctionTable.from_values(p) for p in itertools.permutations(range(4))]
        accepted = 0
        for pi, sigma in itertools.product(perms, perms):
            virtual = ConjugatedOracle(CountingOracle(mixed_four), pi, sigma)
            accepted += FixedPair().run(virtual, np.random.default_rng(0)).output_bit
        assert accepted / 576 == pytest.approx(class_rate)
        assert class_rate == pytest.approx(1 / 6)

    def test_sampled_conjugation_rate(self, mixed_four, rng):
        runs = 6000
        hits = sum(
            conjugated_distinguisher(FixedPair(), CountingOracle(mixed_four), rng).output_bit
            for _ in range(runs)
        )
        assert hits / runs == pytest.approx(1 / 6, abs=0.03)


class TestAmplify:
    def test_constant_one(self, rng):
        oracle = CountingOracle(FunctionTable.identity(3))
        for threshold in (0.1, 0.5, 1.0):
            assert amplify(ConstantDistinguisher(1), 5, threshold, oracle, rng).output_bit == 1

    def test_query_sum(self, rng):
        oracle = CountingOracle(sample_uniform_function(64, rng))
        report = amplify(ClassicalBirthday(5), 7, 0.5, oracle, rng)
        assert report.classical_queries == oracle.query_count == 35

    def test_single_repetition_matches_inner(self):
        oracle = CountingOracle(FunctionTable.identity(2))
        first = [amplify(Coin(0.3), 1, 0.5, oracle, np.random.default_rng(s)).output_bit for s in range(200)]
        second = [Coin(0.3).run(oracle, np.random.default_rng(s)).output_bit for s in range(200)]
        assert first == second

    @pytest.mark.parametrize("reps, bound", [(100, 0.2707), (200, 0.0366)])
    def test_hoeffding_bound(self, rng, reps, bound):
        assert 2 * hoeffding_error_bound(reps, 0.1) == pytest.approx(bound, abs=1e-3)
        oracle = CountingOracle(FunctionTable.identity(2))
        runs = 400
        errors = sum(1 - amplify(Coin(0.6), reps, 0.5, oracle, rng).output_bit for _ in range(runs))
        errors += sum(amplify(Coin(0.4), reps, 0.5, oracle, rng).output_bit for _ in range(runs))
        assert errors / (2 * runs) <= bound

    def test_five_hundred_repetitions(self, rng):
        assert 2 * hoeffding_error_bound(500, 0.1) <= 0.0135
        oracle = CountingOracle(FunctionTable.identity(2))
        runs = 200
        errors = sum(1 - amplify(Coin(0.6), 500, 0.5, oracle, rng).output_bit for _ in range(runs))
        errors += sum(amplify(Coin(0.4), 500, 0.5, oracle, rng).output_bit for _ in range(runs))
        assert errors / (2 * runs) <= 0.0135

    @pytest.mark.parametrize("reps, threshold", [(0, 0.5), (3, 0.0), (3, 1.5)])
    def test_parameter_validation(self, rng, reps, threshold):
        with pytest.raises(InvalidParameterError):
            amplify(ConstantDistinguisher(1), reps, threshold, CountingOracle(FunctionTable.identity(2)), rng)

    def test_worst_case_distinguisher(self, rng):
        d = worst_case_distinguisher(ClassicalBirthday(3), 40, 0.2)
        assert isinstance(d, AmplifiedDistinguisher)
        assert isinstance(d.inner, ConjugatedDistinguisher)
        regular = FunctionTable.from_values([0, 0, 1, 1, 2, 2, 3, 3])
        accepted = sum(d.run(CountingOracle(regular), rng).output_bit for _ in range(50))
        assert accepted >= 48
        for _ in range(50):
            assert d.run(CountingOracle(sample_uniform_permutation(8, rng)), rng).output_bit == 0


class TestEstimateBias:
    def test_constant_has_no_bias(self, rng):
        estimate = estimate_bias(
            ConstantDistinguisher(1), uniform_function_sampler(8), uniform_permutation_sampler(8), 50, rng
        )
        assert estimate.bias == 0.0
        assert estimate.p_function == estimate.p_permutation == 1.0
        assert estimate.confidence_halfwidth == 0.0

    def test_pair_birthday(self, rng):
        estimate = estimate_bias(
            ClassicalBirthday(2), uniform_function_sampler(4), uniform_permutation_sampler(4), 8000, rng
        )
        assert estimate.p_permutation == 0.0
        assert estimate.bias == pytest.approx(0.25, abs=0.03)
        assert estimate.abs_bias == estimate.bias
        expected = 1.959964 * math.sqrt(estimate.p_function * (1 - estimate.p_function) / 8000)
        assert estimate.confidence_halfwidth == pytest.approx(expected, rel=1e-4)

    @pytest.mark.parametrize("seed", [0, 1, 99])
    def test_seed_determinism(self, seed):
        args = (ClassicalBirthday(6), uniform_function_sampler(32), uniform_permutation_sampler(32), 100)
        first = estimate_bias(*args, np.random.default_rng(seed))
        second = estimate_bias(*args, np.random.default_rng(seed))
        assert first == second

    def test_worker_count_does_not_change_result(self):
        args = (BHTDistinguisher(4, 20), uniform_function_sampler(64), uniform_permutation_sampler(64), 60)
        serial = estimate_bias(*args, np.random.default_rng(5), workers=1)
        threaded = estimate_bias(*args, np.random.default_rng(5), workers=4)
        assert serial == threaded

    def test_accounting_mismatch_detected(self, rng):
        with pytest.raises(SimulationError):
            acceptance_rate(MisreportingDistinguisher(), uniform_function_sampler(4), 3, 1, "function")

    def test_hybrid_gaps(self, rng):
        hs = build_hybrids(CollisionProfile(n=16, counts={1: 6, 2: 4, 3: 6}), 0.6)
        report = measure_hybrid_gaps(ClassicalBirthday(4), hs, 300, rng)
        assert len(report.rates) == 3
        assert len(report.gaps) == 2
        assert report.rates[0] == 0.0
        assert report.telescoping_holds
        assert report.largest_gap_bound_holds
        assert report.total > 0


class TestAnalytics:
    def test_exact_birthday(self):
        assert birthday_acceptance(4, 2) == pytest.approx(0.25)
        assert birthday_acceptance(100, 1) == 0.0
        assert birthday_acceptance(5, 6) == 1.0

    def test_approximation_close(self):
        n = 2**12
        for q in (16, 64, 128):
            assert birthday_approximation(n, q) == pytest.approx(birthday_acceptance(n, q), abs=0.02)


class TestFactory:
    def test_default_bht_parameters(self):
        assert bht_parameters(4096) == (16, 128)
        assert bht_parameters(4096, budget=100) == (16, 84)
        assert bht_parameters(1000, k=3, budget=10) == (3, 7)

    def test_budget_below_table(self):
        with pytest.raises(InvalidParameterError):
            bht_parameters(4096, budget=10)

    def test_build(self):
        assert isinstance(build_distinguisher("birthday", 100, 10), ClassicalBirthday)
        bht = build_distinguisher("bht", 4096, 200)
        assert (bht.k, bht.grover_budget) == (16, 184)
        with pytest.raises(InvalidParameterError):
            build_distinguisher("quantum", 16, 4)
        with pytest.raises(InvalidParameterError):
            build_distinguisher("birthday", 16, 17)
