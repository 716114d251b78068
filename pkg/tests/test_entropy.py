import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (
    binary_entropy,
    bloch_oracle_hmax,
    bloch_oracle_hmin,
    classical_smoothing_oracle,
    random_channel_on_second,
    random_density,
    random_pure,
)
from negentropy import entropy as ent
from negentropy.exceptions import CapacityError, InvalidStateError
from negentropy.quantum import DensityOperator, PureState, RegisterLayout


def _dm(mat, dims=(2, 2)):
    return DensityOperator(mat, dims, check=False)


GROUND_TRUTH = {
    "pure_uncorrelated": (np.diag([1.0, 0, 0, 0]).astype(complex), 0.0),
    "mixed_uncorrelated": (np.diag([0.5, 0, 0.5, 0]).astype(complex), 1.0),
    "maximally_entangled": (np.outer([1, 0, 0, 1], [1, 0, 0, 1]).astype(complex) / 2, -1.0),
}


class TestGroundTruth:
    @pytest.mark.parametrize("name", list(GROUND_TRUTH))
    @pytest.mark.parametrize("func", [ent.hmin, ent.hmax])
    def test_values(self, name, func):
        mat, expected = GROUND_TRUTH[name]
        assert func(_dm(mat)).value == pytest.approx(expected, abs=1e-6)

    @pytest.mark.parametrize("name", list(GROUND_TRUTH))
    def test_von_neumann(self, name):
        mat, expected = GROUND_TRUTH[name]
        assert ent.conditional_von_neumann(_dm(mat)).value == pytest.approx(expected, abs=1e-12)

    def test_trivial_memory_closed_forms(self):
        rho = DensityOperator(np.diag([0.5, 0.25, 0.25]).astype(complex))
        assert ent.hmin(rho, None, [0], []).value == pytest.approx(1.0)
        expected = 2 * math.log2(math.sqrt(0.5) + 2 * math.sqrt(0.25))
        assert ent.hmax(rho, None, [0], []).value == pytest.approx(expected)


class TestAgainstBlochOracle:
    @pytest.mark.parametrize("seed", range(4))
    def test_random_two_qubit(self, seed):
        rng = np.random.default_rng(100 + seed)
        mat = random_density(4, rng, rank=1 + seed % 4)
        rmin = ent.hmin(_dm(mat))
        rmax = ent.hmax(_dm(mat))
        assert rmin.value == pytest.approx(bloch_oracle_hmin(mat, 2), abs=1e-5)
        assert rmax.value == pytest.approx(bloch_oracle_hmax(mat, 2), abs=1e-5)

    def test_certificates_are_feasible(self):
        rng = np.random.default_rng(8)
        mat = random_density(4, rng)
        rmin = ent.hmin(_dm(mat))
        rmax = ent.hmax(_dm(mat))
        # the unnormalized min-entropy operator has trace 2^-Hmin
        sigma = rmin.certificate.matrix * 2.0 ** (-rmin.value)
        assert ent.min_entropy_feasibility(mat, sigma, 2) >= -1e-7
        assert ent.max_entropy_objective(mat, rmax.certificate.matrix, 2) == pytest.approx(rmax.value, abs=1e-6)


class TestDuality:
    @pytest.mark.parametrize("seed", range(10))
    def test_random_tripartite(self, seed):
        rng = np.random.default_rng(seed)
        psi = PureState(random_pure(8, rng), (2, 2, 2))
        lay = RegisterLayout.of(S=1, O=1, Gamma=1)
        rho = psi.density()
        a = ent.hmin(rho, lay, "S", "Gamma")
        b = ent.hmax(rho, lay, "S", "O")
        assert abs(a.value + b.value) <= 1e-5 + a.solver_gap + b.solver_gap

    def test_larger_memory(self):
        rng = np.random.default_rng(42)
        psi = PureState(random_pure(32, rng))
        lay = RegisterLayout.of(S=1, O=2, Gamma=2)
        rho = psi.density()
        a = ent.hmin(rho, lay, "S", "Gamma")
        b = ent.hmax(rho, lay, "S", "O")
        assert a.value == pytest.approx(-b.value, abs=1e-5)


class TestOrdering:
    @settings(max_examples=15, deadline=None)
    @given(seed=st.integers(0, 100_000), rank=st.integers(1, 4))
    def test_sandwich(self, seed, rank):
        rng = np.random.default_rng(seed)
        rho = _dm(random_density(4, rng, rank))
        lo = ent.hmin(rho).value
        mid = ent.conditional_von_neumann(rho).value
        hi = ent.hmax(rho).value
        assert lo <= mid + 1e-5
        assert mid <= hi + 1e-5

    @pytest.mark.parametrize("seed", range(5))
    def test_data_processing_on_memory(self, seed):
        rng = np.random.default_rng(200 + seed)
        mat = random_density(4, rng)
        out = random_channel_on_second(mat, 2, 2, rng)
        for func in (ent.hmin, ent.hmax, ent.conditional_von_neumann):
            assert func(_dm(mat)).value <= func(_dm(out)).value + 1e-5

    def test_bounds_by_dimension(self):
        rng = np.random.default_rng(9)
        rho = _dm(random_density(8, rng), (2, 4))
        assert -1 - 1e-6 <= ent.hmin(rho).value
        assert ent.hmax(rho).value <= 1 + 1e-6


class TestClassicalSmoothing:
    @pytest.mark.parametrize(
        "p,eps",
        [
            ([0.7, 0.2, 0.1], 0.1),
            ([0.4, 0.3, 0.2, 0.1], 0.2),
            ([[0.3, 0.1], [0.05, 0.25], [0.2, 0.1]], 0.15),
            ([[0.445, 0.055], [0.055, 0.445]], 0.05),
        ],
    )
    def test_matches_constrained_optimizer(self, p, eps):
        exact = ent.classical_hmax_smooth(np.array(p), eps)
        assert exact == pytest.approx(classical_smoothing_oracle(np.array(p), eps), abs=1e-6)

    def test_uniform_ties(self):
        # the optimum scales the uniform distribution down: log2(8 (1 - eps^2))
        assert ent.classical_hmax_smooth(np.full(8, 1 / 8), 0.3) == pytest.approx(math.log2(8 * 0.91))

    def test_smoothing_can_reach_zero(self):
        assert ent.classical_hmax_smooth(np.array([0.7, 0.2, 0.1]), math.sqrt(0.3)) == pytest.approx(0.0, abs=1e-12)

    def test_epsilon_zero_is_renyi_half(self):
        p = np.array([0.5, 0.3, 0.2])
        expected = 2 * math.log2(np.sum(np.sqrt(p)))
        assert ent.classical_hmax_smooth(p, 0.0) == pytest.approx(expected)

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10_000), eps=st.floats(0.01, 0.4))
    def test_monotone_in_epsilon(self, seed, eps):
        p = np.random.default_rng(seed).dirichlet(np.ones(5))
        assert ent.classical_hmax_smooth(p, eps) <= ent.classical_hmax_smooth(p, eps / 2) + 1e-9

    def test_copies_match_dense_table(self):
        p = np.array([[0.4, 0.1], [0.1, 0.4]])
        dense = np.einsum("ab,cd->acbd", p, p).reshape(4, 4)
        assert ent.classical_hmax_smooth(p, 0.1, copies=2) == pytest.approx(
            ent.classical_hmax_smooth(dense, 0.1), abs=1e-10
        )

    def test_hmax_smooth_uses_exact_path_for_diagonal(self):
        table = np.array([[0.3, 0.2], [0.1, 0.4]])
        rho = _dm(np.diag(table.ravel()).astype(complex))
        rep = ent.hmax_smooth(rho, None, 0.1)
        assert rep.method == "classicalExact"
        assert rep.value == pytest.approx(ent.classical_hmax_smooth(table, 0.1), abs=1e-12)
        assert rep.smoothing_distance <= 0.1 + 1e-9

    def test_distribution_validation(self):
        with pytest.raises(InvalidStateError):
            ent.ClassicalDistribution(np.array([0.5, 0.6]))


class TestQuantumSmoothing:
    def test_truncation_within_budget_and_below_unsmoothed(self):
        rng = np.random.default_rng(11)
        rho = _dm(random_density(4, rng))
        rep = ent.hmax_smooth(rho, None, 0.1)
        assert rep.method == "truncationHeuristic"
        assert rep.smoothing_distance <= 0.1 + 1e-9
        assert rep.value <= ent.hmax(rho).value + 1e-9

    def test_dual_smoothed_min_entropy(self):
        rng = np.random.default_rng(12)
        psi = PureState(random_pure(8, rng), (2, 2, 2))
        lay = RegisterLayout.of(S=1, O=1, Gamma=1)
        rmin = ent.hmin_smooth(psi.density(), lay, 0.05, "S", "O", dual="Gamma")
        rmax = ent.hmax_smooth(psi.density(), lay, 0.05, "S", "Gamma")
        assert rmin.value == pytest.approx(-rmax.value)
        assert rmin.value >= ent.hmin(psi.density(), lay, "S", "O").value - 1e-6


class TestReport:
    def test_roundtrip(self):
        rep = ent.hmax(_dm(GROUND_TRUTH["maximally_entangled"][0]))
        back = ent.EntropyReport.from_dict(rep.to_dict())
        assert back.value == rep.value and back.method == rep.method
        assert np.allclose(back.certificate.matrix, rep.certificate.matrix)

    def test_exact_methods_carry_zero_epsilon(self):
        with pytest.raises(ValueError):
            ent.EntropyReport(0.0, 0.1, "max", "convexSolve")

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ent.EntropyReport(0.0, 0.0, "collision", "closedForm")


class TestAEP:
    def test_binary_entropy(self):
        assert ent.binary_entropy(0.11) == pytest.approx(binary_entropy(0.11))
        assert ent.binary_entropy(0.11) == pytest.approx(0.4999, abs=2e-4)

    @pytest.mark.parametrize("n", [1, 5, 20, 50])
    def test_fair_coin_smoothed_rate(self, n):
        # uniform weight cannot be concentrated; smoothing only rescales by 1 - eps^2
        rho = DensityOperator.maximally_mixed(1)
        expected = 1 + math.log2(1 - 0.05**2) / n
        assert ent.aep_rate(rho, None, n, 0.05, [0], []) == pytest.approx(expected, abs=1e-9)

    def test_fair_coin_rate_at_zero_epsilon(self):
        rho = DensityOperator.maximally_mixed(1)
        for n in (1, 5, 20):
            assert ent.aep_rate(rho, None, n, 0.0, [0], []) == pytest.approx(1.0, abs=1e-12)

    def test_pure_source_rate_vanishes(self):
        # only the subnormalization log2(1 - eps^2) survives, spread over n copies
        rho = DensityOperator.basis("0")
        assert ent.aep_rate(rho, None, 30, 0.05, [0], []) == pytest.approx(math.log2(1 - 0.05**2) / 30, abs=1e-12)
        assert ent.aep_rate(rho, None, 30, 0.0, [0], []) == pytest.approx(0.0, abs=1e-12)

    def test_bernoulli_rates_frozen(self):
        rho = DensityOperator(np.diag([0.89, 0.11]).astype(complex))
        got = [ent.aep_rate(rho, None, n, 0.05, [0], []) for n in (10, 25, 50, 100)]
        assert got == pytest.approx([0.66434, 0.66028, 0.65025, 0.63396], abs=1e-4)
        assert all(a > b for a, b in zip(got, got[1:]))

    def test_conditional_table_matches_marginal_source(self):
        # S = X xor Z with Z known to O: H(S|O) = h(0.11)
        table = np.array([[0.445, 0.055], [0.055, 0.445]])
        rho = _dm(np.diag(table.ravel()).astype(complex))
        src = DensityOperator(np.diag([0.89, 0.11]).astype(complex))
        assert ent.aep_rate(rho, None, 25, 0.05) == pytest.approx(
            ent.aep_rate(src, None, 25, 0.05, [0], []), abs=1e-10
        )

    def test_quantum_capacity(self):
        rng = np.random.default_rng(0)
        rho = _dm(random_density(4, rng))
        with pytest.raises(CapacityError):
            ent.aep_rate(rho, None, 4, 0.05)
