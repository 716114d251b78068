import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_density, random_pure
from negentropy.exceptions import AddressingError, CapacityError, DimensionError, InvalidStateError
from negentropy.quantum import (
    DensityOperator,
    PureState,
    RegisterLayout,
    apply_unitary,
    apply_unitary_pure,
    fidelity,
    generalized_fidelity,
    gibbs_state,
    haar_unitary,
    maximally_entangled,
    partial_trace,
    purified_distance,
    purify,
    reorder,
    schmidt_decompose,
    tensor,
    trace_distance,
)


class TestRegisterLayout:
    def test_indices_follow_layout_order(self):
        lay = RegisterLayout.of(S=1, O=2, Gamma=1)
        assert lay.qubit_indices(["O"]) == [1, 2]
        assert lay.qubit_indices(["Gamma", "S"]) == [0, 3]
        assert lay.total_qubits == 4 and lay.dimension == 16

    def test_unknown_block(self):
        lay = RegisterLayout.of(S=1)
        with pytest.raises(AddressingError, match="unknown block"):
            lay.qubits("O")

    def test_duplicate_names_rejected(self):
        with pytest.raises(AddressingError):
            RegisterLayout((("S", 1), ("S", 2)))

    def test_split_and_roundtrip(self):
        lay = RegisterLayout.of(S=3, O=1).split("S", [("S1", 1), ("S2", 2)])
        assert lay.names == ["S1", "S2", "O"]
        assert RegisterLayout.from_list(lay.to_list()) == lay

    def test_split_must_conserve_qubits(self):
        with pytest.raises(AddressingError):
            RegisterLayout.of(S=3).split("S", [("S1", 1)])


class TestDensityOperator:
    def test_rejects_non_hermitian(self):
        with pytest.raises(InvalidStateError):
            DensityOperator(np.array([[0.5, 0.1], [0.3, 0.5]]))

    def test_rejects_negative(self):
        with pytest.raises(InvalidStateError):
            DensityOperator(np.diag([1.2, -0.2]))

    def test_rejects_trace_above_one(self):
        with pytest.raises(InvalidStateError):
            DensityOperator(np.diag([0.7, 0.7]))

    def test_subnormalized_allowed(self):
        rho = DensityOperator(np.diag([0.4, 0.1]))
        assert rho.norm == pytest.approx(0.5)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            DensityOperator.maximally_mixed(11)

    def test_pure_detection(self):
        assert DensityOperator.basis("01").is_pure()
        assert not DensityOperator.maximally_mixed(1).is_pure()

    def test_dict_roundtrip(self):
        rng = np.random.default_rng(3)
        rho = DensityOperator(random_density(4, rng), (2, 2))
        back = DensityOperator.from_dict(rho.to_dict())
        assert np.allclose(back.matrix, rho.matrix) and back.dims == rho.dims

    def test_pure_state_norm_checked(self):
        with pytest.raises(InvalidStateError):
            PureState(np.array([1.0, 1.0]))


class TestPartialTrace:
    def test_bell_marginal_is_mixed(self):
        rho = PureState.bell().density()
        red = partial_trace(rho, None, [0])
        assert np.allclose(red.matrix, np.eye(2) / 2)

    def test_product_state_marginals(self):
        rng = np.random.default_rng(0)
        a = DensityOperator(random_density(2, rng))
        b = DensityOperator(random_density(4, rng))
        ab = tensor(a, b)
        lay = RegisterLayout.of(A=1, B=2)
        assert np.allclose(partial_trace(ab, lay, ["A"]).matrix, a.matrix)
        assert np.allclose(partial_trace(ab, lay, ["B"]).matrix, b.matrix)

    def test_reorder_swaps_blocks(self):
        rng = np.random.default_rng(1)
        a = DensityOperator(random_density(2, rng))
        b = DensityOperator(random_density(2, rng))
        lay = RegisterLayout.of(A=1, B=1)
        swapped, new = reorder(tensor(a, b), lay, ["B", "A"])
        assert new.names == ["B", "A"]
        assert np.allclose(swapped.matrix, np.kron(b.matrix, a.matrix))

    def test_bad_index(self):
        with pytest.raises(AddressingError):
            partial_trace(PureState.bell().density(), None, [2])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            partial_trace(DensityOperator.maximally_mixed(2), RegisterLayout.of(S=1), ["S"])

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_trace_preserved(self, seed):
        rng = np.random.default_rng(seed)
        rho = DensityOperator(random_density(8, rng), (2, 2, 2))
        for keep in ([0], [1, 2], [0, 2]):
            assert partial_trace(rho, None, keep).norm == pytest.approx(1.0, abs=1e-12)


class TestDistances:
    def test_fidelity_of_orthogonal_states(self):
        assert fidelity(DensityOperator.basis("0"), DensityOperator.basis("1")) == pytest.approx(0.0, abs=1e-12)

    def test_fidelity_pure_mixed(self):
        # F(|0>, I/2) = sqrt(1/2)
        assert fidelity(DensityOperator.basis("0"), DensityOperator.maximally_mixed(1)) == pytest.approx(
            math.sqrt(0.5)
        )

    def test_trace_distance_orthogonal(self):
        assert trace_distance(DensityOperator.basis("0"), DensityOperator.basis("1")) == pytest.approx(1.0)

    def test_generalized_fidelity_subnormalized(self):
        rho = DensityOperator(np.diag([0.5, 0.0]))
        sigma = DensityOperator(np.diag([0.5, 0.0]))
        # 0.5 + sqrt(0.5 * 0.5)
        assert generalized_fidelity(rho, sigma) == pytest.approx(1.0)
        assert purified_distance(rho, sigma) == pytest.approx(0.0, abs=1e-7)

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_fuchs_van_de_graaf(self, seed):
        rng = np.random.default_rng(seed)
        r = DensityOperator(random_density(4, rng))
        s = DensityOperator(random_density(4, rng))
        f = fidelity(r, s)
        td = trace_distance(r, s)
        pd = purified_distance(r, s)
        assert 1 - f <= td + 1e-10
        assert td <= math.sqrt(1 - f * f) + 1e-10
        assert td <= pd + 1e-10

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_fidelity_symmetric_and_bounded(self, seed):
        rng = np.random.default_rng(seed)
        r = DensityOperator(random_density(3, rng))
        s = DensityOperator(random_density(3, rng))
        assert fidelity(r, s) == pytest.approx(fidelity(s, r), abs=1e-10)
        assert 0 <= fidelity(r, s) <= 1 + 1e-12


class TestUnitaries:
    @pytest.mark.parametrize("d", [1, 2, 4, 8])
    def test_haar_is_unitary(self, d):
        u = haar_unitary(d, 7)
        assert np.allclose(u.conj().T @ u, np.eye(d), atol=1e-12)

    def test_haar_seeded(self):
        assert np.array_equal(haar_unitary(4, 11), haar_unitary(4, 11))
        assert not np.allclose(haar_unitary(4, 11), haar_unitary(4, 12))

    def test_haar_first_moment(self):
        # E|U_00|^2 = 1/d for Haar unitaries
        rng = np.random.default_rng(5)
        vals = [abs(haar_unitary(4, rng)[0, 0]) ** 2 for _ in range(4000)]
        assert np.mean(vals) == pytest.approx(0.25, abs=0.01)

    def test_haar_phase_is_uniform(self):
        # without the R-diagonal correction the diagonal phases are biased
        rng = np.random.default_rng(6)
        phases = [np.angle(haar_unitary(2, rng)[0, 0]) for _ in range(4000)]
        assert abs(np.mean(np.exp(1j * np.array(phases)))) < 0.05

    def test_apply_on_block(self):
        lay = RegisterLayout.of(A=1, B=1)
        x = np.array([[0, 1], [1, 0]])
        out = apply_unitary(DensityOperator.basis("00"), x, lay, "B")
        assert np.allclose(out.matrix, DensityOperator.basis("01").matrix)
        psi = apply_unitary_pure(PureState.basis("00"), x, lay, "A")
        assert np.allclose(psi.amplitudes, PureState.basis("10").amplitudes)

    def test_apply_wrong_shape(self):
        with pytest.raises(DimensionError):
            apply_unitary(DensityOperator.basis("00"), np.eye(4), RegisterLayout.of(A=1, B=1), "A")


class TestPurificationAndSchmidt:
    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_purify_reduces_back(self, seed):
        rng = np.random.default_rng(seed)
        rho = DensityOperator(random_density(4, rng), (2, 2))
        psi = purify(rho)
        red = partial_trace(psi.density(), None, [0, 1])
        assert np.allclose(red.matrix, rho.matrix, atol=1e-10)

    def test_schmidt_of_bell(self):
        dec = schmidt_decompose(PureState.bell(), None, [0])
        assert np.allclose(np.sort(dec.coefficients), [math.sqrt(0.5)] * 2)
        assert np.allclose(dec.reconstruct(), PureState.bell().amplitudes)

    def test_schmidt_reconstructs_random(self):
        rng = np.random.default_rng(2)
        psi = PureState(random_pure(8, rng), (2, 2, 2))
        dec = schmidt_decompose(psi, RegisterLayout.of(A=1, B=2), ["A"])
        assert np.sum(dec.coefficients**2) == pytest.approx(1.0)
        assert np.allclose(dec.reconstruct(), psi.amplitudes)

    def test_maximally_entangled_marginal(self):
        phi = maximally_entangled(2).density()
        assert np.allclose(partial_trace(phi, None, [0, 1]).matrix, np.eye(4) / 4)


class TestGibbs:
    def test_degenerate_levels_uniform(self):
        assert np.allclose(gibbs_state([0, 0, 0, 0], 1.0).matrix, np.eye(4) / 4)

    def test_two_level_ratio(self):
        g = gibbs_state([0.0, 2.0], 1.0).matrix
        assert g[1, 1] / g[0, 0] == pytest.approx(math.exp(-2))

    def test_large_gap_ground_state(self):
        g = gibbs_state([0.0, 1e4], 1.0).matrix
        assert g[0, 0] == pytest.approx(1.0) and g[1, 1] == 0.0
