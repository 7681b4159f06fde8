"""Tests for party structures, pure states, sampling, and serialization."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from puredeck import (DIM_CAP, Marginal, PartyStructure, PureState,
                      fidelity_up_to_phase, ghz_state, inner_product,
                      load_state, sample_haar_state, save_state,
                      state_to_json_dict)
from puredeck.schmidt import classify_genericity, schmidt_decompose

NINE_TERM_QUTRIT = {
    "0000": 1 / 3, "0111": 1 / 3, "0222": 1 / 3,
    "1021": 1 / 3, "1102": 1 / 3, "1210": 1 / 3,
    "2012": 1 / 3, "2120": 1 / 3, "2201": 1 / 3,
}


class TestPartyStructure:
    def test_total_dim_and_subset_dim(self):
        st_ = PartyStructure(3, (2, 3, 4))
        assert st_.total_dim == 24
        assert st_.subset_dim((1, 3)) == 8
        assert st_.subset_dim(()) == 1

    def test_dimension_cap_enforced(self):
        PartyStructure.uniform(16, 2)  # exactly at the cap
        with pytest.raises(ValueError, match="cap"):
            PartyStructure.uniform(17, 2)
        assert PartyStructure.uniform(16, 2).total_dim == DIM_CAP

    def test_local_dims_validated(self):
        with pytest.raises(ValueError):
            PartyStructure(2, (2, 1))
        with pytest.raises(ValueError):
            PartyStructure(2, (2,))

    def test_mixed_radix_round_trip_exhaustive(self):
        st_ = PartyStructure(3, (2, 3, 2))
        for idx in range(st_.total_dim):
            digits = st_.index_to_digits(idx)
            assert st_.digits_to_index(digits) == idx

    def test_big_endian_convention(self):
        # party 1 is the most significant digit
        st_ = PartyStructure(2, (2, 3))
        assert st_.index_to_digits(0) == (0, 0)
        assert st_.index_to_digits(3) == (1, 0)
        assert st_.digits_to_index((1, 2)) == 5
        assert st_.basis_label(5) == "12"

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.integers(min_value=2, max_value=4), min_size=1, max_size=6),
           st.integers(min_value=0, max_value=10 ** 9))
    def test_mixed_radix_round_trip_random(self, dims, raw):
        st_ = PartyStructure(len(dims), tuple(dims))
        idx = raw % st_.total_dim
        assert st_.digits_to_index(st_.index_to_digits(idx)) == idx


class TestPureState:
    def test_norm_enforced(self):
        st_ = PartyStructure.uniform(2, 2)
        with pytest.raises(ValueError, match="normalized"):
            PureState(st_, np.array([1.0, 1.0, 0, 0]))
        ok = PureState.from_amplitudes(st_, [1.0, 1.0, 0, 0], normalize=True)
        assert abs(np.linalg.norm(ok.amplitudes) - 1) <= 1e-12

    def test_zero_vector_rejected(self):
        st_ = PartyStructure.uniform(2, 2)
        with pytest.raises(ValueError, match="zero"):
            PureState.from_amplitudes(st_, np.zeros(4), normalize=True)

    def test_amplitudes_immutable(self):
        psi = ghz_state(2)
        with pytest.raises(ValueError):
            psi.amplitudes[0] = 0.0

    def test_from_terms(self):
        st_ = PartyStructure.uniform(2, 2)
        psi = PureState.from_terms(st_, {"00": 1 / math.sqrt(2),
                                         "11": 1 / math.sqrt(2)})
        np.testing.assert_allclose(psi.amplitudes,
                                   [2 ** -0.5, 0, 0, 2 ** -0.5])


class TestHaarSampling:
    def test_deterministic_for_fixed_seed(self):
        st_ = PartyStructure.uniform(2, 2)
        a = sample_haar_state(st_, 7)
        b = sample_haar_state(st_, 7)
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)

    def test_six_qubit_states_are_generic(self):
        # along 123|456: full rank and pairwise distinct spectrum, every seed
        st_ = PartyStructure.uniform(6, 2)
        for seed in range(100):
            dec = schmidt_decompose(sample_haar_state(st_, seed), (1, 2, 3))
            report = classify_genericity(dec)
            assert dec.rank == 8
            assert report.full_rank and report.distinct_spectrum

    def test_mean_probability_is_uniform(self):
        # Monte-Carlo oracle: E|amp_k|^2 = 1/4 for two qubits, within 3 SE
        st_ = PartyStructure.uniform(2, 2)
        rng = np.random.default_rng(123)
        probs = np.empty((10_000, 4))
        for i in range(probs.shape[0]):
            probs[i] = np.abs(sample_haar_state(st_, rng).amplitudes) ** 2
        mean = probs.mean(axis=0)
        se = probs.std(axis=0, ddof=1) / math.sqrt(probs.shape[0])
        assert np.all(np.abs(mean - 0.25) <= 3 * se)


class TestInnerProduct:
    def test_self_overlap_is_one(self):
        psi = sample_haar_state(PartyStructure.uniform(3, 2), 5)
        assert abs(inner_product(psi, psi) - 1) <= 1e-12

    def test_orthogonal_basis_states(self):
        st_ = PartyStructure.uniform(2, 2)
        a = PureState.basis_state(st_, (0, 0))
        b = PureState.basis_state(st_, (1, 1))
        assert inner_product(a, b) == 0

    def test_global_phase(self):
        psi = sample_haar_state(PartyStructure.uniform(2, 2), 9)
        theta = 0.731
        rotated = PureState(psi.structure, np.exp(1j * theta) * psi.amplitudes)
        assert abs(inner_product(psi, rotated) - np.exp(1j * theta)) <= 1e-12
        assert abs(fidelity_up_to_phase(psi, rotated) - 1) <= 1e-12

    def test_conjugate_linear_in_first_argument(self):
        st_ = PartyStructure.uniform(2, 2)
        a = sample_haar_state(st_, 1)
        b = sample_haar_state(st_, 2)
        assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)))

    def test_structure_mismatch(self):
        a = sample_haar_state(PartyStructure.uniform(2, 2), 0)
        b = sample_haar_state(PartyStructure.uniform(3, 2), 0)
        with pytest.raises(ValueError, match="structure"):
            inner_product(a, b)

    def test_bounded_by_one(self):
        rng = np.random.default_rng(0)
        st_ = PartyStructure.uniform(3, 2)
        for _ in range(20):
            a = sample_haar_state(st_, rng)
            b = sample_haar_state(st_, rng)
            assert abs(inner_product(a, b)) <= 1 + 1e-12


class TestJsonFormat:
    def test_single_basis_state(self):
        psi = load_state({"num_parties": 2, "local_dims": [2, 2],
                          "amplitudes": [{"basis": "00", "re": 1, "im": 0}]})
        np.testing.assert_array_equal(psi.amplitudes, [1, 0, 0, 0])

    def test_nine_term_qutrit_state(self):
        entries = [{"basis": b, "re": a, "im": 0.0}
                   for b, a in NINE_TERM_QUTRIT.items()]
        psi = load_state({"num_parties": 4, "local_dims": [3, 3, 3, 3],
                          "amplitudes": entries})
        assert abs(np.linalg.norm(psi.amplitudes) - 1) <= 1e-12
        assert np.count_nonzero(psi.amplitudes) == 9

    def test_digit_out_of_range(self):
        with pytest.raises(ValueError):
            load_state({"num_parties": 2, "local_dims": [2, 2],
                        "amplitudes": [{"basis": "02", "re": 1, "im": 0}]})

    def test_duplicate_basis_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            load_state({"num_parties": 1, "local_dims": [2],
                        "amplitudes": [{"basis": "0", "re": 1, "im": 0},
                                       {"basis": "0", "re": 0, "im": 1}]})

    def test_norm_deviation_needs_flag(self):
        record = {"num_parties": 1, "local_dims": [2],
                  "amplitudes": [{"basis": "0", "re": 2, "im": 0}]}
        with pytest.raises(ValueError, match="normalized"):
            load_state(record)
        assert load_state(dict(record, normalize=True)).amplitudes[0] == 1

    def test_malformed_json_text(self):
        with pytest.raises(ValueError, match="JSON"):
            load_state("{not json")

    def test_round_trip_exact(self, tmp_path):
        psi = sample_haar_state(PartyStructure.uniform(3, 3), 17)
        path = tmp_path / "state.json"
        save_state(psi, path)
        back = load_state(path)
        assert np.max(np.abs(back.amplitudes - psi.amplitudes)) <= 1e-15

    def test_omitted_entries_are_zero(self):
        data = state_to_json_dict(ghz_state(3))
        assert len(data["amplitudes"]) == 2  # six zero entries dropped
        back = load_state(json.dumps(data))
        np.testing.assert_allclose(back.amplitudes, ghz_state(3).amplitudes)


class TestMarginalType:
    def test_valid_marginal(self):
        m = Marginal((1,), np.array([[0.5, 0], [0, 0.5]]))
        assert m.dim == 2

    def test_rejects_non_hermitian(self):
        with pytest.raises(ValueError, match="Hermitian"):
            Marginal((1,), np.array([[0.5, 0.3], [0, 0.5]]))

    def test_rejects_bad_trace(self):
        with pytest.raises(ValueError, match="trace"):
            Marginal((1,), np.eye(2))

    def test_rejects_negative_eigenvalue(self):
        with pytest.raises(ValueError, match="negative"):
            Marginal((1,), np.array([[1.1, 0], [0, -0.1]]))
