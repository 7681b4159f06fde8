"""Tests for the cross-cut phase-system certifier."""

import math

import numpy as np
import pytest

from puredeck import (CrossCutSpec, GammaSystem, MarginalFamily,
                      PartyStructure, PureState, UdpStatus, UdpVerdict,
                      assemble_gamma_system, build_cross_matrices, certify_udp,
                      compute_deck, deck_distance, decide_null_space,
                      expected_equation_counts, fidelity_up_to_phase,
                      ghz_state, sample_haar_state, schmidt_decompose,
                      verify_overlap_dependences)
from puredeck.certify import _haar_orthonormal_pair

SIX_QUBIT_SPEC = CrossCutSpec.parse("A=1,2;B=3;C=4;D=5,6", 6)
SIX_QUBIT_STRUCTURE = PartyStructure.uniform(6, 2)


class TestCrossCutSpec:
    def test_parse_and_unions(self):
        spec = SIX_QUBIT_SPEC
        assert spec.ab == (1, 2, 3)
        assert spec.cd == (4, 5, 6)
        assert spec.ac == (1, 2, 4)
        assert spec.bd == (3, 5, 6)

    def test_overlap_rejected(self):
        with pytest.raises(ValueError, match="disjoint"):
            CrossCutSpec.parse("A=1,2;B=2;C=3;D=4", 4)

    def test_cover_required(self):
        with pytest.raises(ValueError, match="cover"):
            CrossCutSpec.parse("A=1;B=2;C=3;D=", 4)

    def test_empty_union_rejected(self):
        with pytest.raises(ValueError, match="nonempty"):
            CrossCutSpec.parse("A=1;B=2;C=;D=", 2)

    def test_empty_block_allowed_when_unions_nonempty(self):
        spec = CrossCutSpec.parse("A=1;B=;C=2;D=3", 3)
        assert spec.ab == (1,) and spec.bd == (3,)

    def test_verification_family_order(self):
        fam = SIX_QUBIT_SPEC.verification_family()
        assert fam.subsets == ((1, 2, 3), (4, 5, 6), (1, 2, 4), (3, 5, 6))


class TestCrossMatrices:
    def test_six_qubit_block_sizes(self):
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 0)
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        mats = build_cross_matrices(dec, SIX_QUBIT_SPEC)
        assert mats.q.shape == (8, 8, 4, 4)
        assert mats.p.shape == (8, 8, 2, 2)
        assert mats.l.shape == (8, 8, 2, 2)
        assert mats.m.shape == (8, 8, 4, 4)

    def test_trace_identities(self):
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 1)
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        mats = build_cross_matrices(dec, SIX_QUBIT_SPEC)
        for grid in (mats.q, mats.p, mats.l, mats.m):
            traces = np.trace(grid, axis1=2, axis2=3)
            np.testing.assert_allclose(traces, np.eye(dec.rank), atol=1e-12)

    def test_adjoint_pairing(self):
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 2)
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        mats = build_cross_matrices(dec, SIX_QUBIT_SPEC)
        i, j = 2, 5
        np.testing.assert_allclose(mats.q[i, j].conj().T, mats.q[j, i], atol=1e-12)
        np.testing.assert_allclose(mats.m[i, j].conj().T, mats.m[j, i], atol=1e-12)

    def test_cut_mismatch_rejected(self):
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 3)
        dec = schmidt_decompose(psi, (1, 2, 4))
        with pytest.raises(ValueError, match="primary cut"):
            build_cross_matrices(dec, SIX_QUBIT_SPEC)

    def test_overlap_consistency_with_marginal_match(self):
        # the assembled constraint encodes equality of the secondary-cut
        # marginals: the zero-phase gamma vector must satisfy it exactly
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 4)
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        system = assemble_gamma_system(build_cross_matrices(dec, SIX_QUBIT_SPEC))
        zero = np.zeros(system.num_real_variables)
        assert np.linalg.norm(system.matrix @ zero) == 0.0


class TestGammaSystem:
    def test_six_qubit_counts(self):
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 5)
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        system = assemble_gamma_system(build_cross_matrices(dec, SIX_QUBIT_SPEC))
        assert system.num_complex_variables == 28
        assert system.num_complex_equations == 33
        assert system.equation_counts == {"ac": 18, "bd": 15}
        assert system.matrix.shape == (66, 56)

    @pytest.mark.parametrize("n, d, blocks", [
        (4, 2, "A=1;B=2;C=3;D=4"),
        (4, 3, "A=1;B=2;C=3;D=4"),
        (6, 2, "A=1,2;B=3;C=4;D=5,6"),
        (6, 2, "A=1;B=2,3;C=4,5;D=6"),
        (8, 2, "A=1,2;B=3,4;C=5,6;D=7,8"),
    ])
    def test_counting_law(self, n, d, blocks):
        structure = PartyStructure.uniform(n, d)
        spec = CrossCutSpec.parse(blocks, n)
        psi = sample_haar_state(structure, 7)
        dec = schmidt_decompose(psi, spec.ab)
        system = assemble_gamma_system(build_cross_matrices(dec, spec))
        expected = expected_equation_counts(structure, spec)
        assert system.equation_counts == expected
        assert system.num_complex_equations == expected["ac"] + expected["bd"]

    def test_empty_block_spec_assembles(self):
        # B empty: no equations from the L/M side
        structure = PartyStructure.uniform(4, 2)
        spec = CrossCutSpec.parse("A=1,2;B=;C=3;D=4", 4)
        psi = sample_haar_state(structure, 9)
        dec = schmidt_decompose(psi, spec.ab)
        system = assemble_gamma_system(build_cross_matrices(dec, spec))
        assert system.equation_counts["bd"] == 0
        assert system.equation_counts["ac"] == \
            expected_equation_counts(structure, spec)["ac"]


class TestNullSpace:
    def test_haar_state_trivial_null_space(self):
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 10)
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        system = assemble_gamma_system(build_cross_matrices(dec, SIX_QUBIT_SPEC))
        assert decide_null_space(system).null_dim == 0

    def test_ghz_nontrivial_null_space_with_explicit_solution(self):
        # oracle: flipping the relative phase preserves all four cut marginals
        psi = ghz_state(6)
        flipped = ghz_state(6, 2, 1 / math.sqrt(2), -1 / math.sqrt(2))
        fam = SIX_QUBIT_SPEC.verification_family()
        dist = deck_distance(compute_deck(psi, fam), compute_deck(flipped, fam))
        assert dist <= 1e-12  # a genuine competitor exists...
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        system = assemble_gamma_system(build_cross_matrices(dec, SIX_QUBIT_SPEC))
        null = decide_null_space(system)
        assert null.null_dim >= 1  # ...so the system must be singular

    def test_zero_row_system_is_unconstrained(self):
        pairs = ((0, 1), (0, 2), (1, 2))
        system = GammaSystem(3, pairs, np.zeros((0, 6)), {"ac": 0, "bd": 0})
        result = decide_null_space(system)
        assert result.null_dim == 6
        np.testing.assert_array_equal(result.basis, np.eye(6))

    def test_null_basis_orthonormal_and_annihilated(self):
        psi = ghz_state(6, 2, 0.6, 0.8)
        dec = schmidt_decompose(psi, SIX_QUBIT_SPEC.ab)
        system = assemble_gamma_system(build_cross_matrices(dec, SIX_QUBIT_SPEC))
        null = decide_null_space(system)
        assert null.null_dim == 2
        basis = null.basis
        np.testing.assert_allclose(basis.T @ basis, np.eye(2), atol=1e-12)
        assert np.linalg.norm(system.matrix @ basis) <= 1e-12


class TestCertify:
    def test_haar_states_certified(self):
        for seed in range(10):
            psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 100 + seed)
            verdict = certify_udp(psi, SIX_QUBIT_SPEC)
            assert verdict.status == UdpStatus.CERTIFIED_UDP
            assert verdict.null_dim == 0
            assert verdict.genericity.generic

    def test_ghz_witnessed_against_complete_deck(self):
        psi = ghz_state(6, 2, 0.6, 0.8)
        verdict = certify_udp(psi, SIX_QUBIT_SPEC, MarginalFamily.complete(6, 3))
        assert verdict.status == UdpStatus.NOT_UDP_WITNESSED
        assert verdict.witness is not None
        fam = MarginalFamily.complete(6, 3)
        dist = deck_distance(compute_deck(psi, fam),
                             compute_deck(verdict.witness, fam))
        assert dist <= 1e-9
        fid = fidelity_up_to_phase(psi, verdict.witness)
        assert fid < 1 - 1e-6
        assert fid == pytest.approx(0.28, abs=1e-9)

    def test_product_state_inconclusive_with_note(self):
        psi = PureState.basis_state(SIX_QUBIT_STRUCTURE, (0,) * 6)
        verdict = certify_udp(psi, SIX_QUBIT_SPEC)
        assert verdict.status == UdpStatus.INCONCLUSIVE
        assert verdict.null_dim == 0
        assert any("rank-1" in note for note in verdict.notes)

    def test_status_invariant_under_global_phase(self):
        psi = sample_haar_state(SIX_QUBIT_STRUCTURE, 55)
        rotated = PureState(psi.structure, np.exp(0.77j) * psi.amplitudes)
        a = certify_udp(psi, SIX_QUBIT_SPEC)
        b = certify_udp(rotated, SIX_QUBIT_SPEC)
        assert a.status == b.status == UdpStatus.CERTIFIED_UDP

    def test_primary_secondary_roles_interchangeable(self):
        # swapping B and C swaps the two cuts; generic states certify both ways
        swapped = CrossCutSpec.parse("A=1,2;B=4;C=3;D=5,6", 6)
        for seed in (7, 21):
            psi = sample_haar_state(SIX_QUBIT_STRUCTURE, seed)
            a = certify_udp(psi, SIX_QUBIT_SPEC)
            b = certify_udp(psi, swapped)
            assert (a.null_dim == 0) == (b.null_dim == 0)

    def test_spec_structure_mismatch(self):
        psi = ghz_state(4)
        with pytest.raises(ValueError, match="parties"):
            certify_udp(psi, SIX_QUBIT_SPEC)

    def test_maximally_entangled_cut_never_certified(self):
        # fully degenerate spectrum: the verdict must not be CERTIFIED_UDP,
        # and any witness it does emit must be independently sound
        vec = np.zeros(64, dtype=complex)
        for i in range(8):
            vec[i * 8 + i] = 1 / math.sqrt(8)
        psi = PureState(SIX_QUBIT_STRUCTURE, vec)
        verdict = certify_udp(psi, SIX_QUBIT_SPEC)
        assert verdict.status != UdpStatus.CERTIFIED_UDP
        assert not verdict.genericity.distinct_spectrum
        if verdict.witness is not None:
            fam = SIX_QUBIT_SPEC.verification_family()
            dist = deck_distance(compute_deck(psi, fam),
                                 compute_deck(verdict.witness, fam))
            assert dist <= 1e-9
            assert fidelity_up_to_phase(psi, verdict.witness) < 1 - 1e-6

    def test_verdict_invariants_enforced(self):
        from puredeck.schmidt import GenericityReport
        generic = GenericityReport(True, True, 0.1, 4)
        degenerate = GenericityReport(False, True, 0.1, 2)
        with pytest.raises(ValueError):
            UdpVerdict(UdpStatus.CERTIFIED_UDP, 1, generic, {})
        with pytest.raises(ValueError):
            UdpVerdict(UdpStatus.CERTIFIED_UDP, 0, degenerate, {})
        with pytest.raises(ValueError):
            UdpVerdict(UdpStatus.NOT_UDP_WITNESSED, 1, generic, {})


class TestOverlapDependences:
    def test_single_party_blocks(self):
        structure = PartyStructure.uniform(4, 2)
        spec = CrossCutSpec.parse("A=1;B=2;C=3;D=4", 4)
        report = verify_overlap_dependences(structure, spec, trials=64, seed=0)
        assert report.entry_count == 16
        assert report.predicted_rank == 12
        assert report.measured_rank == 12

    def test_six_qubit_spec(self):
        report = verify_overlap_dependences(SIX_QUBIT_STRUCTURE, SIX_QUBIT_SPEC,
                                            trials=80, seed=1)
        assert report.entry_count == 40
        assert report.measured_rank == report.predicted_rank == 36

    def test_trials_too_small(self):
        with pytest.raises(ValueError, match="trials"):
            verify_overlap_dependences(SIX_QUBIT_STRUCTURE, SIX_QUBIT_SPEC,
                                       trials=10, seed=0)

    def test_single_sample_traces_vanish(self):
        rng = np.random.default_rng(3)
        u1, u2 = _haar_orthonormal_pair(8, rng)
        q = u1.reshape(4, 2) @ u2.reshape(4, 2).conj().T
        l = u1.reshape(4, 2).T @ u2.reshape(4, 2).conj()
        assert abs(np.trace(q)) <= 1e-12
        assert abs(np.trace(l)) <= 1e-12
