"""Certifying uniqueness from four half-body marginals.

Split six qubits into blocks A={1,2}, B={3}, C={4}, D={5,6}.  The marginals
of the primary cut (AB|CD) confine any competitor to the Schmidt phase torus;
matching the crossing pair (AC and BD) imposes 33 homogeneous equations on
the 28 phase-difference variables.  For Haar-random states the system has a
trivial null space, so the four 3-body marginals determine the state among
all pure states.  For a lopsided GHZ state the system collapses and an
explicit second state is produced instead.
"""

from puredeck import (CrossCutSpec, MarginalFamily, PartyStructure,
                      certify_udp, fidelity_up_to_phase, ghz_state,
                      sample_haar_state, verify_overlap_dependences)

structure = PartyStructure.uniform(6, 2)
spec = CrossCutSpec.parse("A=1,2;B=3;C=4;D=5,6", 6)

print("Haar-random six-qubit states:")
for seed in range(5):
    verdict = certify_udp(sample_haar_state(structure, seed), spec)
    print(f"  seed {seed}: {verdict.status.value}  "
          f"(null_dim={verdict.null_dim}, "
          f"equations={verdict.equation_counts['complex_equations']}, "
          f"variables={verdict.equation_counts['complex_variables']})")

print("\nLopsided GHZ state (0.6, 0.8) against the complete 5-deck:")
ghz = ghz_state(6, 2, 0.6, 0.8)
verdict = certify_udp(ghz, spec, MarginalFamily.complete(6, 5))
print(f"  {verdict.status.value}: witness shares the deck to "
      f"{verdict.witness_deck_distance:.1e} but has fidelity "
      f"{verdict.witness_fidelity:.2f} with the original")
print("  witness overlap check:",
      round(fidelity_up_to_phase(ghz, verdict.witness), 6))

print("\nWhy the equations are independent: sampled overlap-entry tuples")
rep = verify_overlap_dependences(structure, spec, trials=200, seed=5)
print(f"  stacked rank {rep.measured_rank} of {rep.entry_count} entries; "
      f"the only dependences are the {rep.entry_count - rep.predicted_rank} "
      f"vanishing traces")
