"""States, partial traces, and decks of marginals.

A deck is the collection of reduced density matrices of one state over a
chosen family of party subsets.  Two states can share a sizable deck while
being very different globally; the rest of the demos explore when a deck pins
the state down.
"""

import numpy as np

from puredeck import (MarginalFamily, PartyStructure, compute_deck,
                      deck_distance, ghz_state, partial_trace,
                      sample_haar_state)

structure = PartyStructure.uniform(4, 2)
print(f"4 qubits, total dimension {structure.total_dim}")
print("party 1 is the most significant digit:",
      structure.basis_label(structure.digits_to_index((1, 0, 0, 0))))

# A Haar-random state and one of its two-body marginals.
psi = sample_haar_state(structure, seed=7)
rho_13 = partial_trace(psi, (1, 3))
print("\nrho_13 eigenvalues:", np.round(np.linalg.eigvalsh(rho_13.matrix), 4))
print("trace:", np.trace(rho_13.matrix).real)

# The complete 2-deck: all six two-body marginals.
deck = compute_deck(psi, MarginalFamily.complete(4, 2))
print("complete 2-deck size:", len(deck.marginals))

# A lopsided GHZ state and its phase-flipped partner share every 3-body
# marginal, so no 3-deck can tell them apart.
alpha, beta = 0.6, 0.8
ghz = ghz_state(4, 2, alpha, beta)
flipped = ghz_state(4, 2, alpha, -beta)
fam3 = MarginalFamily.complete(4, 3)
dist = deck_distance(compute_deck(ghz, fam3), compute_deck(flipped, fam3))
overlap = abs(np.vdot(ghz.amplitudes, flipped.amplitudes))
print(f"\nGHZ vs phase-flipped GHZ: 3-deck distance {dist:.2e}, "
      f"overlap {overlap:.2f}")
print("same deck, different state: the 3-deck does not determine this state")
