"""States built on combinatorial arrays defeat even large marginals.

Rows of an index-1 orthogonal array (or packing array) of strength k project
injectively onto every choice of N-k columns.  Any superposition of the rows
therefore has diagonal (N-k)-body marginals, and changing row phases produces
a provably different state with exactly the same complete (N-k)-deck.
"""

import numpy as np

from puredeck.arrays import (OA_9_4_3_2, OrthogonalArray, format_array_text,
                             greedy_packing_array, non_udp_witness, qoa_state,
                             verify_oa)
from puredeck import partial_trace

oa = OrthogonalArray.from_rows(OA_9_4_3_2, 3, 2)
print(format_array_text(oa))
check = verify_oa(oa.rows, 3, 2)
print(f"index {check.index_lambda}, irredundant={check.irredundant}")

# Uniform amplitudes give a 2-uniform state: every 2-body marginal is I/9.
g = qoa_state(oa)
marg = partial_trace(g.state, (2, 4))
print("2-body marginal distance from I/9:",
      f"{np.max(np.abs(marg.matrix - np.eye(9) / 9)):.1e}")

# Negating one amplitude leaves the whole 2-deck unchanged.
result = non_udp_witness(g, 0)
print(f"flip first amplitude: deck distance {result.deck_distance:.1e}, "
      f"fidelity {result.fidelity:.4f}, verified={result.verified}")

# Random nonzero amplitudes break uniformity but not the construction.
rng = np.random.default_rng(3)
g2 = qoa_state(oa, rng.standard_normal(9) + 1j * rng.standard_normal(9))
result = non_udp_witness(g2, 0)
print(f"random amplitudes:       deck distance {result.deck_distance:.1e}, "
      f"fidelity {result.fidelity:.4f}, verified={result.verified}")

# Packing arrays are far weaker than orthogonal arrays and easy to grow.
print("\ngreedy packing arrays with random row phases:")
for n, d, k, rows, seed in ((6, 2, 3, 5, 1), (4, 3, 2, 7, 2), (6, 3, 3, 12, 3)):
    pa = greedy_packing_array(n, d, k, max_rows=rows, seed=seed)
    phases = rng.uniform(0, 2 * np.pi, pa.num_rows)
    result = non_udp_witness(qoa_state(pa), phases)
    print(f"  PA({pa.num_rows},{n},{d},{k}): verified={result.verified}, "
          f"deck distance {result.deck_distance:.1e}")
