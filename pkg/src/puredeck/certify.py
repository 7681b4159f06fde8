"""Uniqueness certification from two crossing pairs of marginals.

Given a state and four disjoint blocks A, B, C, D covering all parties, any
other pure state sharing the two marginals of the primary cut (AB|CD) can
only differ by phases on the Schmidt terms of that cut (when the spectrum is
nondegenerate).  Requiring the secondary-cut marginals (AC and BD) to match
as well imposes a homogeneous real-linear system on the phase variables

    gamma_ij = (1 - e^{i(phi_i - phi_j)}) * sqrt(lambda_i lambda_j),  i < j.

A trivial null space certifies uniqueness among pure states; a nontrivial one
is searched for an explicit second state with the same marginals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations, product

import numpy as np

from .marginals import MarginalFamily, compute_deck, deck_distance
from .schmidt import (GAP_TOL, RANK_TOL, GenericityReport, SchmidtDecomposition,
                      classify_genericity, phase_twist, schmidt_decompose)
from .states import (PartyStructure, PureState, check_subset,
                     fidelity_up_to_phase)

# Singular values below SVD_TOL times the largest count as zero when deciding
# the rank of the assembled phase system.
SVD_TOL = 1e-9
DECK_TOL = 1e-9
# A candidate second state must have fidelity-up-to-phase below 1 - DISTINCT_TOL
# with the input to count as a genuine counterexample.
DISTINCT_TOL = 1e-6

TRACE_IDENTITY_TOL = 1e-10


@dataclass(frozen=True)
class CrossCutSpec:
    """Four disjoint blocks covering {1..N}; cuts (AB|CD) and (AC|BD).

    Individual blocks may be empty as long as the four unions AB, CD, AC and
    BD are all nonempty, i.e. both cuts are genuine bipartitions.
    """

    block_a: tuple[int, ...]
    block_b: tuple[int, ...]
    block_c: tuple[int, ...]
    block_d: tuple[int, ...]
    num_parties: int

    def __post_init__(self):
        blocks = []
        for name in ("block_a", "block_b", "block_c", "block_d"):
            block = check_subset(getattr(self, name), self.num_parties,
                                 allow_empty=True)
            object.__setattr__(self, name, block)
            blocks.append(block)
        flat = [p for block in blocks for p in block]
        if len(set(flat)) != len(flat):
            raise ValueError("blocks A, B, C, D must be pairwise disjoint")
        if set(flat) != set(range(1, self.num_parties + 1)):
            raise ValueError("blocks must cover all parties")
        for pair, label in ((self.ab, "AB"), (self.cd, "CD"),
                            (self.ac, "AC"), (self.bd, "BD")):
            if not pair:
                raise ValueError(f"union {label} must be nonempty")

    @classmethod
    def from_blocks(cls, a, b, c, d) -> "CrossCutSpec":
        flat = list(a) + list(b) + list(c) + list(d)
        return cls(tuple(a), tuple(b), tuple(c), tuple(d), len(flat))

    @classmethod
    def parse(cls, text: str, num_parties: int | None = None) -> "CrossCutSpec":
        """Parse 'A=1,2;B=3;C=4;D=5,6' (an empty block is 'B=')."""
        blocks = {"A": (), "B": (), "C": (), "D": ()}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            if "=" not in chunk:
                raise ValueError(f"bad block chunk {chunk!r}, expected NAME=parties")
            name, _, parties = chunk.partition("=")
            name = name.strip().upper()
            if name not in blocks:
                raise ValueError(f"unknown block {name!r}")
            blocks[name] = tuple(int(p) for p in parties.split(",") if p.strip())
        n = num_parties
        if n is None:
            n = sum(len(v) for v in blocks.values())
        return cls(blocks["A"], blocks["B"], blocks["C"], blocks["D"], n)

    @property
    def ab(self) -> tuple[int, ...]:
        return tuple(sorted(self.block_a + self.block_b))

    @property
    def cd(self) -> tuple[int, ...]:
        return tuple(sorted(self.block_c + self.block_d))

    @property
    def ac(self) -> tuple[int, ...]:
        return tuple(sorted(self.block_a + self.block_c))

    @property
    def bd(self) -> tuple[int, ...]:
        return tuple(sorted(self.block_b + self.block_d))

    def block_dims(self, structure: PartyStructure) -> tuple[int, int, int, int]:
        return (structure.subset_dim(self.block_a),
                structure.subset_dim(self.block_b),
                structure.subset_dim(self.block_c),
                structure.subset_dim(self.block_d))

    def verification_family(self) -> MarginalFamily:
        """The four cut marginals AB, CD, AC, BD (deduplicated, in that order)."""
        subsets = []
        for s in (self.ab, self.cd, self.ac, self.bd):
            if s not in subsets:
                subsets.append(s)
        return MarginalFamily(self.num_parties, tuple(subsets))


def _split_factor(basis: np.ndarray, parties: tuple[int, ...],
                  first: tuple[int, ...], structure: PartyStructure) -> np.ndarray:
    """Reshape factor-space basis rows to (rank, dim_first, dim_rest).

    `parties` are the factor's parties in ascending order (the axis order of
    the Schmidt basis vectors); `first` is the sub-block pulled to the front.
    """
    rank = basis.shape[0]
    dims = [structure.local_dims[p - 1] for p in parties]
    first_pos = [parties.index(p) for p in first]
    rest_pos = [i for i in range(len(parties)) if i not in first_pos]
    d_first = math.prod(dims[i] for i in first_pos) if first_pos else 1
    d_rest = math.prod(dims[i] for i in rest_pos) if rest_pos else 1
    tensor = basis.reshape([rank] + dims)
    perm = [0] + [i + 1 for i in first_pos] + [i + 1 for i in rest_pos]
    return tensor.transpose(perm).reshape(rank, d_first, d_rest)


@dataclass(frozen=True)
class CrossCutMatrices:
    """Cross-block overlap operators for every Schmidt index pair.

    q[i, j] = Tr_B |i><j|_AB   (dim d_A), l[i, j] = Tr_A |i><j|_AB (dim d_B),
    p[i, j] = Tr_D |i><j|_CD   (dim d_C), m[i, j] = Tr_C |i><j|_CD (dim d_D).
    """

    spec: CrossCutSpec
    rank: int
    q: np.ndarray
    p: np.ndarray
    l: np.ndarray
    m: np.ndarray

    @property
    def block_dims(self) -> tuple[int, int, int, int]:
        return (self.q.shape[-1], self.l.shape[-1],
                self.p.shape[-1], self.m.shape[-1])


def build_cross_matrices(dec: SchmidtDecomposition,
                         spec: CrossCutSpec) -> CrossCutMatrices:
    """Overlap operators of the Schmidt bases across the secondary cut."""
    if dec.left_parties != spec.ab or dec.right_parties != spec.cd:
        raise ValueError(
            f"decomposition cut {dec.left_parties}|{dec.right_parties} does not "
            f"match the primary cut {spec.ab}|{spec.cd}"
        )
    structure = dec.structure
    # Left factor split as A (rows) x B (columns), right factor as C x D.
    u = _split_factor(dec.left_basis, spec.ab, spec.block_a, structure)
    v = _split_factor(dec.right_basis, spec.cd, spec.block_c, structure)
    q = np.einsum("iak,jbk->ijab", u, u.conj())
    l = np.einsum("ika,jkb->ijab", u, u.conj())
    p = np.einsum("iak,jbk->ijab", v, v.conj())
    m = np.einsum("ika,jkb->ijab", v, v.conj())
    eye = np.eye(dec.rank)
    for name, mats in (("Q", q), ("L", l), ("P", p), ("M", m)):
        traces = np.trace(mats, axis1=2, axis2=3)
        if np.max(np.abs(traces - eye)) > TRACE_IDENTITY_TOL:
            raise ValueError(f"trace identity violated for {name} blocks")
        adj_err = np.max(np.abs(mats - mats.transpose(1, 0, 3, 2).conj()))
        if adj_err > TRACE_IDENTITY_TOL:
            raise ValueError(f"adjoint identity violated for {name} blocks")
    for arr in (q, l, p, m):
        arr.setflags(write=False)
    return CrossCutMatrices(spec, dec.rank, q, p, l, m)


@dataclass(frozen=True)
class GammaSystem:
    """Real homogeneous system over (Re gamma_ij, Im gamma_ij), i < j.

    Column 2t holds Re gamma for pair `pairs[t]`, column 2t+1 holds Im gamma.
    gamma_ii = 0 and gamma_ji = conj(gamma_ij) are eliminated structurally, so
    only the i < j entries appear.  The zero vector always solves the system.
    """

    rank_r: int
    pairs: tuple[tuple[int, int], ...]
    matrix: np.ndarray
    equation_counts: dict

    @property
    def num_complex_variables(self) -> int:
        return len(self.pairs)

    @property
    def num_real_variables(self) -> int:
        return 2 * len(self.pairs)

    @property
    def num_complex_equations(self) -> int:
        return self.matrix.shape[0] // 2


def expected_equation_counts(structure: PartyStructure,
                             spec: CrossCutSpec) -> dict:
    """Closed-form complex-equation counts for a cross-cut specification."""
    da, db, dc, dd = spec.block_dims(structure)
    return {
        "ac": math.comb(da, 2) * (dc * dc - 1),
        "bd": math.comb(db, 2) * (dd * dd - 1),
    }


def _real_rows(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Two real rows for the complex equation sum gamma*u + conj(gamma)*v = 0.

    `u` and `v` have shape (n_equations, n_pairs); the result interleaves
    (Re gamma, Im gamma) coefficient columns and stacks (Re, Im) equation rows.
    """
    n_eq, n_pairs = u.shape
    rows = np.empty((2 * n_eq, 2 * n_pairs), dtype=float)
    rows[0::2, 0::2] = (u + v).real
    rows[0::2, 1::2] = (v - u).imag
    rows[1::2, 0::2] = (u + v).imag
    rows[1::2, 1::2] = (u - v).real
    return rows


def assemble_gamma_system(matrices: CrossCutMatrices,
                          spec: CrossCutSpec | None = None) -> GammaSystem:
    """Harvest the entry equations of the two secondary-cut marginal matches.

    For each off-diagonal block (a, b), a < b, of the Kronecker products
    Q (x) P and L (x) M, all entries are kept except one diagonal entry per
    block: the block's diagonal entries sum to zero because the off-diagonal
    overlap operators are traceless, so one of them is redundant.
    """
    if spec is None:
        spec = matrices.spec
    elif spec != matrices.spec:
        raise ValueError("spec does not match the one the matrices were built for")
    rank = matrices.rank
    pairs = tuple(combinations(range(rank), 2))
    n_pairs = len(pairs)
    blocks = []  # (outer, inner) matrix grids per source
    counts = {}
    for label, outer, inner in (("ac", matrices.q, matrices.p),
                                ("bd", matrices.l, matrices.m)):
        d_out = outer.shape[-1]
        d_in = inner.shape[-1]
        rows_u = []
        rows_v = []
        if n_pairs:
            ii = np.array([i for i, _ in pairs])
            jj = np.array([j for _, j in pairs])
            outer_ij = outer[ii, jj]          # (n_pairs, d_out, d_out)
            outer_ji_conj = outer[ii, jj].transpose(0, 2, 1).conj()
            inner_ij = inner[ii, jj]          # (n_pairs, d_in, d_in)
            inner_swap_conj = inner[ii, jj].transpose(0, 2, 1).conj()
        for a, b in combinations(range(d_out), 2):
            # keep all (c, e) entries of this block except the last diagonal one
            keep = [(c, e) for c in range(d_in) for e in range(d_in)
                    if (c, e) != (d_in - 1, d_in - 1)]
            if not n_pairs:
                rows_u.append(np.zeros((len(keep), 0)))
                rows_v.append(np.zeros((len(keep), 0)))
                continue
            u_block = outer_ij[:, a, b][None, :] * np.stack(
                [inner_ij[:, c, e] for c, e in keep])
            v_block = outer_ji_conj[:, a, b][None, :] * np.stack(
                [inner_swap_conj[:, c, e] for c, e in keep])
            rows_u.append(u_block)
            rows_v.append(v_block)
        if rows_u:
            u_all = np.concatenate(rows_u, axis=0)
            v_all = np.concatenate(rows_v, axis=0)
        else:
            u_all = np.zeros((0, n_pairs), dtype=complex)
            v_all = np.zeros((0, n_pairs), dtype=complex)
        counts[label] = u_all.shape[0]
        blocks.append((u_all, v_all))
    u_total = np.concatenate([b[0] for b in blocks], axis=0)
    v_total = np.concatenate([b[1] for b in blocks], axis=0)
    matrix = _real_rows(u_total, v_total)
    matrix.setflags(write=False)
    return GammaSystem(rank, pairs, matrix, counts)


@dataclass(frozen=True)
class NullSpaceResult:
    null_dim: int
    basis: np.ndarray | None          # (num_real_variables, null_dim), orthonormal
    singular_values: np.ndarray


def decide_null_space(system: GammaSystem, *,
                      svd_tol: float = SVD_TOL) -> NullSpaceResult:
    """Numerical null space of the assembled system by SVD thresholding."""
    mat = system.matrix
    n_cols = mat.shape[1]
    if n_cols == 0:
        return NullSpaceResult(0, None, np.zeros(0))
    if mat.shape[0] == 0:
        return NullSpaceResult(n_cols, np.eye(n_cols), np.zeros(0))
    _, s, vt = np.linalg.svd(mat, full_matrices=True)
    if s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > svd_tol * s[0]))
    null_dim = n_cols - rank
    basis = vt[rank:].T.copy() if null_dim > 0 else None
    if basis is not None:
        basis.setflags(write=False)
    return NullSpaceResult(null_dim, basis, s)


class UdpStatus(str, Enum):
    CERTIFIED_UDP = "CERTIFIED_UDP"
    NOT_UDP_WITNESSED = "NOT_UDP_WITNESSED"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class UdpVerdict:
    """Outcome of a cross-cut uniqueness analysis.

    CERTIFIED_UDP is only claimed together with a trivial null space and full
    genericity; NOT_UDP_WITNESSED always carries a verified second state.
    """

    status: UdpStatus
    null_dim: int
    genericity: GenericityReport
    equation_counts: dict
    witness: PureState | None = None
    witness_deck_distance: float | None = None
    witness_fidelity: float | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        if self.status == UdpStatus.CERTIFIED_UDP:
            if self.null_dim != 0 or not self.genericity.generic:
                raise ValueError("certified verdict requires trivial null space "
                                 "and a generic decomposition")
        if self.status == UdpStatus.NOT_UDP_WITNESSED and self.witness is None:
            raise ValueError("witnessed verdict requires a witness state")


def _gamma_vector(phases: np.ndarray, lambdas: np.ndarray,
                  pairs: tuple[tuple[int, int], ...]) -> np.ndarray:
    """Interleaved (Re, Im) gamma vector for a phase assignment."""
    coeff = np.sqrt(lambdas)
    gamma = np.empty(2 * len(pairs))
    for t, (i, j) in enumerate(pairs):
        g = (1.0 - np.exp(1j * (phases[i] - phases[j]))) * coeff[i] * coeff[j]
        gamma[2 * t] = g.real
        gamma[2 * t + 1] = g.imag
    return gamma


def _phase_candidates(rank: int, rng: np.random.Generator,
                      *, max_enumerated: int = 12, n_random: int = 64):
    """Sign patterns first (phases in {0, pi}), then random phase vectors."""
    if rank <= max_enumerated:
        for bits in product((0.0, math.pi), repeat=rank - 1):
            phases = np.array((0.0,) + bits)
            if not np.any(phases):
                continue
            yield phases
    for _ in range(n_random):
        phases = rng.uniform(0.0, 2.0 * math.pi, size=rank)
        phases[0] = 0.0
        yield phases


def _search_phase_witness(state, dec, system, null, family, *, deck_tol,
                          distinct_tol, seed, residual_tol=1e-7,
                          max_verifications=16):
    """Look for phases whose gamma image lies in the null space and whose
    twisted state verifiably shares the requested deck."""
    lambdas = dec.lambdas
    rng = np.random.default_rng(seed)
    basis = null.basis
    full_null = null.null_dim == system.num_real_variables
    candidates = []
    for phases in _phase_candidates(dec.rank, rng):
        gamma = _gamma_vector(phases, lambdas, system.pairs)
        norm = np.linalg.norm(gamma)
        if norm < 1e-14:
            continue
        if full_null:
            residual = 0.0
        elif basis is None:
            continue
        else:
            residual = float(np.linalg.norm(gamma - basis @ (basis.T @ gamma)) / norm)
        if residual > residual_tol:
            continue
        predicted_fid = abs(np.sum(lambdas * np.exp(1j * phases)))
        candidates.append((residual, predicted_fid, phases))
    candidates.sort(key=lambda item: (item[0], item[1]))
    reference = compute_deck(state, family)
    for residual, _, phases in candidates[:max_verifications]:
        twisted = phase_twist(dec, phases)
        dist = deck_distance(reference, compute_deck(twisted, family))
        fid = fidelity_up_to_phase(state, twisted)
        if dist <= deck_tol and fid < 1.0 - distinct_tol:
            return twisted, dist, fid
    return None


def certify_udp(state: PureState, spec: CrossCutSpec,
                family: MarginalFamily | None = None, *,
                svd_tol: float = SVD_TOL, deck_tol: float = DECK_TOL,
                gap_tol: float = GAP_TOL, rank_tol: float = RANK_TOL,
                distinct_tol: float = DISTINCT_TOL,
                seed: int = 0) -> UdpVerdict:
    """Three-valued uniqueness verdict for `state` under a cross-cut spec.

    `family` is the marginal family any emitted witness is verified against;
    it defaults to the four cut marginals AB, CD, AC, BD.
    """
    if spec.num_parties != state.structure.num_parties:
        raise ValueError("spec covers a different number of parties")
    if family is None:
        family = spec.verification_family()
    dec = schmidt_decompose(state, spec.ab, rank_tol=rank_tol)
    genericity = classify_genericity(dec, gap_tol=gap_tol)
    matrices = build_cross_matrices(dec, spec)
    system = assemble_gamma_system(matrices)
    null = decide_null_space(system, svd_tol=svd_tol)
    counts = dict(system.equation_counts)
    counts["complex_variables"] = system.num_complex_variables
    counts["complex_equations"] = system.num_complex_equations
    notes = []
    if dec.rank == 1:
        notes.append("rank-1 primary cut: the state is a product across AB|CD "
                     "and is already determined by that cut's marginals")
    if null.null_dim == 0:
        if genericity.generic:
            status = UdpStatus.CERTIFIED_UDP
        else:
            status = UdpStatus.INCONCLUSIVE
            if not genericity.full_rank:
                notes.append("phase system has trivial null space but the cut "
                             "is rank deficient; phase family may not exhaust "
                             "all competitors")
            if not genericity.distinct_spectrum:
                notes.append("degenerate Schmidt spectrum; phase family may "
                             "not exhaust all competitors")
        return UdpVerdict(status, null.null_dim, genericity, counts,
                          notes=tuple(notes))
    found = _search_phase_witness(state, dec, system, null, family,
                                  deck_tol=deck_tol, distinct_tol=distinct_tol,
                                  seed=seed)
    if found is None:
        notes.append("nontrivial null space but no verified phase witness found")
        return UdpVerdict(UdpStatus.INCONCLUSIVE, null.null_dim, genericity,
                          counts, notes=tuple(notes))
    witness, dist, fid = found
    return UdpVerdict(UdpStatus.NOT_UDP_WITNESSED, null.null_dim, genericity,
                      counts, witness=witness, witness_deck_distance=dist,
                      witness_fidelity=fid, notes=tuple(notes))


# ---------------------------------------------------------------------------
# Statistical check that the cross-block overlap entries carry exactly four
# linear dependences (one vanishing trace per operator family).
# ---------------------------------------------------------------------------

def _haar_orthonormal_pair(dim: int, rng: np.random.Generator):
    z = rng.standard_normal((2, dim)) + 1j * rng.standard_normal((2, dim))
    v1 = z[0] / np.linalg.norm(z[0])
    v2 = z[1] - np.vdot(v1, z[1]) * v1
    v2 /= np.linalg.norm(v2)
    return v1, v2


@dataclass(frozen=True)
class OverlapDependenceReport:
    entry_count: int
    measured_rank: int
    predicted_rank: int
    trials: int

    @property
    def consistent(self) -> bool:
        return self.measured_rank == self.predicted_rank


def verify_overlap_dependences(structure: PartyStructure, spec: CrossCutSpec,
                               trials: int, seed,
                               *, rank_threshold: float = 1e-8
                               ) -> OverlapDependenceReport:
    """Sample random orthonormal basis pairs and measure the rank of the
    stacked (Q, L, P, M) entry tuples.

    Each sampled tuple satisfies the four trace-zero identities, so with
    enough samples the stack has rank T - 4 (T = total entry count) exactly
    when no further dependence exists.
    """
    da, db, dc, dd = spec.block_dims(structure)
    entry_count = da * da + db * db + dc * dc + dd * dd
    if trials < entry_count:
        raise ValueError(f"need at least {entry_count} trials, got {trials}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    rows = np.empty((trials, entry_count), dtype=complex)
    for t in range(trials):
        u1, u2 = _haar_orthonormal_pair(da * db, rng)
        v1, v2 = _haar_orthonormal_pair(dc * dd, rng)
        u1 = u1.reshape(da, db)
        u2 = u2.reshape(da, db)
        v1 = v1.reshape(dc, dd)
        v2 = v2.reshape(dc, dd)
        q = u1 @ u2.conj().T
        l = u1.T @ u2.conj()
        p = v1 @ v2.conj().T
        m = v1.T @ v2.conj()
        rows[t] = np.concatenate([q.ravel(), l.ravel(), p.ravel(), m.ravel()])
    s = np.linalg.svd(rows, compute_uv=False)
    measured = int(np.sum(s > rank_threshold * s[0]))
    return OverlapDependenceReport(entry_count, measured, entry_count - 4, trials)
