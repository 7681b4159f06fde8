"""Schmidt decomposition along a bipartition, genericity tests, phase twists."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .states import PartyStructure, PureState, check_subset, complement

# Singular values below RANK_TOL times the largest are treated as zero.
RANK_TOL = 1e-10
# Squared coefficients closer than GAP_TOL are treated as degenerate.
GAP_TOL = 1e-8


def _axis_order(structure: PartyStructure, left: tuple[int, ...],
                right: tuple[int, ...]) -> list[int]:
    return [p - 1 for p in left] + [p - 1 for p in right]


@dataclass(frozen=True)
class SchmidtDecomposition:
    """State written as sum_i c_i |left_i> |right_i| along a bipartition.

    `coefficients` are the strictly positive singular values c_i = sqrt(lambda_i)
    in decreasing order; `left_basis[i]` / `right_basis[i]` are the orthonormal
    factor vectors, each over the subset's parties in ascending party order.
    """

    structure: PartyStructure
    left_parties: tuple[int, ...]
    right_parties: tuple[int, ...]
    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.coefficients)

    @property
    def lambdas(self) -> np.ndarray:
        """Squared Schmidt coefficients (eigenvalues of either cut marginal)."""
        return self.coefficients ** 2

    @property
    def dim_left(self) -> int:
        return self.structure.subset_dim(self.left_parties)

    @property
    def dim_right(self) -> int:
        return self.structure.subset_dim(self.right_parties)

    def reconstruct(self, phases=None) -> PureState:
        """Rebuild sum_i e^{i phi_i} c_i |left_i>|right_i> in original party order."""
        coeffs = self.coefficients.astype(np.complex128)
        if phases is not None:
            phases = np.asarray(phases, dtype=float)
            if phases.shape != (self.rank,):
                raise ValueError(
                    f"expected {self.rank} phases, got shape {phases.shape}"
                )
            coeffs = coeffs * np.exp(1j * phases)
        mat = (self.left_basis.T * coeffs) @ self.right_basis
        dims_perm = ([self.structure.local_dims[p - 1] for p in self.left_parties]
                     + [self.structure.local_dims[p - 1] for p in self.right_parties])
        order = _axis_order(self.structure, self.left_parties, self.right_parties)
        inverse = np.argsort(order)
        vec = mat.reshape(dims_perm).transpose(inverse).reshape(-1)
        return PureState.from_amplitudes(self.structure, vec, normalize=True)


def _canonical_phase(left: np.ndarray, right: np.ndarray, tol: float):
    """Rotate each basis pair so the left vector's first nonzero entry is real > 0."""
    for i in range(left.shape[0]):
        idx = np.flatnonzero(np.abs(left[i]) > tol)
        if idx.size == 0:
            continue
        phase = left[i][idx[0]] / abs(left[i][idx[0]])
        left[i] = left[i] / phase
        right[i] = right[i] * phase
    return left, right


def _tie_break_degenerate(coeffs, left, right, scale):
    """Deterministic order among (numerically) equal singular values."""
    order = list(range(len(coeffs)))
    start = 0
    while start < len(coeffs):
        stop = start + 1
        while stop < len(coeffs) and abs(coeffs[stop] - coeffs[start]) <= 1e-12 * scale:
            stop += 1
        if stop - start > 1:
            block = sorted(
                order[start:stop],
                key=lambda i: tuple((round(z.real, 10), round(z.imag, 10))
                                    for z in left[i]),
            )
            order[start:stop] = block
        start = stop
    order = np.asarray(order)
    return coeffs[order], left[order], right[order]


def schmidt_decompose(state: PureState, cut, *,
                      rank_tol: float = RANK_TOL) -> SchmidtDecomposition:
    """Schmidt decomposition of `state` along the bipartition (cut | complement)."""
    structure = state.structure
    left = check_subset(cut, structure.num_parties)
    right = complement(left, structure.num_parties)
    if not right:
        raise ValueError("cut must be a proper subset of the parties")
    dim_left = structure.subset_dim(left)
    dim_right = structure.subset_dim(right)
    mat = (state.as_tensor()
           .transpose(_axis_order(structure, left, right))
           .reshape(dim_left, dim_right))
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    rank = int(np.sum(s > rank_tol * s[0]))
    coeffs = s[:rank].copy()
    left_basis = np.ascontiguousarray(u[:, :rank].T)
    right_basis = vh[:rank].copy()
    left_basis, right_basis = _canonical_phase(left_basis, right_basis, rank_tol * s[0])
    coeffs, left_basis, right_basis = _tie_break_degenerate(
        coeffs, left_basis, right_basis, s[0])
    for arr in (coeffs, left_basis, right_basis):
        arr.setflags(write=False)
    return SchmidtDecomposition(structure, left, right, coeffs, left_basis, right_basis)


@dataclass(frozen=True)
class GenericityReport:
    """Whether a decomposition has full rank and a nondegenerate spectrum."""

    full_rank: bool
    distinct_spectrum: bool
    min_gap: float
    rank: int

    @property
    def generic(self) -> bool:
        return self.full_rank and self.distinct_spectrum


def classify_genericity(dec: SchmidtDecomposition, ambient_rank: int | None = None,
                        *, gap_tol: float = GAP_TOL) -> GenericityReport:
    """Full-rank / distinct-spectrum report for a decomposition.

    `ambient_rank` defaults to min(dim_left, dim_right), the largest rank the
    cut admits.
    """
    if ambient_rank is None:
        ambient_rank = min(dec.dim_left, dec.dim_right)
    lambdas = dec.lambdas
    if dec.rank >= 2:
        min_gap = float(np.min(np.abs(np.diff(lambdas))))
    else:
        min_gap = math.inf
    return GenericityReport(
        full_rank=dec.rank == ambient_rank,
        distinct_spectrum=min_gap > gap_tol,
        min_gap=min_gap,
        rank=dec.rank,
    )


def phase_twist(dec: SchmidtDecomposition, phases) -> PureState:
    """Apply per-coefficient phases; both cut marginals are left unchanged."""
    return dec.reconstruct(phases)
