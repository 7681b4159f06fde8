"""Orthogonal arrays, packing arrays, and the states built on their rows.

An index-1 orthogonal array (or, more generally, a packing array) of strength
k <= floor(N/2) projects injectively onto every set of N-k columns.  The
superposition of its rows with arbitrary nonzero amplitudes therefore has
diagonal (N-k)-body marginals, and twisting the row phases yields a distinct
state with exactly the same complete (N-k)-deck.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .marginals import MarginalFamily, compute_deck, deck_distance
from .states import PartyStructure, PureState, fidelity_up_to_phase

DECK_TOL = 1e-10
DISTINCT_TOL = 1e-6
# Amplitudes this small (after normalization) void the all-nonzero hypothesis.
AMP_FLOOR = 1e-12


def _as_row_matrix(rows, levels: int) -> np.ndarray:
    mat = np.asarray(rows, dtype=int)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 1:
        raise ValueError("rows must form a nonempty 2-D integer array")
    if mat.min() < 0 or mat.max() >= levels:
        raise ValueError(f"entries must lie in 0..{levels - 1}")
    return mat


@dataclass(frozen=True)
class OaCheck:
    is_oa: bool
    index_lambda: int | None
    irredundant: bool


def verify_oa(rows, levels: int, strength: int) -> OaCheck:
    """Exhaustive check of the orthogonal-array counting property.

    Every strength-subset of columns must contain each tuple exactly
    r / levels^strength times.  Irredundancy additionally demands distinct
    rows in every (N-strength)-column subarray; an index-1 array always
    passes that check.
    """
    mat = _as_row_matrix(rows, levels)
    r, n_cols = mat.shape
    if strength < 1 or strength > n_cols:
        raise ValueError(f"strength {strength} outside 1..{n_cols}")
    lam, rem = divmod(r, levels ** strength)
    is_oa = rem == 0 and lam >= 1
    if is_oa:
        for cols in combinations(range(n_cols), strength):
            _, counts = np.unique(mat[:, cols], axis=0, return_counts=True)
            if len(counts) != levels ** strength or np.any(counts != lam):
                is_oa = False
                break
    if n_cols == strength:
        # degenerate projection onto zero columns: fall back to full-row
        # distinctness, which keeps index-1 arrays irredundant
        irredundant = len(np.unique(mat, axis=0)) == r
    else:
        irredundant = all(
            len(np.unique(mat[:, cols], axis=0)) == r
            for cols in combinations(range(n_cols), n_cols - strength)
        )
    return OaCheck(is_oa=is_oa, index_lambda=lam if is_oa else None,
                   irredundant=irredundant)


def verify_pa(rows, levels: int, strength: int) -> bool:
    """True iff every strength-column subarray has pairwise distinct rows."""
    mat = _as_row_matrix(rows, levels)
    r, n_cols = mat.shape
    if strength < 1 or strength > n_cols:
        raise ValueError(f"strength {strength} outside 1..{n_cols}")
    return all(
        len(np.unique(mat[:, cols], axis=0)) == r
        for cols in combinations(range(n_cols), strength)
    )


@dataclass(frozen=True)
class OrthogonalArray:
    """r x N array over {0..d-1}: every strength-subset of columns sees each
    tuple exactly index_lambda times.  Verified on construction by default."""

    rows: np.ndarray
    levels: int
    strength: int
    index_lambda: int

    def __post_init__(self):
        mat = _as_row_matrix(self.rows, self.levels)
        mat.setflags(write=False)
        object.__setattr__(self, "rows", mat)

    @classmethod
    def from_rows(cls, rows, levels: int, strength: int,
                  *, verify: bool = True) -> "OrthogonalArray":
        mat = _as_row_matrix(rows, levels)
        if verify:
            check = verify_oa(mat, levels, strength)
            if not check.is_oa:
                raise ValueError(
                    f"rows do not form an orthogonal array of strength {strength}"
                )
            lam = check.index_lambda
        else:
            lam = mat.shape[0] // levels ** strength
        return cls(mat, levels, strength, lam)

    @property
    def num_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def num_cols(self) -> int:
        return self.rows.shape[1]

    @property
    def irredundant(self) -> bool:
        return verify_oa(self.rows, self.levels, self.strength).irredundant


@dataclass(frozen=True)
class PackingArray:
    """r x N array over {0..d-1} where every strength-subset of columns sees
    each tuple at most once; 2 <= r <= d^strength."""

    rows: np.ndarray
    levels: int
    strength: int

    def __post_init__(self):
        mat = _as_row_matrix(self.rows, self.levels)
        mat.setflags(write=False)
        object.__setattr__(self, "rows", mat)

    @classmethod
    def from_rows(cls, rows, levels: int, strength: int,
                  *, verify: bool = True) -> "PackingArray":
        mat = _as_row_matrix(rows, levels)
        r = mat.shape[0]
        if r < 2 or r > levels ** strength:
            raise ValueError(
                f"packing array needs 2 <= r <= {levels ** strength}, got r={r}"
            )
        if verify and not verify_pa(mat, levels, strength):
            raise ValueError(
                f"rows do not form a packing array of strength {strength}"
            )
        return cls(mat, levels, strength)

    @property
    def num_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def num_cols(self) -> int:
        return self.rows.shape[1]


# The strength-2 array on nine qutrit rows whose uniform superposition has
# every 2-body marginal maximally mixed.
OA_9_4_3_2 = (
    (0, 0, 0, 0),
    (0, 1, 1, 1),
    (0, 2, 2, 2),
    (1, 0, 2, 1),
    (1, 1, 0, 2),
    (1, 2, 1, 0),
    (2, 0, 1, 2),
    (2, 1, 2, 0),
    (2, 2, 0, 1),
)


@dataclass(frozen=True)
class GeneralizedQoaState:
    """Superposition of an array's rows with explicit nonzero amplitudes."""

    array: OrthogonalArray | PackingArray
    amplitudes: np.ndarray
    state: PureState

    @property
    def num_parties(self) -> int:
        return self.array.num_cols

    @property
    def strength(self) -> int:
        return self.array.strength

    @property
    def levels(self) -> int:
        return self.array.levels

    @property
    def num_rows(self) -> int:
        return self.array.num_rows


def _rows_to_state(array, amplitudes: np.ndarray) -> PureState:
    structure = PartyStructure.uniform(array.num_cols, array.levels)
    vec = np.zeros(structure.total_dim, dtype=np.complex128)
    for row, amp in zip(array.rows, amplitudes):
        vec[structure.digits_to_index(row)] = amp
    return PureState.from_amplitudes(structure, vec, normalize=True)


def qoa_state(array, amplitudes=None, *,
              amp_floor: float = AMP_FLOOR) -> GeneralizedQoaState:
    """State sum_i a_i |row_i> from an array; uniform amplitudes by default.

    For an index-1 orthogonal array with uniform amplitudes, every
    strength-body marginal of the result is maximally mixed.
    """
    r = array.num_rows
    if len(np.unique(array.rows, axis=0)) != r:
        raise ValueError("array has repeated rows; amplitudes would merge")
    if amplitudes is None:
        amps = np.full(r, 1.0 / math.sqrt(r), dtype=np.complex128)
    else:
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if amps.shape != (r,):
            raise ValueError(f"need {r} amplitudes, got shape {amps.shape}")
    nrm = np.linalg.norm(amps)
    if nrm == 0.0:
        raise ValueError("amplitude vector is zero")
    amps = amps / nrm
    if np.min(np.abs(amps)) <= amp_floor:
        raise ValueError(
            f"all amplitudes must exceed {amp_floor} in modulus after normalization"
        )
    amps.setflags(write=False)
    return GeneralizedQoaState(array, amps, _rows_to_state(array, amps))


@dataclass(frozen=True)
class WitnessCheck:
    witness: PureState
    verified: bool
    deck_distance: float
    fidelity: float


def non_udp_witness(gstate: GeneralizedQoaState, phases, *,
                    deck_tol: float = DECK_TOL,
                    distinct_tol: float = DISTINCT_TOL,
                    allow_large_strength: bool = False) -> WitnessCheck:
    """Phase-twist the row amplitudes and verify the complete (N-k)-deck match.

    `phases` is either a single row index (that row's amplitude is negated) or
    a full phase vector.  The construction refutes uniqueness only for
    strength k <= floor(N/2); larger strengths are refused unless explicitly
    allowed.
    """
    n = gstate.num_parties
    k = gstate.strength
    if k > n // 2 and not allow_large_strength:
        raise ValueError(
            f"strength {k} exceeds floor(N/2) = {n // 2}; the deck match is "
            "only guaranteed below that (pass allow_large_strength to override)"
        )
    r = gstate.num_rows
    if isinstance(phases, (int, np.integer)):
        if phases < 0 or phases >= r:
            raise ValueError(f"row index {phases} outside 0..{r - 1}")
        vec = np.zeros(r)
        vec[phases] = math.pi
        phases = vec
    else:
        phases = np.asarray(phases, dtype=float)
        if phases.shape != (r,):
            raise ValueError(f"need {r} phases, got shape {phases.shape}")
    unit = np.exp(1j * phases)
    if np.max(np.abs(unit - unit[0])) < 1e-12:
        raise ValueError("phases are all equal; the twist is only a global phase")
    twisted = _rows_to_state(gstate.array, gstate.amplitudes * unit)
    # k == n leaves nothing to trace onto: the 0-deck is empty and trivially shared
    family = (MarginalFamily(n, ()) if k == n
              else MarginalFamily.complete(n, n - k))
    dist = deck_distance(compute_deck(gstate.state, family),
                         compute_deck(twisted, family))
    fid = fidelity_up_to_phase(gstate.state, twisted)
    verified = dist <= deck_tol and fid < 1.0 - distinct_tol
    return WitnessCheck(twisted, verified, dist, fid)


def greedy_packing_array(num_cols: int, levels: int, strength: int, *,
                         max_rows: int | None = None,
                         seed=None) -> PackingArray:
    """Greedy packing-array builder: scan candidate rows, keep those whose
    strength-tuples are all unused.

    With an integer `seed` the candidate order is shuffled; with seed=None the
    scan is lexicographic.  Stops at `max_rows` when given.
    """
    if strength < 1 or strength > num_cols:
        raise ValueError(f"strength {strength} outside 1..{num_cols}")
    total = levels ** num_cols
    if total > 300000:
        raise ValueError("candidate space too large for the greedy builder")
    order = np.arange(total)
    if seed is not None:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        order = rng.permutation(total)
    col_subsets = list(combinations(range(num_cols), strength))
    used = {cols: set() for cols in col_subsets}
    structure = PartyStructure.uniform(num_cols, levels)
    rows = []
    for idx in order:
        digits = structure.index_to_digits(int(idx))
        keys = [tuple(digits[c] for c in cols) for cols in col_subsets]
        if any(key in used[cols] for cols, key in zip(col_subsets, keys)):
            continue
        rows.append(digits)
        for cols, key in zip(col_subsets, keys):
            used[cols].add(key)
        if max_rows is not None and len(rows) >= max_rows:
            break
    return PackingArray.from_rows(np.array(rows, dtype=int), levels, strength)


# ---------------------------------------------------------------------------
# Text format: header "OA r N d k" or "PA r N d k", then one row per line,
# written either as contiguous digits (levels <= 10) or whitespace separated.
# ---------------------------------------------------------------------------

def parse_array_text(text: str, *, verify: bool = True):
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()
             and not ln.strip().startswith("#")]
    if not lines:
        raise ValueError("empty array file")
    header = lines[0].split()
    if len(header) != 5 or header[0].upper() not in ("OA", "PA"):
        raise ValueError("header must be 'OA r N d k' or 'PA r N d k'")
    kind = header[0].upper()
    try:
        r, n_cols, levels, strength = (int(x) for x in header[1:])
    except ValueError as exc:
        raise ValueError(f"bad header numbers in {lines[0]!r}") from exc
    if len(lines) - 1 != r:
        raise ValueError(f"header promises {r} rows, file has {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split() if " " in ln or "\t" in ln else list(ln)
        row = [int(x) for x in parts]
        if len(row) != n_cols:
            raise ValueError(f"row {ln!r} has {len(row)} entries, expected {n_cols}")
        rows.append(row)
    mat = np.array(rows, dtype=int)
    if kind == "OA":
        return OrthogonalArray.from_rows(mat, levels, strength, verify=verify)
    return PackingArray.from_rows(mat, levels, strength, verify=verify)


def format_array_text(array) -> str:
    kind = "OA" if isinstance(array, OrthogonalArray) else "PA"
    lines = [f"{kind} {array.num_rows} {array.num_cols} "
             f"{array.levels} {array.strength}"]
    contiguous = array.levels <= 10
    for row in array.rows:
        lines.append("".join(str(x) for x in row) if contiguous
                     else " ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
