"""N-qudit pure states with an explicit party structure.

Conventions used throughout the package:

* Parties are labeled 1..N.  Party 1 is the *most significant* digit of the
  mixed-radix basis index, i.e. the leftmost digit in a ket string like
  ``|011>``.
* Subsets of parties are sorted, duplicate-free tuples of 1-based labels.
* All state vectors are dense complex128 arrays, normalized to unit norm.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

# Product of local dimensions may not exceed this; larger systems are refused
# outright instead of silently degrading.
DIM_CAP = 65536

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


def check_subset(parties, num_parties: int, *, allow_empty: bool = False) -> tuple[int, ...]:
    """Normalize a collection of party labels to a sorted duplicate-free tuple."""
    subset = tuple(sorted(int(p) for p in parties))
    if not subset and not allow_empty:
        raise ValueError("party subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise ValueError(f"duplicate parties in subset {subset}")
    for p in subset:
        if p < 1 or p > num_parties:
            raise ValueError(f"party {p} outside 1..{num_parties}")
    return subset


def complement(subset, num_parties: int) -> tuple[int, ...]:
    """Complement of a party subset within {1..num_parties}."""
    inside = set(subset)
    return tuple(p for p in range(1, num_parties + 1) if p not in inside)


@dataclass(frozen=True)
class PartyStructure:
    """Number of parties and their local dimensions."""

    num_parties: int
    local_dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "local_dims", tuple(int(d) for d in self.local_dims))
        if self.num_parties < 1:
            raise ValueError("need at least one party")
        if len(self.local_dims) != self.num_parties:
            raise ValueError("local_dims length must equal num_parties")
        if any(d < 2 for d in self.local_dims):
            raise ValueError("every local dimension must be at least 2")
        if self.total_dim > DIM_CAP:
            raise ValueError(
                f"total dimension {self.total_dim} exceeds cap {DIM_CAP}"
            )

    @classmethod
    def uniform(cls, num_parties: int, local_dim: int) -> "PartyStructure":
        return cls(num_parties, (local_dim,) * num_parties)

    @property
    def total_dim(self) -> int:
        return math.prod(self.local_dims)

    def subset_dim(self, parties) -> int:
        parties = check_subset(parties, self.num_parties, allow_empty=True)
        return math.prod(self.local_dims[p - 1] for p in parties)

    def index_to_digits(self, index: int) -> tuple[int, ...]:
        """Big-endian mixed-radix digits of a basis index (party 1 first)."""
        if index < 0 or index >= self.total_dim:
            raise ValueError(f"basis index {index} outside 0..{self.total_dim - 1}")
        digits = []
        for d in reversed(self.local_dims):
            index, rem = divmod(index, d)
            digits.append(rem)
        return tuple(reversed(digits))

    def digits_to_index(self, digits) -> int:
        digits = tuple(int(x) for x in digits)
        if len(digits) != self.num_parties:
            raise ValueError(
                f"expected {self.num_parties} digits, got {len(digits)}"
            )
        index = 0
        for digit, d in zip(digits, self.local_dims):
            if digit < 0 or digit >= d:
                raise ValueError(f"digit {digit} out of range for local dimension {d}")
            index = index * d + digit
        return index

    def parse_basis_label(self, label: str) -> tuple[int, ...]:
        """Parse a ket label, either contiguous digits ('0121') or comma separated."""
        label = label.strip()
        if "," in label:
            parts = [s.strip() for s in label.split(",")]
        else:
            parts = list(label)
        try:
            digits = tuple(int(s) for s in parts)
        except ValueError as exc:
            raise ValueError(f"invalid basis label {label!r}") from exc
        self.digits_to_index(digits)  # range validation
        return digits

    def basis_label(self, index: int) -> str:
        digits = self.index_to_digits(index)
        if all(d <= 10 for d in self.local_dims):
            return "".join(str(x) for x in digits)
        return ",".join(str(x) for x in digits)


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Pure state given by its amplitude vector over the computational basis."""

    structure: PartyStructure
    amplitudes: np.ndarray

    def __post_init__(self):
        vec = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if vec.shape != (self.structure.total_dim,):
            raise ValueError(
                f"amplitude vector has shape {vec.shape}, "
                f"expected ({self.structure.total_dim},)"
            )
        nrm2 = float(np.vdot(vec, vec).real)
        if abs(nrm2 - 1.0) > NORM_TOL:
            raise ValueError(
                f"state not normalized: |norm^2 - 1| = {abs(nrm2 - 1.0):.3e}"
            )
        object.__setattr__(self, "amplitudes", _freeze(vec.copy()))

    @classmethod
    def from_amplitudes(cls, structure: PartyStructure, amplitudes,
                        normalize: bool = False) -> "PureState":
        vec = np.asarray(amplitudes, dtype=np.complex128)
        if normalize:
            nrm = np.linalg.norm(vec)
            if nrm == 0.0:
                raise ValueError("cannot normalize the zero vector")
            vec = vec / nrm
        return cls(structure, vec)

    @classmethod
    def basis_state(cls, structure: PartyStructure, digits) -> "PureState":
        vec = np.zeros(structure.total_dim, dtype=np.complex128)
        vec[structure.digits_to_index(digits)] = 1.0
        return cls(structure, vec)

    @classmethod
    def from_terms(cls, structure: PartyStructure, terms: dict,
                   normalize: bool = False) -> "PureState":
        """Build a state from {basis label or digit tuple: amplitude}."""
        vec = np.zeros(structure.total_dim, dtype=np.complex128)
        for key, amp in terms.items():
            digits = structure.parse_basis_label(key) if isinstance(key, str) else key
            idx = structure.digits_to_index(digits)
            vec[idx] += amp
        return cls.from_amplitudes(structure, vec, normalize=normalize)

    @property
    def num_parties(self) -> int:
        return self.structure.num_parties

    def as_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per party (party 1 = axis 0)."""
        return self.amplitudes.reshape(self.structure.local_dims)


def ghz_state(num_parties: int, local_dim: int = 2,
              alpha: complex = None, beta: complex = None) -> PureState:
    """Generalized GHZ state alpha|0..0> + beta|d-1..d-1> (balanced by default)."""
    structure = PartyStructure.uniform(num_parties, local_dim)
    if alpha is None and beta is None:
        alpha = beta = 1.0 / math.sqrt(2.0)
    vec = np.zeros(structure.total_dim, dtype=np.complex128)
    vec[0] = alpha
    vec[-1] = beta
    return PureState.from_amplitudes(structure, vec, normalize=True)


def sample_haar_state(structure: PartyStructure, seed) -> PureState:
    """Haar-random pure state: i.i.d. standard complex Gaussians, normalized.

    `seed` may be an integer or a numpy Generator; a fixed integer seed gives
    a reproducible state.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    dim = structure.total_dim
    vec = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState.from_amplitudes(structure, vec, normalize=True)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.structure != b.structure:
        raise ValueError("states live on different party structures")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity_up_to_phase(a: PureState, b: PureState) -> float:
    """max over theta of |<a| e^{i theta} |b>|, i.e. |<a|b>|."""
    return abs(inner_product(a, b))


@dataclass(frozen=True)
class Marginal:
    """Reduced density matrix of a subset of parties.

    Validated on construction: Hermitian, unit trace and positive semidefinite
    within fixed tolerances.
    """

    parties: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        parties = tuple(sorted(int(p) for p in self.parties))
        if not parties or len(set(parties)) != len(parties):
            raise ValueError("marginal parties must be a nonempty duplicate-free subset")
        mat = np.ascontiguousarray(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("marginal matrix must be square")
        herm_err = np.linalg.norm(mat - mat.conj().T)
        if herm_err > HERMITICITY_TOL:
            raise ValueError(f"marginal not Hermitian: |rho - rho^dag| = {herm_err:.3e}")
        tr_err = abs(np.trace(mat).real - 1.0) + abs(np.trace(mat).imag)
        if tr_err > TRACE_TOL:
            raise ValueError(f"marginal trace deviates from 1 by {tr_err:.3e}")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -PSD_TOL:
            raise ValueError(f"marginal has negative eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "matrix", _freeze(mat.copy()))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


# ---------------------------------------------------------------------------
# JSON serialization
#
# Format: {"num_parties": N, "local_dims": [...],
#          "amplitudes": [{"basis": "<digits, party 1 leftmost>",
#                          "re": x, "im": y}, ...],
#          "normalize": false}
# Basis strings not listed carry amplitude zero.
# ---------------------------------------------------------------------------

def state_to_json_dict(state: PureState, *, drop_zeros: bool = True) -> dict:
    entries = []
    for idx, amp in enumerate(state.amplitudes):
        if drop_zeros and amp == 0:
            continue
        entries.append({
            "basis": state.structure.basis_label(idx),
            "re": float(amp.real),
            "im": float(amp.imag),
        })
    return {
        "num_parties": state.structure.num_parties,
        "local_dims": list(state.structure.local_dims),
        "amplitudes": entries,
    }


def state_from_json_dict(data: dict, *, normalize: bool | None = None) -> PureState:
    try:
        num_parties = int(data["num_parties"])
        local_dims = [int(d) for d in data["local_dims"]]
        raw_amps = data["amplitudes"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed state record: {exc}") from exc
    structure = PartyStructure(num_parties, local_dims)
    if normalize is None:
        normalize = bool(data.get("normalize", False))
    vec = np.zeros(structure.total_dim, dtype=np.complex128)
    seen = set()
    for entry in raw_amps:
        try:
            basis = entry["basis"]
            amp = complex(float(entry.get("re", 0.0)), float(entry.get("im", 0.0)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed amplitude entry {entry!r}") from exc
        idx = structure.digits_to_index(structure.parse_basis_label(basis))
        if idx in seen:
            raise ValueError(f"duplicate basis entry {basis!r}")
        seen.add(idx)
        vec[idx] = amp
    if not np.any(vec):
        raise ValueError("state record has zero amplitude vector")
    return PureState.from_amplitudes(structure, vec, normalize=normalize)


def load_state(source, *, normalize: bool | None = None) -> PureState:
    """Load a state from a JSON dict, a JSON text string, or a file path."""
    if isinstance(source, dict):
        return state_from_json_dict(source, normalize=normalize)
    if isinstance(source, Path):
        text = source.read_text()
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            text = Path(text).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed state JSON: {exc}") from exc
    return state_from_json_dict(data, normalize=normalize)


def save_state(state: PureState, path, *, drop_zeros: bool = True) -> None:
    Path(path).write_text(json.dumps(state_to_json_dict(state, drop_zeros=drop_zeros),
                                     indent=2, sort_keys=True))
