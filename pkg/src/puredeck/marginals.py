"""Partial traces, marginal families, and decks of reduced density matrices."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .states import Marginal, PureState, check_subset, complement

# Two aligned decks are called equal when no pair of corresponding marginals
# differs by more than this in Frobenius norm.  Two orders above accumulated
# double-precision error at the sizes handled here, far below any genuine
# physical difference.
DECK_TOL = 1e-9


@dataclass(frozen=True)
class MarginalFamily:
    """Ordered, duplicate-free family of party subsets."""

    num_parties: int
    subsets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        subsets = tuple(check_subset(s, self.num_parties) for s in self.subsets)
        if len(set(subsets)) != len(subsets):
            raise ValueError("family contains duplicate subsets")
        object.__setattr__(self, "subsets", subsets)

    @classmethod
    def complete(cls, num_parties: int, k: int) -> "MarginalFamily":
        """All C(N, k) k-subsets in lexicographic order."""
        if k < 1 or k > num_parties:
            raise ValueError(f"k={k} outside 1..{num_parties}")
        return cls(num_parties, tuple(combinations(range(1, num_parties + 1), k)))

    @classmethod
    def parse(cls, num_parties: int, text: str) -> "MarginalFamily":
        """Parse 'k=<int>' (complete k-deck) or '1,2,3;4,5,6;...'."""
        text = text.strip()
        if text.startswith("k="):
            return cls.complete(num_parties, int(text[2:]))
        subsets = []
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            subsets.append(tuple(int(p) for p in chunk.split(",")))
        return cls(num_parties, tuple(subsets))

    def __len__(self) -> int:
        return len(self.subsets)

    def __iter__(self):
        return iter(self.subsets)


@dataclass(frozen=True)
class Deck:
    """The marginals of one state, aligned with a family of subsets."""

    family: MarginalFamily
    marginals: tuple[Marginal, ...]

    def __post_init__(self):
        if len(self.marginals) != len(self.family.subsets):
            raise ValueError("deck length does not match family length")
        for marg, subset in zip(self.marginals, self.family.subsets):
            if marg.parties != subset:
                raise ValueError(
                    f"marginal for {marg.parties} misaligned with subset {subset}"
                )

    def to_json_dict(self) -> dict:
        cards = []
        for marg in self.marginals:
            flat = [[float(z.real), float(z.imag)] for z in marg.matrix.ravel()]
            cards.append({"parties": list(marg.parties), "matrix": flat})
        return {"num_parties": self.family.num_parties, "marginals": cards}


def partial_trace(state: PureState, keep) -> Marginal:
    """Reduced density matrix on `keep`, tracing out the complement."""
    structure = state.structure
    keep = check_subset(keep, structure.num_parties)
    traced = complement(keep, structure.num_parties)
    keep_axes = [p - 1 for p in keep]
    traced_axes = [p - 1 for p in traced]
    dim_keep = structure.subset_dim(keep)
    dim_traced = structure.subset_dim(traced)
    mat = (state.as_tensor()
           .transpose(keep_axes + traced_axes)
           .reshape(dim_keep, dim_traced))
    rho = mat @ mat.conj().T
    return Marginal(keep, rho)


def compute_deck(state: PureState, family: MarginalFamily) -> Deck:
    if family.num_parties != state.structure.num_parties:
        raise ValueError("family defined for a different number of parties")
    return Deck(family, tuple(partial_trace(state, s) for s in family.subsets))


def deck_distance(a: Deck, b: Deck, *, unordered: bool = False) -> float:
    """Maximum Frobenius distance across aligned marginals.

    With `unordered=True` the decks are aligned by subset identity instead of
    by position; both families must then contain the same subsets.
    """
    if a.family.num_parties != b.family.num_parties:
        raise ValueError("decks defined over different party counts")
    if unordered:
        lookup = {m.parties: m for m in b.marginals}
        if set(a.family.subsets) != set(lookup):
            raise ValueError("decks cover different subset families")
        pairs = [(m, lookup[m.parties]) for m in a.marginals]
    else:
        if a.family.subsets != b.family.subsets:
            raise ValueError("decks have different (ordered) families")
        pairs = list(zip(a.marginals, b.marginals))
    dist = 0.0
    for ma, mb in pairs:
        dist = max(dist, float(np.linalg.norm(ma.matrix - mb.matrix)))
    return dist


def decks_equal(a: Deck, b: Deck, tol: float = DECK_TOL, *,
                unordered: bool = False) -> bool:
    return deck_distance(a, b, unordered=unordered) <= tol


def maximally_mixed_distance(marg: Marginal) -> float:
    """Frobenius distance of a marginal from the maximally mixed state."""
    dim = marg.dim
    return float(np.linalg.norm(marg.matrix - np.eye(dim) / dim))
