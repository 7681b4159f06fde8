"""Batch certification experiments and equation-counting tables."""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .certify import CrossCutSpec, UdpStatus, certify_udp, expected_equation_counts
from .states import PartyStructure, sample_haar_state


@dataclass(frozen=True)
class Tolerances:
    norm_tol: float = 1e-12
    gap_tol: float = 1e-8
    svd_tol: float = 1e-9
    deck_tol: float = 1e-9

    def __post_init__(self):
        for name in ("norm_tol", "gap_tol", "svd_tol", "deck_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1e-2:
                raise ValueError(f"{name}={value} outside (0, 1e-2)")

    def to_dict(self) -> dict:
        return {"norm_tol": self.norm_tol, "gap_tol": self.gap_tol,
                "svd_tol": self.svd_tol, "deck_tol": self.deck_tol}


@dataclass(frozen=True)
class ExperimentConfig:
    num_parties: int
    local_dim: int
    trials: int
    seed: int
    blocks: CrossCutSpec
    tolerances: Tolerances = Tolerances()
    output_path: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.blocks.num_parties != self.num_parties:
            raise ValueError("block spec covers a different number of parties")
        # dimension-cap check happens here rather than at first sample
        PartyStructure.uniform(self.num_parties, self.local_dim)

    def to_dict(self) -> dict:
        return {
            "num_parties": self.num_parties,
            "local_dim": self.local_dim,
            "trials": self.trials,
            "seed": self.seed,
            "blocks": {"A": list(self.blocks.block_a), "B": list(self.blocks.block_b),
                       "C": list(self.blocks.block_c), "D": list(self.blocks.block_d)},
            "tolerances": self.tolerances.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        """Inverse of to_dict; the JSON config file uses this layout."""
        try:
            blocks = data["blocks"]
            spec = CrossCutSpec(tuple(blocks.get("A", ())),
                                tuple(blocks.get("B", ())),
                                tuple(blocks.get("C", ())),
                                tuple(blocks.get("D", ())),
                                int(data["num_parties"]))
            tolerances = Tolerances(**data.get("tolerances", {}))
            return cls(num_parties=int(data["num_parties"]),
                       local_dim=int(data["local_dim"]),
                       trials=int(data["trials"]),
                       seed=int(data.get("seed", 0)),
                       blocks=spec,
                       tolerances=tolerances,
                       output_path=data.get("output_path"))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed experiment config: {exc}") from exc


@dataclass(frozen=True)
class ExperimentReport:
    config: dict
    trials: tuple[dict, ...]
    counts: dict
    spectral_gap: dict
    equation_counts: dict
    runtime_ms: float

    def to_json_dict(self, *, include_timing: bool = True) -> dict:
        data = {
            "config": self.config,
            "summary": {
                "trials": len(self.trials),
                "certified": self.counts["certified"],
                "witnessed": self.counts["witnessed"],
                "inconclusive": self.counts["inconclusive"],
                "min_spectral_gap": self.spectral_gap["min"],
            },
            "trials": list(self.trials),
            "counts": self.counts,
            "spectral_gap": self.spectral_gap,
            "equation_counts": self.equation_counts,
        }
        if include_timing:
            # wall clock is the only nondeterministic field; keep it isolated
            data["timing"] = {"runtime_ms": self.runtime_ms}
        return data

    def to_json(self, *, include_timing: bool = True) -> str:
        return json.dumps(self.to_json_dict(include_timing=include_timing),
                          indent=2, sort_keys=True)


def run_experiment(config: ExperimentConfig, *, verbose: bool = True) -> ExperimentReport:
    """Certify `trials` Haar-random states; trial i uses seed + i.

    The report is deterministic for a fixed config apart from the isolated
    `timing` field; it is written to `config.output_path` when that is set.
    """
    structure = PartyStructure.uniform(config.num_parties, config.local_dim)
    tol = config.tolerances
    started = time.perf_counter()
    records = []
    counts = {"certified": 0, "witnessed": 0, "inconclusive": 0}
    gaps = []
    for i in range(config.trials):
        state = sample_haar_state(structure, config.seed + i)
        verdict = certify_udp(state, config.blocks,
                              svd_tol=tol.svd_tol, deck_tol=tol.deck_tol,
                              gap_tol=tol.gap_tol, seed=config.seed + i)
        key = {UdpStatus.CERTIFIED_UDP: "certified",
               UdpStatus.NOT_UDP_WITNESSED: "witnessed",
               UdpStatus.INCONCLUSIVE: "inconclusive"}[verdict.status]
        counts[key] += 1
        gap = verdict.genericity.min_gap
        gaps.append(gap)
        records.append({
            "trial": i,
            "seed": config.seed + i,
            "status": verdict.status.value,
            "rank": verdict.genericity.rank,
            "min_spectral_gap": gap,
            "null_dim": verdict.null_dim,
            "complex_equations": verdict.equation_counts["complex_equations"],
            "complex_variables": verdict.equation_counts["complex_variables"],
        })
    runtime_ms = (time.perf_counter() - started) * 1000.0
    finite = [g for g in gaps if math.isfinite(g)]
    spectral = {
        "min": min(finite) if finite else None,
        "max": max(finite) if finite else None,
        "mean": sum(finite) / len(finite) if finite else None,
    }
    eq_expected = expected_equation_counts(structure, config.blocks)
    equation_counts = {
        "expected_ac": eq_expected["ac"],
        "expected_bd": eq_expected["bd"],
        "expected_total": eq_expected["ac"] + eq_expected["bd"],
        "observed_total": records[0]["complex_equations"],
        "variables_full_rank": math.comb(
            min(structure.subset_dim(config.blocks.ab),
                structure.subset_dim(config.blocks.cd)), 2),
    }
    report = ExperimentReport(config.to_dict(), tuple(records), counts,
                              spectral, equation_counts, runtime_ms)
    if config.output_path:
        Path(config.output_path).write_text(report.to_json())
    if verbose:
        print(f"trials={config.trials} certified={counts['certified']} "
              f"witnessed={counts['witnessed']} "
              f"inconclusive={counts['inconclusive']} "
              f"runtime_ms={runtime_ms:.1f}")
    return report


# ---------------------------------------------------------------------------
# Equation counting: direct combinatorics against the closed-form worst case.
# ---------------------------------------------------------------------------

def equations_for_split(n: int, d: int, a_size: int) -> int:
    """Complex equations for half-body blocks |A|=a, |B|=|C|=n-a, |D|=a."""
    if not 1 <= a_size <= n - 1:
        raise ValueError("block size must satisfy 1 <= |A| <= n-1")
    c_size = n - a_size
    return (math.comb(d ** a_size, 2) * (d ** (2 * c_size) - 1)
            + math.comb(d ** c_size, 2) * (d ** (2 * a_size) - 1))


def worst_case_surplus_closed_form(n: int, d: int) -> int:
    """Closed-form surplus (equations - variables) at the most unbalanced split."""
    numerator = (d ** (2 * n) - d ** (2 * n - 1) - d ** (2 * n - 2)
                 - d ** (n + 1) + d ** n + d ** (n - 1) - d ** 2 + d)
    if numerator % 2 != 0:
        raise ArithmeticError(f"closed form not even for n={n}, d={d}")
    return numerator // 2


@dataclass(frozen=True)
class CountingRow:
    n: int
    d: int
    a_size: int
    variables: int
    equations: int
    surplus: int
    is_extreme_split: bool
    closed_form_surplus: int | None
    closed_form_matches: bool | None
    nonpositive_surplus: bool

    def to_dict(self) -> dict:
        return {
            "n": self.n, "d": self.d, "a_size": self.a_size,
            "variables": self.variables, "equations": self.equations,
            "surplus": self.surplus, "is_extreme_split": self.is_extreme_split,
            "closed_form_surplus": self.closed_form_surplus,
            "closed_form_matches": self.closed_form_matches,
            "nonpositive_surplus": self.nonpositive_surplus,
        }


@dataclass(frozen=True)
class CountingSummary:
    n: int
    d: int
    min_equations: int
    minimizing_a_sizes: tuple[int, ...]
    min_at_extremes: bool

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "min_equations": self.min_equations,
                "minimizing_a_sizes": list(self.minimizing_a_sizes),
                "min_at_extremes": self.min_at_extremes}


@dataclass(frozen=True)
class CountingTable:
    rows: tuple[CountingRow, ...]
    summaries: tuple[CountingSummary, ...]

    @property
    def flagged_rows(self) -> tuple[CountingRow, ...]:
        return tuple(r for r in self.rows if r.nonpositive_surplus)

    @property
    def all_closed_forms_match(self) -> bool:
        return all(r.closed_form_matches for r in self.rows
                   if r.closed_form_matches is not None)

    def to_json_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows],
                "summaries": [s.to_dict() for s in self.summaries],
                "flagged_nonpositive": [r.to_dict() for r in self.flagged_rows],
                "all_closed_forms_match": self.all_closed_forms_match}


def check_counting_table(max_n: int, max_d: int) -> CountingTable:
    """Tabulate variables vs equations for all 2 <= n <= max_n, 2 <= d <= max_d.

    The closed-form worst-case surplus is recomputed by direct counting at the
    extreme splits; any mismatch or non-positive surplus is recorded in the
    table rather than suppressed.  Direct counting is the authority.
    """
    if max_n < 2 or max_d < 2:
        raise ValueError("need max_n >= 2 and max_d >= 2")
    rows = []
    summaries = []
    for n in range(2, max_n + 1):
        for d in range(2, max_d + 1):
            variables = math.comb(d ** n, 2)
            closed = worst_case_surplus_closed_form(n, d)
            by_a = {}
            for a_size in range(1, n):
                eqs = equations_for_split(n, d, a_size)
                by_a[a_size] = eqs
                extreme = a_size in (1, n - 1)
                surplus = eqs - variables
                rows.append(CountingRow(
                    n=n, d=d, a_size=a_size, variables=variables,
                    equations=eqs, surplus=surplus, is_extreme_split=extreme,
                    closed_form_surplus=closed if extreme else None,
                    closed_form_matches=(surplus == closed) if extreme else None,
                    nonpositive_surplus=surplus <= 0,
                ))
            min_eqs = min(by_a.values())
            minimizers = tuple(a for a, e in by_a.items() if e == min_eqs)
            summaries.append(CountingSummary(
                n=n, d=d, min_equations=min_eqs,
                minimizing_a_sizes=minimizers,
                min_at_extremes=all(a in (1, n - 1) for a in minimizers),
            ))
    return CountingTable(tuple(rows), tuple(summaries))
