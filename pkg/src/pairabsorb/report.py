"""Scenario evaluation: one flat record per run, ready for serialization."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .absorption import (
    Scenario,
    apply_absorption,
    build_initial,
    outcome_probabilities,
)
from .entanglement import (
    PRODUCT_TOLERANCE,
    build_lambda,
    hyperentanglement_report,
    lambda_spectrum_check,
    schmidt_decompose,
)
from .states import Bipartition, Ket, MixedState

#: record fields in emission order (CSV columns, JSON key order)
REPORT_FIELDS = (
    "kind",
    "p_double",
    "p_a_only",
    "p_b_only",
    "p_none",
    "entropy_initial_bits",
    "entropy_final_bits",
    "k_value",
    "lambda_spectrum_ok",
    "classification",
    "beyond_linear_regime",
)


@dataclass(frozen=True)
class ScenarioReport:
    """Everything a single scenario evaluation reports.

    ``k_value`` and ``lambda_spectrum_ok`` are None when the channel
    amplitudes are complex (the coupling-matrix route is real-only).
    For mixtures the entropy fields are branch-weighted Schmidt entropies
    and ``classification`` is the branches' unanimous verdict, or "mixed".
    """

    kind: str
    p_double: float
    p_a_only: float
    p_b_only: float
    p_none: float
    entropy_initial_bits: float
    entropy_final_bits: float
    k_value: float | None
    lambda_spectrum_ok: bool | None
    classification: str
    beyond_linear_regime: bool

    def to_record(self, coordinates: Mapping[str, float] | None = None) -> dict:
        record: dict = {"record": "scenario"}
        if coordinates is not None:
            record["coordinates"] = dict(coordinates)
        for field in REPORT_FIELDS:
            record[field] = getattr(self, field)
        return record

    @classmethod
    def from_record(cls, record: Mapping) -> "ScenarioReport":
        if record.get("record") != "scenario":
            raise ValueError(f"not a scenario record: {record.get('record')!r}")
        return cls(**{field: record[field] for field in REPORT_FIELDS})


def _state_entropy(state: Ket | MixedState) -> float:
    if isinstance(state, MixedState):
        return sum(
            w * schmidt_decompose(k, Bipartition.PARTICLES).entropy_bits
            for w, k in state.branches
        )
    return schmidt_decompose(state, Bipartition.PARTICLES).entropy_bits


def _state_classification(state: Ket | MixedState, tol: float) -> str:
    if isinstance(state, MixedState):
        verdicts = {
            hyperentanglement_report(k, tol=tol).classification for _, k in state.branches
        }
        return verdicts.pop().value if len(verdicts) == 1 else "mixed"
    return hyperentanglement_report(state, tol=tol).classification.value


def evaluate_scenario(
    scenario: Scenario, product_tol: float = PRODUCT_TOLERANCE
) -> ScenarioReport:
    """Run one scenario end to end and collect the report record."""
    initial = build_initial(scenario.kind)
    final = apply_absorption(initial, scenario.amplitudes, scenario.overlaps)
    probabilities = outcome_probabilities(final)
    if scenario.amplitudes.is_real:
        lm = build_lambda(scenario.amplitudes, scenario.overlaps)
        k_value: float | None = lm.k_value
        _, lambda_ok = lambda_spectrum_check(lm)
        lambda_spectrum_ok: bool | None = lambda_ok
    else:
        k_value = None
        lambda_spectrum_ok = None
    return ScenarioReport(
        kind=scenario.kind.value,
        p_double=probabilities.p_double,
        p_a_only=probabilities.p_a_only,
        p_b_only=probabilities.p_b_only,
        p_none=probabilities.p_none,
        entropy_initial_bits=_state_entropy(initial),
        entropy_final_bits=_state_entropy(final),
        k_value=k_value,
        lambda_spectrum_ok=lambda_spectrum_ok,
        classification=_state_classification(final, product_tol),
        beyond_linear_regime=scenario.amplitudes.beyond_linear_regime,
    )
