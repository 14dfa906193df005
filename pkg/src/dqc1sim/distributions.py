"""Probability distributions over measured qubits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .config import PROB_SUM_TOL, ZERO_PROB_TOL
from .errors import ContractError, PostselectionImpossibleError


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Exact distribution over an ordered tuple of measured qubits.

    Keys of `probs` are bitstrings whose i-th character is the outcome of
    measured_qubits[i].  Probabilities must be non-negative and sum to one
    within tolerance; tiny negative rounding dust is clamped to zero.
    """

    measured_qubits: tuple[int, ...]
    probs: dict[str, float]

    def __post_init__(self):
        object.__setattr__(self, "measured_qubits", tuple(int(q) for q in self.measured_qubits))
        k = len(self.measured_qubits)
        if k == 0:
            raise ContractError("a distribution needs at least one measured qubit")
        if len(set(self.measured_qubits)) != k:
            raise ContractError("measured qubits must be distinct")
        cleaned: dict[str, float] = {}
        for key, p in self.probs.items():
            if len(key) != k or set(key) - {"0", "1"}:
                raise ContractError(f"outcome key {key!r} does not match {k} measured qubits")
            p = float(p)
            if p < -PROB_SUM_TOL or p > 1.0 + PROB_SUM_TOL:
                raise ContractError(f"probability of {key!r} out of range: {p}")
            cleaned[key] = max(p, 0.0)
        total = sum(cleaned.values())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ContractError(f"probabilities sum to {total}, not 1")
        object.__setattr__(self, "probs", cleaned)

    def __eq__(self, other):
        if not isinstance(other, OutcomeDistribution):
            return NotImplemented
        return self.measured_qubits == other.measured_qubits and self.probs == other.probs

    def prob(self, key: str) -> float:
        return self.probs.get(key, 0.0)

    def marginal(self, subset: Sequence[int]) -> "OutcomeDistribution":
        """Marginal onto `subset`, an ordered list of already-measured qubits."""
        subset = tuple(int(q) for q in subset)
        positions = []
        for q in subset:
            if q not in self.measured_qubits:
                raise ContractError(f"qubit {q} is not measured in this distribution")
            positions.append(self.measured_qubits.index(q))
        out: dict[str, float] = {}
        for key, p in self.probs.items():
            sub = "".join(key[i] for i in positions)
            out[sub] = out.get(sub, 0.0) + p
        return OutcomeDistribution(subset, out)

    def condition(
        self, assignments: Mapping[int, int], keep_assigned: bool = False
    ) -> tuple["OutcomeDistribution", float]:
        """Condition on the given qubit -> bit assignments.

        Returns the renormalized distribution and the probability of the
        conditioning event.  The assigned qubits are dropped from the result
        unless keep_assigned is set, in which case keys keep their full
        length and non-matching outcomes carry probability zero.
        """
        assignments = {int(q): int(b) for q, b in assignments.items()}
        if not assignments:
            raise ContractError("empty postselection assignment")
        for q, b in assignments.items():
            if q not in self.measured_qubits:
                raise ContractError(f"postselected qubit {q} is not measured")
            if b not in (0, 1):
                raise ContractError(f"postselection bit for qubit {q} must be 0 or 1")
        fixed = {self.measured_qubits.index(q): str(b) for q, b in assignments.items()}
        kept_positions = [i for i in range(len(self.measured_qubits)) if i not in fixed]
        if not keep_assigned and not kept_positions:
            raise ContractError("postselection leaves no measured qubits")

        event = 0.0
        selected: dict[str, float] = {}
        for key, p in self.probs.items():
            if any(key[i] != b for i, b in fixed.items()):
                continue
            event += p
            sub = key if keep_assigned else "".join(key[i] for i in kept_positions)
            selected[sub] = selected.get(sub, 0.0) + p
        if event < ZERO_PROB_TOL:
            raise PostselectionImpossibleError(
                f"postselection {assignments} has probability {event}"
            )
        probs = {key: p / event for key, p in selected.items()}
        if keep_assigned:
            qubits = self.measured_qubits
            for key in self.probs:
                probs.setdefault(key, 0.0)
        else:
            qubits = tuple(self.measured_qubits[i] for i in kept_positions)
        return OutcomeDistribution(qubits, probs), event

    def total_variation(self, other: "OutcomeDistribution") -> float:
        if set(self.measured_qubits) != set(other.measured_qubits):
            raise ContractError("distributions measure different qubit sets")
        aligned = other
        if other.measured_qubits != self.measured_qubits:
            aligned = other.marginal(self.measured_qubits)
        keys = set(self.probs) | set(aligned.probs)
        return 0.5 * sum(abs(self.prob(k) - aligned.prob(k)) for k in keys)
