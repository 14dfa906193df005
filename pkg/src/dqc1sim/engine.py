"""Execution engine for one-clean-qubit circuits.

Inputs are always |0><0| on the clean qubits tensored with the maximally
mixed state on the rest.  Exact distributions come from two independent
routes: full density-matrix conjugation (dense oracle, capped) and the
uniform average over mixed-register basis states run through the pure
kernels.  Sampling is per shot: draw a mixed-register basis state, run it
pure, then draw the outcome, all from a counter-based random stream so a
(seed, shot index) pair always yields the same shot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .bits import bitstring, scatter_bits
from .circuits import Dqc1Circuit, require_valid
from .config import DEFAULT_LIMITS, Limits
from .distributions import OutcomeDistribution
from .errors import ContractError, ResourceError
from .qstate import (
    DensityMatrix,
    PureState,
    _apply_gate_kernel,
    _outcome_weights,
    evolve_density,
)


@dataclass(frozen=True)
class PostselectionSpec:
    """Required bits for a subset of the measured qubits."""

    assignments: dict[int, int]

    def __post_init__(self):
        object.__setattr__(
            self, "assignments", {int(q): int(b) for q, b in self.assignments.items()}
        )


def _as_assignments(ps: "PostselectionSpec | Mapping[int, int]") -> dict[int, int]:
    if isinstance(ps, PostselectionSpec):
        return dict(ps.assignments)
    return {int(q): int(b) for q, b in ps.items()}


@dataclass(eq=False)
class ShotRecord:
    """Outcomes of a seeded sampling run.

    outcomes[i] packs shot i's bits over measured_qubits, first measured
    qubit as the most significant bit; bitstrings() renders them.
    """

    measured_qubits: tuple[int, ...]
    outcomes: np.ndarray
    seed: int
    shot_count: int

    def bitstrings(self) -> Iterator[str]:
        k = len(self.measured_qubits)
        return (bitstring(int(o), k) for o in self.outcomes)

    def counts(self) -> dict[str, int]:
        k = len(self.measured_qubits)
        values, freq = np.unique(self.outcomes, return_counts=True)
        return {bitstring(int(v), k): int(f) for v, f in zip(values, freq)}


@dataclass(frozen=True)
class MixtureInput:
    """The input state as a uniform ensemble of computational basis states."""

    num_qubits: int
    clean_qubits: tuple[int, ...]
    mixed_qubits: tuple[int, ...]

    @property
    def size(self) -> int:
        return 1 << len(self.mixed_qubits)

    @property
    def weight(self) -> float:
        return 1.0 / self.size

    def basis_index(self, mixed_bits: int) -> int:
        packed = scatter_bits(
            np.array([mixed_bits], dtype=np.int64), self.mixed_qubits, self.num_qubits
        )
        return int(packed[0])

    def basis_states(self) -> Iterator[PureState]:
        for b in range(self.size):
            yield PureState.basis(self.num_qubits, self.basis_index(b))


def build_input(
    dc: Dqc1Circuit, form: str = "density", limits: Limits = DEFAULT_LIMITS
) -> DensityMatrix | MixtureInput:
    """Initial state: |0><0| on clean qubits, I/2 on every other qubit.

    form "density" returns the explicit matrix (capped); form "mixture"
    returns the ensemble description used by the averaging path.
    """
    require_valid(dc)
    m = dc.total_qubits
    mixture = MixtureInput(m, dc.clean_qubits, dc.mixed_qubits)
    if form == "mixture":
        return mixture
    if form != "density":
        raise ContractError(f"unknown input form {form!r}")
    if m > limits.density_cap:
        raise ResourceError(f"{m} qubits exceed the density cap of {limits.density_cap}")
    diag = np.zeros(1 << m)
    for b in range(mixture.size):
        diag[mixture.basis_index(b)] = mixture.weight
    return DensityMatrix(m, np.diag(diag.astype(complex)))


def _mixture_outcome_weights(dc: Dqc1Circuit, mixed_bits: int) -> np.ndarray:
    m = dc.total_qubits
    mixture = MixtureInput(m, dc.clean_qubits, dc.mixed_qubits)
    amps = np.zeros(1 << m, dtype=complex)
    amps[mixture.basis_index(mixed_bits)] = 1.0
    for g in dc.gates:
        amps = _apply_gate_kernel(amps, m, g)
    return _outcome_weights(np.abs(amps) ** 2, m, dc.measured)


def _distribution_from_weights(measured: tuple[int, ...], weights: np.ndarray) -> OutcomeDistribution:
    k = len(measured)
    probs = {bitstring(i, k): float(max(w, 0.0)) for i, w in enumerate(weights)}
    return OutcomeDistribution(measured, probs)


def exact_distribution(
    dc: Dqc1Circuit, method: str = "auto", limits: Limits = DEFAULT_LIMITS
) -> OutcomeDistribution:
    """Exact joint distribution over the measured qubits.

    method "density" evolves the full density matrix, "mixture" averages
    pure runs over the mixed-register basis, "auto" prefers the density
    route while it fits under the cap.  Both routes agree within 1e-10
    and the test suite holds them to that.
    """
    require_valid(dc)
    m = dc.total_qubits
    if method == "auto":
        method = "density" if m <= limits.density_cap else "mixture"
    if method == "density":
        rho = build_input(dc, "density", limits=limits)
        for g in dc.gates:
            rho = evolve_density(rho, g, cap=limits.density_cap)
        p = rho.entries.diagonal().real
        weights = _outcome_weights(p, m, dc.measured)
    elif method == "mixture":
        if m > limits.exact_cap:
            raise ResourceError(f"{m} qubits exceed the exact cap of {limits.exact_cap}")
        mixture = build_input(dc, "mixture")
        weights = np.zeros(1 << len(dc.measured))
        for b in range(mixture.size):
            weights += _mixture_outcome_weights(dc, b)
        weights *= mixture.weight
    else:
        raise ContractError(f"unknown method {method!r}")
    return _distribution_from_weights(dc.measured, weights)


def conditional_distribution(
    dc: Dqc1Circuit,
    ps: PostselectionSpec | Mapping[int, int],
    method: str = "auto",
    limits: Limits = DEFAULT_LIMITS,
) -> OutcomeDistribution:
    """Exact distribution over the non-postselected measured qubits, given
    that every postselected qubit read its required bit."""
    joint = exact_distribution(dc, method=method, limits=limits)
    conditioned, _ = joint.condition(_as_assignments(ps))
    return conditioned


def marginal(d: OutcomeDistribution, subset: Sequence[int]) -> OutcomeDistribution:
    return d.marginal(subset)


def all_zeros_probability(
    dc: Dqc1Circuit, method: str = "auto", limits: Limits = DEFAULT_LIMITS
) -> float:
    """Probability that every measured clean qubit reads 0.

    Defined for circuits whose measured set is exactly the clean set.
    """
    if set(dc.measured) != set(dc.clean_qubits):
        raise ContractError("all-zeros probability needs measured set == clean set")
    joint = exact_distribution(dc, method=method, limits=limits)
    return joint.prob("0" * len(dc.measured))


def _shot_uniforms(seed: int, shots: int) -> np.ndarray:
    # Philox is counter-based: the stream is a pure function of the key, and
    # shot i always consumes words 2i and 2i+1, so shots are reproducible
    # and order-independent.
    gen = np.random.Generator(np.random.Philox(key=int(seed)))
    return gen.random((shots, 2))


def sample(
    dc: Dqc1Circuit, shots: int, seed: int, limits: Limits = DEFAULT_LIMITS
) -> ShotRecord:
    """Draw seeded i.i.d. shots from the circuit's exact distribution.

    Without postselection each shot draws a mixed-register basis state,
    runs it through the pure kernels and draws the outcome; identical
    basis draws share one simulation.  With postselection baked into the
    circuit, shots are drawn from the exact conditional distribution and
    keep their full-length bitstrings (forced bits always match).
    """
    require_valid(dc)
    if shots < 1:
        raise ContractError(f"need a positive shot count, got {shots}")
    k = len(dc.measured)
    uniforms = _shot_uniforms(seed, shots)
    outcomes = np.empty(shots, dtype=np.int64)

    if dc.postselect:
        joint = exact_distribution(dc, limits=limits)
        conditioned, _ = joint.condition(dc.postselect, keep_assigned=True)
        probs = np.array([conditioned.prob(bitstring(i, k)) for i in range(1 << k)])
        cdf = np.cumsum(probs)
        cdf[-1] = max(cdf[-1], 1.0)
        outcomes[:] = np.searchsorted(cdf, uniforms[:, 1], side="right")
    else:
        mixture = MixtureInput(dc.total_qubits, dc.clean_qubits, dc.mixed_qubits)
        draws = (uniforms[:, 0] * mixture.size).astype(np.int64)
        np.clip(draws, 0, mixture.size - 1, out=draws)
        for b in np.unique(draws):
            weights = _mixture_outcome_weights(dc, int(b))
            cdf = np.cumsum(np.maximum(weights, 0.0))
            cdf[-1] = max(cdf[-1], 1.0)
            mask = draws == b
            outcomes[mask] = np.searchsorted(cdf, uniforms[mask, 1], side="right")
    np.clip(outcomes, 0, (1 << k) - 1, out=outcomes)
    return ShotRecord(dc.measured, outcomes, int(seed), shots)
