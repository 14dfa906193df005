"""Trace estimation and the weak-simulation error calculus.

Multiplicative error between two distributions p and q is the smallest
c >= 1 with p/c <= q <= c p on every outcome of every marginal; the pair
is incomparable when some outcome has exactly one of the two probabilities
zero, and then no finite c exists.  Conditioning on an event both
distributions assign compatible probability degrades the guarantee to at
most c^2, which check_conditional_bounds verifies numerically.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass
from typing import Any, Mapping

from .circuits import Circuit, Dqc1Circuit, circuit_matrix
from .config import DEFAULT_LIMITS, DEFAULT_SEED, ZERO_PROB_TOL, Limits
from .distributions import OutcomeDistribution
from .engine import PostselectionSpec, _as_assignments, conditional_distribution, sample
from .errors import ContractError, ParseError
from .gadgets import build_trace_circuit

# Relative slack for comparisons that are exact in theory but float in practice.
_REL_SLACK = 1e-12
_TIGHT_TOL = 1e-9


class _Incomparable:
    """Singleton result for distribution pairs with mismatched support."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INCOMPARABLE"


INCOMPARABLE = _Incomparable()


# ---------------------------------------------------------------------------
# trace estimation

@dataclass(frozen=True)
class TraceEstimate:
    """Estimate of Re or Im of tr(u)/2^n from clean-qubit statistics."""

    normalized_trace_part: float
    stderr: float
    shots: int
    part: str
    seed: int


def estimate_trace(
    u: Circuit,
    part: str = "real",
    shots: int = 10**5,
    seed: int = DEFAULT_SEED,
    limits: Limits = DEFAULT_LIMITS,
) -> TraceEstimate:
    """Sample the trace circuit for `u` and linearly invert the clean-qubit
    statistics: estimate = 2 p0 - 1, stderr = 2 sqrt(p0 (1-p0) / shots)."""
    dc = build_trace_circuit(u, part)
    record = sample(dc, shots, seed, limits=limits)
    p0 = record.counts().get("0", 0) / shots
    return TraceEstimate(
        normalized_trace_part=2.0 * p0 - 1.0,
        stderr=2.0 * math.sqrt(p0 * (1.0 - p0) / shots),
        shots=shots,
        part=part,
        seed=int(seed),
    )


def frobenius_block_norm(u: Circuit, k: int, limits: Limits = DEFAULT_LIMITS) -> float:
    """2^-n_mixed times the squared Frobenius norm of the top-left block of
    the full unitary, where the block fixes the first k qubits to |0>.

    For a circuit run with clean qubits 0..k-1 all measured, this equals
    the probability that every measurement reads 0.
    """
    if not 1 <= k < u.total_qubits:
        raise ContractError(f"need 1 <= k < total_qubits, got k={k}")
    n_mixed = u.total_qubits - k
    full = circuit_matrix(u, cap=limits.density_cap)
    d = 1 << n_mixed
    block = full[:d, :d]
    return float((abs(block) ** 2).sum()) / d


# ---------------------------------------------------------------------------
# multiplicative-error calculus

def _pair_c(p: Mapping[str, float], q: Mapping[str, float]):
    worst = 1.0
    for key in set(p) | set(q):
        pv = p.get(key, 0.0)
        qv = q.get(key, 0.0)
        p_zero = pv <= ZERO_PROB_TOL
        q_zero = qv <= ZERO_PROB_TOL
        if p_zero and q_zero:
            continue
        if p_zero or q_zero:
            return INCOMPARABLE
        worst = max(worst, pv / qv, qv / pv)
    return worst


def _aligned(p: OutcomeDistribution, q: OutcomeDistribution) -> OutcomeDistribution:
    if set(p.measured_qubits) != set(q.measured_qubits):
        raise ContractError("distributions measure different qubit sets")
    if q.measured_qubits == p.measured_qubits:
        return q
    return q.marginal(p.measured_qubits)


def minimal_multiplicative_error(p: OutcomeDistribution, q: OutcomeDistribution):
    """Smallest c >= 1 bounding q between p/c and c p over every outcome of
    every marginal, or INCOMPARABLE.  Marginals of a comparable joint can
    only tighten the bound, so the joint's ratio is returned; the report
    builder enumerates the marginals explicitly."""
    q = _aligned(p, q)
    return _pair_c(p.probs, q.probs)


@dataclass(frozen=True)
class MultiplicativeErrorReport:
    """Minimal c per qubit subset, worst over all subsets."""

    per_marginal_c: dict[tuple[int, ...], float]
    worst_c: float


def multiplicative_error_report(p: OutcomeDistribution, q: OutcomeDistribution):
    """Minimal c for every non-empty subset of the measured qubits, or
    INCOMPARABLE if any subset (including the full joint) mismatches."""
    q = _aligned(p, q)
    per: dict[tuple[int, ...], float] = {}
    worst = 1.0
    qubits = p.measured_qubits
    for r in range(1, len(qubits) + 1):
        for subset in itertools.combinations(qubits, r):
            c = _pair_c(p.marginal(subset).probs, q.marginal(subset).probs)
            if c is INCOMPARABLE:
                return INCOMPARABLE
            per[subset] = c
            worst = max(worst, c)
    return MultiplicativeErrorReport(per, worst)


@dataclass(frozen=True)
class ConditionalBoundsReport:
    """Outcome of checking conditional probabilities against the c^2 band."""

    c: float
    comparable_at_c: bool
    passed: bool
    max_ratio: float
    min_ratio: float
    binding_high: str
    binding_low: str
    tight: bool


def check_conditional_bounds(
    p_joint: OutcomeDistribution,
    q_joint: OutcomeDistribution,
    ps: PostselectionSpec | Mapping[int, int],
    c: float,
) -> ConditionalBoundsReport:
    """Verify that conditioning on `ps` keeps q within a factor c^2 of p.

    Comparability of the joints at parameter c is checked first; a pair
    that is incomparable or needs a larger c fails the report outright.
    Raises PostselectionImpossibleError when either joint gives the
    conditioning event zero probability.
    """
    if c < 1.0:
        raise ContractError(f"c must be at least 1, got {c}")
    q_joint = _aligned(p_joint, q_joint)
    assignments = _as_assignments(ps)
    joint_c = minimal_multiplicative_error(p_joint, q_joint)
    comparable = joint_c is not INCOMPARABLE and joint_c <= c * (1.0 + _REL_SLACK)

    p_cond, _ = p_joint.condition(assignments)
    q_cond, _ = q_joint.condition(assignments)
    max_ratio, min_ratio = 1.0, 1.0
    binding_high = binding_low = ""
    for key in set(p_cond.probs) | set(q_cond.probs):
        pv = p_cond.prob(key)
        qv = q_cond.prob(key)
        if pv <= ZERO_PROB_TOL and qv <= ZERO_PROB_TOL:
            continue
        if pv <= ZERO_PROB_TOL or qv <= ZERO_PROB_TOL:
            # Support mismatch downstream of conditioning; only possible
            # when the joints were already incomparable.
            return ConditionalBoundsReport(
                c, comparable, False, math.inf, 0.0, key, key, False
            )
        ratio = qv / pv
        if ratio > max_ratio:
            max_ratio, binding_high = ratio, key
        if ratio < min_ratio:
            min_ratio, binding_low = ratio, key
    c_sq = c * c
    within = max_ratio <= c_sq * (1.0 + _REL_SLACK) and min_ratio >= (1.0 - _REL_SLACK) / c_sq
    tight = (
        abs(max_ratio - c_sq) <= _TIGHT_TOL * c_sq
        or abs(min_ratio - 1.0 / c_sq) <= _TIGHT_TOL / c_sq
    )
    return ConditionalBoundsReport(
        c=c,
        comparable_at_c=comparable,
        passed=comparable and within,
        max_ratio=max_ratio,
        min_ratio=min_ratio,
        binding_high=binding_high,
        binding_low=binding_low,
        tight=tight,
    )


# ---------------------------------------------------------------------------
# acceptance classification

@dataclass(frozen=True)
class AcceptanceVerdict:
    accept_probability: float
    delta: float
    verdict: str  # "in-language" | "out-of-language" | "inconclusive"


def classify_acceptance(
    dc: Dqc1Circuit,
    ps: PostselectionSpec | Mapping[int, int],
    output: int,
    delta: float,
    limits: Limits = DEFAULT_LIMITS,
) -> AcceptanceVerdict:
    """Exact postselected acceptance: conditioned on `ps`, is the output
    qubit's probability of reading 1 at least 1/2 + delta (in-language),
    at most 1/2 - delta (out-of-language), or neither (inconclusive)?

    The threshold comparisons are exact; no tolerance is applied.
    """
    if not 0.0 < delta < 0.5:
        raise ContractError(f"delta must lie strictly between 0 and 1/2, got {delta}")
    assignments = _as_assignments(ps)
    if output in assignments:
        raise ContractError(f"output qubit {output} is postselected")
    if output not in dc.measured:
        raise ContractError(f"output qubit {output} is not measured")
    cond = conditional_distribution(dc, assignments, limits=limits)
    p1 = cond.marginal((output,)).prob("1")
    if p1 >= 0.5 + delta:
        verdict = "in-language"
    elif p1 <= 0.5 - delta:
        verdict = "out-of-language"
    else:
        verdict = "inconclusive"
    return AcceptanceVerdict(p1, float(delta), verdict)


# ---------------------------------------------------------------------------
# distribution documents

def serialize_distribution(d: OutcomeDistribution) -> str:
    obj = {
        "measured": list(d.measured_qubits),
        "probs": {key: d.probs[key] for key in sorted(d.probs)},
    }
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def parse_distribution(text: str) -> OutcomeDistribution:
    try:
        obj: Any = json.loads(text)
    except json.JSONDecodeError as err:
        raise ParseError(err.msg, f"line {err.lineno} column {err.colno}") from None
    if not isinstance(obj, dict) or "measured" not in obj or "probs" not in obj:
        raise ParseError('expected an object with "measured" and "probs"', "$")
    if not isinstance(obj["measured"], list) or not all(
        isinstance(q, int) for q in obj["measured"]
    ):
        raise ParseError("measured must be an array of qubit indices", "$.measured")
    if not isinstance(obj["probs"], dict):
        raise ParseError("probs must map bitstrings to probabilities", "$.probs")
    probs = {}
    for key, val in obj["probs"].items():
        if not isinstance(val, (int, float)):
            raise ParseError(f"probability of {key!r} must be a number", "$.probs")
        probs[key] = float(val)
    try:
        return OutcomeDistribution(tuple(obj["measured"]), probs)
    except ContractError as err:
        raise ParseError(str(err), "$") from None
