"""Runnable invariant suites behind the `verify` command.

Every check returns a CheckResult with the worst residual it saw, so a
failure says how far off the build is, not just that it is off.  Checks
that exercise a construction accept the built gates or compiled reduction
as an argument, which lets the test suite feed them deliberately corrupted
builds and confirm the checks are actually sensitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .analysis import (
    INCOMPARABLE,
    check_conditional_bounds,
    frobenius_block_norm,
    minimal_multiplicative_error,
    multiplicative_error_report,
)
from .circuits import (
    Circuit,
    Dqc1Circuit,
    Gate,
    GraphSpec,
    circuit_matrix,
    cnot,
    gate_matrix,
    graph_proj_x,
    h,
)
from .config import DEFAULT_LIMITS
from .distributions import OutcomeDistribution
from .engine import all_zeros_probability, exact_distribution, sample
from .errors import ContractError
from .gadgets import (
    CompiledReduction,
    build_trace_circuit,
    build_W,
    build_W_prime,
    cluster_unitary,
    compile_n_plus_1,
    compile_three,
    linear_pattern_target_probs,
    pattern_from_rotations,
)
from .qstate import PureState, _apply_gate_kernel, apply_gate
from .randcirc import random_circuit, random_dqc1, random_graph, random_unitary


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


def _result(name: str, residual: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name, residual <= tol, float(residual), tol, detail)


def _all_graphs(num_vertices: int):
    pairs = [(a, b) for a in range(num_vertices) for b in range(a + 1, num_vertices)]
    for mask in range(1 << len(pairs)):
        yield GraphSpec(
            num_vertices, tuple(e for i, e in enumerate(pairs) if mask >> i & 1)
        )


# ---------------------------------------------------------------------------
# qstate suite

def check_gate_unitarity(seed: int = 7) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in (2, 3, 4):
        for g in random_circuit(rng, m, 40).gates:
            full = gate_matrix(g, m)
            worst = max(worst, float(np.max(np.abs(full @ full.conj().T - np.eye(1 << m)))))
    return _result("gate-matrix-unitarity", worst, 1e-10)


def check_kernel_matches_matrix(seed: int = 11) -> CheckResult:
    # The tensor kernels against the dense oracle, on random states.
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in (2, 3, 4, 5):
        amps = random_unitary(rng, 1 << m)[:, 0]
        state = PureState(m, amps)
        for g in random_circuit(rng, m, 25).gates:
            via_kernel = apply_gate(state, g).amplitudes
            via_matrix = gate_matrix(g, m) @ amps
            worst = max(worst, float(np.max(np.abs(via_kernel - via_matrix))))
    return _result("kernel-vs-dense-oracle", worst, 1e-10)


def check_inverse_roundtrip(seed: int = 13) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in (3, 4):
        amps = random_unitary(rng, 1 << m)[:, 0]
        state = PureState(m, amps)
        for g in random_circuit(rng, m, 30).gates:
            back = apply_gate(apply_gate(state, g), g.inverse())
            worst = max(worst, float(np.max(np.abs(back.amplitudes - amps))))
    return _result("apply-inverse-roundtrip", worst, 1e-10)


def check_density_mixture_agreement(seed: int = 17, trials: int = 12) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        m = int(rng.integers(2, 7))
        dc = random_dqc1(rng, m, int(rng.integers(3, 12)))
        tv = exact_distribution(dc, "density").total_variation(
            exact_distribution(dc, "mixture")
        )
        worst = max(worst, tv)
    return _result("density-vs-mixture-distribution", worst, 1e-10)


def check_mixed_register_uniformity(seed: int = 19, trials: int = 8) -> CheckResult:
    # Circuits that never touch the clean qubit leave the mixed register uniform.
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        m = int(rng.integers(3, 6))
        sub = random_circuit(rng, m - 1, int(rng.integers(3, 10)))
        gates = tuple(g.shifted(1) for g in sub.gates)
        measured = tuple(range(1, m))
        dc = Dqc1Circuit(Circuit(m, gates), (0,), measured)
        dist = exact_distribution(dc)
        uniform = 1.0 / (1 << len(measured))
        worst = max(worst, max(abs(p - uniform) for p in dist.probs.values()))
    return _result("mixed-register-uniformity", worst, 1e-10)


def check_sampler_bands(seed: int = 23, shots: int = 20000, trials: int = 4) -> CheckResult:
    # Empirical frequencies inside 5-sigma binomial bands of exact probabilities.
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(trials):
        m = int(rng.integers(2, 6))
        dc = random_dqc1(rng, m, int(rng.integers(3, 10)), measured_count=min(m, 3))
        exact = exact_distribution(dc)
        counts = sample(dc, shots, seed=1000 + i).counts()
        for key, p in exact.probs.items():
            band = 5.0 * math.sqrt(p * (1.0 - p) / shots) + 1e-9
            dev = abs(counts.get(key, 0) / shots - p)
            worst = max(worst, dev / band)
    return _result("sampler-binomial-bands", worst, 1.0, f"{shots} shots, 5 sigma")


# ---------------------------------------------------------------------------
# gadgets suite

def check_cluster_signs() -> CheckResult:
    # Prepared cluster amplitudes match the closed-form sign rule.
    worst = 0.0
    for n in (1, 2, 3, 4, 5):
        g = GraphSpec(n, tuple((j, j + 1) for j in range(n - 1)))
        state = PureState.zero(n)
        for gate in cluster_unitary(g):
            state = apply_gate(state, gate)
        worst = max(worst, float(np.max(np.abs(state.amplitudes - g.state_vector()))))
    return _result("cluster-state-signs", worst, 1e-12)


def check_w_matrix_identity(max_vertices: int = 4) -> CheckResult:
    # Exhaustive over all graphs on up to max_vertices vertices: the gadget's
    # gate product equals flip-on-graph-component exactly, and equals the
    # single-gate projector form.
    worst = 0.0
    for n in range(1, max_vertices + 1):
        for g in _all_graphs(n):
            m = n + 1
            register = list(range(1, m))
            seq = Circuit(m, tuple(build_W(g, 0, register)))
            product = circuit_matrix(seq)
            vec = g.state_vector()
            proj = np.outer(vec, vec.conj())
            direct = np.kron(np.array([[0, 1], [1, 0]], dtype=complex), proj)
            direct += np.kron(np.eye(2), np.eye(1 << n) - proj)
            worst = max(worst, float(np.max(np.abs(product - direct))))
            single = gate_matrix(graph_proj_x(g, register, 0), m)
            worst = max(worst, float(np.max(np.abs(single - direct))))
    return _result("distillation-matrix-identity", worst, 1e-10)


def w_branch_stats(
    graph: GraphSpec, gates: Sequence[Gate] | None = None
) -> tuple[float, float]:
    """Probability that the clean qubit reads 1 after the distillation
    gadget, and the fidelity of the postselected register state with the
    graph state.  `gates` overrides the gadget (clean = 0, register = 1..n)."""
    n = graph.num_vertices
    m = n + 1
    if gates is None:
        gates = build_W(graph, 0, list(range(1, m)))
    gvec = graph.state_vector()
    half = 1 << n
    total_p = 0.0
    total_overlap = 0.0
    for b in range(1 << n):
        amps = np.zeros(1 << m, dtype=complex)
        amps[b] = 1.0  # clean qubit 0 in |0>, register basis state b
        for g in gates:
            amps = _apply_gate_kernel(amps, m, g)
        branch = amps[half:]
        total_p += float(np.sum(np.abs(branch) ** 2))
        total_overlap += float(abs(np.vdot(gvec, branch)) ** 2)
    prob = total_p / (1 << n)
    fid = total_overlap / (total_p if total_p > 0 else 1.0)
    return prob, fid


def check_w_branch(max_vertices: int = 6) -> CheckResult:
    worst = 0.0
    for n in range(2, max_vertices + 1):
        g = GraphSpec(n, tuple((j, j + 1) for j in range(n - 1)))
        prob, fid = w_branch_stats(g)
        worst = max(worst, abs(prob - 0.5**n), abs(1.0 - fid))
    return _result("distillation-branch", worst, 1e-10)


def check_w_prime_branch(max_vertices: int = 3) -> CheckResult:
    # Postselecting the clean qubit pins ancilla |0> alongside the graph state,
    # with branch probability 2^-(n+1).
    worst = 0.0
    for n in range(1, max_vertices + 1):
        g = GraphSpec(n, tuple((j, j + 1) for j in range(n - 1)))
        m = n + 2
        gates = build_W_prime(g, 0, 1, list(range(2, m)))
        target = np.kron(np.array([1.0, 0.0], dtype=complex), g.state_vector())
        half = 1 << (n + 1)
        total_p = 0.0
        total_overlap = 0.0
        for b in range(half):
            amps = np.zeros(1 << m, dtype=complex)
            amps[b] = 1.0
            for gate in gates:
                amps = _apply_gate_kernel(amps, m, gate)
            branch = amps[half:]
            total_p += float(np.sum(np.abs(branch) ** 2))
            total_overlap += float(abs(np.vdot(target, branch)) ** 2)
        prob = total_p / half
        fid = total_overlap / (total_p if total_p > 0 else 1.0)
        worst = max(worst, abs(prob - 0.5 ** (n + 1)), abs(1.0 - fid))
    return _result("ancilla-distillation-branch", worst, 1e-10)


def check_trace_contract(seed: int = 29, trials: int = 10) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        u = random_circuit(rng, n, int(rng.integers(2, 8)))
        tr = complex(np.trace(circuit_matrix(u)))
        for part, value in (("real", tr.real), ("imaginary", tr.imag)):
            dc = build_trace_circuit(u, part)
            p0 = exact_distribution(dc).prob("0")
            worst = max(worst, abs(p0 - (0.5 + value / 2 ** (n + 1))))
    return _result("trace-circuit-contract", worst, 1e-10)


# ---------------------------------------------------------------------------
# reductions suite

def reduction_conditional_tv(red: CompiledReduction) -> float:
    """Total variation between the compiled circuit's postselected output
    distribution and the pattern's directly computed branch distribution."""
    joint = exact_distribution(red.circuit)
    conditioned, _ = joint.condition(red.postselect)
    out = conditioned.marginal(red.output_qubits)
    target = linear_pattern_target_probs(red.target)
    keys = set(out.probs) | set(target)
    return 0.5 * sum(abs(out.prob(k) - target.get(k, 0.0)) for k in keys)


def reduction_event_probability(red: CompiledReduction) -> float:
    joint = exact_distribution(red.circuit)
    _, event = joint.condition(red.postselect)
    return event


def _random_angle_lists(rng: np.random.Generator, count: int, max_len: int):
    for _ in range(count):
        length = int(rng.integers(1, max_len + 1))
        yield [float(a) for a in rng.uniform(-np.pi, np.pi, size=length)]


def check_reduction_full_measure(seed: int = 31, trials: int = 10) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for angles in _random_angle_lists(rng, trials, 4):
        worst = max(worst, reduction_conditional_tv(compile_n_plus_1(pattern_from_rotations(angles))))
    return _result("reduction-full-measure", worst, 1e-9)


def check_reduction_three_measure(seed: int = 37, trials: int = 10) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for angles in _random_angle_lists(rng, trials, 4):
        red = compile_three(pattern_from_rotations(angles))
        if len(red.circuit.measured) != 3 or len(red.postselect) != 2:
            return _result("reduction-three-measure", 1.0, 1e-9, "wrong measured/postselect count")
        worst = max(worst, reduction_conditional_tv(red))
    return _result("reduction-three-measure", worst, 1e-9)


def check_compiler_agreement(seed: int = 41, trials: int = 8) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for angles in _random_angle_lists(rng, trials, 3):
        pattern = pattern_from_rotations(angles)
        outs = []
        for red in (compile_n_plus_1(pattern), compile_three(pattern)):
            joint = exact_distribution(red.circuit)
            conditioned, _ = joint.condition(red.postselect)
            outs.append(conditioned.marginal(red.output_qubits).probs)
        # The compilers place the output on different wires, so compare by
        # outcome string rather than by qubit label.
        keys = set(outs[0]) | set(outs[1])
        tv = 0.5 * sum(abs(outs[0].get(k, 0.0) - outs[1].get(k, 0.0)) for k in keys)
        worst = max(worst, tv)
    return _result("compiler-agreement", worst, 1e-10)


def check_reduction_event_probability(seed: int = 43, trials: int = 8) -> CheckResult:
    # For a linear chain every aligned readout lands 1 with probability
    # exactly 1/2 inside the postselected branch, so the event probability
    # has a closed form to pin down.
    rng = np.random.default_rng(seed)
    worst = 0.0
    for angles in _random_angle_lists(rng, trials, 4):
        n = len(angles) + 1
        event = reduction_event_probability(compile_n_plus_1(pattern_from_rotations(angles)))
        if event <= 0.0:
            return _result("reduction-event-probability", 1.0, 1e-10, "vanishing event")
        worst = max(worst, abs(event - 0.5**n * 0.5 ** (n - 1)))
    return _result("reduction-event-probability", worst, 1e-10)


# ---------------------------------------------------------------------------
# analysis suite

def _random_joint(rng: np.random.Generator, qubits: tuple[int, ...]) -> OutcomeDistribution:
    k = len(qubits)
    raw = rng.random(1 << k) + 0.05
    raw /= raw.sum()
    return OutcomeDistribution(
        qubits, {format(i, f"0{k}b"): float(p) for i, p in enumerate(raw)}
    )


def _perturbed(rng: np.random.Generator, p: OutcomeDistribution) -> OutcomeDistribution:
    factors = np.exp(rng.uniform(-0.3, 0.3, size=len(p.probs)))
    raw = np.array([p.probs[k] for k in sorted(p.probs)]) * factors
    raw /= raw.sum()
    return OutcomeDistribution(
        p.measured_qubits, dict(zip(sorted(p.probs), (float(v) for v in raw)))
    )


def check_error_identity(seed: int = 47, trials: int = 20) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        p = _random_joint(rng, (0, 1))
        c = minimal_multiplicative_error(p, p)
        worst = max(worst, abs(c - 1.0))
    return _result("error-self-identity", worst, 0.0, "must be exactly 1")


def check_error_two_point() -> CheckResult:
    p = OutcomeDistribution((0,), {"0": 0.5, "1": 0.5})
    q = OutcomeDistribution((0,), {"0": 0.6, "1": 0.4})
    c = minimal_multiplicative_error(p, q)
    return _result("error-two-point", abs(c - 1.25), 0.0, "0.5/0.4 pins c at 1.25")


def check_marginal_monotonicity(seed: int = 53, trials: int = 25) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        p = _random_joint(rng, (0, 1, 2))
        q = _perturbed(rng, p)
        report = multiplicative_error_report(p, q)
        if report is INCOMPARABLE:
            return _result("marginal-monotonicity", 1.0, 1e-12, "unexpected incomparability")
        joint_c = report.per_marginal_c[(0, 1, 2)]
        overshoot = max(c - joint_c for c in report.per_marginal_c.values())
        worst = max(worst, overshoot, report.worst_c - joint_c)
    return _result("marginal-monotonicity", worst, 1e-12)


def check_conditional_c2(seed: int = 59, trials: int = 50) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        p = _random_joint(rng, (0, 1))
        q = _perturbed(rng, p)
        c = minimal_multiplicative_error(p, q)
        report = check_conditional_bounds(p, q, {0: int(rng.integers(2))}, c)
        if not report.passed:
            return _result("conditional-c2-bounds", 1.0, 1e-9, "bound violated")
        worst = max(
            worst, report.max_ratio / (c * c) - 1.0, (1.0 / (c * c)) / report.min_ratio - 1.0
        )
    return _result("conditional-c2-bounds", max(worst, 0.0), 1.0, "ratios inside the c^2 band")


def check_shor_jordan(seed: int = 61, trials: int = 12) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        k = int(rng.integers(1, 3))
        n = int(rng.integers(1, 5))
        u = random_circuit(rng, k + n, int(rng.integers(3, 10)))
        dc = Dqc1Circuit(u, tuple(range(k)), tuple(range(k)))
        lhs = all_zeros_probability(dc)
        rhs = frobenius_block_norm(u, k)
        worst = max(worst, abs(lhs - rhs))
    return _result("all-zeros-block-norm", worst, 1e-9)


# ---------------------------------------------------------------------------
# suites

SUITES: dict[str, tuple] = {
    "qstate": (
        check_gate_unitarity,
        check_kernel_matches_matrix,
        check_inverse_roundtrip,
        check_density_mixture_agreement,
        check_mixed_register_uniformity,
        check_sampler_bands,
    ),
    "gadgets": (
        check_cluster_signs,
        check_w_matrix_identity,
        check_w_branch,
        check_w_prime_branch,
        check_trace_contract,
    ),
    "reductions": (
        check_reduction_full_measure,
        check_reduction_three_measure,
        check_compiler_agreement,
        check_reduction_event_probability,
    ),
    "analysis": (
        check_error_identity,
        check_error_two_point,
        check_marginal_monotonicity,
        check_conditional_c2,
        check_shor_jordan,
    ),
}


def run_suite(name: str) -> list[CheckResult]:
    if name == "all":
        return [result for suite in SUITES for result in run_suite(suite)]
    if name not in SUITES:
        raise ContractError(
            f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'"
        )
    return [check() for check in SUITES[name]]
