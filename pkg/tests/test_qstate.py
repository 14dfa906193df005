import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqc1sim.circuits import cnot, cu, cz, gate_matrix, graph_proj_x, h, mcx, rz, t, x
from dqc1sim.circuits import GraphSpec
from dqc1sim.errors import ContractError, ResourceError
from dqc1sim.qstate import (
    DensityMatrix,
    PureState,
    apply_gate,
    evolve_density,
    fidelity,
    measure_probs,
)
from dqc1sim.randcirc import random_circuit, random_unitary

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def _random_state(seed, m):
    rng = np.random.default_rng(seed)
    return PureState(m, random_unitary(rng, 1 << m)[:, 0])


# ---------------------------------------------------------------------------
# construction

def test_pure_state_normalization_enforced():
    with pytest.raises(ContractError):
        PureState(1, np.array([1.0, 1.0], dtype=complex))


def test_pure_state_basis():
    st2 = PureState.basis(2, 0b10)
    assert st2.amplitudes[0b10] == 1.0
    assert PureState.zero(3).amplitudes[0] == 1.0


def test_density_requires_hermitian():
    bad = np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex)
    with pytest.raises(ContractError):
        DensityMatrix(1, bad)


def test_density_requires_unit_trace():
    with pytest.raises(ContractError):
        DensityMatrix(1, np.eye(2, dtype=complex))


def test_density_psd_check_is_explicit():
    mat = np.array([[1.5, 0.0], [0.0, -0.5]], dtype=complex)
    rho = DensityMatrix(1, mat)
    with pytest.raises(ContractError):
        rho.validate_psd()


def test_density_from_pure():
    psi = _random_state(3, 2)
    rho = DensityMatrix.from_pure(psi)
    assert np.allclose(rho.entries, np.outer(psi.amplitudes, psi.amplitudes.conj()))
    rho.validate_psd()


# ---------------------------------------------------------------------------
# gate application

def test_hadamard_on_msb():
    out = apply_gate(PureState.zero(2), h(0))
    assert np.allclose(out.amplitudes, [INV_SQRT2, 0.0, INV_SQRT2, 0.0])


def test_x_on_chosen_wire():
    out = apply_gate(PureState.zero(3), x(2))
    assert out.amplitudes[0b001] == 1.0


def test_cnot_fires_only_when_control_high():
    st3 = PureState.basis(2, 0b10)
    assert apply_gate(st3, cnot(0, 1)).amplitudes[0b11] == 1.0
    st0 = PureState.zero(2)
    assert apply_gate(st0, cnot(0, 1)).amplitudes[0b00] == 1.0


def test_cz_phase_only_on_double_one():
    amps = np.full(4, 0.5, dtype=complex)
    out = apply_gate(PureState(2, amps), cz(0, 1))
    assert np.allclose(out.amplitudes, [0.5, 0.5, 0.5, -0.5])


def test_mcx_polarities():
    g = mcx([0, 1], (1, 0), 2)
    out = apply_gate(PureState.basis(3, 0b100), g)
    assert out.amplitudes[0b101] == 1.0
    out2 = apply_gate(PureState.basis(3, 0b110), g)
    assert out2.amplitudes[0b110] == 1.0


def test_mcx_no_controls_is_x():
    out = apply_gate(PureState.zero(1), mcx([], (), 0))
    assert out.amplitudes[1] == 1.0


def test_rz_phases():
    theta = 0.7
    out = apply_gate(PureState.basis(1, 1), rz(theta, 0))
    assert out.amplitudes[1] == pytest.approx(np.exp(1j * theta / 2))


def test_cu_controlled_two_target():
    rng = np.random.default_rng(9)
    u = random_unitary(rng, 4)
    g = cu(u, (1, 2), (0,))
    st_in = _random_state(11, 3)
    out = apply_gate(st_in, g)
    ref = gate_matrix(g, 3) @ st_in.amplitudes
    assert np.allclose(out.amplitudes, ref)


def test_graph_proj_x_kernel_matches_dense():
    g = GraphSpec(2, ((0, 1),))
    gate = graph_proj_x(g, [0, 2], 1)
    st_in = _random_state(13, 3)
    out = apply_gate(st_in, gate)
    ref = gate_matrix(gate, 3) @ st_in.amplitudes
    assert np.allclose(out.amplitudes, ref)


def test_apply_gate_with_target_remap():
    # targets remap the canonical wire list of the gate
    out = apply_gate(PureState.zero(3), x(0), targets=(2,))
    assert out.amplitudes[0b001] == 1.0


def test_apply_gate_remap_rejects_wrong_len():
    with pytest.raises(ContractError):
        apply_gate(PureState.zero(2), cz(0, 1), targets=(0,))


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=50)
def test_kernel_agrees_with_dense_matrix(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 6))
    state = PureState(m, random_unitary(rng, 1 << m)[:, 0])
    for g in random_circuit(rng, m, 8).gates:
        out = apply_gate(state, g)
        ref = gate_matrix(g, m) @ state.amplitudes
        assert np.max(np.abs(out.amplitudes - ref)) < 1e-10
        state = out


@given(st.integers(min_value=0, max_value=10_000))
@settings(max_examples=40)
def test_norm_preserved(seed):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, 6))
    state = PureState(m, random_unitary(rng, 1 << m)[:, 0])
    for g in random_circuit(rng, m, 10).gates:
        state = apply_gate(state, g)
    assert abs(np.sum(np.abs(state.amplitudes) ** 2) - 1.0) < 1e-10


# ---------------------------------------------------------------------------
# density evolution

def test_evolve_density_matches_pure_conjugation():
    rng = np.random.default_rng(17)
    psi = _random_state(19, 3)
    rho = DensityMatrix.from_pure(psi)
    for g in random_circuit(rng, 3, 10).gates:
        psi = apply_gate(psi, g)
        rho = evolve_density(rho, g)
    assert np.allclose(rho.entries, np.outer(psi.amplitudes, psi.amplitudes.conj()))


def test_evolve_density_cap():
    rho = DensityMatrix(4, np.eye(16, dtype=complex) / 16.0)
    with pytest.raises(ResourceError):
        evolve_density(rho, h(0), cap=3)


# ---------------------------------------------------------------------------
# measurement

def test_measure_probs_subset_and_order():
    psi = apply_gate(PureState.zero(2), h(0))
    d = measure_probs(psi, (0,))
    assert d.probs == pytest.approx({"0": 0.5, "1": 0.5})
    d2 = measure_probs(psi, (1,))
    assert d2.probs == pytest.approx({"0": 1.0, "1": 0.0})


def test_measure_probs_order_follows_listing():
    psi = PureState.basis(2, 0b01)
    assert measure_probs(psi, (0, 1)).prob("01") == 1.0
    assert measure_probs(psi, (1, 0)).prob("10") == 1.0


def test_measure_probs_rejects_bad_subsets():
    psi = PureState.zero(2)
    with pytest.raises(ContractError):
        measure_probs(psi, ())
    with pytest.raises(ContractError):
        measure_probs(psi, (0, 0))
    with pytest.raises(ContractError):
        measure_probs(psi, (2,))


def test_fidelity_bounds_and_values():
    a = PureState.zero(1)
    b = apply_gate(a, h(0))
    assert fidelity(a, a) == pytest.approx(1.0)
    assert fidelity(a, b) == pytest.approx(0.5)
    c = apply_gate(a, x(0))
    assert fidelity(a, c) == pytest.approx(0.0)


def test_fidelity_phase_invariant():
    a = _random_state(23, 2)
    shifted = PureState(2, a.amplitudes * np.exp(1j * 0.3))
    assert fidelity(a, shifted) == pytest.approx(1.0)
