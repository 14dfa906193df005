import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dqc1sim.distributions import OutcomeDistribution
from dqc1sim.errors import ContractError, PostselectionImpossibleError


def uniform(qubits):
    k = len(qubits)
    return OutcomeDistribution(
        tuple(qubits), {format(i, f"0{k}b"): 1.0 / (1 << k) for i in range(1 << k)}
    )


def test_rejects_bad_sum():
    with pytest.raises(ContractError):
        OutcomeDistribution((0,), {"0": 0.7, "1": 0.7})


def test_rejects_wrong_key_length():
    with pytest.raises(ContractError):
        OutcomeDistribution((0, 1), {"0": 1.0})


def test_rejects_non_binary_key():
    with pytest.raises(ContractError):
        OutcomeDistribution((0,), {"2": 1.0})


def test_rejects_duplicate_qubits():
    with pytest.raises(ContractError):
        OutcomeDistribution((1, 1), {"00": 1.0})


def test_clamps_float_noise_negatives():
    d = OutcomeDistribution((0,), {"0": 1.0 + 1e-13, "1": -1e-13})
    assert d.prob("1") == 0.0


def test_marginal_subset_and_order():
    d = OutcomeDistribution(
        (0, 1), {"00": 0.1, "01": 0.2, "10": 0.3, "11": 0.4}
    )
    m0 = d.marginal((0,))
    assert m0.probs == pytest.approx({"0": 0.3, "1": 0.7})
    m_rev = d.marginal((1, 0))
    # key order follows the subset order, here qubit 1 first
    assert m_rev.prob("01") == pytest.approx(0.3)
    assert m_rev.prob("10") == pytest.approx(0.2)


def test_marginal_rejects_foreign_qubit():
    with pytest.raises(ContractError):
        uniform((0, 1)).marginal((2,))


def test_condition_bayes_quotient():
    d = OutcomeDistribution(
        (0, 1), {"00": 0.1, "01": 0.2, "10": 0.3, "11": 0.4}
    )
    cond, event = d.condition({0: 1})
    assert event == pytest.approx(0.7)
    assert cond.measured_qubits == (1,)
    assert cond.prob("0") == pytest.approx(0.3 / 0.7)
    assert cond.prob("1") == pytest.approx(0.4 / 0.7)


def test_condition_keep_assigned_preserves_keys():
    d = OutcomeDistribution((0, 1), {"00": 0.5, "11": 0.5, "01": 0.0, "10": 0.0})
    cond, event = d.condition({0: 1}, keep_assigned=True)
    assert event == pytest.approx(0.5)
    assert cond.measured_qubits == (0, 1)
    assert cond.prob("11") == pytest.approx(1.0)
    assert cond.prob("00") == 0.0


def test_condition_impossible_event():
    d = OutcomeDistribution((0, 1), {"00": 0.5, "01": 0.5, "10": 0.0, "11": 0.0})
    with pytest.raises(PostselectionImpossibleError):
        d.condition({0: 1})


def test_condition_spec_examples():
    cond, _ = uniform((0, 1)).condition({0: 1})
    assert cond.probs == pytest.approx({"0": 0.5, "1": 0.5})
    d = OutcomeDistribution((0, 1), {"00": 0.5, "11": 0.5, "01": 0.0, "10": 0.0})
    cond, _ = d.condition({0: 1})
    assert cond.prob("1") == pytest.approx(1.0)


def test_total_variation_basic():
    p = OutcomeDistribution((0,), {"0": 0.5, "1": 0.5})
    q = OutcomeDistribution((0,), {"0": 0.6, "1": 0.4})
    assert p.total_variation(q) == pytest.approx(0.1)
    assert p.total_variation(p) == 0.0


def test_total_variation_aligns_order():
    p = OutcomeDistribution((0, 1), {"00": 0.2, "01": 0.3, "10": 0.1, "11": 0.4})
    q = p.marginal((1, 0))
    assert p.total_variation(q) <= 1e-15


@st.composite
def _distributions(draw, min_qubits=1):
    k = draw(st.integers(min_value=min_qubits, max_value=3))
    raw = draw(
        st.lists(
            st.floats(min_value=0.01, max_value=1.0),
            min_size=1 << k,
            max_size=1 << k,
        )
    )
    total = sum(raw)
    probs = {format(i, f"0{k}b"): v / total for i, v in enumerate(raw)}
    return OutcomeDistribution(tuple(range(k)), probs)


@given(_distributions())
def test_marginal_probabilities_sum_to_one(d):
    for q in d.measured_qubits:
        m = d.marginal((q,))
        assert math.isclose(sum(m.probs.values()), 1.0, abs_tol=1e-9)


@given(_distributions(min_qubits=2), st.integers(min_value=0, max_value=1))
def test_condition_matches_manual_quotient(d, bit):
    qubit = d.measured_qubits[0]
    event = sum(v for key, v in d.probs.items() if key[0] == str(bit))
    cond, reported = d.condition({qubit: bit})
    assert math.isclose(reported, event, rel_tol=1e-12)
    for key, v in d.probs.items():
        if key[0] == str(bit):
            assert math.isclose(cond.prob(key[1:]), v / event, rel_tol=1e-9)


def test_condition_rejects_assigning_every_qubit():
    with pytest.raises(ContractError):
        uniform((0,)).condition({0: 0})
