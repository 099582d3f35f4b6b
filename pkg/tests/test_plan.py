import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nosig.plan import ALPHAS, BETAS, ExperimentPlan, PlanError, build_circuit, make_plan
from nosig.stats import sigma_marginals
from nosig.counts import CountsTable
from nosig.topology import PairRecord

from .oracles import statevector


def test_bell_angles():
    assert ALPHAS == (0.0, math.pi / 2)
    assert BETAS == (-math.pi / 4, math.pi / 4)


def test_test_a_prepares_bell_state_and_clears_source():
    circ = build_circuit("a", (0, 0))
    psi = statevector(circ.prep, 3)
    # |A S B>: (|000> - i|101>)/sqrt(2)
    expected = np.zeros(8, dtype=complex)
    expected[0b000] = 1 / math.sqrt(2)
    expected[0b101] = -1j / math.sqrt(2)
    assert np.allclose(psi, expected, atol=1e-14)


def test_test_a_gate_structure():
    circ = build_circuit("a", (1, 0))
    names = [(x.name, x.qubits) for x in circ.gates]
    assert names[:4] == [("S", (1,)), ("CNOT_down", (1, 2)), ("CNOT_down", (1, 0)), ("CNOT_down", (0, 1))]
    assert circ.measure.gates[0].params == (math.pi / 2,)
    assert circ.measured == (0, 2)


def test_idle_tests_only_measure():
    b = build_circuit("b", (0, 0))
    assert [str(x) for x in b.gates] == ["S_theta(0.0) q[0]", f"S_theta({-math.pi / 4!r}) q[1]"]
    c = build_circuit("c", (0, 0))
    assert [str(x) for x in c.gates] == [str(x) for x in b.gates]
    assert c.nqubits == 2


def test_bad_setting_and_test():
    with pytest.raises(PlanError):
        build_circuit("a", (2, 0))
    with pytest.raises(PlanError):
        build_circuit("d", (0, 0))


def test_plan_circuit_counts():
    plan = make_plan("a", repetitions=25, shots=20000, jobs=60, seed=1)
    assert plan.circuits_per_job == 100
    assert all(len(job) == 100 for job in plan.order)
    assert plan.trials_per_setting == 30_000_000


def test_kyiv_scale_sigma():
    plan = make_plan("a", repetitions=25, shots=7500, jobs=58, seed=1)
    n = plan.trials_per_setting
    assert n == 10_875_000
    assert math.sqrt(0.5 / n) == pytest.approx(2.144e-4, abs=5e-7)


def test_plan_order_is_shuffled_and_reproducible():
    p1 = make_plan("b", repetitions=25, jobs=4, seed=99)
    p2 = make_plan("b", repetitions=25, jobs=4, seed=99)
    p3 = make_plan("b", repetitions=25, jobs=4, seed=100)
    assert p1.order == p2.order
    assert p1.order != p3.order
    assert p1.order[0] != p1.order[1]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 30), st.integers(1, 5), st.integers(0, 2**64 - 1))
def test_plan_contains_each_setting_r_times(reps, jobs, seed):
    plan = make_plan("a", repetitions=reps, shots=1, jobs=jobs, seed=seed)
    for job in plan.order:
        assert Counter(job) == {s: reps for s in [(0, 0), (0, 1), (1, 0), (1, 1)]}


def test_plan_json_round_trip():
    pairs = [PairRecord(0, 2, (0, 1, 2), 1.25), PairRecord(3, 5, (3, 4, 5))]
    plan = make_plan("a", repetitions=3, shots=10, jobs=2, seed=2**63 + 5, pairs=pairs, device="dev")
    again = ExperimentPlan.loads(plan.dumps())
    assert again == plan
    assert again.dumps() == plan.dumps()


def test_plan_validation():
    with pytest.raises(PlanError):
        make_plan("a", repetitions=0)
    with pytest.raises(ValueError):
        make_plan("a", seed=-1)
    with pytest.raises(PlanError):
        make_plan("c", pairs=[PairRecord(0, 2, (0, 1, 2))])
    bad = make_plan("a", repetitions=1, jobs=1, seed=0).to_dict()
    bad["order"][0][0] = bad["order"][0][1]
    with pytest.raises(PlanError):
        ExperimentPlan.from_dict(bad)
    bad["schema"] = "plan/0"
    with pytest.raises(PlanError):
        ExperimentPlan.from_dict(bad)


def test_trial_counts_give_quoted_sigmas():
    for n, expected, tol in [(30_000_000, 1.29e-4, 0.005e-4), (10_875_000, 2.14e-4, 0.005e-4),
                             (120_000_000, 6.45e-5, 0.005e-5)]:
        counts = np.full((2, 2, 4), n // 4)
        s = sigma_marginals(CountsTable(counts))
        assert np.allclose(s, expected, atol=tol)
