import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zxflow.circuit import GateList, dense
from zxflow.corpus import circuit_to_diagram, random_circuit, random_flowful
from zxflow.diagram import Diagram
from zxflow.extract import (
    ExtractionError,
    NoTargetError,
    PauliExp,
    StabTableau,
    check_synthesis,
    extract,
    lower_pauli_exp,
    peel,
    residual_tableau,
    synthesize_clifford,
    verify_extraction,
)
from zxflow.flow import find_zx_flow
from zxflow.gallery import clifford_unitary3, encoder_422, two_phase_line, two_phase_line_flow
from zxflow.oracle import evaluate
from zxflow.pauli import Pauli

seeds = st.integers(0, 10**6)


def P(s):
    return Pauli.from_string(s)


def phase_wire(phase):
    d = Diagram()
    z = d.add_z(phase)
    d.add_wire(d.new_input(), z)
    d.add_wire(z, d.new_output())
    return d


def test_peel_needs_a_target():
    d = clifford_unitary3()
    with pytest.raises(NoTargetError):
        peel(d, find_zx_flow(d))


def test_single_phase_spider():
    d = phase_wire(F(1, 4))
    c = extract(d, find_zx_flow(d))
    assert c.exps == [PauliExp("Z", F(1, 4))]
    assert c.clifford.z == [P("Z")] and c.clifford.x == [P("X")]
    lam = verify_extraction(d, c)
    assert lam is not None and abs(lam) == pytest.approx(1)


def test_peel_clears_the_phase_and_order():
    d, f = two_phase_line(), two_phase_line_flow()
    e, d0, g, ph = peel(d, f)
    assert d0.phase(1) == 0 and g.order == [0] and 1 not in g.flows
    assert e.pauli == "X" and ph == F(1, 8)


def test_two_phase_line_extracts():
    d, f = two_phase_line(), two_phase_line_flow()
    c = extract(d, f)
    assert [e.pauli for e in c.exps] == ["Z", "X"]
    assert verify_extraction(d, c) is not None


def test_identity_wire_has_no_exponentials():
    d = Diagram()
    d.add_wire(d.new_input(), d.new_output())
    c = extract(d, find_zx_flow(d))
    assert c.exps == []
    assert verify_extraction(d, c) is not None


def test_invalid_flow_is_refused():
    with pytest.raises(ExtractionError):
        extract(two_phase_line(), two_phase_line_flow(reverse=True))


def test_hadamard_tableau_is_one_gate():
    c = synthesize_clifford(StabTableau(1, [P("X")], [P("Z")]))
    assert [g.name for g in c.gates] == ["h"]


def test_identity_tableau_is_empty():
    c = synthesize_clifford(StabTableau(2, [P("ZI"), P("IZ")], [P("XI"), P("IX")]))
    assert c.gates == []


def test_inconsistent_tableau_is_refused():
    t = StabTableau(1, [P("Z")], [P("Z")])
    assert t.violations()
    with pytest.raises(ExtractionError):
        synthesize_clifford(t)


def test_encoder_stabilisers():
    d = encoder_422()
    t = residual_tableau(d)
    assert t.n_inputs == 2 and len(t.stabilisers) == 2
    assert all(p.sign == 1 for p in t.stabilisers)
    group = {str(p) for p in t.stabilisers} | {str(t.stabilisers[0] * t.stabilisers[1])}
    assert {"+ZZZZ", "+XXXX"} <= group
    c = synthesize_clifford(t)
    assert check_synthesis(t, c) == []
    lam = verify_extraction(d, extract(d, find_zx_flow(d)), cap=24)
    assert lam is not None


def test_projector_has_no_tableau():
    d = Diagram()
    z = d.add_z()
    d.add_wire(d.new_input(), z)
    d.add_wire(d.new_input(), z)
    d.add_wire(z, d.new_output())
    with pytest.raises(ExtractionError):
        residual_tableau(d)


@pytest.mark.parametrize(
    "pauli,names",
    [
        ("Z", ["rz"]),
        ("X", ["h", "rz", "h"]),
        ("Y", ["sdg", "h", "rz", "h", "s"]),
        ("ZZ", ["cx", "rz", "cx"]),
    ],
)
def test_lowering_shapes(pauli, names):
    e = PauliExp(pauli, F(1, 4))
    c = lower_pauli_exp(e)
    assert [g.name for g in c.gates] == names
    if pauli == "ZZ":
        assert c.gates[0].qubits == (0, 1) and c.gates[1].qubits == (1,)
    assert np.allclose(dense(c), e.matrix())


def test_empty_pauli_is_a_global_phase():
    e = PauliExp("II", F(1, 2))
    c = lower_pauli_exp(e)
    assert c.gates == [] and np.allclose(dense(c), e.matrix())


@given(st.text("IXYZ", min_size=1, max_size=4), st.integers(-7, 7))
def test_lowering_matches_the_exponential(pauli, k):
    e = PauliExp(pauli, F(k, 4))
    assert np.allclose(dense(lower_pauli_exp(e)), e.matrix())


@given(st.lists(st.sampled_from(["h", "s", "sdg", "x", "z", "cx01", "cx10", "cz"]), max_size=10))
def test_synthesis_reproduces_any_clifford(names):
    c = GateList(2)
    for nm in names:
        if nm.startswith("cx"):
            c.append("cx", int(nm[2]), int(nm[3]))
        elif nm == "cz":
            c.append("cz", 0, 1)
        else:
            c.append(nm, len(c.gates) % 2)
    d = circuit_to_diagram(c)
    t = residual_tableau(d)
    s = synthesize_clifford(t)
    assert check_synthesis(t, s) == []
    u, v = dense(c), dense(s)
    lam = np.vdot(v.ravel(), u.ravel()) / np.vdot(v.ravel(), v.ravel())
    assert np.allclose(u, lam * v)


@given(seeds)
def test_extraction_of_random_circuits(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    circ = random_circuit(rng, n, rng.randint(1, 8), n_ancillae=rng.randint(0, n - 1))
    d = circuit_to_diagram(circ)
    c = extract(d, find_zx_flow(d))
    lam = verify_extraction(d, c, cap=24)
    # a circuit diagram is an isometry, so only a phase can separate the two
    assert lam is not None and abs(lam) == pytest.approx(1)


@given(seeds)
def test_extraction_after_rewrites(seed):
    rng = random.Random(seed)
    d, f = random_flowful(rng, 12, 3, n_rewrites=rng.randint(1, 6))
    c = extract(d, f)
    assert verify_extraction(d, c, cap=24) is not None
    assert len(c.exps) == sum(1 for n in d.spiders() if not d.is_clifford(n))


def test_exponential_matrix():
    e = PauliExp("X", F(1))
    assert np.allclose(e.matrix(), -1j * P("X").matrix())
    assert np.allclose(evaluate(phase_wire(F(0))), np.eye(2))
