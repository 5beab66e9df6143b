import cmath
import math
import random
from fractions import Fraction as F

import numpy as np
import pytest

from zxflow.circuit import dense
from zxflow.corpus import circuit_to_diagram, random_circuit
from zxflow.diagram import Diagram, NodeType
from zxflow.gallery import clifford_unitary3
from zxflow.oracle import (
    OracleSizeError,
    equal_up_to_scalar,
    evaluate,
    local_state,
    twisted_local_state,
    verify_firing,
)
from zxflow.pauli import PauliSupport
from zxflow.webs import check_isometry

r2 = math.sqrt(2)


def test_local_states():
    assert np.allclose(local_state(NodeType.Z, F(0), 1), [1, 1])
    assert np.allclose(local_state(NodeType.H, F(0), 2), np.array([1, 1, 1, -1]) / r2)
    plus, minus = np.array([1, 1]) / r2, np.array([1, -1]) / r2
    want = np.kron(plus, plus) - np.kron(minus, minus)
    assert np.allclose(local_state(NodeType.X, F(1), 2), want)


def test_twisting():
    assert np.allclose(twisted_local_state(NodeType.Z, F(1, 4), 1, F(1)), local_state(NodeType.Z, F(5, 4), 1))
    assert np.allclose(twisted_local_state(NodeType.H, F(0), 2, F(1)), local_state(NodeType.H, F(0), 2))
    assert np.allclose(twisted_local_state(NodeType.X, F(1, 2), 3, F(0)), local_state(NodeType.X, F(1, 2), 3))


def test_identity_and_phase_spider():
    d = Diagram()
    d.add_wire(d.new_input(), d.new_output())
    assert np.allclose(evaluate(d), np.eye(2))
    d = Diagram()
    z = d.add_z(F(1, 4))
    d.add_wire(d.new_input(), z)
    d.add_wire(z, d.new_output())
    assert np.allclose(evaluate(d), np.diag([1, cmath.exp(1j * math.pi / 4)]))


def test_circuit_diagrams_match_the_simulator_exactly():
    rng = random.Random(3)
    for _ in range(40):
        n = rng.randint(1, 3)
        c = random_circuit(rng, n, rng.randint(1, 6), n_ancillae=rng.randint(0, n - 1))
        assert np.allclose(evaluate(circuit_to_diagram(c)), dense(c), atol=1e-9)


def test_equal_up_to_scalar():
    m = np.array([[1, 2], [3, 4j]])
    assert equal_up_to_scalar(m, m) == pytest.approx(1)
    assert equal_up_to_scalar(2 * m, m) == pytest.approx(2)
    assert equal_up_to_scalar(m, np.eye(2)) is None


def test_cap_is_enforced():
    d = Diagram()
    for _ in range(17):
        d.add_wire(d.new_input(), d.new_output())
    with pytest.raises(OracleSizeError):
        evaluate(d)
    with pytest.raises(OracleSizeError):
        evaluate(clifford_unitary3(), cap=4)
    assert evaluate(clifford_unitary3(), cap=12).shape == (8, 8)


def test_empty_web_fires_trivially():
    r = verify_firing(clifford_unitary3(), PauliSupport())
    assert (r.input_pauli, r.output_pauli, r.sign) == ("III", "III", 1)


def test_logical_webs_give_tableau_rows():
    d = clifford_unitary3()
    lz, lx = check_isometry(d)
    for i in range(3):
        for w, ch in ((lz[i], "Z"), (lx[i], "X")):
            r = verify_firing(d, w)
            assert r.input_pauli == "".join(ch if j == i else "I" for j in range(3))
            assert set(r.output_pauli) != {"I"}
