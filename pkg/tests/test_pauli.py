import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zxflow.circuit import Gate, GateList, dense
from zxflow.pauli import Pauli, PauliSupport

letters2 = st.text("IXYZ", min_size=2, max_size=2)
signs = st.sampled_from([1, -1])
gates2 = st.sampled_from(
    [("h", 0), ("h", 1), ("s", 0), ("sdg", 1), ("x", 0), ("z", 1), ("cx", 0, 1), ("cx", 1, 0), ("cz", 0, 1)]
)


def test_letters_and_bits():
    w = PauliSupport.from_letters({0: "X", 1: "Z", 2: "Y", 3: "I"})
    assert [w.letter(i) for i in range(4)] == ["X", "Z", "Y", "I"]
    assert w.support() == {0, 1, 2}
    assert str(Pauli.from_string("-XYZ")) == "-XYZ"


def test_support_product_is_letterwise():
    a = PauliSupport.from_letters({0: "X", 1: "Z"})
    b = PauliSupport.from_letters({0: "Z", 1: "Z"})
    assert (a * b).letters() == {0: "Y"}
    assert (a * a).is_empty()


@given(letters2, signs, letters2, signs)
def test_product_matches_matrices(p, sp, q, sq):
    a, b = Pauli.from_string(p, sp), Pauli.from_string(q, sq)
    ab = a * b
    m = a.matrix() @ b.matrix()
    ph = {0: 1, 1: 1j, 2: -1, 3: -1j}
    base = Pauli(ab.n, ab.x, ab.z, bin(ab.x & ab.z).count("1"))
    assert np.allclose(m, ph[(ab.r - base.r) % 4] * base.matrix())


@given(letters2, letters2)
def test_commutes_matches_matrices(p, q):
    a, b = Pauli.from_string(p).matrix(), Pauli.from_string(q).matrix()
    assert Pauli.from_string(p).commutes(Pauli.from_string(q)) == np.allclose(a @ b, b @ a)


@given(letters2, signs, gates2)
def test_conjugation_matches_matrices(p, s, g):
    name, *qs = g
    pa = Pauli.from_string(p, s)
    u = dense(GateList(2, [Gate(name, tuple(qs))]))
    want = u @ pa.matrix() @ u.conj().T
    getattr(pa, "conj_" + name)(*qs)
    assert np.allclose(pa.matrix(), want)


def test_sign_of_non_hermitian_raises():
    with pytest.raises(ValueError):
        Pauli(1, 1, 0, 1).sign
