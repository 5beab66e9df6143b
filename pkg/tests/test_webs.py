import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zxflow import gf2, oracle
from zxflow.corpus import random_circuit_diagram
from zxflow.diagram import Diagram, End, edges
from zxflow.gallery import clifford_unitary3, encoder_422, two_phase_line, two_phase_line_flow
from zxflow.pauli import PauliSupport
from zxflow.webs import (
    InadmissibleEdgeError,
    SemiwebConstraintSet,
    WebClass,
    WebMode,
    basic_semiweb,
    basic_semiwebs,
    check_conditions,
    check_isometry,
    classify,
    decompose,
    defects,
    edge_semiweb,
    firing_sign,
    is_pauli_web,
    is_semiweb,
    parity_violations,
    product,
    solve_constrained,
    web_basis,
    web_class_counts,
)

seeds = st.integers(0, 10**6)


def star():
    """Spider 0 with an output and H-edges to spiders 1 and 2, which hold the inputs."""
    d = Diagram()
    c, a, b = d.add_z(), d.add_z(F(1, 4)), d.add_z(F(1, 2))
    d.add_wire(c, d.new_output())  # wire 0
    d.connect(c, a, hadamard=True)  # wires 1, 2
    d.connect(c, b, hadamard=True)  # wires 3, 4
    d.add_wire(d.new_input(), a)  # wire 5
    d.add_wire(d.new_input(), b)  # wire 6
    return d


def spider(t="Z", phase=F(0), nin=1, nout=1):
    d = Diagram()
    n = d.add_node(t, phase)
    for _ in range(nin):
        d.add_wire(d.new_input(), n)
    for _ in range(nout):
        d.add_wire(n, d.new_output())
    return d


def test_empty_support_satisfies_everything():
    d = star()
    for c in check_conditions(d, PauliSupport()).values():
        assert c.web_ok
    assert is_pauli_web(d, PauliSupport())
    assert classify(d, PauliSupport()) is WebClass.DETECTOR


def test_basic_semiweb_of_star_centre():
    d = star()
    b = basic_semiweb(d, 0)
    assert b.letters() == {0: "X", 1: "X", 3: "X", 2: "Z", 4: "Z"}
    conds = check_conditions(d, b)
    assert all(c.h_ok is not False and c.all_or_nothing_ok is not False for c in conds.values())
    assert sorted(parity_violations(d, b)) == [1, 2]


def test_partial_opposite_support_breaks_all_or_nothing():
    d = spider(nin=1, nout=2)
    w = PauliSupport.from_letters({0: "X"})
    assert check_conditions(d, w)[0].all_or_nothing_ok is False
    assert not is_semiweb(d, w)


def test_basic_semiweb_at_non_clifford_is_not_a_web():
    d = spider(phase=F(1, 4))
    b = basic_semiweb(d, 0)
    assert is_semiweb(d, b) and not is_pauli_web(d, b)


def test_defects_of_drawn_flow_webs():
    d, f = two_phase_line(), two_phase_line_flow()
    assert defects(d, f.flows[0]) == {0: F(1), 1: F(3, 2)}
    assert defects(d, f.flows[1]) == {1: F(1)}


def test_full_x_around_quarter_phase_spider_twists_by_minus_half_pi():
    d = spider(phase=F(1, 4), nin=1, nout=2)
    w = PauliSupport.from_letters({0: "X", 1: "Y", 2: "Y"})
    dm = defects(d, w)
    assert dm == {0: F(3, 2)}
    assert oracle.local_twist(d, 0, w) % 2 == pytest.approx(1.5)


def test_product_laws():
    d = star()
    w = basic_semiweb(d, 1)
    assert product(w, w).is_empty()
    assert product(w, PauliSupport()) == w
    v = basic_semiweb(d, 0)
    z_in = PauliSupport.from_letters({5: "Z"})
    assert 1 in parity_violations(d, v) and 1 in parity_violations(d, z_in)
    assert 1 not in parity_violations(d, product(v, z_in))


def test_isolated_leaf_basic_semiweb():
    d = Diagram()
    n = d.add_z()
    d.add_wire(n, d.new_output())
    assert basic_semiweb(d, n).letters() == {0: "X"}


def test_edge_semiwebs():
    d = Diagram()
    d.add_wire(d.new_input(), d.new_output())
    (e,) = edges(d)
    assert edge_semiweb(d, e, "Z").letters() == {0: "Z"}
    d = Diagram()
    z, x = d.add_z(), d.add_x()
    d.add_wire(d.new_input(), z)
    d.connect(z, x, hadamard=True)
    d.add_wire(x, d.new_output())
    (e,) = [e for e in edges(d) if e.is_h]
    first = "Z" if End.node(z) in d.wires[e.wires[0]] else "X"
    s = edge_semiweb(d, e, first)
    assert {s.letter(e.wires[0]), s.letter(e.wires[1])} == {"X", "Z"}
    with pytest.raises(InadmissibleEdgeError):
        edge_semiweb(d, e, "X" if first == "Z" else "Z")
    d = Diagram()
    a, b = d.add_z(), d.add_z()
    d.add_wire(d.new_input(), a)
    d.add_wire(a, b)
    d.add_wire(b, d.new_output())
    (e,) = [e for e in edges(d) if e.ends[0].is_node and e.ends[1].is_node]
    with pytest.raises(InadmissibleEdgeError):
        edge_semiweb(d, e, "X")


def test_decompose_special_cases():
    d = star()
    b = basic_semiweb(d, 2)
    B, parts = decompose(d, b)
    assert len(B) == 1 and parts == []
    (e,) = [e for e in edges(d) if e.wires == (0,)]
    s = edge_semiweb(d, e, "Z")
    assert decompose(d, s) == ([], [s])


@given(seeds)
def test_decompose_reconstructs(seed):
    rng = random.Random(seed)
    d = random_circuit_diagram(rng, 12, 3)
    basis = web_basis(d, WebMode.SEMIWEBS)
    w = product(*[s for s in basis if rng.random() < 0.5])
    B, parts = decompose(d, w)
    basics = basic_semiwebs(d)
    assert product(*[basics[v] for v in B], *parts) == w


@given(seeds)
def test_semiweb_products_stay_semiwebs(seed):
    rng = random.Random(seed)
    d = random_circuit_diagram(rng, 12, 3)
    basis = web_basis(d, WebMode.SEMIWEBS)
    a = product(*[s for s in basis if rng.random() < 0.5])
    b = product(*[s for s in basis if rng.random() < 0.5])
    assert is_semiweb(d, product(a, b))


@given(seeds)
def test_web_basis_members_are_webs_and_fire(seed):
    rng = random.Random(seed)
    d = random_circuit_diagram(rng, 10, 3)
    for w in web_basis(d):
        assert is_pauli_web(d, w)
        assert oracle.verify_firing(d, w).sign == firing_sign(d, w)


def test_identity_wire_web_basis():
    d = Diagram()
    d.add_wire(d.new_input(), d.new_output())
    assert sorted(w.letters()[0] for w in web_basis(d)) == ["X", "Z"]


def test_web_counts_of_gallery_examples():
    assert web_class_counts(clifford_unitary3())[WebClass.LOGICAL] == 6
    c = web_class_counts(encoder_422())
    assert (c[WebClass.LOGICAL], c[WebClass.STABILISER]) == (4, 2)


def test_classify_examples():
    d = clifford_unitary3()
    lz, _ = check_isometry(d)
    assert classify(d, lz[0]) is WebClass.LOGICAL
    e = encoder_422()
    pins = {x: "I" for x in e.inputs} | {x: "Z" for x in e.outputs}
    zzzz = solve_constrained(e, SemiwebConstraintSet(pins=pins, no_defect=set(e.spiders())))
    assert zzzz is not None and classify(e, zzzz) is WebClass.STABILISER


def test_encoder_isometry_has_four_logical_webs():
    lz, lx = check_isometry(encoder_422())
    assert len(lz) == len(lx) == 2
    assert all(is_pauli_web(encoder_422(), w) for w in lz + lx)


def test_projector_is_not_an_isometry():
    assert check_isometry(spider(nin=2, nout=0)) is None


def test_solve_constrained_basics():
    d = clifford_unitary3()
    assert solve_constrained(d, SemiwebConstraintSet()) == PauliSupport()
    w0 = d.inputs[0]
    assert solve_constrained(d, SemiwebConstraintSet(pins={w0: "X"}, no_defect=set(d.spiders()))) is not None


@given(seeds)
def test_pinning_a_known_boundary_recovers_it(seed):
    rng = random.Random(seed)
    d = random_circuit_diagram(rng, 12, 3)
    basis = web_basis(d)
    w = product(*[s for s in basis if rng.random() < 0.5])
    pins = {x: w.letter(x) for x in d.inputs + d.outputs}
    got = solve_constrained(d, SemiwebConstraintSet(pins=pins, no_defect=set(d.spiders())))
    assert got is not None and is_pauli_web(d, got)
    assert {x: got.letter(x) for x in pins} == pins
    diff = product(got, w)
    vec = lambda s: s.z | (s.x << 64)
    assert gf2.in_span([vec(b) for b in basis], vec(diff))
