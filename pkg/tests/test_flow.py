import itertools
import random
from fractions import Fraction as F

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from zxflow.corpus import random_circuit_diagram, random_flowful, random_graph_like
from zxflow.diagram import Diagram, OpenGraph, from_open_graph, to_open_graph
from zxflow.flow import (
    PauliFlow,
    ZXFlow,
    anticomm_sets,
    find_pauli_flow,
    find_zx_flow,
    focus,
    is_focused,
    pauli_flow_from_strong,
    strong_flow_from_pauli_flow,
    verify_pauli_flow,
    verify_zx_flow,
)
from zxflow.gallery import clifford_unitary3, two_phase_line, two_phase_line_flow
from zxflow.pauli import PauliSupport
from zxflow.webs import check_isometry, parity_violations, product

seeds = st.integers(0, 10**6)


def path(n, angles=None):
    vs = list(range(n))
    return OpenGraph(
        vertices=vs,
        edges={frozenset((i, i + 1)) for i in range(n - 1)},
        inputs=[0],
        outputs=[n - 1],
        labels={},
        angles=angles or {v: F(1, 4) for v in vs},
    )


def brute_force_def(g, order, labels, corr):
    """Direct matrix form of the two-clause definition."""
    n = len(g.vertices)
    adj = np.zeros((n, n), dtype=int)
    for e in g.edges:
        a, b = tuple(e)
        adj[a, b] = adj[b, a] = 1
    pos = {v: i for i, v in enumerate(order)}
    for u in order:
        c = np.zeros(n, dtype=int)
        c[list(corr[u])] = 1
        odd = adj.dot(c) % 2
        sets = {"X": odd, "Z": c, "Y": (c + odd) % 2}
        for P in ("X", "Y") if labels[u] == "XY" else labels[u]:
            if not sets[P][u]:
                return False
        for v in order:
            if v != u and pos[v] < pos[u]:
                for P in ("X", "Y") if labels[v] == "XY" else labels[v]:
                    if sets[P][v]:
                        return False
    return True


def test_anticommutation_sets():
    g = path(3)
    assert anticomm_sets(g, set()) == (set(), set(), set())
    assert anticomm_sets(g, {1}) == ({0, 2}, {0, 1, 2}, {1})
    iso = OpenGraph([0], set(), [], [], {}, {})
    assert anticomm_sets(iso, {0}) == (set(), {0}, {0})


def test_successor_flow_on_a_path():
    g = path(5)
    labels = {v: "XY" for v in range(4)}
    corr = {v: {v + 1} for v in range(4)}
    assert brute_force_def(g, [0, 1, 2, 3], labels, corr)
    ok, why = verify_pauli_flow(g, PauliFlow([0, 1, 2, 3], labels, corr))
    assert ok and why == []
    assert not brute_force_def(g, [3, 2, 1, 0], labels, corr)
    ok, why = verify_pauli_flow(g, PauliFlow([3, 2, 1, 0], labels, corr))
    assert not ok and any(v.startswith("(ii)") for v in why)


def test_empty_pauli_flow():
    g = OpenGraph([], set(), [], [], {}, {})
    assert verify_pauli_flow(g, PauliFlow([], {}, {}))[0]


@given(seeds)
def test_found_pauli_flows_agree_with_brute_force(seed):
    rng = random.Random(seed)
    _, g, pf = random_graph_like(rng, 6)
    assert verify_pauli_flow(g, pf)[0]
    assert brute_force_def(g, pf.order, pf.labels, pf.corrections)


def test_drawn_flow_and_reversal():
    d = two_phase_line()
    assert verify_zx_flow(d, two_phase_line_flow()) == (True, [])
    ok, why = verify_zx_flow(d, two_phase_line_flow(reverse=True))
    assert not ok and why == ["f(0): defect at 1, which does not come after 0"]
    assert is_focused(d, two_phase_line_flow())


def test_clifford_isometry_flow():
    d = clifford_unitary3()
    lz, lx = check_isometry(d)
    f = ZXFlow([], list(zip(lz, lx)), {})
    assert verify_zx_flow(d, f)[0]
    found = find_zx_flow(d)
    assert found.order == [] and verify_zx_flow(d, found)[0]


def test_find_flow_on_the_two_phase_line():
    d = two_phase_line()
    f = find_zx_flow(d)
    assert f.order == [0, 1] and verify_zx_flow(d, f)[0]


def test_no_flow_for_a_projector():
    d = Diagram()
    z = d.add_z()
    d.add_wire(d.new_input(), z)
    d.add_wire(d.new_input(), z)
    assert find_zx_flow(d) is None


def test_empty_diagram_is_focused():
    assert is_focused(Diagram(), ZXFlow([], [], {}))


def test_unfocused_flow_is_detected_and_focused():
    d = two_phase_line()
    f = two_phase_line_flow()
    bad = f.copy()
    bad.flows[0] = product(f.flows[0], f.flows[1])
    assert parity_violations(d, bad.flows[0]) == [0, 1]
    assert verify_zx_flow(d, bad)[0] and not is_focused(d, bad)
    fixed, rep = focus(d, bad)
    assert rep.flows_modified == 1 and fixed.flows[0] == f.flows[0]
    # a logical with a parity violation at spider 0 gets multiplied by f(0) once
    lz = PauliSupport.from_letters({0: "Z"})
    g = ZXFlow(f.order, [(lz, f.logicals[0][1])], dict(f.flows))
    assert verify_zx_flow(d, g)[0] and not is_focused(d, g)
    h, rep = focus(d, g)
    assert rep.logicals_modified == 1
    assert h.logicals[0][0] == product(lz, f.flows[0])
    assert is_focused(d, h)


def test_focus_leaves_focused_flows_alone():
    d, f = two_phase_line(), two_phase_line_flow()
    g, rep = focus(d, f)
    assert g.to_json() == f.to_json() and (rep.flows_modified, rep.logicals_modified) == (0, 0)


@given(seeds)
def test_focus_properties(seed):
    rng = random.Random(seed)
    d, f = random_flowful(rng, 14, 3, n_rewrites=rng.randint(0, 5))
    assert verify_zx_flow(d, f)[0]
    g, _ = focus(d, f)
    assert verify_zx_flow(d, g)[0] and is_focused(d, g) and g.order == f.order
    for v, w in g.flows.items():
        assert set(parity_violations(d, w)) <= {v}
    assert focus(d, g)[0].to_json() == g.to_json()


@given(seeds)
def test_found_flows_verify(seed):
    d = random_circuit_diagram(random.Random(seed), 14, 3)
    f = find_zx_flow(d)
    assert f is not None and verify_zx_flow(d, f)[0]
    assert ZXFlow.from_json(f.to_json()).to_json() == f.to_json()


def test_smallest_graph_like_instance():
    g = OpenGraph([0, 1], {frozenset((0, 1))}, [0], [1], {}, {0: F(1, 4), 1: F(0)})
    d = from_open_graph(g)
    g2 = to_open_graph(d)
    pf = find_pauli_flow(g2)
    assert pf is not None and pf.corrections == {0: {1}}
    sf = strong_flow_from_pauli_flow(d, pf)
    assert sf.strong and verify_zx_flow(d, sf)[0]
    back = pauli_flow_from_strong(d, sf)
    assert verify_pauli_flow(g2, back)[0] and back.corrections == {0: {1}}


def test_output_only_graph():
    g = OpenGraph([0, 1], {frozenset((0, 1))}, [], [0, 1], {}, {0: F(0), 1: F(0)})
    d = from_open_graph(g)
    pf = find_pauli_flow(to_open_graph(d))
    assert pf.order == [] and pf.corrections == {}
    sf = strong_flow_from_pauli_flow(d, pf)
    assert verify_zx_flow(d, sf)[0]
    assert pauli_flow_from_strong(d, sf).corrections == {}


@given(seeds)
def test_pauli_flow_round_trip(seed):
    d, g, pf = random_graph_like(random.Random(seed), 8)
    sf = strong_flow_from_pauli_flow(d, pf)
    assert verify_zx_flow(d, sf)[0]
    assert verify_pauli_flow(g, pauli_flow_from_strong(d, sf))[0]


def test_every_order_of_two_phase_line_checked():
    d = two_phase_line()
    f = two_phase_line_flow()
    verdicts = {}
    for order in itertools.permutations([0, 1]):
        g = ZXFlow(list(order), f.logicals, f.flows)
        verdicts[order] = verify_zx_flow(d, g)[0]
    assert verdicts == {(0, 1): True, (1, 0): False}
