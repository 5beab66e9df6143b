"""Random and hand-made test diagrams.

Everything takes an explicit :class:`random.Random` so a corpus is fixed by
its seed.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .circuit import Gate, GateList
from .diagram import Diagram, End, OpenGraph, from_open_graph, to_open_graph
from .flow import PauliFlow, ZXFlow, find_pauli_flow, find_zx_flow

__all__ = [
    "PHASES",
    "circuit_to_diagram",
    "random_circuit",
    "random_circuit_diagram",
    "random_flowful",
    "random_open_graph",
    "random_graph_like",
    "CorpusItem",
    "standard_corpus",
]

PHASES = [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(1, 4)]
_NON_CLIFFORD = [Fraction(1, 4), Fraction(3, 4), Fraction(5, 4), Fraction(7, 4), Fraction(1, 8)]


def circuit_to_diagram(c: GateList) -> Diagram:
    """Diagram with the same matrix as ``c``, scalar included."""
    d = Diagram()
    front: list[End] = []
    for q in range(c.n_qubits):
        if q in c.ancillae:
            n = d.add_x()
            d.scalar /= math.sqrt(2)
            front.append(End.node(n))
        else:
            front.append(d.new_input())

    def attach(q: int, n: int) -> None:
        d.add_wire(front[q], n)
        front[q] = End.node(n)

    for g in c.gates:
        if g.name == "h":
            attach(g.qubits[0], d.add_h())
        elif g.name in ("s", "sdg", "z", "rz"):
            ph = {"s": Fraction(1, 2), "sdg": Fraction(3, 2), "z": Fraction(1)}.get(g.name, g.angle)
            attach(g.qubits[0], d.add_z(ph))
            if g.name == "rz":
                d.scalar *= cmath.exp(-0.5j * math.pi * float(g.angle))
        elif g.name == "x":
            attach(g.qubits[0], d.add_x(1))
        elif g.name == "cx":
            a, b = g.qubits
            za, xb = d.add_z(), d.add_x()
            attach(a, za)
            attach(b, xb)
            d.add_wire(za, xb)
            d.scalar *= math.sqrt(2)
        elif g.name == "cz":
            a, b = g.qubits
            za, zb = d.add_z(), d.add_z()
            attach(a, za)
            attach(b, zb)
            d.connect(za, zb, hadamard=True)
            d.scalar *= math.sqrt(2)
    for q in range(c.n_qubits):
        d.add_wire(front[q], d.new_output())
    d.scalar *= cmath.exp(1j * math.pi * float(c.phase))
    return d


def random_circuit(rng: random.Random, n_qubits: int, n_gates: int, t_prob: float = 0.3, n_ancillae: int = 0) -> GateList:
    c = GateList(n_qubits, ancillae=list(range(n_qubits - n_ancillae, n_qubits)))
    for _ in range(n_gates):
        r = rng.random()
        if n_qubits >= 2 and r < 0.3:
            a, b = rng.sample(range(n_qubits), 2)
            c.gates.append(Gate(rng.choice(["cx", "cz"]), (a, b)))
        elif r < 0.3 + t_prob:
            c.gates.append(Gate.rz(rng.randrange(n_qubits), rng.choice(_NON_CLIFFORD)))
        else:
            c.gates.append(Gate(rng.choice(["h", "s", "sdg", "x", "z"]), (rng.randrange(n_qubits),)))
    return c


def random_circuit_diagram(rng: random.Random, max_wires: int = 14, max_qubits: int = 3) -> Diagram:
    """A circuit diagram (possibly with ancillae) within a wire budget."""
    while True:
        n = rng.randint(1, max_qubits)
        anc = rng.randint(0, n - 1) if n > 1 and rng.random() < 0.3 else 0
        budget = max(1, (max_wires - n) // 2)
        c = random_circuit(rng, n, rng.randint(1, budget), n_ancillae=anc)
        d = circuit_to_diagram(c)
        if len(d.wires) <= max_wires:
            return d


def random_flowful(
    rng: random.Random,
    max_wires: int = 14,
    max_qubits: int = 3,
    n_rewrites: int = 0,
) -> tuple[Diagram, ZXFlow]:
    """A circuit diagram, optionally scrambled by random flow-preserving rewrites."""
    from .rewrite import Direction, RewriteError, apply_step, candidate_steps, transport_flow

    d = random_circuit_diagram(rng, max_wires, max_qubits)
    f = find_zx_flow(d)
    assert f is not None, "circuit diagrams always have a flow"
    for _ in range(n_rewrites):
        steps = [s for s in candidate_steps(d) if s.direction is Direction.L2R or rng.random() < 0.5]
        rng.shuffle(steps)
        for s in steps:
            try:
                r = apply_step(d, s)
            except RewriteError:
                continue
            if len(r.diagram.wires) > max_wires:
                continue
            f = transport_flow(d, r, f)
            d = r.diagram
            break
    return d, f


def random_open_graph(rng: random.Random, n_vertices: int, n_inputs: int, n_outputs: int, p_edge: float = 0.4) -> OpenGraph:
    vs = list(range(n_vertices))
    edges = {frozenset((a, b)) for a in vs for b in vs if a < b and rng.random() < p_edge}
    inputs = rng.sample(vs, n_inputs)
    outputs = rng.sample(vs, n_outputs)
    return OpenGraph(vertices=vs, edges=edges, inputs=inputs, outputs=outputs, labels={}, angles={})


def random_graph_like(
    rng: random.Random,
    max_vertices: int = 10,
    tries: int = 200,
) -> tuple[Diagram, OpenGraph, PauliFlow]:
    """Graph-like diagram whose open graph has a Pauli flow for its labels.

    Labels are drawn at random; X and Y labels come from Pauli and
    +-pi/2 phases on the vertex, XY from arbitrary phases.
    """
    for _ in range(tries):
        n = rng.randint(2, max_vertices)
        k_in = rng.randint(1, min(3, n))
        k_out = rng.randint(k_in, min(n, k_in + 2))
        g = random_open_graph(rng, n, k_in, k_out, rng.choice([0.3, 0.4, 0.5]))
        angles = {}
        for v in g.vertices:
            if v in g.outputs:
                angles[v] = rng.choice(PHASES)
                continue
            r = rng.random()
            if v in g.inputs:
                angles[v] = rng.choice([Fraction(0), Fraction(1), Fraction(1, 4), Fraction(7, 4)])
            elif r < 0.25:
                angles[v] = rng.choice([Fraction(0), Fraction(1)])
            elif r < 0.45:
                angles[v] = rng.choice([Fraction(1, 2), Fraction(3, 2)])
            else:
                angles[v] = rng.choice(_NON_CLIFFORD)
        g = OpenGraph(g.vertices, g.edges, g.inputs, g.outputs, {}, angles)
        d = from_open_graph(g)
        if any(d.degree(v) == 0 for v in d.spiders()):
            continue  # a legless spider is a scalar and can never be corrected
        g2 = to_open_graph(d)
        pf = find_pauli_flow(g2)
        if pf is not None:
            return d, g2, pf
    raise RuntimeError("no graph with a Pauli flow found")


@dataclass
class CorpusItem:
    name: str
    diagram: Diagram
    flow: Optional[ZXFlow]


def standard_corpus(seed: int = 0, size: int = 40, max_wires: int = 12) -> list[CorpusItem]:
    """Gallery examples followed by seeded random flowful diagrams."""
    from .gallery import gallery

    out = [CorpusItem(name, d, find_zx_flow(d)) for name, d in gallery().items() if len(d.wires) <= max_wires]
    rng = random.Random(seed)
    for i in range(size):
        d, f = random_flowful(rng, max_wires=max_wires, n_rewrites=rng.randint(0, 4))
        out.append(CorpusItem(f"random-{i}", d, f))
    return out
