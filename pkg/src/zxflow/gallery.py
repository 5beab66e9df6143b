"""Small hand-built diagrams with known web and flow structure."""

from __future__ import annotations

from fractions import Fraction

from .circuit import GateList
from .corpus import circuit_to_diagram
from .diagram import Diagram
from .flow import ZXFlow
from .pauli import PauliSupport

__all__ = [
    "two_phase_line",
    "two_phase_line_flow",
    "clifford_unitary3",
    "encoder_422",
    "ghz_state",
    "t_gate",
    "gallery",
]


def two_phase_line() -> Diagram:
    """``in - Z(pi/4) - X(pi/4) - out``.

    Nodes 0 and 1 are the two spiders; wires 0, 1, 2 run from input to output.
    """
    d = Diagram()
    a = d.add_z(Fraction(1, 4))
    b = d.add_x(Fraction(1, 4))
    d.add_wire(d.new_input(), a)
    d.add_wire(a, b)
    d.add_wire(b, d.new_output())
    return d


def two_phase_line_flow(reverse: bool = False) -> ZXFlow:
    """Hand-written flow for :func:`two_phase_line`.

    ``f(0)`` colours the two wires right of the Z spider with Z, which twists
    the Z spider by pi and the X spider by -pi/2.  ``f(1)`` puts X on the
    output wire only.
    """
    z = PauliSupport.from_letters({0: "Z", 1: "Z", 2: "Z"})
    x = PauliSupport.from_letters({0: "X", 1: "X", 2: "X"})
    flows = {
        0: PauliSupport.from_letters({1: "Z", 2: "Z"}),
        1: PauliSupport.from_letters({2: "X"}),
    }
    order = [1, 0] if reverse else [0, 1]
    return ZXFlow(order, [(z, x)], flows)


def _circuit(n: int, gates, ancillae=()) -> Diagram:
    c = GateList(n, ancillae=list(ancillae))
    for name, *rest in gates:
        if name == "rz":
            c.append(name, rest[0], angle=rest[1])
        else:
            c.append(name, *rest)
    return circuit_to_diagram(c)


def clifford_unitary3() -> Diagram:
    """Three-qubit Clifford unitary built from CX, H, CZ and S."""
    return _circuit(3, [("cx", 0, 1), ("h", 2), ("cz", 1, 2), ("s", 0)])


def encoder_422() -> Diagram:
    """Encoder for the [[4,2,2]] code; qubits 2 and 3 start in ``|0>``.

    Stabilisers ZZZZ and XXXX.
    """
    return _circuit(4, [("cx", 0, 2), ("cx", 1, 2), ("h", 3), ("cx", 3, 0), ("cx", 3, 1), ("cx", 3, 2)], ancillae=(2, 3))


def ghz_state(n: int = 3) -> Diagram:
    d = Diagram()
    z = d.add_z()
    for _ in range(n):
        d.add_wire(z, d.new_output())
    return d


def t_gate() -> Diagram:
    d = Diagram()
    z = d.add_z(Fraction(1, 4))
    d.add_wire(d.new_input(), z)
    d.add_wire(z, d.new_output())
    return d


def gallery() -> dict[str, Diagram]:
    return {
        "two-phase-line": two_phase_line(),
        "clifford-unitary-3": clifford_unitary3(),
        "encoder-422": encoder_422(),
        "ghz-3": ghz_state(3),
        "t-gate": t_gate(),
        "phase-gadget-2": _circuit(
            3,
            [("h", 2), ("cx", 1, 2), ("rz", 2, Fraction(7, 4)), ("cx", 0, 2), ("rz", 2, Fraction(1, 4)), ("h", 2)],
        ),
    }
