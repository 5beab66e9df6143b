"""Combinatorial ZX-diagrams.

A :class:`Diagram` is a bag of nodes (Z/X spiders and H-gates) and wires.
Every wire has two typed ends, each attached to a node, an input slot or an
output slot.  Phases are exact rational multiples of pi stored as
:class:`fractions.Fraction` values in ``[0, 2)``.

Node and wire ids are plain integers that are never reused, so data that
refers to ids (webs, flows) stays meaningful across rewrites.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional, Union

__all__ = [
    "NodeType",
    "End",
    "Node",
    "Edge",
    "Diagram",
    "OpenGraph",
    "normalize_phase",
    "is_clifford_phase",
    "is_pauli_phase",
    "parse_phase",
    "format_phase",
    "validate",
    "edges",
    "is_graph_like",
    "graph_like_violations",
    "to_open_graph",
    "from_open_graph",
    "measurement_label",
    "fusable_components",
    "NotGraphLikeError",
]

PhaseLike = Union[Fraction, int, str]


# --------------------------------------------------------------------------
# phases


def normalize_phase(p: PhaseLike) -> Fraction:
    """Reduce a multiple of pi into ``[0, 2)``."""
    if isinstance(p, str):
        p = parse_phase(p)
    return Fraction(p) % 2


def is_clifford_phase(p: Fraction) -> bool:
    return normalize_phase(p).denominator <= 2


def is_pauli_phase(p: Fraction) -> bool:
    return normalize_phase(p).denominator == 1


def parse_phase(s: str) -> Fraction:
    """Parse ``"num/den"`` (implicit factor pi)."""
    return Fraction(s.strip()) % 2


def format_phase(p: Fraction) -> str:
    p = normalize_phase(p)
    return f"{p.numerator}/{p.denominator}"


# --------------------------------------------------------------------------
# data model


class NodeType(str, Enum):
    Z = "Z"
    X = "X"
    H = "H"

    @property
    def opposite(self) -> "NodeType":
        if self is NodeType.H:
            raise ValueError("H has no opposite colour")
        return NodeType.X if self is NodeType.Z else NodeType.Z


class End(NamedTuple):
    """One end of a wire: ``kind`` is ``"node"``, ``"input"`` or ``"output"``."""

    kind: str
    ref: int

    @staticmethod
    def node(n: int) -> "End":
        return End("node", n)

    @staticmethod
    def input(slot: int) -> "End":
        return End("input", slot)

    @staticmethod
    def output(slot: int) -> "End":
        return End("output", slot)

    @property
    def is_node(self) -> bool:
        return self.kind == "node"

    @property
    def is_boundary(self) -> bool:
        return self.kind != "node"


@dataclass(frozen=True)
class Node:
    type: NodeType
    phase: Fraction = Fraction(0)

    @property
    def is_spider(self) -> bool:
        return self.type is not NodeType.H


class Diagram:
    """A ZX-diagram with stable integer ids.

    ``inputs[i]``/``outputs[i]`` hold the id of the wire attached to input
    (output) slot ``i``.  A wire may be both an input and an output.
    """

    def __init__(self) -> None:
        self.nodes: dict[int, Node] = {}
        self.wires: dict[int, tuple[End, End]] = {}
        self.inputs: list[Optional[int]] = []
        self.outputs: list[Optional[int]] = []
        self.scalar: complex = 1.0 + 0.0j
        self._incidence: dict[int, list[int]] = {}
        self._next_node = 0
        self._next_wire = 0

    # -- construction -----------------------------------------------------

    def add_node(self, type: Union[NodeType, str], phase: PhaseLike = 0, id: Optional[int] = None) -> int:
        type = NodeType(type)
        if id is None:
            id = self._next_node
        elif id in self.nodes:
            raise ValueError(f"node id {id} already in use")
        self._next_node = max(self._next_node, id + 1)
        self.nodes[id] = Node(type, normalize_phase(phase))
        self._incidence[id] = []
        return id

    def add_z(self, phase: PhaseLike = 0) -> int:
        return self.add_node(NodeType.Z, phase)

    def add_x(self, phase: PhaseLike = 0) -> int:
        return self.add_node(NodeType.X, phase)

    def add_h(self) -> int:
        return self.add_node(NodeType.H)

    def new_input(self) -> End:
        """Reserve the next input slot; attach it with :meth:`add_wire`."""
        self.inputs.append(None)
        return End.input(len(self.inputs) - 1)

    def new_output(self) -> End:
        self.outputs.append(None)
        return End.output(len(self.outputs) - 1)

    def add_wire(self, a: Union[End, int], b: Union[End, int], id: Optional[int] = None) -> int:
        """Add a wire; bare ints are read as node ids."""
        a, b = _as_end(a), _as_end(b)
        if id is None:
            id = self._next_wire
        elif id in self.wires:
            raise ValueError(f"wire id {id} already in use")
        self._next_wire = max(self._next_wire, id + 1)
        self.wires[id] = (a, b)
        for e in (a, b):
            self._attach(id, e)
        return id

    def connect(self, a: Union[End, int], b: Union[End, int], hadamard: bool = False) -> list[int]:
        """Join ``a`` and ``b`` by a plain wire, or through a fresh H node."""
        if not hadamard:
            return [self.add_wire(a, b)]
        h = self.add_h()
        return [self.add_wire(a, h), self.add_wire(h, b)]

    def remove_wire(self, w: int) -> None:
        a, b = self.wires.pop(w)
        for e in (a, b):
            if e.is_node:
                self._incidence[e.ref].remove(w)
            elif e.kind == "input" and self.inputs[e.ref] == w:
                self.inputs[e.ref] = None
            elif e.kind == "output" and self.outputs[e.ref] == w:
                self.outputs[e.ref] = None

    def remove_node(self, n: int) -> None:
        if self._incidence[n]:
            raise ValueError(f"node {n} still has wires attached")
        del self.nodes[n]
        del self._incidence[n]

    def set_end(self, w: int, index: int, end: End) -> None:
        """Re-attach end ``index`` (0 or 1) of wire ``w`` to ``end``."""
        ends = list(self.wires[w])
        old = ends[index]
        if old.is_node:
            self._incidence[old.ref].remove(w)
        elif old.kind == "input" and self.inputs[old.ref] == w:
            self.inputs[old.ref] = None
        elif old.kind == "output" and self.outputs[old.ref] == w:
            self.outputs[old.ref] = None
        ends[index] = end
        self.wires[w] = (ends[0], ends[1])
        self._attach(w, end)

    def set_phase(self, n: int, phase: PhaseLike) -> None:
        self.nodes[n] = Node(self.nodes[n].type, normalize_phase(phase))

    def set_type(self, n: int, type: Union[NodeType, str]) -> None:
        self.nodes[n] = Node(NodeType(type), self.nodes[n].phase)

    def _attach(self, w: int, e: End) -> None:
        if e.is_node:
            if e.ref not in self.nodes:
                raise KeyError(f"unknown node {e.ref}")
            self._incidence[e.ref].append(w)
            self._incidence[e.ref].sort()
        elif e.kind == "input":
            self.inputs[e.ref] = w
        else:
            self.outputs[e.ref] = w

    # -- wire surgery used by rewrites -------------------------------------

    def end_index(self, w: int, n: int) -> int:
        """Index of an end of ``w`` attached to node ``n``."""
        a, b = self.wires[w]
        if a == End.node(n):
            return 0
        if b == End.node(n):
            return 1
        raise ValueError(f"wire {w} is not attached to node {n}")

    def other_end(self, w: int, n: int) -> End:
        a, b = self.wires[w]
        return b if a == End.node(n) else a

    def split_wire(self, w: int, type: Union[NodeType, str], phase: PhaseLike = 0, keep: int = 0) -> tuple[int, int]:
        """Insert a degree-2 node on ``w``.

        ``w`` keeps its end ``keep``; the other end moves to a new wire.
        Returns ``(node, new_wire)``.
        """
        n = self.add_node(type, phase)
        far = self.wires[w][1 - keep]
        self.set_end(w, 1 - keep, End.node(n))
        nw = self.add_wire(n, far)
        return n, nw

    def dissolve(self, n: int, keep: Optional[int] = None) -> int:
        """Remove a degree-2 node, joining its two wires into one.

        The surviving wire is ``keep`` (defaults to the lower id).
        """
        legs = self.legs(n)
        if len(legs) != 2 or legs[0] == legs[1]:
            raise ValueError(f"node {n} is not a degree-2 node on two distinct wires")
        if keep is None:
            keep = min(legs)
        drop = legs[1] if legs[0] == keep else legs[0]
        far = self.other_end(drop, n)
        self.remove_wire(drop)
        self.set_end(keep, self.end_index(keep, n), far)
        self.remove_node(n)
        return keep

    # -- queries -------------------------------------------------------------

    def legs(self, n: int) -> list[int]:
        """Wires at ``n`` in id order; a self-loop appears twice."""
        return sorted(self._incidence[n])

    def degree(self, n: int) -> int:
        return len(self.legs(n))

    def type(self, n: int) -> NodeType:
        return self.nodes[n].type

    def phase(self, n: int) -> Fraction:
        return self.nodes[n].phase

    def spiders(self) -> list[int]:
        return sorted(n for n, v in self.nodes.items() if v.is_spider)

    def h_nodes(self) -> list[int]:
        return sorted(n for n, v in self.nodes.items() if not v.is_spider)

    def is_clifford(self, n: int) -> bool:
        return is_clifford_phase(self.nodes[n].phase)

    def non_clifford_spiders(self) -> list[int]:
        return [n for n in self.spiders() if not self.is_clifford(n)]

    def input_wires(self) -> list[int]:
        return [w for w in self.inputs if w is not None]

    def output_wires(self) -> list[int]:
        return [w for w in self.outputs if w is not None]

    def boundary_wires(self) -> set[int]:
        return set(self.input_wires()) | set(self.output_wires())

    def wire_ids(self) -> list[int]:
        return sorted(self.wires)

    def copy(self) -> "Diagram":
        d = Diagram()
        d.nodes = dict(self.nodes)
        d.wires = dict(self.wires)
        d.inputs = list(self.inputs)
        d.outputs = list(self.outputs)
        d.scalar = self.scalar
        d._incidence = {n: list(ws) for n, ws in self._incidence.items()}
        d._next_node = self._next_node
        d._next_wire = self._next_wire
        return d

    def __repr__(self) -> str:
        return (
            f"Diagram(nodes={len(self.nodes)}, wires={len(self.wires)}, "
            f"inputs={len(self.inputs)}, outputs={len(self.outputs)})"
        )

    # -- JSON ------------------------------------------------------------------

    def to_dict(self) -> dict:
        def end(e: End) -> dict:
            return {e.kind: e.ref}

        return {
            "nodes": [
                {"id": n, "type": v.type.value, "phase": format_phase(v.phase)}
                for n, v in sorted(self.nodes.items())
            ],
            "wires": [{"id": w, "ends": [end(a), end(b)]} for w, (a, b) in sorted(self.wires.items())],
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "scalar": {"re": self.scalar.real, "im": self.scalar.imag},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Diagram":
        d = cls()
        for v in data["nodes"]:
            d.add_node(NodeType(v["type"]), parse_phase(str(v.get("phase", "0"))), id=int(v["id"]))
        d.inputs = [None] * len(data.get("inputs", []))
        d.outputs = [None] * len(data.get("outputs", []))
        for w in data["wires"]:
            ends = []
            for e in w["ends"]:
                ((kind, ref),) = e.items()
                if kind not in ("node", "input", "output"):
                    raise ValueError(f"bad wire end {e!r}")
                ends.append(End(kind, int(ref)))
            d.add_wire(ends[0], ends[1], id=int(w["id"]))
        for slot, w in enumerate(data.get("inputs", [])):
            if d.inputs[slot] != w:
                raise ValueError(f"input slot {slot} does not match its wire")
        for slot, w in enumerate(data.get("outputs", [])):
            if d.outputs[slot] != w:
                raise ValueError(f"output slot {slot} does not match its wire")
        s = data.get("scalar", {"re": 1.0, "im": 0.0})
        d.scalar = complex(float(s["re"]), float(s["im"]))
        return d

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        return cls.from_dict(json.loads(text))


def _as_end(x: Union[End, int]) -> End:
    return x if isinstance(x, End) else End.node(int(x))


# --------------------------------------------------------------------------
# validation


def validate(d: Diagram) -> list[str]:
    """Return human-readable invariant violations (empty when valid)."""
    out = []
    for slot, w in enumerate(d.inputs):
        if w is None or w not in d.wires or End.input(slot) not in d.wires[w]:
            out.append(f"input {slot}: unattached")
    for slot, w in enumerate(d.outputs):
        if w is None or w not in d.wires or End.output(slot) not in d.wires[w]:
            out.append(f"output {slot}: unattached")
    for w, (a, b) in sorted(d.wires.items()):
        if a.is_boundary and b.is_boundary and a.kind == b.kind:
            out.append(f"wire {w}: both ends are {a.kind}s")
        for e in (a, b):
            if e.is_node and e.ref not in d.nodes:
                out.append(f"wire {w}: dangling end at missing node {e.ref}")
            if e.kind == "input" and (e.ref >= len(d.inputs) or d.inputs[e.ref] != w):
                out.append(f"wire {w}: input slot {e.ref} does not list it")
            if e.kind == "output" and (e.ref >= len(d.outputs) or d.outputs[e.ref] != w):
                out.append(f"wire {w}: output slot {e.ref} does not list it")
    for n, v in sorted(d.nodes.items()):
        if v.type is NodeType.H:
            if d.degree(n) != 2:
                out.append(f"node {n}: H-degree {d.degree(n)} != 2")
            if v.phase != 0:
                out.append(f"node {n}: H-phase {format_phase(v.phase)} != 0")
    return out


# --------------------------------------------------------------------------
# edges


@dataclass(frozen=True)
class Edge:
    """A plain edge ``(w,)`` or an H-edge ``(w1, w2)`` through ``h``.

    ``ends`` are the two far attachments (spiders or boundary slots).
    """

    wires: tuple[int, ...]
    ends: tuple[End, End]
    h: Optional[int] = None

    @property
    def is_h(self) -> bool:
        return self.h is not None


def _hh_wires(d: Diagram) -> set[int]:
    out = set()
    for w, (a, b) in d.wires.items():
        if a.is_node and b.is_node and d.type(a.ref) is NodeType.H and d.type(b.ref) is NodeType.H:
            out.add(w)
    return out


def edges(d: Diagram) -> list[Edge]:
    """Partition the wires into plain edges and H-edges.

    An H node whose wires both reach something other than another H node
    yields one H-edge; every other wire is a plain edge.
    """
    hh = _hh_wires(d)
    used: set[int] = set()
    out: list[Edge] = []
    for h in d.h_nodes():
        legs = d.legs(h)
        if len(legs) != 2 or legs[0] == legs[1] or legs[0] in hh or legs[1] in hh:
            continue
        w1, w2 = legs
        out.append(Edge((w1, w2), (d.other_end(w1, h), d.other_end(w2, h)), h))
        used.update(legs)
    for w in d.wire_ids():
        if w not in used:
            out.append(Edge((w,), d.wires[w]))
    out.sort(key=lambda e: e.wires)
    return out


def _spider_end(d: Diagram, e: End) -> bool:
    return e.is_node and d.nodes[e.ref].is_spider


# --------------------------------------------------------------------------
# graph-like form


def graph_like_violations(d: Diagram) -> list[str]:
    out = []
    for n in d.spiders():
        if d.type(n) is not NodeType.Z:
            out.append(f"node {n}: X spider")
    hh = _hh_wires(d)
    for w in sorted(hh):
        out.append(f"wire {w}: joins two H nodes")
    seen_pairs: set[frozenset] = set()
    n_in: dict[int, int] = {}
    n_out: dict[int, int] = {}
    for e in edges(d):
        a, b = e.ends
        if e.is_h:
            if a.is_boundary or b.is_boundary:
                out.append(f"H node {e.h}: on a boundary wire")
                continue
            if a.ref == b.ref:
                out.append(f"H node {e.h}: self-loop at {a.ref}")
                continue
            pair = frozenset((a.ref, b.ref))
            if pair in seen_pairs:
                out.append(f"H node {e.h}: parallel H-edge between {sorted(pair)}")
            seen_pairs.add(pair)
        else:
            (w,) = e.wires
            if a.is_boundary and b.is_boundary:
                out.append(f"wire {w}: bare boundary-to-boundary wire")
            elif a.is_node and b.is_node:
                if d.type(a.ref) is NodeType.H or d.type(b.ref) is NodeType.H:
                    continue  # belongs to a wire already reported via hh
                out.append(f"wire {w}: plain wire between spiders {a.ref} and {b.ref}")
            else:
                bnd, nd = (a, b) if a.is_boundary else (b, a)
                if not _spider_end(d, nd):
                    out.append(f"wire {w}: boundary attached to H node {nd.ref}")
                    continue
                cnt = n_in if bnd.kind == "input" else n_out
                cnt[nd.ref] = cnt.get(nd.ref, 0) + 1
    for n, c in sorted(n_in.items()):
        if c > 1:
            out.append(f"node {n}: {c} inputs")
    for n, c in sorted(n_out.items()):
        if c > 1:
            out.append(f"node {n}: {c} outputs")
    return out


def is_graph_like(d: Diagram) -> bool:
    return not graph_like_violations(d)


class NotGraphLikeError(ValueError):
    pass


def measurement_label(d: Diagram, n: int) -> str:
    """``"X"``, ``"Y"`` or ``"XY"`` from the phase of spider ``n``."""
    p = d.phase(n)
    if p.denominator == 1:
        return "X"
    if p.denominator == 2:
        return "Y"
    return "XY"


@dataclass
class OpenGraph:
    """Simple graph with ordered input and output vertex lists."""

    vertices: list[int]
    edges: set[frozenset] = field(default_factory=set)
    inputs: list[int] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    labels: dict[int, str] = field(default_factory=dict)
    angles: dict[int, Fraction] = field(default_factory=dict)

    def neighbours(self, v: int) -> set[int]:
        return {u for e in self.edges if v in e for u in e if u != v}

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def non_outputs(self) -> list[int]:
        outs = set(self.outputs)
        return [v for v in self.vertices if v not in outs]

    def non_inputs(self) -> list[int]:
        ins = set(self.inputs)
        return [v for v in self.vertices if v not in ins]


def to_open_graph(d: Diagram) -> OpenGraph:
    bad = graph_like_violations(d)
    if bad:
        raise NotGraphLikeError("; ".join(bad))
    g = OpenGraph(vertices=d.spiders())
    for e in edges(d):
        if e.is_h:
            g.edges.add(frozenset((e.ends[0].ref, e.ends[1].ref)))
    for slot in range(len(d.inputs)):
        w = d.inputs[slot]
        g.inputs.append(next(e.ref for e in d.wires[w] if e.is_node))
    for slot in range(len(d.outputs)):
        w = d.outputs[slot]
        g.outputs.append(next(e.ref for e in d.wires[w] if e.is_node))
    outs = set(g.outputs)
    for v in g.vertices:
        g.angles[v] = d.phase(v)
        if v not in outs:
            g.labels[v] = measurement_label(d, v)
    return g


def from_open_graph(g: OpenGraph) -> Diagram:
    """Build the graph-like diagram of ``g`` (vertex ids are kept)."""
    d = Diagram()
    for v in g.vertices:
        d.add_node(NodeType.Z, g.angles.get(v, 0), id=v)
    for v in g.inputs:
        d.add_wire(d.new_input(), v)
    for e in sorted(tuple(sorted(e)) for e in g.edges):
        d.connect(e[0], e[1], hadamard=True)
    for v in g.outputs:
        d.add_wire(v, d.new_output())
    return d


# --------------------------------------------------------------------------
# fusable components


def fusable_components(d: Diagram) -> list[list[int]]:
    """Blocks of spiders linked by chains of fusable pairs.

    Same-colour spiders on a plain edge, or opposite colours on an H-edge.
    """
    parent = {n: n for n in d.spiders()}

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges(d):
        a, b = e.ends
        if not (_spider_end(d, a) and _spider_end(d, b)) or a.ref == b.ref:
            continue
        same = d.type(a.ref) is d.type(b.ref)
        if same != e.is_h:
            ra, rb = find(a.ref), find(b.ref)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    blocks: dict[int, list[int]] = {}
    for n in parent:
        blocks.setdefault(find(n), []).append(n)
    return sorted(sorted(b) for b in blocks.values())


def component_of(d: Diagram, n: int) -> list[int]:
    for b in fusable_components(d):
        if n in b:
            return b
    raise KeyError(n)


def relabelled(d: Diagram, node_map: dict[int, int], wire_map: dict[int, int]) -> Diagram:
    """Copy of ``d`` with node and wire ids renamed (used for isomorphism tests)."""
    out = Diagram()
    for n in sorted(d.nodes, key=lambda n: node_map[n]):
        v = d.nodes[n]
        out.add_node(v.type, v.phase, id=node_map[n])
    out.inputs = [None] * len(d.inputs)
    out.outputs = [None] * len(d.outputs)
    for w in sorted(d.wires, key=lambda w: wire_map[w]):
        a, b = d.wires[w]
        a2 = End.node(node_map[a.ref]) if a.is_node else a
        b2 = End.node(node_map[b.ref]) if b.is_node else b
        out.add_wire(a2, b2, id=wire_map[w])
    out.scalar = d.scalar
    return out


def iter_nodes_of_type(d: Diagram, t: NodeType) -> Iterable[int]:
    return (n for n in sorted(d.nodes) if d.nodes[n].type is t)
