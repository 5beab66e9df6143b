"""Pauli flow on open graphs and ZX-flow on diagrams.

Orders are stored as lists (a linear extension of the partial order).  For
Pauli flow the list covers the non-output vertices and outputs count as
later than everything; for ZX-flow it covers the spiders that carry a flow
semiweb.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from . import gf2
from .diagram import Diagram, OpenGraph, is_graph_like, measurement_label, to_open_graph
from .pauli import PauliSupport
from .webs import (
    SemiwebConstraintSet,
    basic_semiwebs,
    decompose,
    defects,
    is_semiweb,
    parity_violations,
    solve_constrained,
)

__all__ = [
    "PauliFlow",
    "ZXFlow",
    "FocusReport",
    "FlowError",
    "anticomm_sets",
    "odd_neighbourhood",
    "verify_pauli_flow",
    "pauli_flow_violations_def",
    "pauli_flow_violations_p19",
    "find_pauli_flow",
    "verify_zx_flow",
    "is_focused",
    "focus",
    "find_zx_flow",
    "strong_flow_from_pauli_flow",
    "pauli_flow_from_strong",
    "restrict_to_non_clifford",
]


class FlowError(ValueError):
    pass


# --------------------------------------------------------------------------
# Pauli flow


def odd_neighbourhood(g: OpenGraph, c: set[int]) -> set[int]:
    adj = g.adjacency()
    odd: set[int] = set()
    for v in c:
        odd ^= adj[v]
    return odd


def anticomm_sets(g: OpenGraph, c: set[int]) -> tuple[set[int], set[int], set[int]]:
    """``(A_X, A_Y, A_Z)`` for a correction set ``c``."""
    odd = odd_neighbourhood(g, c)
    return odd, set(c) ^ odd, set(c)


_LABEL_PAULIS = {"X": ("X",), "Y": ("Y",), "XY": ("X", "Y")}


@dataclass
class PauliFlow:
    order: list[int]
    labels: dict[int, str]
    corrections: dict[int, set[int]]

    def to_dict(self) -> dict:
        return {
            "order": list(self.order),
            "labels": {str(v): self.labels[v] for v in sorted(self.labels)},
            "corrections": {str(v): sorted(self.corrections[v]) for v in sorted(self.corrections)},
        }


def _before_eq(pos: dict[int, int], u: int, v: int) -> bool:
    """``u`` precedes or equals ``v``; vertices missing from ``pos`` are last."""
    big = len(pos)
    return pos.get(u, big) <= pos.get(v, big) if u != v else True


def _well_formed(g: OpenGraph, pf: PauliFlow) -> list[str]:
    out = []
    non_out = set(g.non_outputs())
    if set(pf.order) != non_out or len(pf.order) != len(non_out):
        out.append("order does not list exactly the non-output vertices")
    ins = set(g.inputs)
    for u in sorted(non_out):
        if u not in pf.corrections:
            out.append(f"vertex {u}: no correction set")
            continue
        if pf.corrections[u] & ins:
            out.append(f"vertex {u}: correction set touches inputs {sorted(pf.corrections[u] & ins)}")
        if not pf.corrections[u] <= set(g.vertices):
            out.append(f"vertex {u}: correction set names unknown vertices")
        if pf.labels.get(u) not in _LABEL_PAULIS:
            out.append(f"vertex {u}: bad label {pf.labels.get(u)!r}")
    return out


def pauli_flow_violations_def(g: OpenGraph, pf: PauliFlow) -> list[str]:
    """Violations of the two-clause definition via anticommutation sets."""
    pos = {v: i for i, v in enumerate(pf.order)}
    out = []
    for u in pf.order:
        ax, ay, az = anticomm_sets(g, pf.corrections[u])
        A = {"X": ax, "Y": ay, "Z": az}
        for P in _LABEL_PAULIS[pf.labels[u]]:
            if u not in A[P]:
                out.append(f"(i) vertex {u}: label {P} but {u} not in A_{P}")
        for v in pf.order:
            if v == u:
                continue
            for P in _LABEL_PAULIS[pf.labels[v]]:
                if v in A[P] and not _before_eq(pos, u, v):
                    out.append(f"(ii) {v} in A_{P}({u}) but {v} precedes {u}")
    return out


def pauli_flow_violations_p19(g: OpenGraph, pf: PauliFlow) -> list[str]:
    """Violations of the nine-condition form, restricted to labels X, Y, XY."""
    pos = {v: i for i, v in enumerate(pf.order)}
    out = []
    for u in pf.order:
        c = pf.corrections[u]
        odd = odd_neighbourhood(g, c)
        for v in pf.order:
            if _before_eq(pos, u, v):
                continue
            mu = pf.labels[v]
            if mu not in ("X", "Y") and v in c:
                out.append(f"P1 u={u} v={v}")
            if mu not in ("Y", "Z") and v in odd:
                out.append(f"P2 u={u} v={v}")
            if mu not in ("X", "Z") and v in (c ^ odd):
                out.append(f"P3 u={u} v={v}")
        mu = pf.labels[u]
        if mu == "XY" and not (u not in c and u in odd):
            out.append(f"P4 u={u}")
        if mu == "X" and u not in odd:
            out.append(f"P7 u={u}")
        if mu == "Y" and u not in (c ^ odd):
            out.append(f"P9 u={u}")
    return out


def verify_pauli_flow(g: OpenGraph, pf: PauliFlow) -> tuple[bool, list[str]]:
    """Check both formulations; they must agree."""
    bad = _well_formed(g, pf)
    if bad:
        return False, bad
    a = pauli_flow_violations_def(g, pf)
    b = pauli_flow_violations_p19(g, pf)
    if bool(a) != bool(b):
        raise AssertionError(f"Pauli flow formulations disagree: {a} vs {b}")
    return not a, a


def find_pauli_flow(g: OpenGraph, labels: Optional[dict[int, str]] = None) -> Optional[PauliFlow]:
    """Backward greedy search for a Pauli flow with the given labels.

    A vertex is placed once some correction set satisfies its own label and
    only anticommutes with already placed (later) vertices.  Adding vertices
    to the placed set only relaxes later searches, so the greedy choice loses
    nothing.
    """
    if labels is None:
        labels = {v: g.labels[v] for v in g.non_outputs()}
    adj = g.adjacency()
    cand = g.non_inputs()
    idx = {v: i for i, v in enumerate(cand)}
    nvars = len(cand)

    def row_z(v: int) -> int:
        return 1 << idx[v] if v in idx else 0

    def row_x(v: int) -> int:
        r = 0
        for w in adj[v]:
            r ^= row_z(w)
        return r

    def rows_for(v: int, P: str) -> int:
        return {"Z": row_z(v), "X": row_x(v), "Y": row_z(v) ^ row_x(v)}[P]

    placed: set[int] = set(g.outputs)
    order: list[int] = []
    corr: dict[int, set[int]] = {}
    todo = sorted(g.non_outputs(), reverse=True)
    while todo:
        progress = False
        for u in list(todo):
            sys = gf2.AffineSystem(nvars)
            for P in _LABEL_PAULIS[labels[u]]:
                sys.add(rows_for(u, P), 1)
            for v in todo:
                if v == u:
                    continue
                for P in _LABEL_PAULIS[labels[v]]:
                    sys.add(rows_for(v, P), 0)
            sol = sys.solution()
            if sol is None:
                continue
            corr[u] = {v for v in cand if (sol >> idx[v]) & 1}
            order.insert(0, u)
            placed.add(u)
            todo.remove(u)
            progress = True
        if not progress:
            return None
    return PauliFlow(order, dict(labels), corr)


# --------------------------------------------------------------------------
# ZX-flow


def _support_to_dict(s: PauliSupport) -> dict[str, str]:
    return {str(w): ch for w, ch in sorted(s.letters().items())}


def _support_from_dict(m: dict) -> PauliSupport:
    return PauliSupport.from_letters({int(w): ch for w, ch in m.items()})


@dataclass
class ZXFlow:
    """Order, logical semiwebs per input slot and flow semiwebs per spider."""

    order: list[int]
    logicals: list[tuple[PauliSupport, PauliSupport]]
    flows: dict[int, PauliSupport]
    strong: bool = False

    def copy(self) -> "ZXFlow":
        return ZXFlow(list(self.order), list(self.logicals), dict(self.flows), self.strong)

    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}

    def to_dict(self) -> dict:
        return {
            "strong": self.strong,
            "order": list(self.order),
            "logicals": [{"z": _support_to_dict(a), "x": _support_to_dict(b)} for a, b in self.logicals],
            "flows": {str(v): _support_to_dict(self.flows[v]) for v in sorted(self.flows)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_dict(cls, data: dict) -> "ZXFlow":
        return cls(
            order=[int(v) for v in data["order"]],
            logicals=[(_support_from_dict(l["z"]), _support_from_dict(l["x"])) for l in data["logicals"]],
            flows={int(v): _support_from_dict(m) for v, m in data["flows"].items()},
            strong=bool(data.get("strong", False)),
        )

    @classmethod
    def from_json(cls, text: str) -> "ZXFlow":
        return cls.from_dict(json.loads(text))


def _flow_set(d: Diagram, strong: bool) -> set[int]:
    return set(d.spiders()) if strong else set(d.non_clifford_spiders())


def verify_zx_flow(d: Diagram, f: ZXFlow) -> tuple[bool, list[str]]:
    out: list[str] = []
    S = _flow_set(d, f.strong)
    if set(f.order) != S or len(f.order) != len(S):
        out.append(f"order covers {sorted(f.order)}, expected {sorted(S)}")
    if set(f.flows) != S:
        out.append(f"flow semiwebs given for {sorted(f.flows)}, expected {sorted(S)}")
    if len(f.logicals) != len(d.inputs):
        out.append(f"{len(f.logicals)} logical pairs for {len(d.inputs)} inputs")
    pos = f.position()
    for i, pair in enumerate(f.logicals[: len(d.inputs)]):
        for ch, s in zip("ZX", pair):
            for j, w in enumerate(d.inputs):
                want = ch if i == j else "I"
                if s.letter(w) != want:
                    out.append(f"logical {ch}{i}: input {j} carries {s.letter(w)}, expected {want}")
            if not is_semiweb(d, s):
                out.append(f"logical {ch}{i}: not a semiweb")
                continue
            if not f.strong:
                for n in sorted(defects(d, s)):
                    if d.is_clifford(n):
                        out.append(f"logical {ch}{i}: defect at Clifford spider {n}")
    for v in f.order:
        s = f.flows.get(v)
        if s is None:
            continue
        if not is_semiweb(d, s):
            out.append(f"f({v}): not a semiweb")
            continue
        dm = defects(d, s)
        if dm.get(v) != 1:
            out.append(f"f({v}): twist at {v} is {dm.get(v, 0)}, expected 1 (pi)")
        for n, a in sorted(dm.items()):
            if n == v:
                continue
            if n not in S:
                out.append(f"f({v}): defect at Clifford spider {n}")
            elif pos.get(n, -1) <= pos[v]:
                out.append(f"f({v}): defect at {n}, which does not come after {v}")
    return not out, out


def is_focused(d: Diagram, f: ZXFlow) -> bool:
    for pair in f.logicals:
        for s in pair:
            if parity_violations(d, s):
                return False
    for v, s in f.flows.items():
        if any(n != v for n in parity_violations(d, s)):
            return False
    return True


@dataclass
class FocusReport:
    flows_modified: int = 0
    logicals_modified: int = 0


def focus(d: Diagram, f: ZXFlow) -> tuple[ZXFlow, FocusReport]:
    """Make every flow semiweb satisfy parity away from its own spider.

    Works from the latest offending spider backwards, multiplying in the flow
    semiwebs of the spiders it violates; then cleans the logicals the same
    way.
    """
    g = f.copy()
    pos = g.position()
    rep = FocusReport()
    changed: set[int] = set()
    while True:
        offenders = [v for v in g.order if any(n != v for n in parity_violations(d, g.flows[v]))]
        if not offenders:
            break
        v = max(offenders, key=lambda u: (pos[u], -u))
        w = g.flows[v]
        for n in parity_violations(d, w):
            if n == v:
                continue
            if n not in g.flows or pos[n] <= pos[v]:
                raise FlowError(f"f({v}) violates parity at {n}, which has no later flow semiweb")
            w = w * g.flows[n]
        g.flows[v] = w
        changed.add(v)
    rep.flows_modified = len(changed)
    inputs = [x for x in d.inputs if x is not None]
    new_logicals = []
    for pair in g.logicals:
        fixed = []
        for s in pair:
            bad = parity_violations(d, s)
            if bad:
                rep.logicals_modified += 1
            for n in bad:
                if n not in g.flows:
                    raise FlowError(f"logical violates parity at {n}, which has no flow semiweb")
                fw = g.flows[n]
                if not fw.restrict(inputs).is_empty():
                    raise FlowError(f"f({n}) has input support and cannot clean a logical")
                s = s * fw
            fixed.append(s)
        new_logicals.append((fixed[0], fixed[1]))
    g.logicals = new_logicals
    return g, rep


def find_zx_flow(d: Diagram, strong: bool = False) -> Optional[ZXFlow]:
    """Backward greedy search; flow semiwebs carry no input support.

    Returns None when some spider can never be placed or some logical
    semiweb does not exist.
    """
    S = _flow_set(d, strong)
    inputs = [x for x in d.inputs if x is not None]
    pins_none = {x: "I" for x in inputs}
    placed: set[int] = set()
    order: list[int] = []
    flows: dict[int, PauliSupport] = {}
    todo = sorted(S, reverse=True)
    spiders = set(d.spiders())
    while todo:
        progress = False
        for v in list(todo):
            c = SemiwebConstraintSet(
                no_defect=spiders - placed - {v},
                pi_defect={v},
                pins=dict(pins_none),
            )
            s = solve_constrained(d, c)
            if s is None:
                continue
            flows[v] = s
            order.insert(0, v)
            placed.add(v)
            todo.remove(v)
            progress = True
            break
        if not progress:
            return None
    logicals = []
    free = S if not strong else spiders
    for i in range(len(d.inputs)):
        pair = []
        for ch in "ZX":
            pins = {x: ("I" if j != i else ch) for j, x in enumerate(d.inputs)}
            s = solve_constrained(d, SemiwebConstraintSet(no_defect=spiders - free, pins=pins))
            if s is None:
                return None
            pair.append(s)
        logicals.append((pair[0], pair[1]))
    return ZXFlow(order, logicals, flows, strong)


def restrict_to_non_clifford(d: Diagram, f: ZXFlow) -> ZXFlow:
    """Drop the Clifford spiders from a strong flow."""
    keep = set(d.non_clifford_spiders())
    return ZXFlow(
        [v for v in f.order if v in keep],
        list(f.logicals),
        {v: s for v, s in f.flows.items() if v in keep},
        strong=False,
    )


# --------------------------------------------------------------------------
# graph-like conversions


def _output_spider_wire(d: Diagram) -> dict[int, int]:
    out = {}
    for w in d.outputs:
        for e in d.wires[w]:
            if e.is_node:
                out[e.ref] = w
    return out


def _input_spider_wire(d: Diagram) -> dict[int, int]:
    out = {}
    for w in d.inputs:
        for e in d.wires[w]:
            if e.is_node:
                out[e.ref] = w
    return out


def strong_flow_from_pauli_flow(d: Diagram, pf: PauliFlow) -> ZXFlow:
    if not is_graph_like(d):
        raise FlowError("diagram is not graph-like")
    outs = _output_spider_wire(d)
    basics = basic_semiwebs(d)
    flows: dict[int, PauliSupport] = {}
    for v in d.spiders():
        if v in outs:
            flows[v] = PauliSupport.from_letters({outs[v]: "Z"})
        else:
            s = PauliSupport()
            for u in sorted(pf.corrections[v]):
                s = s * basics[u]
            flows[v] = s
    order = list(pf.order) + sorted(outs)
    logicals = []
    for w in d.inputs:
        v = next(e.ref for e in d.wires[w] if e.is_node)
        logicals.append((PauliSupport.from_letters({w: "Z"}), basics[v]))
    return ZXFlow(order, logicals, flows, strong=True)


def pauli_flow_from_strong(d: Diagram, f: ZXFlow) -> PauliFlow:
    g = to_open_graph(d)
    outs = set(g.outputs)
    corr = {}
    for v in g.non_outputs():
        B, _ = decompose(d, f.flows[v])
        corr[v] = set(B)
    order = [v for v in f.order if v not in outs]
    return PauliFlow(order, {v: measurement_label(d, v) for v in g.non_outputs()}, corr)
