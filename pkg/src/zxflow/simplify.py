"""Graph-like normal form and phase-gadget skeletons, with flows carried along.

Both procedures are driven by :class:`Rewriter`, which applies one rewrite
step at a time, transports the plain flow across it and keeps the trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagram import Diagram, NodeType, is_graph_like
from .flow import FlowError, ZXFlow, focus, verify_zx_flow
from .pauli import PauliSupport
from .rewrite import (
    RewriteError,
    RewriteStep,
    Rule,
    TransportStats,
    apply_step,
    transport_flow,
)
from .webs import SemiwebConstraintSet, basic_semiweb, solve_constrained

__all__ = [
    "Rewriter",
    "SimplifyError",
    "make_graph_like",
    "skeletonize",
    "is_skeleton",
    "SkeletonInfo",
    "skeleton_info",
    "strong_flow_for_skeleton",
]


class SimplifyError(RuntimeError):
    """Simplification did not converge (indicates a bug)."""


@dataclass
class Rewriter:
    d: Diagram
    f: ZXFlow
    steps: list[RewriteStep] = field(default_factory=list)
    stats: TransportStats = field(default_factory=TransportStats)
    check: bool = False

    def run(self, rule: Rule, direction: str = "L2R", anchor=(), **params) -> dict[int, list[int]]:
        s = RewriteStep.make(rule, direction, anchor, **params)
        r = apply_step(self.d, s)
        self.f = transport_flow(self.d, r, self.f, self.stats, check=self.check)
        self.d = r.diagram
        self.steps.append(s)
        return r.touched

    def try_run(self, rule: Rule, direction: str = "L2R", anchor=(), **params) -> bool:
        try:
            self.run(rule, direction, anchor, **params)
        except RewriteError:
            return False
        return True


# --------------------------------------------------------------------------
# graph-like form


def _far(d: Diagram, w: int, n: int):
    return d.other_end(w, n)


def _boundary_legs(d: Diagram, v: int) -> list[int]:
    return [w for w in d.legs(v) if _far(d, w, v).is_boundary]


def _graph_like_step(rw: Rewriter) -> bool:
    d = rw.d
    # plain self-loops
    for v in d.spiders():
        legs = d.legs(v)
        for w in legs:
            if legs.count(w) == 2:
                return rw.try_run(Rule.FUSE, anchor=(w,))
    # plain wires between spiders of one colour
    for w, (a, b) in sorted(d.wires.items()):
        if a.is_node and b.is_node and a.ref != b.ref:
            na, nb = d.nodes[a.ref], d.nodes[b.ref]
            if na.is_spider and nb.is_spider and na.type is nb.type:
                both_nc = not d.is_clifford(a.ref) and not d.is_clifford(b.ref)
                if rw.try_run(Rule.FUSE_FULL if both_nc else Rule.FUSE, anchor=(w,)):
                    return True
    for v in d.spiders():
        if d.type(v) is NodeType.X and rw.try_run(Rule.COLOUR_CHANGE, anchor=(v,)):
            return True
    for w, (a, b) in sorted(d.wires.items()):
        if a.is_node and b.is_node and a.ref != b.ref:
            if d.type(a.ref) is NodeType.H and d.type(b.ref) is NodeType.H:
                if rw.try_run(Rule.H_CANCEL, anchor=(w,)):
                    return True
    for h in d.h_nodes():
        if rw.try_run(Rule.H_SELF_LOOP, anchor=(h,)):
            return True
    seen: dict[frozenset, int] = {}
    for h in d.h_nodes():
        ends = [_far(d, w, h) for w in d.legs(h)]
        if all(e.is_node for e in ends):
            key = frozenset(e.ref for e in ends)
            if key in seen:
                if rw.try_run(Rule.PARALLEL_H, anchor=(seen[key], h)):
                    return True
            seen[key] = h
    # boundary repairs
    for w, (a, b) in sorted(d.wires.items()):
        if a.is_boundary and b.is_boundary:
            return rw.try_run(Rule.IDENTITY, "R2L", (w,), type="Z")
        for bnd, nd in ((a, b), (b, a)):
            if bnd.is_boundary and nd.is_node and d.type(nd.ref) is NodeType.H:
                return rw.try_run(Rule.IDENTITY, "R2L", (w,), type="Z")
    for v in d.spiders():
        for kind in ("input", "output"):
            legs = [w for w in _boundary_legs(d, v) if _far(d, w, v).kind == kind]
            if len(legs) > 1:
                _isolate_boundary(rw, legs[-1])
                return True
    return False


def _isolate_boundary(rw: Rewriter, w: int) -> None:
    """Turn ``boundary - v`` into ``boundary - n -H- m -H- v``."""
    rw.run(Rule.IDENTITY, "R2L", (w,), type="X")
    x = max(rw.d.nodes)
    outer = next(y for y in rw.d.legs(x) if _far(rw.d, y, x).is_boundary)
    rw.run(Rule.IDENTITY, "R2L", (outer,), type="Z")
    rw.run(Rule.COLOUR_CHANGE, anchor=(x,))


def make_graph_like(d: Diagram, f: ZXFlow, check: bool = False, max_steps: int = 10000) -> Rewriter:
    """Rewrite to graph-like form; returns the :class:`Rewriter` with the trace."""
    rw = Rewriter(d, f, check=check)
    _to_graph_like(rw, max_steps)
    return rw


def _to_graph_like(rw: Rewriter, max_steps: int = 10000) -> None:
    for _ in range(max_steps):
        if is_graph_like(rw.d):
            return
        if not _graph_like_step(rw):
            raise SimplifyError("no graph-like repair applies to a non-graph-like diagram")
    raise SimplifyError("graph-like normalization did not converge")


# --------------------------------------------------------------------------
# skeletons


def _h_edge_neighbours(d: Diagram, v: int) -> Optional[list[int]]:
    """Spider neighbours through H-edges, or None if some leg is not one."""
    out = []
    for w in d.legs(v):
        h = _far(d, w, v)
        if not h.is_node or d.type(h.ref) is not NodeType.H:
            return None
        o = next(x for x in d.legs(h.ref) if x != w)
        u = _far(d, o, h.ref)
        if not u.is_node or not d.nodes[u.ref].is_spider:
            return None
        out.append(u.ref)
    return out


def _boundary_kinds(d: Diagram, v: int) -> set[str]:
    """How ``v`` reaches the boundary: plain, through one H, or through an
    H-edge to a degree-2 Clifford spider that has a plain boundary wire."""
    kinds = set()
    for w in d.legs(v):
        e = _far(d, w, v)
        if e.is_boundary:
            kinds.add(e.kind)
            continue
        if d.type(e.ref) is not NodeType.H:
            continue
        o = next((x for x in d.legs(e.ref) if x != w), None)
        if o is None:
            continue
        e2 = _far(d, o, e.ref)
        if e2.is_boundary:
            kinds.add(e2.kind)
        elif d.nodes[e2.ref].is_spider and d.degree(e2.ref) == 2 and d.is_clifford(e2.ref):
            for x in d.legs(e2.ref):
                e3 = _far(d, x, e2.ref)
                if e3.is_boundary:
                    kinds.add(e3.kind)
    return kinds


@dataclass
class SkeletonInfo:
    boundary: set[int]
    leaves: dict[int, list[int]]  # hub -> its one-legged non-Clifford neighbours
    excess: list[int]  # interior Clifford spiders that are not hubs


def skeleton_info(d: Diagram) -> SkeletonInfo:
    boundary = {v for v in d.spiders() if _boundary_kinds(d, v)}
    leaves: dict[int, list[int]] = {}
    for v in d.spiders():
        if d.degree(v) != 1 or d.is_clifford(v) or v in boundary:
            continue
        nb = _h_edge_neighbours(d, v)
        if nb and d.is_clifford(nb[0]) and nb[0] not in boundary:
            leaves.setdefault(nb[0], []).append(v)
    excess = [v for v in d.spiders() if d.is_clifford(v) and v not in boundary and v not in leaves]
    return SkeletonInfo(boundary, leaves, excess)


def is_skeleton(d: Diagram) -> bool:
    """Graph-like (boundary Hadamards allowed) with only gadget hubs inside."""
    from .diagram import graph_like_violations

    bad = [m for m in graph_like_violations(d) if "on a boundary wire" not in m and "boundary attached" not in m]
    return not bad and not skeleton_info(d).excess


def _detach(rw: Rewriter, v: int) -> None:
    """Move every boundary of ``v`` one spider outwards so ``v`` is interior."""
    d = rw.d
    for w in list(d.legs(v)):
        e = _far(d, w, v)
        if e.is_boundary:
            rw.run(Rule.IDENTITY, "R2L", (w,), type="X")
            x = max(rw.d.nodes)
            rw.run(Rule.COLOUR_CHANGE, anchor=(x,))
        elif d.type(e.ref) is NodeType.H:
            o = next(x for x in d.legs(e.ref) if x != w)
            if _far(d, o, e.ref).is_boundary:
                rw.run(Rule.IDENTITY, "R2L", (o,), type="Z")
        d = rw.d


def _gadgetize(rw: Rewriter, u: int) -> int:
    """Split the phase of ``u`` off into a phase gadget; returns ``u``."""
    ph = rw.d.phase(u)
    rw.run(Rule.FUSE, "R2L", (u,), legs=[], phase=ph)
    leaf = max(rw.d.nodes)
    (w,) = rw.d.legs(leaf)
    rw.run(Rule.IDENTITY, "R2L", (w,), type="X")
    rw.run(Rule.COLOUR_CHANGE, anchor=(max(rw.d.nodes),))
    return u


def _is_pauli(d: Diagram, v: int) -> bool:
    return d.phase(v).denominator == 1


def _is_half(d: Diagram, v: int) -> bool:
    return d.phase(v).denominator == 2


def _reduce_one(rw: Rewriter, info: SkeletonInfo) -> bool:
    d = rw.d
    for s in info.excess:
        if d.degree(s) == 0:
            if d.phase(s) == 1:
                raise SimplifyError("diagram is zero")
            rw.run(Rule.SCALAR_S1, anchor=(s,))
            return True
    for s in info.excess:
        if _is_half(d, s) and _h_edge_neighbours(d, s) is not None:
            rw.run(Rule.LOCAL_COMP, anchor=(s,))
            return True
    for s in info.excess:
        nb = _h_edge_neighbours(d, s)
        if nb is None or not _is_pauli(d, s):
            continue
        interior = [u for u in nb if _h_edge_neighbours(d, u) is not None]
        for u in interior:
            if d.is_clifford(u) and _is_pauli(d, u):
                rw.run(Rule.PIVOT, anchor=(s, u))
                return True
        for u in nb:
            if not d.is_clifford(u):
                _gadgetize(rw, u)
                if _h_edge_neighbours(rw.d, u) is None:
                    _detach(rw, u)
                rw.run(Rule.PIVOT, anchor=(s, u))
                return True
        for u in nb:
            if u not in interior and _is_pauli(d, u):
                _detach(rw, u)
                rw.run(Rule.PIVOT, anchor=(s, u))
                return True
        for u in nb:
            if _is_half(d, u):
                if u not in interior:
                    _detach(rw, u)
                rw.run(Rule.LOCAL_COMP, anchor=(u,))
                return True
    for s in info.excess:
        if _h_edge_neighbours(d, s) is None:
            # plain boundary wire on a would-be interior spider cannot happen
            raise SimplifyError(f"interior spider {s} has a non-H leg")
    return False


def _finalize_boundary(rw: Rewriter) -> None:
    """Put an identity spider on every boundary wire that ends in an H node."""
    while True:
        d = rw.d
        hit = None
        for w, (a, b) in sorted(d.wires.items()):
            for bnd, nd in ((a, b), (b, a)):
                if bnd.is_boundary and nd.is_node and d.type(nd.ref) is NodeType.H:
                    hit = w
        if hit is None:
            return
        rw.run(Rule.IDENTITY, "R2L", (hit,), type="Z")


def _boundary_side(d: Diagram, v: int) -> Optional[str]:
    kinds = _boundary_kinds(d, v)
    if "input" in kinds:
        return "input"
    if "output" in kinds:
        return "output"
    return None


def strong_flow_for_skeleton(d: Diagram, f: ZXFlow) -> ZXFlow:
    """Upgrade a plain flow on a skeleton to a Strong flow.

    Gadget hubs go directly before their first leaf and carry the leaf's
    basic semiweb.  Clifford spiders tied to an input come first and those
    tied to an output come last; their semiwebs are solved so that the
    spider itself is the earliest defect.  Non-Clifford spiders keep their
    (focused) semiwebs.
    """
    g, _ = focus(d, f)
    info = skeleton_info(d)
    if info.excess:
        raise FlowError(f"not a skeleton: interior Clifford spiders {info.excess}")
    pos = g.position()
    hub_for_leaf: dict[int, int] = {}
    for hub, leaves in sorted(info.leaves.items()):
        first = min(leaves, key=lambda x: pos[x])
        hub_for_leaf[first] = hub
    middle: list[int] = []
    flows: dict[int, PauliSupport] = dict(g.flows)
    for v in g.order:
        if v in hub_for_leaf:
            hub = hub_for_leaf[v]
            middle.append(hub)
            flows[hub] = basic_semiweb(d, v)
        middle.append(v)
    clifford_boundary = [v for v in d.spiders() if d.is_clifford(v) and v in info.boundary]
    ins = [v for v in clifford_boundary if _boundary_side(d, v) == "input"]
    outs = [v for v in clifford_boundary if _boundary_side(d, v) == "output"]
    # a spider reached through an H-edge may put a defect on the spider that
    # sits on the wire itself, so it goes first on the input side
    ins.sort(key=lambda v: (any(_far(d, w, v).is_boundary for w in d.legs(v)), v))
    outs.sort(key=lambda v: (any(_far(d, w, v).is_boundary for w in d.legs(v)), v))
    order = ins + middle + outs
    pins = {w: "I" for w in d.inputs}
    for i, v in enumerate(ins):
        s = solve_constrained(
            d, SemiwebConstraintSet(no_defect=set(order[:i]), pi_defect={v}, pins=pins)
        )
        if s is None:
            raise FlowError(f"no flow semiweb for input-side spider {v}")
        flows[v] = s
    start = len(ins) + len(middle)
    for j, v in enumerate(outs):
        s = solve_constrained(
            d, SemiwebConstraintSet(no_defect=set(order[: start + j]), pi_defect={v}, pins=pins)
        )
        if s is None:
            raise FlowError(f"no flow semiweb for output-side spider {v}")
        flows[v] = s
    strong = ZXFlow(order, list(g.logicals), flows, strong=True)
    ok, why = verify_zx_flow(d, strong)
    if not ok:
        raise FlowError(f"skeleton strong flow fails: {why[:3]}")
    return strong


def skeletonize(d: Diagram, f: ZXFlow, check: bool = False, max_steps: int = 20000) -> tuple[Rewriter, ZXFlow]:
    """Reduce to a phase-gadget skeleton; returns the rewriter and a Strong flow.

    The rewriter's diagram is graph-like; its ``f`` is the plain flow.
    """
    rw = Rewriter(d, f, check=check)
    _to_graph_like(rw)
    for _ in range(max_steps):
        info = skeleton_info(rw.d)
        if not info.excess:
            break
        if not _reduce_one(rw, info):
            raise SimplifyError(f"stuck with interior Clifford spiders {info.excess}")
        _to_graph_like(rw)
    else:
        raise SimplifyError("skeleton reduction did not converge")
    _finalize_boundary(rw)
    if not is_graph_like(rw.d):
        raise SimplifyError("skeleton is not graph-like")
    return rw, strong_flow_for_skeleton(rw.d, rw.f)
