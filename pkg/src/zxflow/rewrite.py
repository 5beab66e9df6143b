"""Clifford rewrite rules with explicit scalars, and flow transport.

Every rule is applied to a copy of the diagram and reports which nodes it
touched and where each surviving or new node came from.  That bookkeeping is
all :func:`transport_flow` needs: semiwebs are re-solved with their letters
pinned on every wire outside the touched region, so the update is local in
the same way as a hand-written case analysis, and the result is checked by
the flow verifier.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from .diagram import Diagram, End, NodeType, is_clifford_phase, normalize_phase
from .flow import ZXFlow, verify_zx_flow
from .pauli import PauliSupport
from .webs import SemiwebConstraintSet, solve_constrained

__all__ = [
    "Rule",
    "Direction",
    "RewriteStep",
    "RewriteResult",
    "RewriteError",
    "TransportError",
    "TransportStats",
    "apply",
    "apply_step",
    "apply_sequence",
    "transport_flow",
    "candidate_steps",
    "read_trace",
    "write_trace",
]

SQRT2 = math.sqrt(2.0)


class Rule(str, Enum):
    FUSE = "Fuse"
    FUSE_FULL = "FuseFull"
    COLOUR_CHANGE = "ColourChange"
    PI_COPY = "PiCopy"
    STRONG_COMP = "StrongComp"
    HAD_DECOMP = "HadDecomp"
    IDENTITY = "Identity"
    SCALAR_S1 = "ScalarS1"
    SCALAR_S2 = "ScalarS2"
    # derived rules, each a fixed composite of the ones above
    H_CANCEL = "HCancel"
    H_SELF_LOOP = "HSelfLoop"
    PARALLEL_H = "ParallelH"
    LOCAL_COMP = "LocalComp"
    PIVOT = "Pivot"


class Direction(str, Enum):
    L2R = "L2R"
    R2L = "R2L"


class RewriteError(ValueError):
    """The anchor does not match the rule, or a side condition fails."""


class TransportError(AssertionError):
    """A flow could not be carried across a rewrite (indicates a bug)."""


@dataclass(frozen=True)
class RewriteStep:
    rule: Rule
    direction: Direction = Direction.L2R
    anchor: tuple[int, ...] = ()
    params: tuple[tuple[str, Any], ...] = ()

    @classmethod
    def make(cls, rule, direction="L2R", anchor=(), **params) -> "RewriteStep":
        items = tuple(sorted((k, _freeze(v)) for k, v in params.items()))
        return cls(Rule(rule), Direction(direction), tuple(anchor), items)

    def param(self, key: str, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def to_dict(self) -> dict:
        return {
            "rule": self.rule.value,
            "direction": self.direction.value,
            "anchor": list(self.anchor),
            "params": {k: _thaw(v) for k, v in self.params},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RewriteStep":
        params = {}
        for k, v in data.get("params", {}).items():
            params[k] = v
        return cls.make(data["rule"], data.get("direction", "L2R"), data.get("anchor", ()), **params)


def _freeze(v):
    if isinstance(v, Fraction):
        return ("phase", f"{v.numerator}/{v.denominator}")
    if isinstance(v, (list, tuple)):
        return tuple(_freeze(x) for x in v)
    return v


def _thaw(v):
    if isinstance(v, tuple) and len(v) == 2 and v[0] == "phase":
        return v[1]
    if isinstance(v, tuple):
        return [_thaw(x) for x in v]
    return v


def _phase_param(v) -> Fraction:
    if isinstance(v, tuple) and len(v) == 2 and v[0] == "phase":
        v = v[1]
    return normalize_phase(v)


def write_trace(steps) -> str:
    return "".join(json.dumps(s.to_dict(), sort_keys=True) + "\n" for s in steps)


def read_trace(text: str) -> list[RewriteStep]:
    return [RewriteStep.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


@dataclass
class RewriteResult:
    """Post-diagram plus provenance.

    ``origin`` maps each post node that descends from pre nodes to those
    nodes; ``touched`` holds ids (pre or post) of every node whose
    neighbourhood changed.
    """

    diagram: Diagram
    origin: dict[int, list[int]] = field(default_factory=dict)
    touched: set[int] = field(default_factory=set)
    steps: list[RewriteStep] = field(default_factory=list)


def _fail(msg: str):
    raise RewriteError(msg)


def _spider(d: Diagram, n: int) -> None:
    if n not in d.nodes or not d.nodes[n].is_spider:
        _fail(f"node {n} is not a spider")


def _has_self_loop(d: Diagram, n: int) -> bool:
    legs = d.legs(n)
    return len(legs) != len(set(legs))


def _node_neighbour(d: Diagram, w: int, n: int) -> Optional[int]:
    e = d.other_end(w, n)
    return e.ref if e.is_node else None


def _far_index(d: Diagram, w: int, n: int) -> int:
    """Index of the end of ``w`` that is not at node ``n``."""
    return 1 - d.end_index(w, n)


def _e(phase: Fraction) -> complex:
    return cmath.exp(1j * math.pi * float(phase))


# --------------------------------------------------------------------------
# the rules; each mutates ``d`` in place and fills ``res``


def _fuse(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    if step.direction is Direction.L2R:
        (w,) = step.anchor
        a, b = d.wires[w]
        if not (a.is_node and b.is_node):
            _fail(f"wire {w} is not between two nodes")
        _spider(d, a.ref)
        _spider(d, b.ref)
        if a.ref == b.ref:
            d.remove_wire(w)
            res.origin[a.ref] = [a.ref]
            res.touched.add(a.ref)
            return
        if d.type(a.ref) is not d.type(b.ref):
            _fail("fusion needs spiders of one colour")
        pa, pb = d.phase(a.ref), d.phase(b.ref)
        if step.rule is Rule.FUSE and not (is_clifford_phase(pa) or is_clifford_phase(pb)):
            _fail("Fuse joins at most one non-Clifford spider; use FuseFull")
        keep, gone = min(a.ref, b.ref), max(a.ref, b.ref)
        d.remove_wire(w)
        for x in list(d.legs(gone)):
            if x not in d.wires:
                continue
            for i in (0, 1):
                if d.wires[x][i] == End.node(gone):
                    d.set_end(x, i, End.node(keep))
        d.remove_node(gone)
        d.set_phase(keep, pa + pb)
        res.origin[keep] = [keep, gone]
        res.touched |= {keep, gone}
        return
    (v,) = step.anchor
    _spider(d, v)
    legs = list(step.param("legs", ()))
    beta = _phase_param(step.param("phase", "0"))
    alpha = d.phase(v)
    rest = normalize_phase(alpha - beta)
    for x in legs:
        if x not in d.legs(v):
            _fail(f"wire {x} is not a leg of {v}")
        if d.legs(v).count(x) != 1:
            _fail(f"wire {x} is a self-loop at {v}")
    if len(set(legs)) != len(legs):
        _fail("repeated leg")
    both_nc = not is_clifford_phase(rest) and not is_clifford_phase(beta)
    if step.rule is Rule.FUSE and both_nc:
        _fail("Fuse keeps at most one non-Clifford spider; use FuseFull")
    if both_nc and is_clifford_phase(alpha):
        _fail("cannot unfuse a Clifford spider into two non-Clifford spiders")
    u = d.add_node(d.type(v), beta)
    for x in legs:
        d.set_end(x, d.end_index(x, v), End.node(u))
    d.add_wire(v, u)
    d.set_phase(v, rest)
    res.origin[v] = [v]
    res.origin[u] = [v]
    res.touched |= {v, u}


def _colour_change(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    (v,) = step.anchor
    _spider(d, v)
    if _has_self_loop(d, v):
        _fail("colour change on a spider with a self-loop is not supported")
    if step.direction is Direction.L2R:
        for w in d.legs(v):
            h, _ = d.split_wire(w, NodeType.H, 0, keep=_far_index(d, w, v))
            res.touched.add(h)
    else:
        hs = []
        for w in d.legs(v):
            h = _node_neighbour(d, w, v)
            if h is None or d.type(h) is not NodeType.H or _has_self_loop(d, h):
                _fail(f"leg {w} of {v} does not end in an H node")
            if h in hs:
                _fail(f"H node {h} touches {v} twice")
            hs.append(h)
        for w, h in zip(d.legs(v), hs):
            outer = next(x for x in d.legs(h) if x != w)
            if _node_neighbour(d, outer, h) == v:
                _fail(f"H node {h} touches {v} twice")
        for h in hs:
            inner = next(x for x in d.legs(h) if d.other_end(x, h) == End.node(v))
            outer = next(x for x in d.legs(h) if x != inner)
            d.remove_wire(inner)
            d.set_end(outer, d.end_index(outer, h), End.node(v))
            d.remove_node(h)
            res.touched.add(h)
    d.set_type(v, d.type(v).opposite)
    res.origin[v] = [v]
    res.touched.add(v)


def _pi_node(d: Diagram, w: int, v: int) -> Optional[int]:
    p = _node_neighbour(d, w, v)
    if p is None or p == v or not d.nodes[p].is_spider:
        return None
    if d.type(p) is d.type(v) or d.phase(p) != 1 or d.degree(p) != 2 or _has_self_loop(d, p):
        return None
    if any(_node_neighbour(d, x, p) == v for x in d.legs(p) if x != w):
        return None
    return p


def _pi_copy(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    (v,) = step.anchor
    _spider(d, v)
    if _has_self_loop(d, v):
        _fail("pi-copy on a spider with a self-loop is not supported")
    S = list(step.param("legs", ()))
    if not S or len(set(S)) != len(S):
        _fail("pi-copy needs a nonempty set of legs")
    ps = []
    for w in S:
        if w not in d.legs(v):
            _fail(f"wire {w} is not a leg of {v}")
        p = _pi_node(d, w, v)
        if p is None or p in ps:
            _fail(f"leg {w} of {v} does not carry a pi spider of the other colour")
        ps.append(p)
    alpha = d.phase(v)
    others = [x for x in d.legs(v) if x not in S]
    for w, p in zip(S, ps):
        outer = next(x for x in d.legs(p) if x != w)
        d.remove_wire(w)
        d.set_end(outer, d.end_index(outer, p), End.node(v))
        d.remove_node(p)
        res.touched.add(p)
    t = d.type(v).opposite
    for x in others:
        p, _ = d.split_wire(x, t, 1, keep=_far_index(d, x, v))
        res.touched.add(p)
    d.set_phase(v, -alpha)
    d.scalar *= _e(alpha)
    res.origin[v] = [v]
    res.touched.add(v)


def _strong_comp_factor(n: int, m: int) -> float:
    return SQRT2 ** ((n - 1) * (m - 1))


def _strong_comp(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    if step.direction is Direction.L2R:
        (w,) = step.anchor
        a, b = d.wires[w]
        if not (a.is_node and b.is_node) or a.ref == b.ref:
            _fail(f"wire {w} does not join two spiders")
        a, b = a.ref, b.ref
        _spider(d, a)
        _spider(d, b)
        if d.type(a) is d.type(b) or d.phase(a) != 0 or d.phase(b) != 0:
            _fail("strong complementarity joins phase-free spiders of opposite colour")
        if _has_self_loop(d, a) or _has_self_loop(d, b):
            _fail("self-loop inside the pattern")
        la = [x for x in d.legs(a) if x != w]
        lb = [x for x in d.legs(b) if x != w]
        if set(la) & set(lb):
            _fail("parallel wires inside the pattern")
        ta, tb = d.type(a), d.type(b)
        d.remove_wire(w)
        news_a = []
        for x in la:
            n = d.add_node(tb)
            d.set_end(x, d.end_index(x, a), End.node(n))
            news_a.append(n)
        news_b = []
        for x in lb:
            n = d.add_node(ta)
            d.set_end(x, d.end_index(x, b), End.node(n))
            news_b.append(n)
        for p in news_a:
            for q in news_b:
                d.add_wire(p, q)
        d.remove_node(a)
        d.remove_node(b)
        d.scalar *= _strong_comp_factor(len(la), len(lb))
        res.touched |= {a, b, *news_a, *news_b}
        for n in news_a + news_b:
            res.origin[n] = [a, b]
        return
    xs = list(step.param("left", ()))
    zs = list(step.param("right", ()))
    if not xs or not zs:
        _fail("both sides of the bipartite pattern must be nonempty")
    ta = d.type(xs[0])
    if any(d.type(n) is not ta for n in xs) or any(d.type(n) is not ta.opposite for n in zs):
        _fail("bipartite pattern needs one colour per side")
    inner: set[int] = set()
    outer_a, outer_b = [], []
    for side, other, outer in ((xs, zs, outer_a), (zs, xs, outer_b)):
        for n in side:
            _spider(d, n)
            if d.phase(n) != 0 or _has_self_loop(d, n) or d.degree(n) != len(other) + 1:
                _fail(f"node {n} does not fit the bipartite pattern")
            seen = []
            rest = []
            for x in d.legs(n):
                m = _node_neighbour(d, x, n)
                if m in other:
                    seen.append(m)
                    inner.add(x)
                else:
                    rest.append(x)
            if sorted(seen) != sorted(other) or len(rest) != 1:
                _fail(f"node {n} does not fit the bipartite pattern")
            outer.append(rest[0])
    if set(outer_a) & set(outer_b):
        _fail("outer legs must be distinct")
    for x in inner:
        d.remove_wire(x)
    a = d.add_node(ta)
    b = d.add_node(ta.opposite)
    for n, x in zip(xs, outer_a):
        d.set_end(x, d.end_index(x, n), End.node(b))
    for n, x in zip(zs, outer_b):
        d.set_end(x, d.end_index(x, n), End.node(a))
    for n in xs + zs:
        d.remove_node(n)
    d.add_wire(a, b)
    # pattern with |xs| legs on one side is the image of a spider pair with
    # len(xs) legs at the spider of the other colour
    d.scalar /= _strong_comp_factor(len(xs), len(zs))
    res.touched |= {a, b, *xs, *zs}
    res.origin[a] = list(xs + zs)
    res.origin[b] = list(xs + zs)


_HD_SCALAR = cmath.exp(-1j * math.pi / 4)


def _had_decomp(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    if step.direction is Direction.L2R:
        (h,) = step.anchor
        if d.type(h) is not NodeType.H or _has_self_loop(d, h):
            _fail(f"node {h} is not an H node on two distinct wires")
        outer_t = NodeType(step.param("colour", "Z"))
        mid_t = outer_t.opposite
        _, b = d.legs(h)
        d.set_type(h, outer_t)
        d.set_phase(h, Fraction(1, 2))
        z, nw = d.split_wire(b, outer_t, Fraction(1, 2), keep=_far_index(d, b, h))
        x, _ = d.split_wire(nw, mid_t, Fraction(1, 2), keep=d.end_index(nw, z))
        d.scalar *= _HD_SCALAR
        res.touched |= {h, z, x}
        return
    (m,) = step.anchor
    _spider(d, m)
    if d.phase(m) != Fraction(1, 2) or d.degree(m) != 2 or _has_self_loop(d, m):
        _fail(f"node {m} is not the middle of a Hadamard chain")
    w1, w2 = d.legs(m)
    p, q = _node_neighbour(d, w1, m), _node_neighbour(d, w2, m)
    for n in (p, q):
        if n is None or n == m or not d.nodes[n].is_spider or d.type(n) is d.type(m):
            _fail(f"node {m} is not the middle of a Hadamard chain")
        if d.phase(n) != Fraction(1, 2) or d.degree(n) != 2 or _has_self_loop(d, n):
            _fail(f"node {m} is not the middle of a Hadamard chain")
    if p == q:
        _fail("Hadamard chain closes on itself")
    q_out = next(x for x in d.legs(q) if x != w2)
    if _node_neighbour(d, q_out, q) in (p, m):
        _fail("Hadamard chain closes on itself")
    d.remove_wire(w1)
    d.remove_wire(w2)
    d.remove_node(m)
    d.set_end(q_out, d.end_index(q_out, q), End.node(p))
    d.remove_node(q)
    d.set_type(p, NodeType.H)
    d.set_phase(p, 0)
    d.scalar /= _HD_SCALAR
    res.touched |= {p, q, m}


def _identity(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    if step.direction is Direction.L2R:
        (v,) = step.anchor
        _spider(d, v)
        if d.phase(v) != 0 or d.degree(v) != 2 or _has_self_loop(d, v):
            _fail(f"node {v} is not a phase-free degree-2 spider")
        d.dissolve(v)
        res.touched.add(v)
        return
    (w,) = step.anchor
    if w not in d.wires:
        _fail(f"no wire {w}")
    t = NodeType(step.param("type", "Z"))
    n, _ = d.split_wire(w, t, 0, keep=0)
    res.touched.add(n)


def _scalar_s1(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    if step.direction is Direction.L2R:
        (v,) = step.anchor
        _spider(d, v)
        if d.degree(v) != 0 or not is_clifford_phase(d.phase(v)):
            _fail(f"node {v} is not a legless Clifford spider")
        d.scalar *= 1 + _e(d.phase(v))
        d.remove_node(v)
        res.touched.add(v)
        return
    ph = _phase_param(step.param("phase", "0"))
    if not is_clifford_phase(ph) or ph == 1:
        _fail("legless spider must be Clifford with nonzero value")
    n = d.add_node(NodeType(step.param("type", "Z")), ph)
    d.scalar /= 1 + _e(ph)
    res.touched.add(n)


def _scalar_s2(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    if step.direction is Direction.L2R:
        (w,) = step.anchor
        a, b = d.wires[w]
        if not (a.is_node and b.is_node) or a.ref == b.ref:
            _fail(f"wire {w} does not join two nodes")
        a, b = a.ref, b.ref
        _spider(d, a)
        _spider(d, b)
        if d.degree(a) != 1 or d.degree(b) != 1 or d.type(a) is d.type(b):
            _fail("scalar pair needs two one-legged spiders of opposite colour")
        if d.phase(a) != 0 and d.phase(b) != 0:
            _fail("one spider of the scalar pair must be phase-free")
        d.remove_wire(w)
        d.remove_node(a)
        d.remove_node(b)
        d.scalar *= SQRT2
        res.touched |= {a, b}
        return
    t = NodeType(step.param("type", "Z"))
    ph = _phase_param(step.param("phase", "0"))
    a = d.add_node(t, ph)
    b = d.add_node(t.opposite, 0)
    d.add_wire(a, b)
    d.scalar /= SQRT2
    res.touched |= {a, b}


def _h_cancel(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    (w,) = step.anchor
    a, b = d.wires[w]
    if not (a.is_node and b.is_node) or a.ref == b.ref:
        _fail(f"wire {w} does not join two nodes")
    h1, h2 = a.ref, b.ref
    if d.type(h1) is not NodeType.H or d.type(h2) is not NodeType.H:
        _fail(f"wire {w} does not join two H nodes")
    o1 = next(x for x in d.legs(h1) if x != w)
    o2 = next(x for x in d.legs(h2) if x != w)
    if o1 == o2 or o1 == w or o2 == w:
        _fail("H pair closes a loop")
    far = d.other_end(o2, h2)
    d.remove_wire(w)
    d.remove_wire(o2)
    d.remove_node(h2)
    d.set_end(o1, d.end_index(o1, h1), far)
    d.remove_node(h1)
    res.touched |= {h1, h2}
    if far.is_node:
        res.touched.add(far.ref)


def _h_self_loop(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    (h,) = step.anchor
    if d.type(h) is not NodeType.H:
        _fail(f"node {h} is not an H node")
    w1, w2 = d.legs(h)
    if w1 == w2:
        _fail("H node on a closed loop")
    v1, v2 = _node_neighbour(d, w1, h), _node_neighbour(d, w2, h)
    if v1 is None or v1 != v2 or not d.nodes[v1].is_spider:
        _fail(f"H node {h} is not a self-loop on a spider")
    d.remove_wire(w1)
    d.remove_wire(w2)
    d.remove_node(h)
    d.set_phase(v1, d.phase(v1) + 1)
    d.scalar /= SQRT2
    res.origin[v1] = [v1]
    res.touched |= {h, v1}


def _parallel_h(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    h1, h2 = step.anchor
    ends = []
    for h in (h1, h2):
        if h not in d.nodes or d.type(h) is not NodeType.H:
            _fail(f"node {h} is not an H node")
        ws = d.legs(h)
        ns = [_node_neighbour(d, x, h) for x in ws]
        if None in ns or ns[0] == ns[1] or len(set(ws)) != 2:
            _fail(f"H node {h} is not an H-edge between two spiders")
        ends.append(frozenset(ns))
    if h1 == h2 or ends[0] != ends[1]:
        _fail("H nodes are not parallel")
    a, b = sorted(ends[0])
    if not (d.nodes[a].is_spider and d.nodes[b].is_spider) or d.type(a) is not d.type(b):
        _fail("parallel H-edges must join spiders of one colour")
    for h in (h1, h2):
        for x in d.legs(h):
            d.remove_wire(x)
        d.remove_node(h)
    d.scalar /= 2
    res.origin[a] = [a]
    res.origin[b] = [b]
    res.touched |= {h1, h2, a, b}


# --------------------------------------------------------------------------
# graph-like rules: local complementation and pivoting on Z spiders with
# simple H-edge connectivity


def _h_neighbours(d: Diagram, v: int) -> dict[int, int]:
    """Spider neighbours of ``v`` through H-edges, mapped to the H node."""
    out = {}
    for w in d.legs(v):
        h = _node_neighbour(d, w, v)
        if h is None or d.type(h) is not NodeType.H:
            _fail(f"spider {v} has a leg that is not an H-edge")
        o = next(x for x in d.legs(h) if x != w)
        u = _node_neighbour(d, o, h)
        if u is None or u == v or not d.nodes[u].is_spider or u in out:
            _fail(f"spider {v} does not have simple H-edge connectivity")
        out[u] = h
    return out


def _toggle_h_edge(d: Diagram, a: int, b: int, res: RewriteResult) -> None:
    nb = {}
    for w in d.legs(a):
        h = _node_neighbour(d, w, a)
        if h is not None and d.type(h) is NodeType.H:
            o = next((x for x in d.legs(h) if x != w), None)
            if o is not None and _node_neighbour(d, o, h) == b:
                nb[b] = h
    if b in nb:
        h = nb[b]
        for x in list(d.legs(h)):
            d.remove_wire(x)
        d.remove_node(h)
        d.scalar /= 2  # the new H-edge cancels against the old one
        res.touched.add(h)
    else:
        ws = d.connect(a, b, hadamard=True)
        res.touched.add(d.other_end(ws[0], a).ref)


def _remove_spider_and_edges(d: Diagram, v: int, hs: dict[int, int], res: RewriteResult) -> None:
    for h in hs.values():
        for x in list(d.legs(h)):
            d.remove_wire(x)
        d.remove_node(h)
        res.touched.add(h)
    d.remove_node(v)
    res.touched.add(v)


def _check_graph_spider(d: Diagram, v: int) -> None:
    _spider(d, v)
    if d.type(v) is not NodeType.Z:
        _fail(f"spider {v} is not a Z spider")


def _local_comp(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    (v,) = step.anchor
    _check_graph_spider(d, v)
    ph = d.phase(v)
    if ph not in (Fraction(1, 2), Fraction(3, 2)):
        _fail(f"spider {v} does not have phase +-pi/2")
    nb = _h_neighbours(d, v)
    ns = sorted(nb)
    for u in ns:
        _check_graph_spider(d, u)
    _remove_spider_and_edges(d, v, nb, res)
    for i, a in enumerate(ns):
        for b in ns[i + 1 :]:
            _toggle_h_edge(d, a, b, res)
        d.set_phase(a, d.phase(a) - ph)
        res.origin[a] = [a]
        res.touched.add(a)
    n = len(ns)
    sign = 1 if ph == Fraction(1, 2) else -1
    d.scalar *= SQRT2 ** ((n - 1) * (n - 2) / 2) * cmath.exp(sign * 1j * math.pi / 4)


def _pivot(d: Diagram, step: RewriteStep, res: RewriteResult) -> None:
    u, v = step.anchor
    _check_graph_spider(d, u)
    _check_graph_spider(d, v)
    pu, pv = d.phase(u), d.phase(v)
    if pu.denominator != 1 or pv.denominator != 1:
        _fail("pivot needs two Pauli spiders")
    nu, nv = _h_neighbours(d, u), _h_neighbours(d, v)
    if v not in nu:
        _fail(f"spiders {u} and {v} are not H-adjacent")
    A = set(nu) - set(nv) - {v}
    B = set(nv) - set(nu) - {u}
    C = set(nu) & set(nv)
    for x in A | B | C:
        _check_graph_spider(d, x)
    for h in sorted(set(nu.values()) | set(nv.values())):
        for x in list(d.legs(h)):
            d.remove_wire(x)
        d.remove_node(h)
        res.touched.add(h)
    d.remove_node(u)
    d.remove_node(v)
    res.touched |= {u, v}
    for p, q in [(A, B), (A, C), (B, C)]:
        for a in sorted(p):
            for b in sorted(q):
                _toggle_h_edge(d, a, b, res)
    for a in A:
        d.set_phase(a, d.phase(a) + pv)
    for b in B:
        d.set_phase(b, d.phase(b) + pu)
    for c in C:
        d.set_phase(c, d.phase(c) + pu + pv + 1)
    for x in A | B | C:
        res.origin[x] = [x]
        res.touched.add(x)
    ka, kb, kc = len(A), len(B), len(C)
    d.scalar *= SQRT2 ** (ka * kb + ka * kc + kb * kc - ka - kb - 2 * kc + 1) * (-1 if (pu == 1 and pv == 1) else 1)


_HANDLERS = {
    Rule.FUSE: _fuse,
    Rule.FUSE_FULL: _fuse,
    Rule.COLOUR_CHANGE: _colour_change,
    Rule.PI_COPY: _pi_copy,
    Rule.STRONG_COMP: _strong_comp,
    Rule.HAD_DECOMP: _had_decomp,
    Rule.IDENTITY: _identity,
    Rule.SCALAR_S1: _scalar_s1,
    Rule.SCALAR_S2: _scalar_s2,
    Rule.H_CANCEL: _h_cancel,
    Rule.H_SELF_LOOP: _h_self_loop,
    Rule.PARALLEL_H: _parallel_h,
    Rule.LOCAL_COMP: _local_comp,
    Rule.PIVOT: _pivot,
}

_ONE_WAY = {Rule.H_CANCEL, Rule.H_SELF_LOOP, Rule.PARALLEL_H, Rule.LOCAL_COMP, Rule.PIVOT}


def apply_step(d: Diagram, step: RewriteStep) -> RewriteResult:
    if step.rule in _ONE_WAY and step.direction is not Direction.L2R:
        raise RewriteError(f"{step.rule.value} is only applied left to right")
    out = d.copy()
    res = RewriteResult(out, steps=[step])
    try:
        _HANDLERS[step.rule](out, step, res)
    except (KeyError, ValueError) as exc:
        if isinstance(exc, RewriteError):
            raise
        raise RewriteError(f"{step.rule.value} does not match at {step.anchor}: {exc}") from exc
    for n in list(res.origin):
        if n not in out.nodes:
            del res.origin[n]
    return res


def apply(d: Diagram, step: RewriteStep) -> Diagram:
    return apply_step(d, step).diagram


def apply_sequence(d: Diagram, steps) -> RewriteResult:
    """Apply steps in order and compose their provenance."""
    res = RewriteResult(d.copy())
    origin: dict[int, list[int]] = {n: [n] for n in d.nodes}
    for s in steps:
        r = apply_step(res.diagram, s)
        new_origin: dict[int, list[int]] = {}
        for n in r.diagram.nodes:
            srcs = r.origin.get(n, [n] if n in res.diagram.nodes else [])
            acc: list[int] = []
            for m in srcs:
                for o in origin.get(m, []):
                    if o not in acc:
                        acc.append(o)
            new_origin[n] = acc
        origin = new_origin
        res.touched |= r.touched
        res.diagram = r.diagram
        res.steps.append(s)
    res.origin = {n: o for n, o in origin.items() if o}
    return res


# --------------------------------------------------------------------------
# flow transport


@dataclass
class TransportStats:
    """How often the local re-solve had to fall back to a global one."""

    local: int = 0
    global_: int = 0


def _post_order(pre: Diagram, post: Diagram, f: ZXFlow, origin: dict[int, list[int]]) -> list[int]:
    pos = f.position()
    big = len(pos)
    keys = {}
    for n in post.non_clifford_spiders():
        srcs = origin.get(n, [n] if n in pre.nodes else [])
        ps = [pos[m] for m in srcs if m in pos]
        keys[n] = (min(ps) if ps else big, 0 if n in pre.nodes else 1, n)
    return sorted(keys, key=lambda n: keys[n])


def transport_flow(
    pre: Diagram,
    result: RewriteResult,
    f: ZXFlow,
    stats: Optional[TransportStats] = None,
    check: bool = True,
) -> ZXFlow:
    """Carry a plain ZX-flow across a rewrite.

    Non-Clifford spiders keep the order position of the node they came
    from.  Each semiweb keeps its letters on wires away from the rewritten
    region and is completed inside it by the linear solver.
    """
    if f.strong:
        raise TransportError("transport is defined for plain flows")
    post = result.diagram
    order = _post_order(pre, post, f, result.origin)
    pos = {v: i for i, v in enumerate(order)}
    clifford = {n for n in post.spiders() if post.is_clifford(n)}
    touched = result.touched
    stable = []
    for w, (a, b) in post.wires.items():
        if w not in pre.wires:
            continue
        if any(e.is_node and e.ref in touched for e in (a, b)):
            continue
        if any(e.is_node and e.ref in touched for e in pre.wires[w]):
            continue
        stable.append(w)
    post_inputs = [w for w in post.inputs if w is not None]

    def solve(old: PauliSupport, extra_pins: dict[int, str], pi_at: Optional[int]) -> PauliSupport:
        if pi_at is None:
            no_def = set(clifford)
            pi = set()
        else:
            no_def = clifford | {n for n in order if pos[n] <= pos[pi_at] and n != pi_at}
            pi = {pi_at}
        pins = {w: old.letter(w) for w in stable}
        pins.update(extra_pins)
        s = solve_constrained(post, SemiwebConstraintSet(no_defect=no_def, pi_defect=pi, pins=pins))
        if s is not None:
            if stats is not None:
                stats.local += 1
            return s
        s = solve_constrained(post, SemiwebConstraintSet(no_defect=no_def, pi_defect=pi, pins=extra_pins))
        if s is None:
            raise TransportError(f"no semiweb for {'f(%d)' % pi_at if pi_at is not None else 'a logical'} after {result.steps}")
        if stats is not None:
            stats.global_ += 1
        return s

    logicals = []
    for i in range(len(post.inputs)):
        pair = []
        for k, ch in enumerate("ZX"):
            pins = {w: ("I" if j != i else ch) for j, w in enumerate(post.inputs)}
            old = f.logicals[i][k] if i < len(f.logicals) else PauliSupport()
            pair.append(solve(old, pins, None))
        logicals.append((pair[0], pair[1]))

    flows = {}
    pre_pos = f.position()
    for v in order:
        srcs = result.origin.get(v, [v] if v in pre.nodes else [])
        src = min((m for m in srcs if m in pre_pos), key=lambda m: pre_pos[m], default=None)
        old = f.flows[src] if src is not None else PauliSupport()
        flows[v] = solve(old, {w: "I" for w in post_inputs}, v)
    g = ZXFlow(order, logicals, flows, strong=False)
    if check:
        ok, why = verify_zx_flow(post, g)
        if not ok:
            raise TransportError(f"transported flow fails: {why[:3]}")
    return g


# --------------------------------------------------------------------------
# match enumeration


def _bipartite_at(d: Diagram, v: int) -> Optional[tuple[list[int], list[int]]]:
    """Guess a complete bipartite pattern with ``v`` on the left side."""
    if d.phase(v) != 0 or _has_self_loop(d, v):
        return None
    t = d.type(v)
    zs = []
    for w in d.legs(v):
        u = _node_neighbour(d, w, v)
        if u is not None and d.nodes[u].is_spider and d.type(u) is t.opposite and d.phase(u) == 0:
            zs.append(u)
    if not zs or len(set(zs)) != len(zs):
        return None
    common = None
    for z in zs:
        ns = {_node_neighbour(d, w, z) for w in d.legs(z)}
        ns = {u for u in ns if u is not None and d.nodes[u].is_spider and d.type(u) is t and d.phase(u) == 0}
        common = ns if common is None else common & ns
    xs = sorted(common or {v})
    if v not in xs or min(xs) != v:
        return None
    return xs, sorted(zs)


def candidate_steps(d: Diagram, rules=None, include_r2l: bool = True) -> list[RewriteStep]:
    """Steps whose anchors match, for fuzzing and simplification.

    Right-to-left steps that invent structure use small fixed parameters.
    """
    rules = set(Rule) if rules is None else {Rule(r) for r in rules}
    out: list[RewriteStep] = []
    spiders = d.spiders()
    for w, (a, b) in sorted(d.wires.items()):
        if not (a.is_node and b.is_node):
            continue
        if a.ref != b.ref and d.nodes[a.ref].is_spider and d.nodes[b.ref].is_spider:
            ta, tb = d.type(a.ref), d.type(b.ref)
            if ta is tb:
                both_nc = not d.is_clifford(a.ref) and not d.is_clifford(b.ref)
                out.append(RewriteStep.make(Rule.FUSE_FULL if both_nc else Rule.FUSE, "L2R", (w,)))
            else:
                out.append(RewriteStep.make(Rule.STRONG_COMP, "L2R", (w,)))
                out.append(RewriteStep.make(Rule.SCALAR_S2, "L2R", (w,)))
        if a.ref == b.ref and d.nodes[a.ref].is_spider:
            out.append(RewriteStep.make(Rule.FUSE, "L2R", (w,)))
        if a.ref != b.ref and d.type(a.ref) is NodeType.H and d.type(b.ref) is NodeType.H:
            out.append(RewriteStep.make(Rule.H_CANCEL, "L2R", (w,)))
    for v in spiders:
        out.append(RewriteStep.make(Rule.COLOUR_CHANGE, "L2R", (v,)))
        out.append(RewriteStep.make(Rule.COLOUR_CHANGE, "R2L", (v,)))
        out.append(RewriteStep.make(Rule.IDENTITY, "L2R", (v,)))
        out.append(RewriteStep.make(Rule.SCALAR_S1, "L2R", (v,)))
        out.append(RewriteStep.make(Rule.HAD_DECOMP, "R2L", (v,)))
        legs = d.legs(v)
        pis = [x for x in legs if _pi_node(d, x, v) is not None]
        for x in pis:
            out.append(RewriteStep.make(Rule.PI_COPY, "L2R", (v,), legs=[x]))
        if legs and len(set(legs)) == len(legs):
            if len(legs) >= 2 and all(x in pis for x in legs[:-1]):
                out.append(RewriteStep.make(Rule.PI_COPY, "R2L", (v,), legs=legs[:-1]))
            if include_r2l:
                ph = d.phase(v)
                for beta in (Fraction(0), Fraction(1, 2), ph):
                    rule = Rule.FUSE_FULL
                    out.append(RewriteStep.make(rule, "R2L", (v,), legs=legs[: len(legs) // 2], phase=beta))
                if not is_clifford_phase(ph):
                    out.append(RewriteStep.make(Rule.FUSE_FULL, "R2L", (v,), legs=legs[:1], phase=Fraction(1, 4)))
        if d.type(v) is NodeType.Z and d.phase(v) in (Fraction(1, 2), Fraction(3, 2)):
            out.append(RewriteStep.make(Rule.LOCAL_COMP, "L2R", (v,)))
        bip = _bipartite_at(d, v)
        if bip is not None:
            out.append(RewriteStep.make(Rule.STRONG_COMP, "R2L", (), left=bip[0], right=bip[1]))
    for h in d.h_nodes():
        out.append(RewriteStep.make(Rule.HAD_DECOMP, "L2R", (h,), colour="Z"))
        out.append(RewriteStep.make(Rule.HAD_DECOMP, "L2R", (h,), colour="X"))
        out.append(RewriteStep.make(Rule.H_SELF_LOOP, "L2R", (h,)))
    if include_r2l:
        for w in d.wire_ids():
            out.append(RewriteStep.make(Rule.IDENTITY, "R2L", (w,), type="Z"))
            out.append(RewriteStep.make(Rule.IDENTITY, "R2L", (w,), type="X"))
        out.append(RewriteStep.make(Rule.SCALAR_S2, "R2L", (), type="Z", phase=Fraction(1, 4)))
        out.append(RewriteStep.make(Rule.SCALAR_S1, "R2L", (), type="Z", phase=Fraction(1, 2)))
    hs = d.h_nodes()
    for i, h1 in enumerate(hs):
        for h2 in hs[i + 1 :]:
            out.append(RewriteStep.make(Rule.PARALLEL_H, "L2R", (h1, h2)))
    for v in spiders:
        if d.type(v) is not NodeType.Z or d.phase(v).denominator != 1:
            continue
        for w in d.legs(v):
            h = _node_neighbour(d, w, v)
            if h is None or d.type(h) is not NodeType.H or _has_self_loop(d, h):
                continue
            o = next(x for x in d.legs(h) if x != w)
            u = _node_neighbour(d, o, h)
            if u is not None and u > v and d.nodes[u].is_spider and d.phase(u).denominator == 1:
                out.append(RewriteStep.make(Rule.PIVOT, "L2R", (v, u)))
    return [s for s in out if s.rule in rules]
