"""Pauli webs and semiwebs.

A web is a sign-free Pauli colouring of wires (:class:`PauliSupport`).  All
local conditions are affine over GF(2) in the ``2|W|`` bits of the colouring,
so checking, basis computation and constrained search share one encoding:
wire ``w`` at sorted position ``p`` owns variables ``2p`` (Z bit) and
``2p + 1`` (X bit).

At a spider of colour ``T`` the *same* plane is the ``T`` bit and the
*opposite* plane is the other one.  With ``s`` the same-plane parity over the
legs and ``o`` the common opposite bit, a semiweb twists the phase ``phi`` of
the spider by ``pi*s - 2*phi*o``.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional

from . import gf2
from .diagram import Diagram, Edge, NodeType, format_phase, normalize_phase
from .pauli import PauliSupport, bits

__all__ = [
    "NodeConditions",
    "WebClass",
    "WebMode",
    "SemiwebConstraintSet",
    "WebSystem",
    "check_conditions",
    "is_pauli_web",
    "is_semiweb",
    "defects",
    "product",
    "basic_semiweb",
    "basic_semiwebs",
    "edge_semiweb",
    "decompose",
    "web_basis",
    "classify",
    "web_class_counts",
    "solve_constrained",
    "check_isometry",
    "local_eigenvalue",
    "firing_sign",
    "propagate_h",
    "parity_violations",
    "format_web",
    "NotASemiwebError",
    "InadmissibleEdgeError",
]


class NotASemiwebError(ValueError):
    pass


class InadmissibleEdgeError(ValueError):
    pass


# --------------------------------------------------------------------------
# local analysis


def _planes(t: NodeType) -> tuple[str, str]:
    """``(same, opposite)`` plane names for a spider type."""
    return ("z", "x") if t is NodeType.Z else ("x", "z")


def _bit(w: PauliSupport, plane: str, wire: int) -> int:
    return ((w.z if plane == "z" else w.x) >> wire) & 1


def _spider_bits(d: Diagram, n: int, w: PauliSupport) -> tuple[list[int], list[int]]:
    same, opp = _planes(d.type(n))
    legs = d.legs(n)
    return [_bit(w, same, x) for x in legs], [_bit(w, opp, x) for x in legs]


@dataclass(frozen=True)
class NodeConditions:
    """Which local conditions hold at a node; ``None`` where undefined."""

    h_ok: Optional[bool] = None
    all_or_nothing_ok: Optional[bool] = None
    parity_ok: Optional[bool] = None
    clifford_ok: Optional[bool] = None

    @property
    def semiweb_ok(self) -> bool:
        return self.h_ok is not False and self.all_or_nothing_ok is not False

    @property
    def web_ok(self) -> bool:
        return all(v is not False for v in (self.h_ok, self.all_or_nothing_ok, self.parity_ok, self.clifford_ok))


def _h_ok(d: Diagram, n: int, w: PauliSupport) -> bool:
    a, b = d.legs(n)
    return (w.letter(a) + w.letter(b)) in ("II", "XZ", "ZX", "YY")


def _parity_ok(phase: Fraction, s: int, o: int) -> bool:
    if phase.denominator == 2:
        return s % 2 == o
    return s % 2 == 0


def check_conditions(d: Diagram, w: PauliSupport) -> dict[int, NodeConditions]:
    out = {}
    for n in sorted(d.nodes):
        t = d.type(n)
        if t is NodeType.H:
            out[n] = NodeConditions(h_ok=_h_ok(d, n, w))
            continue
        same, opp = _spider_bits(d, n, w)
        if not same:
            out[n] = NodeConditions(None, True, True, True)
            continue
        aon = all(b == opp[0] for b in opp)
        o = opp[0] if aon else 1
        ph = d.phase(n)
        out[n] = NodeConditions(
            h_ok=None,
            all_or_nothing_ok=aon,
            parity_ok=_parity_ok(ph, sum(same), o),
            clifford_ok=not (any(opp) and ph.denominator > 2),
        )
    return out


def is_pauli_web(d: Diagram, w: PauliSupport) -> bool:
    return all(c.web_ok for c in check_conditions(d, w).values())


def is_semiweb(d: Diagram, w: PauliSupport) -> bool:
    return all(c.semiweb_ok for c in check_conditions(d, w).values())


def parity_violations(d: Diagram, w: PauliSupport) -> list[int]:
    """Spiders where the parity condition fails (sorted ids)."""
    return [n for n, c in check_conditions(d, w).items() if c.parity_ok is False]


def _twist(phase: Fraction, s: int, o: int) -> Fraction:
    return normalize_phase(Fraction(s % 2) - 2 * phase * o)


def defects(d: Diagram, w: PauliSupport) -> dict[int, Fraction]:
    """Nonzero twist angles (multiples of pi in ``[0, 2)``) keyed by spider."""
    out = {}
    for n in d.spiders():
        same, opp = _spider_bits(d, n, w)
        if not same:
            continue
        if any(b != opp[0] for b in opp):
            raise NotASemiwebError(f"all-or-nothing fails at node {n}")
        a = _twist(d.phase(n), sum(same), opp[0])
        if a:
            out[n] = a
    for n in d.h_nodes():
        if not _h_ok(d, n, w):
            raise NotASemiwebError(f"H condition fails at node {n}")
    return out


def product(*ws: PauliSupport) -> PauliSupport:
    out = PauliSupport()
    for w in ws:
        out = out * w
    return out


# --------------------------------------------------------------------------
# firing signs


def local_eigenvalue(d: Diagram, n: int, w: PauliSupport) -> complex:
    """Eigenvalue of the restricted Pauli on the local state of a web node.

    For a Z spider with full X-support, ``s`` Z bits and phase ``phi`` this is
    ``(-i)^s e^{i phi}``; otherwise 1.  X spiders use the swapped letters and
    pick up ``-1`` per Y.  H nodes always give 1.
    """
    t = d.type(n)
    if t is NodeType.H or d.degree(n) == 0:
        return 1.0 + 0j
    same, opp = _spider_bits(d, n, w)
    s = sum(same)
    if not opp[0]:
        return 1.0 + 0j
    lam = (-1j) ** s * cmath.exp(1j * cmath.pi * float(d.phase(n)))
    if t is NodeType.X:
        lam *= (-1) ** s  # every same-plane bit sits on a Y here
    return complex(round(lam.real, 12), round(lam.imag, 12))


def firing_sign(d: Diagram, w: PauliSupport) -> int:
    """Sign ``k`` in ``D = k * Q D P`` for a Pauli web ``w``."""
    lam = 1.0 + 0j
    for n in sorted(d.nodes):
        lam *= local_eigenvalue(d, n, w)
    flips = 0
    for x, (a, b) in d.wires.items():
        if w.letter(x) != "Y":
            continue
        if a.is_node and b.is_node:
            flips += 1
        elif (a.kind == "input" and b.is_node) or (b.kind == "input" and a.is_node):
            flips += 1
    lam *= (-1) ** flips
    if abs(lam.imag) > 1e-9 or abs(abs(lam.real) - 1) > 1e-9:
        raise NotASemiwebError(f"support {w} is not a Pauli web (eigenvalue product {lam})")
    return 1 if lam.real > 0 else -1


# --------------------------------------------------------------------------
# the linear system


class WebSystem:
    """Variable numbering and constraint rows for one diagram."""

    def __init__(self, d: Diagram):
        self.d = d
        self.wires = d.wire_ids()
        self.pos = {w: i for i, w in enumerate(self.wires)}
        self.nvars = 2 * len(self.wires)

    def var(self, w: int, plane: str) -> int:
        return 2 * self.pos[w] + (0 if plane == "z" else 1)

    def bit(self, w: int, plane: str) -> int:
        return 1 << self.var(w, plane)

    def to_support(self, v: int) -> PauliSupport:
        z = x = 0
        for w, i in self.pos.items():
            z |= ((v >> (2 * i)) & 1) << w
            x |= ((v >> (2 * i + 1)) & 1) << w
        return PauliSupport(z, x)

    def from_support(self, s: PauliSupport) -> int:
        v = 0
        for w, i in self.pos.items():
            v |= ((s.z >> w) & 1) << (2 * i)
            v |= ((s.x >> w) & 1) << (2 * i + 1)
        return v

    # each helper yields (row, rhs) pairs

    def h_rows(self, n: int):
        a, b = self.d.legs(n)
        yield self.bit(a, "z") ^ self.bit(b, "x"), 0
        yield self.bit(a, "x") ^ self.bit(b, "z"), 0

    def aon_rows(self, n: int):
        _, opp = _planes(self.d.type(n))
        legs = self.d.legs(n)
        for x in legs[1:]:
            r = self.bit(legs[0], opp) ^ self.bit(x, opp)
            if r:
                yield r, 0

    def _same_sum(self, n: int) -> int:
        same, _ = _planes(self.d.type(n))
        r = 0
        for x in self.d.legs(n):
            r ^= self.bit(x, same)
        return r

    def _opp0(self, n: int) -> int:
        _, opp = _planes(self.d.type(n))
        return self.bit(self.d.legs(n)[0], opp)

    def parity_rows(self, n: int):
        if not self.d.legs(n):
            return
        ph = self.d.phase(n)
        if ph.denominator == 2:
            yield self._same_sum(n) ^ self._opp0(n), 0
        else:
            yield self._same_sum(n), 0

    def clifford_rows(self, n: int):
        if self.d.legs(n) and self.d.phase(n).denominator > 2:
            yield self._opp0(n), 0

    def no_defect_rows(self, n: int):
        yield from self.parity_rows(n)
        yield from self.clifford_rows(n)

    def pi_defect_rows(self, n: int):
        if not self.d.legs(n):
            yield 0, 1  # a scalar spider never twists
            return
        ph = self.d.phase(n)
        if ph.denominator == 1:
            yield self._same_sum(n), 1
        elif ph.denominator == 2:
            yield self._same_sum(n) ^ self._opp0(n), 1
        else:
            yield self._opp0(n), 0
            yield self._same_sum(n), 1

    def pin_rows(self, w: int, letter: str):
        zb, xb = bits(letter)
        yield self.bit(w, "z"), zb
        yield self.bit(w, "x"), xb

    def semiweb_rows(self):
        for n in sorted(self.d.nodes):
            if self.d.type(n) is NodeType.H:
                yield from self.h_rows(n)
            else:
                yield from self.aon_rows(n)

    def web_rows(self):
        yield from self.semiweb_rows()
        for n in self.d.spiders():
            yield from self.no_defect_rows(n)


@dataclass
class SemiwebConstraintSet:
    """Extra affine constraints on top of the H and all-or-nothing rules."""

    require_parity: set[int] = field(default_factory=set)
    no_defect: set[int] = field(default_factory=set)
    pi_defect: set[int] = field(default_factory=set)
    pins: dict[int, str] = field(default_factory=dict)


def _system(d: Diagram, c: SemiwebConstraintSet) -> tuple[WebSystem, gf2.AffineSystem]:
    ws = WebSystem(d)
    sys = gf2.AffineSystem(ws.nvars)
    for r, b in ws.semiweb_rows():
        sys.add(r, b)
    for n in sorted(c.require_parity):
        for r, b in ws.parity_rows(n):
            sys.add(r, b)
    for n in sorted(c.no_defect):
        for r, b in ws.no_defect_rows(n):
            sys.add(r, b)
    for n in sorted(c.pi_defect):
        for r, b in ws.pi_defect_rows(n):
            sys.add(r, b)
    for w, ch in sorted(c.pins.items()):
        for r, b in ws.pin_rows(w, ch):
            sys.add(r, b)
    return ws, sys


def solve_constrained(d: Diagram, c: SemiwebConstraintSet) -> Optional[PauliSupport]:
    """Least solution (free variables zero) of the constraint system, or None."""
    ws, sys = _system(d, c)
    v = sys.solution()
    return None if v is None else ws.to_support(v)


def solution_space(d: Diagram, c: SemiwebConstraintSet) -> Optional[tuple[PauliSupport, list[PauliSupport]]]:
    """A particular solution plus a basis of the homogeneous solutions."""
    ws, sys = _system(d, c)
    v = sys.solution()
    if v is None:
        return None
    return ws.to_support(v), [ws.to_support(k) for k in sys.kernel()]


# --------------------------------------------------------------------------
# bases and classes


class WebMode(str, Enum):
    WEBS = "webs"
    SEMIWEBS = "semiwebs"


def web_basis(d: Diagram, mode: WebMode = WebMode.WEBS) -> list[PauliSupport]:
    ws = WebSystem(d)
    rows = ws.web_rows() if WebMode(mode) is WebMode.WEBS else ws.semiweb_rows()
    sys = gf2.AffineSystem(ws.nvars)
    for r, b in rows:
        sys.add(r, b)
    return [ws.to_support(k) for k in sys.kernel()]


class WebClass(str, Enum):
    DETECTOR = "detector"
    STABILISER = "stabiliser"
    COSTABILISER = "costabiliser"
    LOGICAL = "logical"


def _boundary_mask(wires: Iterable[Optional[int]]) -> int:
    m = 0
    for w in wires:
        if w is not None:
            m |= 1 << w
    return m


def classify(d: Diagram, w: PauliSupport) -> WebClass:
    if not is_pauli_web(d, w):
        raise NotASemiwebError(f"{w} is not a Pauli web")
    sup = w.z | w.x
    on_in = bool(sup & _boundary_mask(d.inputs))
    on_out = bool(sup & _boundary_mask(d.outputs))
    if on_in and on_out:
        return WebClass.LOGICAL
    if on_out:
        return WebClass.STABILISER
    if on_in:
        return WebClass.COSTABILISER
    return WebClass.DETECTOR


def _boundary_vector(d: Diagram, w: PauliSupport) -> tuple[int, int]:
    """Input and output colourings packed as ``2*slot + plane`` bitsets."""
    vin = vout = 0
    for slot, x in enumerate(d.inputs):
        vin |= (((w.z >> x) & 1) << (2 * slot)) | (((w.x >> x) & 1) << (2 * slot + 1))
    for slot, x in enumerate(d.outputs):
        vout |= (((w.z >> x) & 1) << (2 * slot)) | (((w.x >> x) & 1) << (2 * slot + 1))
    return vin, vout


def web_class_counts(d: Diagram) -> dict[WebClass, int]:
    """Dimensions of the web classes modulo detectors.

    ``logical`` counts independent boundary colourings beyond those spanned
    by stabilisers and costabilisers.
    """
    basis = web_basis(d, WebMode.WEBS)
    shift = 2 * len(d.inputs)
    vecs, ins, outs = [], [], []
    for w in basis:
        vi, vo = _boundary_vector(d, w)
        vecs.append(vi | (vo << shift))
        ins.append(vi)
        outs.append(vo)
    r = gf2.rank(vecs)
    stab = r - gf2.rank(ins)
    costab = r - gf2.rank(outs)
    return {
        WebClass.DETECTOR: len(basis) - r,
        WebClass.STABILISER: stab,
        WebClass.COSTABILISER: costab,
        WebClass.LOGICAL: r - stab - costab,
    }


# --------------------------------------------------------------------------
# basic and edge semiwebs


class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[max(ra, rb)] = min(ra, rb)


def basic_semiwebs(d: Diagram) -> dict[int, PauliSupport]:
    """Basic semiweb of every spider.

    The H and all-or-nothing rules are plain equalities between variables;
    the basic semiweb of a spider switches on the whole equality class of its
    opposite-plane bit.
    """
    ws = WebSystem(d)
    uf = _UnionFind(ws.nvars)
    for r, _ in ws.semiweb_rows():
        a = (r & -r).bit_length() - 1
        b = r.bit_length() - 1
        uf.union(a, b)
    classes: dict[int, int] = {}
    for v in range(ws.nvars):
        classes[uf.find(v)] = classes.get(uf.find(v), 0) | (1 << v)
    out = {}
    for n in d.spiders():
        legs = d.legs(n)
        if not legs:
            out[n] = PauliSupport()
            continue
        _, opp = _planes(d.type(n))
        out[n] = ws.to_support(classes[uf.find(ws.var(legs[0], opp))])
    return out


def basic_semiweb(d: Diagram, n: int) -> PauliSupport:
    if not d.nodes[n].is_spider:
        raise ValueError(f"node {n} is not a spider")
    return basic_semiwebs(d)[n]


def propagate_h(d: Diagram, start: int, letter: str) -> PauliSupport:
    """Colour ``start`` with ``letter`` and push it through adjacent H nodes.

    Follows chains of H nodes in both directions; stops at spiders and
    boundaries.
    """
    z, x = bits(letter)
    col: dict[int, tuple[int, int]] = {start: (z, x)}
    todo = [start]
    while todo:
        w = todo.pop()
        zw, xw = col[w]
        for e in d.wires[w]:
            if not e.is_node or d.type(e.ref) is not NodeType.H:
                continue
            legs = d.legs(e.ref)
            other = legs[1] if legs[0] == w else legs[0]
            want = (xw, zw)
            if other in col:
                if col[other] != want:
                    raise InadmissibleEdgeError(f"H chain through node {e.ref} is inconsistent")
                continue
            col[other] = want
            todo.append(other)
    zs = xs = 0
    for w, (a, b) in col.items():
        zs |= a << w
        xs |= b << w
    return PauliSupport(zs, xs)


def edge_semiweb(d: Diagram, e: Edge, letter: str = "Z") -> PauliSupport:
    """Semiweb supported on one edge.

    For a plain edge ``letter`` colours the wire.  For an H-edge it colours
    the first wire and the H node fixes the second.
    """
    s = propagate_h(d, e.wires[0], letter)
    if not is_semiweb(d, s):
        raise InadmissibleEdgeError(f"edge {e.wires} cannot carry {letter}")
    return s


def decompose(d: Diagram, w: PauliSupport) -> tuple[list[int], list[PauliSupport]]:
    """Split a semiweb into basic semiwebs (by spider) and edge-local pieces.

    Returns ``(B, parts)`` with ``w == prod(b_v for v in B) * prod(parts)``.
    """
    if not is_semiweb(d, w):
        raise NotASemiwebError(f"{w} is not a semiweb")
    basics = basic_semiwebs(d)
    B = []
    rest = w
    for n in d.spiders():
        legs = d.legs(n)
        if not legs:
            continue
        _, opp = _planes(d.type(n))
        if _bit(rest, opp, legs[0]):
            rest = rest * basics[n]
            B.append(n)
    parts = []
    done: set[int] = set()
    for w0 in d.wire_ids():
        if w0 in done or rest.letter(w0) == "I":
            continue
        for ch in ("Z", "X"):
            if _bit(rest, "z" if ch == "Z" else "x", w0):
                piece = propagate_h(d, w0, ch)
                parts.append(piece)
                rest = rest * piece
        done.add(w0)
    if not rest.is_empty():
        raise AssertionError(f"decomposition left residue {rest}")
    return B, parts


# --------------------------------------------------------------------------
# isometries


def check_isometry(d: Diagram) -> Optional[tuple[list[PauliSupport], list[PauliSupport]]]:
    """Defect-free logical webs with input colouring ``Z_i`` and ``X_i``.

    Returns None if some input lacks either web, which means the diagram is
    not an isometry.
    """
    lz, lx = [], []
    for i in range(len(d.inputs)):
        for ch, acc in (("Z", lz), ("X", lx)):
            pins = {w: ("I" if j != i else ch) for j, w in enumerate(d.inputs)}
            c = SemiwebConstraintSet(no_defect=set(d.spiders()), pins=pins)
            s = solve_constrained(d, c)
            if s is None:
                return None
            acc.append(s)
    return lz, lx


# --------------------------------------------------------------------------
# text


def format_web(d: Diagram, w: PauliSupport, with_defects: bool = True) -> str:
    """One-line dump: wire letters then defect angles."""
    letters = " ".join(f"{x}:{w.letter(x)}" for x in d.wire_ids() if w.letter(x) != "I") or "-"
    if not with_defects:
        return letters
    dm = defects(d, w)
    ds = " ".join(f"{n}:{format_phase(a)}" for n, a in sorted(dm.items())) or "-"
    return f"wires[{letters}] defects[{ds}]"
