"""Circuit extraction from a diagram with a ZX-flow.

Peeling the latest non-Clifford spider ``v`` with phase ``a`` rewrites

    D = e^{i a/2} * exp(-i a/2 * s P) * D0

where ``D0`` is ``D`` with the phase of ``v`` set to zero, ``P`` is the
output colouring of the focused flow semiweb ``f(v)`` and ``s`` its firing
sign on ``D0``.  What is left after all peels is Clifford; its logical and
stabiliser webs give a tableau which is synthesized by elimination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import gf2
from .circuit import Gate, GateList, dense
from .diagram import Diagram, normalize_phase
from .flow import FlowError, ZXFlow, focus, is_focused, verify_zx_flow
from .oracle import DEFAULT_TOL, evaluate, equal_up_to_scalar
from .pauli import Pauli, PauliSupport
from .webs import SemiwebConstraintSet, defects, firing_sign, solution_space, solve_constrained

__all__ = [
    "ExtractionError",
    "NoTargetError",
    "PauliExp",
    "StabTableau",
    "ExtractedCircuit",
    "peel",
    "extract",
    "residual_tableau",
    "complete_tableau",
    "synthesize_clifford",
    "check_synthesis",
    "lower_pauli_exp",
    "verify_extraction",
]


class ExtractionError(RuntimeError):
    """The input flow or the residual Clifford diagram is unusable."""


class NoTargetError(ExtractionError):
    """There is no non-Clifford spider left to peel."""


@dataclass(frozen=True)
class PauliExp:
    """``exp(-i angle/2 * P)`` with ``angle`` in units of pi."""

    pauli: str
    angle: Fraction

    def matrix(self) -> np.ndarray:
        p = Pauli.from_string(self.pauli).matrix()
        t = np.pi * float(self.angle) / 2
        return np.cos(t) * np.eye(p.shape[0]) - 1j * np.sin(t) * p


@dataclass
class StabTableau:
    """Signed images of ``Z_i`` and ``X_i`` for each input ``i``."""

    n_outputs: int
    z: list[Pauli]
    x: list[Pauli]
    stabilisers: list[Pauli] = field(default_factory=list)

    @property
    def n_inputs(self) -> int:
        return len(self.z)

    def violations(self) -> list[str]:
        out = []
        rows = [("Z", i, p) for i, p in enumerate(self.z)] + [("X", i, p) for i, p in enumerate(self.x)]
        rows += [("S", j, p) for j, p in enumerate(self.stabilisers)]
        for a in range(len(rows)):
            la, ia, pa = rows[a]
            for b in range(a + 1, len(rows)):
                lb, ib, pb = rows[b]
                want_anti = la != lb and la != "S" and lb != "S" and ia == ib
                if pa.commutes(pb) == want_anti:
                    out.append(f"{la}{ia} and {lb}{ib} should {'anti' if want_anti else ''}commute")
        vecs = [_symp(p) for _, _, p in rows]
        if len(gf2.independent_subset(vecs)) != len(vecs):
            out.append("rows are not independent")
        return out


@dataclass
class ExtractedCircuit:
    clifford: StabTableau
    exps: list[PauliExp]
    phase: Fraction = Fraction(0)  # accumulated e^{i pi phase} from peeling

    def gates(self) -> GateList:
        c = synthesize_clifford(self.clifford)
        for e in self.exps:
            c.extend(lower_pauli_exp(e, self.clifford.n_outputs))
        c.phase = normalize_phase(c.phase + self.phase)
        return c


def _symp(p: Pauli) -> int:
    return p.x | (p.z << p.n)


# --------------------------------------------------------------------------
# peeling


def _output_pauli(d: Diagram, s: PauliSupport) -> str:
    return "".join(s.letter(w) for w in d.outputs)


def peel(d: Diagram, f: ZXFlow) -> tuple[PauliExp, Diagram, ZXFlow, Fraction]:
    """Peel the latest non-Clifford spider.

    Returns the exponential, the diagram with that spider's phase removed,
    the remaining flow and the global phase (units of pi) picked up.
    """
    if not f.order:
        raise NoTargetError("no non-Clifford spider to peel")
    if not is_focused(d, f):
        raise ExtractionError("peeling needs a focused flow")
    v = f.order[-1]
    alpha = d.phase(v)
    web = f.flows[v]
    if any(web.letter(w) != "I" for w in d.inputs):
        raise ExtractionError(f"f({v}) has input support")
    d0 = d.copy()
    d0.set_phase(v, 0)
    s = firing_sign(d0, web)
    angle = normalize_phase(alpha if s == 1 else -alpha)
    g = ZXFlow(f.order[:-1], list(f.logicals), {u: w for u, w in f.flows.items() if u != v}, strong=False)
    return PauliExp(_output_pauli(d, web), angle), d0, g, alpha / 2


def _signed(d: Diagram, w: PauliSupport) -> Pauli:
    """Output Pauli ``s Q`` such that ``Q D P = s D`` for the web ``w``."""
    return Pauli.from_string(_output_pauli(d, w), firing_sign(d, w))


def residual_tableau(d: Diagram, f: Optional[ZXFlow] = None) -> StabTableau:
    """Tableau of a Clifford isometry from its defect-free webs."""
    spiders = set(d.spiders())
    n, k = len(d.outputs), len(d.inputs)
    zs, xs = [], []
    for i in range(k):
        for ch, acc, slot in (("Z", zs, 0), ("X", xs, 1)):
            w = None
            if f is not None and i < len(f.logicals):
                cand = f.logicals[i][slot]
                if not defects(d, cand):
                    w = cand
            if w is None:
                pins = {x: ("I" if j != i else ch) for j, x in enumerate(d.inputs)}
                w = solve_constrained(d, SemiwebConstraintSet(no_defect=spiders, pins=pins))
            if w is None:
                raise ExtractionError(f"no defect-free logical web for {ch}{i}: not an isometry")
            acc.append(_signed(d, w))
    sp = solution_space(d, SemiwebConstraintSet(no_defect=spiders, pins={x: "I" for x in d.inputs}))
    stabs: list[Pauli] = []
    if sp is not None:
        _, kernel = sp
        basis = [_symp(p) for p in zs + xs]
        for w in kernel:
            p = _signed(d, w)
            if p.is_identity():
                continue
            v = _symp(p)
            if gf2.in_span(basis, v):
                continue
            basis.append(v)
            stabs.append(p)
    t = StabTableau(n, zs, xs, stabs)
    if len(stabs) != n - k:
        raise ExtractionError(f"found {len(stabs)} stabilisers, expected {n - k}: not an isometry")
    return t


def extract(d: Diagram, f: ZXFlow) -> ExtractedCircuit:
    ok, why = verify_zx_flow(d, f)
    if not ok:
        raise ExtractionError("invalid flow: " + "; ".join(why[:3]))
    try:
        g, _ = focus(d, f)
    except FlowError as exc:
        raise ExtractionError(str(exc)) from exc
    exps: list[PauliExp] = []
    phase = Fraction(0)
    cur = d
    while g.order:
        e, cur, g, ph = peel(cur, g)
        exps.append(e)
        phase += ph
    exps.reverse()
    return ExtractedCircuit(residual_tableau(cur, g), exps, normalize_phase(phase))


# --------------------------------------------------------------------------
# Clifford synthesis


def complete_tableau(t: StabTableau) -> tuple[list[Pauli], list[Pauli]]:
    """Images of ``Z_q`` and ``X_q`` for all qubits, inputs first.

    Ancilla ``j`` maps ``Z`` to the ``j``-th stabiliser; its ``X`` image is
    any Pauli completing the symplectic basis.
    """
    viol = t.violations()
    if viol:
        raise ExtractionError("inconsistent tableau: " + "; ".join(viol[:3]))
    n, k = t.n_outputs, t.n_inputs
    if len(t.stabilisers) != n - k:
        raise ExtractionError("tableau needs one stabiliser per ancilla")
    fixed = [_symp(p) for p in t.z + t.x]
    destab: list[Pauli] = []
    for j, s in enumerate(t.stabilisers):
        rows, rhs = [], []
        for v in fixed + [_symp(p) for p in destab]:
            rows.append(_symp_dual(v, n))
            rhs.append(0)
        for l, s2 in enumerate(t.stabilisers):
            rows.append(_symp_dual(_symp(s2), n))
            rhs.append(1 if l == j else 0)
        sol = gf2.solve(rows, rhs, 2 * n)
        if sol is None:
            raise ExtractionError("cannot complete the tableau")
        destab.append(Pauli(n, sol & ((1 << n) - 1), sol >> n, 0))
    # make the destabilisers Hermitian with sign +
    destab = [Pauli(n, p.x, p.z, bin(p.x & p.z).count("1")) for p in destab]
    return list(t.z) + list(t.stabilisers), list(t.x) + destab


def _symp_dual(v: int, n: int) -> int:
    """Row ``r`` with ``r . u`` equal to the symplectic product of ``v`` and ``u``."""
    lo = v & ((1 << n) - 1)
    hi = v >> n
    return hi | (lo << n)


_INVERSE = {"h": "h", "s": "sdg", "sdg": "s", "x": "x", "z": "z", "cx": "cx", "cz": "cz"}


def synthesize_clifford(t: StabTableau) -> GateList:
    """Gate list with ancillae in ``|0>`` whose conjugation matches ``t``."""
    n, k = t.n_outputs, t.n_inputs
    zs, xs = complete_tableau(t)
    zs = [p.copy() for p in zs]
    xs = [p.copy() for p in xs]
    seq: list[tuple[str, tuple[int, ...]]] = []

    def g(name: str, *qs: int) -> None:
        seq.append((name, qs))
        for p in zs + xs:
            getattr(p, "conj_" + name)(*qs)

    for q in range(n):
        xq = xs[q]
        if not (xq.x >> q) & 1:
            j = next((j for j in range(q + 1, n) if (xq.x >> j) & 1), None)
            if j is None:
                j = next(j for j in range(q, n) if (xq.z >> j) & 1)
                g("h", j)
            if j != q:
                g("cx", j, q)
        for j in range(q + 1, n):
            if (xs[q].x >> j) & 1:
                g("cx", q, j)
        if (xs[q].z >> q) & 1:
            g("s", q)
        for j in range(q + 1, n):
            if (xs[q].z >> j) & 1:
                g("cz", q, j)
        for j in range(q + 1, n):
            zb, xb = (zs[q].z >> j) & 1, (zs[q].x >> j) & 1
            if xb and zb:
                g("s", j)
                g("h", j)
            elif xb:
                g("h", j)
        for j in range(q + 1, n):
            if (zs[q].z >> j) & 1:
                g("cx", j, q)
        if (zs[q].x >> q) & 1:
            g("h", q)
            g("s", q)
            g("h", q)
        if xs[q].sign == -1:
            g("z", q)
        if zs[q].sign == -1:
            g("x", q)
    for q in range(n):
        if zs[q] != Pauli.from_string("I" * q + "Z" + "I" * (n - q - 1)):
            raise ExtractionError("synthesis did not reach the identity tableau")
    out = GateList(n, ancillae=list(range(k, n)))
    for name, qs in reversed(seq):
        out.append(_INVERSE[name], *qs)
    return out


def _through(c: GateList, q: int, ch: str) -> Pauli:
    p = Pauli.from_string("I" * q + ch + "I" * (c.n_qubits - q - 1))
    for gate in c.gates:
        getattr(p, "conj_" + gate.name)(*gate.qubits)
    return p


def check_synthesis(t: StabTableau, c: GateList) -> list[str]:
    """Conjugate each generator through the Clifford gates of ``c`` and compare with ``t``."""
    out = []
    qs = c.inputs
    for i in range(t.n_inputs):
        for ch, want in (("Z", t.z[i]), ("X", t.x[i])):
            got = _through(c, qs[i], ch)
            if got != want:
                out.append(f"{ch}{i} maps to {got}, expected {want}")
    for j, s in enumerate(t.stabilisers):
        got = _through(c, c.ancillae[j], "Z")
        if got != s:
            out.append(f"ancilla {c.ancillae[j]} maps Z to {got}, expected {s}")
    return out


# --------------------------------------------------------------------------
# Pauli exponentials


def lower_pauli_exp(e: PauliExp, n: Optional[int] = None) -> GateList:
    """Basis change, CX ladder onto the highest supported qubit, Rz, undo."""
    n = len(e.pauli) if n is None else n
    c = GateList(n)
    support = [q for q, ch in enumerate(e.pauli) if ch != "I"]
    if not support:
        c.phase = normalize_phase(-Fraction(e.angle) / 2)
        return c
    basis: list[Gate] = []
    for q in support:
        ch = e.pauli[q]
        if ch == "X":
            basis.append(Gate("h", (q,)))
        elif ch == "Y":
            basis += [Gate("sdg", (q,)), Gate("h", (q,))]
    pivot = support[-1]
    ladder = [Gate("cx", (q, pivot)) for q in support[:-1]]
    p = Pauli.from_string(e.pauli.ljust(n, "I"))
    for gate in basis + ladder:
        getattr(p, "conj_" + gate.name)(*gate.qubits)
    angle = Fraction(e.angle if p.sign == 1 else -e.angle)
    rz = Gate.rz(pivot, angle)
    # Rz has period 4 pi: a 2 pi shift in normalising the angle is a sign
    if (angle - rz.angle) % 4:
        c.phase = Fraction(1)
    c.gates += basis + ladder + [rz]
    c.gates += list(reversed(ladder))
    c.gates += [Gate(_INVERSE[gate.name], gate.qubits) for gate in reversed(basis)]
    return c


def verify_extraction(d: Diagram, c: ExtractedCircuit, tol: float = DEFAULT_TOL, cap: Optional[int] = None) -> Optional[complex]:
    """Proportionality constant between the diagram and the lowered circuit."""
    m = evaluate(d) if cap is None else evaluate(d, cap)
    return equal_up_to_scalar(m, dense(c.gates()), tol)
