"""Gate lists, dense simulation and a QASM-style text format.

A :class:`GateList` acts on ``n_qubits`` wires.  Qubits listed in
``ancillae`` start in ``|0>``; the rest are the inputs in index order, so a
gate list denotes an isometry from ``2^k`` to ``2^n`` dimensions.  Qubit 0
is the most significant bit, as in :mod:`zxflow.oracle`.
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .diagram import normalize_phase

__all__ = ["Gate", "GateList", "GATE_ARITY", "dense", "emit_qasm", "parse_qasm", "QasmError"]

GATE_ARITY = {"h": 1, "s": 1, "sdg": 1, "x": 1, "z": 1, "rz": 1, "cx": 2, "cz": 2}

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
_ONE_QUBIT = {
    "h": _H,
    "s": np.diag([1, 1j]),
    "sdg": np.diag([1, -1j]),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "z": np.diag([1, -1]).astype(complex),
}


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[int, ...]
    angle: Optional[Fraction] = None  # rz only, in units of pi

    def __post_init__(self):
        if self.name not in GATE_ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(self.qubits) != GATE_ARITY[self.name]:
            raise ValueError(f"{self.name} takes {GATE_ARITY[self.name]} qubits")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.name} on repeated qubit")
        if (self.name == "rz") != (self.angle is not None):
            raise ValueError("only rz carries an angle")

    @classmethod
    def rz(cls, q: int, angle) -> "Gate":
        return cls("rz", (q,), normalize_phase(angle))


@dataclass
class GateList:
    n_qubits: int
    gates: list[Gate] = field(default_factory=list)
    ancillae: list[int] = field(default_factory=list)
    phase: Fraction = Fraction(0)  # global phase e^{i pi phase}

    @property
    def inputs(self) -> list[int]:
        return [q for q in range(self.n_qubits) if q not in self.ancillae]

    def append(self, name: str, *qubits: int, angle=None) -> None:
        self.gates.append(Gate(name, tuple(qubits), None if angle is None else normalize_phase(angle)))

    def extend(self, other: "GateList") -> None:
        if other.n_qubits != self.n_qubits:
            raise ValueError("qubit counts differ")
        self.gates.extend(other.gates)
        self.phase = normalize_phase(self.phase + other.phase)

    def count(self, name: str) -> int:
        return sum(1 for g in self.gates if g.name == name)


def _apply_1q(state: np.ndarray, m: np.ndarray, q: int) -> np.ndarray:
    state = np.moveaxis(state, q, 0)
    state = np.tensordot(m, state, axes=([1], [0]))
    return np.moveaxis(state, 0, q)


def _gate_matrix(g: Gate) -> np.ndarray:
    if g.name == "rz":
        t = math.pi * float(g.angle)
        return np.diag([cmath.exp(-0.5j * t), cmath.exp(0.5j * t)])
    return _ONE_QUBIT[g.name]


def dense(c: GateList) -> np.ndarray:
    """Matrix of shape ``(2^n, 2^k)``; columns are input basis states."""
    n = c.n_qubits
    k = len(c.inputs)
    # rows over all n qubits, one column per input basis state
    t = np.zeros((2,) * n + (2**k,), dtype=complex)
    for col in range(2**k):
        idx = [0] * n
        for j, q in enumerate(c.inputs):
            idx[q] = (col >> (k - 1 - j)) & 1
        t[tuple(idx) + (col,)] = 1
    for g in c.gates:
        if g.name in ("cx", "cz"):
            a, b = g.qubits
            t = np.moveaxis(t, (a, b), (0, 1)).copy()
            if g.name == "cx":
                t[1] = t[1][::-1].copy()
            else:
                t[1, 1] = -t[1, 1]
            t = np.moveaxis(t, (0, 1), (a, b))
        else:
            t = _apply_1q(t, _gate_matrix(g), g.qubits[0])
    return cmath.exp(1j * math.pi * float(c.phase)) * t.reshape(2**n, 2**k)


# --------------------------------------------------------------------------
# text format


class QasmError(ValueError):
    pass


def _fmt_angle(a: Fraction) -> str:
    if a == 0:
        return "0"
    a = normalize_phase(a)
    head = "pi" if a.numerator == 1 else f"{a.numerator}*pi"
    return head if a.denominator == 1 else f"{head}/{a.denominator}"


def emit_qasm(c: GateList, comment: str = "") -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    if comment:
        lines += [f"// {x}" for x in comment.splitlines()]
    if c.ancillae:
        lines.append("// ancillae start in |0>: " + " ".join(f"q[{a}]" for a in c.ancillae))
    if c.phase:
        lines.append(f"// global phase: {_fmt_angle(c.phase)}")
    lines.append(f"qreg q[{c.n_qubits}];")
    for g in c.gates:
        qs = ",".join(f"q[{q}]" for q in g.qubits)
        if g.name == "rz":
            lines.append(f"rz({_fmt_angle(g.angle)}) {qs};")
        else:
            lines.append(f"{g.name} {qs};")
    return "\n".join(lines) + "\n"


_ANGLE = re.compile(r"^\s*(-)?\s*(\d+)?\s*\*?\s*(pi)?\s*(?:/\s*(\d+))?\s*$")


def _parse_angle(s: str) -> Fraction:
    s = s.strip()
    if s in ("0", "-0"):
        return Fraction(0)
    m = _ANGLE.match(s)
    if not m or not m.group(3):
        raise QasmError(f"angle {s!r} is not a rational multiple of pi")
    num = int(m.group(2)) if m.group(2) else 1
    if m.group(1):
        num = -num
    den = int(m.group(4)) if m.group(4) else 1
    return normalize_phase(Fraction(num, den))


_GATE_LINE = re.compile(r"^(\w+)(?:\(([^)]*)\))?\s+(.+);$")
_QUBIT = re.compile(r"^q\[(\d+)\]$")


def parse_qasm(text: str) -> GateList:
    n = None
    anc: list[int] = []
    phase = Fraction(0)
    gates: list[Gate] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("//"):
            body = line[2:].strip()
            if body.startswith("ancillae start in |0>:"):
                anc = [int(x) for x in re.findall(r"q\[(\d+)\]", body)]
            elif body.startswith("global phase:"):
                phase = _parse_angle(body.split(":", 1)[1])
            continue
        if line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = re.match(r"^qreg\s+q\[(\d+)\];$", line)
        if m:
            n = int(m.group(1))
            continue
        m = _GATE_LINE.match(line)
        if not m:
            raise QasmError(f"cannot parse line {raw!r}")
        name, arg, qs = m.group(1), m.group(2), m.group(3)
        qubits = []
        for q in qs.split(","):
            mq = _QUBIT.match(q.strip())
            if not mq:
                raise QasmError(f"bad qubit {q!r}")
            qubits.append(int(mq.group(1)))
        try:
            angle = _parse_angle(arg) if name == "rz" else None
            if name != "rz" and arg is not None:
                raise QasmError(f"{name} takes no argument")
            gates.append(Gate(name, tuple(qubits), angle))
        except ValueError as exc:
            raise QasmError(str(exc)) from exc
    if n is None:
        raise QasmError("missing qreg declaration")
    for g in gates:
        if any(q >= n for q in g.qubits):
            raise QasmError(f"qubit out of range in {g}")
    return GateList(n, gates, anc, phase)
