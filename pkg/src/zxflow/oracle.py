"""Dense semantics for small diagrams.

Everything here costs exponential time and exists to check the combinatorial
machinery on desk-scale instances.  Maps are plain complex ``numpy`` arrays
of shape ``(2**len(outputs), 2**len(inputs))``; qubit 0 is the most
significant bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .diagram import Diagram, NodeType, validate
from .pauli import PAULI_MATRICES, PauliSupport

__all__ = [
    "DEFAULT_TOL",
    "DEFAULT_WIRE_CAP",
    "OracleSizeError",
    "FiringError",
    "FiringReport",
    "local_state",
    "twisted_local_state",
    "evaluate",
    "equal_up_to_scalar",
    "allclose_normalized",
    "local_eigenvalue",
    "local_twist",
    "verify_firing",
    "pauli_string_matrix",
]

DEFAULT_TOL = 1e-9
DEFAULT_WIRE_CAP = 16

_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
_MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)


class OracleSizeError(RuntimeError):
    """The diagram is too large for dense evaluation."""


class FiringError(AssertionError):
    """Firing a web did not reproduce the diagram; indicates a bug."""


def _e(phase: Fraction) -> complex:
    return complex(np.exp(1j * np.pi * float(phase)))


def _kron_power(v: np.ndarray, k: int) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for _ in range(k):
        out = np.kron(out, v)
    return out


def local_state(t: NodeType, phase: Fraction, degree: int) -> np.ndarray:
    """Vector of the local state of a node with ``degree`` legs."""
    t = NodeType(t)
    if t is NodeType.H:
        if degree != 2:
            raise ValueError("H node needs exactly two legs")
        return (np.kron([1, 0], _PLUS) + np.kron([0, 1], _MINUS)).astype(complex)
    if degree < 0:
        raise ValueError("negative degree")
    if t is NodeType.Z:
        a, b = np.array([1, 0], dtype=complex), np.array([0, 1], dtype=complex)
    else:
        a, b = _PLUS, _MINUS
    return _kron_power(a, degree) + _e(phase) * _kron_power(b, degree)


def twisted_local_state(t: NodeType, phase: Fraction, degree: int, alpha: Fraction) -> np.ndarray:
    t = NodeType(t)
    if t is NodeType.H:
        return local_state(t, phase, degree)
    return local_state(t, Fraction(phase) + Fraction(alpha), degree)


# --------------------------------------------------------------------------
# contraction


def evaluate(d: Diagram, cap: int = DEFAULT_WIRE_CAP) -> np.ndarray:
    """Contract the diagram into its ``2^|O| x 2^|I|`` matrix (times the scalar)."""
    bad = validate(d)
    if bad:
        raise ValueError("invalid diagram: " + "; ".join(bad))
    if len(d.wires) > cap:
        raise OracleSizeError(f"{len(d.wires)} wires exceeds the oracle cap of {cap}")
    label: dict[int, int] = {}
    nxt = 0

    def fresh() -> int:
        nonlocal nxt
        nxt += 1
        return nxt - 1

    in_labels: list[int] = [0] * len(d.inputs)
    out_labels: list[int] = [0] * len(d.outputs)
    operands: list = []
    scalar = complex(d.scalar)
    for w, (a, b) in sorted(d.wires.items()):
        if a.is_boundary and b.is_boundary:
            la, lb = fresh(), fresh()
            operands += [np.eye(2, dtype=complex), [la, lb]]
            for e, lab in ((a, la), (b, lb)):
                (in_labels if e.kind == "input" else out_labels)[e.ref] = lab
            continue
        label[w] = fresh()
        for e in (a, b):
            if e.kind == "input":
                in_labels[e.ref] = label[w]
            elif e.kind == "output":
                out_labels[e.ref] = label[w]
    if nxt > 52:
        raise OracleSizeError("too many contraction indices")
    for n in sorted(d.nodes):
        v = d.nodes[n]
        legs = d.legs(n)
        st = local_state(v.type, v.phase, len(legs))
        if not legs:
            scalar *= complex(st[0])
            continue
        operands += [st.reshape((2,) * len(legs)), [label[w] for w in legs]]
    out = out_labels + in_labels
    if not operands:
        return np.array([[scalar]])
    t = np.einsum(*operands, out, optimize="greedy")
    return scalar * np.asarray(t).reshape(2 ** len(d.outputs), 2 ** len(d.inputs))


def allclose_normalized(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """Entrywise ``|a - b| <= tol`` after scaling by the largest magnitude."""
    if a.shape != b.shape:
        return False
    m = max(np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0))
    if m == 0:
        return True
    return bool(np.max(np.abs(a - b)) / m <= tol)


def equal_up_to_scalar(a: np.ndarray, b: np.ndarray, tol: float = DEFAULT_TOL) -> Optional[complex]:
    """Return ``lam != 0`` with ``a = lam * b`` within ``tol``, else ``None``."""
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    ma, mb = np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0)
    if ma == 0 and mb == 0:
        return 1.0 + 0j
    if ma == 0 or mb == 0:
        return None
    i = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    lam = complex(a[i] / b[i])
    if np.max(np.abs(a - lam * b)) / ma > tol:
        return None
    return lam


# --------------------------------------------------------------------------
# webs


def pauli_string_matrix(letters: str) -> np.ndarray:
    m = np.array([[1.0 + 0j]])
    for ch in letters:
        m = np.kron(m, PAULI_MATRICES[ch])
    return m


def _local_operator(d: Diagram, n: int, w: PauliSupport) -> np.ndarray:
    return pauli_string_matrix("".join(w.letter(x) for x in d.legs(n)))


def local_eigenvalue(d: Diagram, n: int, w: PauliSupport, tol: float = DEFAULT_TOL) -> Optional[complex]:
    """Eigenvalue of the restricted Pauli on the local state of ``n``, or None."""
    v = d.nodes[n]
    st = local_state(v.type, v.phase, d.degree(n))
    img = _local_operator(d, n, w) @ st
    lam = equal_up_to_scalar(img, st, tol)
    return lam


def local_twist(d: Diagram, n: int, w: PauliSupport, tol: float = DEFAULT_TOL) -> Optional[float]:
    """The twist angle (in units of pi, in ``[0, 2)``) making ``w_n|n> ~ |n_alpha>``.

    Returns None if no twist works.  Read off from the vector directly.
    """
    v = d.nodes[n]
    k = d.degree(n)
    st = local_state(v.type, v.phase, k)
    img = _local_operator(d, n, w) @ st
    if v.type is NodeType.H:
        return 0.0 if equal_up_to_scalar(img, st, tol) is not None else None
    if k == 0:
        return 0.0
    if v.type is NodeType.X:
        hk = np.array([[1.0]])
        for _ in range(k):
            hk = np.kron(hk, np.array([[1, 1], [1, -1]]) / np.sqrt(2))
        img = hk @ img
    scale = np.max(np.abs(img))
    rest = img.copy()
    rest[0] = 0
    rest[-1] = 0
    if np.max(np.abs(rest)) > tol * scale or abs(img[0]) < tol * scale or abs(img[-1]) < tol * scale:
        return None
    ang = np.angle(img[-1] / img[0]) / np.pi - float(v.phase)
    return float(ang % 2.0)


@dataclass
class FiringReport:
    input_pauli: str
    output_pauli: str
    sign: int


def verify_firing(d: Diagram, w: PauliSupport, tol: float = DEFAULT_TOL, cap: int = DEFAULT_WIRE_CAP) -> FiringReport:
    """Fire a Pauli web and check ``D = sign * Q D P`` densely.

    The sign is the product of the local eigenvalues times ``-1`` for every
    Y on a wire between two nodes or between a node and an input.
    """
    sign = 1.0 + 0j
    for n in sorted(d.nodes):
        lam = local_eigenvalue(d, n, w, tol)
        if lam is None:
            raise ValueError(f"not a Pauli web: node {n} is not an eigenstate")
        sign *= lam
    for x, (a, b) in d.wires.items():
        if w.letter(x) != "Y":
            continue
        if a.is_node and b.is_node:
            sign = -sign
        elif (a.kind == "input" and b.is_node) or (b.kind == "input" and a.is_node):
            sign = -sign
    if abs(sign.imag) > 1e-6 or abs(abs(sign.real) - 1) > 1e-6:
        raise FiringError(f"non-real firing sign {sign}")
    s = 1 if sign.real > 0 else -1
    P = "".join(w.letter(x) for x in d.inputs)
    Q = "".join(w.letter(x) for x in d.outputs)
    m = evaluate(d, cap)
    rhs = s * pauli_string_matrix(Q) @ m @ pauli_string_matrix(P)
    if not allclose_normalized(m, rhs, tol):
        raise FiringError(f"firing check failed for web {w}: P={P} Q={Q} sign={s}")
    return FiringReport(P, Q, s)
