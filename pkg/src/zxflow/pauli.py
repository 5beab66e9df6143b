"""Pauli supports on wires and signed Pauli strings on qubits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

__all__ = ["PauliSupport", "Pauli", "letter", "bits", "PAULI_MATRICES"]

_LETTERS = {(0, 0): "I", (0, 1): "X", (1, 0): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _LETTERS.items()}

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def letter(z: int, x: int) -> str:
    return _LETTERS[(z & 1, x & 1)]


def bits(ch: str) -> tuple[int, int]:
    """``(z, x)`` bits of a Pauli letter."""
    return _BITS[ch.upper()]


@dataclass(frozen=True)
class PauliSupport:
    """Sign-free Pauli string over wires.

    ``z`` and ``x`` are bitsets indexed directly by wire id, so supports stay
    aligned with wires across rewrites that preserve ids.
    """

    z: int = 0
    x: int = 0

    @classmethod
    def from_letters(cls, letters: Mapping[int, str]) -> "PauliSupport":
        z = x = 0
        for w, ch in letters.items():
            zb, xb = bits(ch)
            z |= zb << w
            x |= xb << w
        return cls(z, x)

    def letter(self, w: int) -> str:
        return letter((self.z >> w) & 1, (self.x >> w) & 1)

    def letters(self) -> dict[int, str]:
        """Non-identity letters keyed by wire id."""
        out = {}
        m = self.z | self.x
        while m:
            low = m & -m
            w = low.bit_length() - 1
            out[w] = self.letter(w)
            m ^= low
        return out

    def support(self) -> set[int]:
        return set(self.letters())

    def __mul__(self, other: "PauliSupport") -> "PauliSupport":
        return PauliSupport(self.z ^ other.z, self.x ^ other.x)

    def restrict(self, wires: Iterable[int]) -> "PauliSupport":
        mask = 0
        for w in wires:
            mask |= 1 << w
        return PauliSupport(self.z & mask, self.x & mask)

    def is_empty(self) -> bool:
        return self.z == 0 and self.x == 0

    def __bool__(self) -> bool:
        return not self.is_empty()

    def __str__(self) -> str:
        ls = self.letters()
        if not ls:
            return "{}"
        return "{" + ", ".join(f"{w}:{c}" for w, c in sorted(ls.items())) + "}"


class Pauli:
    """Signed Pauli operator ``i^r * prod_q X_q^{x_q} Z_q^{z_q}`` on ``n`` qubits.

    Qubit 0 is the leftmost tensor factor (most significant bit).
    """

    __slots__ = ("n", "x", "z", "r")

    def __init__(self, n: int, x: int = 0, z: int = 0, r: int = 0):
        self.n = n
        self.x = x
        self.z = z
        self.r = r % 4

    @classmethod
    def from_string(cls, s: str, sign: int = 1) -> "Pauli":
        s = s.strip()
        if s and s[0] in "+-":
            sign *= -1 if s[0] == "-" else 1
            s = s[1:]
        p = cls(len(s))
        ny = 0
        for q, ch in enumerate(s):
            zb, xb = bits(ch)
            p.z |= zb << q
            p.x |= xb << q
            ny += zb & xb
        # Y = i X Z
        p.r = (ny + (0 if sign == 1 else 2)) % 4
        return p

    def letters(self) -> str:
        return "".join(letter((self.z >> q) & 1, (self.x >> q) & 1) for q in range(self.n))

    @property
    def sign(self) -> int:
        ny = bin(self.x & self.z).count("1")
        e = (self.r - ny) % 4
        if e == 0:
            return 1
        if e == 2:
            return -1
        raise ValueError("Pauli is not Hermitian")

    def __str__(self) -> str:
        return ("+" if self.sign == 1 else "-") + self.letters()

    __repr__ = __str__

    def copy(self) -> "Pauli":
        return Pauli(self.n, self.x, self.z, self.r)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Pauli)
            and (self.n, self.x, self.z, self.r) == (other.n, other.x, other.z, other.r)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.x, self.z, self.r))

    def __mul__(self, other: "Pauli") -> "Pauli":
        # X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}
        flips = bin(self.z & other.x).count("1")
        return Pauli(self.n, self.x ^ other.x, self.z ^ other.z, self.r + other.r + 2 * flips)

    def commutes(self, other: "Pauli") -> bool:
        return (bin(self.x & other.z).count("1") + bin(self.z & other.x).count("1")) % 2 == 0

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def matrix(self) -> np.ndarray:
        m = np.array([[1.0 + 0j]])
        for ch in self.letters():
            m = np.kron(m, PAULI_MATRICES[ch])
        return self.sign * m

    # conjugation P -> U P U^dagger by elementary gates

    def conj_h(self, q: int) -> None:
        xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
        self.r = (self.r + 2 * (xb & zb)) % 4
        self._set(q, zb, xb)

    def conj_s(self, q: int) -> None:
        xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
        self.r = (self.r + xb) % 4
        self._set(q, xb, zb ^ xb)

    def conj_sdg(self, q: int) -> None:
        xb, zb = (self.x >> q) & 1, (self.z >> q) & 1
        self.r = (self.r + 3 * xb) % 4
        self._set(q, xb, zb ^ xb)

    def conj_x(self, q: int) -> None:
        self.r = (self.r + 2 * ((self.z >> q) & 1)) % 4

    def conj_z(self, q: int) -> None:
        self.r = (self.r + 2 * ((self.x >> q) & 1)) % 4

    def conj_cx(self, c: int, t: int) -> None:
        xc, zt = (self.x >> c) & 1, (self.z >> t) & 1
        self.x ^= xc << t
        self.z ^= zt << c

    def conj_cz(self, c: int, t: int) -> None:
        xc, xt = (self.x >> c) & 1, (self.x >> t) & 1
        self.r = (self.r + 2 * (xc & xt)) % 4
        self.z ^= (xt << c) | (xc << t)

    def _set(self, q: int, xb: int, zb: int) -> None:
        self.x = (self.x & ~(1 << q)) | (xb << q)
        self.z = (self.z & ~(1 << q)) | (zb << q)
