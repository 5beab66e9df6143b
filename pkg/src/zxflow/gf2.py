"""Bit-packed linear algebra over GF(2).

Rows are Python ints used as bitsets (bit ``j`` = coefficient of variable
``j``).  Pivoting always takes the lowest-index variable, so results are
deterministic for a fixed variable numbering.
"""

from __future__ import annotations

from typing import Optional, Sequence

__all__ = ["AffineSystem", "rank", "nullspace", "solve", "in_span", "independent_subset"]


class AffineSystem:
    """Incremental row-reduced system ``row . v = rhs``.

    Each stored row has a pivot (its lowest set bit) that appears in no other
    stored row.  ``inconsistent`` becomes True once ``0 = 1`` is derived.
    """

    def __init__(self, nvars: int):
        self.nvars = nvars
        self.rows: dict[int, tuple[int, int]] = {}  # pivot -> (row, rhs)
        self.inconsistent = False

    def add(self, row: int, rhs: int = 0) -> bool:
        """Add an equation; returns False if it was redundant or contradictory."""
        rhs &= 1
        for p, (r, b) in self.rows.items():
            if (row >> p) & 1:
                row ^= r
                rhs ^= b
        if not row:
            if rhs:
                self.inconsistent = True
            return False
        p = (row & -row).bit_length() - 1
        bit = 1 << p
        for q, (r, b) in list(self.rows.items()):
            if r & bit:
                self.rows[q] = (r ^ row, b ^ rhs)
        self.rows[p] = (row, rhs)
        return True

    @property
    def rank(self) -> int:
        return len(self.rows)

    def solution(self) -> Optional[int]:
        """Solution with every free variable set to 0, or None."""
        if self.inconsistent:
            return None
        v = 0
        for p, (_, b) in self.rows.items():
            if b:
                v |= 1 << p
        return v

    def kernel(self) -> list[int]:
        """Basis of the homogeneous solution space, one vector per free variable."""
        out = []
        for f in range(self.nvars):
            if f in self.rows:
                continue
            v = 1 << f
            for p, (r, _) in self.rows.items():
                if (r >> f) & 1:
                    v |= 1 << p
            out.append(v)
        return out


def rank(rows: Sequence[int]) -> int:
    nv = max((r.bit_length() for r in rows), default=0)
    s = AffineSystem(nv)
    for r in rows:
        s.add(r)
    return s.rank


def nullspace(rows: Sequence[int], nvars: int) -> list[int]:
    s = AffineSystem(nvars)
    for r in rows:
        s.add(r)
    return s.kernel()


def solve(rows: Sequence[int], rhs: Sequence[int], nvars: int) -> Optional[int]:
    s = AffineSystem(nvars)
    for r, b in zip(rows, rhs):
        s.add(r, b)
    return s.solution()


def in_span(vectors: Sequence[int], v: int) -> bool:
    basis: dict[int, int] = {}
    for x in vectors:
        _insert(basis, x)
    return _reduce(basis, v) == 0


def independent_subset(vectors: Sequence[int]) -> list[int]:
    """Indices of a maximal independent prefix-greedy subset."""
    basis: dict[int, int] = {}
    keep = []
    for i, x in enumerate(vectors):
        if _insert(basis, x):
            keep.append(i)
    return keep


def _reduce(basis: dict[int, int], v: int) -> int:
    while v:
        p = v.bit_length() - 1
        if p not in basis:
            return v
        v ^= basis[p]
    return 0


def _insert(basis: dict[int, int], v: int) -> bool:
    v = _reduce(basis, v)
    if not v:
        return False
    basis[v.bit_length() - 1] = v
    return True
