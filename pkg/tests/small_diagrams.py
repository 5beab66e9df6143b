"""Enumeration of every small diagram shape used by the exhaustive sweeps."""

import itertools
from fractions import Fraction as F

from zxflow.diagram import Diagram

PHASES = [F(0), F(1, 2), F(1), F(3, 2), F(1, 4)]


def single_spiders():
    for t in "ZX":
        for ph in PHASES:
            for nin, nout in [(0, 1), (1, 1), (1, 2), (2, 1), (0, 3), (2, 2), (1, 3), (3, 3)]:
                d = Diagram()
                n = d.add_node(t, ph)
                for _ in range(nin):
                    d.add_wire(d.new_input(), n)
                for _ in range(nout):
                    d.add_wire(n, d.new_output())
                yield d


def pairs():
    """Two spiders joined by a plain wire, an H-edge, or both."""
    for t1, t2 in itertools.product("ZX", repeat=2):
        for p1, p2 in [(F(1, 4), F(1, 2)), (F(1), F(3, 2)), (F(0), F(1, 4)), (F(1, 2), F(1))]:
            for plain, had in [(1, 0), (0, 1), (1, 1), (2, 0)]:
                d = Diagram()
                a, b = d.add_node(t1, p1), d.add_node(t2, p2)
                d.add_wire(d.new_input(), a)
                d.add_wire(b, d.new_output())
                for _ in range(plain):
                    d.add_wire(a, b)
                for _ in range(had):
                    h = d.add_h()
                    d.add_wire(a, h)
                    d.add_wire(h, b)
                if len(d.wires) <= 6:
                    yield d


def chains():
    """Three spiders in a line plus an H node: four nodes, at most six wires."""
    for ts in ["ZXZ", "ZZX", "XZX"]:
        for ph in [(F(1, 4), F(1, 2), F(0)), (F(1), F(1, 4), F(3, 2))]:
            d = Diagram()
            a, b, c = (d.add_node(t, p) for t, p in zip(ts, ph))
            h = d.add_h()
            d.add_wire(d.new_input(), a)
            d.add_wire(a, b)
            d.add_wire(b, h)
            d.add_wire(h, c)
            d.add_wire(c, d.new_output())
            d.add_wire(a, c)
            yield d


def loops():
    d = Diagram()
    a = d.add_z(F(1, 2))
    d.add_wire(d.new_input(), a)
    d.add_wire(a, a)
    d.add_wire(a, d.new_output())
    yield d
    d = Diagram()
    a, h = d.add_z(F(1, 4)), d.add_h()
    d.add_wire(d.new_input(), a)
    d.add_wire(a, h)
    d.add_wire(h, a)
    d.add_wire(a, d.new_output())
    yield d
    d = Diagram()
    d.add_wire(d.new_input(), d.new_output())
    yield d


def all_small():
    yield from single_spiders()
    yield from pairs()
    yield from chains()
    yield from loops()
