import itertools

from hypothesis import given
from hypothesis import strategies as st

from zxflow import gf2

NV = 6
rows_st = st.lists(st.integers(0, 2**NV - 1), max_size=8)


def dot(a: int, b: int) -> int:
    return bin(a & b).count("1") & 1


def brute_solutions(rows, rhs):
    return [v for v in range(2**NV) if all(dot(r, v) == b for r, b in zip(rows, rhs))]


def test_solve_simple_system():
    # x0 + x1 = 1, x1 = 1  ->  x0 = 0, x1 = 1
    assert gf2.solve([0b11, 0b10], [1, 1], 2) == 0b10


def test_contradiction_is_none():
    assert gf2.solve([0b1, 0b1], [0, 1], 1) is None


def test_no_equations_gives_zero():
    assert gf2.solve([], [], 4) == 0


def test_least_solution_sets_free_variables_to_zero():
    # x0 + x2 = 1 with x0 pivot: the free x2 stays 0
    assert gf2.solve([0b101], [1], 3) == 0b001


@given(rows_st, st.data())
def test_solve_matches_brute_force(rows, data):
    rhs = [data.draw(st.integers(0, 1)) for _ in rows]
    sols = brute_solutions(rows, rhs)
    got = gf2.solve(rows, rhs, NV)
    if not sols:
        assert got is None
    else:
        assert got in sols


@given(rows_st)
def test_nullspace_dimension_and_membership(rows):
    ker = gf2.nullspace(rows, NV)
    assert len(ker) == NV - gf2.rank(rows)
    for v in ker:
        assert all(dot(r, v) == 0 for r in rows)
    span = {0}
    for v in ker:
        span |= {x ^ v for x in span}
    assert span == set(brute_solutions(rows, [0] * len(rows)))


@given(rows_st, st.integers(0, 2**NV - 1))
def test_in_span_matches_enumeration(rows, v):
    span = {0}
    for r in rows:
        span |= {x ^ r for x in span}
    assert gf2.in_span(rows, v) == (v in span)


@given(rows_st)
def test_independent_subset_is_a_basis(rows):
    keep = gf2.independent_subset(rows)
    chosen = [rows[i] for i in keep]
    assert gf2.rank(chosen) == len(chosen) == gf2.rank(rows)


def test_incremental_add_reports_redundancy():
    s = gf2.AffineSystem(3)
    assert s.add(0b011, 1)
    assert s.add(0b110, 0)
    assert not s.add(0b101, 1)
    assert not s.inconsistent
    assert not s.add(0b101, 0)
    assert s.inconsistent


def test_add_order_does_not_change_solution_set():
    eqs = [(0b0111, 1), (0b1010, 0), (0b1101, 1)]
    results = set()
    for perm in itertools.permutations(eqs):
        s = gf2.AffineSystem(4)
        for r, b in perm:
            s.add(r, b)
        results.add(s.solution())
    assert len(results) == 1
