import random

from hypothesis import given
from hypothesis import strategies as st

from zxflow.corpus import random_flowful, random_graph_like
from zxflow.diagram import NodeType, is_graph_like
from zxflow.flow import find_zx_flow, verify_zx_flow
from zxflow.gallery import clifford_unitary3, gallery, two_phase_line, two_phase_line_flow
from zxflow.oracle import equal_up_to_scalar, evaluate
from zxflow.rewrite import apply_sequence
from zxflow.simplify import is_skeleton, make_graph_like, skeleton_info, skeletonize

seeds = st.integers(0, 10**6)


def same_map(a, b):
    return equal_up_to_scalar(evaluate(a, cap=24), evaluate(b, cap=24)) is not None


def test_x_spider_is_recoloured():
    d, f = two_phase_line(), two_phase_line_flow()
    rw = make_graph_like(d, f, check=True)
    assert is_graph_like(rw.d)
    assert all(rw.d.type(n) is NodeType.Z for n in rw.d.spiders())
    assert same_map(d, rw.d) and verify_zx_flow(rw.d, rw.f)[0]


def test_graph_like_input_is_left_alone():
    d, _, _ = random_graph_like(random.Random(5), 6)
    rw = make_graph_like(d, find_zx_flow(d))
    assert rw.steps == [] and rw.d.to_json() == d.to_json()


def test_two_phase_line_skeleton():
    d, f = two_phase_line(), two_phase_line_flow()
    rw, sf = skeletonize(d, f, check=True)
    assert is_skeleton(rw.d) and sf.strong
    assert verify_zx_flow(rw.d, sf)[0] and verify_zx_flow(rw.d, rw.f)[0]
    assert same_map(d, rw.d)


def test_clifford_skeleton_has_no_interior():
    d = clifford_unitary3()
    rw, sf = skeletonize(d, find_zx_flow(d))
    assert skeleton_info(rw.d).excess == [] and verify_zx_flow(rw.d, sf)[0]
    assert same_map(d, rw.d)


def test_gallery_skeletons():
    for name, d in gallery().items():
        rw, sf = skeletonize(d, find_zx_flow(d))
        assert is_skeleton(rw.d), name
        assert verify_zx_flow(rw.d, sf)[0], name


def test_trace_replays_to_the_same_diagram():
    rng = random.Random(11)
    d, f = random_flowful(rng, 12, 3, n_rewrites=3)
    rw, _ = skeletonize(d, f)
    assert apply_sequence(d, rw.steps).diagram.to_json() == rw.d.to_json()


@given(seeds)
def test_skeletonize_properties(seed):
    rng = random.Random(seed)
    d, f = random_flowful(rng, 12, 3, n_rewrites=rng.randint(0, 4))
    rw, sf = skeletonize(d, f)
    assert is_graph_like(rw.d) and is_skeleton(rw.d)
    assert verify_zx_flow(rw.d, sf)[0]
    if len(rw.d.wires) <= 22:  # gadgets can push a skeleton past the dense oracle
        assert same_map(d, rw.d)
    again, _ = skeletonize(rw.d, rw.f)
    assert again.steps == []
