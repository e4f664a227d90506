import json
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import oracle_tensor, oracle_value
from zhcount.cyclo import CycloNumber
from zhcount.diagram import (
    DiagramBuilder,
    Node,
    Tensor,
    ZhDiagram,
    ZwDiagram,
    contract,
    contract_int,
    diagram_from_json,
    diagram_to_json,
    load_diagram,
    node_tensor,
)
from zhcount.errors import BoundExceededError, FormatError, PreconditionError
from zhcount.instances import random_zh


def ints(t: Tensor) -> list:
    return t.to_ints().tolist()


def test_h0_matrix():
    assert ints(node_tensor("H", 2, label=0)) == [[1, 1], [1, 0]]


def test_x_pi_is_not():
    assert ints(node_tensor("X", 2, phase=1, ring_k=0)) == [[0, 1], [1, 0]]


def test_z_pi_scalar_is_zero():
    assert node_tensor("Z", 0, phase=1)[()].is_zero()


def test_w_tensor():
    t = node_tensor("W", 3)
    assert [int(t[b]) for b in np.ndindex(2, 2, 2)] == [0, 1, 1, 0, 1, 0, 0, 0]


def test_default_h_label():
    assert int(node_tensor("H", 1)[(1,)]) == -1


def test_node_tensor_bound():
    with pytest.raises(BoundExceededError):
        node_tensor("Z", 30)


def test_single_box_diagram():
    b = DiagramBuilder()
    h = b.h(0)
    b.boundary = [h, h]
    assert ints(contract(b.freeze())) == [[1, 1], [1, 0]]


def test_two_boxes_chained():
    b = DiagramBuilder()
    h1, h2 = b.h(0), b.h(0)
    b.connect(h1, h2)
    b.boundary = [h1, h2]
    assert ints(contract(b.freeze())) == [[2, 1], [1, 1]]


def test_empty_diagram_is_one():
    assert contract(ZhDiagram(0, [], [])) == 1


def test_self_loop_on_h_box():
    b = DiagramBuilder()
    h = b.h(0)
    b.connect(h, h)
    # diagonal of [[1,1],[1,0]]
    assert contract(b.freeze()) == 1


def test_boundary_leg_order_is_preserved():
    b = DiagramBuilder()
    x = b.x(1)
    z = b.z()
    b.connect(x, z)
    b.boundary = [z, x]
    d = b.freeze()
    got = contract(d)
    want = oracle_tensor(d)
    assert [got[bits] for bits in np.ndindex(2, 2)] == want


def test_invariants():
    with pytest.raises(PreconditionError):
        ZhDiagram(0, [Node(0, "Z")], [(0, 1)])
    with pytest.raises(PreconditionError):
        ZhDiagram(0, [Node(0, "W")], [])
    with pytest.raises(PreconditionError):
        ZhDiagram(0, [Node(0, "Z"), Node(0, "X")], [])
    with pytest.raises(PreconditionError):
        ZwDiagram(2, [Node(0, "Z", 1)], [])


def test_phase_canonical_and_arity():
    d = ZhDiagram(1, [Node(0, "Z", 9), Node(1, "H")], [(0, 1), (1, 0)], [0])
    assert d.node(0).phase == 1
    assert d.arity(0) == 3
    assert d.node(1).label == -1


def test_with_ring():
    b = DiagramBuilder(2)
    b.z(2)
    d = b.freeze()
    assert d.with_ring(1).node(0).phase == 1
    assert d.with_ring(3).node(0).phase == 4
    b = DiagramBuilder(2)
    b.z(1)
    with pytest.raises(PreconditionError):
        b.freeze().with_ring(1)


def test_json_round_trip():
    d = random_zh(3, 2, 6)
    assert diagram_from_json(json.loads(json.dumps(diagram_to_json(d)))) == d


@pytest.mark.parametrize(
    "obj",
    [
        [],
        {"ring_k": 0, "nodes": []},
        {"ring_k": -1, "nodes": [], "edges": []},
        {"ring_k": 0, "nodes": [], "edges": [], "extra": 1},
        {"ring_k": 0, "nodes": [{"id": 0, "kind": "Q"}], "edges": []},
        {"ring_k": 0, "nodes": [{"id": 0, "kind": "Z", "label": {"coeffs": [1]}}], "edges": []},
        {"ring_k": 1, "nodes": [{"id": 0, "kind": "H", "label": {"coeffs": [1]}}], "edges": []},
        {"ring_k": 0, "nodes": [{"id": 0, "kind": "Z"}], "edges": [[0, 5]]},
    ],
)
def test_json_rejects(obj):
    with pytest.raises(FormatError):
        diagram_from_json(obj)


def test_load_bad_json():
    with pytest.raises(FormatError):
        load_diagram("{not json")


def test_contract_int_mod():
    b = DiagramBuilder(0, "ZW")
    ws = [b.w() for _ in range(4)]
    for i in range(4):
        for j in range(i + 1, 4):
            b.connect(ws[i], ws[j])
    d = b.freeze()
    assert contract_int(d) == 3
    assert contract_int(d, 2) == 1


def test_contract_int_rejects_phases():
    b = DiagramBuilder(2)
    b.z(1)
    with pytest.raises(PreconditionError):
        contract_int(b.freeze())


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_scalar_contraction_matches_oracle(seed, k):
    d = random_zh(seed, k, 5, extra_edges=2)
    if len(d.edges) > 12:
        return
    assert contract(d) == oracle_value(d)


@given(st.integers(0, 10**6), st.integers(0, 2))
def test_open_contraction_matches_oracle(seed, k):
    d = random_zh(seed, k, 4, extra_edges=1)
    rng = random.Random(seed)
    ids = [n.id for n in d.nodes]
    bd = [rng.choice(ids) for _ in range(rng.randint(1, 3))]
    d = ZhDiagram(d.ring_k, d.nodes, d.edges, bd)
    if len(d.edges) > 10:
        return
    t = contract(d)
    assert [t[bits] for bits in np.ndindex(*(2,) * len(bd))] == oracle_tensor(d)


@given(st.integers(0, 10**6))
def test_order_independence(seed):
    d = random_zh(seed, 2, 7)
    a = contract(d)
    assert contract(d, order="sequential") == a
    idx = list(range(len(d.nodes) + len(d.edges)))
    rng = random.Random(seed)
    rng.shuffle(idx)
    assert contract(d, order=idx) == a
    assert contract(d, order=idx[: len(idx) // 2]) == a


def test_label_ring_is_lifted():
    # ring order 0 diagram whose label needs ring order 2
    w = CycloNumber.root_of_unity(1, 2)
    d = ZhDiagram(0, [Node(0, "H", 0, w), Node(1, "Z")], [(0, 1)])
    assert contract(d) == 1 + w
