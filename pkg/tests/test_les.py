import pytest
from hypothesis import given, settings, strategies as st

from graphconf.chains import verify_chain_map
from graphconf.graph import GraphError, iso_from_maps
from graphconf.les import (
    DeletionInstance,
    Status,
    cone_identification_check,
    les_verify,
    naturality_check,
    ordered_cone_rank_check,
)
from graphconf.oracle import oracle_homology
from graphconf.verify import half_edge_subsets

from conftest import corpus_graph, cycle
from test_graph import graphs


def failures(report):
    return [f"{v.name}: {v.detail}" for v in report.verdicts() if v.status is Status.FAIL]


def test_y_single_half_edge_two_points():
    Y = corpus_graph("y_graph")
    inst = DeletionInstance(Y, "o", ["ox.0"], 2)
    assert inst.maps_valid()
    assert set(inst.sizes) == {"X", "A", "P"}
    r = les_verify(inst)
    assert r.ok and r.exact, failures(r)
    assert str(r.groups["X1"]) == "Z"
    assert r.groups["D1"].rank == 3  # one point on three leaves


@pytest.mark.parametrize("n", [1, 2, 3])
def test_y_every_subset(n):
    Y = corpus_graph("y_graph")
    for H in half_edge_subsets(Y, "o"):
        r = les_verify(DeletionInstance(Y, "o", H, n))
        assert r.ok, failures(r)


def test_k4_two_half_edges_three_points():
    G = corpus_graph("k4")
    v = "a"
    H = G.half_edges_at(v)[:2]
    r = les_verify(DeletionInstance(G, v, H, 3))
    assert r.ok, failures(r)
    assert all(x.status is Status.PASS for x in r.cone)


def test_cycle_and_loop_vertices():
    for G, v in ((cycle(3), "c0"), (corpus_graph("loop_parallel"), "a")):
        for H in half_edge_subsets(G, v):
            r = les_verify(DeletionInstance(G, v, H, 2))
            assert r.ok, failures(r)


def test_x_is_the_configuration_space_of_the_graph():
    G = corpus_graph("theta")
    inst = DeletionInstance(G, "n", G.half_edges_at("n"), 2)
    r = les_verify(inst)
    assert [str(r.groups[f"X{i}"]) for i in range(3)] == [str(h) for h in oracle_homology(G, 2)]


@settings(max_examples=30)
@given(graphs(max_v=3, max_e=4), st.integers(1, 2), st.data())
def test_random_instances_exact(G, n, data):
    verts = [v for v in G.vertices if G.degree(v) > 0]
    if not verts:
        return
    v = data.draw(st.sampled_from(verts))
    at = G.half_edges_at(v)
    H = data.draw(st.lists(st.sampled_from(at), min_size=1, unique=True))
    inst = DeletionInstance(G, v, H, n)
    assert inst.maps_valid() and verify_chain_map(inst.phi)
    assert all(cone_identification_check(inst))
    r = les_verify(inst)
    assert r.ok, failures(r)


def test_instance_errors():
    Y = corpus_graph("y_graph")
    with pytest.raises(GraphError):
        DeletionInstance(Y, "o", ["ox.0"], 0)
    with pytest.raises(GraphError):
        DeletionInstance(Y, "q", ["ox.0"], 1)
    with pytest.raises(GraphError):
        DeletionInstance(Y, "o", [], 1)
    with pytest.raises(GraphError, match="not at vertex"):
        DeletionInstance(Y, "o", ["ox.1"], 1)


def test_ordered_cone_ranks():
    P = corpus_graph("path3")
    end = next(v for v in P.vertices if P.degree(v) == 1)
    assert all(ordered_cone_rank_check(P, end, P.half_edges_at(end), 2))
    Y = corpus_graph("y_graph")
    assert all(ordered_cone_rank_check(Y, "o", ["ox.0", "oy.0"], 2))


def test_ordered_cone_skips_on_overflow():
    res = ordered_cone_rank_check(corpus_graph("k4"), "a", corpus_graph("k4").half_edges_at("a")[:1], 3,
                                  cell_cap=50)
    assert [v.status for v in res] == [Status.SKIPPED]
    assert not res[0] and "resource cap" in res[0].detail


def test_naturality_on_y_transposition():
    Y = corpus_graph("y_graph")
    iso = iso_from_maps(Y, Y, {"o": "o", "x": "y", "y": "x", "z": "z"},
                        {"ox": "oy", "oy": "ox", "oz": "oz"})
    for n in (1, 2):
        res = naturality_check(Y, iso, "o", ["ox.0"], n)
        assert res and all(res)


def test_naturality_on_cycle_rotation():
    C = cycle(3)
    iso = iso_from_maps(C, C, {"c0": "c1", "c1": "c2", "c2": "c0"}, {"s0": "s1", "s1": "s2", "s2": "s0"})
    res = naturality_check(C, iso, "c0", C.half_edges_at("c0")[:1], 2)
    assert all(res)
