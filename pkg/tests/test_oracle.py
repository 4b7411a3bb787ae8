import pytest
from hypothesis import given, settings, strategies as st

from graphconf.graph import betti_and_components, subdivide
from graphconf.oracle import (
    CubeCell,
    InsufficientSubdivision,
    ResourceOverflow,
    build_discrete_conf,
    is_sufficiently_subdivided,
    oracle_homology,
    star_restricted_complex,
)

from conftest import corpus_graph, cycle, path
from test_graph import graphs


def inv(groups):
    return [str(g) for g in groups]


def euler(C):
    return sum((-1) ** d * C.dim(d) for d in C.degrees)


@pytest.mark.parametrize("name", ["k4", "theta", "loop_parallel", "two_cycles"])
def test_one_point_is_the_graph(name):
    G = corpus_graph(name)
    c, b1 = betti_and_components(G)
    H = oracle_homology(G, 1)
    assert [h.invariants() for h in H] == [(c, ()), (b1, ())]


def test_path_two_points_contractible():
    assert inv(oracle_homology(corpus_graph("path3"), 2)) == ["Z", "0", "0"]


def test_y_two_points_is_a_circle():
    S, _ = subdivide(corpus_graph("y_graph"), 3)
    assert is_sufficiently_subdivided(S, 2)
    assert inv(build_discrete_conf(S, 2).homology(d) for d in range(3)) == ["Z", "Z", "0"]


def test_cycle_two_points():
    assert inv(oracle_homology(cycle(4), 2)) == ["Z", "Z", "0"]
    assert inv(oracle_homology(cycle(4), 2, ordered=True)) == ["Z", "Z", "0"]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_ordered_euler_characteristic(n):
    import math
    for G in (cycle(3), corpus_graph("y_graph"), corpus_graph("theta")):
        S, _ = subdivide(G, n + 1)
        assert euler(build_discrete_conf(S, n, ordered=True)) == math.factorial(n) * euler(build_discrete_conf(S, n))


@settings(max_examples=25)
@given(graphs(max_v=4, max_e=4), st.integers(1, 2))
def test_euler_characteristic_matches_homology(G, n):
    C = build_discrete_conf(G, n, auto_subdivide=True)
    H = [C.homology(d) for d in range(n + 1)]
    assert euler(C) == sum((-1) ** d * h.rank for d, h in enumerate(H))


def test_insufficient_subdivision():
    with pytest.raises(InsufficientSubdivision):
        build_discrete_conf(corpus_graph("y_graph"), 2)
    with pytest.raises(InsufficientSubdivision):
        build_discrete_conf(corpus_graph("loop_parallel"), 2)
    assert build_discrete_conf(corpus_graph("k4"), 1).dim(1) == 6


def test_sufficiency_counts_chains():
    assert not is_sufficiently_subdivided(path(2), 2)
    assert is_sufficiently_subdivided(path(3), 2)
    assert is_sufficiently_subdivided(cycle(3), 2)
    assert not is_sufficiently_subdivided(cycle(3), 3)


def test_overflow():
    with pytest.raises(ResourceOverflow):
        oracle_homology(corpus_graph("k4"), 3, cell_cap=100)
    with pytest.raises(ResourceOverflow):
        oracle_homology(cycle(3), 2, ordered=True, cell_cap=30)
    with pytest.raises(ValueError):
        build_discrete_conf(cycle(3), 1, cell_cap=0)


def test_cells_print():
    assert str(CubeCell((("v", "a"), ("e", "bc")))) == "{a, bc}"
    assert str(CubeCell((("e", "bc"), ("v", "a")), True)) == "(bc, a)"
    assert CubeCell((("v", "a"), ("e", "bc"))).dimension == 1


def test_star_restriction_one_point_is_everything():
    G = corpus_graph("theta")
    full = build_discrete_conf(G, 1, auto_subdivide=True)
    star = star_restricted_complex(G, "n", 1)
    assert [h.invariants() for h in map(star.homology, (0, 1))] == [
        h.invariants() for h in map(full.homology, (0, 1))]


def test_star_restriction_y_center():
    C = star_restricted_complex(corpus_graph("y_graph"), "o", 2)
    assert inv(C.homology(d) for d in range(3)) == ["Z", "Z", "0"]


def test_star_restriction_cycle_and_loop():
    C = star_restricted_complex(cycle(3), "c0", 3)
    assert inv(C.homology(d) for d in range(4)) == inv(oracle_homology(cycle(3), 3))
    G = corpus_graph("loop_parallel")
    C = star_restricted_complex(G, "a", 2)
    assert inv(C.homology(d) for d in range(3)) == inv(oracle_homology(G, 2))
