import pytest
from hypothesis import given, strategies as st

from graphconf.chains import (
    ChainComplex,
    ChainMap,
    GroupMap,
    InvariantViolation,
    check_exact,
    cone_inclusion,
    cone_projection,
    homology,
    induced_map,
    mapping_cone,
    morse_reduce,
    verify_chain_map,
)
from graphconf.linalg import FGAbGroup, IntMatrix, kernel_basis
from graphconf.swiatkowski import build_sw_complex

from conftest import corpus_graph


def two_term(k: int) -> ChainComplex:
    """Z --k--> Z in degrees 1 -> 0."""
    return ChainComplex({0: ["a"], 1: ["b"]}, {1: IntMatrix.from_dense([[k]])})


def circle(k: int) -> ChainComplex:
    verts = [f"v{i}" for i in range(k)]
    edges = [f"e{i}" for i in range(k)]
    return ChainComplex.from_function({0: verts, 1: edges},
                                      lambda x: {f"v{(int(x[1:]) + 1) % k}": 1, f"v{x[1:]}": -1} if x[0] == "e" else {})


def projective_plane() -> ChainComplex:
    # one cell in each dimension: d2 = 2, d1 = 0
    return ChainComplex({0: ["p"], 1: ["a"], 2: ["D"]}, {1: IntMatrix.zeros(1, 1), 2: IntMatrix.from_dense([[2]])})


def invariants(C, degs=None):
    degs = range(-1, 4) if degs is None else degs
    return [C.homology(d).invariants() for d in degs]


@st.composite
def complexes(draw):
    """Random three-term complexes C2 -> C1 -> C0 with d1 d2 = 0."""
    p, q, s = (draw(st.integers(0, 5)) for _ in range(3))
    q = max(q, 1)
    Y = IntMatrix.from_dense([[draw(st.integers(-3, 3)) for _ in range(q)] for _ in range(p)], q)
    K = kernel_basis(Y)
    Z = IntMatrix.from_dense([[draw(st.integers(-3, 3)) for _ in range(s)] for _ in range(K.cols)], s)
    basis = {0: [f"x{i}" for i in range(p)], 1: [f"y{i}" for i in range(q)], 2: [f"z{i}" for i in range(s)]}
    return ChainComplex(basis, {1: Y, 2: K @ Z})


def test_dd_zero_enforced():
    with pytest.raises(ValueError):
        ChainComplex({0: ["a"], 1: ["b"], 2: ["c"]},
                     {1: IntMatrix.from_dense([[1]]), 2: IntMatrix.from_dense([[1]])})


def test_shape_checked():
    with pytest.raises(ValueError):
        ChainComplex({0: ["a"], 1: ["b"]}, {1: IntMatrix.zeros(2, 1)})


def test_zero_boundaries_give_free_homology():
    C = ChainComplex({0: list("ab"), 1: list("cde")}, {})
    assert invariants(C, [0, 1]) == [(2, ()), (3, ())]


def test_multiplication_by_two():
    assert invariants(two_term(2), [0, 1]) == [(0, (2,)), (0, ())]


@pytest.mark.parametrize("k", [3, 4, 7])
def test_circle(k):
    assert invariants(circle(k), [0, 1]) == [(1, ()), (1, ())]


def test_projective_plane_torsion():
    assert invariants(projective_plane(), [0, 1, 2]) == [(1, ()), (0, (2,)), (0, ())]


def test_out_of_range_degree_is_zero():
    assert circle(3).homology(7).is_trivial()
    assert circle(3).homology(-2).is_trivial()


def test_generators_are_cycles():
    C = build_sw_complex(corpus_graph("theta"), 2)
    H = C.homology(1)
    for g in H.generators:
        assert C.boundary(1).apply(list(g)) == [0] * C.dim(0)
    for i, g in enumerate(H.generators):
        assert H.coordinates(list(g)) == [int(i == j) for j in range(H.ngens)]


def test_coordinates_reject_non_cycles():
    C = circle(3)
    H = C.homology(1)
    with pytest.raises(InvariantViolation):
        H.coordinates([1, 0, 0])


@given(complexes())
def test_reduction_preserves_homology(C):
    direct = [homology(C, d, reduce=False).invariants() for d in range(3)]
    assert [C.homology(d).invariants() for d in range(3)] == direct
    R, f, g = morse_reduce(C)
    assert [R.homology(d).invariants() for d in range(3)] == direct
    assert verify_chain_map(f) and verify_chain_map(g)
    for d in range(3):
        assert (induced_map(f, d) @ induced_map(g, d)).matrix == IntMatrix.identity(R.homology(d).ngens) \
            or R.homology(d).torsion


@given(complexes())
def test_euler_characteristic(C):
    chi = sum((-1) ** d * C.homology(d).rank for d in range(3))
    assert chi == C.euler_characteristic()


def test_morse_acyclic_two_term():
    R, _, _ = morse_reduce(two_term(-1))
    assert R.size() == 0


def test_morse_leaves_zero_boundaries():
    C = ChainComplex({0: list("ab"), 1: list("cd")}, {})
    R, _, _ = morse_reduce(C)
    assert R.size() == C.size()


def test_morse_on_k4():
    C = build_sw_complex(corpus_graph("k4"), 2)
    R, _, _ = morse_reduce(C)
    assert R.size() < C.size()
    for d in range(3):
        assert R.homology(d).invariants() == homology(C, d, reduce=False).invariants()


def test_cone_of_identity_is_acyclic():
    for C in (circle(4), projective_plane(), build_sw_complex(corpus_graph("y_graph"), 2)):
        K = mapping_cone(ChainMap.identity(C))
        assert all(K.homology(d).is_trivial() for d in range(-1, 5))


def test_cone_of_zero_splits():
    A, B = projective_plane(), circle(3)
    K = mapping_cone(ChainMap.zero(A, B))
    for d in range(5):
        want = (B.homology(d).rank + A.homology(d - 1).rank, B.homology(d).torsion + A.homology(d - 1).torsion)
        assert K.homology(d).invariants() == want


def test_cone_needs_degree_zero_map():
    C = circle(3)
    with pytest.raises(ValueError):
        mapping_cone(ChainMap.zero(C, C, shift=1))


def test_cone_maps_are_chain_maps():
    f = ChainMap.identity(circle(5))
    K = mapping_cone(f)
    assert verify_chain_map(cone_inclusion(f, K))
    assert verify_chain_map(cone_projection(f, K))


def test_induced_identity_and_zero():
    C = build_sw_complex(corpus_graph("theta"), 2)
    for d in range(3):
        H = C.homology(d)
        assert induced_map(ChainMap.identity(C), d).matrix == IntMatrix.identity(H.ngens)
        assert induced_map(ChainMap.zero(C, C), d).is_zero()


def test_induced_respects_composition():
    C = circle(4)
    rot = ChainMap.from_function(C, C, lambda x: {f"{x[0]}{(int(x[1:]) + 1) % 4}": 1})
    flip = ChainMap.from_function(C, C, lambda x: {f"v{(-int(x[1:])) % 4}": 1} if x[0] == "v"
                                  else {f"e{(-int(x[1:]) - 1) % 4}": -1})
    assert verify_chain_map(rot) and verify_chain_map(flip)
    for d in (0, 1):
        assert induced_map(flip @ rot, d) == induced_map(flip, d) @ induced_map(rot, d)
    assert induced_map(flip, 1).matrix.to_dense() == [[-1]]


def test_perturbed_map_is_not_chain_map():
    C = circle(3)
    f = ChainMap.identity(C)
    bumped = f.with_matrix(1, f.matrix(1) + IntMatrix.from_dense([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))
    assert verify_chain_map(f)
    assert not verify_chain_map(bumped)


def test_induced_map_of_non_chain_map_fails():
    C = circle(3)
    bad = ChainMap.identity(C).with_matrix(1, IntMatrix.from_dense([[1, 0, 0], [0, 0, 0], [0, 0, 0]]))
    with pytest.raises(InvariantViolation):
        induced_map(bad, 1)


def test_exactness_identity():
    A = FGAbGroup.from_invariants(2, [3])
    zero = FGAbGroup.zero()
    into = GroupMap(zero, A, IntMatrix.zeros(3, 0))
    ident = GroupMap(A, A, IntMatrix.identity(3))
    out = GroupMap(A, zero, IntMatrix.zeros(0, 3))
    assert check_exact(into, ident).exact
    assert check_exact(ident, out).exact


def test_exactness_times_two():
    Z = FGAbGroup.from_invariants(1, [])
    Z2 = FGAbGroup.from_invariants(0, [2])
    zero = FGAbGroup.zero()
    two = GroupMap(Z, Z, IntMatrix.from_dense([[2]]))
    proj = GroupMap(Z, Z2, IntMatrix.from_dense([[1]]))
    assert check_exact(GroupMap(zero, Z, IntMatrix.zeros(1, 0)), two).exact
    assert check_exact(two, proj).exact
    assert check_exact(proj, GroupMap(Z2, zero, IntMatrix.zeros(0, 1))).exact


def test_exactness_failure_has_witness():
    Z = FGAbGroup.from_invariants(1, [])
    zero = FGAbGroup.zero()
    r = check_exact(GroupMap(zero, Z, IntMatrix.zeros(1, 0)), GroupMap(Z, zero, IntMatrix.zeros(0, 1)))
    assert not r.exact and r.composite_zero and r.witness == [1]
    ident = GroupMap(Z, Z, IntMatrix.identity(1))
    r = check_exact(ident, ident)
    assert not r.composite_zero and r.witness == [1]


def test_exactness_torsion_subtlety():
    # Z --2--> Z --> Z/4 (x -> x) is not exact: im = 2Z, ker = 4Z
    Z = FGAbGroup.from_invariants(1, [])
    Z4 = FGAbGroup.from_invariants(0, [4])
    r = check_exact(GroupMap(Z, Z, IntMatrix.from_dense([[2]])), GroupMap(Z, Z4, IntMatrix.from_dense([[1]])))
    assert not r.composite_zero


def test_exactness_mismatched_groups():
    Z = FGAbGroup.from_invariants(1, [])
    Z2 = FGAbGroup.from_invariants(2, [])
    with pytest.raises(ValueError):
        check_exact(GroupMap(Z, Z, IntMatrix.identity(1)), GroupMap(Z2, Z, IntMatrix.zeros(1, 2)))


def test_group_map_rejects_ill_defined_torsion():
    Z2 = FGAbGroup.from_invariants(0, [2])
    Z = FGAbGroup.from_invariants(1, [])
    with pytest.raises(ValueError):
        GroupMap(Z2, Z, IntMatrix.from_dense([[1]]))


def test_group_map_inverse():
    Z2 = FGAbGroup.from_invariants(2, [])
    m = GroupMap(Z2, Z2, IntMatrix.from_dense([[2, 1], [1, 1]]))
    assert m.is_iso()
    assert (m @ m.inverse()).matrix == IntMatrix.identity(2)
    assert not GroupMap(Z2, Z2, IntMatrix.from_dense([[2, 0], [0, 1]])).is_surjective()
