import random
from itertools import permutations

import pytest
import sympy
from hypothesis import given, strategies as st

from graphconf.linalg import (
    FGAbGroup,
    IntMatrix,
    direct_sum_invariants,
    group_from_presentation,
    invariant_factors,
    kernel_basis,
    matrix_rank,
    snf,
    solve_integer,
)
from graphconf.verify import bareiss_rank, snf_properties


@st.composite
def int_matrices(draw, max_dim=8, bound=9):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m))
    return IntMatrix.from_dense(rows, n)


def sympy_invariants(A: IntMatrix) -> list[int]:
    from sympy.matrices.normalforms import smith_normal_form

    D = smith_normal_form(sympy.Matrix(A.to_dense()), domain=sympy.ZZ)
    return [abs(int(D[i, i])) for i in range(min(D.shape)) if D[i, i]]


def test_storage_has_no_zeros():
    A = IntMatrix.from_dense([[0, 1], [0, 0], [2, 0]])
    assert A.nnz == 2
    assert (A - A).nnz == 0
    assert A.T.shape == (2, 3)


def test_big_integers_stay_exact():
    big = 10**40 + 7
    A = IntMatrix.from_dense([[big, 0], [0, big * big]])
    assert invariant_factors(A) == [big, big * big]


def test_snf_zero_matrix():
    r = snf(IntMatrix.zeros(2, 3))
    assert r.D.is_zero()
    assert r.U == IntMatrix.identity(2) and r.V == IntMatrix.identity(3)


def test_snf_identity():
    assert snf(IntMatrix.identity(3)).D == IntMatrix.identity(3)


def test_snf_two_by_two():
    A = IntMatrix.from_dense([[2, 4], [6, 8]])
    r = snf(A)
    assert r.U @ A @ r.V == r.D
    assert r.diagonal == [2, 4]
    # d1 = gcd of entries, d1*d2 = |det|
    assert r.diagonal[0] == 2 and r.diagonal[0] * r.diagonal[1] == abs(2 * 8 - 4 * 6)


def test_snf_is_deterministic():
    A = IntMatrix.from_dense([[3, 6, 1], [2, 4, 5], [0, 7, 7]])
    a, b = snf(A), snf(A)
    assert a.U == b.U and a.V == b.V and a.D == b.D


@given(int_matrices())
def test_snf_properties(A):
    assert snf_properties(A) == []


@given(int_matrices(max_dim=6, bound=5))
def test_invariant_factors_match_sympy(A):
    assert invariant_factors(A) == sympy_invariants(A)


@given(int_matrices())
def test_rank_matches_fraction_free_elimination(A):
    assert matrix_rank(A) == bareiss_rank(A.to_dense())


def test_bareiss_rank_small_cases():
    assert bareiss_rank([[1, 2], [2, 4]]) == 1
    assert bareiss_rank([[0, 0], [0, 0]]) == 0
    assert bareiss_rank([[2, 1], [1, 2], [3, 3]]) == 2


def test_solve_identity():
    assert solve_integer(IntMatrix.identity(3), [4, -1, 7]) == [4, -1, 7]


def test_solve_parity_obstruction():
    assert solve_integer(IntMatrix.from_dense([[2]]), [3]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_integer(IntMatrix.identity(2), [1, 2, 3])


def test_solve_round_trip_random():
    rng = random.Random(3)
    for _ in range(50):
        A = IntMatrix.from_dense([[rng.randint(-5, 5) for _ in range(6)] for _ in range(4)])
        x0 = [rng.randint(-5, 5) for _ in range(6)]
        b = A.apply(x0)
        x = solve_integer(A, b)
        assert x is not None and A.apply(x) == b


@given(int_matrices(max_dim=6), st.lists(st.integers(-9, 9), min_size=6, max_size=6))
def test_solve_round_trip(A, x0):
    x0 = x0[: A.cols] + [0] * max(0, A.cols - 6)
    b = A.apply(x0)
    x = solve_integer(A, b)
    assert x is not None and A.apply(x) == b


def test_kernel_of_identity_is_empty():
    assert kernel_basis(IntMatrix.identity(4)).cols == 0


def test_kernel_of_zero_is_everything():
    K = kernel_basis(IntMatrix.zeros(2, 3))
    assert K.cols == 3 and invariant_factors(K) == [1, 1, 1]


def test_kernel_of_difference():
    A = IntMatrix.from_dense([[1, -1]])
    K = kernel_basis(A)
    assert K.cols == 1
    assert {tuple(r) for r in K.T.to_dense()} <= {(1, 1), (-1, -1)}


@given(int_matrices())
def test_kernel_is_saturated(A):
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.cols == A.cols - matrix_rank(A)
    if K.cols:
        assert invariant_factors(K) == [1] * K.cols


def test_presentation_examples():
    assert group_from_presentation(IntMatrix.zeros(3, 0)).invariants() == (3, ())
    assert group_from_presentation(IntMatrix.from_dense([[2]])).invariants() == (0, (2,))
    R = IntMatrix.from_dense([[2, 0, 0], [0, 0, 0]])
    assert group_from_presentation(R).invariants() == (1, (2,))


def test_presentation_coordinates():
    G = group_from_presentation(IntMatrix.from_dense([[2, 0], [0, 3]]))
    assert G.invariants() == (0, (6,))
    # e1 has order 2 and e2 order 3 in Z/6
    x = G.coordinates([1, 0])[0]
    y = G.coordinates([0, 1])[0]
    assert (2 * x) % 6 == 0 and x % 6
    assert (3 * y) % 6 == 0 and y % 6


@given(int_matrices(max_dim=5), st.integers(0, 3), st.randoms(use_true_random=False))
def test_presentation_invariant_under_column_moves(R, zeros, rnd):
    base = group_from_presentation(R).invariants()
    cols = list(range(R.cols))
    rnd.shuffle(cols)
    shuffled = R.submatrix(list(range(R.rows)), cols)
    padded = R.hstack(IntMatrix.zeros(R.rows, zeros))
    assert group_from_presentation(shuffled).invariants() == base
    assert group_from_presentation(padded).invariants() == base


def test_group_formatting():
    assert str(FGAbGroup.zero()) == "0"
    assert str(FGAbGroup.from_invariants(1, [])) == "Z"
    assert str(FGAbGroup.from_invariants(3, [2, 4])) == "Z^3 + Z/2 + Z/4"


def test_torsion_must_divide():
    with pytest.raises(ValueError):
        FGAbGroup(0, (2, 3), ((1,), (1,)), 1)
    with pytest.raises(ValueError):
        FGAbGroup(0, (1,), ((1,),), 1)


def test_direct_sum_normalizes_torsion():
    a = FGAbGroup.from_invariants(1, [2])
    b = FGAbGroup.from_invariants(0, [3])
    assert direct_sum_invariants([a, b]) == (1, (6,))


def test_all_permutation_pivots_agree():
    A = [[4, 6], [6, 9], [2, 3]]
    for perm in permutations(range(3)):
        assert invariant_factors(IntMatrix.from_dense([A[i] for i in perm])) == [1]
