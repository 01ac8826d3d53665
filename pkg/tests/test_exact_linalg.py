import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import determinantal_factors
from ncx.errors import NotSolvable, RingError
from ncx.exact_linalg import (FPModule, Matrix, classify_cokernel, image_basis, inverse, is_injective, is_iso,
                              is_surjective, kernel_basis, kron, smith_normal_form, solve, subquotient)
from ncx.rings import ZZ, CyclotomicIntegers, IntegersMod, PrimeField


def small_matrix(max_dim=4, bound=9):
    return st.integers(1, max_dim).flatmap(lambda m: st.integers(1, max_dim).flatmap(
        lambda n: st.lists(st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m)))


@settings(max_examples=80, deadline=None)
@given(small_matrix())
def test_smith_form_is_a_diagonalization(rows):
    A = Matrix.from_ints(ZZ, rows)
    F = smith_normal_form(A)
    assert F.U @ A @ F.V == F.D
    inverse(F.U), inverse(F.V)
    m, n = A.shape
    for i in range(m):
        for j in range(n):
            if i != j:
                assert F.D[i, j] == 0
    diag = F.diagonal
    for a, b in zip(diag, diag[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)


@settings(max_examples=80, deadline=None)
@given(small_matrix())
def test_cokernel_matches_determinantal_divisors(rows):
    A = Matrix.from_ints(ZZ, rows)
    fg = classify_cokernel(A)
    free, factors = determinantal_factors(rows, len(rows), len(rows[0]))
    assert (fg.free_rank, tuple(int(d) for d in fg.invariant_factors)) == (free, factors)


@settings(max_examples=60, deadline=None)
@given(small_matrix(), st.lists(st.integers(-5, 5), min_size=4, max_size=4))
def test_solve_recovers_a_preimage(rows, xs):
    A = Matrix.from_ints(ZZ, rows)
    x = Matrix.column(ZZ, xs[:A.ncols])
    b = A @ x
    y = solve(A, b)
    assert y is not None and A @ y == b


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_kernel_and_image(rows):
    A = Matrix.from_ints(ZZ, rows)
    K = kernel_basis(A)
    assert (A @ K).is_zero()
    assert K.ncols + image_basis(A).ncols == A.ncols


def test_solve_reports_no_solution():
    A = Matrix.from_ints(ZZ, [[2, 0], [0, 4]])
    assert solve(A, Matrix.column(ZZ, [1, 0])) is None
    with pytest.raises(NotSolvable):
        inverse(A)


def test_shape_errors():
    with pytest.raises(RingError):
        Matrix.from_ints(ZZ, [[1, 2], [3]])
    with pytest.raises(RingError):
        FPModule(ZZ, 2, Matrix.from_ints(ZZ, [[1]]))


def test_kron_shape_and_entries():
    A = Matrix.from_ints(ZZ, [[1, 2]])
    B = Matrix.from_ints(ZZ, [[0, 1], [1, 0]])
    assert kron(A, B) == Matrix.from_ints(ZZ, [[0, 1, 0, 2], [1, 0, 2, 0]])


def test_classification_examples():
    assert FPModule.from_factors(ZZ, 1, [4, 6]).classify().render() == "Z^1 + Z/2 + Z/12"
    assert FPModule.from_factors(ZZ, 0, [1]).is_zero()
    assert classify_cokernel(Matrix.from_ints(ZZ, [[2, 4], [6, 8]])).render() == "Z/2 + Z/4"


def test_smith_over_quotient_ring_and_fields():
    R = IntegersMod(12)
    fg = classify_cokernel(Matrix.from_ints(R, [[4, 0], [0, 6]]))
    # Z/4 + Z/6 is Z/2 + Z/12
    assert (fg.free_rank, fg.invariant_factors) == (1, (2,))
    F = PrimeField(7)
    A = Matrix.from_ints(F, [[1, 2], [2, 4]])
    assert classify_cokernel(A).free_rank == 1


def test_smith_over_eisenstein_integers():
    R = CyclotomicIntegers(3)
    two = R.from_int(2)
    A = Matrix(R, [[two, R.zero], [R.zero, R.from_int(4)]])
    F = smith_normal_form(A)
    assert F.U @ A @ F.V == F.D
    assert len(classify_cokernel(A).invariant_factors) == 2


def test_module_maps():
    Z4 = FPModule.from_factors(ZZ, 0, [4])
    Z2 = FPModule.from_factors(ZZ, 0, [2])
    two = Matrix.from_ints(ZZ, [[2]])
    one = Matrix.from_ints(ZZ, [[1]])
    assert is_injective(two, Z2, Z4) and not is_surjective(two, Z2, Z4)
    assert is_surjective(one, Z4, Z2) and not is_injective(one, Z4, Z2)
    assert is_iso(Matrix.from_ints(ZZ, [[3]]), Z4, Z4)


def test_subquotient_classifies():
    num = Matrix.from_ints(ZZ, [[2, 0], [0, 1]])
    den = Matrix.from_ints(ZZ, [[8, 0], [0, 3]])
    assert subquotient(2, num, den).render() == "Z/12"
