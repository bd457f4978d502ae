import random
from fractions import Fraction

import pytest

from otb.exact import (BinaryForm, MPoly, RatMatrix, binary_gcd, kernel_basis,
                       modp_matrix, modp_rank, monomials_of_degree, mpoly_det,
                       primitive_vector, rank, rref, seeded_rng, solve,
                       vanishing_order, SparseReducer, draw_generic,
                       GenericityError)


def test_rank_identity():
    assert rank(RatMatrix.identity(3)) == 3


def test_rank_proportional_rows():
    assert rank(RatMatrix([[1, 2], [2, 4]])) == 1


def test_rank_transpose_random():
    rng = random.Random(11)
    for _ in range(40):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        m = RatMatrix([[Fraction(rng.randint(-6, 6), rng.randint(1, 3))
                        for _ in range(nc)] for _ in range(nr)])
        assert rank(m) == rank(m.transpose())


def test_rank_kernel_dimension_sum():
    rng = random.Random(12)
    for _ in range(40):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        m = RatMatrix([[rng.randint(-5, 5) for _ in range(nc)]
                       for _ in range(nr)])
        assert rank(m) + kernel_basis(m).ncols == nc


def test_bareiss_matches_rref_on_structured_low_rank():
    # regression: the fraction-free update must rescale rows even when the
    # eliminated entry happens to be zero
    m = [[6, 2, -4, 3], [-4, -4, 2, -1], [0, -12, -6, 4], [2, 2, 8, 2]]
    assert rank(RatMatrix(m)) == len(rref(m)[0]) == 3
    rng = random.Random(13)
    for _ in range(150):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        r = rng.randint(0, min(nr, nc))
        a = [[rng.randint(-3, 3) for _ in range(r)] for _ in range(nr)]
        b = [[rng.randint(-3, 3) for _ in range(nc)] for _ in range(r)]
        m = [[sum(a[i][k] * b[k][j] for k in range(r)) for j in range(nc)]
             for i in range(nr)]
        assert rank(RatMatrix(m)) == len(rref(m)[0])


def test_modp_rank_agrees_with_exact():
    rng = random.Random(14)
    for p in (32003, 31013):
        for _ in range(40):
            nr, nc = rng.randint(1, 7), rng.randint(1, 7)
            rows = [[Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                     for _ in range(nc)] for _ in range(nr)]
            exact = rank(RatMatrix(rows))
            assert modp_rank(modp_matrix(rows, p), p) == exact


def test_kernel_identity_empty():
    assert kernel_basis(RatMatrix.identity(2)).ncols == 0


def test_kernel_one_one():
    k = kernel_basis(RatMatrix([[1, 1]]))
    assert k.ncols == 1
    v = primitive_vector([k.rows[0][0], k.rows[1][0]])
    assert v == (1, -1)


def test_kernel_of_dependency_matrix():
    # forms x1, x2, x3, x1+x2+x3 as columns
    m = RatMatrix([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1]])
    k = kernel_basis(m)
    assert k.ncols == 1
    v = primitive_vector([k.rows[i][0] for i in range(4)])
    assert v == (1, 1, 1, -1)


def test_solve_consistent_and_inconsistent():
    m = RatMatrix([[1, 2], [2, 4]])
    assert solve(m, [1, 2]) is not None
    assert solve(m, [1, 3]) is None


def test_primitive_vector():
    assert primitive_vector([Fraction(-2, 3), Fraction(4, 3)]) == (1, -2)
    assert primitive_vector([0, 6, -9]) == (0, 2, -3)
    with pytest.raises(ValueError):
        primitive_vector([0, 0])


# -- binary forms


def test_binary_gcd_lambda_power():
    g = binary_gcd([BinaryForm([1, 0, 0]), BinaryForm([0, 1, 0])])
    assert g.coeffs == [1, 0]  # lambda


def test_binary_gcd_common_root():
    g = binary_gcd([BinaryForm([1, 0, -1]), BinaryForm([1, -1])])
    assert g.coeffs == [1, -1]  # lambda - mu


def test_binary_gcd_coprime():
    g = binary_gcd([BinaryForm([1, 0]), BinaryForm([0, 1])])
    assert g.degree == 0


def test_binary_gcd_mu_power():
    # mu^2 and mu*(lambda - mu): the shared root at infinity survives
    g = binary_gcd([BinaryForm([0, 0, 1]), BinaryForm([0, 1, -1])])
    assert g.degree == 1 and g.coeffs == [0, 1]


def test_binary_gcd_zero_pencil():
    with pytest.raises(ValueError, match="zero pencil"):
        binary_gcd([BinaryForm([0, 0]), BinaryForm([0])])


# -- polynomials


def test_mpoly_ring_distributivity_random():
    rng = random.Random(15)

    def rand_poly():
        p = MPoly.zero(3)
        for _ in range(rng.randint(0, 5)):
            e = tuple(rng.randint(0, 2) for _ in range(3))
            p = p + MPoly.monomial(3, e, Fraction(rng.randint(-4, 4)))
        return p

    for _ in range(40):
        a, b, c = rand_poly(), rand_poly(), rand_poly()
        assert (a + b) * c == a * c + b * c
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)


def test_mpoly_compose_and_derivative():
    # f = x^2 y, substitute x -> u+v, y -> u
    f = MPoly.monomial(3, (2, 1, 0))
    u = MPoly.variable(2, 0)
    v = MPoly.variable(2, 1)
    g = f.compose([u + v, u, MPoly.zero(2)])
    assert g == (u + v) * (u + v) * u
    assert f.derivative(0) == MPoly.monomial(3, (1, 1, 0), 2)


def test_mpoly_det_small():
    x = MPoly.variable(3, 0)
    y = MPoly.variable(3, 1)
    d = mpoly_det([[x, y], [y, x]])
    assert d == x * x - y * y


def test_monomials_of_degree_count_and_order():
    ms = monomials_of_degree(3, 2)
    assert len(ms) == 6
    assert ms[0] == (2, 0, 0) and ms[-1] == (0, 0, 2)


def test_vanishing_order():
    # (x - z)^2 * y vanishes to order 2 at (1:0:1)... and order 1 at y=0 pts
    x, y, z = (MPoly.variable(3, i) for i in range(3))
    f = (x - z) * (x - z) * y
    assert vanishing_order(f, (1, 1, 1)) == 2
    assert vanishing_order(f, (1, 0, 0)) == 1
    assert vanishing_order(f, (1, 0, 1)) == 3
    assert vanishing_order(f, (0, 1, 1)) == 0


def test_sparse_reducer_rank_matches_dense():
    rng = random.Random(16)
    for _ in range(30):
        nr, nc = rng.randint(1, 7), rng.randint(1, 7)
        rows = [[rng.randint(-4, 4) for _ in range(nc)] for _ in range(nr)]
        red = SparseReducer(nc)
        for row in rows:
            red.add({i: v for i, v in enumerate(row) if v})
        assert red.rank == rank(RatMatrix(rows))


def test_seeded_rng_deterministic():
    assert seeded_rng("t").random() == seeded_rng("t").random()


def test_draw_generic_exhausts():
    rng = seeded_rng("exhaust")
    with pytest.raises(GenericityError):
        draw_generic(rng, lambda r: 0, lambda x: False)
