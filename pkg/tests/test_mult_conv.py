import random
from fractions import Fraction

import pytest

from midconv.errors import PreconditionError
from midconv.fields import QQ, CyclotomicField, cyclo_sqrt_root, zeta
from midconv.linalg import Matrix
from midconv.mult_conv import (MatTuple, apply_braid_word, braid_act, check_star, check_starstar, conv_mult,
                               dim_formula, invert_word, irreducible_abs, mc_mult, pure_braid_word,
                               quotient_form, require_conjugate, rigidity_index, scalar_mult, transport_form,
                               tuple_conjugate)


def rational(rows):
    return Matrix.from_rows(rows, QQ)


def random_invertible(rng, n):
    while True:
        m = Matrix.from_rows([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)], QQ)
        if m.det():
            return m


def pseudo_reflection(rng, n):
    ''' 1 + u v^T with small integer u, v '''
    one = Matrix.identity(n)
    while True:
        u = [rng.randint(-2, 2) for _ in range(n)]
        v = [rng.randint(-2, 2) for _ in range(n)]
        m = one + Matrix.from_rows([[x * y for y in v] for x in u], QQ)
        if m.det() and m != one:
            return m


def good_tuples(rng, count, n=2, r=3):
    ''' Absolutely irreducible pseudo-reflection tuples satisfying (*) and (**). '''
    found = []
    for _ in range(50 * count):
        a = MatTuple(tuple(pseudo_reflection(rng, n) for _ in range(r)))
        if irreducible_abs(a) and check_star(a) and check_starstar(a):
            found.append(a)
            if len(found) == count:
                return found
    raise AssertionError("not enough irreducible tuples")


HYPERGEOMETRIC = MatTuple((rational([[1, 1], [0, 1]]), rational([[1, 0], [-1, 1]])))


def test_conv_mult_blocks():
    a = MatTuple((rational([[2]]), rational([[3]])))
    b1, b2 = conv_mult(a, 5)
    assert b1 == rational([[10, 2], [0, 1]])
    assert b2 == rational([[1, 0], [5, 15]])


def test_conv_mult_rejects_zero_lambda():
    with pytest.raises(PreconditionError):
        conv_mult(HYPERGEOMETRIC, 0)


def test_matrix_tuple_validation():
    with pytest.raises(PreconditionError):
        MatTuple((rational([[1, 2], [2, 4]]),))
    with pytest.raises(PreconditionError):
        MatTuple((rational([[1]]), rational([[1, 0], [0, 1]])))


def test_middle_convolution_of_scalars():
    a = MatTuple((rational([[2]]), rational([[3]])))
    result = mc_mult(a, 5)
    assert result.K.is_zero() and result.L.is_zero()
    assert result.dim == 2
    trivial = MatTuple((rational([[1]]), rational([[1]])))
    assert mc_mult(trivial, 5).dim == 0


def test_dimension_formula_needs_lambda_not_one():
    with pytest.raises(PreconditionError):
        dim_formula(HYPERGEOMETRIC, 1)


@pytest.mark.parametrize("seed, lam", [(1, Fraction(-1)), (2, Fraction(5)), (3, Fraction(1, 6)), (4, zeta(3))])
def test_dimension_formula_random(seed, lam):
    rng = random.Random(seed)
    for _ in range(50):
        n, r = rng.randint(1, 4), rng.randint(1, 4)
        a = MatTuple(tuple(random_invertible(rng, n) for _ in range(r)))
        assert mc_mult(a, lam).dim == dim_formula(a, lam)


def test_hypothesis_checks():
    assert irreducible_abs(HYPERGEOMETRIC)
    assert check_star(HYPERGEOMETRIC)
    assert check_starstar(HYPERGEOMETRIC)
    diagonal = MatTuple((Matrix.diagonal([1, 2]), Matrix.diagonal([1, 3])))
    assert not irreducible_abs(diagonal)
    assert not check_star(diagonal)


def test_rigidity_index():
    assert rigidity_index(HYPERGEOMETRIC) == 2


def test_multiplicativity():
    rng = random.Random(7)
    pairs = [(Fraction(2), Fraction(3)), (Fraction(-1), Fraction(3)), (Fraction(1, 2), Fraction(5)),
             (Fraction(3), Fraction(-2))]
    for index, a in enumerate(good_tuples(rng, 50)):
        lam1, lam2 = pairs[index % len(pairs)]
        twice = mc_mult(mc_mult(a, lam1).quotient, lam2).quotient
        once = mc_mult(a, lam1 * lam2).quotient
        assert tuple_conjugate(twice, once).conjugate


def test_braid_compatibility():
    rng = random.Random(11)
    lambdas = [Fraction(2), Fraction(-1), Fraction(1, 3), Fraction(5)]
    for index, a in enumerate(good_tuples(rng, 30)):
        lam = lambdas[index % len(lambdas)]
        for i in (1, 2):
            left = mc_mult(braid_act([i], a), lam).quotient
            right = braid_act([i], mc_mult(a, lam).quotient)
            assert tuple_conjugate(left, right).conjugate


@pytest.mark.parametrize("lam", [Fraction(2), Fraction(-1), Fraction(1, 3)])
def test_irreducibility_and_rigidity_preserved(lam):
    rng = random.Random(13)
    for a in good_tuples(rng, 30):
        mc = mc_mult(a, lam).quotient
        assert mc.n > 0
        assert irreducible_abs(mc)
        assert rigidity_index(mc) == rigidity_index(a)


def test_conjugate_tuples_have_conjugate_convolutions():
    rng = random.Random(17)
    lambdas = [Fraction(2), Fraction(-1), Fraction(1, 3), Fraction(5)]
    for index, a in enumerate(good_tuples(rng, 20)):
        lam = lambdas[index % len(lambdas)]
        s = random_invertible(rng, 2)
        moved = mc_mult(a.conjugated(s), lam).quotient
        assert tuple_conjugate(moved, mc_mult(a, lam).quotient).conjugate


def test_braid_action_keeps_product():
    a = MatTuple((rational([[1, 1], [0, 1]]), rational([[1, 0], [-1, 1]]), rational([[2, 1], [1, 1]])))
    for word in ([1], [-2], [1, 2, -1], pure_braid_word(1, 3)):
        assert braid_act(word, a).product() == a.product()
    word = [1, 2, -1, 2]
    assert braid_act(invert_word(word), braid_act(word, a)) == a


def test_pure_braid_word():
    assert pure_braid_word(1, 2) == [1, 1]
    assert pure_braid_word(1, 3) == [2, 1, 1, -2]
    with pytest.raises(PreconditionError):
        pure_braid_word(2, 2)
    with pytest.raises(PreconditionError):
        apply_braid_word([3], [1, 2, 3], lambda g: g)


def test_scalar_mult():
    scaled = scalar_mult([2, Fraction(1, 2)], HYPERGEOMETRIC)
    assert scaled[0] == rational([[2, 2], [0, 2]])
    with pytest.raises(PreconditionError):
        scalar_mult([0, 1], HYPERGEOMETRIC)


def test_conjugacy_search():
    s = rational([[1, 2], [0, 1]])
    assert tuple_conjugate(HYPERGEOMETRIC, HYPERGEOMETRIC.conjugated(s)).conjugate
    other = MatTuple((rational([[1, 0], [0, 1]]), rational([[1, 0], [-1, 1]])))
    assert tuple_conjugate(HYPERGEOMETRIC, other).status == 'not-conjugate'
    with pytest.raises(PreconditionError):
        require_conjugate(HYPERGEOMETRIC, other)


def test_form_of_scalar_tuple():
    a = MatTuple((rational([[-1]]), rational([[-1]])))
    s = zeta(4)
    h = transport_form(a, rational([[1]]), s)
    assert h == Matrix.from_rows([[0, -4], [4, 0]]) * s


def test_quotient_form_is_symmetric():
    g = rational([[0, 1], [-1, 0]])
    s = zeta(4)
    q = quotient_form(HYPERGEOMETRIC, g, s)
    assert q.shape == (2, 2)
    assert q == q.T
    assert q == Matrix.from_rows([[2, 1], [1, 2]]) * s


def test_form_requires_invariance():
    with pytest.raises(PreconditionError):
        transport_form(HYPERGEOMETRIC, rational([[1, 0], [0, 1]]), 1)


def monomial_unitary(rng, n, field):
    perm = list(range(n))
    rng.shuffle(perm)
    rows = [[field.zero] * n for _ in range(n)]
    for i, j in enumerate(perm):
        rows[i][j] = field.zeta(rng.randrange(4))
    return Matrix.from_rows(rows, field)


def test_form_transport_random():
    rng = random.Random(3)
    field = CyclotomicField(4)
    for _ in range(30):
        n, r = rng.randint(1, 2), rng.randint(2, 3)
        a = MatTuple(tuple(monomial_unitary(rng, n, field) for _ in range(r)))
        k = rng.randrange(4)
        s = cyclo_sqrt_root(4, k)
        h = transport_form(a, Matrix.identity(n, field), s)
        for b in conv_mult(a, s * s):
            assert b.H @ h @ b == h
        one = Matrix.identity(n, field)
        corner = h.submatrix(range(n), range(n, 2 * n))
        assert corner == (a[0].inverse() - one) @ (a[1] - one) * (1 / s)
