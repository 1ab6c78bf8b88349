import random
from fractions import Fraction

import numpy as np
import pytest

from midconv.errors import PreconditionError
from midconv.fields import QQ, PrimeField
from midconv.fuchsian import FuchsianSystem, OkuboSystem, lame_okubo, lame_system
from midconv.linalg import Matrix
from midconv.pcurv import (FpRatFunMatrix, convolution_bound, deriv_recursion, fuchsian_fp, good_prime,
                           nilpotence_index, okubo_fp, p_curv_fuchsian, p_curv_okubo, scan)
from midconv.poly import Polynomial, RationalFunction

F = Fraction
NILPOTENT = Matrix.from_rows([[0, 1], [0, 0]], QQ)


def rank_one(points, values):
    return FuchsianSystem(tuple(points), tuple(Matrix.from_rows([[v]], QQ) for v in values))


def test_reduction_entry():
    a = fuchsian_fp(rank_one([0], [F(1, 2)]), 5)
    f5 = PrimeField(5)
    assert a.entry(0, 0) == RationalFunction(Polynomial((3,), f5), Polynomial((0, 1), f5))


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_rank_one_rational_exponent_has_zero_p_curvature(p):
    assert nilpotence_index(p_curv_fuchsian(rank_one([0], [F(1, 2)]), p)) == 1
    assert p_curv_fuchsian(rank_one([0, 1], [F(1, 2), F(2, 5)]), p if p != 5 else 7).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5, 7, 13])
def test_unipotent_residue(p):
    m = p_curv_fuchsian(FuchsianSystem((0,), (NILPOTENT,)), p)
    assert not m.is_zero()
    assert nilpotence_index(m) == 2


def test_unipotent_residue_value():
    m = p_curv_fuchsian(FuchsianSystem((0,), (NILPOTENT,)), 5)
    assert m.e == 5
    assert m.P.tolist() == [[[0], [4]], [[0], [0]]]


def test_not_nilpotent():
    identity = FpRatFunMatrix(5, np.eye(2, dtype=np.int64)[:, :, None], 1, (0,))
    assert nilpotence_index(identity) is None


@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_okubo_closed_product_matches_recursion(p):
    rng = random.Random(p)
    for _ in range(5):
        size = rng.randint(1, 3)
        T = tuple(rng.choice([0, 1, -1]) for _ in range(size))
        b = Matrix.from_rows([[F(rng.randint(-3, 3), rng.choice([1, 2, 3])) for _ in range(size)]
                              for _ in range(size)], QQ)
        ok = OkuboSystem(T, b)
        assert deriv_recursion(okubo_fp(ok, p), p) == p_curv_okubo(ok, p)


def test_gauge_covariance():
    s = Matrix.from_rows([[1, 0], [1, 1]], QQ)
    second = Matrix.from_rows([[F(1, 2), 0], [1, F(1, 3)]], QQ)
    system = FuchsianSystem((0, 1), (NILPOTENT, second))
    inverse = s.inverse()
    moved = FuchsianSystem((0, 1), tuple(inverse @ a @ s for a in system.residues))
    for p in (5, 7, 11):
        assert p_curv_fuchsian(moved, p) == p_curv_fuchsian(system, p).conjugated(s)


def test_deriv_recursion_first_order():
    a = fuchsian_fp(FuchsianSystem((0,), (NILPOTENT,)), 7)
    assert deriv_recursion(a, 1) == a
    with pytest.raises(PreconditionError):
        deriv_recursion(a, 0)


@pytest.mark.parametrize("system, mu, p, reason", [
    (rank_one([0, F(1, 5)], [F(1, 2), F(1, 3)]), None, 5, "denominator of t_2"),
    (rank_one([0, 7], [F(1, 2), F(1, 3)]), None, 7, "collide"),
    (rank_one([0, 1], [F(1, 2), F(1, 3)]), None, 3, "residues"),
    (rank_one([0, 1], [F(1, 2), F(1, 3)]), F(2, 7), 7, "denominator of mu"),
    (rank_one([0, 1], [F(1, 2), F(1, 3)]), F(7, 5), 7, "n1*n2"),
    (rank_one([0, 1], [F(1, 2), F(1, 3)]), None, 9, "not prime"),
])
def test_bad_primes(system, mu, p, reason):
    good, why = good_prime(system, mu, p)
    assert not good
    assert reason in why


def test_good_prime():
    assert good_prime(rank_one([0, 1], [F(1, 2), F(1, 3)]), F(1, 4), 5) == (True, "good")
    with pytest.raises(PreconditionError):
        p_curv_fuchsian(rank_one([0, 1], [F(1, 2), F(1, 3)]), 3)


def test_convolution_bound():
    assert convolution_bound(-1, 2) == 3
    assert convolution_bound(F(1, 2), 2) == 4
    assert convolution_bound(2, 2) is None
    assert convolution_bound(F(1, 2), None) is None


def test_lame_system_has_zero_p_curvature(lame_equation):
    reports = scan(lame_system(lame_equation), 50)
    assert [r.prime for r in reports if not r.good] == [2, 3]
    good = [r for r in reports if r.good]
    assert [r.prime for r in good] == [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
    assert all(r.index == 1 for r in good)


@pytest.mark.parametrize("mu", [F(1, 3), F(1, 5)])
def test_lame_okubo_nilpotence(lame_equation, mu):
    reports = scan(lame_okubo(lame_equation, mu=mu), 50, mu)
    good = [r for r in reports if r.good]
    assert good
    assert mu.denominator not in [r.prime for r in good]
    assert all(r.index is not None and r.index <= 3 for r in good)


def test_lame_convolution_within_bound(lame_equation):
    reports = [r for r in scan(lame_system(lame_equation), 23, F(1, 3)) if r.good]
    assert reports
    for r in reports:
        assert r.index == 1
        assert r.bound == 3
        assert r.bound_holds


@pytest.mark.parametrize("mu, bound", [(F(-1), 3), (F(1, 2), 4)])
def test_unipotent_convolution_bounds(mu, bound):
    reports = [r for r in scan(FuchsianSystem((0,), (NILPOTENT,)), 30, mu) if r.good]
    assert reports
    for r in reports:
        assert (r.index, r.conv_index, r.mc_index) == (2, 2, 1)
        assert r.bound == bound
        assert r.bound_holds
        assert r.as_dict()['bound_holds'] is True


def test_scan_needs_a_prime():
    with pytest.raises(PreconditionError):
        scan(rank_one([0, 1], [F(1, 2), F(1, 3)]), 1)
