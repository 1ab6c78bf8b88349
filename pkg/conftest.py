from fractions import Fraction

import pytest

from midconv.fields import QQ
from midconv.fuchsian import FuchsianSystem, LameEquation
from midconv.linalg import Matrix


@pytest.fixture
def lame_equation():
    ''' L_{1/6}(4x^3 - x, 0) '''
    return LameEquation(Fraction(1, 6), 0, (0, Fraction(1, 2), Fraction(-1, 2)))


@pytest.fixture
def seed():
    return FuchsianSystem((0, 1), (Matrix.from_rows([[Fraction(1, 2)]], QQ), Matrix.from_rows([[Fraction(1, 3)]], QQ)))
