from fractions import Fraction

import pytest

from artifact.domain import BoxShape, TruncatedBox, standard_basis
from artifact.tp_core import (
    BasisAssignment, ValuedFunction, complementary, quasi_separable, random_basis_assignment,
    reconstruct, restrict, restrict_to_basis, verify,
)
from conftest import bits

CUBE3 = TruncatedBox.full((1, 1, 1))


def supermodular_gap_fixture():
    ones = {"13", "23", "123"}
    return ValuedFunction(CUBE3, {x: int("".join(str(i + 1) for i in range(3) if x[i]) in ones)
                                  if any(x) else 0 for x in CUBE3.points()})


def test_fixture_is_tp():
    f = supermodular_gap_fixture()
    assert verify(f).ok
    vals = dict(f.values)
    vals[bits("13", 3)] = Fraction(2)
    assert len(verify(ValuedFunction(CUBE3, vals))) == 1


def test_fixture_restriction():
    g = restrict(supermodular_gap_fixture(), [bits(s, 3) for s in ["", "1", "2", "3", "12", "23", "123"]])
    assert list(g.values()) == [0, 0, 0, 0, 0, 1, 1]


def test_zero_reconstruction():
    g = BasisAssignment(CUBE3, {x: 0 for x in standard_basis(CUBE3)})
    assert all(v == 0 for _, v in reconstruct(g).items())


def test_single_tp3_value():
    vals = {x: 0 for x in standard_basis(CUBE3)}
    vals[bits("2", 3)] = -1
    assert reconstruct(BasisAssignment(CUBE3, vals))[bits("13", 3)] == 1


def test_hypersimplex_tp4():
    box = TruncatedBox.cube(4, 2, 2)
    vals = {x: 0 for x in standard_basis(box)}
    vals[bits("13", 4)] = -1
    assert reconstruct(BasisAssignment(box, vals))[bits("24", 4)] == 1


def test_quasi_separable(rng):
    shape = BoxShape((1, 1, 1))
    f = quasi_separable(shape, 0, 3, [lambda s: s * s, 0, 0, 0])
    assert verify(f).ok
    assert all(v == 0 for _, v in quasi_separable(shape, 0, 3, [0, 0, 0, 0]).items())
    for _ in range(100):
        a = tuple(rng.randint(1, 2) for _ in range(rng.randint(1, 4)))
        shape = BoxShape(a)
        phi = [[rng.randint(-9, 9) for _ in range(shape.total + 1)]]
        phi += [[rng.randint(-9, 9) for _ in range(c + 1)] for c in a]
        assert verify(quasi_separable(shape, 0, shape.total, phi)).ok


def test_complementary(rng):
    box = TruncatedBox.full((1, 2, 1))
    f = reconstruct(random_basis_assignment(box, rng))
    assert complementary(complementary(f)) == f
    assert verify(complementary(f)).ok


def test_roundtrip_rational(rng):
    box = TruncatedBox(BoxShape((2, 1, 2)), 1, 4)
    g = random_basis_assignment(box, rng, rational=True)
    assert restrict_to_basis(reconstruct(g)) == g


def test_nonzero_zero_point_allowed():
    vals = {x: 0 for x in standard_basis(CUBE3)}
    vals[(0, 0, 0)] = 5
    assert reconstruct(BasisAssignment(CUBE3, vals))[(0, 0, 0)] == 5


def test_rejects_bad_keys_and_floats():
    with pytest.raises(ValueError):
        BasisAssignment(CUBE3, {(1, 0, 0): 0})
    with pytest.raises((TypeError, ValueError)):
        BasisAssignment(CUBE3, {x: 0.5 for x in standard_basis(CUBE3)})


def test_json_roundtrip(rng):
    f = reconstruct(random_basis_assignment(TruncatedBox.full((1, 2)), rng, rational=True))
    assert ValuedFunction.from_json(f.to_json()) == f
