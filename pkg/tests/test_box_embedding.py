from fractions import Fraction

import pytest

from artifact.box_embedding import (
    BlockStructure, embed_point, extend_to_entire_box, insertion_point, lift_box_basis,
    lift_to_bottom, project_set, quasi_interval_of_set, quasi_intervals_of_fint,
    reconstruct_via_cube, restrict_to_box, set_to_cube_point,
)
from artifact.domain import BoxShape, TruncatedBox, fints
from artifact.tp_core import BasisAssignment, random_basis_assignment, reconstruct, verify


def blocks(*a):
    return BlockStructure(BoxShape(a))


def test_embed_and_project():
    assert embed_point(blocks(1, 2, 1, 1), (0, 2, 1, 0)) == {2, 3, 4}
    assert embed_point(blocks(2, 2), (1, 1)) == {1, 3}
    assert embed_point(blocks(2, 2), (0, 0)) == frozenset()
    assert project_set(blocks(2, 2), {1, 3}) == (1, 1)
    assert project_set(blocks(2, 2), {2, 3}) == (1, 1)


@pytest.mark.parametrize("a", [(1, 2, 1), (2, 2, 3), (3, 1, 1, 2)])
def test_project_inverts_embed(a):
    b = blocks(*a)
    assert all(project_set(b, embed_point(b, x)) == x for x in b.shape.points())


def test_quasi_intervals():
    qs = quasi_intervals_of_fint(blocks(2, 2), (1, 1))
    assert [(sorted(q.ground), q.excess) for q in qs] == [([1, 3], 0), ([2, 3], 1)]
    qs = quasi_intervals_of_fint(blocks(3, 1), (1, 1))
    assert [(sorted(q.ground), q.excess) for q in qs] == [([1, 4], 0), ([2, 4], 1), ([3, 4], 2)]
    (q,) = quasi_intervals_of_fint(blocks(2, 2), (2, 1))
    assert q.excess == 0


@pytest.mark.parametrize("a", [(2, 2), (3, 2, 1), (1, 3, 2), (2, 2, 2), (4, 2, 2), (2, 3, 1, 2)])
def test_excess_bookkeeping(a):
    b = blocks(*a)
    seen = 0
    for x in fints(b.shape):
        for Q in quasi_intervals_of_fint(b, x):
            S = Q.ground
            i, k = min(S), max(S)
            if k - i + 1 == len(S):
                continue
            j = i + Q.head
            assert j not in S and i < j < k
            X = S - {i, k}
            eps = {}
            for name, T in dict(B=X | {j}, C=X | {i, j}, D=X | {k}, E=X | {j, k}, F=X | {i}).items():
                qi = quasi_interval_of_set(b, T)
                assert qi is not None, (name, sorted(T))
                eps[name] = qi.excess
            assert Q.excess + eps["B"] == eps["E"] + eps["F"] > eps["C"] + eps["D"]
            seen += 1
    assert seen


def test_lift_values_on_shifted_head():
    shape = BoxShape((2, 2))
    f0 = {x: Fraction(10 * x[0] + x[1]) for x in fints(shape) if any(x)}
    g, M = lift_box_basis(shape, f0)
    assert g[set_to_cube_point({2, 3}, 4)] == f0[(1, 1)] + M


def test_zero_f0_lift():
    shape = BoxShape((1, 2, 1))
    f0 = {x: 0 for x in fints(shape)}
    g, M = lift_box_basis(shape, f0)
    F = reconstruct(g)
    b = BlockStructure(shape)
    assert all(F[set_to_cube_point(embed_point(b, x), 4)] == 0 for x in f0)


@pytest.mark.parametrize("a", [(1, 2, 1), (2, 2), (3, 1), (2, 1, 2)])
def test_cube_route_equals_direct(a, rng):
    box = TruncatedBox.full(a)
    g = random_basis_assignment(box, rng)
    f, M = reconstruct_via_cube(g)
    assert f == reconstruct(g)
    assert reconstruct_via_cube(g, 2 * M)[0] == f


def test_insertion_point():
    shape = BoxShape((1, 1, 1, 1))
    assert insertion_point(shape, (0, 1, 0, 1)) == 1
    assert insertion_point(shape, (1, 1, 0, 0)) == 3


def test_truncation_chain(rng):
    box = TruncatedBox(BoxShape((1, 1, 1, 1)), 2, 3)
    g = random_basis_assignment(box, rng)
    f = reconstruct(g)
    stages = lift_to_bottom(g)
    assert [s.box.m for s, _ in stages] == [1, 0]
    for stage, _ in stages:
        assert restrict_to_box(reconstruct(stage), box) == f


def test_truncation_step_values(rng):
    box = TruncatedBox(BoxShape((1, 1, 1, 1)), 2, 3)
    g = random_basis_assignment(box, rng)
    (low, M), _ = lift_to_bottom(g)
    assert low[(1, 0, 0, 0)] == g[(1, 1, 0, 0)]
    assert low[(0, 1, 0, 0)] == g[(1, 1, 0, 0)] + M
    assert low[(0, 0, 0, 1)] == g[(1, 0, 0, 1)] + M
    assert all(low[x] == g[x] for x in low if sum(x) >= 2)


def test_extend_to_entire_box(rng):
    full = TruncatedBox.full((1, 1, 1))
    f = reconstruct(random_basis_assignment(full, rng))
    assert extend_to_entire_box(f) == f
    zero = TruncatedBox(BoxShape((1, 1, 1)), 1, 2)
    z = reconstruct(BasisAssignment(zero, {x: 0 for x in random_basis_assignment(zero, rng).values}))
    assert all(v == 0 for _, v in extend_to_entire_box(z).items())
    for a, m, mp in [((1, 1, 1), 1, 2), ((1, 2, 1), 2, 3), ((2, 1, 2), 1, 3)]:
        box = TruncatedBox(BoxShape(a), m, mp)
        f = reconstruct(random_basis_assignment(box, rng))
        F = extend_to_entire_box(f)
        assert F.box == TruncatedBox.full(a) and verify(F).ok
        assert restrict_to_box(F, box) == f
