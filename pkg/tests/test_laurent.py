import itertools
from fractions import Fraction

import pytest

from artifact.box_embedding import BlockStructure, embed_point, lift_box_basis, project_set
from artifact.domain import BoxShape, TruncatedBox, fints
from artifact.flow_grid import Grid, enumerate_admissible_flows, interval, point_to_subset, subset_to_point
from artifact.laurent import (
    ALLOWED, Monomial, TropicalPolynomial, evaluate, flow_coefficients, flow_to_gt, gt_patterns,
    gt_to_flow, gt_value, laurent_box, laurent_cube, laurent_truncated, two_element_value,
    vertex_sum_coefficients,
)
from artifact.tp_core import random_basis_assignment, reconstruct
from conftest import bits


def coeffs(n, **named):
    return {bits(k.lstrip("s"), n): v for k, v in named.items()}


def test_interval_single_monomial():
    for c, d in [(1, 1), (2, 4), (1, 5)]:
        p = laurent_cube(5, interval(c, d, 5))
        assert p.monomials == (Monomial.from_dict({interval(c, d, 5): 1}),)


def test_two_flows_of_13():
    grid = Grid(3, 3)
    got = {frozenset(flow_coefficients(F, grid).as_dict().items())
           for F in enumerate_admissible_flows(grid, {1, 3})}
    want = {frozenset(coeffs(3, s1=1, s23=1, s2=-1).items()),
            frozenset(coeffs(3, s3=1, s12=1, s2=-1).items())}
    assert got == want
    assert len(laurent_cube(3, {1, 3}).monomials) == 2


def test_evaluation_example():
    g = {x: Fraction(0) for x in [bits(s, 3) for s in ("1", "2", "3", "12", "23", "123")]}
    g[bits("2", 3)] = Fraction(-1)
    assert evaluate(laurent_cube(3, {1, 3}), g) == 1


def test_turn_rule_matches_vertex_sums():
    for n in range(1, 6):
        grid = Grid(n, n)
        for S in itertools.product((0, 1), repeat=n):
            for F in enumerate_admissible_flows(grid, S):
                assert flow_coefficients(F, grid).as_dict() == vertex_sum_coefficients(F, n, 0, n)


def test_coefficient_two_occurs_and_bounds():
    seen = set()
    for S in itertools.product((0, 1), repeat=6):
        for mon in laurent_cube(6, S).monomials:
            seen.update(mon.coefficients())
    assert seen <= ALLOWED and 2 in seen


def test_cube_evaluation(rng):
    box = TruncatedBox.cube(5)
    for _ in range(5):
        g = random_basis_assignment(box, rng, rational=True)
        f = reconstruct(g)
        assert all(laurent_cube(5, S).evaluate(g) == f[S] for S in box.points())


@pytest.mark.parametrize("n,m,mp", [(4, 2, 2), (4, 2, 3), (5, 2, 4), (4, 1, 3), (5, 3, 5)])
def test_truncated_evaluation(n, m, mp, rng):
    box = TruncatedBox.cube(n, m, mp)
    for _ in range(5):
        g = random_basis_assignment(box, rng)
        f = reconstruct(g)
        for S in box.points():
            p = laurent_truncated(n, m, mp, S)
            assert p.evaluate(g) == f[S]
            if S in g:
                assert p.monomials == (Monomial.from_dict({S: 1}),)


def test_truncated_m0_is_cube():
    for S in itertools.product((0, 1), repeat=4):
        assert laurent_truncated(4, 0, 4, S) == laurent_cube(4, S)


@pytest.mark.parametrize("a", [(1, 2, 1), (2, 2), (2, 1, 2), (3, 1)])
def test_box_evaluation(a, rng):
    box = TruncatedBox.full(a)
    for _ in range(5):
        g = random_basis_assignment(box, rng)
        f = reconstruct(g)
        for x in box.points():
            p = laurent_box(a, x)
            assert p.evaluate(g) == f[x]
            if x in fints(box.shape):
                assert p.monomials == (Monomial.from_dict({x: 1}),)


def test_regular_flows_survive_big_m():
    # monomials of the lifted cube polynomial that stay bounded as M grows are the box monomials
    a = (1, 2, 1)
    shape = BoxShape(a)
    blocks = BlockStructure(shape)
    N = blocks.N
    names = sorted(fints(shape))
    for x in shape.points():
        if not any(x):
            continue
        S = subset_to_point(embed_point(blocks, x), N)
        cube = laurent_cube(N, S)
        surviving = set()
        for mon in cube.monomials:
            vals = []
            for M in (Fraction(10**6), Fraction(2 * 10**6)):
                f0 = {y: Fraction(0) for y in names}
                g, _ = lift_box_basis(shape, f0, M=M)
                vals.append(mon.evaluate(g))
            if vals[0] == vals[1]:
                surviving.add(mon)
        box_terms = {frozenset(m.terms) for m in laurent_box(a, x).monomials}
        pushed = set()
        for mon in surviving:
            d = {}
            for I, c in mon.terms:
                y = project_set(blocks, point_to_subset(I))
                d[y] = d.get(y, 0) + c
            pushed.add(frozenset((y, c) for y, c in d.items() if c))
        assert pushed == box_terms


def test_gt_examples():
    assert sorted(gt_patterns(3, {1, 3})) == [((1,), (3, 2)), ((1,), (3, 3))]
    assert gt_patterns(5, {1, 2, 3}) == [((1,), (2, 2), (3, 3, 3))]


def test_gt_bijection_and_counts():
    for n in range(1, 7):
        grid = Grid(n, n)
        for S in itertools.product((0, 1), repeat=n):
            flows = enumerate_admissible_flows(grid, S)
            pats = gt_patterns(n, S)
            assert len(pats) == len(flows)
            assert {flow_to_gt(F) for F in flows} == set(pats)
            assert all(gt_to_flow(flow_to_gt(F)) == F for F in flows)


def test_gt_values(rng):
    n = 3
    box = TruncatedBox.cube(n)
    f = reconstruct(random_basis_assignment(box, rng))
    F = lambda s: f[bits(s, n)]
    assert gt_value(f, ((1,), (3, 3)), n) == F("1") + F("23") - F("2")
    assert gt_value(f, ((1,), (3, 2)), n) == F("3") + F("12") - F("2")
    assert gt_value(f, ((1,), (2, 2)), n) == F("12")


def test_gt_max_and_two_element_formula(rng):
    n = 6
    box = TruncatedBox.cube(n)
    for _ in range(3):
        f = reconstruct(random_basis_assignment(box, rng))
        for S in box.points():
            if any(S):
                assert max(gt_value(f, A, n) for A in gt_patterns(n, S)) == f[S]
        for i, k in itertools.combinations(range(1, n + 1), 2):
            assert two_element_value(f, i, k, n) == f[subset_to_point({i, k}, n)]


def test_polynomial_json_and_errors():
    p = laurent_cube(3, {1, 3})
    assert p.to_json()["target"] == [1, 0, 1] and len(p.to_json()["monomials"]) == 2
    with pytest.raises(ValueError):
        TropicalPolynomial((1,), ())
    with pytest.raises(KeyError):
        p.evaluate({})
