import itertools

import pytest

from artifact.domain import BoxShape, TruncatedBox, fints
from artifact.tiling import (
    VEE, WEDGE, Hexagon, ObstacleError, RTDiagram, extend_function_from_subbox, extend_points_to_tiling,
    enumerate_tilings, exhaustive_tilings, find_hexagons, flip, from_wiring, inseparable_triangles,
    minimize_to_standard, obstacle_check, rhombus_count, standard_tiling, to_svg, to_wiring,
    transport_values, validate,
)
from artifact.tp_core import random_basis_assignment, reconstruct, restrict, verify
from conftest import bits


def pts(n, *names):
    return {bits(s, n) for s in names}


def test_standard_tiling_cube3():
    D = standard_tiling((1, 1, 1))
    assert len(D.rhombi) == 3
    assert D.vertices == pts(3, "", "1", "2", "3", "12", "23", "123")


def test_standard_tiling_is_fints():
    a = (1, 2, 1, 1)
    assert standard_tiling(a).vertices == fints(BoxShape(a)) | {(0,) * 4}


def test_two_colors_full_grid():
    D = standard_tiling((3, 2))
    assert len(D.rhombi) == 6 and D.vertices == set(BoxShape((3, 2)).points())


def test_validate():
    D = standard_tiling((1, 2, 1))
    assert validate(D.a, D.rhombi)
    assert not validate(D.a, set(list(D.rhombi)[1:]))
    for h in find_hexagons(D):
        assert validate(D.a, flip(D, h).rhombi)


def test_flip_in_cube3():
    D = standard_tiling((1, 1, 1))
    (h,) = find_hexagons(D)
    assert h.kind == VEE
    E = flip(D, h)
    assert E.vertices == pts(3, "", "1", "3", "13", "12", "23", "123")
    (h2,) = find_hexagons(E)
    assert h2.kind == WEDGE and flip(E, h2) == D


def test_hexagon_count_matches_scan():
    D = standard_tiling((1, 1, 1, 1))
    found = {(h.s, h.i, h.j, h.k) for h in find_hexagons(D)}
    scan = set()
    for s in BoxShape((1, 1, 1, 1)).points():
        for i, j, k in itertools.combinations(range(1, 5), 3):
            for kind in (VEE, WEDGE):
                if Hexagon(s, i, j, k, kind).rhombi() <= D.rhombi:
                    scan.add((s, i, j, k))
    assert found == scan


@pytest.mark.parametrize("a,count", [((1, 1, 1), 2), ((1, 1, 1, 1), 8), ((1, 2, 1), 3),
                                     ((2, 1, 1), 3), ((2, 2), 1), ((1, 1, 1, 1, 1), 62)])
def test_tiling_counts(a, count):
    assert len(enumerate_tilings(a)) == count


@pytest.mark.parametrize("a", [(1, 1, 1), (1, 1, 1, 1), (1, 2, 1), (2, 1, 1)])
def test_exhaustive_agrees(a):
    assert enumerate_tilings(a) == exhaustive_tilings(a)


@pytest.mark.parametrize("a", [(1, 1, 1, 1), (1, 2, 1), (2, 1, 2)])
def test_tiling_invariants(a):
    tilings = enumerate_tilings(a)
    sizes = {len(D.vertices) for D in tilings}
    assert len(sizes) == 1
    std = standard_tiling(a)
    assert min(tilings, key=lambda D: D.height) == std
    assert sum(D.height == std.height for D in tilings) == 1
    for D in tilings:
        assert len(D.rhombi) == rhombus_count(a)
        assert from_wiring(to_wiring(D)) == D
        hexes = find_hexagons(D)
        tri = inseparable_triangles(D)
        assert sorted(r for r, k in tri if k == "Delta") == sorted(h.rhombi() for h in hexes if h.kind == VEE)
        assert sorted(r for r, k in tri if k == "Nabla") == sorted(h.rhombi() for h in hexes if h.kind == WEDGE)


def test_minimize(rng):
    a = (1, 1, 1, 1)
    std = standard_tiling(a)
    assert minimize_to_standard(std) == []
    h = find_hexagons(std)[0]
    assert len(minimize_to_standard(flip(std, h))) == 1
    for _ in range(20):
        D = std
        for _ in range(10):
            D = flip(D, rng.choice(find_hexagons(D)))
        E = D
        for h in minimize_to_standard(D):
            E = flip(E, h)
        assert E == std


def test_obstacle():
    assert obstacle_check(pts(3, "2", "13"))[:3] == (1, 2, 3)
    assert obstacle_check(fints(BoxShape((2, 1, 2, 1)))) is None
    assert obstacle_check([(0, 0, 0), (0, 1, 0), (1, 1, 1)]) is None


def test_extend_points():
    D = extend_points_to_tiling((1, 1, 1), pts(3, "13"))
    assert bits("13", 3) in D.vertices
    assert extend_points_to_tiling((1, 2, 1), []) == standard_tiling((1, 2, 1))
    with pytest.raises(ObstacleError) as err:
        extend_points_to_tiling((1, 1, 1), pts(3, "2", "13"))
    assert err.value.witness[:3] == (1, 2, 3)


@pytest.mark.parametrize("a", [(1, 1, 1, 1), (1, 2, 1), (2, 1, 2)])
def test_extend_recovers_tiling(a):
    for D in enumerate_tilings(a):
        assert extend_points_to_tiling(a, D.vertices) == D


def test_extend_height_minimal(rng):
    a = (1, 1, 1, 1)
    tilings = enumerate_tilings(a)
    points = list(BoxShape(a).points())
    for _ in range(200):
        X = set(rng.sample(points, rng.randint(1, 4)))
        holders = [D for D in tilings if X <= D.vertices]
        if not holders:
            assert obstacle_check(X) is not None
            continue
        D = extend_points_to_tiling(a, X)
        assert D.height == min(E.height for E in holders)


def test_minimal_tiling_not_always_unique():
    # two different lowest tilings contain the point 14 of the 4-cube
    a = (1, 1, 1, 1)
    X = {(1, 0, 0, 1)}
    holders = [D for D in enumerate_tilings(a) if X <= D.vertices]
    low = min(D.height for D in holders)
    assert len([D for D in holders if D.height == low]) == 2
    assert extend_points_to_tiling(a, X).height == low


def test_transport():
    box = TruncatedBox.full((1, 1, 1))
    vals = {x: 0 for x in box.shape.points() if x in standard_tiling((1, 1, 1)).vertices}
    vals[bits("2", 3)] = -1
    D = standard_tiling((1, 1, 1))
    (h,) = find_hexagons(D)
    E, new = transport_values(D, vals, [h])
    assert new[bits("13", 3)] == 1 and bits("2", 3) not in new
    (h2,) = find_hexagons(E)
    assert transport_values(E, new, [h2]) == (D, {k: v for k, v in vals.items()})


def test_transport_random_walk(rng):
    a = (1, 2, 1)
    box = TruncatedBox.full(a)
    g = random_basis_assignment(box, rng)
    f = reconstruct(g)
    D = standard_tiling(a)
    walk = []
    for _ in range(10):
        h = rng.choice(find_hexagons(D))
        walk.append(h)
        D = flip(D, h)
    E, vals = transport_values(standard_tiling(a), g.values, walk)
    assert E == D and vals == restrict(f, D.vertices)


def test_subbox_extension(rng):
    a = (1, 1, 1)
    f = reconstruct(random_basis_assignment(TruncatedBox.full(a), rng))
    assert extend_function_from_subbox(a, (0, 0, 0), (1, 1, 1), f.values) == f
    zero = {x: 0 for x in itertools.product((0, 1), (0, 1), (0,))}
    F = extend_function_from_subbox(a, (0, 0, 0), (1, 1, 0), zero)
    assert verify(F).ok and all(F[x] == 0 for x in zero)
    sub = reconstruct(random_basis_assignment(TruncatedBox.full((1, 1)), rng))
    vals = {(x[0], x[1], 0): v for x, v in sub.items()}
    F = extend_function_from_subbox(a, (0, 0, 0), (1, 1, 0), vals)
    assert verify(F).ok and all(F[x] == v for x, v in vals.items())


def test_json_and_svg():
    D = flip(standard_tiling((1, 1, 1)), find_hexagons(standard_tiling((1, 1, 1)))[0])
    assert RTDiagram.from_json(D.to_json()) == D
    svg = to_svg(D, {(1, 0, 1): "1"})
    assert svg.startswith("<svg") and svg.count("<polygon") == 3
