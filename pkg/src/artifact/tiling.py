"""Rhombic tilings of zonogons, their wiring duals, hexagon flips and extensions.

A tiling of ``Z(a)`` is stored as a set of rhombi ``(x, i, j)``, ``i < j``, each being
the image of the unit square ``x + [0,1]e_i + [0,1]e_j``.  All combinatorics is done
on lattice points; planar coordinates are only used for drawing and for the
left/right tests inside :func:`extend_points_to_tiling`.

Conventions: ``xi_1, ..., xi_n`` go clockwise, so the left boundary of the zonogon
reads colors ``1..n`` from bottom to top and the right boundary reads ``n..1``.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Optional, Sequence

from .domain import BoxShape, Point, TruncatedBox, fints, unit_add
from .tp_core import BasisAssignment, ValuedFunction, as_fraction, reconstruct, verify


class Rhombus(NamedTuple):
    x: Point
    i: int
    j: int

    def corners(self) -> tuple[Point, Point, Point, Point]:
        x, i, j = self
        return x, unit_add(x, i), unit_add(x, j), unit_add(x, i, j)

    def shifted(self, k: int) -> "Rhombus":
        return Rhombus(unit_add(self.x, k), self.i, self.j)


def _shape_tuple(shape) -> tuple[int, ...]:
    return shape.a if isinstance(shape, BoxShape) else tuple(shape)


@dataclass(frozen=True)
class RTDiagram:
    a: tuple[int, ...]
    rhombi: frozenset[Rhombus]

    @cached_property
    def vertices(self) -> frozenset[Point]:
        pts: set[Point] = set(boundary_points(self.a))
        for r in self.rhombi:
            pts.update(r.corners())
        return frozenset(pts)

    @property
    def height(self) -> int:
        return sum(sum(v) for v in self.vertices)

    def to_json(self) -> dict:
        return {"a": list(self.a),
                "rhombi": [{"x": list(r.x), "i": r.i, "j": r.j} for r in sorted(self.rhombi)]}

    @classmethod
    def from_json(cls, data: dict) -> "RTDiagram":
        return cls(tuple(data["a"]), frozenset(Rhombus(tuple(r["x"]), int(r["i"]), int(r["j"]))
                                               for r in data["rhombi"]))


def rhombus_count(a: Sequence[int]) -> int:
    return sum(a[i] * a[j] for i in range(len(a)) for j in range(i + 1, len(a)))


def left_word(a: Sequence[int]) -> list[int]:
    return [c for c in range(1, len(a) + 1) for _ in range(a[c - 1])]


def _path_points(start: Point, word: Iterable[int]) -> list[Point]:
    pts = [start]
    for c in word:
        pts.append(unit_add(pts[-1], c))
    return pts


def boundary_points(a: Sequence[int]) -> frozenset[Point]:
    zero = (0,) * len(a)
    word = left_word(a)
    return frozenset(_path_points(zero, word)) | frozenset(_path_points(zero, reversed(word)))


def rhombi_from_vertices(a: Sequence[int], V: Iterable[Point]) -> frozenset[Rhombus]:
    V = set(V)
    n = len(a)
    out = set()
    for x in V:
        for i, j in itertools.combinations(range(1, n + 1), 2):
            r = Rhombus(x, i, j)
            if all(c in V for c in r.corners()[1:]):
                out.add(r)
    return frozenset(out)


def standard_tiling(shape) -> RTDiagram:
    a = _shape_tuple(shape)
    sh = BoxShape(a)
    V = set(fints(sh)) | {sh.zero}
    D = RTDiagram(a, rhombi_from_vertices(a, V))
    assert D.vertices == V and validate(a, D.rhombi)
    return D


def _sweep(a: Sequence[int], rhombi: Iterable[Rhombus]):
    """Sweep the left boundary to the right one through the given rhombi.

    Returns the list of moves ``(rhombus, left_wire, right_wire)`` or None when
    the rhombi do not form a tiling.  Wires are ``(color, q)``.
    """
    remaining = set(rhombi)
    n = len(a)
    word = [(c, q) for c in range(1, n + 1) for q in range(1, a[c - 1] + 1)]
    moves = []
    total = len(remaining)
    while remaining:
        y = [0] * n
        progressed = False
        for t in range(len(word) - 1):
            u, v = word[t], word[t + 1]
            if u[0] < v[0]:
                r = Rhombus(tuple(y), u[0], v[0])
                if r in remaining:
                    remaining.discard(r)
                    word[t], word[t + 1] = v, u
                    moves.append((r, u, v))
                    progressed = True
                    break
            y[u[0] - 1] += 1
        if not progressed:
            return None
    if len(moves) != total:
        return None
    return moves


def validate(shape, rhombi: Iterable[Rhombus]) -> bool:
    a = _shape_tuple(shape)
    rhombi = frozenset(rhombi)
    sh = BoxShape(a)
    if len(rhombi) != rhombus_count(a):
        return False
    for r in rhombi:
        if not (1 <= r.i < r.j <= len(a)) or not all(sh.contains(c) for c in r.corners()):
            return False
    if _sweep(a, rhombi) is None:
        return False
    verts = set(boundary_points(a))
    for r in rhombi:
        verts.update(r.corners())
    return len(verts) == 1 + sum(a) + len(rhombi)


def basis_of(D: RTDiagram) -> frozenset[Point]:
    return D.vertices


# ---------------------------------------------------------------- wiring duals

Wire = tuple[int, int]


@dataclass(frozen=True)
class WiringDiagram:
    """Per-wire crossing sequences; a crossing is identified by the other wire."""

    a: tuple[int, ...]
    crossings: Mapping[Wire, tuple[Wire, ...]]


def to_wiring(D: RTDiagram) -> WiringDiagram:
    moves = _sweep(D.a, D.rhombi)
    if moves is None:
        raise ValueError("not a tiling")
    seq: dict[Wire, list[Wire]] = {(c, q): [] for c in range(1, len(D.a) + 1) for q in range(1, D.a[c - 1] + 1)}
    for _, u, v in moves:
        seq[u].append(v)
        seq[v].append(u)
    return WiringDiagram(D.a, {w: tuple(s) for w, s in seq.items()})


def from_wiring(W: WiringDiagram) -> RTDiagram:
    a = W.a
    n = len(a)
    word = [(c, q) for c in range(1, n + 1) for q in range(1, a[c - 1] + 1)]
    pos = {w: 0 for w in W.crossings}
    rhombi = set()
    total = sum(len(s) for s in W.crossings.values()) // 2
    while len(rhombi) < total:
        y = [0] * n
        for t in range(len(word) - 1):
            u, v = word[t], word[t + 1]
            su, sv = W.crossings[u], W.crossings[v]
            if pos[u] < len(su) and pos[v] < len(sv) and su[pos[u]] == v and sv[pos[v]] == u:
                if u[0] >= v[0]:
                    raise ValueError("wires cross in the wrong direction")
                rhombi.add(Rhombus(tuple(y), u[0], v[0]))
                pos[u] += 1
                pos[v] += 1
                word[t], word[t + 1] = v, u
                break
            y[u[0] - 1] += 1
        else:
            raise ValueError("crossing orders are not realizable")
    return RTDiagram(a, frozenset(rhombi))


def crossing_rhombi(D: RTDiagram) -> dict[frozenset, Rhombus]:
    moves = _sweep(D.a, D.rhombi)
    return {frozenset((u, v)): r for r, u, v in moves}


def inseparable_triangles(D: RTDiagram) -> list[tuple[frozenset[Rhombus], str]]:
    """Triangles cut out by three wires with no other wire through them.

    Returns the three rhombi at the crossings and ``"Delta"`` when the crossing of
    the outer-color wires lies above the middle-color wire, ``"Nabla"`` otherwise.
    """
    W = to_wiring(D)
    at = crossing_rhombi(D)
    found = []
    for u, seq in W.crossings.items():
        for t in range(len(seq) - 1):
            v, w = seq[t], seq[t + 1]
            colors = sorted([u, v, w])
            if len({u[0], v[0], w[0]}) < 3 or u != colors[0]:
                continue
            # the other two wires must also meet consecutively, next to u
            sv, sw = W.crossings[v], W.crossings[w]
            iv, iw = sv.index(u), sw.index(u)
            if abs(iv - sv.index(w)) != 1 or abs(iw - sw.index(v)) != 1:
                continue
            lo, mid, hi = sorted([u, v, w])
            r_outer = at[frozenset((lo, hi))]
            kind = "Delta" if r_outer.x[mid[0] - 1] >= mid[1] else "Nabla"
            rh = frozenset(at[frozenset(p)] for p in ((u, v), (u, w), (v, w)))
            found.append((rh, kind))
    return found


# ---------------------------------------------------------------- hexagons and flips

VEE = "vee"
WEDGE = "wedge"


@dataclass(frozen=True, order=True)
class Hexagon:
    s: Point
    i: int
    j: int
    k: int
    kind: str

    def rhombi(self) -> frozenset[Rhombus]:
        s, i, j, k = self.s, self.i, self.j, self.k
        if self.kind == VEE:
            return frozenset({Rhombus(s, i, j), Rhombus(s, j, k), Rhombus(unit_add(s, j), i, k)})
        return frozenset({Rhombus(s, i, k), Rhombus(unit_add(s, i), j, k), Rhombus(unit_add(s, k), i, j)})

    def interior(self) -> Point:
        return unit_add(self.s, self.j) if self.kind == VEE else unit_add(self.s, self.i, self.k)

    def toggled(self) -> "Hexagon":
        return Hexagon(self.s, self.i, self.j, self.k, WEDGE if self.kind == VEE else VEE)


def find_hexagons(D: RTDiagram) -> list[Hexagon]:
    R = D.rhombi
    n = len(D.a)
    out = []
    for r in R:
        s, i, j = r
        for k in range(j + 1, n + 1):
            h = Hexagon(s, i, j, k, VEE)
            if h.rhombi() <= R:
                out.append(h)
        for jj in range(i + 1, j):
            h = Hexagon(s, i, jj, j, WEDGE)
            if h.rhombi() <= R:
                out.append(h)
    return sorted(out)


def flip(D: RTDiagram, h: Hexagon) -> RTDiagram:
    old = h.rhombi()
    if not old <= D.rhombi:
        raise ValueError(f"{h} is not a hexagon of the diagram")
    return RTDiagram(D.a, (D.rhombi - old) | h.toggled().rhombi())


def minimize_to_standard(D: RTDiagram) -> list[Hexagon]:
    """Flip wedge hexagons until none is left; returns the hexagons in flip order."""
    flips = []
    cur = D
    while True:
        wedges = [h for h in find_hexagons(cur) if h.kind == WEDGE]
        if not wedges:
            break
        flips.append(wedges[0])
        cur = flip(cur, wedges[0])
    assert cur == standard_tiling(D.a), "a tiling without wedge hexagons must be the standard one"
    return flips


class ResourceLimit(RuntimeError):
    pass


def enumerate_tilings(shape, limit: int = 10**6) -> set[RTDiagram]:
    """All tilings reachable from the standard one by flips (breadth first)."""
    start = standard_tiling(shape)
    seen = {start}
    queue = deque([start])
    while queue:
        D = queue.popleft()
        for h in find_hexagons(D):
            E = flip(D, h)
            if E not in seen:
                seen.add(E)
                if len(seen) > limit:
                    raise ResourceLimit(f"more than {limit} tilings")
                queue.append(E)
    return seen


def exhaustive_tilings(shape) -> set[RTDiagram]:
    """Independent search: every vertex set of the right size that forms a tiling."""
    a = _shape_tuple(shape)
    sh = BoxShape(a)
    fixed = boundary_points(a)
    free = sorted(set(sh.points()) - fixed)
    need = 1 + sum(a) + rhombus_count(a) - len(fixed)
    out = set()
    for extra in itertools.combinations(free, need):
        V = fixed | set(extra)
        R = rhombi_from_vertices(a, V)
        if validate(a, R):
            D = RTDiagram(a, R)
            if D.vertices == V:
                out.add(D)
    return out


# ---------------------------------------------------------------- extension of point sets

def obstacle_check(X: Iterable[Point]):
    """A witness ``(i, j, k, x, x')`` with ``x_i < x'_i, x_j > x'_j, x_k < x'_k``, or None."""
    X = sorted(set(X))
    for x, y in itertools.permutations(X, 2):
        n = len(x)
        for i, j, k in itertools.combinations(range(1, n + 1), 3):
            if x[i - 1] < y[i - 1] and x[j - 1] > y[j - 1] and x[k - 1] < y[k - 1]:
                return (i, j, k, x, y)
    return None


class ObstacleError(ValueError):
    def __init__(self, witness):
        super().__init__(f"points cannot lie in a common tiling: {witness}")
        self.witness = witness


def extend_points_to_tiling(shape, X: Iterable[Point]) -> RTDiagram:
    """The lowest tiling of ``Z(a)`` whose vertex set contains ``X``.

    Wires are inserted color by color.  Inserting the ``q``-th wire of color ``k``
    splits the current tiling along a monotone path ``gamma`` through the top
    layer ``{v : v_k = q - 1}``: points on or left of ``gamma`` stay, points on or
    right of it move by ``e_k``.  Points of ``X`` with ``x_k >= q`` must move, points
    with ``x_k = q - 1`` must stay; among admissible paths the rightmost one is
    taken, which moves as little as possible.
    """
    a = _shape_tuple(shape)
    sh = BoxShape(a)
    X = set(X)
    for x in X:
        if not sh.contains(x):
            raise ValueError(f"{x} is not in B({a})")
    n = len(a)
    weights = [1] * n
    for i in range(1, n):
        weights[i] = weights[i - 1] * (a[i - 1] + 1)

    def pos(v: Point) -> int:
        return sum(w * c for w, c in zip(weights, v))

    zero = (0,) * n
    V: set[Point] = {zero}
    E: set[tuple[Point, int]] = set()
    R: set[Rhombus] = set()
    cur = [0] * n

    def fail():
        wit = obstacle_check(X)
        if wit is None:
            raise AssertionError("wire insertion got stuck on an obstacle-free set")
        raise ObstacleError(wit)

    for k in range(1, n + 1):
        for q in range(1, a[k - 1] + 1):
            top = tuple(cur)
            u0 = unit_add(zero, *([k] * (q - 1)))
            layer = {v for v in V if v[k - 1] == q - 1}
            bound: dict[int, int] = {}
            keep: list[Point] = []
            for x in X:
                y = tuple(x[:k - 1]) + (min(x[k - 1], q - 1),) + (0,) * (n - k)
                if x[k - 1] >= q or x[k - 1] == q - 1:
                    if y not in V:
                        fail()
                if x[k - 1] >= q:
                    h = sum(y)
                    bound[h] = min(bound.get(h, pos(y)), pos(y))
                elif x[k - 1] == q - 1:
                    keep.append(y)
            cand = {v for v in layer if pos(v) <= bound.get(sum(v), pos(v))}
            succ: dict[Point, list[Point]] = {}
            for v, c in E:
                w = unit_add(v, c)
                if c < k and v in cand and w in cand:
                    succ.setdefault(v, []).append(w)
            # backward reachability to the top
            reach = {top} if top in cand else set()
            for v in sorted(cand, key=sum, reverse=True):
                if any(w in reach for w in succ.get(v, ())):
                    reach.add(v)
            if u0 not in reach:
                fail()
            gamma = [u0]
            while gamma[-1] != top:
                nxt = [w for w in succ.get(gamma[-1], ()) if w in reach]
                gamma.append(max(nxt, key=pos))
            on = {sum(v): v for v in gamma}
            for y in keep:
                if pos(y) > pos(on[sum(y)]):
                    fail()
            start = set(_path_points(zero, [k] * (q - 1)))

            def side(v: Point) -> int:
                if v in start or on.get(sum(v)) == v:
                    return 0
                if v[k - 1] < q - 1:
                    return -1
                return -1 if pos(v) < pos(on[sum(v)]) else 1

            sides = {v: side(v) for v in V}
            newV = {v for v in V if sides[v] <= 0} | {unit_add(v, k) for v in V if sides[v] >= 0}
            newE: set[tuple[Point, int]] = set()
            for v, c in E:
                w = unit_add(v, c)
                if sides[v] <= 0 and sides[w] <= 0:
                    newE.add((v, c))
                if sides[v] >= 0 and sides[w] >= 0:
                    newE.add((unit_add(v, k), c))
            for v in V:
                if sides[v] == 0:
                    newE.add((v, k))
            newR: set[Rhombus] = set()
            for r in R:
                s = [sides[c] for c in r.corners()]
                if max(s) <= 0:
                    newR.add(r)
                elif min(s) >= 0:
                    newR.add(r.shifted(k))
                else:
                    raise AssertionError("a rhombus straddles the insertion path")
            for v, w in zip(gamma, gamma[1:]):
                c = next(i for i in range(1, n + 1) if w[i - 1] != v[i - 1])
                newR.add(Rhombus(v, c, k))
            V, E, R = newV, newE, newR
            cur[k - 1] += 1

    D = RTDiagram(a, frozenset(R))
    assert D.vertices == V and validate(a, D.rhombi)
    assert X <= V
    return D


# ---------------------------------------------------------------- values on normal bases

def _hexagon_exchange(values: Mapping[Point, Fraction], h: Hexagon) -> tuple[Point, Fraction]:
    """The new center and its value from the TP3 equality on the hexagon."""
    s, i, j, k = h.s, h.i, h.j, h.k
    side = max(values[unit_add(s, i, j)] + values[unit_add(s, k)],
               values[unit_add(s, i)] + values[unit_add(s, j, k)])
    new = h.toggled().interior()
    return new, side - values[h.interior()]


def transport_values(
    D: RTDiagram, values: Mapping[Point, Fraction], flips: Sequence[Hexagon]
) -> tuple[RTDiagram, dict[Point, Fraction]]:
    """Carry basis values along a sequence of flips."""
    vals = {x: as_fraction(v) for x, v in values.items()}
    if set(vals) != set(D.vertices):
        raise ValueError("values must be given on the vertices of the diagram")
    cur = D
    for h in flips:
        if not h.rhombi() <= cur.rhombi:
            raise ValueError(f"{h} is not applicable")
        new, val = _hexagon_exchange(vals, h)
        del vals[h.interior()]
        vals[new] = val
        cur = flip(cur, h)
    return cur, vals


def reconstruct_from_tiling(D: RTDiagram, values: Mapping[Point, Fraction]) -> ValuedFunction:
    """The TP-function on ``B(a)`` taking the given values on the vertices of ``D``."""
    std, vals = transport_values(D, values, minimize_to_standard(D))
    box = TruncatedBox.full(D.a)
    return reconstruct(BasisAssignment(box, vals))


def extend_function_from_subbox(
    shape,
    lo: Point,
    hi: Point,
    values: Mapping[Point, Fraction],
) -> ValuedFunction:
    """A TP-function on ``B(a)`` agreeing with the given TP-function on ``{lo <= x <= hi}``."""
    a = _shape_tuple(shape)
    n = len(a)
    sub_pts = [tuple(p) for p in itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))]
    if set(values) != set(sub_pts):
        raise ValueError("values must cover exactly the sub-box")
    dims = [i for i in range(n) if hi[i] > lo[i]]
    width = tuple(hi[i] - lo[i] for i in dims)

    def expand(z: Point) -> Point:
        out = list(lo)
        for t, i in enumerate(dims):
            out[i] += z[t]
        return tuple(out)

    if dims:
        small = TruncatedBox.full(width)
        fsmall = ValuedFunction(small, {z: values[expand(z)] for z in small.points()})
        if not verify(fsmall).ok:
            raise ValueError("the sub-box function is not TP")
        sub_tiling = standard_tiling(width)
        sub_rhombi = {Rhombus(expand(r.x), dims[r.i - 1] + 1, dims[r.j - 1] + 1) for r in sub_tiling.rhombi}
        sub_vertices = {expand(v) for v in sub_tiling.vertices}
    else:
        sub_rhombi, sub_vertices = set(), {tuple(lo)}
    rim = {expand(v) for v in boundary_points(width)} if dims else {tuple(lo)}
    D = extend_points_to_tiling(a, rim)
    inside = {r for r in D.rhombi if all(all(l <= c <= h for c, l, h in zip(p, lo, hi)) for p in r.corners())}
    spliced = RTDiagram(a, frozenset((D.rhombi - inside) | sub_rhombi))
    assert len(inside) == len(sub_rhombi) and validate(a, spliced.rhombi), "sub-zonogon splice failed"
    assert sub_vertices <= spliced.vertices
    basis_vals = {v: (as_fraction(values[v]) if v in sub_vertices else Fraction(0)) for v in spliced.vertices}
    f = reconstruct_from_tiling(spliced, basis_vals)
    assert all(f[x] == as_fraction(values[x]) for x in sub_pts)
    return f


# ---------------------------------------------------------------- drawing

def to_svg(D: RTDiagram, labels: Optional[Mapping[Point, object]] = None, unit: float = 40.0) -> str:
    n = len(D.a)
    xi = [(math.cos(math.pi * (1 - i / (n + 1))), math.sin(math.pi * (1 - i / (n + 1)))) for i in range(1, n + 1)]

    def xy(v: Point) -> tuple[float, float]:
        return (sum(c * d[0] for c, d in zip(v, xi)) * unit, -sum(c * d[1] for c, d in zip(v, xi)) * unit)

    pts = [xy(v) for v in D.vertices]
    pad = unit
    minx, maxx = min(p[0] for p in pts) - pad, max(p[0] for p in pts) + pad
    miny, maxy = min(p[1] for p in pts) - pad, max(p[1] for p in pts) + pad
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'viewBox="{minx:.2f} {miny:.2f} {maxx - minx:.2f} {maxy - miny:.2f}">']
    for r in sorted(D.rhombi):
        x, xi_, xj, xij = (xy(c) for c in r.corners())
        poly = " ".join(f"{p[0]:.2f},{p[1]:.2f}" for p in (x, xi_, xij, xj))
        out.append(f'<polygon points="{poly}" fill="none" stroke="black" stroke-width="1"/>')
    for v in sorted(D.vertices):
        px, py = xy(v)
        out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2"/>')
        if labels is not None and v in labels:
            out.append(f'<text x="{px + 3:.2f}" y="{py - 3:.2f}" font-size="9">{labels[v]}</text>')
    out.append("</svg>")
    return "\n".join(out)
