"""Reducing general boxes to Boolean cubes, and lowering the bottom of a truncation.

A box ``B(a)`` sits inside the cube on ``[N]``, ``N = |a|``, by filling each block
``L_i`` from its left end.  Intervals of ``[N]`` that are not images of points carry
an "excess" that a big constant ``M`` penalizes in the lifted basis values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Mapping, Optional

from .domain import BoxShape, Point, TruncatedBox, fints, is_fint, standard_basis
from .tp_core import BasisAssignment, ValuedFunction, as_fraction, reconstruct, restrict, verify


@dataclass(frozen=True)
class BlockStructure:
    shape: BoxShape

    @property
    def N(self) -> int:
        return self.shape.total

    def block(self, i: int) -> range:
        """``L_i`` as a range of elements of ``[N]``."""
        start = sum(self.shape.a[: i - 1])
        return range(start + 1, start + self.shape.a[i - 1] + 1)

    def block_of(self, e: int) -> int:
        acc = 0
        for i, c in enumerate(self.shape.a, start=1):
            acc += c
            if e <= acc:
                return i
        raise ValueError(f"{e} is outside [1..{self.N}]")


def embed_point(blocks: BlockStructure, x: Point) -> frozenset[int]:
    if not blocks.shape.contains(x):
        raise ValueError(f"{x} is not in the box")
    out: set[int] = set()
    for i, xi in enumerate(x, start=1):
        out.update(blocks.block(i)[:xi])
    return frozenset(out)


def project_set(blocks: BlockStructure, S) -> Point:
    counts = [0] * blocks.shape.n
    for e in S:
        counts[blocks.block_of(e) - 1] += 1
    return tuple(counts)


def set_to_cube_point(S, N: int) -> Point:
    S = set(S)
    return tuple(1 if e in S else 0 for e in range(1, N + 1))


def cube_point_to_set(y: Point) -> frozenset[int]:
    return frozenset(i + 1 for i, v in enumerate(y) if v)


@dataclass(frozen=True)
class QuasiInterval:
    ground: frozenset[int]
    head: int
    shift: int

    @property
    def excess(self) -> int:
        return self.head * self.shift


def quasi_intervals_of_fint(blocks: BlockStructure, x: Point) -> list[QuasiInterval]:
    if not is_fint(blocks.shape, x):
        raise ValueError(f"{x} is not a fint")
    c = next(i for i, v in enumerate(x, start=1) if v)
    base = embed_point(blocks, x)
    head = frozenset(blocks.block(c)[: x[c - 1]])
    tail = base - head
    out = []
    for p in range(blocks.shape.a[c - 1] - x[c - 1] + 1):
        out.append(QuasiInterval(frozenset(e + p for e in head) | tail, x[c - 1], p))
    return out


def interval_excess(blocks: BlockStructure, c: int, d: int) -> tuple[int, int, int]:
    """``(head, shift, excess)`` of the interval ``[c..d]`` of ``[N]``."""
    b = blocks.block_of(c)
    L = blocks.block(b)
    head = min(d, L[-1]) - c + 1
    shift = c - L[0]
    return head, shift, head * shift


def big_m(values, N: int) -> Fraction:
    """An exact integer that dominates any four-term combination of the given values."""
    scale = max((abs(as_fraction(v)) for v in values), default=Fraction(0))
    return Fraction(1 + max(4, N + 1) * max(1, ceil(scale)))


def lift_box_basis(
    shape: BoxShape,
    f0: Mapping[Point, Fraction],
    m_prime: Optional[int] = None,
    M: Optional[Fraction] = None,
) -> tuple[BasisAssignment, Fraction]:
    """Interval values ``g(I) = f0(#I) + M * excess(I)`` on the cube ``C_0^{m'}(N)``."""
    blocks = BlockStructure(shape)
    N = blocks.N
    if m_prime is None:
        m_prime = N
    wanted = {x for p in range(1, m_prime + 1) for x in fints(shape, p)}
    got = {x for x in f0 if any(x)}
    if got != wanted:
        raise ValueError("f0 must be keyed by the nonzero fints of sizes 1..m'")
    if M is None:
        M = big_m((f0[x] for x in wanted), N)
    cube = TruncatedBox.cube(N, 0, m_prime)
    values: dict[Point, Fraction] = {}
    for c in range(1, N + 1):
        for d in range(c, min(N, c + m_prime - 1) + 1):
            I = range(c, d + 1)
            _, _, eps = interval_excess(blocks, c, d)
            values[set_to_cube_point(I, N)] = as_fraction(f0[project_set(blocks, I)]) + M * eps
    return BasisAssignment(cube, values), M


def pull_back(F: ValuedFunction, shape: BoxShape, m_prime: Optional[int] = None) -> ValuedFunction:
    """``x -> F([x])`` on ``B_0^{m'}(a)``."""
    blocks = BlockStructure(shape)
    if m_prime is None:
        m_prime = F.box.m_prime
    box = TruncatedBox(shape, 0, m_prime)
    return ValuedFunction(box, {x: F[set_to_cube_point(embed_point(blocks, x), blocks.N)] for x in box.points()})


def reconstruct_via_cube(
    g: BasisAssignment, M: Optional[Fraction] = None
) -> tuple[ValuedFunction, Fraction]:
    """Reconstruct on a box with ``m = 0`` by lifting to the cube and pulling back."""
    if g.box.m != 0:
        raise ValueError("the cube route needs m = 0")
    shape = g.box.shape
    f0 = {x: v for x, v in g.items() if any(x)}
    lifted, M = lift_box_basis(shape, f0, g.box.m_prime, M)
    F = reconstruct(lifted)
    f = pull_back(F, shape, g.box.m_prime)
    # the zero point is in no relation; keep the prescribed value
    values = dict(f.values)
    values[shape.zero] = g[shape.zero]
    return ValuedFunction(f.box, values), M


def insertion_point(shape: BoxShape, y: Point) -> int:
    return next(p for p in range(1, shape.n + 1) if y[p - 1] < shape.a[p - 1])


def lift_truncation_step(
    f0: BasisAssignment, M: Optional[Fraction] = None
) -> tuple[BasisAssignment, Fraction]:
    """Basis values on ``B_{m-1}^{m'}(a)`` whose reconstruction agrees with ``f0`` above ``m - 1``."""
    box = f0.box
    if box.m == 0:
        raise ValueError("already at m = 0")
    shape = box.shape
    lower = TruncatedBox(shape, box.m - 1, box.m_prime)
    if M is None:
        M = big_m(f0.values.values(), shape.total)
    values: dict[Point, Fraction] = {}
    for y in standard_basis(lower):
        if sum(y) >= box.m:
            values[y] = f0[y]
        elif not any(y):
            values[y] = Fraction(0)
        else:
            p = insertion_point(shape, y)
            up = tuple(v + (1 if i == p - 1 else 0) for i, v in enumerate(y))
            t = sum(y[p:])
            if up not in f0:
                raise AssertionError(f"{y} lifts to {up}, which is not a basis point above")
            values[y] = f0[up] + M * t
    return BasisAssignment(lower, values), M


def lift_to_bottom(f0: BasisAssignment, M: Optional[Fraction] = None) -> list[tuple[BasisAssignment, Fraction]]:
    """Apply :func:`lift_truncation_step` until ``m = 0``; returns every stage."""
    stages = []
    g = f0
    while g.box.m > 0:
        g, used = lift_truncation_step(g, M)
        stages.append((g, used))
    return stages


def restrict_to_box(f: ValuedFunction, box: TruncatedBox) -> ValuedFunction:
    return ValuedFunction(box, restrict(f, box.points()))


def extend_to_entire_box(
    f: ValuedFunction, defaults: Optional[Mapping[Point, Fraction]] = None
) -> ValuedFunction:
    """A TP-function on all of ``B(a)`` agreeing with ``f`` on its truncated box.

    New basis points take values from ``defaults`` (0 when absent).  Upward
    extension is done directly; downward extension goes through the complement.
    """
    if not verify(f).ok:
        raise ValueError("f is not a TP-function")
    defaults = dict(defaults or {})
    box = f.box
    shape = box.shape
    N = shape.total

    def up(h: ValuedFunction) -> ValuedFunction:
        target = TruncatedBox(shape, h.box.m, N)
        vals = {x: (h[x] if h.box.contains(x) else as_fraction(defaults.get(x, 0))) for x in standard_basis(target)}
        return reconstruct(BasisAssignment(target, vals))

    def complement(h: ValuedFunction) -> ValuedFunction:
        comp = TruncatedBox(shape, N - h.box.m_prime, N - h.box.m)
        return ValuedFunction(comp, {tuple(c - v for c, v in zip(shape.a, x)): val for x, val in h.items()})

    g = up(f)
    # defaults for the second pass are given in original coordinates
    star = complement(g)
    target = TruncatedBox(shape, star.box.m, N)
    vals = {}
    for y in standard_basis(target):
        if star.box.contains(y):
            vals[y] = star[y]
        else:
            vals[y] = as_fraction(defaults.get(tuple(c - v for c, v in zip(shape.a, y)), 0))
    h = reconstruct(BasisAssignment(target, vals))
    out = complement(h)
    assert all(out[x] == f[x] for x in box.points())
    return out


def quasi_interval_of_set(blocks: BlockStructure, Q) -> Optional[QuasiInterval]:
    """Read ``Q`` as a shifted fint image, or return None when it is not one."""
    Q = frozenset(Q)
    if not Q:
        return None
    c = blocks.block_of(min(Q))
    L = blocks.block(c)
    head = [e for e in Q if e in L]
    shift = min(Q) - L[0]
    x = project_set(blocks, Q)
    if not is_fint(blocks.shape, x):
        return None
    cand = QuasiInterval(Q, len(head), shift)
    expected = frozenset(e + shift for e in L[: len(head)]) | (embed_point(blocks, x) - frozenset(L))
    if expected != Q or shift > blocks.shape.a[c - 1] - len(head):
        return None
    return cand
