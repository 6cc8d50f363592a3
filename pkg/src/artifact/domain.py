"""Lattice points, integer boxes and their truncations.

Points are plain tuples of non-negative ints; coordinate indices exposed in the
public API are 1-based (``i`` in ``1..n``), matching how relations are written.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Optional

Point = tuple[int, ...]


def size(x: Point) -> int:
    return sum(x)


def unit_add(x: Point, *indices: int) -> Point:
    """Return ``x + 1_{i1} + 1_{i2} + ...`` for 1-based indices (repeats allowed)."""
    y = list(x)
    for i in indices:
        if i:
            y[i - 1] += 1
    return tuple(y)


def unit_sub(x: Point, *indices: int) -> Point:
    y = list(x)
    for i in indices:
        if i:
            y[i - 1] -= 1
    return tuple(y)


def support(x: Point) -> tuple[int, ...]:
    return tuple(i + 1 for i, v in enumerate(x) if v)


def first_last(x: Point) -> tuple[int, int]:
    """``(c(x), d(x))``: first and last index of the support."""
    s = support(x)
    if not s:
        raise ValueError("the zero point has no support")
    return s[0], s[-1]


@dataclass(frozen=True)
class BoxShape:
    a: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        if not self.a:
            raise ValueError("a box needs at least one coordinate")
        if any(v < 1 for v in self.a):
            raise ValueError(f"capacities must be positive, got {self.a}")

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def total(self) -> int:
        """``|a|``."""
        return sum(self.a)

    def contains(self, x: Point) -> bool:
        return len(x) == self.n and all(0 <= v <= c for v, c in zip(x, self.a))

    def points(self) -> Iterator[Point]:
        return itertools.product(*(range(c + 1) for c in self.a))

    @property
    def top(self) -> Point:
        return self.a

    @property
    def zero(self) -> Point:
        return (0,) * self.n


@dataclass(frozen=True)
class TruncatedBox:
    """Points ``0 <= x <= a`` with ``m <= |x| <= m_prime``."""

    shape: BoxShape
    m: int
    m_prime: int

    def __post_init__(self) -> None:
        if not 0 <= self.m <= self.m_prime <= self.shape.total:
            raise ValueError(
                f"need 0 <= m <= m' <= |a|, got m={self.m}, m'={self.m_prime}, |a|={self.shape.total}"
            )

    @classmethod
    def full(cls, a) -> "TruncatedBox":
        shape = a if isinstance(a, BoxShape) else BoxShape(tuple(a))
        return cls(shape, 0, shape.total)

    @classmethod
    def cube(cls, n: int, m: int = 0, m_prime: Optional[int] = None) -> "TruncatedBox":
        return cls(BoxShape((1,) * n), m, n if m_prime is None else m_prime)

    @property
    def a(self) -> tuple[int, ...]:
        return self.shape.a

    @property
    def n(self) -> int:
        return self.shape.n

    def contains(self, x: Point) -> bool:
        return self.shape.contains(x) and self.m <= sum(x) <= self.m_prime

    @cached_property
    def point_list(self) -> tuple[Point, ...]:
        return tuple(x for x in self.shape.points() if self.m <= sum(x) <= self.m_prime)

    def points(self) -> tuple[Point, ...]:
        return self.point_list

    def layer(self, p: int) -> list[Point]:
        return [x for x in self.point_list if sum(x) == p]

    def to_json(self) -> dict:
        return {"a": list(self.a), "m": self.m, "m_prime": self.m_prime}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedBox":
        return cls(BoxShape(tuple(data["a"])), int(data["m"]), int(data["m_prime"]))


class Kind(enum.Enum):
    FINT = "fint"
    SINT = "sint"
    OTHER = "other"


@dataclass(frozen=True)
class PointClass:
    kind: Kind
    parts: Optional[tuple[Point, Point]] = None


def is_fint(shape: BoxShape, x: Point) -> bool:
    if not any(x):
        return False
    c, d = first_last(x)
    return all(x[i - 1] == shape.a[i - 1] for i in range(c + 1, d))


def sint_decompositions(shape: BoxShape, x: Point) -> list[tuple[Point, Point]]:
    """All splittings ``x = x' + x''`` meeting the sint conditions (ignores whether x is a fint)."""
    n = shape.n
    out = []
    for d1 in range(1, n + 1):
        if x[d1 - 1] == 0:
            continue
        if any(x[i - 1] != shape.a[i - 1] for i in range(1, d1)):
            break
        head = x[:d1] + (0,) * (n - d1)
        tail = (0,) * d1 + x[d1:]
        if any(tail) and is_fint(shape, head) and is_fint(shape, tail):
            out.append((head, tail))
    return out


def classify_point(shape: BoxShape, x: Point) -> PointClass:
    if not shape.contains(x):
        raise ValueError(f"{x} is not in B({shape.a})")
    if not any(x):
        raise ValueError("the zero point is not classified")
    if is_fint(shape, x):
        return PointClass(Kind.FINT)
    decs = sint_decompositions(shape, x)
    if decs:
        # several splittings can exist when a saturated prefix is followed directly
        # by the second part; the one with the longest first part is canonical
        return PointClass(Kind.SINT, decs[-1])
    return PointClass(Kind.OTHER)


@dataclass(frozen=True)
class Landmarks:
    c: int
    d: int
    alpha: Optional[int]
    beta: Optional[int]
    gamma: Optional[int]
    eta: Optional[int]


def landmarks_and_eta(shape: BoxShape, x: Point) -> Landmarks:
    if not any(x):
        raise ValueError("landmarks are undefined for the zero point")
    a = shape.a
    c, d = first_last(x)
    alpha = next((i for i in range(d - 1, 0, -1) if x[i - 1] < a[i - 1]), None)
    beta = gamma = eta = None
    if alpha is not None:
        beta = next((i for i in range(alpha - 1, 0, -1) if x[i - 1] > 0), None)
    if beta is not None:
        gamma = next((i for i in range(beta - 1, 0, -1) if x[i - 1] < a[i - 1]), None)
        eta = shape.total * (beta + d) + x[beta - 1] + x[d - 1]
    return Landmarks(c, d, alpha, beta, gamma, eta)


@lru_cache(maxsize=None)
def _fints_by_layer(shape: BoxShape) -> dict[int, frozenset[Point]]:
    out: dict[int, set[Point]] = {}
    for x in shape.points():
        if is_fint(shape, x):
            out.setdefault(sum(x), set()).add(x)
    return {k: frozenset(v) for k, v in out.items()}


def fints(shape: BoxShape, p: Optional[int] = None) -> frozenset[Point]:
    """``Int(a; p)``, or all fints when ``p`` is None."""
    layers = _fints_by_layer(shape)
    if p is None:
        return frozenset().union(*layers.values())
    return layers.get(p, frozenset())


def sints(shape: BoxShape, p: int) -> frozenset[Point]:
    return frozenset(
        x for x in shape.points()
        if sum(x) == p and p > 0 and classify_point(shape, x).kind is Kind.SINT
    )


@lru_cache(maxsize=None)
def standard_basis(box: TruncatedBox) -> frozenset[Point]:
    basis: set[Point] = set(sints(box.shape, box.m)) if box.m > 0 else set()
    for p in range(max(box.m, 1), box.m_prime + 1):
        basis |= fints(box.shape, p)
    if box.m == 0:
        basis.add(box.shape.zero)
    return frozenset(basis)


@dataclass(frozen=True)
class Cortege3:
    x: Point
    i: int
    j: int
    k: int

    def points(self) -> tuple[Point, ...]:
        x, i, j, k = self.x, self.i, self.j, self.k
        return (unit_add(x, i, k), unit_add(x, j), unit_add(x, i, j),
                unit_add(x, k), unit_add(x, i), unit_add(x, j, k))


@dataclass(frozen=True)
class Cortege4:
    x: Point
    i: int
    j: int
    k: int
    l: int

    def points(self) -> tuple[Point, ...]:
        x, i, j, k, l = self.x, self.i, self.j, self.k, self.l
        return (unit_add(x, i, k), unit_add(x, j, l), unit_add(x, i, j),
                unit_add(x, k, l), unit_add(x, i, l), unit_add(x, j, k))


@lru_cache(maxsize=None)
def corteges(box: TruncatedBox) -> tuple[tuple[Cortege3, ...], tuple[Cortege4, ...]]:
    n = box.n
    c3: list[Cortege3] = []
    c4: list[Cortege4] = []
    for x in box.shape.points():
        s = sum(x)
        if box.m - 1 <= s <= box.m_prime - 2:
            for i, j, k in itertools.combinations(range(1, n + 1), 3):
                cand = Cortege3(x, i, j, k)
                if all(box.contains(y) for y in cand.points()):
                    c3.append(cand)
        if box.m <= s + 2 <= box.m_prime:
            for i, j, k, l in itertools.combinations(range(1, n + 1), 4):
                cand4 = Cortege4(x, i, j, k, l)
                if all(box.contains(y) for y in cand4.points()):
                    c4.append(cand4)
    return tuple(c3), tuple(c4)


def enumerate_corteges(box: TruncatedBox) -> tuple[Iterator[Cortege3], Iterator[Cortege4]]:
    c3, c4 = corteges(box)
    return iter(c3), iter(c4)
