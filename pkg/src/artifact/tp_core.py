"""Storage, verification and reconstruction of tropical Plücker (TP) functions."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Callable, Iterable, Mapping, Sequence, Union

from .domain import (
    BoxShape,
    Cortege3,
    Cortege4,
    Point,
    TruncatedBox,
    corteges,
    is_fint,
    landmarks_and_eta,
    standard_basis,
    unit_add,
    unit_sub,
)

Number = Union[int, Fraction]


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, float):
        raise TypeError("floating point values are not accepted; use int, Fraction or 'p/q'")
    return Fraction(v)


class _PointMap:
    """Immutable exact-rational map over a fixed set of points."""

    __slots__ = ("box", "_values")

    def __init__(self, box: TruncatedBox, values: Mapping[Point, Number]):
        self.box = box
        self._values = MappingProxyType({tuple(k): as_fraction(v) for k, v in values.items()})

    @property
    def values(self) -> Mapping[Point, Fraction]:
        return self._values

    def __getitem__(self, x: Point) -> Fraction:
        return self._values[x]

    def __contains__(self, x) -> bool:
        return x in self._values

    def __iter__(self):
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def items(self):
        return self._values.items()

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and self.box == other.box and dict(self._values) == dict(other._values)

    def __hash__(self):
        return hash((self.box, frozenset(self._values.items())))

    def to_json(self) -> dict:
        return {
            "box": self.box.to_json(),
            "values": [{"point": list(p), "value": str(v)} for p, v in sorted(self._values.items())],
        }

    @classmethod
    def from_json(cls, data: dict):
        box = TruncatedBox.from_json(data["box"])
        return cls(box, {tuple(e["point"]): Fraction(str(e["value"])) for e in data["values"]})


class ValuedFunction(_PointMap):
    """A function on every point of a truncated box."""

    def __init__(self, box: TruncatedBox, values: Mapping[Point, Number]):
        super().__init__(box, values)
        if set(self._values) != set(box.points()):
            raise ValueError("a function must be defined on exactly the points of its box")

    def __repr__(self) -> str:
        return f"ValuedFunction(box={self.box}, {len(self)} values)"


class BasisAssignment(_PointMap):
    """Values on the standard basis. When ``m == 0`` the zero point may be omitted (it then gets 0)."""

    def __init__(self, box: TruncatedBox, values: Mapping[Point, Number]):
        vals = dict(values)
        zero = box.shape.zero
        if box.m == 0 and zero not in vals:
            vals[zero] = 0
        super().__init__(box, vals)
        basis = standard_basis(box)
        if set(self._values) != basis:
            missing = sorted(basis - set(self._values))
            extra = sorted(set(self._values) - basis)
            raise ValueError(f"key set is not the standard basis (missing {missing}, extra {extra})")

    def __repr__(self) -> str:
        return f"BasisAssignment(box={self.box}, {len(self)} values)"


@dataclass(frozen=True)
class Violation:
    kind: str
    cortege: Union[Cortege3, Cortege4]
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class ViolationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self) -> int:
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def to_json(self) -> list[dict]:
        out = []
        for v in self.violations:
            c = v.cortege
            idx = [c.i, c.j, c.k] + ([c.l] if isinstance(c, Cortege4) else [])
            out.append({"kind": v.kind, "x": list(c.x), "indices": idx, "lhs": str(v.lhs), "rhs": str(v.rhs)})
        return out


def relation_sides(f: Mapping[Point, Fraction], c: Union[Cortege3, Cortege4]) -> tuple[Fraction, Fraction]:
    """``(lhs, rhs)`` of the TP3 or TP4 relation attached to a cortege."""
    p = c.points()
    lhs = f[p[0]] + f[p[1]]
    rhs = max(f[p[2]] + f[p[3]], f[p[4]] + f[p[5]])
    return lhs, rhs


def verify(f: _PointMap, kinds: Iterable[str] = ("TP3", "TP4")) -> ViolationReport:
    kinds = set(kinds)
    c3, c4 = corteges(f.box)
    bad = []
    for kind, stream in (("TP3", c3), ("TP4", c4)):
        if kind not in kinds:
            continue
        for c in stream:
            lhs, rhs = relation_sides(f, c)
            if lhs != rhs:
                bad.append(Violation(kind, c, lhs, rhs))
    return ViolationReport(tuple(bad))


# A step computes f(target) = max(f(c) + f(d), f(e) + f(f_)) - f(b).
_Step = tuple[Point, Point, Point, Point, Point, Point]


@lru_cache(maxsize=None)
def reconstruction_plan(box: TruncatedBox) -> tuple[_Step, ...]:
    """Evaluation order for the non-basis points: layer by layer, then by ascending eta."""
    shape = box.shape
    basis = standard_basis(box)
    steps: list[_Step] = []
    for p in range(box.m, box.m_prime + 1):
        todo = [x for x in box.layer(p) if x not in basis]
        todo.sort(key=lambda x: (landmarks_and_eta(shape, x).eta, x))
        for x in todo:
            lm = landmarks_and_eta(shape, x)
            if p == box.m:
                i, j, k, l = lm.gamma, lm.beta, lm.alpha, lm.d
                base = unit_sub(x, j, l)
                steps.append((x, unit_add(base, i, k), unit_add(base, i, j), unit_add(base, k, l),
                              unit_add(base, i, l), unit_add(base, j, k)))
            else:
                i, j, k = lm.beta, lm.alpha, lm.d
                base = unit_sub(x, i, k)
                steps.append((x, unit_add(base, j), unit_add(base, i, j), unit_add(base, k),
                              unit_add(base, i), unit_add(base, j, k)))
    return tuple(steps)


def reconstruct(g: BasisAssignment, check: bool = True) -> ValuedFunction:
    """The unique TP-function on ``g.box`` whose restriction to the standard basis is ``g``."""
    values = dict(g.values)
    for x, b, c, d, e, f_ in reconstruction_plan(g.box):
        try:
            values[x] = max(values[c] + values[d], values[e] + values[f_]) - values[b]
        except KeyError as exc:
            raise AssertionError(f"evaluation order broken at {x}: {exc} not yet known") from exc
    f = ValuedFunction(g.box, values)
    if check:
        report = verify(f)
        assert report.ok, f"reconstruction is not TP: {report.violations[:3]}"
    return f


def restrict(f: _PointMap, points: Iterable[Point]) -> dict[Point, Fraction]:
    out = {}
    for x in points:
        if x not in f:
            raise ValueError(f"{x} is outside the domain")
        out[x] = f[x]
    return out


def restrict_to_basis(f: ValuedFunction) -> BasisAssignment:
    return BasisAssignment(f.box, restrict(f, standard_basis(f.box)))


def _table(phi) -> Callable[[int], Fraction]:
    if callable(phi):
        return lambda t: as_fraction(phi(t))
    if isinstance(phi, Mapping):
        return lambda t: as_fraction(phi[t])
    if isinstance(phi, (int, Fraction)):
        return lambda t: as_fraction(phi)
    seq = list(phi)
    return lambda t: as_fraction(seq[t])


def quasi_separable(shape: BoxShape, m: int, m_prime: int, phi: Sequence) -> ValuedFunction:
    """``f(x) = phi_0(|x|) + phi_1(x_1) + ... + phi_n(x_n)``.

    Each ``phi_i`` may be a callable, a mapping, a sequence indexed by the argument
    or a constant.
    """
    if len(phi) != shape.n + 1:
        raise ValueError(f"need n+1 = {shape.n + 1} one-variable functions, got {len(phi)}")
    box = TruncatedBox(shape, m, m_prime)
    tables = [_table(p) for p in phi]
    try:
        values = {
            x: tables[0](sum(x)) + sum((tables[i + 1](x[i]) for i in range(shape.n)), Fraction(0))
            for x in box.points()
        }
    except (IndexError, KeyError) as exc:
        raise ValueError(f"a one-variable function is not defined on its range: {exc}") from exc
    return ValuedFunction(box, values)


def complementary(f: ValuedFunction) -> ValuedFunction:
    """``f*(x) = f(a - x)`` on ``B_{|a|-m'}^{|a|-m}(a)``."""
    box = f.box
    a = box.a
    comp = TruncatedBox(box.shape, box.shape.total - box.m_prime, box.shape.total - box.m)
    return ValuedFunction(comp, {tuple(c - v for c, v in zip(a, x)): val for x, val in f.items()})


def add_functions(f: ValuedFunction, g: ValuedFunction) -> ValuedFunction:
    if f.box != g.box:
        raise ValueError("boxes differ")
    return ValuedFunction(f.box, {x: f[x] + g[x] for x in f})


def random_basis_assignment(
    box: TruncatedBox,
    rng: random.Random,
    lo: int = -9,
    hi: int = 9,
    rational: bool = False,
) -> BasisAssignment:
    """Random integer (or small-denominator rational) values on the standard basis; zero point gets 0."""
    zero = box.shape.zero
    values = {}
    for x in sorted(standard_basis(box)):
        if x == zero:
            values[x] = Fraction(0)
        elif rational:
            values[x] = Fraction(rng.randint(lo * 6, hi * 6), rng.choice((1, 2, 3, 6)))
        else:
            values[x] = Fraction(rng.randint(lo, hi))
    return BasisAssignment(box, values)


def is_integral(f: _PointMap) -> bool:
    return all(v.denominator == 1 for _, v in f.items())


def fint_count_by_ranges(shape: BoxShape) -> int:
    """Count nonzero fints directly from their (c, d, x_c, x_d) description."""
    a = shape.a
    total = 0
    for c in range(1, shape.n + 1):
        total += a[c - 1]  # c == d
        for d in range(c + 1, shape.n + 1):
            total += a[c - 1] * a[d - 1]
    return total


__all__ = [
    "BasisAssignment",
    "ValuedFunction",
    "Violation",
    "ViolationReport",
    "add_functions",
    "as_fraction",
    "complementary",
    "fint_count_by_ranges",
    "is_fint",
    "is_integral",
    "quasi_separable",
    "random_basis_assignment",
    "reconstruct",
    "reconstruction_plan",
    "relation_sides",
    "restrict",
    "restrict_to_basis",
    "verify",
]
