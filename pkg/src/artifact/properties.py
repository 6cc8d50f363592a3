"""Submodularity, skew-submodularity and discrete concavity checks.

Each checker scans every local configuration ``(x, indices)`` whose points lie in
the function's domain and, when a scope is given, in the scope as well.  A scope
is any collection of points (typically a basis) or an :class:`RTDiagram`.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .domain import BoxShape, Point, fints, unit_add
from .tiling import RTDiagram

Scope = Union[None, Iterable[Point], RTDiagram]


@dataclass(frozen=True)
class InequalityViolation:
    kind: str
    x: Point
    indices: tuple[int, ...]
    big: Fraction
    small: Fraction

    def to_json(self) -> dict:
        return {"kind": self.kind, "x": list(self.x), "indices": list(self.indices),
                "lhs": str(self.big), "rhs": str(self.small)}


def _scope_points(f: Mapping[Point, Fraction], scope: Scope) -> set[Point]:
    if scope is None:
        return set(f)
    pts = scope.vertices if isinstance(scope, RTDiagram) else set(scope)
    return set(pts) & set(f)


def _anchors(pts: set[Point]) -> list[Point]:
    """Candidate base points: every member minus a nonnegative vector of size at most 2."""
    n = len(next(iter(pts)))
    drops = [(0,) * n] + [tuple(1 if t == i else 0 for t in range(n)) for i in range(n)]
    drops += [tuple(a + b for a, b in zip(u, w)) for u, w in itertools.combinations_with_replacement(drops[1:], 2)]
    out = set()
    for p in pts:
        for d in drops:
            x = tuple(a - b for a, b in zip(p, d))
            if min(x) >= 0:
                out.add(x)
    return sorted(out)


def _check(f, scope, kind: str, configs) -> list[InequalityViolation]:
    pts = _scope_points(f, scope)
    if not pts:
        return []
    bad = []
    n = len(next(iter(pts)))
    for x in _anchors(pts):
        for idx, big_pts, small_pts in configs(x, n):
            if all(p in pts for p in big_pts + small_pts):
                big = f[big_pts[0]] + f[big_pts[1]]
                small = f[small_pts[0]] + f[small_pts[1]]
                if big < small:
                    bad.append(InequalityViolation(kind, x, idx, big, small))
    return sorted(set(bad), key=lambda v: (v.x, v.indices))


def _sub_configs(x, n):
    for i, j in itertools.combinations(range(1, n + 1), 2):
        yield (i, j), (unit_add(x, i), unit_add(x, j)), (x, unit_add(x, i, j))


def check_submodular(f: Mapping[Point, Fraction], scope: Scope = None) -> list[InequalityViolation]:
    """``f(x+1_i) + f(x+1_j) >= f(x) + f(x+1_i+1_j)``."""
    return _check(f, scope, "submodular", _sub_configs)


def check_supermodular(f: Mapping[Point, Fraction], scope: Scope = None) -> list[InequalityViolation]:
    """``f(x) + f(x+1_i+1_j) >= f(x+1_i) + f(x+1_j)``."""
    def configs(x, n):
        for idx, big, small in _sub_configs(x, n):
            yield idx, small, big
    return _check(f, scope, "supermodular", configs)


def check_skew_submodular(f: Mapping[Point, Fraction], scope: Scope = None) -> list[InequalityViolation]:
    """``f(x+1_i+1_j) + f(x+1_j) >= f(x+1_i) + f(x+2*1_j)`` for ordered ``i != j``."""
    def configs(x, n):
        for i, j in itertools.permutations(range(1, n + 1), 2):
            yield (i, j), (unit_add(x, i, j), unit_add(x, j)), (unit_add(x, i), unit_add(x, j, j))
    return _check(f, scope, "skew", configs)


def check_slope(f: Mapping[Point, Fraction], scope: Scope = None) -> list[InequalityViolation]:
    """``f(x+1_i+1_j) + f(x+1_j+1_k) >= f(x+1_i+1_k) + f(x+2*1_j)`` for distinct i, j, k."""
    def configs(x, n):
        for i, j, k in itertools.permutations(range(1, n + 1), 3):
            yield (i, j, k), (unit_add(x, i, j), unit_add(x, j, k)), (unit_add(x, i, k), unit_add(x, j, j))
    return _check(f, scope, "slope", configs)


def check_dctp(f: Mapping[Point, Fraction], scope: Scope = None) -> list[InequalityViolation]:
    """The unified inequality over ``i, j, k in {0, 1, ..., n}`` with ``1_0 = 0``."""
    def configs(x, n):
        for i, j, k in itertools.product(range(n + 1), repeat=3):
            yield (i, j, k), (unit_add(x, i, j), unit_add(x, j, k)), (unit_add(x, j, j), unit_add(x, i, k))
    return _check(f, scope, "dctp", configs)


# ---------------------------------------------------------------- sampling

def repair_basis_values(
    values: Mapping[Point, Fraction],
    submodular: bool = True,
    skew: bool = False,
) -> dict[Point, Fraction]:
    """Lower basis values, layer by layer, until the requested inequalities hold on the basis.

    Every inequality checked here has a unique "top" point (the one with the
    largest size, or the more concentrated of two same-size points), and only
    that point is ever lowered, so earlier repairs stay valid.
    """
    vals = {x: Fraction(v) for x, v in values.items()}
    pts = set(vals)
    n = len(next(iter(pts)))
    by_layer: dict[int, list[Point]] = {}
    for x in pts:
        by_layer.setdefault(sum(x), []).append(x)
    for h in sorted(by_layer):
        changed = True
        rounds = 0
        while changed:
            changed = False
            rounds += 1
            assert rounds <= len(pts) + 2, "repair did not settle"
            for v in sorted(by_layer[h]):
                cap = vals[v]
                if submodular:
                    for i, j in itertools.combinations(range(1, n + 1), 2):
                        if v[i - 1] and v[j - 1]:
                            x = tuple(c - (1 if t in (i - 1, j - 1) else 0) for t, c in enumerate(v))
                            quad = (unit_add(x, i), unit_add(x, j), x)
                            if all(p in pts for p in quad):
                                cap = min(cap, vals[quad[0]] + vals[quad[1]] - vals[quad[2]])
                if skew:
                    for i, j in itertools.permutations(range(1, n + 1), 2):
                        if v[j - 1] >= 2:
                            x = tuple(c - (2 if t == j - 1 else 0) for t, c in enumerate(v))
                            quad = (unit_add(x, i, j), unit_add(x, j), unit_add(x, i))
                            if all(p in pts for p in quad):
                                cap = min(cap, vals[quad[0]] + vals[quad[1]] - vals[quad[2]])
                if cap < vals[v]:
                    vals[v] = cap
                    changed = True
    return vals


def sample_basis_values(
    shape: BoxShape,
    rng: random.Random,
    m_prime: Optional[int] = None,
    submodular: bool = False,
    skew: bool = False,
    lo: int = -6,
    hi: int = 6,
) -> dict[Point, Fraction]:
    """Random values on ``Int(a; 1..m') + {0}``, optionally repaired toward the given inequalities."""
    if m_prime is None:
        m_prime = shape.total
    pts = {x for p in range(1, m_prime + 1) for x in fints(shape, p)} | {shape.zero}
    vals = {x: Fraction(rng.randint(lo, hi)) for x in sorted(pts)}
    vals[shape.zero] = Fraction(0)
    if submodular or skew:
        vals = repair_basis_values(vals, submodular=submodular, skew=skew)
    return vals
