"""Tropical Laurent expansions of TP-function values in terms of basis values.

Every admissible flow contributes one monomial (an integer linear form in the
basis values); the value at the target is the maximum of these forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .box_embedding import BlockStructure, embed_point, interval_excess, project_set
from .domain import BoxShape, Point
from .flow_grid import (
    Flow,
    Grid,
    Vertex,
    enumerate_admissible_flows,
    flow_vertices,
    interval,
    is_strong,
    point_to_subset,
    subset_to_point,
    vertex_forms,
)

ALLOWED = frozenset({-1, 0, 1, 2})


@dataclass(frozen=True, order=True)
class Monomial:
    terms: tuple[tuple[Point, int], ...]

    @classmethod
    def from_dict(cls, coeffs: Mapping[Point, int]) -> "Monomial":
        return cls(tuple(sorted((p, c) for p, c in coeffs.items() if c)))

    def as_dict(self) -> dict[Point, int]:
        return dict(self.terms)

    def evaluate(self, g: Mapping[Point, Fraction]) -> Fraction:
        total = Fraction(0)
        for p, c in self.terms:
            if p not in g:
                raise KeyError(f"no value for basis point {p}")
            total += c * g[p]
        return total

    def coefficients(self) -> list[int]:
        return [c for _, c in self.terms]


@dataclass(frozen=True)
class TropicalPolynomial:
    target: Point
    monomials: tuple[Monomial, ...]

    def __post_init__(self) -> None:
        if not self.monomials:
            raise ValueError("a tropical polynomial needs at least one monomial")

    def evaluate(self, g: Mapping[Point, Fraction]) -> Fraction:
        return max(mon.evaluate(g) for mon in self.monomials)

    def to_json(self) -> dict:
        return {"target": list(self.target),
                "monomials": [{"terms": [{"point": list(p), "coeff": c} for p, c in mon.terms]}
                              for mon in self.monomials]}


def evaluate(poly: TropicalPolynomial, g: Mapping[Point, Fraction]) -> Fraction:
    return poly.evaluate(g)


def _polynomial(target: Point, coeff_dicts: Iterable[Mapping[Point, int]]) -> TropicalPolynomial:
    mons = sorted({Monomial.from_dict(c) for c in coeff_dicts})
    for mon in mons:
        bad = [c for c in mon.coefficients() if c not in ALLOWED]
        assert not bad, f"coefficient out of range {bad} in {mon}"
    return TropicalPolynomial(target, tuple(mons))


def _turns(path: Sequence[Vertex]) -> list[tuple[Vertex, int]]:
    """Turns along a path as ``(vertex, +1 left / -1 right)``.

    The path is thought of as entering its source from below and leaving its
    sink to the left.
    """
    steps = ["U"] + ["L" if b[0] < a[0] else "U" for a, b in zip(path, path[1:])] + ["L"]
    out = []
    for t, v in enumerate(path):
        before, after = steps[t], steps[t + 1]
        if before == "U" and after == "L":
            out.append((v, 1))
        elif before == "L" and after == "U":
            out.append((v, -1))
    return out


def flow_coefficients(flow: Flow, grid: Grid) -> Monomial:
    """Coefficient vector of a cube flow over intervals, from its turns."""
    n = grid.n
    coeffs: dict[Point, int] = {}
    for path in flow:
        for (p, q), sign in _turns(path):
            full = interval(p - q + 1, p, n)
            short = interval(p - q + 1, p - 1, n)
            if p - q + 1 < 1:
                raise AssertionError(f"turn at {(p, q)} below the diagonal")
            coeffs[full] = coeffs.get(full, 0) + sign
            if any(short):
                coeffs[short] = coeffs.get(short, 0) - sign
    return Monomial.from_dict(coeffs)


def vertex_sum_coefficients(flow: Flow, n: int, m: int, m_prime: int) -> dict[Point, int]:
    """Sum of the weight forms of the flow's vertices (vertices outside the index set add 0)."""
    forms = vertex_forms(n, m, m_prime)
    coeffs: dict[Point, int] = {}
    for v in flow_vertices(flow):
        for p, c in forms.get(v, {}).items():
            coeffs[p] = coeffs.get(p, 0) + c
    return {p: c for p, c in coeffs.items() if c}


def _target(S, n: int) -> Point:
    if isinstance(S, tuple):
        return S
    return subset_to_point(S, n)


@lru_cache(maxsize=None)
def _laurent_cube(n: int, target: Point) -> TropicalPolynomial:
    grid = Grid(n, n)
    flows = enumerate_admissible_flows(grid, target)
    if not any(target):
        return TropicalPolynomial(target, (Monomial(()),))
    return _polynomial(target, (flow_coefficients(F, grid).as_dict() for F in flows))


def laurent_cube(n: int, S) -> TropicalPolynomial:
    """``f(S)`` as a tropical polynomial in the interval values of a TP-function on ``2^[n]``."""
    return _laurent_cube(n, _target(S, n))


@lru_cache(maxsize=None)
def _laurent_truncated(n: int, m: int, m_prime: int, target: Point) -> TropicalPolynomial:
    if not m <= sum(target) <= m_prime:
        raise ValueError("target size outside [m, m']")
    grid = Grid(n, m_prime)
    anchor = interval(1, m, n)
    dicts = []
    for F in enumerate_admissible_flows(grid, target):
        if not is_strong(F, m):
            continue
        coeffs = vertex_sum_coefficients(F, n, m, m_prime)
        if m > 0:
            # restores equivariance under adding a constant, so g([1..m]) need not be 0
            coeffs[anchor] = coeffs.get(anchor, 0) + 1 - sum(coeffs.values())
        dicts.append(coeffs)
    if not dicts:
        # only the empty flow (target = empty set with m = 0)
        return TropicalPolynomial(target, (Monomial(()),))
    return _polynomial(target, dicts)


def laurent_truncated(n: int, m: int, m_prime: int, S) -> TropicalPolynomial:
    """Expansion over the standard basis of ``C_m^{m'}(n)`` using strong flows only."""
    return _laurent_truncated(n, m, m_prime, _target(S, n))


def flow_excess_balance(flow: Flow, blocks: BlockStructure) -> tuple[dict[Point, int], int]:
    """Coefficients pushed to box points through ``#`` and the total excess ``beta``."""
    N = blocks.N
    mon = flow_coefficients(flow, Grid(N, N))
    alpha: dict[Point, int] = {}
    beta = 0
    for I, c in mon.terms:
        members = point_to_subset(I)
        x = project_set(blocks, members)
        alpha[x] = alpha.get(x, 0) + c
        beta += c * interval_excess(blocks, members[0], members[-1])[2]
    return {x: c for x, c in alpha.items() if c}, beta


@lru_cache(maxsize=None)
def _laurent_box(a: tuple[int, ...], x: Point) -> TropicalPolynomial:
    shape = BoxShape(a)
    if not shape.contains(x):
        raise ValueError(f"{x} is not in B({a})")
    blocks = BlockStructure(shape)
    N = blocks.N
    S = subset_to_point(embed_point(blocks, x), N)
    if not any(S):
        return TropicalPolynomial(x, (Monomial(()),))
    dicts = []
    for F in enumerate_admissible_flows(Grid(N, N), S):
        alpha, beta = flow_excess_balance(F, blocks)
        if beta == 0:
            dicts.append(alpha)
    return _polynomial(x, dicts)


def laurent_box(shape, x: Point) -> TropicalPolynomial:
    """Expansion of ``f(x)`` over the fints of ``B(a)``, keeping regular flows only."""
    a = shape.a if isinstance(shape, BoxShape) else tuple(shape)
    return _laurent_box(a, tuple(x))


# ---------------------------------------------------------------- Gelfand-Tsetlin patterns

GTPattern = tuple[tuple[int, ...], ...]


def gt_patterns(n: int, S) -> list[GTPattern]:
    """Triangular arrays with first column ``sorted(S)`` and ``a[i-1][j-1] < a[i][j] <= a[i][j-1]``."""
    shape = sorted(point_to_subset(S) if isinstance(S, tuple) else set(S))
    if any(not 1 <= s <= n for s in shape):
        raise ValueError("S must be a subset of [n]")
    k = len(shape)
    out: list[GTPattern] = []

    def rows(i: int, acc: list[tuple[int, ...]]) -> None:
        if i == k:
            out.append(tuple(acc))
            return
        prev = acc[-1] if acc else ()

        def fill(j: int, row: list[int]) -> None:
            if j == i + 1:
                rows(i + 1, acc + [tuple(row)])
                return
            lo = prev[j - 1] + 1
            hi = row[j - 1]
            for v in range(lo, hi + 1):
                fill(j + 1, row + [v])

        # row i (0-based) has i+1 entries, entry 0 is the source column
        if i > 0 and shape[i] <= prev[0]:
            return
        fill(1, [shape[i]])

    rows(0, [])
    return out


def flow_to_gt(flow: Flow) -> GTPattern:
    """Columns of the vertices entered by vertical edges (and the source), row by row."""
    pattern = []
    for path in flow:
        entries = [path[0][0]]
        for u, v in zip(path, path[1:]):
            if v[1] > u[1]:
                entries.append(v[0])
        pattern.append(tuple(entries))
    return tuple(pattern)


def gt_to_flow(pattern: GTPattern) -> Flow:
    paths = []
    for i, row in enumerate(pattern, start=1):
        path: list[Vertex] = []
        for j, col in enumerate(row, start=1):
            end = row[j] if j < len(row) else 1
            path.extend((p, j) for p in range(col, end - 1, -1))
        paths.append(tuple(path))
    return tuple(paths)


def delta_f(f: Mapping[Point, Fraction], c: int, d: int, n: int) -> Fraction:
    def val(lo, hi):
        return Fraction(0) if lo > hi else f[interval(lo, hi, n)]

    if c == d:
        return val(c, d)
    return val(c, d) + val(c + 1, d - 1) - val(c + 1, d) - val(c, d - 1)


def gt_value(f: Mapping[Point, Fraction], pattern: GTPattern, n: int) -> Fraction:
    total = Fraction(0)
    for row in pattern:
        for j, a in enumerate(row, start=1):
            total += delta_f(f, a - j + 1, a, n)
    return total


def two_element_value(f: Mapping[Point, Fraction], i: int, k: int, n: int) -> Fraction:
    """``f({i, k})`` from singletons and adjacent pairs (``i <= j < k`` in the maximum)."""
    def single(t):
        return f[interval(t, t, n)]

    best = None
    for j in range(i, k):
        val = sum((single(t) for t in range(i, j)), Fraction(0)) + f[interval(j, j + 1, n)]
        val += sum((single(t) for t in range(j + 2, k + 1)), Fraction(0))
        best = val if best is None else max(best, val)
    return best - sum((single(t) for t in range(i + 1, k)), Fraction(0))
