"""Grid flows: admissible path systems, max-weight values and the matrix/basis maps.

Vertices are pairs ``(p, q)``: column ``p`` in ``1..n``, row ``q`` in ``1..m'``.
Edges go one step left or one step up.  Sources ``s_p = (p, 1)`` sit on the bottom
row and sinks ``t_q = (1, q)`` on the leftmost column.  Subsets of ``[n]`` are
passed around as 0/1 tuples, like every other lattice point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Iterable, Optional, Sequence

from .domain import Point, TruncatedBox, standard_basis
from .tp_core import BasisAssignment, ValuedFunction, as_fraction, verify

Vertex = tuple[int, int]
FlowPath = tuple[Vertex, ...]
Flow = tuple[FlowPath, ...]


@dataclass(frozen=True)
class Grid:
    n: int
    m_prime: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.m_prime < 0:
            raise ValueError("bad grid size")

    def source(self, p: int) -> Vertex:
        return (p, 1)

    def sink(self, q: int) -> Vertex:
        return (1, q)

    def vertices(self) -> list[Vertex]:
        return [(p, q) for q in range(1, self.m_prime + 1) for p in range(1, self.n + 1)]

    def successors(self, v: Vertex) -> list[Vertex]:
        p, q = v
        out = []
        if p > 1:
            out.append((p - 1, q))
        if q < self.m_prime:
            out.append((p, q + 1))
        return out


def subset_to_point(S: Iterable[int], n: int) -> Point:
    S = set(S)
    return tuple(1 if i in S else 0 for i in range(1, n + 1))


def point_to_subset(x: Point) -> tuple[int, ...]:
    return tuple(i + 1 for i, v in enumerate(x) if v)


def interval(c: int, d: int, n: int) -> Point:
    """0/1 point of ``[c..d]`` (empty when c > d)."""
    return tuple(1 if c <= i <= d else 0 for i in range(1, n + 1))


def _members(S, n: int) -> tuple[int, ...]:
    """Tuples are read as 0/1 points of length n; any other collection as a set of indices."""
    if isinstance(S, tuple):
        if len(S) != n or any(v not in (0, 1) for v in S):
            raise ValueError(f"{S} is not a 0/1 point of length {n}")
        return point_to_subset(S)
    members = tuple(sorted(set(S)))
    if any(not 1 <= i <= n for i in members):
        raise ValueError(f"{members} is not a subset of [1..{n}]")
    return members


def is_path(grid: Grid, path: FlowPath) -> bool:
    return all(b in grid.successors(a) for a, b in zip(path, path[1:]))


def is_admissible(grid: Grid, flow: Flow) -> bool:
    seen: set[Vertex] = set()
    sinks = set()
    for path in flow:
        if not path or path[0][1] != 1 or path[-1][0] != 1 or not is_path(grid, path):
            return False
        if seen & set(path):
            return False
        seen |= set(path)
        sinks.add(path[-1][1])
    return sinks == set(range(1, len(flow) + 1))


@lru_cache(maxsize=None)
def _enumerate(n: int, m_prime: int, sources: tuple[int, ...]) -> tuple[Flow, ...]:
    grid = Grid(n, m_prime)
    k = len(sources)
    if k > m_prime:
        raise ValueError(f"|S| = {k} exceeds the number of rows {m_prime}")
    found: list[Flow] = []

    # Exhaustive search: every source may try every unused sink among t_1..t_k.
    def paths_from(v: Vertex, target: Vertex, used: frozenset) -> Iterable[FlowPath]:
        if v == target:
            yield (v,)
            return
        for w in grid.successors(v):
            if w in used or w[0] < target[0] or w[1] > target[1]:
                continue
            for rest in paths_from(w, target, used):
                yield (v,) + rest

    def extend(idx: int, used: frozenset, free_sinks: frozenset, acc: list[FlowPath]) -> None:
        if idx == k:
            found.append(tuple(acc))
            return
        s = grid.source(sources[idx])
        if s in used:
            return
        for q in sorted(free_sinks):
            for path in paths_from(s, grid.sink(q), used):
                acc.append(path)
                extend(idx + 1, used | frozenset(path), free_sinks - {q}, acc)
                acc.pop()

    extend(0, frozenset(), frozenset(range(1, k + 1)), [])
    for flow in found:
        # planarity forces the i-th smallest source onto t_i
        assert all(path[-1] == (1, i + 1) for i, path in enumerate(flow)), flow
    return tuple(sorted(found))


def enumerate_admissible_flows(grid: Grid, S) -> tuple[Flow, ...]:
    """All admissible flows whose sources are ``{s_p : p in S}``."""
    return _enumerate(grid.n, grid.m_prime, _members(S, grid.n))


def flow_vertices(flow: Flow) -> list[Vertex]:
    return [v for path in flow for v in path]


@dataclass(frozen=True)
class WeightMatrix:
    """Weights ``w[q-1][p-1]`` of vertex ``(p, q)``; row 1 is the bottom row.

    ``m`` and ``M`` describe the penalty part added for truncated cubes (``M`` is
    unused when ``m <= 1``).
    """

    rows: tuple[tuple[Fraction, ...], ...]
    m: int = 0
    M: Fraction = Fraction(0)
    width: int = -1

    def __post_init__(self) -> None:
        rows = tuple(tuple(as_fraction(v) for v in r) for r in self.rows)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "M", as_fraction(self.M))
        if self.width < 0:
            if not rows:
                raise ValueError("an empty matrix needs an explicit width")
            object.__setattr__(self, "width", len(rows[0]))
        if any(len(r) != self.width for r in rows):
            raise ValueError("ragged weight matrix")

    @classmethod
    def from_function(cls, n: int, m_prime: int, w, m: int = 0, M=0) -> "WeightMatrix":
        return cls(tuple(tuple(w(p, q) for p in range(1, n + 1)) for q in range(1, m_prime + 1)), m, M, n)

    @property
    def n(self) -> int:
        return self.width

    @property
    def m_prime(self) -> int:
        return len(self.rows)

    @property
    def grid(self) -> Grid:
        return Grid(self.n, self.m_prime)

    def w(self, p: int, q: int) -> Fraction:
        return self.rows[q - 1][p - 1]

    def __add__(self, other: "WeightMatrix") -> "WeightMatrix":
        return WeightMatrix(
            tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.rows, other.rows)),
            max(self.m, other.m), max(self.M, other.M), self.width,
        )

    def to_json(self) -> dict:
        return {"n": self.n, "m_prime": self.m_prime, "m": self.m, "M": str(self.M),
                "entries": [[str(v) for v in r] for r in self.rows]}

    @classmethod
    def from_json(cls, data: dict) -> "WeightMatrix":
        return cls(tuple(tuple(Fraction(str(v)) for v in r) for r in data["entries"]),
                   int(data.get("m", 0)), Fraction(str(data.get("M", 0))), int(data["n"]))


def flow_weight(W: WeightMatrix, flow: Flow) -> Fraction:
    return sum((W.w(p, q) for p, q in flow_vertices(flow)), Fraction(0))


def max_weight_value(W: WeightMatrix, S) -> Fraction:
    """``f_w(S)``: the best total vertex weight over admissible flows from ``S``."""
    return max(flow_weight(W, F) for F in enumerate_admissible_flows(W.grid, S))


def in_w_prime_class(W: WeightMatrix, m: int) -> bool:
    return all(W.w(p, q) == 0 for q in range(1, W.m_prime + 1) for p in range(1, W.n + 1)
               if p < max(q, m + 1))


def penalty_matrix(n: int, m_prime: int, m: int, M) -> WeightMatrix:
    """The part that forces optimal flows to cover the ``m x m`` corner."""
    M = as_fraction(M)

    def w(p, q):
        if p == 1 and q == 1:
            return -Fraction(m * (m - 1), 2) * M
        if 2 <= p <= m and q < p:
            return M
        return Fraction(0)

    return WeightMatrix.from_function(n, m_prime, w, m, M)


def pi_index(n: int, m: int, m_prime: int) -> list[Vertex]:
    return [(p, q) for p in range(m + 1, n + 1) for q in range(1, min(p, m_prime) + 1)]


def pi_point(n: int, m: int, p: int, q: int) -> Point:
    """The basis set attached to grid vertex ``(p, q)``."""
    if q >= m:
        return interval(p - q + 1, p, n)
    return tuple(a | b for a, b in zip(interval(1, m - q, n), interval(p - q + 1, p, n)))


@lru_cache(maxsize=None)
def vertex_forms(n: int, m: int, m_prime: int) -> dict[Vertex, dict[Point, int]]:
    """Each ``w'_pq`` as an integer linear form in the basis values."""
    forms: dict[Vertex, dict[Point, int]] = {}

    def form(*terms: tuple[int, int, int]) -> dict[Point, int]:
        out: dict[Point, int] = {}
        for sign, p, q in terms:
            key = pi_point(n, m, p, q)
            out[key] = out.get(key, 0) + sign
        return {k: v for k, v in out.items() if v}

    for p, q in pi_index(n, m, m_prime):
        if q == 1 and p == m + 1:
            forms[(p, q)] = form((1, p, 1))
        elif q == 1:
            forms[(p, q)] = form((1, p, 1), (-1, p - 1, 1))
        elif p == max(q, m + 1):
            forms[(p, q)] = form((1, p, q), (-1, p, q - 1))
        else:
            forms[(p, q)] = form((1, p, q), (1, p - 1, q - 1), (-1, p - 1, q), (-1, p, q - 1))
    return forms


def default_big_m(n: int, m: int, w_prime: WeightMatrix) -> Fraction:
    biggest = max((abs(v) for r in w_prime.rows for v in r), default=Fraction(0))
    return Fraction(n * m * ceil(biggest) + 1)


def matrix_from_basis(g: BasisAssignment, M: Optional[Fraction] = None) -> WeightMatrix:
    """Weights ``W' + W''`` whose flow function restricts to ``g``."""
    box = g.box
    if any(c != 1 for c in box.a):
        raise ValueError("matrix_from_basis needs a truncated Boolean cube")
    n, m, mp = box.n, box.m, box.m_prime
    anchor = interval(1, m, n)
    if g[anchor] != 0:
        raise ValueError("the assignment must vanish on [1..m]")
    forms = vertex_forms(n, m, mp)

    def w(p, q):
        f = forms.get((p, q))
        return sum((c * g[x] for x, c in f.items()), Fraction(0)) if f else Fraction(0)

    w_prime = WeightMatrix.from_function(n, mp, w, m)
    if M is None:
        M = default_big_m(n, m, w_prime)
    return w_prime + penalty_matrix(n, mp, m, M)


def w_prime_part(W: WeightMatrix) -> WeightMatrix:
    pen = penalty_matrix(W.n, W.m_prime, W.m, W.M)
    return WeightMatrix(tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(W.rows, pen.rows)), W.m, 0, W.n)


def generate_function(W: WeightMatrix, box: Optional[TruncatedBox] = None, check: bool = True) -> ValuedFunction:
    """The flow function ``S -> f_w(S)`` on a truncated cube."""
    if box is None:
        box = TruncatedBox.cube(W.n, W.m, W.m_prime)
    if any(c != 1 for c in box.a) or box.n != W.n or box.m_prime > W.m_prime:
        raise ValueError("box must be a truncated cube fitting the matrix")
    f = ValuedFunction(box, {S: max_weight_value(W, S) for S in box.points()})
    if check:
        report = verify(f)
        assert report.ok, f"flow function violates TP relations: {report.violations[:3]}"
    return f


def basis_from_matrix(W: WeightMatrix, box: Optional[TruncatedBox] = None) -> BasisAssignment:
    if box is None:
        box = TruncatedBox.cube(W.n, W.m, W.m_prime)
    return BasisAssignment(box, {S: max_weight_value(W, S) for S in standard_basis(box)})


def _classify_target(S: Sequence[int], n: int) -> tuple[str, tuple[int, ...]]:
    S = sorted(S)
    if not S:
        return "interval", (1, 0)
    if S == list(range(S[0], S[-1] + 1)):
        return "interval", (S[0], S[-1])
    d1 = 0
    while d1 < len(S) and S[d1] == d1 + 1:
        d1 += 1
    rest = S[d1:]
    if d1 == 0 or rest != list(range(rest[0], rest[-1] + 1)):
        raise ValueError(f"{S} is neither an interval nor [1..d1] + [c2..d2]")
    return "sesqui", (d1, rest[0], rest[-1])


def lowest_flow(grid: Grid, S, m: int = 0) -> Flow:
    """The admissible flow with minimal lower regions for an interval or a sesqui-interval."""
    members = _members(S, grid.n)
    kind, params = _classify_target(members, grid.n)
    paths: list[FlowPath] = []
    if kind == "interval":
        c, d = params
        for i in range(1, d - c + 2):
            col = c + i - 1
            paths.append(tuple((col, q) for q in range(1, i + 1)) + tuple((p, i) for p in range(col - 1, 0, -1)))
    else:
        d1, c2, d2 = params
        if len(members) != m:
            raise ValueError("a sesqui-interval target must have size m")
        for i in range(1, d1 + 1):
            paths.append(tuple((i, q) for q in range(1, i + 1)) + tuple((p, i) for p in range(i - 1, 0, -1)))
        for i in range(d1 + 1, m + 1):
            ip = i - d1
            ib = c2 + ip - 1
            path = [(ib, q) for q in range(1, ip + 1)]
            path += [(p, ip) for p in range(ib - 1, d1 + ip - 1, -1)]
            path += [(d1 + ip, q) for q in range(ip + 1, i + 1)]
            path += [(p, i) for p in range(d1 + ip - 1, 0, -1)]
            paths.append(tuple(path))
    flow = tuple(paths)
    assert is_admissible(grid, flow), flow
    return flow


def is_strong(flow: Flow, m: int) -> bool:
    covered = set(flow_vertices(flow))
    return all((p, q) in covered for p in range(1, m + 1) for q in range(1, m + 1))


def strong_flows(grid: Grid, S, m: int) -> tuple[Flow, ...]:
    return tuple(F for F in enumerate_admissible_flows(grid, S) if is_strong(F, m))
