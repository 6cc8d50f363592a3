"""Command-line front end.

Exit codes: 0 success, 1 malformed input, 2 a mathematical negative result
(violations, obstacles) with JSON diagnostics on standard output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from . import box_embedding, flow_grid, laurent, properties, tiling, tp_core
from .domain import BoxShape, TruncatedBox, standard_basis
from .tp_core import BasisAssignment, ValuedFunction


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _read_json(path_or_text: str):
    text = path_or_text.strip()
    try:
        if text.startswith("[") or text.startswith("{"):
            return json.loads(text)
        with open(path_or_text) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {path_or_text!r}: {exc}") from exc


def _emit(data, out: Optional[str]) -> None:
    text = json.dumps(data, indent=1)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _load_function(path: str) -> ValuedFunction:
    try:
        return ValuedFunction.from_json(_read_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"not a function file: {exc}") from exc


def cmd_gen(args) -> int:
    a = _ints(args.a)
    shape = BoxShape(a)
    mp = shape.total if args.mprime is None else args.mprime
    box = TruncatedBox(shape, args.m, mp)
    lo, hi = _ints(args.range)
    g = tp_core.random_basis_assignment(box, random.Random(args.seed), lo, hi)
    _emit(tp_core.reconstruct(g).to_json(), args.output)
    return 0


def cmd_reconstruct(args) -> int:
    try:
        g = BasisAssignment.from_json(_read_json(args.basis))
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"not a basis file: {exc}") from exc
    _emit(tp_core.reconstruct(g).to_json(), args.output)
    return 0


def cmd_verify(args) -> int:
    report = tp_core.verify(_load_function(args.function))
    _emit({"tp": report.ok, "violations": report.to_json()}, None)
    return 0 if report.ok else 2


def cmd_tile(args) -> int:
    a = _ints(args.a)
    pts = [tuple(p) for p in _read_json(args.points)] if args.points else []
    try:
        D = tiling.extend_points_to_tiling(a, pts)
    except tiling.ObstacleError as exc:
        i, j, k, x, y = exc.witness
        _emit({"obstacle": {"indices": [i, j, k], "x": list(x), "x_prime": list(y)}}, None)
        return 2
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(tiling.to_svg(D))
    _emit(D.to_json(), args.output)
    return 0


def cmd_flip(args) -> int:
    D = tiling.RTDiagram.from_json(_read_json(args.tiling))
    nums = _ints(args.hexagon)
    n = len(D.a)
    if len(nums) != n + 3:
        raise InputError(f"--hexagon needs {n} anchor coordinates and i,j,k")
    s, (i, j, k) = tuple(nums[:n]), nums[n:]
    match = [h for h in tiling.find_hexagons(D) if (h.s, h.i, h.j, h.k) == (s, i, j, k)]
    if not match:
        _emit({"error": "no such hexagon", "hexagons": [
            {"s": list(h.s), "i": h.i, "j": h.j, "k": h.k, "kind": h.kind} for h in tiling.find_hexagons(D)]}, None)
        return 2
    _emit(tiling.flip(D, match[0]).to_json(), args.output)
    return 0


def cmd_laurent(args) -> int:
    a = _ints(args.a)
    x = _ints(args.point)
    if len(x) != len(a):
        raise InputError("point and shape have different lengths")
    if args.m is not None or args.mprime is not None:
        if any(c != 1 for c in a):
            raise InputError("--m/--mprime are only supported on Boolean cubes")
        m = args.m or 0
        mp = len(a) if args.mprime is None else args.mprime
        poly = laurent.laurent_truncated(len(a), m, mp, x)
    else:
        poly = laurent.laurent_box(a, x)
    _emit(poly.to_json(), args.output)
    return 0


def cmd_props(args) -> int:
    f = _load_function(args.function)
    scope = standard_basis(f.box) if args.basis else None
    wanted = {
        "submodular": (args.submodular, properties.check_submodular),
        "skew": (args.skew, properties.check_skew_submodular),
        "dc": (args.dc, properties.check_dctp),
    }
    if not any(flag for flag, _ in wanted.values()):
        wanted = {k: (True, fn) for k, (_, fn) in wanted.items()}
    result = {}
    ok = True
    for name, (flag, fn) in wanted.items():
        if flag:
            bad = fn(f, scope)
            result[name] = {"holds": not bad, "violations": [v.to_json() for v in bad[:20]]}
            ok &= not bad
    _emit(result, None)
    return 0 if ok else 2


def cmd_export_svg(args) -> int:
    D = tiling.RTDiagram.from_json(_read_json(args.tiling))
    labels = None
    if args.values:
        f = _load_function(args.values)
        labels = {v: f[v] for v in D.vertices if v in f}
    svg = tiling.to_svg(D, labels)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(svg)
    else:
        print(svg)
    return 0


def _oracle_suites(max_n: int, seed: int) -> dict[str, bool]:
    rng = random.Random(seed)
    results: dict[str, bool] = {}

    ok = True
    for n in range(1, max_n + 1):
        for a in [(1,) * n, (2,) + (1,) * (n - 1)]:
            shape = BoxShape(a)
            for m in range(shape.total + 1):
                for mp in range(m, shape.total + 1):
                    box = TruncatedBox(shape, m, mp)
                    g = tp_core.random_basis_assignment(box, rng)
                    f = tp_core.reconstruct(g)
                    ok &= tp_core.restrict_to_basis(f) == g
    results["reconstruct"] = ok

    ok = True
    for n in range(1, max_n + 1):
        W = flow_grid.WeightMatrix.from_function(n, n, lambda p, q: rng.randint(-9, 9))
        ok &= tp_core.verify(flow_grid.generate_function(W, check=False)).ok
    results["flows"] = ok

    ok = True
    for n in range(2, min(max_n, 4) + 1):
        a = (1,) * n
        ok &= tiling.enumerate_tilings(a) == tiling.exhaustive_tilings(a)
    results["tilings"] = ok

    ok = True
    for n in range(1, max_n + 1):
        box = TruncatedBox.cube(n)
        g = tp_core.random_basis_assignment(box, rng)
        f = tp_core.reconstruct(g)
        ok &= all(laurent.laurent_cube(n, S).evaluate(g) == f[S] for S in box.points())
    results["laurent"] = ok

    ok = True
    for a in [(1, 2, 1), (2, 2)]:
        box = TruncatedBox.full(a)
        g = tp_core.random_basis_assignment(box, rng)
        ok &= box_embedding.reconstruct_via_cube(g)[0] == tp_core.reconstruct(g)
    results["embedding"] = ok
    return results


def cmd_oracle(args) -> int:
    results = _oracle_suites(args.max_n, args.seed)
    if args.suite != "all":
        if args.suite not in results:
            raise InputError(f"unknown suite {args.suite!r}; choose from {sorted(results)} or all")
        results = {args.suite: results[args.suite]}
    _emit(results, None)
    return 0 if all(results.values()) else 2


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description="Tropical Plücker functions on integer boxes.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("gen", help="random basis values -> reconstructed function")
    s.add_argument("--a", required=True)
    s.add_argument("--m", type=int, default=0)
    s.add_argument("--mprime", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--range", default="-9,9")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("reconstruct", help="basis JSON -> function JSON")
    s.add_argument("--basis", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_reconstruct)

    s = sub.add_parser("verify", help="exit 0 iff the function satisfies all relations")
    s.add_argument("function")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("tile", help="lowest tiling containing the given points")
    s.add_argument("--a", required=True)
    s.add_argument("--points")
    s.add_argument("--svg")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_tile)

    s = sub.add_parser("flip", help="flip one hexagon of a tiling")
    s.add_argument("tiling")
    s.add_argument("--hexagon", required=True, help="anchor coordinates followed by i,j,k")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_flip)

    s = sub.add_parser("laurent", help="tropical Laurent expansion of one value")
    s.add_argument("--a", required=True)
    s.add_argument("--point", required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--mprime", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_laurent)

    s = sub.add_parser("props", help="check submodularity / skew-submodularity / discrete concavity")
    s.add_argument("function")
    s.add_argument("--submodular", action="store_true")
    s.add_argument("--skew", action="store_true")
    s.add_argument("--dc", action="store_true")
    s.add_argument("--basis", action="store_true", help="only check on the standard basis")
    s.set_defaults(func=cmd_props)

    s = sub.add_parser("export-svg", help="draw a tiling")
    s.add_argument("tiling")
    s.add_argument("--values")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_export_svg)

    s = sub.add_parser("oracle", help="run brute-force differential suites")
    s.add_argument("--suite", default="all")
    s.add_argument("--max-n", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_oracle)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


run = main

if __name__ == "__main__":
    sys.exit(main())
