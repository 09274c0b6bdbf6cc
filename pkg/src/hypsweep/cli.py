"""Command line front end: ``hypsweep generate|compute|render|verify|bench``."""
from __future__ import annotations

import argparse
import math
import sys
import time
from typing import Optional, Sequence

import numpy as np

from .beach import InconsistencyError
from .formats import ParseError, dumps_diagram, format_sites, read_diagram, read_sites
from .graphs import delaunay_from_voronoi, minimum_spanning_tree
from .hgeom import R_MAX, PolarPoint
from .oracle import MAX_N, compare, oracle
from .render import render_svg
from .sweep import EPS_MERGE, check_diagram, compute_voronoi

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_FAIL, EXIT_INCONSISTENT = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def generate_sites(n: int, R: float, alpha: float = 1.0, seed: int = 0) -> list[PolarPoint]:
    """``n`` random sites in the disk of radius ``R``.

    Angles are uniform; radii follow the density
    ``alpha sinh(alpha r) / (cosh(alpha R) - 1)`` by inverting its CDF.
    """
    if n < 1:
        raise UsageError("n must be at least 1")
    if not 0 < R <= R_MAX:
        raise UsageError(f"R must lie in (0, {R_MAX}]")
    if not alpha > 0:
        raise UsageError("alpha must be positive")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)  # (0, 1], so r > 0
    r = np.arccosh(1.0 + u * math.expm1(alpha * R) * -math.expm1(-alpha * R) / 2.0) / alpha
    r = np.minimum(r, R)
    phi = rng.random(n) * (2.0 * math.pi)
    return [PolarPoint(float(a), float(b)) for a, b in zip(r, phi)]


def corpus_instance(seed: int, max_n: int = 12, min_n: int = 3, R: float = 5.0) -> list[PolarPoint]:
    """The verification instance for ``seed``: size drawn from the seed itself."""
    n = int(np.random.default_rng(seed).integers(min_n, max_n + 1))
    return generate_sites(n, R, 1.0, seed)


def _write(path: Optional[str], text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- commands -------------------------------------------------------------------------


def cmd_generate(args) -> int:
    sites = generate_sites(args.n, args.R, args.alpha, args.seed)
    header = [f"n={args.n} R={args.R!r} alpha={args.alpha!r} seed={args.seed}"]
    _write(args.output, format_sites(sites, header))
    return EXIT_OK


def cmd_compute(args) -> int:
    sites, comments = read_sites(args.input)
    t0 = time.perf_counter()
    diagram = compute_voronoi(sites, tol=args.tol)
    elapsed = (time.perf_counter() - t0) * 1000.0
    meta = {"n": len(sites)}
    if "seed" in comments:
        try:
            meta["seed"] = int(comments["seed"])
        except ValueError:
            pass
    meta["elapsed_ms"] = round(elapsed, 3)
    delaunay = mst = None
    if args.delaunay or args.mst:
        graph = delaunay_from_voronoi(diagram)
        delaunay = graph if args.delaunay else None
        mst = minimum_spanning_tree(graph) if args.mst else None
    _write(args.output, dumps_diagram(diagram, meta=meta, delaunay=delaunay, mst=mst))
    return EXIT_OK


def cmd_render(args) -> int:
    diagram, _ = read_diagram(args.input)
    _write(args.output, render_svg(diagram, width=args.width, samples_per_edge=args.samples_per_edge))
    return EXIT_OK


def _verify_one(diagram, tol: float) -> list[str]:
    problems = []
    rep = compare(diagram, oracle(diagram.sites), tol)
    if not rep.ok:
        problems.extend(rep.mismatches)
    chk = check_diagram(diagram)
    if not chk.ok:
        problems.extend(chk.violations)
    return problems


def cmd_verify(args) -> int:
    if args.input:
        diagram, _ = read_diagram(args.input)
        if len(diagram.sites) > MAX_N:
            raise UsageError(f"verify handles at most {MAX_N} sites")
        problems = _verify_one(diagram, args.tol)
        for p in problems[:20]:
            print(f"  {p}")
        print(f"{'FAIL' if problems else 'PASS'} {args.input}")
        return EXIT_FAIL if problems else EXIT_OK
    if not 3 <= args.max_n <= MAX_N:
        raise UsageError(f"--max-n must lie in [3, {MAX_N}]")
    failed = 0
    for seed in range(args.seeds):
        sites = corpus_instance(seed, args.max_n)
        problems = _verify_one(compute_voronoi(sites), args.tol)
        if problems:
            failed += 1
            print(f"FAIL seed={seed} n={len(sites)}: {problems[0]}")
    print(f"{'FAIL' if failed else 'PASS'} {args.seeds - failed}/{args.seeds} instances")
    return EXIT_FAIL if failed else EXIT_OK


def bench_rows(sizes: Sequence[int], repeats: int = 1, seed: int = 0, R: float = 5.0) -> list[tuple[int, float, float]]:
    """``(n, mean ms, ms per n log2 n)`` for each size; only the sweep is timed."""
    rows = []
    for n in sizes:
        sites = generate_sites(n, R, 1.0, seed)
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            compute_voronoi(sites)
            times.append((time.perf_counter() - t0) * 1000.0)
        mean = sum(times) / len(times)
        rows.append((n, mean, mean / (n * math.log2(n)) if n > 1 else mean))
    return rows


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise UsageError(f"bad size list {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise UsageError("sizes must be positive integers")
    return sizes


def cmd_bench(args) -> int:
    if args.repeats < 1:
        raise UsageError("--repeats must be at least 1")
    rows = bench_rows(_parse_sizes(args.sizes), args.repeats, args.seed, args.R)
    print(f"{'n':>8} {'mean_ms':>12} {'ms_per_nlogn':>14}")
    for n, mean, norm in rows:
        print(f"{n:>8} {mean:>12.3f} {norm:>14.6f}")
    ratios = [b[1] / a[1] for a, b in zip(rows, rows[1:]) if b[0] == 2 * a[0] and a[1] > 0]
    if ratios:
        print(f"mean t(2n)/t(n): {sum(ratios) / len(ratios):.3f}")
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="hypsweep", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="random sites in a hyperbolic disk")
    g.add_argument("-n", type=int, required=True)
    g.add_argument("-R", type=float, default=5.0)
    g.add_argument("--alpha", type=float, default=1.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("compute", help="Voronoi diagram of a site file")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("-o", "--output")
    c.add_argument("--delaunay", action="store_true")
    c.add_argument("--mst", action="store_true")
    c.add_argument("--tol", type=float, default=EPS_MERGE, help="vertex merge tolerance")
    c.set_defaults(func=cmd_compute)

    r = sub.add_parser("render", help="SVG drawing of a diagram file")
    r.add_argument("-i", "--input", required=True)
    r.add_argument("-o", "--output")
    r.add_argument("--width", type=int, default=800)
    r.add_argument("--samples-per-edge", type=int, default=128)
    r.set_defaults(func=cmd_render)

    v = sub.add_parser("verify", help="compare the sweep against the brute-force oracle")
    v.add_argument("-i", "--input", help="check one diagram file instead of the seeded corpus")
    v.add_argument("--seeds", type=int, default=500)
    v.add_argument("--max-n", type=int, default=12)
    v.add_argument("--tol", type=float, default=1e-6)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time the sweep over several sizes")
    b.add_argument("--sizes", default="4096,8192,16384,32768,65536")
    b.add_argument("--repeats", type=int, default=1)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("-R", type=float, default=5.0)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hypsweep: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"hypsweep: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistencyError as exc:
        print(f"hypsweep: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
