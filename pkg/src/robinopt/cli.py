"""Command-line entry point.

Commands: eigs, optimize, sweep-alpha, transition-table, wolf-keller,
verify-bounds.  All numeric output is CSV with a header row; --svg adds
simple polyline plots.  Exit status: 0 success, 1 numeric failure (including
any unsatisfied bound row), 2 usage error.  Defaults: volume 1, dimension 2.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import geometry, mfs, optim, theory
from ._search import parallel_map
from ._svg import write_svg
from .ball import ball_union_min_lambda_k, transition_alpha


class UsageError(ValueError):
    pass


def _parse_int_range(s: str) -> list[int]:
    """'4' -> [4]; '3..10' -> [3..10] inclusive."""
    try:
        if ".." in s:
            a, b = s.split("..")
            lo, hi = int(a), int(b)
            if hi < lo:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(s)]
    except ValueError:
        raise UsageError(f"--n: expected INT or a..b, got {s!r}") from None


def _parse_alpha_grid(s: str) -> list[float]:
    """'a..b:step' inclusive grid, or comma-separated values."""
    try:
        if ".." in s:
            rng, step = s.split(":")
            a, b = (float(v) for v in rng.split(".."))
            h = float(step)
            if h <= 0 or b < a:
                raise ValueError
            count = int(round((b - a) / h))
            grid = [a + i * h for i in range(count + 1)]
            if grid[-1] > b + 1e-12 * max(1.0, abs(b)):
                grid.pop()
            return grid
        return [float(v) for v in s.split(",")]
    except ValueError:
        raise UsageError(f"--alpha-grid: expected a..b:step or v1,v2,..., got {s!r}") from None


def _alphas(args) -> list[float]:
    if getattr(args, "alpha", None) is not None:
        return [args.alpha]
    if getattr(args, "alpha_grid", None) is not None:
        return _parse_alpha_grid(args.alpha_grid)
    raise UsageError("one of --alpha or --alpha-grid is required")


def _mfs_config(args, ncomp: int) -> mfs.MfsConfig:
    cfg = mfs.MfsConfig()
    if getattr(args, "np", None) is not None:
        cfg = replace(cfg, np_per_component=(args.np,) * ncomp)
    if getattr(args, "gamma", None) is not None:
        cfg = replace(cfg, gamma=args.gamma)
    return cfg


def _out_path(args, name: str) -> str:
    os.makedirs(args.out, exist_ok=True)
    return os.path.join(args.out, name)


def _write_csv(path: str, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    print(f"wrote {path}")


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_eigs(args) -> int:
    domain, _ = geometry.load_domain(args.shape)
    cfg = _mfs_config(args, len(domain.components))
    result = mfs.eigenvalues(domain, args.alpha, args.count, cfg)
    rows = [
        (i + 1, f"{e.lam:.12g}", f"{e.residual:.3g}",
         "" if e.component_hint is None else e.component_hint)
        for i, e in enumerate(result.eigenvalues)
    ]
    _write_csv(_out_path(args, "eigs.csv"), ("n", "lambda", "residual", "component"), rows)
    for r in rows:
        print(f"lambda_{r[0]} = {r[1]}")
    if args.svg:
        curves = []
        th = np.linspace(0.0, 2 * math.pi, 512)
        for i, c in enumerate(domain.components):
            r = c.radius(th)
            curves.append(
                (f"component {i}", c.center[0] + r * np.cos(th), c.center[1] + r * np.sin(th))
            )
        write_svg(_out_path(args, "eigs_shape.svg"), curves, title="domain boundary")
    return 0


def cmd_optimize(args) -> int:
    domain, vol = geometry.load_domain(args.shape)
    volume = args.volume if args.volume is not None else vol
    mcfg = _mfs_config(args, len(domain.components))
    ocfg = optim.OptimConfig(max_iters=args.max_iters)
    final, trace = optim.minimize(domain, args.alpha, args.n, ocfg, mcfg, volume=volume)
    n = args.n
    header = ("iter", "objective", "step") + tuple(f"lambda_{j + 1}" for j in range(n))
    rows = [
        (i, f"{it.objective:.12g}", f"{it.step:.6g}")
        + tuple(f"{l:.12g}" for l in it.lambda_values)
        for i, it in enumerate(trace.iterates)
    ]
    _write_csv(_out_path(args, "optimize_trace.csv"), header, rows)
    shape_path = _out_path(args, "optimize_shape.json")
    geometry.save_domain(shape_path, final, volume)
    print(f"wrote {shape_path}")
    record = _out_path(args, "optimize_record.txt")
    with open(record, "w") as fh:
        fh.write(f"command: optimize --alpha {args.alpha} --n {n}\n")
        fh.write(f"config: {ocfg}\nmfs: {mcfg}\nvolume: {volume}\n\n")
        for i, it in enumerate(trace.iterates):
            fh.write(f"iter {i}: objective {it.objective:.12g} step {it.step:.6g}\n")
        fh.write(f"\nfinal shape: {shape_path}\n")
        fh.write(
            "final eigenvalues: "
            + " ".join(f"{l:.12g}" for l in trace.iterates[-1].lambda_values)
            + "\n"
        )
    print(f"wrote {record}")
    final_lam = trace.iterates[-1].lambda_values[n - 1]
    print(f"final lambda_{n} = {final_lam:.10g} after {len(trace.iterates) - 1} iterations")
    if args.svg:
        th = np.linspace(0.0, 2 * math.pi, 512)
        curves = []
        for i, c in enumerate(final.components):
            r = c.radius(th)
            curves.append(
                (f"component {i}", c.center[0] + r * np.cos(th), c.center[1] + r * np.sin(th))
            )
        write_svg(_out_path(args, "optimize_shape.svg"), curves, title="optimized domain")
    return 0


def _seed_fractions(n: int, k: int, alpha: float, volume: float):
    """Area split for a k-component seed, taken from the best union of
    exactly k balls (the catalog's equalization)."""
    if k == 1:
        return (1.0,)
    _, _, vols = ball_union_min_lambda_k(n, k, 2, volume, alpha)
    return tuple(v / volume for v in vols)


def cmd_sweep_alpha(args) -> int:
    if args.dim != 2:
        raise UsageError("sweep-alpha runs the 2-D MFS pipeline; --dim must be 2")
    n = args.n
    alphas = _alphas(args)
    topologies = (
        [int(t) for t in args.topologies.split(",")]
        if args.topologies
        else list(range(1, n + 1))
    )
    if any(not 1 <= k <= n for k in topologies):
        raise UsageError(f"--topologies entries must lie in 1..{n}")
    ocfg = optim.OptimConfig(max_iters=args.max_iters)

    def job(alpha: float):
        parts = [_seed_fractions(n, k, alpha, args.volume) for k in topologies]
        mcfg = _mfs_config(args, 1)
        res = optim.topology_sweep(alpha, n, parts, ocfg, mcfg, volume=args.volume)
        return res

    results = parallel_map(job, alphas)
    header = ("alpha", "best_topology", "best_value") + tuple(
        f"value_k{k}" for k in topologies
    )
    rows = []
    for alpha, res in zip(alphas, results):
        best_k = topologies[res.outcomes.index(res.best)]
        rows.append(
            (f"{alpha:g}", best_k, f"{res.best.value:.10g}")
            + tuple(f"{o.value:.10g}" for o in res.outcomes)
        )
    _write_csv(_out_path(args, "sweep_alpha.csv"), header, rows)
    for r in rows:
        print(f"alpha={r[0]}: best topology {r[1]} components, lambda_{n}={r[2]}")
    if args.svg:
        curves = [
            (
                f"{k} components",
                alphas,
                [res.outcomes[i].value for res in results],
            )
            for i, k in enumerate(topologies)
        ]
        write_svg(
            _out_path(args, "sweep_alpha.svg"),
            curves,
            title=f"lambda_{n}^* vs alpha",
            x_label="alpha",
            y_label=f"lambda_{n}",
        )
    return 0


def cmd_transition_table(args) -> int:
    ns = _parse_int_range(args.n)
    rows = []
    for n in ns:
        t = transition_alpha(args.dim, n, args.volume)
        rows.append((n, f"{t.alpha_n:.6f}", f"{t.gamma0:.10f}"))
    _write_csv(_out_path(args, "transition_table.csv"), ("n", "alpha_n", "gamma0"), rows)
    for r in rows:
        print(f"alpha_{r[0]} = {r[1]}")
    return 0


def cmd_wolf_keller(args) -> int:
    ns = _parse_int_range(args.n)
    alphas = _alphas(args)
    rows = []
    for n in ns:
        for alpha in alphas:
            wk = theory.wolf_keller_combine(n, args.dim, args.volume, alpha)
            rows.append(
                (
                    n,
                    f"{alpha:g}",
                    wk.k,
                    f"{wk.xi1:.10f}",
                    f"{wk.xi2:.10f}",
                    f"{wk.value:.10g}",
                )
            )
    _write_csv(
        _out_path(args, "wolf_keller.csv"),
        ("n", "alpha", "k", "xi1", "xi2", "value"),
        rows,
    )
    for r in rows:
        print(f"n={r[0]} alpha={r[1]}: k={r[2]} value={r[5]}")
    if args.svg and len(alphas) > 1:
        curves = [
            (
                f"n={n}",
                alphas,
                [float(r[5]) for r in rows if r[0] == n],
            )
            for n in ns
        ]
        write_svg(
            _out_path(args, "wolf_keller.svg"),
            curves,
            title="Wolf-Keller values",
            x_label="alpha",
            y_label="lambda*",
        )
    return 0


def cmd_verify_bounds(args) -> int:
    kinds = [
        k
        for k, flag in (
            ("n_ball", args.n_ball),
            ("gap_comp", args.gap_comp),
            ("gap_explicit", args.gap_explicit),
            ("fig_est", args.fig_est),
        )
        if flag
    ]
    if not kinds:
        kinds = ["n_ball", "gap_comp", "gap_explicit", "fig_est"]
    ns = _parse_int_range(args.n)
    if getattr(args, "alpha", None) is not None or args.alpha_grid is not None:
        alphas = _alphas(args)
    else:
        alphas = [0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0]
    reports: list[theory.BoundsReport] = []
    for kind in kinds:
        for n in ns:
            for alpha in alphas:
                if kind == "n_ball":
                    reports.append(theory.n_ball_bound(n, args.dim, args.volume, alpha))
                elif kind == "gap_comp":
                    reports.append(theory.gap_bound_comp(n, args.dim, args.volume, alpha))
                elif kind == "gap_explicit":
                    reports.append(
                        theory.gap_bound_explicit(n, args.dim, args.volume, alpha)
                    )
                else:
                    if args.dim != 2 or args.volume != 1.0:
                        raise UsageError(
                            "--fig-est is defined for --dim 2 --volume 1"
                        )
                    reports.append(theory.fig_est_report(n, alpha))
    rows = [
        (
            r.kind,
            r.n,
            f"{r.alpha:g}",
            f"{r.lhs:.10g}",
            f"{r.rhs:.10g}",
            "true" if r.satisfied else "false",
        )
        for r in reports
    ]
    _write_csv(
        _out_path(args, "verify_bounds.csv"),
        ("kind", "n", "alpha", "lhs", "rhs", "satisfied"),
        rows,
    )
    bad = [r for r in reports if not r.satisfied]
    if bad:
        for r in bad:
            print(
                f"UNSATISFIED: {r.kind} n={r.n} alpha={r.alpha:g} "
                f"lhs={r.lhs:.6g} rhs={r.rhs:.6g}",
                file=sys.stderr,
            )
        return 1
    print(f"all {len(reports)} bound rows satisfied")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--dim", type=int, default=2, help="space dimension (default 2)")
    p.add_argument("--volume", type=float, default=1.0, help="target volume (default 1)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for seeded shapes")
    p.add_argument("--svg", action="store_true", help="also write SVG plots")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robinopt",
        description="Minimization of Robin Laplacian eigenvalues at fixed area",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eigs", help="MFS eigenvalues of a shape file")
    p.add_argument("--shape", required=True, help="shape JSON file")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--count", type=int, default=4)
    p.add_argument("--np", type=int, help="collocation points per component")
    p.add_argument("--gamma", type=float, help="MFS source offset")
    _add_common(p)
    p.set_defaults(func=cmd_eigs)

    p = sub.add_parser("optimize", help="minimize lambda_n from a shape file")
    p.add_argument("--shape", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--np", type=int)
    p.add_argument("--gamma", type=float)
    p.add_argument("--max-iters", type=int, default=200)
    _add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep-alpha", help="best topology per alpha")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-grid", help="a..b:step or v1,v2,...")
    p.add_argument("--topologies", help="comma-separated component counts")
    p.add_argument("--np", type=int, default=48)
    p.add_argument("--gamma", type=float)
    p.add_argument("--max-iters", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_sweep_alpha)

    p = sub.add_parser("transition-table", help="transition values alpha_n")
    p.add_argument("--n", required=True, help="INT or a..b")
    _add_common(p)
    p.set_defaults(func=cmd_transition_table)

    p = sub.add_parser("wolf-keller", help="Wolf-Keller combination values")
    p.add_argument("--n", required=True, help="INT or a..b")
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-grid", help="a..b:step or v1,v2,...")
    _add_common(p)
    p.set_defaults(func=cmd_wolf_keller)

    p = sub.add_parser("verify-bounds", help="check the paper's bounds")
    p.add_argument("--n", default="1..6", help="INT or a..b")
    p.add_argument("--alpha", type=float)
    p.add_argument("--alpha-grid", help="a..b:step or v1,v2,...")
    p.add_argument("--n-ball", action="store_true")
    p.add_argument("--gap-comp", action="store_true")
    p.add_argument("--gap-explicit", action="store_true")
    p.add_argument("--fig-est", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_verify_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (
        ValueError,
        ArithmeticError,
        OSError,
        KeyError,
        mfs.NotEnoughEigenvaluesError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
