"""Command line entry point: ``rotset <subcommand> ...``.

Exit status: 0 on success, 1 on a domain error (message on stderr), 2 when
a certification or containment check fails.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import __version__
from .exact import (
    DEFAULT_MAX_INDEX,
    PRECISION_ENV,
    RotsetError,
    alpha,
    certify_stability,
    default_precision,
    parse_rho,
)

EXIT_OK, EXIT_DOMAIN, EXIT_CERT = 0, 1, 2

DEFAULT_BOUNDS = {
    "alpha": None,
    "hull": 500,
    "classify": None,
    "roundness": 10_000,
    "scan": 10_000,
    "simulate": 1000,
    "certify": DEFAULT_MAX_INDEX,
    "claim-check": 81,
}


@dataclass
class CommandConfig:
    subcommand: str
    rho_expr: str | None
    precision: int
    max_index: int | None
    output_path: str | None
    format: str
    extra: dict = field(default_factory=dict)

    def header(self, rho=None) -> dict:
        out = {
            "tool": f"rotset {__version__}",
            "subcommand": self.subcommand,
            "rho_expr": self.rho_expr,
            "precision": self.precision,
            "max_index": self.max_index,
            "format": self.format,
        }
        out.update(self.extra)
        if rho is not None:
            out.update(
                {
                    "rho_num": rho.numerator,
                    "rho_den": rho.denominator,
                    "uncertainty_num": rho.uncertainty.numerator,
                    "uncertainty_den": rho.uncertainty.denominator,
                    "max_safe_index": rho.max_safe_index,
                }
            )
        return out


def rat(v: Fraction) -> dict:
    return {"num": v.numerator, "den": v.denominator}


@contextmanager
def open_out(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
        return
    try:
        fh = open(path, "w", newline="")
    except OSError as exc:
        raise RotsetError(f"cannot write {path}: {exc.strerror}") from exc
    with fh:
        yield fh


def write_header(fh, cfg: CommandConfig, rho=None) -> None:
    for key, val in cfg.header(rho).items():
        fh.write(f"# {key}={val}\n")


def write_json(cfg: CommandConfig, payload: dict, rho=None) -> None:
    doc = {"config": cfg.header(rho), **payload}
    with open_out(cfg.output_path) as fh:
        json.dump(doc, fh, indent=2, sort_keys=False)
        fh.write("\n")


def svg_path(cfg: CommandConfig) -> str:
    if cfg.format == "svg":
        return cfg.output_path or f"{cfg.subcommand}.svg"
    return cfg.extra.get("figure")


def _parse(cfg: CommandConfig, window: int | None = None):
    return parse_rho(cfg.rho_expr, cfg.precision, window)


# -- subcommands ---------------------------------------------------------------


def cmd_alpha(cfg: CommandConfig, args) -> int:
    count = args.count
    rho = _parse(cfg, cfg.max_index)
    if count > rho.max_safe_index:
        raise RotsetError(f"--count {count} exceeds the certified window {rho.max_safe_index}")
    rows = []
    for m in range(1, count + 1):
        a = alpha(rho, m)
        rows.append((m, a, a < rho.value))
    if cfg.format == "svg" or cfg.extra.get("figure"):
        from .plotting import alpha_figure

        alpha_figure(svg_path(cfg), rho.value, [r[0] for r in rows], [r[1] for r in rows],
                     [r[2] for r in rows], title=f"alpha_m for rho = {cfg.rho_expr}")
    if cfg.format == "svg":
        return EXIT_OK
    if cfg.format == "json":
        write_json(cfg, {"rows": [{"m": m, "alpha": rat(a), "member": k} for m, a, k in rows]}, rho)
        return EXIT_OK
    with open_out(cfg.output_path) as fh:
        write_header(fh, cfg, rho)
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["m", "alpha_num", "alpha_den", "member_I"])
        for m, a, k in rows:
            w.writerow([m, a.numerator, a.denominator, int(k)])
    return EXIT_OK


def _pentagon(rho_v: Fraction, d: Fraction, gamma: Fraction, quadrants: int):
    from .roundness import pentagon_vertex

    vx, vy = pentagon_vertex(rho_v, d, gamma)
    if quadrants == 1:
        return [(0, 0), (rho_v, 0), (vy, vx), (vx, vy), (0, rho_v)]
    ring = [(rho_v, 0), (vy, vx), (vx, vy), (0, rho_v), (-vx, vy), (-vy, vx), (-rho_v, 0),
            (-vy, -vx), (-vx, -vy), (0, -rho_v), (vx, -vy), (vy, -vx)]
    return ring


def cmd_hull(cfg: CommandConfig, args) -> int:
    from .diagonal import best_diagonal
    from .geometry import canonical, family_hull, gamma_sup, iter_family

    bound = cfg.max_index
    rho = _parse(cfg, bound)
    fh = family_hull(rho, bound, args.quadrants)
    verts = fh.hull.vertex_set()
    d = best_diagonal(rho).d
    if cfg.format == "svg" or cfg.extra.get("figure"):
        import numpy as np

        from .plotting import hull_figure

        from .indexsets import index_list

        # even stride so large families stay readable and the file small
        size = len(index_list(rho, bound)) ** 2 * args.quadrants
        stride = max(1, -(-size // args.plot_points))
        pts = [
            (x / w, y / w)
            for i, (_, _, _, _, x, y, w) in enumerate(iter_family(rho, bound, args.quadrants))
            if i % stride == 0
        ]
        pts_arr = np.array(pts) if pts else np.zeros((0, 2))
        hull_figure(
            svg_path(cfg), rho.value, pts_arr, fh.hull.vertices, d,
            _pentagon(rho.value, d, gamma_sup(rho), args.quadrants), args.quadrants,
            [pt.xy for pt in fh.extreme_points()],
            title=f"rho = {cfg.rho_expr}, index bound {bound}, {args.quadrants} quadrant(s)",
        )
    if cfg.format == "svg":
        return EXIT_OK
    if cfg.format == "json":
        labels = fh.labels
        payload = {
            "index_bound": bound,
            "quadrants": args.quadrants,
            "area": rat(fh.hull.area),
            "best_diagonal_in_family": rat(fh.best_diagonal),
            "best_diagonal_index": fh.best_index,
            "vertices": [
                {"x": rat(x), "y": rat(y), "label": list(labels.get(canonical(h), ("?",)))}
                for h, (x, y) in zip(fh.hull.hom, fh.hull.vertices)
            ],
        }
        write_json(cfg, payload, rho)
        return EXIT_OK
    with open_out(cfg.output_path) as out:
        write_header(out, cfg, rho)
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["m", "n", "sign_x", "sign_y", "x_num", "x_den", "y_num", "y_den", "is_extreme"])
        for m, n, sx, sy, x, y, wt in iter_family(rho, bound, args.quadrants):
            h = canonical((x, y, wt))
            fx, fy = Fraction(x, wt), Fraction(y, wt)
            w.writerow([m, n, sx, sy, fx.numerator, fx.denominator, fy.numerator, fy.denominator,
                        int(h in verts)])
    return EXIT_OK


def cmd_classify(cfg: CommandConfig, args) -> int:
    from .diagonal import domination_check, extremality, in_E, j_rho_t, k_rho, u_seq, v_seq
    from .indexsets import m_seq, run_end

    rho = _parse(cfg, cfg.max_index)
    rep = extremality(rho)
    if cfg.format == "csv":
        with open_out(cfg.output_path) as fh:
            write_header(fh, cfg, rho)
            w = csv.writer(fh, lineterminator="\n")
            count = args.terms
            p, q = rho.numerator, rho.denominator
            if rho.high and 3 * p < 2 * q:
                w.writerow(["k", "N_k", "u_k"])
                for k in range(count):
                    if run_end(rho, k) > rho.max_safe_index:
                        break
                    w.writerow([k, run_end(rho, k), u_seq(rho, k)])
            elif in_E(rho):
                w.writerow(["j", "M_j", "v_j"])
                for j in range(1, count + 1):
                    w.writerow([j, m_seq(rho, j), v_seq(rho, j)])
            else:
                raise RotsetError("no u/v sequence applies to this parameter")
        return EXIT_OK
    payload = rep.describe()
    payload.pop("rho_expr", None)
    if args.verify:
        dom = domination_check(rho, rep.d, realizing_index=rep.realizing_index)
        payload["verification"] = {
            "bound": dom.bound,
            "points_above_line": len(dom.strict_above),
            "points_on_line": len(dom.on_line),
        }
    write_json(cfg, payload, rho)
    return EXIT_OK


def cmd_roundness(cfg: CommandConfig, args) -> int:
    from .roundness import roundness

    bound = cfg.max_index
    rho = _parse(cfg, bound)
    rep = roundness(rho, bound)
    rep.digits = args.digits
    payload = rep.describe()
    payload.pop("rho_expr", None)
    write_json(cfg, payload, rho)
    return EXIT_OK if rep.sandwich_ok in (True, None) else EXIT_CERT


SCAN_COLUMNS = [
    "rho_expr", "lower_factor_num", "lower_factor_den", "upper_factor_num", "upper_factor_den",
    "estimate_factor_num", "estimate_factor_den", "iso_decimal", "d_num", "d_den", "tag",
    "jump", "rho_num", "rho_den", "error",
]


def cmd_scan(cfg: CommandConfig, args) -> int:
    from .roundness import grid_exprs, scan

    exprs = grid_exprs(args.start, args.stop, args.step, args.offset)
    res = scan(exprs, cfg.max_index, cfg.precision, args.jump_factor, args.workers)
    if cfg.format == "svg" or cfg.extra.get("figure"):
        from math import pi

        from .plotting import scan_figure

        ok = [r for r in res.rows if r.report is not None]
        xs = [float(r.report.rho.value) for r in ok]
        scan_figure(
            svg_path(cfg), xs,
            [float(r.report.lower) / pi for r in ok],
            [float(r.report.upper) / pi for r in ok],
            [float(r.report.estimate) / pi for r in ok] if cfg.max_index else None,
            [float(r.report.rho.value) for r in ok if r.jump],
            title=f"roundness bounds on [{args.start}, {args.stop}]",
        )
    if cfg.format != "svg":
        with open_out(cfg.output_path) as fh:
            write_header(fh, cfg)
            fh.write(f"# jump_factor={args.jump_factor}\n# typical_step={res.typical_step!r}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SCAN_COLUMNS)
            for row in res.rows:
                rep = row.report
                if rep is None:
                    w.writerow([row.expr] + [""] * 10 + [0, "", "", row.error])
                    continue
                est = rep.estimate
                w.writerow([
                    row.expr, rep.lower.numerator, rep.lower.denominator,
                    rep.upper.numerator, rep.upper.denominator,
                    "" if est is None else est.numerator, "" if est is None else est.denominator,
                    rep.iso, rep.d.numerator, rep.d.denominator, rep.tag, int(row.jump),
                    rep.rho.numerator, rep.rho.denominator, "",
                ])
    failed = any(r.report is not None and r.report.sandwich_ok is False for r in res.rows)
    return EXIT_CERT if failed else EXIT_OK


def cmd_simulate(cfg: CommandConfig, args) -> int:
    from .denjoy import CIRCLES, build_denjoy, ensemble_containment
    from .geometry import family_hull

    bound = cfg.max_index
    rho = _parse(cfg, bound)
    dm = build_denjoy(rho, args.wander)
    hull = family_hull(rho, bound, quadrants=4).hull
    rep = ensemble_containment(dm, hull, args.orbits, args.steps, Fraction(args.epsilon), args.seed)
    if cfg.format == "svg" or cfg.extra.get("figure"):
        from .plotting import simulate_figure

        simulate_figure(svg_path(cfg), rho.value, rep.estimates, rep.inside, hull.vertices,
                        title=f"rotation estimates, rho = {cfg.rho_expr}, T = {args.steps}")
    if cfg.format == "json":
        write_json(cfg, {
            "containment_fraction": rep.fraction,
            "orbits": [
                {"orbit_id": i, "start_circle": CIRCLES[c], "start_angle": float(a),
                 "est_x": float(e[0]), "est_y": float(e[1]), "inside_hull": ok}
                for i, (c, a, e, ok) in enumerate(zip(rep.start_circle, rep.start_angle, rep.estimates, rep.inside))
            ],
        }, rho)
    elif cfg.format == "csv":
        with open_out(cfg.output_path) as fh:
            write_header(fh, cfg, rho)
            fh.write(f"# containment_fraction={rep.fraction!r}\n")
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["orbit_id", "start_circle", "start_angle", "est_x", "est_y", "inside_hull"])
            for i, (c, a, e, ok) in enumerate(zip(rep.start_circle, rep.start_angle, rep.estimates, rep.inside)):
                w.writerow([i, CIRCLES[c], repr(float(a)), repr(float(e[0])), repr(float(e[1])), int(ok)])
    return EXIT_OK if rep.fraction == 1.0 else EXIT_CERT


def cmd_certify(cfg: CommandConfig, args) -> int:
    bound = cfg.max_index
    rho = _parse(cfg, bound)
    if args.uncertainty is not None:
        rho = replace(rho, uncertainty=Fraction(args.uncertainty))
    rep = certify_stability(rho, bound)
    payload = rep.describe()
    payload.pop("rho_expr", None)
    write_json(cfg, payload, rho)
    return EXIT_OK if rep.passed else EXIT_CERT


def cmd_claim_check(cfg: CommandConfig, args) -> int:
    from .geometry import claim_equivalence_check

    bound = cfg.max_index
    rho = _parse(cfg, bound)
    rep = claim_equivalence_check(rho, bound, args.difference_bound)
    write_json(cfg, {
        "quadrant_bound": rep.quadrant_bound,
        "difference_bound": rep.difference_bound,
        "difference_points": rep.difference_points,
        "distinct_difference_points": rep.distinct,
        "outside_hull": [list(v) for v in rep.outside],
        "quadrant_points_missing": rep.reverse_missing,
        "ok": rep.ok,
    }, rho)
    return EXIT_OK if rep.ok else EXIT_CERT


COMMANDS = {
    "alpha": cmd_alpha,
    "hull": cmd_hull,
    "classify": cmd_classify,
    "roundness": cmd_roundness,
    "scan": cmd_scan,
    "simulate": cmd_simulate,
    "certify": cmd_certify,
    "claim-check": cmd_claim_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotset",
        description="Exact rotation-set computations for a parametric family of torus maps.",
    )
    parser.add_argument("--version", action="version", version=f"rotset {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, emit_choices, default_emit, rho=True):
        if rho:
            p.add_argument("--rho", required=True, help="parameter expression, e.g. '0.93+pi*1e-5'")
        p.add_argument("--precision", type=int, default=None,
                       help=f"decimal digits kept when truncating (default ${PRECISION_ENV} or 15)")
        p.add_argument("--max-index", type=int, default=None, help="index bound / certified window")
        p.add_argument("--emit", choices=emit_choices, default=default_emit)
        p.add_argument("--out", default=None, help="output file (default: stdout, or <subcommand>.svg)")
        p.add_argument("--figure", default=None, help="also render an SVG figure to this path")

    p = sub.add_parser("alpha", help="alpha_m and index-set membership for m = 1..count")
    common(p, ["csv", "json", "svg"], "csv")
    p.add_argument("--count", type=int, default=100)

    p = sub.add_parser("hull", help="exact hull of the truncated point family")
    common(p, ["svg", "csv", "json"], "json")
    p.add_argument("--quadrants", type=int, choices=[1, 4], default=1)
    p.add_argument("--plot-points", type=int, default=50_000, help="approximate cap on scattered points in SVG")

    p = sub.add_parser("classify", help="best diagonal point and its extremality")
    common(p, ["json", "csv"], "json")
    p.add_argument("--terms", type=int, default=20, help="rows of the u/v table in csv mode")
    p.add_argument("--verify", action="store_true", help="also run the x + y <= 2d domination check")

    p = sub.add_parser("roundness", help="roundness bounds, ISO roundness and hull estimate")
    common(p, ["json"], "json")
    p.add_argument("--digits", type=int, default=12, help="digits in decimal renderings")

    p = sub.add_parser("scan", help="roundness bounds over a parameter grid")
    common(p, ["csv", "svg"], "csv", rho=False)
    p.add_argument("--from", dest="start", required=True)
    p.add_argument("--to", dest="stop", required=True)
    p.add_argument("--step", required=True)
    p.add_argument("--offset", default="pi*1e-7", help="irrational shift added to each grid value")
    p.add_argument("--jump-factor", type=float, default=10.0)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("simulate", help="bouquet-of-circles orbit ensemble")
    common(p, ["csv", "json", "svg"], "csv")
    p.add_argument("--steps", type=int, default=10_000)
    p.add_argument("--orbits", type=int, default=100)
    p.add_argument("--epsilon", default="0.05")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--wander", type=int, default=1000, help="number of wandering intervals per side")

    p = sub.add_parser("certify", help="check surrogate stability up to an index")
    common(p, ["json"], "json")
    p.add_argument("--uncertainty", default=None, help="override the surrogate's uncertainty radius")

    p = sub.add_parser("claim-check", help="difference family inside the four-quadrant hull")
    common(p, ["json"], "json")
    p.add_argument("--difference-bound", type=int, default=20)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        precision = args.precision if args.precision is not None else default_precision()
        max_index = args.max_index if args.max_index is not None else DEFAULT_BOUNDS[args.subcommand]
        extra = {}
        if args.figure:
            extra["figure"] = args.figure
        if args.subcommand == "scan":
            extra.update({"from": args.start, "to": args.stop, "step": args.step, "offset": args.offset})
        if args.subcommand == "certify" and args.uncertainty is not None:
            extra["uncertainty_override"] = args.uncertainty
        if args.subcommand == "simulate":
            extra.update({"steps": args.steps, "orbits": args.orbits, "epsilon": args.epsilon,
                          "seed": args.seed, "wander": args.wander})
        cfg = CommandConfig(args.subcommand, getattr(args, "rho", None), precision, max_index,
                            args.out, args.emit, extra)
        return COMMANDS[args.subcommand](cfg, args)
    except RotsetError as exc:
        print(f"rotset: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
