"""Static SVG figures (1000 x 1000 viewport), byte-stable across runs."""

from __future__ import annotations

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

SIZE_IN = 1000 / 72  # svg backend works in points


def _setup():
    plt.rcParams["svg.hashsalt"] = "rotset"
    plt.rcParams["svg.fonttype"] = "path"
    fig, ax = plt.subplots(figsize=(SIZE_IN, SIZE_IN), dpi=72)
    return fig, ax


def _save(fig, path: str) -> None:
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    plt.close(fig)


def hull_figure(path: str, rho: Fraction, points: np.ndarray, hull_xy: list[tuple],
                d: Fraction, pentagon: list[tuple] | None, quadrants: int,
                extreme_xy: list[tuple] | None = None, title: str = "") -> None:
    fig, ax = _setup()
    r = float(rho)
    if len(points):
        ax.scatter(points[:, 0], points[:, 1], s=2, color="0.55", lw=0, label="family points")
    hx = [float(x) for x, _ in hull_xy] + [float(hull_xy[0][0])]
    hy = [float(y) for _, y in hull_xy] + [float(hull_xy[0][1])]
    ax.plot(hx, hy, color="tab:blue", lw=1.2, label="hull")
    if extreme_xy:
        ex = np.array([[float(x), float(y)] for x, y in extreme_xy])
        ax.scatter(ex[:, 0], ex[:, 1], s=14, color="tab:red", zorder=3, label="extreme points")
    tt = np.linspace(0, 2 * np.pi, 721)
    ax.plot(r * np.cos(tt), r * np.sin(tt), color="0.3", lw=0.8, ls=":", label="circle of radius rho")
    dd = float(d)
    xs = np.linspace(-0.05, 2 * dd + 0.05, 2)
    ax.plot(xs, 2 * dd - xs, color="0.5", lw=0.8, label="x + y = 2d")
    ax.scatter([dd], [dd], marker="s", s=25, color="k", zorder=4, label="best diagonal point")
    if pentagon:
        px = [float(x) for x, _ in pentagon] + [float(pentagon[0][0])]
        py = [float(y) for _, y in pentagon] + [float(pentagon[0][1])]
        ax.plot(px, py, color="tab:green", lw=0.8, ls="--", label="bounding pentagon")
    lim = r * 1.08
    ax.set_xlim(-lim if quadrants == 4 else -0.02, lim)
    ax.set_ylim(-lim if quadrants == 4 else -0.02, lim)
    ax.set_aspect("equal")
    ax.set_xlabel("rotation x")
    ax.set_ylabel("rotation y")
    ax.set_title(title)
    ax.legend(loc="lower left", fontsize=8)
    _save(fig, path)


def alpha_figure(path: str, rho: Fraction, ms: list[int], alphas: list[Fraction], member: list[bool],
                 title: str = "") -> None:
    fig, ax = _setup()
    ms_in = [m for m, k in zip(ms, member) if k]
    al_in = [float(a) for a, k in zip(alphas, member) if k]
    ms_out = [m for m, k in zip(ms, member) if not k]
    al_out = [float(a) for a, k in zip(alphas, member) if not k]
    ax.scatter(ms_in, al_in, s=8, color="tab:red", label="alpha_m < rho")
    ax.scatter(ms_out, al_out, s=8, color="tab:blue", label="alpha_m > rho")
    ax.axhline(float(rho), color="0.4", lw=0.8)
    ax.set_xlabel("m")
    ax.set_ylabel("alpha_m")
    ax.set_ylim(0, 1)
    ax.set_title(title)
    ax.legend(loc="lower right", fontsize=8)
    _save(fig, path)


def scan_figure(path: str, rhos: list[float], lower: list[float], upper: list[float],
                estimate: list[float] | None, jumps: list[float], title: str = "") -> None:
    fig, ax = _setup()
    ax.plot(rhos, lower, ".", ms=3, color="tab:red", label="lower bound")
    ax.plot(rhos, upper, ".", ms=3, color="tab:blue", label="upper bound")
    if estimate:
        ax.plot(rhos, estimate, ".", ms=2, color="0.3", label="truncated hull estimate")
    for x in jumps:
        ax.axvline(x, color="0.85", lw=0.6, zorder=0)
    ax.set_xlabel("rho")
    ax.set_ylabel("roundness")
    ax.set_title(title)
    ax.legend(loc="lower left", fontsize=8)
    _save(fig, path)


def simulate_figure(path: str, rho: Fraction, estimates: np.ndarray, inside: list[bool],
                    hull_xy: list[tuple], title: str = "") -> None:
    fig, ax = _setup()
    hx = [float(x) for x, _ in hull_xy] + [float(hull_xy[0][0])]
    hy = [float(y) for _, y in hull_xy] + [float(hull_xy[0][1])]
    ax.plot(hx, hy, color="tab:blue", lw=1.0, label="truncated hull")
    ok = np.array(inside, dtype=bool)
    if ok.any():
        ax.scatter(estimates[ok, 0], estimates[ok, 1], s=12, color="tab:green", label="estimate inside")
    if (~ok).any():
        ax.scatter(estimates[~ok, 0], estimates[~ok, 1], s=16, color="tab:red", marker="x", label="estimate outside")
    lim = float(rho) * 1.1
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    ax.set_aspect("equal")
    ax.set_xlabel("rotation x")
    ax.set_ylabel("rotation y")
    ax.set_title(title)
    ax.legend(loc="lower left", fontsize=8)
    _save(fig, path)
