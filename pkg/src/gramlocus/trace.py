"""2-D implicit-curve tracing of locus residual fields.

Samples ``g(x) - c`` on a rectangular grid and extracts the zero contour
with marching squares (linear interpolation on cell edges, saddle cells
disambiguated by the cell-center sample).  Grid methods tolerate the
absolute-value kinks of the residual at foci, which defeat continuation
tracers.  Output goes to polylines, and from there to SVG paths, CSV
rows, or a rendered PNG figure.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import DimensionNot2D
from .locus import LocusSpec, eval_g
from .spaces import GramSpace

#: Exactly-zero grid samples are nudged to this to avoid degenerate topology.
ZERO_SHIFT = 1e-300

#: Environment variable capping worker threads for grid sampling.
THREADS_ENV = "LOCUS_THREADS"


@dataclass(frozen=True)
class Window:
    """Axis-aligned sampling window with grid resolution."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int = 512
    ny: int = 512

    def __post_init__(self) -> None:
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ValueError("window must have positive extent")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid resolution must be at least 2 per axis")

    @property
    def cell_diagonal(self) -> float:
        dx = (self.x_max - self.x_min) / (self.nx - 1)
        dy = (self.y_max - self.y_min) / (self.ny - 1)
        return float(np.hypot(dx, dy))


@dataclass(frozen=True)
class Polyline:
    """Ordered 2-D vertex list; ``closed`` joins last back to first."""

    points: np.ndarray
    closed: bool

    def __post_init__(self) -> None:
        p = np.asarray(self.points, dtype=float)
        if p.ndim != 2 or p.shape[1] != 2 or p.shape[0] < 2:
            raise ValueError("polyline needs at least two 2-D points")
        if np.any(np.all(p[1:] == p[:-1], axis=1)):
            raise ValueError("consecutive polyline points must be distinct")
        p = p.copy()
        p.flags.writeable = False
        object.__setattr__(self, "points", p)

    def length(self) -> float:
        p = self.points
        seg = np.linalg.norm(np.diff(p, axis=0), axis=1).sum()
        if self.closed:
            seg += float(np.linalg.norm(p[0] - p[-1]))
        return float(seg)


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _residual_grid(space: GramSpace, spec: LocusSpec, window: Window):
    xs = np.linspace(window.x_min, window.x_max, window.nx)
    ys = np.linspace(window.y_min, window.y_max, window.ny)

    def rows(i0: int, i1: int) -> np.ndarray:
        xb, yb = np.meshgrid(xs[i0:i1], ys, indexing="ij")
        pts = np.stack([xb.ravel(), yb.ravel()], axis=1)
        vals = eval_g(space, spec, pts) - spec.c
        return vals.reshape(i1 - i0, window.ny)

    workers = _thread_count()
    if workers > 1:
        bounds = np.linspace(0, window.nx, workers + 1, dtype=int)
        chunks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(lambda ab: rows(*ab), chunks))
        r = np.vstack(blocks)
    else:
        r = rows(0, window.nx)
    return xs, ys, r


def trace_locus(space: GramSpace, spec: LocusSpec, window: Window) -> list[Polyline]:
    """Extract the ``g = c`` contour inside the window as polylines.

    Returns an empty list when the level set does not intersect the
    window.  Vertices lie on grid-cell edges; their residuals are bounded
    by the field's Lipschitz constant times the cell diagonal.
    """
    if space.dim != 2:
        raise DimensionNot2D(f"tracing needs a 2-D space, got dim {space.dim}")
    xs, ys, r = _residual_grid(space, spec, window)
    r = np.where(r == 0.0, ZERO_SHIFT, r)
    pos = r > 0.0

    points: dict[tuple, tuple[float, float]] = {}

    def edge_point(kind: str, i: int, j: int) -> tuple:
        key = (kind, i, j)
        if key not in points:
            if kind == "h":
                r0, r1 = r[i, j], r[i + 1, j]
                t = r0 / (r0 - r1)
                points[key] = (xs[i] + t * (xs[i + 1] - xs[i]), float(ys[j]))
            else:
                r0, r1 = r[i, j], r[i, j + 1]
                t = r0 / (r0 - r1)
                points[key] = (float(xs[i]), ys[j] + t * (ys[j + 1] - ys[j]))
        return key

    segments: list[tuple[tuple, tuple]] = []
    a = pos[:-1, :-1]
    b = pos[1:, :-1]
    c = pos[1:, 1:]
    d = pos[:-1, 1:]
    mixed = ~((a == b) & (b == c) & (c == d))

    for i, j in np.argwhere(mixed):
        i = int(i)
        j = int(j)
        pa, pb, pc, pd = pos[i, j], pos[i + 1, j], pos[i + 1, j + 1], pos[i, j + 1]
        crossed = []
        if pa != pb:
            crossed.append(("bottom", ("h", i, j)))
        if pb != pc:
            crossed.append(("right", ("v", i + 1, j)))
        if pd != pc:
            crossed.append(("top", ("h", i, j + 1)))
        if pa != pd:
            crossed.append(("left", ("v", i, j)))
        if len(crossed) == 2:
            (_, e0), (_, e1) = crossed
            segments.append((edge_point(*e0), edge_point(*e1)))
        elif len(crossed) == 4:
            # Saddle: the center sample decides which diagonal is bridged.
            cx = 0.5 * (xs[i] + xs[i + 1])
            cy = 0.5 * (ys[j] + ys[j + 1])
            center = eval_g(space, spec, np.array([cx, cy])) - spec.c
            center_pos = center > 0.0 or center == 0.0
            by_name = dict(crossed)
            if center_pos == pa:
                pairs = (("bottom", "right"), ("top", "left"))
            else:
                pairs = (("bottom", "left"), ("top", "right"))
            for n0, n1 in pairs:
                segments.append((edge_point(*by_name[n0]), edge_point(*by_name[n1])))

    return _assemble(segments, points)


def _assemble(segments, points) -> list[Polyline]:
    adj: dict[tuple, list[tuple]] = {}
    for e0, e1 in segments:
        adj.setdefault(e0, []).append(e1)
        adj.setdefault(e1, []).append(e0)

    used: set[frozenset] = set()

    def walk(start: tuple) -> tuple[list[tuple], bool]:
        chain = [start]
        cur = start
        while True:
            nxt = None
            for nb in adj[cur]:
                if frozenset((cur, nb)) not in used:
                    nxt = nb
                    break
            if nxt is None:
                return chain, False
            used.add(frozenset((cur, nxt)))
            chain.append(nxt)
            cur = nxt
            if cur == start:
                return chain[:-1], True

    chains: list[tuple[list[tuple], bool]] = []
    for node in sorted(n for n, nbs in adj.items() if len(nbs) == 1):
        if any(frozenset((node, nb)) not in used for nb in adj[node]):
            chains.append(walk(node))
    for node in sorted(adj):
        while any(frozenset((node, nb)) not in used for nb in adj[node]):
            chains.append(walk(node))

    polylines = []
    for chain, closed in chains:
        verts = [points[e] for e in chain]
        cleaned = [verts[0]]
        for v in verts[1:]:
            if v != cleaned[-1]:
                cleaned.append(v)
        if closed and len(cleaned) > 1 and cleaned[0] == cleaned[-1]:
            cleaned.pop()
        if len(cleaned) >= 2:
            polylines.append(Polyline(points=np.array(cleaned), closed=closed))
    return polylines


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def emit_svg(polylines: list[Polyline], window: Window, path) -> None:
    """Write polylines as an SVG document with one path element each.

    The viewBox maps the window directly (y negated so the plot reads
    y-up), stroke width is 1 user unit, no fill.  Output bytes are a pure
    function of the inputs.
    """
    w = window.x_max - window.x_min
    h = window.y_max - window.y_min
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{_fmt(window.x_min)} {_fmt(-window.y_max)} {_fmt(w)} {_fmt(h)}">',
        '<g stroke="black" fill="none" stroke-width="1">',
    ]
    for pl in polylines:
        cmds = [f"M {_fmt(pl.points[0, 0])} {_fmt(-pl.points[0, 1])}"]
        cmds.extend(f"L {_fmt(x)} {_fmt(-y)}" for x, y in pl.points[1:])
        if pl.closed:
            cmds.append("Z")
        lines.append(f'<path d="{" ".join(cmds)}"/>')
    lines.append("</g>")
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def emit_csv(polylines: list[Polyline], path) -> None:
    """Write vertices as ``polyline_id,x,y`` rows at 17 significant digits."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["polyline_id", "x", "y"])
        for pid, pl in enumerate(polylines):
            for x, y in pl.points:
                writer.writerow([pid, _fmt(x), _fmt(y)])


def render_png(
    polylines: list[Polyline],
    window: Window,
    path,
    foci: np.ndarray | None = None,
    title: str | None = None,
) -> None:
    """Render polylines (and optionally foci) to a PNG figure."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 6.0 * (window.y_max - window.y_min) / (window.x_max - window.x_min)))
    for pl in polylines:
        pts = pl.points
        if pl.closed:
            pts = np.vstack([pts, pts[:1]])
        ax.plot(pts[:, 0], pts[:, 1], linewidth=1.2)
    if foci is not None:
        foci = np.atleast_2d(np.asarray(foci, dtype=float))
        ax.plot(foci[:, 0], foci[:, 1], "k+", markersize=9, markeredgewidth=1.5)
    ax.set_xlim(window.x_min, window.x_max)
    ax.set_ylim(window.y_min, window.y_max)
    ax.set_aspect("equal")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
