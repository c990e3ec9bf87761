"""Hand-written SVG rendering of an instance and a disk solution."""
from __future__ import annotations

import math
from typing import Optional

SCALE = 8.0       # pixels per meter
PAD = 24.0
DOT = 2.5         # marker radius for zero-radius disks, pixels


class RenderError(ValueError):
    pass


def _f(v: float) -> str:
    s = f"{v:.3f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def check_match(inst, solution: dict) -> None:
    meta = solution.get("meta", {})
    if "n" in meta and meta["n"] != inst.n:
        raise RenderError(f"solution was computed for n = {meta['n']}, instance has n = {inst.n}")
    if "instance" in meta and meta["instance"] != inst.name:
        raise RenderError(f"solution belongs to instance {meta['instance']!r}, not {inst.name!r}")


def render_svg(inst, solution: dict, ell: Optional[float] = None) -> str:
    """SVG text for ``inst`` with the disks of a solution dict.

    With ``ell`` set, selected centers closer than ``1.5 * ell`` are joined
    by gray segments labelled with their distance.
    """
    check_match(inst, solution)
    disks = [(float(d["x"]), float(d["y"]), float(d["r"])) for d in solution.get("disks", [])]
    xs = [p.x for p in inst.points] + [x - r for x, _, r in disks] + [x + r for x, _, r in disks]
    ys = [p.y for p in inst.points] + [y - r for _, y, r in disks] + [y + r for _, y, r in disks]
    xmin, xmax, ymin, ymax = min(xs), max(xs), min(ys), max(ys)
    width = (xmax - xmin) * SCALE + 2 * PAD
    height = (ymax - ymin) * SCALE + 2 * PAD

    def X(x):
        return (x - xmin) * SCALE + PAD

    def Y(y):
        return (ymax - y) * SCALE + PAD

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        "<style>.disk{fill:#4a90d9;fill-opacity:0.12;stroke:#1f5fa8;stroke-width:1}"
        ".zero{fill:#1f5fa8;fill-opacity:1}.point{fill:#c0392b}"
        ".kappa{font:10px sans-serif;fill:#333}.sep{stroke:#999;stroke-width:0.8}"
        ".dist{font:9px sans-serif;fill:#777}</style>",
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="white"/>',
    ]
    if ell is not None and ell > 0:
        for a in range(len(disks)):
            for b in range(a + 1, len(disks)):
                (xa, ya, _), (xb, yb, _) = disks[a], disks[b]
                dd = math.hypot(xa - xb, ya - yb)
                if dd < 1.5 * ell:
                    out.append(f'<line class="sep" x1="{_f(X(xa))}" y1="{_f(Y(ya))}" '
                               f'x2="{_f(X(xb))}" y2="{_f(Y(yb))}"/>')
                    out.append(f'<text class="dist" x="{_f(X((xa + xb) / 2))}" '
                               f'y="{_f(Y((ya + yb) / 2))}">{dd:.2f}</text>')
    for x, y, r in disks:
        if r > 0:
            out.append(f'<circle class="disk" cx="{_f(X(x))}" cy="{_f(Y(y))}" r="{_f(r * SCALE)}"/>')
        else:
            out.append(f'<circle class="disk zero" cx="{_f(X(x))}" cy="{_f(Y(y))}" r="{_f(DOT)}"/>')
    for p, k in zip(inst.points, inst.kappa):
        out.append(f'<rect class="point" x="{_f(X(p.x) - 1.5)}" y="{_f(Y(p.y) - 1.5)}" width="3" height="3"/>')
        out.append(f'<text class="kappa" x="{_f(X(p.x) + 3)}" y="{_f(Y(p.y) - 3)}">{k}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
