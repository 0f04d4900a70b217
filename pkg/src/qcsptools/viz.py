"""Render structures to image files with matplotlib.

Elements sit on a circle; binary relations are drawn as arrows (loops as
small circles), unary relations as colored rings around the elements,
higher arities as a text legend.  Meant for quick visual inspection of
small structures, not for publication graphics.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Circle, FancyArrowPatch

from .structures import Structure

_RING_COLORS = ["tab:red", "tab:green", "tab:orange", "tab:purple", "tab:brown"]


def _layout(n, radius=1.0):
    if n == 1:
        return [(0.0, 0.0)]
    return [
        (radius * math.cos(2 * math.pi * i / n - math.pi / 2),
         radius * math.sin(2 * math.pi * i / n - math.pi / 2))
        for i in range(n)
    ]


def draw_structure(a: Structure, path: str, title: str = "") -> str:
    """Write a PNG (or whatever the extension asks for) and return the path."""
    pos = _layout(a.size)
    fig, ax = plt.subplots(figsize=(5, 5))
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)

    names = a.element_names()
    for i, (x, y) in enumerate(pos):
        ax.add_patch(Circle((x, y), 0.07, color="tab:blue", zorder=3))
        ax.annotate(names[i], (x, y), textcoords="offset points",
                    xytext=(10, 10), fontsize=11, zorder=4)

    ring = 0
    legend_lines = []
    for (name, arity), tset in zip(a.signature.relations, a.tuples):
        if arity == 1:
            color = _RING_COLORS[ring % len(_RING_COLORS)]
            ring += 1
            for (e,) in tset:
                ax.add_patch(Circle(pos[e], 0.12 + 0.04 * ring, fill=False,
                                    color=color, zorder=2))
            legend_lines.append(f"{name}: ring ({color.split(':')[-1]})")
        elif arity == 2:
            for s, t in sorted(tset):
                if s == t:
                    x, y = pos[s]
                    ax.add_patch(Circle((x, y + 0.14), 0.08, fill=False,
                                        color="black", zorder=1))
                else:
                    ax.add_patch(FancyArrowPatch(
                        pos[s], pos[t], arrowstyle="-|>", mutation_scale=12,
                        shrinkA=8, shrinkB=8, color="black",
                        connectionstyle="arc3,rad=0.08", zorder=1))
            if len(a.signature.relations) > 1:
                legend_lines.append(f"{name}: arrows")
        else:
            for t in sorted(tset):
                legend_lines.append(f"{name}{tuple(names[x] for x in t)}")
    for i, c in enumerate(a.constants):
        legend_lines.append(f"c{i + 1} = {names[c]}")
    if legend_lines:
        ax.text(0.02, 0.02, "\n".join(legend_lines), transform=ax.transAxes,
                fontsize=8, va="bottom")
    lim = 1.45
    ax.set_xlim(-lim, lim)
    ax.set_ylim(-lim, lim)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
