"""Render the inferred class hierarchy as a figure file."""

from __future__ import annotations

from pathlib import Path

from .taxonomy import Taxonomy


def _layers(tax: Taxonomy) -> dict[int, int]:
    """Longest-path depth from the Top group per group id."""
    depth = {tax.top_id: 0}
    changed = True
    while changed:
        changed = False
        for gid, children in tax.children.items():
            if gid not in depth:
                continue
            for child in children:
                want = depth[gid] + 1
                if depth.get(child, -1) < want:
                    depth[child] = want
                    changed = True
    return depth


def render_taxonomy(tax: Taxonomy, path: str | Path, title: str = "Inferred class hierarchy") -> None:
    """Draw the taxonomy DAG layered by depth and save it to ``path``."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    depth = _layers(tax)
    max_depth = max(depth.values())
    by_layer: dict[int, list[int]] = {}
    for gid in sorted(tax.groups, key=lambda g: sorted(tax.groups[g])):
        by_layer.setdefault(depth.get(gid, max_depth), []).append(gid)

    positions: dict[int, tuple[float, float]] = {}
    for layer, members in by_layer.items():
        for i, gid in enumerate(members):
            positions[gid] = ((i + 1) / (len(members) + 1), -layer)

    width = max(8.0, 1.6 * max(len(m) for m in by_layer.values()))
    height = max(4.0, 1.2 * (max_depth + 1))
    fig, ax = plt.subplots(figsize=(width, height))
    for gid, children in tax.children.items():
        for child in children:
            x0, y0 = positions[gid]
            x1, y1 = positions[child]
            ax.plot([x0, x1], [y0, y1], color="0.65", linewidth=0.8, zorder=1)
    for gid, (x, y) in positions.items():
        text = "\n".join(sorted(tax.groups[gid]))
        ax.text(
            x,
            y,
            text,
            ha="center",
            va="center",
            fontsize=8,
            zorder=2,
            bbox=dict(boxstyle="round,pad=0.3", facecolor="lightyellow", edgecolor="0.4"),
        )
    ax.set_title(title)
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
