"""Figures written next to JSON reports (Agg backend, PNG files)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .posets import GPoset  # noqa: E402

RC = {
    "font.size": 9,
    "axes.titlesize": 10,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}


def _heights(P: GPoset) -> list[int]:
    # rank = length of the longest chain below; less is transitively closed
    order = sorted(range(P.size), key=lambda p: int(P.less[:, p].sum()))
    h = [0] * P.size
    for q in order:
        below = [h[p] + 1 for p in range(P.size) if P.less[p, q]]
        h[q] = max(below, default=0)
    return h


def hasse_diagram(P: GPoset, ax, title: str = "") -> None:
    """Draw the cover relations, elements at their rank, coloured by orbit."""
    h = _heights(P)
    orbit_of = P.orbit_data.orbit_of
    rows: dict[int, list[int]] = {}
    for p in range(P.size):
        rows.setdefault(h[p], []).append(p)
    pos = {}
    for y, members in rows.items():
        for i, p in enumerate(members):
            pos[p] = (i - (len(members) - 1) / 2, y)
    for p, q in P.covers():
        (x0, y0), (x1, y1) = pos[p], pos[q]
        ax.plot([x0, x1], [y0, y1], color="0.55", lw=0.8, zorder=1)
    cmap = plt.get_cmap("tab10")
    for p, (x, y) in pos.items():
        ax.scatter([x], [y], s=160, color=cmap(orbit_of[p] % 10), zorder=2, edgecolor="k", lw=0.5)
        ax.annotate(P.labels[p], (x, y), xytext=(0, -14), textcoords="offset points",
                    ha="center", va="top", fontsize=7)
    ax.set_title(title)
    ax.set_xticks([])
    ax.set_yticks(sorted(rows))
    ax.set_ylabel("rank")
    ax.margins(0.15, 0.25)


def counterexample_figure(P1: GPoset, P2: GPoset, h1: int, h2: int, out) -> Path:
    """Side-by-side Hasse diagrams of the counterexample pair."""
    with plt.rc_context(RC):
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.2))
        hasse_diagram(P1, axes[0], f"P1 (h1 = {h1})")
        hasse_diagram(P2, axes[1], f"P2 (h2 = {h2})")
        fig.suptitle(f"counterexample pair over {P1.group.name}")
        fig.tight_layout()
        out = Path(out)
        fig.savefig(out)
        plt.close(fig)
    return out


def sequence_figure(series: dict[str, list[int]], path, reference: dict[str, int] | None = None,
                    title: str = "") -> Path:
    """u_r against r, one line per labelled sequence; optional dashed xind levels."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.5, 3))
        cmap = plt.get_cmap("tab10")
        k = len(series)
        for i, (label, values) in enumerate(series.items()):
            # integer sequences coincide a lot; a small offset keeps each visible
            dy = (i - (k - 1) / 2) * min(0.04, 0.3 / max(k, 1))
            ax.plot(range(len(values)), [v + dy for v in values], marker="o", ms=4,
                    color=cmap(i % 10), label=label)
            if reference and label in reference:
                ax.axhline(reference[label], color=cmap(i % 10), ls="--", lw=0.8)
        ax.set_xlabel("subdivisions r")
        ax.set_ylabel("u_r = xind F(sd^r K)")
        ax.yaxis.get_major_locator().set_params(integer=True)
        ax.xaxis.get_major_locator().set_params(integer=True)
        if title:
            ax.set_title(title)
        if 1 < len(series) <= 10:
            ax.legend(fontsize=7, frameon=False)
        fig.tight_layout()
        out = Path(path)
        fig.savefig(out)
        plt.close(fig)
    return out
