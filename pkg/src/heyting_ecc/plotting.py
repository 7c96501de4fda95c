"""Figures for reports: exponential tables and open-set lattices."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .topology import FiniteTopology, exponential  # noqa: E402


def exponential_table(topo: FiniteTopology) -> list[list[int]]:
    """Rows indexed by x, columns by y, entries x ** y as bitsets."""
    opens = topo.all_opens()
    return [[exponential(x, y).bits for y in opens] for x in opens]


def plot_exponential_table(topo: FiniteTopology, path: str, title: str | None = None) -> None:
    opens = list(topo.opens)
    index = {b: i for i, b in enumerate(opens)}
    table = exponential_table(topo)
    labels = [topo.name_of(b) for b in opens]
    n = len(opens)

    fig, ax = plt.subplots(figsize=(1.0 + 0.7 * n, 1.0 + 0.7 * n))
    ax.imshow([[index[v] for v in row] for row in table], cmap="Blues", vmin=0, vmax=max(n - 1, 1))
    for i, row in enumerate(table):
        for j, v in enumerate(row):
            ax.text(j, i, topo.name_of(v), ha="center", va="center", fontsize=10)
    ax.set_xticks(range(n), labels)
    ax.set_yticks(range(n), labels)
    ax.set_xlabel("y")
    ax.set_ylabel("x")
    ax.xaxis.set_label_position("top")
    ax.xaxis.tick_top()
    ax.set_title(title or "x^y", pad=24)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_open_lattice(topo: FiniteTopology, path: str, highlight: int | None = None) -> None:
    """Hasse diagram of the opens; opens containing the reference point are
    filled, ``highlight`` is outlined in red."""
    opens = list(topo.opens)
    ranks: dict[int, list[int]] = {}
    for b in opens:
        ranks.setdefault(bin(b).count("1"), []).append(b)
    pos = {}
    for r, row in ranks.items():
        for k, b in enumerate(row):
            pos[b] = (k - (len(row) - 1) / 2, r)

    covers = []
    for a in opens:
        for b in opens:
            if a != b and a & ~b == 0:
                between = any(c not in (a, b) and a & ~c == 0 and c & ~b == 0 for c in opens)
                if not between:
                    covers.append((a, b))

    fig, ax = plt.subplots(figsize=(4, 1.2 + 1.0 * len(ranks)))
    for a, b in covers:
        (x0, y0), (x1, y1) = pos[a], pos[b]
        ax.plot([x0, x1], [y0, y1], color="0.6", lw=1, zorder=1)
    p = topo.p_mask
    for b, (x, y) in pos.items():
        face = "tab:blue" if b & p else "white"
        edge = "red" if b == highlight else "black"
        ax.scatter([x], [y], s=500, c=face, edgecolors=edge, linewidths=2.5 if b == highlight else 1, zorder=2)
        ax.annotate(topo.name_of(b), (x, y), xytext=(14, 0), textcoords="offset points", va="center")
    ax.set_axis_off()
    ax.set_title(f"O(X), p = {topo.reference_name}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
