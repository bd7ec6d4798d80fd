"""Matplotlib rendering of bigraded rank tables."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _half(a2: int) -> str:
    return str(a2 // 2) if a2 % 2 == 0 else f"{a2}/2"


def save_rank_table(table: dict, title: str, path: str) -> str:
    """Render a (Maslov, Alexander) rank table as an annotated grid and save
    it; returns the path."""
    fig, ax = plt.subplots(figsize=(5, 4))
    if table:
        ms = [m for (m, _) in table]
        a2s = [a for (_, a) in table]
        for (m, a2), k in sorted(table.items()):
            ax.scatter([a2 / 2], [m], s=220, c="#4878cf", zorder=2)
            ax.annotate(str(k), (a2 / 2, m), ha="center", va="center",
                        color="white", zorder=3)
        ax.set_xlim(min(a2s) / 2 - 1, max(a2s) / 2 + 1)
        ax.set_ylim(min(ms) - 1, max(ms) + 1)
    ax.set_xlabel("Alexander grading")
    ax.set_ylabel("Maslov grading")
    ax.set_title(title)
    ax.grid(True, linestyle=":", zorder=0)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_dir_tables(tables: dict[str, dict], plot_dir: str, stem: str) -> list[str]:
    """Save one figure per named table into plot_dir; returns the paths."""
    os.makedirs(plot_dir, exist_ok=True)
    out = []
    for name, table in tables.items():
        safe = "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name)
        out.append(save_rank_table(table, name, os.path.join(plot_dir, f"{stem}_{safe}.png")))
    return out
