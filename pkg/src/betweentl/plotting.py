"""Figures for command reports (written only when a figure directory is given)."""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _figure(width: float = 6.4, height: float | None = None):
    golden = (math.sqrt(5) - 1.0) / 2.0
    fig, ax = plt.subplots(figsize=(width, height or width * golden))
    ax.grid(True, alpha=0.3)
    return fig, ax


def _save(fig, path: Path) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return str(path)


def stage_sizes_figure(stages: Sequence[dict], path: Path, title: str = "") -> str:
    """Bar chart of the dag size after each translation stage (log scale)."""
    fig, ax = _figure()
    names = ["input"] + [s["name"] for s in stages]
    sizes = ([stages[0]["dag_size_in"]] if stages else []) + [s["dag_size_out"] for s in stages]
    ax.bar(range(len(sizes)), sizes, color="#4c72b0")
    ax.set_xticks(range(len(sizes)))
    ax.set_xticklabels(names[:len(sizes)], rotation=35, ha="right", fontsize=8)
    ax.set_yscale("log")
    ax.set_ylabel("dag size")
    ax.set_title(title or "size along the translation pipeline", fontsize=10)
    return _save(fig, path)


def size_fit_figure(points: Sequence[dict], worst: dict, exponent: float, path: Path) -> str:
    """Log-log scatter of output size against input size with the fitted power law."""
    fig, ax = _figure()
    ax.scatter([p["n"] for p in points], [p["size"] for p in points], s=6, alpha=0.3,
               color="#8c8c8c", label="all (u, v, child)")
    ns = sorted(int(n) for n in worst)
    ws = [worst[str(n)] for n in ns]
    ax.plot(ns, ws, "o", color="#c44e52", label="worst at each size")
    if ns:
        c = ws[-1] / ns[-1] ** exponent
        ax.plot(ns, [c * n ** exponent for n in ns], "-", color="#c44e52",
                label=f"fit: size ∝ n^{exponent:.2f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("|u| + |v| + dag size of child")
    ax.set_ylabel("dag size of result")
    ax.legend(fontsize=8)
    return _save(fig, path)


def equivalence_figure(words: Sequence[str], matrix, path: Path, title: str = "") -> str:
    """Heat map of a game-equivalence matrix over a list of words."""
    fig, ax = _figure(width=5.5, height=5.5)
    ax.grid(False)
    ax.imshow(matrix, cmap="Greys", interpolation="nearest")
    ax.set_xticks(range(len(words)))
    ax.set_yticks(range(len(words)))
    ax.set_xticklabels([w or "ε" for w in words], rotation=90, fontsize=6)
    ax.set_yticklabels([w or "ε" for w in words], fontsize=6)
    ax.set_title(title, fontsize=10)
    return _save(fig, path)


__all__ = ["stage_sizes_figure", "size_fit_figure", "equivalence_figure"]
