"""Human-readable renderings, CSV tables and figures for duality runs."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.ticker import MaxNLocator  # noqa: E402

from .duality import FuzzSummary, MatrixCell  # noqa: E402

MATRIX_COLUMNS = ["k", "fe_mode", "require_fp", "wuf_exists", "branchwidth",
                  "theorem6", "theorem7"]

# deterministic PNG bytes
_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def _mark(verdict) -> str:
    if not verdict.hypothesis_met:
        return "vacuous"
    return "ok" if verdict.consistent else "VIOLATED"


def matrix_rows(cells: list[MatrixCell]) -> list[list]:
    return [[c.k, c.config.fe_mode, int(c.config.require_fp), int(c.theorem6.wuf_exists),
             c.theorem6.branchwidth, _mark(c.theorem6), _mark(c.theorem7)] for c in cells]


def render_matrix_text(name: str, cells: list[MatrixCell]) -> str:
    rows = matrix_rows(cells)
    header = MATRIX_COLUMNS
    widths = [max(len(str(x)) for x in col) for col in zip(header, *rows)]
    lines = [f"interpretation matrix: {name}"]
    for row in [header] + rows:
        lines.append("  ".join(str(x).ljust(w) for x, w in zip(row, widths)).rstrip())
    return "\n".join(lines) + "\n"


def matrix_csv(cells: list[MatrixCell]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(MATRIX_COLUMNS)
    w.writerows(matrix_rows(cells))
    return buf.getvalue()


def summary_csv(summary: FuzzSummary) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["fe_mode", "require_fp", "k", "theorem6_violations", "theorem7_violations"])
    for (mode, fp, k), (t6, t7) in sorted(summary.cells.items()):
        w.writerow([mode, int(fp), k, t6, t7])
    return buf.getvalue()


def render_summary_text(summary: FuzzSummary) -> str:
    lines = [f"corpus size: {summary.corpus_size}",
             f"findings: {len(summary.findings)}"]
    for (mode, fp, k), (t6, t7) in sorted(summary.cells.items()):
        lines.append(f"  {mode:<13} fp={int(fp)} k={k:<3} theorem6={t6:<5} theorem7={t7}")
    if summary.findings_dir:
        lines.append(f"findings dir: {summary.findings_dir}")
    return "\n".join(lines) + "\n"


def _readings(keys):
    return sorted({(mode, fp) for mode, fp, *_ in keys})


def plot_matrix(cells: list[MatrixCell], path) -> Path:
    """Grid of k (columns) by reading (rows), one panel per theorem."""
    readings = _readings((c.config.fe_mode, c.config.require_fp) for c in cells)
    ks = sorted({c.k for c in cells})
    fig, axes = plt.subplots(1, 2, figsize=(2.0 + 0.6 * len(ks) * 2, 1.2 + 0.5 * len(readings)),
                             sharey=True)
    for ax, theorem in zip(axes, ("theorem6", "theorem7")):
        grid = np.zeros((len(readings), len(ks)))
        for c in cells:
            v = getattr(c, theorem)
            i = readings.index((c.config.fe_mode, c.config.require_fp))
            grid[i, ks.index(c.k)] = 0.5 if not v.hypothesis_met else (0 if v.consistent else 1)
        ax.imshow(grid, cmap="RdYlGn_r", vmin=0, vmax=1, aspect="auto")
        ax.set_xticks(range(len(ks)), [str(k) for k in ks])
        ax.set_yticks(range(len(readings)), [f"{m} fp={int(fp)}" for m, fp in readings])
        ax.set_xlabel("k")
        ax.set_title(theorem)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path


def plot_summary(summary: FuzzSummary, path) -> Path:
    """Violation counts per k, one line per (reading, theorem)."""
    fig, ax = plt.subplots(figsize=(5.5, 3.2))
    for mode, fp in _readings(summary.cells):
        ks = sorted(k for m, f, k in summary.cells if (m, f) == (mode, fp))
        for j, theorem in enumerate(("theorem6", "theorem7")):
            ys = [summary.cells[(mode, fp, k)][j] for k in ks]
            ax.plot(ks, ys, marker="o" if j == 0 else "s", linestyle="-" if j == 0 else "--",
                    label=f"{theorem} {mode} fp={int(fp)}")
    ax.xaxis.set_major_locator(MaxNLocator(integer=True))
    ax.set_xlabel("k")
    ax.set_ylabel("violations")
    ax.set_title(f"corpus of {summary.corpus_size}")
    if summary.cells:
        ax.legend(fontsize=6)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, **_SAVE_KW)
    plt.close(fig)
    return path
