"""Deterministic JSON serialisation and matplotlib figures for CLI reports."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .hypergraph import show


def _float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    s = format(x, ".17g")
    if "e" not in s and "." not in s:
        s += ".0"
    return s


def _encode(obj, indent, level) -> str:
    pad = "" if indent is None else "\n" + " " * (indent * (level + 1))
    end = "" if indent is None else "\n" + " " * (indent * level)
    colon = ":" if indent is None else ": "
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{_encode(str(k), indent, level + 1)}{colon}{_encode(v, indent, level + 1)}"
                 for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        flat = all(isinstance(v, (int, float, np.number, bool)) or v is None for v in obj)
        if flat:
            return "[" + ", ".join(_encode(v, None, 0) for v in obj) + "]"
        items = [_encode(v, indent, level + 1) for v in obj]
        return "[" + pad + ("," + pad).join(items) + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int | None = 2) -> str:
    """JSON with every float written to 17 significant digits; non-finite values become null."""
    return _encode(obj, indent, 0)


def region_map(field) -> dict:
    """Flattened per-region tables keyed by the printed region."""
    return {show(a): np.asarray(field[a]).ravel() for a in field.domain.X}


def render_figures(outdir, stem: str, residuals=None, eigenvalues=None,
                   marginals=None) -> list[str]:
    """Write PNG figures for whichever diagnostics are given; returns the paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def save(fig, name):
        path = outdir / f"{stem}_{name}.png"
        fig.tight_layout()
        fig.savefig(path, dpi=120, metadata={"Software": None})
        plt.close(fig)
        written.append(str(path))

    if residuals is not None and len(residuals):
        fig, ax = plt.subplots(figsize=(5, 3.2))
        r = np.asarray(residuals, dtype=float)
        ax.semilogy(np.arange(len(r)), np.where(r > 0, r, np.nan), marker=".", lw=1)
        ax.set_xlabel("iteration")
        ax.set_ylabel(r"residual $\|\Delta\,\Phi(u)\|_\infty$")
        ax.grid(True, which="both", alpha=0.3)
        save(fig, "residuals")

    if eigenvalues is not None and len(eigenvalues):
        w = np.asarray(eigenvalues, dtype=complex)
        fig, ax = plt.subplots(figsize=(4.2, 4))
        ax.axhline(0, color="0.7", lw=0.8)
        ax.axvline(0, color="0.7", lw=0.8)
        ax.scatter(w.real, w.imag, s=18)
        ax.set_xlabel("Re")
        ax.set_ylabel("Im")
        ax.set_title("twisted Laplacian spectrum")
        save(fig, "spectrum")

    if marginals is not None:
        approx, exact = marginals
        keys = list(approx)
        fig, ax = plt.subplots(figsize=(max(4, 0.45 * sum(len(approx[k]) for k in keys)), 3.2))
        a = np.concatenate([approx[k] for k in keys])
        e = np.concatenate([exact[k] for k in keys])
        x = np.arange(len(a))
        ax.bar(x - 0.2, a, width=0.4, label="diffusion")
        ax.bar(x + 0.2, e, width=0.4, label="exact")
        ticks, pos = [], 0
        for k in keys:
            ticks.append(pos + (len(approx[k]) - 1) / 2)
            pos += len(approx[k])
        ax.set_xticks(ticks)
        ax.set_xticklabels(keys, rotation=45, ha="right", fontsize=7)
        ax.set_ylabel("probability")
        ax.legend(fontsize=8)
        save(fig, "marginals")

    return written
