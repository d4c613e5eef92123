"""Raster rendering: flat pixel images plus annotated matplotlib figures.

Pixel images color escaped cells by escape-step heat, bounded cells black and
undetermined cells gray; bytes are deterministic for a fixed raster and
palette.  Figures add axes in window coordinates and are meant for reports,
not for byte-level comparison.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

from .escape import CODE_BND, CODE_ESC, CODE_UND, Raster  # noqa: E402

_BND_COLOR = (0.0, 0.0, 0.0)
_UND_COLOR = (0.5, 0.5, 0.5)


def raster_rgb(r: Raster, palette: str = "inferno") -> np.ndarray:
    """(h, w, 3) float RGB with row 0 at im_min."""
    cmap = plt.get_cmap(palette)
    h, w = r.cells.shape
    rgb = np.zeros((h, w, 3))
    rgb[r.cells == CODE_BND] = _BND_COLOR
    rgb[r.cells == CODE_UND] = _UND_COLOR
    esc = r.cells == CODE_ESC
    if esc.any():
        if r.steps is not None and r.steps[esc].max() > 0:
            t = r.steps.astype(float) / float(r.steps[esc].max())
        else:
            t = np.ones_like(r.cells, dtype=float)
        rgb[esc] = cmap(t[esc])[:, :3]
    return rgb


def render(r: Raster, palette: str = "inferno", path: str = "raster.png") -> str:
    """Write the raster as a pixel-exact image; PNG, or PPM for a .ppm path."""
    rgb = raster_rgb(r, palette)
    if str(path).lower().endswith(".ppm"):
        _write_ppm(rgb, path)
    else:
        plt.imsave(path, rgb, origin="lower")
    return str(path)


def _write_ppm(rgb: np.ndarray, path: str):
    data = (np.clip(rgb, 0, 1) * 255).astype(np.uint8)[::-1]  # top row first
    h, w = data.shape[:2]
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def raster_figure(r: Raster, path: str, title: str = "", palette: str = "inferno") -> str:
    """Annotated figure of a raster in window coordinates."""
    rgb = raster_rgb(r, palette)
    fig, ax = plt.subplots(figsize=(6, 6 * r.height / r.width))
    ax.imshow(rgb, origin="lower", extent=r.window, aspect="auto", interpolation="nearest")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return str(path)


def orbit_figure(series, path: str, title: str = "", labels=None) -> str:
    """Log-scale modulus traces of one or more orbits."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for k, mods in enumerate(series):
        label = labels[k] if labels else None
        ax.semilogy(np.arange(len(mods)), np.maximum(np.asarray(mods, dtype=float), 1e-300),
                    lw=1.2, label=label)
    ax.set_xlabel("step")
    ax.set_ylabel("|z|")
    if title:
        ax.set_title(title)
    if labels:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return str(path)
