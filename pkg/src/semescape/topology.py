"""Connected components, boundaries, and pixel-set distances on escape rasters.

Unboundedness of a component is proxied by contact with the raster border;
every report is therefore window-relative.  Escaping components default to
8-connectivity with the complement read 4-connected, the standard duality
that avoids checkerboard paradoxes.  Undetermined pixels belong to neither
side for boundary purposes.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy import ndimage

from .errors import EmptySet
from .escape import CODE_BND, CODE_ESC, Raster

_OFFSETS_4 = ((-1, 0), (1, 0), (0, -1), (0, 1))
_OFFSETS_8 = _OFFSETS_4 + ((-1, -1), (-1, 1), (1, -1), (1, 1))


@dataclass(frozen=True)
class ComponentInfo:
    id: int
    pixel_count: int
    bbox: Tuple[int, int, int, int]  # (row_min, col_min, row_max, col_max), inclusive
    touches_border: bool


@dataclass(frozen=True)
class ComponentSet:
    labels: np.ndarray  # (h, w) int32, -1 outside the escaping set
    components: Tuple[ComponentInfo, ...]


def connected_components(r: Raster, connectivity: int = 8) -> ComponentSet:
    """Label the escaping pixels; component ids follow row-major first contact."""
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    offsets = _OFFSETS_4 if connectivity == 4 else _OFFSETS_8
    esc = r.cells == CODE_ESC
    h, w = esc.shape
    # plain lists in the flood loop; numpy scalar indexing is too slow here
    esc_rows = esc.tolist()
    label_rows = [[-1] * w for _ in range(h)]
    comps = []
    for j in range(h):
        esc_j = esc_rows[j]
        lab_j = label_rows[j]
        for i in range(w):
            if not esc_j[i] or lab_j[i] != -1:
                continue
            cid = len(comps)
            lab_j[i] = cid
            queue = deque([(j, i)])
            count = 0
            rmin = rmax = j
            cmin = cmax = i
            touches = False
            while queue:
                cj, ci = queue.popleft()
                count += 1
                if cj < rmin: rmin = cj
                elif cj > rmax: rmax = cj
                if ci < cmin: cmin = ci
                elif ci > cmax: cmax = ci
                if cj == 0 or cj == h - 1 or ci == 0 or ci == w - 1:
                    touches = True
                for dj, di in offsets:
                    nj, ni = cj + dj, ci + di
                    if 0 <= nj < h and 0 <= ni < w and esc_rows[nj][ni] and label_rows[nj][ni] == -1:
                        label_rows[nj][ni] = cid
                        queue.append((nj, ni))
            comps.append(ComponentInfo(cid, count, (rmin, cmin, rmax, cmax), touches))
    labels = np.array(label_rows, dtype=np.int32).reshape(h, w)
    return ComponentSet(labels, tuple(comps))


@dataclass(frozen=True)
class UnboundedReport:
    violating_components: Tuple[ComponentInfo, ...]
    component_count: int


def unbounded_proxy(cs: ComponentSet) -> UnboundedReport:
    """Components that fail the border-contact proxy for unboundedness."""
    bad = tuple(c for c in cs.components if not c.touches_border)
    return UnboundedReport(bad, len(cs.components))


def _any_neighbor4(mask: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mask)
    out[1:, :] |= mask[:-1, :]
    out[:-1, :] |= mask[1:, :]
    out[:, 1:] |= mask[:, :-1]
    out[:, :-1] |= mask[:, 1:]
    return out


def boundary(r: Raster) -> np.ndarray:
    """Two-sided pixel boundary between the escaping and bounded classes.

    Escaping pixels with a bounded 4-neighbor union bounded pixels with an
    escaping 4-neighbor; undetermined pixels are ignored on both sides, so a
    homogeneous raster has an empty boundary.
    """
    esc = r.cells == CODE_ESC
    bnd = r.cells == CODE_BND
    return (esc & _any_neighbor4(bnd)) | (bnd & _any_neighbor4(esc))


def dilate(mask: np.ndarray, connectivity: int = 8) -> np.ndarray:
    """Grow a pixel set by one ring of neighbors."""
    if connectivity not in (4, 8):
        raise ValueError("connectivity must be 4 or 8")
    out = mask.copy()
    out |= _any_neighbor4(mask)
    if connectivity == 8:
        out[1:, 1:] |= mask[:-1, :-1]
        out[1:, :-1] |= mask[:-1, 1:]
        out[:-1, 1:] |= mask[1:, :-1]
        out[:-1, :-1] |= mask[1:, 1:]
    return out


def hausdorff_px(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two pixel sets, in pixel units.

    Masks must share a shape; distances are Euclidean between pixel centers,
    computed through exact distance transforms.
    """
    if a.shape != b.shape:
        raise ValueError("pixel sets must live on rasters of the same shape")
    if not a.any() or not b.any():
        raise EmptySet("hausdorff_px needs two non-empty pixel sets")
    d_to_b = ndimage.distance_transform_edt(~b)
    d_to_a = ndimage.distance_transform_edt(~a)
    return max(float(d_to_b[a].max()), float(d_to_a[b].max()))


def mask_from_pixels(pixels, shape) -> np.ndarray:
    """Boolean mask from (col i, row j) pairs."""
    out = np.zeros(shape, dtype=bool)
    for i, j in pixels:
        out[j, i] = True
    return out


def boundary_csv_lines(mask: np.ndarray):
    """CSV rows "i,j" (column, row), sorted."""
    yield "i,j"
    js, is_ = np.nonzero(mask)
    for i, j in sorted(zip(is_.tolist(), js.tolist())):
        yield f"{i},{j}"


def component_report(cs: ComponentSet) -> dict:
    return {
        "component_count": len(cs.components),
        "components": [
            {
                "id": c.id,
                "pixel_count": c.pixel_count,
                "bbox": list(c.bbox),
                "touches_border": c.touches_border,
            }
            for c in cs.components
        ],
    }
