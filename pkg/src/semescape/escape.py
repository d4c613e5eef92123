"""Escape-time classification of orbits, semigroup branches, and rasters.

Single-map orbits are classified against a :class:`Budget`: escaped once a
modulus reaches ``r_escape`` (or evaluation overflows), bounded when every
modulus through ``max_iter`` stays within ``r_bound``, undetermined otherwise.

For a semigroup the escaping set is approximated branch-wise: the orbit tree
applies one generator per level down to ``depth``, and each leaf branch is
then continued by cycling its own generator word until the orbit budget is
exhausted, so that branch classification is commensurate with single-map
classification.  A point is treated as escaping for the semigroup iff every
branch escapes; a branch whose full trajectory stays within ``r_bound`` is a
bounded witness.  Branches are pruned as escaped at the first modulus beyond
``r_escape`` and never re-examined; re-entry from that magnitude would require
landing in an exponentially thin set, which is accepted as a documented
heuristic.  The surrogate does not claim to equal the sequence-defined
escaping set; truncation shows up honestly as the undetermined class.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import LimitExceeded
from .maps import EntireMap, eval_grid, eval_map, is_overflow
from .words import Semigroup, Word, validate_word

MAX_DEPTH = 12
MAX_GRID_CELLS = 2 ** 24
MAX_TREE_COLUMNS = 2 ** 16
_CHUNK_STATES = 2 ** 21  # complex states held per working block (~32 MB)

# raster cell codes
CODE_UND = 0
CODE_ESC = 1
CODE_BND = 2
_CODE_CHARS = {CODE_ESC: "E", CODE_BND: "B", CODE_UND: "U"}
_CHAR_CODES = {v: k for k, v in _CODE_CHARS.items()}


@dataclass(frozen=True)
class Budget:
    """Truncation parameters turning "tends to infinity" into a computation."""

    max_iter: int = 200
    r_escape: float = 1e50
    r_bound: float = 1e3

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        if not (0.0 < self.r_bound < self.r_escape):
            raise ValueError("need 0 < r_bound < r_escape")


DEFAULT_BUDGET = Budget()
DEFAULT_DEPTH = 6

ESCAPED = "escaped"
BOUNDED = "bounded"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class OrbitRecord:
    status: str
    step: Optional[int] = None
    max_modulus: Optional[float] = None
    trace: Optional[Tuple[float, ...]] = None


ALL_ESCAPE = "all_branches_escape"
SOME_BOUNDED = "some_branch_bounded"


@dataclass(frozen=True)
class SemigroupClass:
    status: str
    witness: Optional[Word] = None


def classify_orbit(f: EntireMap, z, budget: Budget = DEFAULT_BUDGET, keep_trace: bool = False) -> OrbitRecord:
    """Iterate f from z up to the budget and classify the orbit.

    The starting point counts as step 0; an overflowed evaluation escapes at
    the step it would have produced.  The trace, when kept, lists the finite
    moduli seen.
    """
    z = complex(z)
    mods = [abs(z)]
    if mods[0] >= budget.r_escape:
        return OrbitRecord(ESCAPED, step=0, max_modulus=mods[0],
                           trace=tuple(mods) if keep_trace else None)
    for step in range(1, budget.max_iter + 1):
        z = eval_map(f, z)
        if is_overflow(z):
            return OrbitRecord(ESCAPED, step=step, max_modulus=max(mods),
                               trace=tuple(mods) if keep_trace else None)
        m = abs(z)
        mods.append(m)
        if m >= budget.r_escape:
            return OrbitRecord(ESCAPED, step=step, max_modulus=max(mods),
                               trace=tuple(mods) if keep_trace else None)
    mx = max(mods)
    status = BOUNDED if mx <= budget.r_bound else UNDETERMINED
    return OrbitRecord(status, step=None, max_modulus=mx,
                       trace=tuple(mods) if keep_trace else None)


def orbit_points(f: EntireMap, z, n_steps: int):
    """The points z, f(z), ..., up to n_steps applications, stopping at overflow."""
    pts = [complex(z)]
    for _ in range(n_steps):
        nxt = eval_map(f, pts[-1])
        if is_overflow(nxt):
            break
        pts.append(nxt)
    return pts


def classify_orbit_grid(f: EntireMap, points: np.ndarray, budget: Budget = DEFAULT_BUDGET):
    """Vectorised classify_orbit over an array of starting points.

    Returns ``(codes, steps, max_modulus)`` with raster cell codes; ``steps``
    holds the escape step for escaped entries and 0 elsewhere.
    """
    z = np.array(points, dtype=np.complex128).ravel()
    n = z.size
    mod = np.abs(z)
    escaped = mod >= budget.r_escape
    eligible = mod <= budget.r_bound
    steps = np.zeros(n, dtype=np.int32)
    maxmod = mod.copy()
    active = ~escaped
    for step in range(1, budget.max_iter + 1):
        if not active.any():
            break
        idx = np.flatnonzero(active)
        vals, over = eval_grid(f, z[idx])
        m = np.abs(vals)
        m[over] = np.inf
        esc_now = over | (m >= budget.r_escape)
        fin = np.isfinite(m)
        np.maximum.at(maxmod, idx[fin], m[fin])
        eligible[idx] &= ~esc_now & (m <= budget.r_bound)
        hit = idx[esc_now]
        escaped[hit] = True
        steps[hit] = step
        z[idx] = np.where(esc_now, z[idx], vals)
        active[hit] = False
    codes = np.full(n, CODE_UND, dtype=np.uint8)
    codes[escaped] = CODE_ESC
    codes[~escaped & eligible] = CODE_BND
    return codes, steps, maxmod


def _branch_letter_table(n_gen: int, depth: int) -> np.ndarray:
    """letters[pos, col] = generator applied at word position pos for leaf column col."""
    cols = np.arange(n_gen ** depth)
    table = np.empty((depth, cols.size), dtype=np.int64)
    for pos in range(depth):
        table[pos] = (cols // n_gen ** (depth - 1 - pos)) % n_gen
    return table


def classify_branches_batch(g: Semigroup, points, depth: int = DEFAULT_DEPTH,
                            budget: Budget = DEFAULT_BUDGET):
    """Classify many points at once; see :func:`classify_branches`.

    Returns ``(codes, witness_cols, steps)`` where codes are raster cell codes
    (ESC = all branches escape, BND = some branch bounded), witness_cols holds
    the leaf column of the first bounded branch (-1 if none), and steps the
    last application at which a branch escaped, for escaped points.
    """
    if depth < 1:
        raise ValueError("depth must be positive")
    if depth > MAX_DEPTH:
        raise LimitExceeded(f"depth {depth} exceeds {MAX_DEPTH}")
    n_gen = g.n
    n_leaf = n_gen ** depth
    if n_leaf > MAX_TREE_COLUMNS:
        raise LimitExceeded(f"{n_gen} generators at depth {depth} exceed the tree budget")
    if budget.max_iter < depth:
        raise ValueError("budget.max_iter must be at least the branching depth")

    pts = np.array(points, dtype=np.complex128).ravel()
    total = pts.size
    codes = np.full(total, CODE_UND, dtype=np.uint8)
    witness = np.full(total, -1, dtype=np.int64)
    steps_out = np.zeros(total, dtype=np.int32)
    letters = _branch_letter_table(n_gen, depth)

    chunk = max(64, _CHUNK_STATES // n_leaf)
    for lo in range(0, total, chunk):
        sel = slice(lo, min(lo + chunk, total))
        c_codes, c_wit, c_steps = _classify_chunk(g, pts[sel], depth, budget, letters)
        codes[sel] = c_codes
        witness[sel] = c_wit
        steps_out[sel] = c_steps
    return codes, witness, steps_out


def _classify_chunk(g: Semigroup, z0: np.ndarray, depth: int, budget: Budget,
                    letters: np.ndarray):
    npt = z0.size
    n_gen = g.n
    m0 = np.abs(z0)
    vals = z0[:, None].copy()
    esc = (m0 >= budget.r_escape)[:, None].copy()
    elig = (m0 <= budget.r_bound)[:, None].copy()
    esc_step = np.zeros((npt, 1), dtype=np.int16)

    # tree phase: level k applies one generator to every surviving branch
    for level in range(1, depth + 1):
        ncols = vals.shape[1]
        nv = np.empty((npt, ncols * n_gen), dtype=np.complex128)
        ne = np.empty((npt, ncols * n_gen), dtype=bool)
        nl = np.empty((npt, ncols * n_gen), dtype=bool)
        ns = np.empty((npt, ncols * n_gen), dtype=np.int16)
        for gi, gen in enumerate(g.generators):
            v, over_all = eval_grid(gen, vals, out_of_range=esc)
            fresh_over = over_all & ~esc
            m = np.abs(v)
            m[fresh_over] = np.inf
            newly = ~esc & (fresh_over | (m >= budget.r_escape))
            nv[:, gi::n_gen] = v
            ne[:, gi::n_gen] = esc | newly
            nl[:, gi::n_gen] = elig & ~esc & ~newly & (m <= budget.r_bound)
            ns[:, gi::n_gen] = np.where(newly, np.int16(level), esc_step)
        vals, esc, elig, esc_step = nv, ne, nl, ns

    # tail phase: continue each leaf branch by cycling its own word
    rows = np.flatnonzero(~esc.all(axis=1))
    t_vals = vals[rows]
    t_esc = esc[rows]
    t_elig = elig[rows]
    t_step = esc_step[rows]
    for t in range(budget.max_iter - depth):
        if rows.size == 0:
            break
        pos = t % depth
        app = depth + 1 + t
        for gi, gen in enumerate(g.generators):
            cols = np.flatnonzero(letters[pos] == gi)
            if cols.size == 0:
                continue
            cur = t_vals[:, cols]
            frozen = t_esc[:, cols]
            v, over_all = eval_grid(gen, cur, out_of_range=frozen)
            fresh_over = over_all & ~frozen
            m = np.abs(v)
            m[fresh_over] = np.inf
            newly = ~frozen & (fresh_over | (m >= budget.r_escape))
            t_vals[:, cols] = v
            t_esc[:, cols] = frozen | newly
            t_elig[:, cols] &= frozen | (~newly & (m <= budget.r_bound))
            sub_step = t_step[:, cols]
            sub_step[newly] = app
            t_step[:, cols] = sub_step
        done = t_esc.all(axis=1)
        if done.any():
            keep = ~done
            out = rows[done]
            esc[out] = t_esc[done]
            elig[out] = t_elig[done]
            esc_step[out] = t_step[done]
            rows = rows[keep]
            t_vals = t_vals[keep]
            t_esc = t_esc[keep]
            t_elig = t_elig[keep]
            t_step = t_step[keep]
    if rows.size:
        esc[rows] = t_esc
        elig[rows] = t_elig
        esc_step[rows] = t_step

    bounded = elig & ~esc
    all_esc = esc.all(axis=1)
    some_bnd = bounded.any(axis=1)
    codes = np.full(npt, CODE_UND, dtype=np.uint8)
    codes[all_esc] = CODE_ESC
    codes[~all_esc & some_bnd] = CODE_BND
    witness = np.where(some_bnd & ~all_esc, bounded.argmax(axis=1), -1)
    steps = np.where(all_esc, esc_step.max(axis=1).astype(np.int32), 0)
    return codes, witness, steps


def _witness_word(col: int, n_gen: int, depth: int) -> Word:
    letters = []
    for pos in range(depth):
        letters.append(int((col // n_gen ** (depth - 1 - pos)) % n_gen))
    return tuple(letters)


def classify_branches(g: Semigroup, z, depth: int = DEFAULT_DEPTH,
                      budget: Budget = DEFAULT_BUDGET) -> SemigroupClass:
    """All-branch escape classification of one point.

    Explores the orbit tree where each level applies one generator, then
    cycles each length-``depth`` word to the full orbit budget.  The result is
    ALL_ESCAPE iff every branch escapes, SOME_BOUNDED with the first (in word
    order) branch whose whole trajectory stays within ``r_bound``, and
    undetermined otherwise.  A point already at or beyond ``r_escape``
    escapes along every branch immediately.
    """
    codes, wit, _ = classify_branches_batch(g, [complex(z)], depth, budget)
    if codes[0] == CODE_ESC:
        return SemigroupClass(ALL_ESCAPE)
    if codes[0] == CODE_BND:
        return SemigroupClass(SOME_BOUNDED, witness=_witness_word(int(wit[0]), g.n, depth))
    return SemigroupClass(UNDETERMINED)


# ---------------------------------------------------------------------------
# rasters
# ---------------------------------------------------------------------------

@dataclass
class Raster:
    """Per-pixel escape classification over a complex window.

    ``cells[j, i]`` classifies the pixel with column i (along re) and row j
    (along im); row 0 sits at im_min.  ``steps`` optionally carries the escape
    step used for heat rendering.
    """

    window: Tuple[float, float, float, float]
    width: int
    height: int
    cells: np.ndarray
    steps: Optional[np.ndarray] = None

    def pixel_center(self, i: int, j: int) -> complex:
        re_min, re_max, im_min, im_max = self.window
        return complex(re_min + (i + 0.5) * (re_max - re_min) / self.width,
                       im_min + (j + 0.5) * (im_max - im_min) / self.height)

    def counts(self) -> dict:
        return {
            "esc": int(np.count_nonzero(self.cells == CODE_ESC)),
            "bnd": int(np.count_nonzero(self.cells == CODE_BND)),
            "und": int(np.count_nonzero(self.cells == CODE_UND)),
        }

    def mask(self, code: int) -> np.ndarray:
        return self.cells == code


def window_centers(window, width: int, height: int) -> np.ndarray:
    re_min, re_max, im_min, im_max = window
    xs = re_min + (np.arange(width) + 0.5) * (re_max - re_min) / width
    ys = im_min + (np.arange(height) + 0.5) * (im_max - im_min) / height
    return xs[None, :] + 1j * ys[:, None]


def compute_grid(subject: Union[EntireMap, Semigroup], window, width: int, height: int,
                 depth: int = DEFAULT_DEPTH, budget: Budget = DEFAULT_BUDGET) -> Raster:
    """Rasterise escape classification at pixel centers.

    ``subject`` is either a single entire map (orbit classification) or a
    semigroup (all-branch classification at the given depth).  Deterministic
    for fixed inputs.
    """
    re_min, re_max, im_min, im_max = (float(v) for v in window)
    if not (re_min < re_max and im_min < im_max):
        raise ValueError("window must satisfy re_min < re_max and im_min < im_max")
    if width < 1 or height < 1:
        raise ValueError("raster dimensions must be positive")
    if width * height > MAX_GRID_CELLS:
        raise LimitExceeded(f"{width}x{height} exceeds {MAX_GRID_CELLS} cells")
    win = (re_min, re_max, im_min, im_max)
    centers = window_centers(win, width, height).ravel()
    if isinstance(subject, Semigroup):
        codes, _, steps = classify_branches_batch(subject, centers, depth, budget)
    else:
        codes, steps, _ = classify_orbit_grid(subject, centers, budget)
    return Raster(win, width, height,
                  codes.reshape(height, width),
                  steps.reshape(height, width).astype(np.int32))


# ---------------------------------------------------------------------------
# forward invariance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    sample_index: int
    point: complex
    generator: int
    witness: Word


@dataclass(frozen=True)
class InvarianceReport:
    violations: Tuple[Violation, ...]
    checked: int


def forward_invariance_check(g: Semigroup, samples: Sequence[complex], depth: int = DEFAULT_DEPTH,
                             budget: Budget = DEFAULT_BUDGET) -> InvarianceReport:
    """Check that generator images of escaping samples stay out of the bounded class.

    For each sample z (expected to classify as all-branches-escape) and each
    generator g_i, classify g_i(z); any SOME_BOUNDED result is recorded as a
    violation.  Overflowed images count as escaped.
    """
    samples = [complex(z) for z in samples]
    if not samples:
        return InvarianceReport((), 0)
    images = []
    tags = []
    for si, z in enumerate(samples):
        for gi, gen in enumerate(g.generators):
            w = eval_map(gen, z)
            if is_overflow(w):
                continue
            images.append(w)
            tags.append((si, gi))
    violations = []
    if images:
        codes, wits, _ = classify_branches_batch(g, images, depth, budget)
        for (si, gi), code, wit in zip(tags, codes, wits):
            if code == CODE_BND:
                violations.append(Violation(si, samples[si], gi,
                                            _witness_word(int(wit), g.n, depth)))
    return InvarianceReport(tuple(violations), checked=len(samples) * g.n)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def cells_to_rle(cells: np.ndarray) -> str:
    flat = cells.ravel()
    if flat.size == 0:
        return ""
    breaks = np.flatnonzero(np.diff(flat)) + 1
    starts = np.concatenate(([0], breaks))
    ends = np.concatenate((breaks, [flat.size]))
    return "".join(f"{e - s}{_CODE_CHARS[int(flat[s])]}" for s, e in zip(starts, ends))


def rle_to_cells(rle: str, width: int, height: int) -> np.ndarray:
    out = np.empty(width * height, dtype=np.uint8)
    pos = 0
    num = ""
    for ch in rle:
        if ch.isdigit():
            num += ch
            continue
        if ch not in _CHAR_CODES or not num:
            raise ValueError(f"malformed run-length cell string near {ch!r}")
        n = int(num)
        out[pos:pos + n] = _CHAR_CODES[ch]
        pos += n
        num = ""
    if num or pos != width * height:
        raise ValueError("run-length cell string does not match raster size")
    return out.reshape(height, width)


def raster_to_dict(r: Raster) -> dict:
    return {
        "window": [float(v) for v in r.window],
        "w": r.width,
        "h": r.height,
        "cells": cells_to_rle(r.cells),
    }


def raster_from_dict(d: dict) -> Raster:
    w, h = int(d["w"]), int(d["h"])
    return Raster(tuple(float(v) for v in d["window"]), w, h,
                  rle_to_cells(d["cells"], w, h))


def raster_to_json(r: Raster) -> str:
    return json.dumps(raster_to_dict(r), sort_keys=True, separators=(",", ":"))


def raster_from_json(text: str) -> Raster:
    return raster_from_dict(json.loads(text))
