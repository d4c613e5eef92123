"""Orbits of singular values: boundedness, preperiodicity, hyperbolicity
proxies, and the translation identity between the postsingular samples of f
and of f^s + c.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .escape import (
    BOUNDED,
    Budget,
    DEFAULT_BUDGET,
    ESCAPED,
    OrbitRecord,
    classify_orbit,
    orbit_points,
)
from .maps import EntireMap, IterTranslate, derivative, eval_map, is_overflow, singular_values

AGG_BOUNDED = "bounded"
AGG_ESCAPING = "escaping"
AGG_MIXED = "mixed"
AGG_UNDETERMINED = "undetermined"

DEFAULT_CYCLE_TOL = 1e-8


@dataclass(frozen=True)
class PostsingularVerdict:
    records: Tuple[Tuple[complex, OrbitRecord], ...]
    aggregate: str


@dataclass(frozen=True)
class Preperiodicity:
    preperiod: int
    period: int
    tolerance: float


def singular_orbits(f: EntireMap, budget: Budget = DEFAULT_BUDGET) -> PostsingularVerdict:
    """Classify the orbit of every singular value of f.

    Aggregate is bounded iff every singular orbit is bounded, escaping iff
    every orbit escapes, mixed for a determinate mixture, undetermined
    otherwise.  Raises ValueError when f has no singular values.
    """
    svs = singular_values(f)
    if not svs:
        raise ValueError(f"{f!r} has no singular values to follow")
    records = tuple((v, classify_orbit(f, v, budget)) for v in svs)
    statuses = [rec.status for _, rec in records]
    if all(s == BOUNDED for s in statuses):
        agg = AGG_BOUNDED
    elif all(s == ESCAPED for s in statuses):
        agg = AGG_ESCAPING
    elif any(s not in (BOUNDED, ESCAPED) for s in statuses):
        agg = AGG_UNDETERMINED
    else:
        agg = AGG_MIXED
    return PostsingularVerdict(records, agg)


def detect_preperiodicity(orbit: Sequence[complex], tol: float) -> Optional[Preperiodicity]:
    """Minimal (preperiod n, period p) with |orbit[n+p+j] - orbit[n+j]| <= tol
    for j = 0..p, i.e. the match re-verified for one further period.

    The period is minimised first, then the preperiod; None if no cycle fits
    within the orbit.  Direct pairwise scan; fine for orbit lengths ~ 200.
    """
    pts = [complex(z) for z in orbit]
    n_pts = len(pts)
    for p in range(1, (n_pts - 1) // 2 + 1):
        for n in range(0, n_pts - 2 * p):
            if all(abs(pts[n + p + j] - pts[n + j]) <= tol for j in range(p + 1)):
                return Preperiodicity(preperiod=n, period=p, tolerance=tol)
    return None


def is_postsingularly_finite_proxy(f: EntireMap, budget: Budget = DEFAULT_BUDGET,
                                   tol: float = DEFAULT_CYCLE_TOL) -> Optional[bool]:
    """True when every singular orbit settles into a cycle within budget,
    False when any escapes, None when the budget cannot tell."""
    svs = singular_values(f)
    if not svs:
        raise ValueError(f"{f!r} has no singular values to follow")
    undecided = False
    for v in svs:
        rec = classify_orbit(f, v, budget)
        if rec.status == ESCAPED:
            return False
        pts = orbit_points(f, v, budget.max_iter)
        if detect_preperiodicity(pts, tol) is None:
            undecided = True
    return None if undecided else True


def cycle_multiplier(f: EntireMap, cycle: Sequence[complex]) -> float:
    """Product of |f'| around the cycle points."""
    prod = 1.0
    for z in cycle:
        d = derivative(f, z)
        if is_overflow(d):
            return float("inf")
        prod *= abs(d)
    return prod


def is_hyperbolic_proxy(f: EntireMap, budget: Budget = DEFAULT_BUDGET,
                        tol: float = DEFAULT_CYCLE_TOL) -> Optional[bool]:
    """Attracting-cycle capture proxy for hyperbolicity.

    True iff every singular orbit is captured by a cycle with multiplier
    modulus < 1; False if any singular orbit escapes; None otherwise.  This
    is a proxy, not a certification that the postsingular set is compactly
    contained in the stable region.
    """
    svs = singular_values(f)
    if not svs:
        raise ValueError(f"{f!r} has no singular values to follow")
    undecided = False
    for v in svs:
        rec = classify_orbit(f, v, budget)
        if rec.status == ESCAPED:
            return False
        pts = orbit_points(f, v, budget.max_iter)
        pp = detect_preperiodicity(pts, tol)
        if pp is None:
            undecided = True
            continue
        mult = cycle_multiplier(f, pts[pp.preperiod:pp.preperiod + pp.period])
        if not mult < 1.0:
            undecided = True
    return None if undecided else True


@dataclass(frozen=True)
class TranslationReport:
    max_deviation: float
    n_translate_points: int
    n_base_points: int


def postsingular_translation_check(f: EntireMap, s: int, c: complex,
                                   budget: Budget = DEFAULT_BUDGET) -> TranslationReport:
    """Compare sampled postsingular points of g = f^s + c against those of f, shifted by c.

    Every sampled g-orbit point must sit near some sampled point of P(f)+c and,
    conversely, every sampled f-orbit point on the matching subsequence must
    sit near a sampled g-point; the report carries the larger of the two
    one-sided deviations.
    """
    g = IterTranslate(f, s, c)
    n_g = budget.max_iter // s
    base_pts = []
    for v in singular_values(f):
        # indices n*s + k with n <= n_g, k < s cover exactly 0..n_g*s + s - 1
        base_pts.extend(p + c for p in orbit_points(f, v, n_g * s + s - 1))
    g_pts = []
    for v in singular_values(g):
        g_pts.extend(orbit_points(g, v, n_g))
    a = np.array(base_pts, dtype=np.complex128)
    b = np.array(g_pts, dtype=np.complex128)
    d_ab = np.abs(a[:, None] - b[None, :])
    dev = max(float(d_ab.min(axis=0).max()), float(d_ab.min(axis=1).max()))
    return TranslationReport(max_deviation=dev, n_translate_points=b.size, n_base_points=a.size)


def orbit_csv_lines(points: Sequence[complex]):
    """CSV rows (step, re, im, modulus) for an orbit."""
    yield "step,re,im,modulus"
    for k, z in enumerate(points):
        yield f"{k},{z.real!r},{z.imag!r},{abs(z)!r}"
