"""Affine conjugation of maps and semigroups, and escape equivariance checks."""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .escape import (
    Budget,
    CODE_UND,
    DEFAULT_BUDGET,
    DEFAULT_DEPTH,
    classify_branches_batch,
)
from .maps import (
    Affine,
    Conjugated,
    EntireMap,
    ExpAffine,
    IterTranslate,
    eval_map,
    is_overflow,
)
from .words import Semigroup

DEFAULT_WINDOW = (-4.0, 4.0, -4.0, 4.0)
DEFAULT_SEED = 20260808


def conjugate_map(f: EntireMap, phi: Affine) -> EntireMap:
    """phi o f o phi^{-1}, normalised back into a closed family where possible.

    For z -> exp(a*z+b)+c the conjugate is again exponential-affine with
    parameters (a/alpha, b - a*beta/alpha + Log alpha, alpha*c + beta); the
    principal branch of Log alpha is used, since any branch shifts b by a
    multiple of 2*pi*i and leaves the function unchanged, and a fixed branch
    keeps serialized parameters deterministic.  Iterate-translates conjugate
    base-wise with the translation scaled by alpha, affine maps stay affine,
    and nested conjugates merge their conjugators.  Only the sine family
    needs the pointwise wrapper.
    """
    alpha, beta = phi.alpha, phi.beta
    if isinstance(f, ExpAffine):
        return ExpAffine(
            f.a / alpha,
            f.b - f.a * beta / alpha + cmath.log(alpha),
            alpha * f.c + beta,
        )
    if isinstance(f, Affine):
        return Affine(f.alpha, alpha * f.beta + beta * (1 - f.alpha))
    if isinstance(f, IterTranslate):
        return IterTranslate(conjugate_map(f.base, phi), f.s, alpha * f.c)
    if isinstance(f, Conjugated):
        return Conjugated(f.inner, phi.compose(f.phi))
    return Conjugated(f, phi)


def conjugate_semigroup(g: Semigroup, phi: Affine) -> Semigroup:
    """Generator-wise conjugation; order, count and structure tag are preserved."""
    return Semigroup(tuple(conjugate_map(gen, phi) for gen in g.generators), g.structure)


@dataclass(frozen=True)
class EquivarianceReport:
    agreement: float
    compared: int
    und_pairs: int
    total: int
    und_fraction: float
    commutator_deviation: float
    seed: int


def _commutator_deviation(g: Semigroup, rng) -> float:
    """Sampled non-commutativity of the generators; a flag, not an assertion."""
    if g.n < 2:
        return 0.0
    pts = rng.uniform(-1, 1, 16) + 1j * rng.uniform(-1, 1, 16)
    worst = 0.0
    for z in pts:
        for i in range(g.n):
            for j in range(i + 1, g.n):
                a = eval_map(g.generators[i], eval_map(g.generators[j], z))
                b = eval_map(g.generators[j], eval_map(g.generators[i], z))
                if is_overflow(a) or is_overflow(b):
                    continue
                worst = max(worst, abs(a - b) / (1.0 + abs(a)))
    return worst


def equivariance_check(g: Semigroup, phi: Affine, samples: int,
                       depth: int = DEFAULT_DEPTH, budget: Budget = DEFAULT_BUDGET,
                       window=DEFAULT_WINDOW, seed: int = DEFAULT_SEED) -> EquivarianceReport:
    """Sampled escape-classification agreement between G at z and phi(G) at phi(z).

    Pairs where either side is undetermined are excluded from the agreement
    denominator and reported separately.  The commutator deviation flags how
    far the generators are from commuting; it is recorded, not enforced.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    re_min, re_max, im_min, im_max = window
    pts = rng.uniform(re_min, re_max, samples) + 1j * rng.uniform(im_min, im_max, samples)
    g2 = conjugate_semigroup(g, phi)
    img = phi.alpha * pts + phi.beta
    codes_a, _, _ = classify_branches_batch(g, pts, depth, budget)
    codes_b, _, _ = classify_branches_batch(g2, img, depth, budget)
    und = (codes_a == CODE_UND) | (codes_b == CODE_UND)
    compared = int(np.count_nonzero(~und))
    agree = int(np.count_nonzero((codes_a == codes_b) & ~und))
    return EquivarianceReport(
        agreement=agree / compared if compared else 0.0,
        compared=compared,
        und_pairs=int(np.count_nonzero(und)),
        total=samples,
        und_fraction=float(np.count_nonzero(und)) / samples,
        commutator_deviation=_commutator_deviation(g, rng),
        seed=seed,
    )
