"""Closed parametric families of entire maps with overflow-safe evaluation.

The map families are:

* ``ExpAffine(a, b, c)``     -- z -> exp(a*z + b) + c
* ``SineAffine(lam, c)``     -- z -> lam*sin(z) + c
* ``IterTranslate(f, s, c)`` -- z -> f^s(z) + c, with c a period of f
* ``Affine(alpha, beta)``    -- z -> alpha*z + beta (conjugating maps only)
* ``Conjugated(inner, phi)`` -- phi o inner o phi^{-1}, evaluated pointwise

Evaluation never produces a non-finite float: magnitudes beyond ~1e300 are
reported as the ``OVERFLOW`` sentinel instead.  Exponentials are guarded by
checking the real part of the exponent against ``LN_OVERFLOW`` (~ln 1e300)
before calling ``exp``; sines are guarded on ``|Im z|`` since
``|sin z| ~ exp(|Im z|)/2``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import UnboundedSingularSet

LN_OVERFLOW = 690.0       # exp(690) ~ 5.6e299, just under the 1e300 policy cap
OVERFLOW_LIMIT = 1e300

TWO_PI = 2.0 * math.pi


class _Overflow:
    """Singleton marker for magnitudes beyond the representable range."""

    __slots__ = ()

    def __repr__(self):
        return "OVERFLOW"


OVERFLOW = _Overflow()


def is_overflow(value) -> bool:
    return value is OVERFLOW


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class Affine:
    """z -> alpha*z + beta.  Used as a conjugator, not a semigroup generator."""

    alpha: complex
    beta: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        if self.alpha == 0:
            raise ValueError("Affine.alpha must be nonzero")

    def __call__(self, z):
        if is_overflow(z):
            return OVERFLOW
        v = self.alpha * z + self.beta
        if not _finite(v) or abs(v) > OVERFLOW_LIMIT:
            return OVERFLOW
        return v

    def inverse(self) -> "Affine":
        return Affine(1.0 / self.alpha, -self.beta / self.alpha)

    def compose(self, other: "Affine") -> "Affine":
        """self o other."""
        return Affine(self.alpha * other.alpha, self.alpha * other.beta + self.beta)


@dataclass(frozen=True)
class ExpAffine:
    """z -> exp(a*z + b) + c."""

    a: complex
    b: complex = 0j
    c: complex = 0j

    def __post_init__(self):
        for name in ("a", "b", "c"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a == 0:
            raise ValueError("ExpAffine.a must be nonzero")


@dataclass(frozen=True)
class SineAffine:
    """z -> lam*sin(z) + c."""

    lam: complex
    c: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        object.__setattr__(self, "c", complex(self.c))
        if self.lam == 0:
            raise ValueError("SineAffine.lam must be nonzero")


@dataclass(frozen=True)
class IterTranslate:
    """z -> base^s(z) + c, valid only when c is a period of base.

    Stores s and c explicitly instead of unrolling the composition so the
    period and singular-value formulas stay exact.  c = 0 is accepted as the
    degenerate pure-iterate base^s.
    """

    base: "EntireMap"
    s: int
    c: complex

    def __post_init__(self):
        object.__setattr__(self, "c", complex(self.c))
        if self.s < 1:
            raise ValueError("IterTranslate.s must be a positive integer")
        _check_period_witness(self.base, self.c)


@dataclass(frozen=True)
class Conjugated:
    """phi o inner o phi^{-1}, evaluated pointwise."""

    inner: "EntireMap"
    phi: Affine


EntireMap = Union[ExpAffine, SineAffine, IterTranslate, Affine, Conjugated]

# Fixed probe set used by the period witness; 32 points spread over [-2,2]^2.
_PROBE_RNG = np.random.default_rng(160451)
PROBE_POINTS = tuple(
    complex(re, im)
    for re, im in zip(_PROBE_RNG.uniform(-2, 2, 32), _PROBE_RNG.uniform(-2, 2, 32))
)

PERIOD_WITNESS_TOL = 1e-9


def _check_period_witness(f: "EntireMap", c: complex, tol: float = PERIOD_WITNESS_TOL):
    """Require |f(z+c) - f(z)| <= tol*(1+|f(z)|) on the probe set."""
    for z in PROBE_POINTS:
        v0 = eval_map(f, z)
        v1 = eval_map(f, z + c)
        if is_overflow(v0) or is_overflow(v1):
            raise ValueError("period witness probe overflowed; cannot verify translate")
        if abs(v1 - v0) > tol * (1.0 + abs(v0)):
            raise ValueError(f"{c!r} is not a period of {f!r} (witness failed at z={z!r})")


def eval_map(m: EntireMap, z):
    """Evaluate m at z; OVERFLOW in, or magnitude beyond 1e300, gives OVERFLOW out."""
    if is_overflow(z):
        return OVERFLOW
    z = complex(z)
    if isinstance(m, ExpAffine):
        w = m.a * z + m.b
        if not _finite(w) or w.real > LN_OVERFLOW:
            return OVERFLOW
        return cmath.exp(w) + m.c
    if isinstance(m, SineAffine):
        if abs(z.imag) > LN_OVERFLOW:
            return OVERFLOW
        v = m.lam * cmath.sin(z) + m.c
        if not _finite(v) or abs(v) > OVERFLOW_LIMIT:
            return OVERFLOW
        return v
    if isinstance(m, IterTranslate):
        w = z
        for _ in range(m.s):
            w = eval_map(m.base, w)
            if is_overflow(w):
                return OVERFLOW
        return w + m.c
    if isinstance(m, Affine):
        return m(z)
    if isinstance(m, Conjugated):
        w = m.phi.inverse()(z)
        v = eval_map(m.inner, w)
        return m.phi(v)
    raise TypeError(f"not an entire map: {m!r}")


def derivative(m: EntireMap, z):
    """Analytic derivative of m at z, with the same overflow semantics as eval."""
    if is_overflow(z):
        return OVERFLOW
    z = complex(z)
    if isinstance(m, ExpAffine):
        w = m.a * z + m.b
        if not _finite(w) or w.real > LN_OVERFLOW:
            return OVERFLOW
        v = m.a * cmath.exp(w)
        if not _finite(v) or abs(v) > OVERFLOW_LIMIT:
            return OVERFLOW
        return v
    if isinstance(m, SineAffine):
        if abs(z.imag) > LN_OVERFLOW:
            return OVERFLOW
        v = m.lam * cmath.cos(z)
        if not _finite(v) or abs(v) > OVERFLOW_LIMIT:
            return OVERFLOW
        return v
    if isinstance(m, IterTranslate):
        # chain rule along the base orbit; the trailing +c contributes nothing
        prod = complex(1.0)
        w = z
        for _ in range(m.s):
            d = derivative(m.base, w)
            if is_overflow(d):
                return OVERFLOW
            prod *= d
            if not _finite(prod) or abs(prod) > OVERFLOW_LIMIT:
                return OVERFLOW
            w = eval_map(m.base, w)
            if is_overflow(w):
                return OVERFLOW
        return prod
    if isinstance(m, Affine):
        return m.alpha
    if isinstance(m, Conjugated):
        # phi'(f(w)) * f'(w) * (phi^{-1})'(z) = f'(w) for affine phi
        w = m.phi.inverse()(z)
        return derivative(m.inner, w)
    raise TypeError(f"not an entire map: {m!r}")


def period(m: EntireMap) -> Optional[complex]:
    """A primitive period of m, or None.

    ExpAffine(a, ., .) has period 2*pi*i/a, SineAffine has period 2*pi, an
    iterate-translate inherits the base period, and a conjugate of a periodic
    map has period alpha*p (the translation part of phi cancels).
    """
    if isinstance(m, ExpAffine):
        return 2j * math.pi / m.a
    if isinstance(m, SineAffine):
        return complex(TWO_PI)
    if isinstance(m, IterTranslate):
        return period(m.base)
    if isinstance(m, Conjugated):
        p = period(m.inner)
        return None if p is None else m.phi.alpha * p
    return None


def singular_values(m: EntireMap) -> tuple:
    """The finite set of critical and asymptotic values of m.

    ExpAffine omits c (one asymptotic value); SineAffine has the two critical
    values +-lam + c; an iterate-translate collects the forward images
    base^k(singular values of base) + c for k < s.

    Raises UnboundedSingularSet when a forward image overflows.
    """
    if isinstance(m, ExpAffine):
        return (m.c,)
    if isinstance(m, SineAffine):
        return (m.lam + m.c, -m.lam + m.c)
    if isinstance(m, IterTranslate):
        out = []
        for v in singular_values(m.base):
            w = v
            for k in range(m.s):
                out.append(w + m.c)
                if k < m.s - 1:
                    w = eval_map(m.base, w)
                    if is_overflow(w):
                        raise UnboundedSingularSet(
                            f"forward image of singular value {v!r} overflowed"
                        )
        return _dedupe(out)
    if isinstance(m, Affine):
        return ()
    if isinstance(m, Conjugated):
        out = []
        for v in singular_values(m.inner):
            w = m.phi(v)
            if is_overflow(w):
                raise UnboundedSingularSet(f"conjugated singular value {v!r} overflowed")
            out.append(w)
        return _dedupe(out)
    raise TypeError(f"not an entire map: {m!r}")


def _dedupe(values) -> tuple:
    return tuple(dict.fromkeys(values))


def is_bounded_type(m: EntireMap) -> bool:
    """True iff the singular set is computable and finite.

    Every in-scope family is of bounded type; the numeric proxy answers False
    when a forward image needed by the iterate-translate formula overflows.
    """
    try:
        singular_values(m)
    except UnboundedSingularSet:
        return False
    return True


# ---------------------------------------------------------------------------
# vectorised evaluation over numpy arrays
# ---------------------------------------------------------------------------

def eval_grid(m: EntireMap, z: np.ndarray, out_of_range: Optional[np.ndarray] = None):
    """Evaluate m elementwise on a complex array.

    Returns ``(values, overflowed)``.  Entries flagged in ``overflowed`` keep
    their input value; callers must treat them as escaped.  ``out_of_range``
    marks inputs that are already invalid and must not be evaluated.
    """
    z = np.asarray(z, dtype=np.complex128)
    over = np.zeros(z.shape, dtype=bool) if out_of_range is None else out_of_range.copy()
    vals = z.copy()
    safe = ~over

    if isinstance(m, ExpAffine):
        w = np.empty_like(z)
        w[safe] = m.a * z[safe] + m.b
        bad = np.zeros_like(over)
        bad[safe] = (w[safe].real > LN_OVERFLOW) | ~np.isfinite(w[safe].real) | ~np.isfinite(w[safe].imag)
        ok = safe & ~bad
        vals[ok] = np.exp(w[ok]) + m.c
        return vals, over | bad
    if isinstance(m, SineAffine):
        bad = np.zeros_like(over)
        bad[safe] = np.abs(z[safe].imag) > LN_OVERFLOW
        ok = safe & ~bad
        v = m.lam * np.sin(z[ok]) + m.c
        nf = ~np.isfinite(v.real) | ~np.isfinite(v.imag) | (np.abs(v) > OVERFLOW_LIMIT)
        bad[ok] |= nf
        vals[ok & ~bad] = v[~nf]
        return vals, over | bad
    if isinstance(m, IterTranslate):
        cur, o = vals, over
        for _ in range(m.s):
            cur, o = eval_grid(m.base, cur, o)
        ok = ~o
        cur = cur.copy()
        cur[ok] = cur[ok] + m.c
        return cur, o
    if isinstance(m, Affine):
        v = np.empty_like(z)
        v[safe] = m.alpha * z[safe] + m.beta
        bad = np.zeros_like(over)
        bad[safe] = (
            ~np.isfinite(v[safe].real)
            | ~np.isfinite(v[safe].imag)
            | (np.abs(v[safe]) > OVERFLOW_LIMIT)
        )
        ok = safe & ~bad
        vals[ok] = v[ok]
        return vals, over | bad
    if isinstance(m, Conjugated):
        inv = m.phi.inverse()
        w, o = eval_grid(inv, z, over)
        w, o = eval_grid(m.inner, w, o)
        return eval_grid(m.phi, w, o)
    raise TypeError(f"not an entire map: {m!r}")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _c2l(z: complex):
    return [z.real, z.imag]


def _l2c(pair) -> complex:
    return complex(pair[0], pair[1])


def map_to_dict(m: EntireMap) -> dict:
    if isinstance(m, ExpAffine):
        return {"family": "exp_affine", "a": _c2l(m.a), "b": _c2l(m.b), "c": _c2l(m.c)}
    if isinstance(m, SineAffine):
        return {"family": "sine_affine", "lambda": _c2l(m.lam), "c": _c2l(m.c)}
    if isinstance(m, IterTranslate):
        return {
            "family": "iter_translate",
            "base": map_to_dict(m.base),
            "s": m.s,
            "c": _c2l(m.c),
        }
    if isinstance(m, Affine):
        return {"family": "affine", "alpha": _c2l(m.alpha), "beta": _c2l(m.beta)}
    if isinstance(m, Conjugated):
        return {
            "family": "conjugated",
            "inner": map_to_dict(m.inner),
            "phi": {"alpha": _c2l(m.phi.alpha), "beta": _c2l(m.phi.beta)},
        }
    raise TypeError(f"not an entire map: {m!r}")


def map_from_dict(d: dict) -> EntireMap:
    family = d.get("family")
    if family == "exp_affine":
        return ExpAffine(_l2c(d["a"]), _l2c(d["b"]), _l2c(d["c"]))
    if family == "sine_affine":
        return SineAffine(_l2c(d["lambda"]), _l2c(d["c"]))
    if family == "iter_translate":
        return IterTranslate(map_from_dict(d["base"]), int(d["s"]), _l2c(d["c"]))
    if family == "affine":
        return Affine(_l2c(d["alpha"]), _l2c(d["beta"]))
    if family == "conjugated":
        phi = d["phi"]
        return Conjugated(map_from_dict(d["inner"]), Affine(_l2c(phi["alpha"]), _l2c(phi["beta"])))
    raise ValueError(f"unknown map family: {family!r}")


def map_to_json(m: EntireMap) -> str:
    return json.dumps(map_to_dict(m), sort_keys=True)


def map_from_json(text: str) -> EntireMap:
    return map_from_dict(json.loads(text))
