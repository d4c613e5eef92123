"""Words over semigroup generators and their periodic-translate normal forms.

A word is a tuple of generator indices; the FIRST letter is applied FIRST, so
``(i, j)`` denotes ``g_j o g_i``.  For a semigroup ``[f, g]`` with
``g = f^s + c`` and ``c`` a period of ``f``, every word collapses to the
normal form ``f^K`` or ``f^K + c``: inner ``+c`` terms are absorbed by any
subsequent application of ``f``, and only an outermost ``g`` leaves its
translation visible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from .errors import LimitExceeded, NotStructured, UnboundedSingularSet
from .maps import (
    EntireMap,
    IterTranslate,
    OVERFLOW,
    eval_map,
    is_overflow,
    map_from_dict,
    map_to_dict,
    period,
    singular_values,
)

Word = Tuple[int, ...]

MAX_WORD_LEN = 12


@dataclass(frozen=True)
class PeriodicTranslate:
    """Structure tag: generators are exactly [f, f^s + c]."""

    s: int


@dataclass(frozen=True)
class Semigroup:
    generators: Tuple[EntireMap, ...]
    structure: Optional[PeriodicTranslate] = None

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        if len(self.generators) < 1:
            raise ValueError("a semigroup needs at least one generator")
        if self.structure is not None:
            if len(self.generators) != 2:
                raise ValueError("periodic-translate structure requires exactly [f, g]")
            f, g = self.generators
            if not isinstance(g, IterTranslate) or g.base != f or g.s != self.structure.s:
                raise ValueError(
                    "periodic-translate structure requires generator 2 == IterTranslate(generator 1, s, c)"
                )

    @property
    def n(self) -> int:
        return len(self.generators)


def periodic_translate_semigroup(f: EntireMap, s: int, c: Optional[complex] = None) -> Semigroup:
    """Build [f, f^s + c] with the structure tag; c defaults to a primitive period of f."""
    if c is None:
        c = period(f)
        if c is None:
            raise ValueError(f"{f!r} has no known period; pass c explicitly")
    g = IterTranslate(f, s, c)  # validates the periodicity witness
    return Semigroup((f, g), PeriodicTranslate(s))


def validate_word(g: Semigroup, w: Sequence[int]) -> Word:
    w = tuple(int(i) for i in w)
    if not w:
        raise ValueError("words must be non-empty")
    if any(i < 0 or i >= g.n for i in w):
        raise ValueError(f"letter out of range for {g.n} generators: {w!r}")
    return w


def enumerate_words(g: Semigroup, max_len: int):
    """All words of length 1..max_len, shortest first, lexicographic within a length."""
    if max_len > MAX_WORD_LEN:
        raise LimitExceeded(f"max_len {max_len} exceeds {MAX_WORD_LEN}")
    if max_len < 1:
        raise ValueError("max_len must be positive")
    letters = range(g.n)
    out = []
    for length in range(1, max_len + 1):
        out.extend(itertools.product(letters, repeat=length))
    return out


def eval_word(g: Semigroup, w: Sequence[int], z):
    """Left-to-right fold of the generators over z; OVERFLOW short-circuits."""
    w = validate_word(g, w)
    for letter in w:
        z = eval_map(g.generators[letter], z)
        if is_overflow(z):
            return OVERFLOW
    return z


@dataclass(frozen=True)
class NormalForm:
    """f^K when translated is False, f^K + c when True."""

    K: int
    translated: bool


def normal_form(g: Semigroup, w: Sequence[int]) -> NormalForm:
    """Collapse a word over [f, f^s + c] to its canonical f-power form.

    K counts one per f letter and s per g letter; the translation survives
    exactly when the outermost (last) letter is g.
    """
    if g.structure is None:
        raise NotStructured("normal_form requires the periodic-translate structure tag")
    w = validate_word(g, w)
    s = g.structure.s
    k = sum(1 if letter == 0 else s for letter in w)
    return NormalForm(K=k, translated=(w[-1] == 1))


def eval_normal_form(g: Semigroup, nf: NormalForm, z):
    if g.structure is None:
        raise NotStructured("eval_normal_form requires the periodic-translate structure tag")
    f = g.generators[0]
    for _ in range(nf.K):
        z = eval_map(f, z)
        if is_overflow(z):
            return OVERFLOW
    if nf.translated:
        z = z + g.generators[1].c
    return z


def word_singular_set(g: Semigroup, w: Sequence[int]) -> tuple:
    """Singular set of the word map, via Sing((g o h)^-1) <= Sing(g^-1) u g(Sing(h^-1)).

    The right-hand union is folded along the word and reported in full; for
    mixed words it may strictly contain the true singular set.
    """
    w = validate_word(g, w)
    acc = list(singular_values(g.generators[w[0]]))
    for letter in w[1:]:
        gen = g.generators[letter]
        pushed = []
        for v in acc:
            img = eval_map(gen, v)
            if is_overflow(img):
                raise UnboundedSingularSet(f"image of singular value {v!r} overflowed")
            pushed.append(img)
        acc = list(singular_values(gen)) + pushed
    return tuple(dict.fromkeys(acc))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def semigroup_to_dict(g: Semigroup) -> dict:
    d = {"generators": [map_to_dict(gen) for gen in g.generators]}
    if g.structure is not None:
        d["periodic_translate"] = {"s": g.structure.s}
    return d


def semigroup_from_dict(d: dict) -> Semigroup:
    gens = tuple(map_from_dict(x) for x in d["generators"])
    tag = d.get("periodic_translate")
    structure = PeriodicTranslate(int(tag["s"])) if tag else None
    return Semigroup(gens, structure)


def normal_form_to_dict(nf: NormalForm) -> dict:
    return {"K": nf.K, "translated": nf.translated}


def normal_form_from_dict(d: dict) -> NormalForm:
    return NormalForm(int(d["K"]), bool(d["translated"]))
