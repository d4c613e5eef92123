import math

import numpy as np
import pytest

from semescape.escape import Budget, classify_orbit, orbit_points
from semescape.maps import Affine, ExpAffine, IterTranslate, SineAffine, eval_map
from semescape.postsingular import (
    AGG_BOUNDED,
    AGG_ESCAPING,
    AGG_UNDETERMINED,
    cycle_multiplier,
    detect_preperiodicity,
    is_hyperbolic_proxy,
    is_postsingularly_finite_proxy,
    postsingular_translation_check,
    singular_orbits,
)


def solve_fixed_point(lam=0.25):
    q = 1.0
    for _ in range(60):
        q -= (q - math.exp(lam * q)) / (1.0 - lam * math.exp(lam * q))
    return q


HYPERBOLIC = ExpAffine(0.25)
ESCAPING = ExpAffine(1.0)


class TestSingularOrbits:
    def test_hyperbolic_exp_is_bounded(self):
        v = singular_orbits(HYPERBOLIC)
        assert v.aggregate == AGG_BOUNDED
        assert len(v.records) == 1

    def test_large_lambda_escapes(self):
        v = singular_orbits(ESCAPING)
        assert v.aggregate == AGG_ESCAPING

    def test_affine_has_nothing_to_follow(self):
        with pytest.raises(ValueError):
            singular_orbits(Affine(2.0, 1.0))

    def test_mixed_aggregate(self):
        # one critical value escapes, the other settles
        f = SineAffine(0.5, 1.0 + 2.0j)
        v = singular_orbits(f, Budget(max_iter=150))
        assert v.aggregate == "mixed"
        statuses = {rec.status for _, rec in v.records}
        assert statuses == {"bounded", "escaped"}


class TestDetectPreperiodicity:
    def test_synthetic_tail_cycle(self):
        pp = detect_preperiodicity([2, 3, 5, 3, 5, 3], 1e-9)
        assert (pp.preperiod, pp.period) == (1, 2)

    def test_constant_orbit_is_fixed(self):
        pp = detect_preperiodicity([1.5] * 6, 1e-9)
        assert (pp.preperiod, pp.period) == (0, 1)

    def test_minimal_period_wins(self):
        pp = detect_preperiodicity([7, 7, 7, 7, 7, 7], 1e-9)
        assert pp.period == 1

    def test_none_for_aperiodic(self):
        assert detect_preperiodicity([1, 2, 4, 8, 16, 32], 1e-9) is None

    def test_hyperbolic_orbit_detects_fixed_point(self):
        pts = orbit_points(HYPERBOLIC, 0.0, 200)
        pp = detect_preperiodicity(pts, 1e-6)
        assert pp is not None and pp.period == 1
        assert pts[pp.preperiod] == pytest.approx(solve_fixed_point(), abs=1e-5)

    def test_requires_extra_period_confirmation(self):
        # the pair (3, 5) recurs but the continuation breaks the cycle
        assert detect_preperiodicity([3, 5, 3, 9], 1e-9) is None


class TestProxies:
    def test_psf_true_for_hyperbolic(self):
        assert is_postsingularly_finite_proxy(HYPERBOLIC) is True

    def test_psf_false_for_escaping(self):
        assert is_postsingularly_finite_proxy(ESCAPING) is False

    def test_psf_undetermined_on_tiny_budget(self):
        assert is_postsingularly_finite_proxy(HYPERBOLIC, Budget(max_iter=2)) is None

    def test_hyperbolic_proxy_true_with_multiplier(self):
        assert is_hyperbolic_proxy(HYPERBOLIC) is True
        pts = orbit_points(HYPERBOLIC, 0.0, 200)
        pp = detect_preperiodicity(pts, 1e-8)
        mult = cycle_multiplier(HYPERBOLIC, pts[pp.preperiod:pp.preperiod + pp.period])
        assert mult == pytest.approx(0.25 * solve_fixed_point(), abs=1e-6)
        assert mult < 1.0

    def test_hyperbolic_proxy_false_for_escaping(self):
        assert is_hyperbolic_proxy(ESCAPING) is False

    def test_hyperbolic_proxy_undetermined_on_tiny_budget(self):
        assert is_hyperbolic_proxy(HYPERBOLIC, Budget(max_iter=1)) is None

    def test_translated_iterate_is_hyperbolic(self):
        g = IterTranslate(HYPERBOLIC, 2, 8j * math.pi)
        assert is_hyperbolic_proxy(g) is True


class TestTranslationIdentity:
    @pytest.mark.parametrize("s", [1, 2, 3])
    def test_postsingular_samples_translate(self, s):
        rep = postsingular_translation_check(HYPERBOLIC, s, 8j * math.pi)
        assert rep.max_deviation <= 1e-9
        assert rep.n_translate_points > 0 and rep.n_base_points > 0

    def test_power_identity_on_samples(self):
        # sampled orbit points of f^k sit on the sampled orbit of f, both ways
        budget = Budget()
        base = orbit_points(HYPERBOLIC, 0.0, budget.max_iter)
        for k in (2, 3, 4):
            h = IterTranslate(HYPERBOLIC, k, 0.0)
            n_h = budget.max_iter // k
            h_pts = []
            for l in range(k):
                h_pts.extend(orbit_points(h, base[l], n_h))
            a = np.array(base[: n_h * k + k - 1 + 1], dtype=np.complex128)
            b = np.array(h_pts, dtype=np.complex128)
            d = np.abs(a[:, None] - b[None, :])
            assert max(d.min(axis=0).max(), d.min(axis=1).max()) <= 1e-9

    def test_bounded_orbit_inheritance(self):
        # if the singular orbit of f stays within M, the f^k-orbits of the
        # iterated singular values stay within M as well
        budget = Budget()
        rec = classify_orbit(HYPERBOLIC, 0.0, budget)
        m_bound = rec.max_modulus
        base = orbit_points(HYPERBOLIC, 0.0, budget.max_iter)
        for k in (2, 3, 4):
            h = IterTranslate(HYPERBOLIC, k, 0.0)
            for l in range(k):
                pts = orbit_points(h, base[l], budget.max_iter // k)
                assert max(abs(p) for p in pts) <= m_bound + 1e-9

    def test_preperiodicity_inheritance(self):
        tol = 1e-8
        base = orbit_points(HYPERBOLIC, 0.0, 200)
        pp = detect_preperiodicity(base, tol)
        for k in (2, 3, 4):
            h = IterTranslate(HYPERBOLIC, k, 0.0)
            for l in range(k):
                pts = orbit_points(h, base[l], 200 // k)
                pk = detect_preperiodicity(pts, 10 * tol)
                assert pk is not None
                assert (pp.period * k) % pk.period == 0
