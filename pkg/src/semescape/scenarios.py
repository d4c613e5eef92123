"""Scenario catalog: seeded numeric experiments with thresholds and reports.

Each scenario is data (parameters plus thresholds) over reusable operations;
running one produces a :class:`ScenarioReport` whose verdict is PASS exactly
when every thresholded metric holds, FAIL when one is violated, and
INCONCLUSIVE when the experiment cannot decide (for example an empty pixel
set).  Reports echo the fully resolved configuration, so re-running from
``config_echo`` reproduces identical metrics and byte-identical rasters.
"""

from __future__ import annotations

import csv
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .conjugacy import equivariance_check
from .errors import EmptySet, InvalidConfig, UnknownScenario
from .escape import (
    Budget,
    CODE_BND,
    CODE_ESC,
    CODE_UND,
    Raster,
    classify_branches_batch,
    classify_orbit_grid,
    compute_grid,
    forward_invariance_check,
    orbit_points,
    raster_to_json,
)
from .maps import Affine, ExpAffine, IterTranslate, SineAffine, eval_map, is_overflow
from .postsingular import (
    AGG_BOUNDED,
    AGG_ESCAPING,
    cycle_multiplier,
    detect_preperiodicity,
    is_hyperbolic_proxy,
    postsingular_translation_check,
    singular_orbits,
)
from .render import orbit_figure, raster_figure, render
from .topology import boundary, connected_components, dilate, hausdorff_px, unbounded_proxy
from .words import (
    NormalForm,
    Semigroup,
    enumerate_words,
    eval_normal_form,
    eval_word,
    normal_form,
    periodic_translate_semigroup,
)

DEFAULT_SEED = 20260808

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

_TWO_PI_I = 2j * math.pi


@dataclass
class ScenarioReport:
    scenario_id: str
    claim: str
    verdict: str
    metrics: Dict[str, float]
    thresholds: Dict[str, Tuple[str, float]]
    artifacts: List[str]
    config_echo: dict

    def to_dict(self) -> dict:
        return {
            "scenario_id": self.scenario_id,
            "claim": self.claim,
            "verdict": self.verdict,
            "metrics": self.metrics,
            "thresholds": {k: list(v) for k, v in self.thresholds.items()},
            "artifacts": self.artifacts,
            "config_echo": self.config_echo,
        }


class _Artifacts:
    """Collects scenario outputs under out_dir/<scenario>/; no-op without out_dir."""

    def __init__(self, out_dir, scenario_id):
        self.paths: List[str] = []
        self.dir = None
        if out_dir is not None:
            self.dir = Path(out_dir) / scenario_id
            self.dir.mkdir(parents=True, exist_ok=True)

    def _add(self, path) -> str:
        self.paths.append(str(path))
        return str(path)

    def raster(self, name: str, r: Raster, title: str = ""):
        if self.dir is None:
            return
        jpath = self.dir / f"{name}.json"
        jpath.write_text(raster_to_json(r))
        self._add(jpath)
        self._add(render(r, path=str(self.dir / f"{name}.png")))
        self._add(raster_figure(r, str(self.dir / f"{name}_fig.png"), title=title))

    def orbits(self, name: str, series, title: str = "", labels=None):
        if self.dir is None:
            return
        self._add(orbit_figure(series, str(self.dir / f"{name}.png"), title=title, labels=labels))

    def table(self, name: str, rows, header):
        if self.dir is None:
            return
        path = self.dir / f"{name}.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        self._add(path)

    def metrics_csv(self, metrics: Dict[str, float]):
        self.table("metrics", sorted(metrics.items()), ("metric", "value"))


def _budget(cfg) -> Budget:
    b = cfg["budget"]
    return Budget(int(b["max_iter"]), float(b["r_escape"]), float(b["r_bound"]))


def _window(cfg):
    return tuple(float(v) for v in cfg["window"])


def _exp_translate_semigroup() -> Semigroup:
    """[e^z, e^z + 2*pi*i]."""
    return periodic_translate_semigroup(ExpAffine(1.0), 1, _TWO_PI_I)


# ---------------------------------------------------------------------------
# shared runners
# ---------------------------------------------------------------------------

def _family_sweep(cfg, mirror: bool):
    """Iterate the decaying (or mirror growing) exponential family from its
    invariant half plane, tracking the analytic orbit bound and invariance."""
    rng = np.random.default_rng(cfg["seed"])
    n = int(cfg["samples"])
    iters = int(cfg["budget"]["max_iter"])
    lam = rng.uniform(-3.0, -0.1, n) + 1j * rng.uniform(-3.0, 3.0, n)
    if mirror:
        xi = rng.uniform(-3.0, -1.0, n) + 1j * rng.uniform(-3.0, 3.0, n)
        z = -rng.uniform(0.0, 10.0, n) + 1j * rng.uniform(-10.0, 10.0, n)
        sign = 1.0
    else:
        xi = rng.uniform(1.0, 3.0, n) + 1j * rng.uniform(-3.0, 3.0, n)
        z = rng.uniform(0.0, 10.0, n) + 1j * rng.uniform(-10.0, 10.0, n)
        sign = -1.0
    bound = 1.0 + np.abs(xi)
    start = time.perf_counter()
    max_excess = -np.inf
    violations = 0
    for _ in range(iters):
        z = np.exp(sign * z + lam) + xi
        max_excess = max(max_excess, float((np.abs(z) - bound).max()))
        if mirror:
            violations += int(np.count_nonzero(z.real >= 0.0))
        else:
            violations += int(np.count_nonzero(z.real <= 0.0))
    elapsed = time.perf_counter() - start
    return {
        "max_excess": max_excess,
        "invariance_violations": float(violations),
        "elapsed_s": elapsed,
        "samples": float(n),
    }


def _run_lemma_f(cfg, art):
    m = _family_sweep(cfg, mirror=False)
    art.metrics_csv(m)
    return m, False


def _run_lemma_fprime(cfg, art):
    m = _family_sweep(cfg, mirror=True)
    art.metrics_csv(m)
    return m, False


def _run_halfplane(cfg, art):
    right = _family_sweep(cfg, mirror=False)
    left = _family_sweep(cfg, mirror=True)
    m = {
        "violations_right": right["invariance_violations"],
        "violations_left": left["invariance_violations"],
        "samples": right["samples"],
    }
    art.metrics_csv(m)
    return m, False


def _strip_fraction(r: Raster) -> float:
    """Fraction of escaping pixels inside {x<0, (4k-3)pi/2 < y < (4k-1)pi/2}."""
    esc = r.mask(CODE_ESC)
    if not esc.any():
        return float("nan")
    re_min, re_max, im_min, im_max = r.window
    xs = re_min + (np.arange(r.width) + 0.5) * (re_max - re_min) / r.width
    ys = im_min + (np.arange(r.height) + 0.5) * (im_max - im_min) / r.height
    x, y = np.meshgrid(xs, ys)
    k = np.round((y / math.pi + 1.0) / 2.0)
    in_strip = (x < 0) & ((4 * k - 3) * math.pi / 2 < y) & (y < (4 * k - 1) * math.pi / 2)
    return float(np.count_nonzero(in_strip & esc)) / float(np.count_nonzero(esc))


def _run_empty_ig(cfg, art):
    p = cfg["params"]
    f = ExpAffine(-1.0, complex(p["lam"]), complex(p["xi"]))
    g = ExpAffine(1.0, complex(p["mu"]), complex(p["zeta"]))
    res = int(cfg["resolution"])
    budget = _budget(cfg)
    rf = compute_grid(f, _window(cfg), res, res, budget=budget)
    rg = compute_grid(g, _window(cfg), res, res, budget=budget)
    overlap = int(np.count_nonzero(rf.mask(CODE_ESC) & rg.mask(CODE_ESC)))
    m = {
        "overlap_pixels": float(overlap),
        "esc_f": float(rf.counts()["esc"]),
        "esc_g": float(rg.counts()["esc"]),
        "und_fraction_f": rf.counts()["und"] / (res * res),
        "und_fraction_g": rg.counts()["und"] / (res * res),
        "esc_f_strip_fraction": _strip_fraction(rf),
    }
    art.raster("escaping_f", rf, title="decaying-exponential generator")
    art.raster("escaping_g", rg, title="growing-exponential generator")
    art.metrics_csv(m)
    return m, False


def _run_branch_vs_single(cfg, art):
    kind = cfg["params"]["family"]
    if kind == "exp":
        f = ExpAffine(1.0)
        g = periodic_translate_semigroup(f, int(cfg["params"]["s"]), _TWO_PI_I)
    else:
        f = SineAffine(3.0)
        g = periodic_translate_semigroup(f, int(cfg["params"]["s"]), 2 * math.pi)
    res = int(cfg["resolution"])
    budget = _budget(cfg)
    rb = compute_grid(g, _window(cfg), res, res, depth=int(cfg["depth"]), budget=budget)
    rs = compute_grid(f, _window(cfg), res, res, budget=budget)
    agreement = float(np.count_nonzero(rb.cells == rs.cells)) / (res * res)
    m = {
        "agreement": agreement,
        "esc_count": float(rb.counts()["esc"]),
        "single_esc_count": float(rs.counts()["esc"]),
        "und_fraction": rb.counts()["und"] / (res * res),
    }
    art.raster("all_branch", rb, title="all-branch escape")
    art.raster("single_map", rs, title="single-map escape")
    art.metrics_csv(m)
    return m, False


def _sample_disk(rng, n, radius):
    r = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    th = rng.uniform(0.0, 2 * math.pi, n)
    return r * np.exp(1j * th)


def _run_normal_form(cfg, art):
    s = int(cfg["params"]["s"])
    g = periodic_translate_semigroup(ExpAffine(1.0), s, _TWO_PI_I)
    rng = np.random.default_rng(cfg["seed"])
    n_words = int(cfg["params"]["n_words"])
    n_points = int(cfg["params"]["n_points"])
    max_len = int(cfg["params"]["max_len"])
    cap = float(cfg["params"]["modulus_cap"])
    lengths = rng.integers(1, max_len + 1, n_words)
    words = [tuple(int(x) for x in rng.integers(0, 2, int(ln))) for ln in lengths]
    pts = _sample_disk(rng, n_points, 2.0)
    retained = 0
    max_rel_dev = 0.0
    total = n_words * n_points
    for w in words:
        nf = normal_form(g, w)
        for z in pts:
            a = eval_word(g, w, complex(z))
            b = eval_normal_form(g, nf, complex(z))
            if is_overflow(a) or is_overflow(b) or abs(a) > cap or abs(b) > cap:
                continue
            retained += 1
            max_rel_dev = max(max_rel_dev, abs(a - b) / (1.0 + abs(a)))

    # escape agreement between sampled word maps and the base generator
    budget = _budget(cfg)
    re_min, re_max, im_min, im_max = _window(cfg)
    zs = rng.uniform(re_min, re_max, 500) + 1j * rng.uniform(im_min, im_max, 500)
    base_codes, _, _ = classify_orbit_grid(g.generators[0], zs, budget)
    min_agree = 1.0
    for w in ((0,), (1,), (1, 0), (0, 0, 1)):
        nf = normal_form(g, w)
        h = IterTranslate(g.generators[0], nf.K, _TWO_PI_I if nf.translated else 0.0)
        codes, _, _ = classify_orbit_grid(h, zs, budget)
        min_agree = min(min_agree, float(np.count_nonzero(codes == base_codes)) / zs.size)
    m = {
        "max_rel_dev": max_rel_dev,
        "retained_fraction": retained / total,
        "trials": float(total),
        "word_map_agreement": min_agree,
    }
    art.metrics_csv(m)
    return m, retained == 0


def _run_unbounded_components(cfg, art):
    g = _exp_translate_semigroup()
    res = int(cfg["resolution"])
    r = compute_grid(g, _window(cfg), res, res, depth=int(cfg["depth"]), budget=_budget(cfg))
    cs = connected_components(r, connectivity=int(cfg["params"]["connectivity"]))
    rep = unbounded_proxy(cs)
    m = {
        "violating_components": float(len(rep.violating_components)),
        "component_count": float(rep.component_count),
        "esc_count": float(r.counts()["esc"]),
    }
    art.raster("all_branch", r, title="all-branch escape")
    art.metrics_csv(m)
    return m, r.counts()["esc"] == 0


def _run_psb(cfg, art):
    budget = _budget(cfg)
    bounded_map = ExpAffine(complex(cfg["params"]["bounded_lambda"]))
    escaping_map = ExpAffine(complex(cfg["params"]["escaping_lambda"]))
    vb = singular_orbits(bounded_map, budget)
    ve = singular_orbits(escaping_map, budget)
    m = {
        "bounded_case_ok": 1.0 if vb.aggregate == AGG_BOUNDED else 0.0,
        "escaping_case_ok": 1.0 if ve.aggregate == AGG_ESCAPING else 0.0,
    }
    series = [
        [abs(p) for p in orbit_points(bounded_map, 0.0, 60)],
        [abs(p) for p in orbit_points(escaping_map, 0.0, 60)],
    ]
    art.orbits("singular_orbits", series, title="singular value orbits",
               labels=["bounded parameter", "escaping parameter"])
    art.metrics_csv(m)
    return m, False


def _run_psf_inheritance(cfg, art):
    f = ExpAffine(complex(cfg["params"]["lambda"]))
    tol = float(cfg["params"]["tol"])
    budget = _budget(cfg)
    sv = 0j
    base_orbit = orbit_points(f, sv, budget.max_iter)
    base_pp = detect_preperiodicity(base_orbit, tol)
    if base_pp is None:
        return {"inheritance_ok": 0.0}, True
    inherit_ok = 1.0
    pfk_dev = 0.0
    for k in range(1, int(cfg["params"]["max_power"]) + 1):
        h = IterTranslate(f, k, 0.0)
        n_h = budget.max_iter // k
        h_samples = []
        for l in range(k):
            v = base_orbit[l]
            pts = orbit_points(h, v, n_h)
            h_samples.extend(pts)
            pp = detect_preperiodicity(pts, 10 * tol)
            if pp is None or (base_pp.period * k) % pp.period != 0:
                inherit_ok = 0.0
        # sampled identity: postsingular points of f^k against those of f
        a = np.array(orbit_points(f, sv, n_h * k + k - 1), dtype=np.complex128)
        b = np.array(h_samples, dtype=np.complex128)
        d = np.abs(a[:, None] - b[None, :])
        pfk_dev = max(pfk_dev, float(d.min(axis=0).max()), float(d.min(axis=1).max()))
    m = {
        "inheritance_ok": inherit_ok,
        "pfk_max_deviation": pfk_dev,
        "base_period": float(base_pp.period),
        "base_preperiod": float(base_pp.preperiod),
    }
    art.metrics_csv(m)
    return m, False


def _run_hyperbolic_translation(cfg, art):
    lam = complex(cfg["params"]["lambda"])
    f = ExpAffine(lam)
    c = 2j * math.pi / lam
    budget = _budget(cfg)
    tol = float(cfg["params"]["tol"])
    m = {}
    for s in cfg["params"]["powers"]:
        rep = postsingular_translation_check(f, int(s), c, budget)
        m[f"max_deviation_s{s}"] = rep.max_deviation
    orbit = orbit_points(f, 0j, budget.max_iter)
    pp = detect_preperiodicity(orbit, tol)
    if pp is None:
        return m, True
    mult = cycle_multiplier(f, orbit[pp.preperiod:pp.preperiod + pp.period])
    m["multiplier"] = mult
    m["hyperbolic_f"] = 1.0 if is_hyperbolic_proxy(f, budget, tol) else 0.0
    g = IterTranslate(f, 2, c)
    m["hyperbolic_g"] = 1.0 if is_hyperbolic_proxy(g, budget, tol) else 0.0
    art.orbits("postsingular", [[abs(p) for p in orbit[:80]]], title="singular orbit modulus")
    art.metrics_csv(m)
    return m, False


def _run_forward_invariance(cfg, art):
    g = _exp_translate_semigroup()
    budget = _budget(cfg)
    depth = int(cfg["depth"])
    wanted = int(cfg["params"]["samples"])
    rng = np.random.default_rng(cfg["seed"])
    re_min, re_max, im_min, im_max = _window(cfg)
    collected = []
    attempts = 0
    while len(collected) < wanted and attempts < 10:
        n = max(wanted * 2, 256)
        pts = rng.uniform(re_min, re_max, n) + 1j * rng.uniform(im_min, im_max, n)
        codes, _, _ = classify_branches_batch(g, pts, depth, budget)
        collected.extend(pts[codes == CODE_ESC].tolist())
        attempts += 1
    samples = collected[:wanted]
    rep = forward_invariance_check(g, samples, depth, budget)
    m = {
        "violations": float(len(rep.violations)),
        "samples_found": float(len(samples)),
        "images_checked": float(rep.checked),
    }
    art.metrics_csv(m)
    return m, len(samples) < wanted


def _run_boundary_julia(cfg, art):
    f = ExpAffine(complex(cfg["params"]["lambda"]))
    res = int(cfg["resolution"])
    r = compute_grid(f, _window(cfg), res, res, budget=_budget(cfg))
    esc = r.mask(CODE_ESC)
    julia = dilate(esc, connectivity=8)
    bd = boundary(r)
    m = {
        "esc_count": float(r.counts()["esc"]),
        "und_count": float(r.counts()["und"]),
        "subset_violations": float(np.count_nonzero(esc & ~julia)),
    }
    inconclusive = False
    try:
        m["hausdorff_px"] = hausdorff_px(bd, julia)
    except EmptySet:
        inconclusive = True
    art.raster("escaping", r, title="escaping raster")
    if art.dir is not None:
        from .topology import boundary_csv_lines

        path = art.dir / "boundary.csv"
        path.write_text("\n".join(boundary_csv_lines(bd)) + "\n")
        art._add(path)
    art.metrics_csv(m)
    return m, inconclusive


def _run_escape_in_julia(cfg, art):
    g = _exp_translate_semigroup()
    res = int(cfg["resolution"])
    r = compute_grid(g, _window(cfg), res, res, depth=int(cfg["depth"]), budget=_budget(cfg))
    esc = r.mask(CODE_ESC)
    julia = dilate(esc, connectivity=8)
    m = {
        "subset_violations": float(np.count_nonzero(esc & ~julia)),
        "esc_count": float(r.counts()["esc"]),
    }
    art.raster("all_branch", r, title="all-branch escape")
    art.metrics_csv(m)
    return m, r.counts()["esc"] == 0


def _run_closure_no_bounded(cfg, art):
    g = _exp_translate_semigroup()
    res = int(cfg["resolution"])
    r = compute_grid(g, _window(cfg), res, res, depth=int(cfg["depth"]), budget=_budget(cfg))
    closure = dilate(r.mask(CODE_ESC), connectivity=8)
    pseudo = Raster(r.window, r.width, r.height,
                    np.where(closure, CODE_ESC, CODE_BND).astype(np.uint8))
    cs = connected_components(pseudo, connectivity=8)
    rep = unbounded_proxy(cs)
    m = {
        "violating_components": float(len(rep.violating_components)),
        "component_count": float(rep.component_count),
        "esc_count": float(r.counts()["esc"]),
    }
    art.metrics_csv(m)
    return m, r.counts()["esc"] == 0


def _run_equivariance(cfg, art):
    g = _exp_translate_semigroup()
    p = cfg["params"]
    phi = Affine(complex(p["alpha"]), complex(p["beta"]))
    rep = equivariance_check(g, phi, int(p["samples"]), depth=int(cfg["depth"]),
                             budget=_budget(cfg), window=_window(cfg), seed=int(cfg["seed"]))
    m = {
        "agreement": rep.agreement,
        "und_fraction": rep.und_fraction,
        "compared": float(rep.compared),
        "commutator_deviation": rep.commutator_deviation,
    }
    art.metrics_csv(m)
    return m, rep.compared == 0


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Scenario:
    claim: str
    defaults: dict
    thresholds: Dict[str, Tuple[str, float]]
    runner: Callable


def _base_config(**overrides) -> dict:
    cfg = {
        "budget": {"max_iter": 200, "r_escape": 1e50, "r_bound": 1e3},
        "depth": 6,
        "window": [-4.0, 4.0, -4.0, 4.0],
        "resolution": 256,
        "seed": DEFAULT_SEED,
        "params": {},
        "thresholds": {},
    }
    for key, val in overrides.items():
        cfg[key] = val
    return cfg


# im-window aligned so one pixel row sits exactly on the real axis
_ALIGNED_IM_MIN = -(127.5) * (32.0 / 256.0)

SCENARIOS: Dict[str, Scenario] = {
    "lemma_F_bound": Scenario(
        claim="orbits of exp(-z+a)+b with Re a<0, Re b>=1 started in the right "
              "half plane keep modulus at most 1+|b|",
        defaults=_base_config(samples=10000),
        thresholds={"max_excess": ("<=", 1e-9), "elapsed_s": ("<", 5.0)},
        runner=_run_lemma_f,
    ),
    "lemma_Fprime_bound": Scenario(
        claim="orbits of exp(z+a)+b with Re a<0, Re b<=-1 started in the left "
              "half plane keep modulus at most 1+|b|",
        defaults=_base_config(samples=10000),
        thresholds={"max_excess": ("<=", 1e-9), "elapsed_s": ("<", 5.0)},
        runner=_run_lemma_fprime,
    ),
    "halfplane_invariance": Scenario(
        claim="the right half plane is invariant for the decaying exponential "
              "family, the left half plane for the growing one",
        defaults=_base_config(samples=10000),
        thresholds={"violations_right": ("==", 0.0), "violations_left": ("==", 0.0)},
        runner=_run_halfplane,
    ),
    "empty_IG": Scenario(
        claim="the opposed exponential pair escapes in disjoint pixel sets: "
              "no point escapes under both generators",
        defaults=_base_config(window=[-8.0, 8.0, -8.0, 8.0], resolution=512,
                              params={"lam": -0.5, "xi": 1.0, "mu": -0.5, "zeta": -1.0}),
        thresholds={"overlap_pixels": ("==", 0.0), "esc_f": (">", 0.0), "esc_g": (">", 0.0)},
        runner=_run_empty_ig,
    ),
    "IG_equals_If_exp": Scenario(
        claim="all-branch escape for [f, f+2(pi)i], f=e^z, matches the "
              "escaping raster of f alone; the escaping set is nonempty",
        defaults=_base_config(params={"family": "exp", "s": 1}),
        thresholds={"agreement": (">=", 0.99), "esc_count": (">", 0.0)},
        runner=_run_branch_vs_single,
    ),
    "IG_equals_If_sine": Scenario(
        claim="all-branch escape for [f, f+2pi], f=3 sin z, matches the "
              "escaping raster of f alone; the escaping set is nonempty",
        defaults=_base_config(params={"family": "sine", "s": 1}),
        thresholds={"agreement": (">=", 0.99), "esc_count": (">", 0.0)},
        runner=_run_branch_vs_single,
    ),
    "periodic_translate_identity": Scenario(
        claim="words over [f, f^s+c] evaluate like their normal form f^K or "
              "f^K+c, and the word maps escape like f",
        defaults=_base_config(seed=20260817,
                              params={"s": 2, "n_words": 100, "n_points": 100,
                                      "max_len": 6, "modulus_cap": 1e8}),
        thresholds={"max_rel_dev": ("<=", 1e-9), "retained_fraction": (">=", 0.8),
                    "word_map_agreement": (">=", 0.99)},
        runner=_run_normal_form,
    ),
    "unbounded_components": Scenario(
        claim="every raster component of the all-branch escaping set reaches "
              "the window border",
        defaults=_base_config(resolution=512, params={"connectivity": 8}),
        thresholds={"violating_components": ("==", 0.0), "esc_count": (">", 0.0)},
        runner=_run_unbounded_components,
    ),
    "psb_example": Scenario(
        claim="the singular orbit of e^(z/4) stays bounded; the singular "
              "orbit of e^z escapes, so that map is not postsingularly bounded",
        defaults=_base_config(params={"bounded_lambda": 0.25, "escaping_lambda": 1.0}),
        thresholds={"bounded_case_ok": ("==", 1.0), "escaping_case_ok": ("==", 1.0)},
        runner=_run_psb,
    ),
    "psf_inheritance": Scenario(
        claim="a preperiodic singular orbit of f stays preperiodic under every "
              "iterate f^k, with period dividing p*k, and the sampled "
              "postsingular points of f^k match those of f",
        defaults=_base_config(params={"lambda": 0.25, "tol": 1e-8, "max_power": 4}),
        thresholds={"inheritance_ok": ("==", 1.0), "pfk_max_deviation": ("<=", 1e-9)},
        runner=_run_psf_inheritance,
    ),
    "hyperbolic_translation": Scenario(
        claim="sampled postsingular points of f^s+c coincide with those of f "
              "shifted by c; the singular orbit is captured by an attracting "
              "cycle",
        defaults=_base_config(params={"lambda": 0.25, "tol": 1e-8, "powers": [2, 3]}),
        thresholds={"max_deviation_s2": ("<=", 1e-9), "max_deviation_s3": ("<=", 1e-9),
                    "multiplier": ("<", 1.0), "hyperbolic_f": ("==", 1.0)},
        runner=_run_hyperbolic_translation,
    ),
    "forward_invariance": Scenario(
        claim="generator images of points in the all-branch escaping class "
              "never acquire a bounded branch",
        defaults=_base_config(params={"samples": 500}),
        thresholds={"violations": ("==", 0.0), "samples_found": (">=", 500.0)},
        runner=_run_forward_invariance,
    ),
    "boundary_julia": Scenario(
        claim="the escape/bounded pixel boundary tracks the one-pixel closure "
              "of the escaping set, and escaping pixels lie inside it",
        defaults=_base_config(window=[0.0, 12.0, _ALIGNED_IM_MIN, _ALIGNED_IM_MIN + 32.0],
                              budget={"max_iter": 400, "r_escape": 1e50, "r_bound": 1e40},
                              params={"lambda": 0.25}),
        thresholds={"hausdorff_px": ("<=", 2.0), "subset_violations": ("==", 0.0),
                    "esc_count": (">", 0.0)},
        runner=_run_boundary_julia,
    ),
    "escape_in_julia": Scenario(
        claim="every escaping pixel lies in the closure proxy of the escaping set",
        defaults=_base_config(resolution=128),
        thresholds={"subset_violations": ("==", 0.0), "esc_count": (">", 0.0)},
        runner=_run_escape_in_julia,
    ),
    "closure_no_bounded": Scenario(
        claim="the closure proxy of the all-branch escaping set has no bounded "
              "raster components",
        defaults=_base_config(),
        thresholds={"violating_components": ("==", 0.0), "esc_count": (">", 0.0)},
        runner=_run_closure_no_bounded,
    ),
    "conjugacy_equivariance": Scenario(
        claim="escape classification commutes with affine conjugation: G at z "
              "and the conjugated semigroup at phi(z) agree",
        defaults=_base_config(params={"alpha": 2.0, "beta": 1.0, "samples": 10000}),
        thresholds={"agreement": (">=", 0.995), "und_fraction": ("<", 0.10)},
        runner=_run_equivariance,
    ),
}


_OPS = {
    "<=": lambda a, b: a <= b,
    ">=": lambda a, b: a >= b,
    "==": lambda a, b: a == b,
    "<": lambda a, b: a < b,
    ">": lambda a, b: a > b,
}


def _merge_config(defaults: dict, override: Optional[dict]) -> dict:
    merged = json.loads(json.dumps(defaults))  # deep copy of plain data
    if not override:
        return merged
    for key, val in override.items():
        if key not in merged:
            raise InvalidConfig(key)
        if isinstance(merged[key], dict):
            if not isinstance(val, dict):
                raise InvalidConfig(key, f"{key} must be a mapping")
            for sub, sval in val.items():
                # thresholds accept arbitrary metric names
                if key != "thresholds" and sub not in merged[key]:
                    raise InvalidConfig(f"{key}.{sub}")
                merged[key][sub] = sval
        else:
            merged[key] = val
    return merged


def run_scenario(scenario_id: str, config: Optional[dict] = None,
                 out_dir: Optional[str] = None) -> ScenarioReport:
    """Execute one catalog scenario with optional config overrides.

    Raises UnknownScenario for ids outside the catalog and InvalidConfig for
    unknown configuration keys.
    """
    if scenario_id not in SCENARIOS:
        raise UnknownScenario(scenario_id)
    scenario = SCENARIOS[scenario_id]
    cfg = _merge_config(scenario.defaults, config)
    thresholds = dict(scenario.thresholds)
    for key, spec in cfg.get("thresholds", {}).items():
        thresholds[key] = (str(spec[0]), float(spec[1]))
    art = _Artifacts(out_dir, scenario_id)
    metrics, inconclusive = scenario.runner(cfg, art)
    metrics = {k: float(v) for k, v in metrics.items()}
    if inconclusive:
        verdict = INCONCLUSIVE
    else:
        verdict = PASS
        for key, (op, ref) in thresholds.items():
            if key not in metrics:
                verdict = INCONCLUSIVE
                break
            if not _OPS[op](metrics[key], ref):
                verdict = FAIL
                break
    report = ScenarioReport(
        scenario_id=scenario_id,
        claim=scenario.claim,
        verdict=verdict,
        metrics=metrics,
        thresholds=thresholds,
        artifacts=art.paths,
        config_echo=cfg,
    )
    if art.dir is not None:
        path = art.dir / "report.json"
        path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True))
        report.artifacts.append(str(path))
    return report


def _run_one(args):
    sid, config, out_dir = args
    return run_scenario(sid, config, out_dir)


def run_scenarios(ids=None, config: Optional[dict] = None, out_dir: Optional[str] = None,
                  jobs: int = 1) -> List[ScenarioReport]:
    """Run several scenarios, optionally in parallel processes."""
    ids = list(SCENARIOS) if ids is None else list(ids)
    for sid in ids:
        if sid not in SCENARIOS:
            raise UnknownScenario(sid)
    if jobs <= 1 or len(ids) <= 1:
        return [run_scenario(sid, config, out_dir) for sid in ids]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, [(sid, config, out_dir) for sid in ids]))
