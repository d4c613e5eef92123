import json
import struct

import numpy as np
import pytest

from semescape.errors import InvalidConfig, UnknownScenario
from semescape.escape import CODE_BND, CODE_ESC, CODE_UND, Raster, compute_grid
from semescape.maps import ExpAffine
from semescape.render import render, raster_figure
from semescape.scenarios import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    SCENARIOS,
    run_scenario,
    run_scenarios,
)

CATALOG_IDS = {
    "lemma_F_bound",
    "lemma_Fprime_bound",
    "halfplane_invariance",
    "empty_IG",
    "IG_equals_If_exp",
    "IG_equals_If_sine",
    "periodic_translate_identity",
    "unbounded_components",
    "psb_example",
    "psf_inheritance",
    "hyperbolic_translation",
    "forward_invariance",
    "boundary_julia",
    "escape_in_julia",
    "closure_no_bounded",
    "conjugacy_equivariance",
}


def png_size(path):
    with open(path, "rb") as fh:
        header = fh.read(24)
    assert header[:8] == b"\x89PNG\r\n\x1a\n"
    return struct.unpack(">II", header[16:24])


class TestCatalog:
    def test_catalog_is_complete(self):
        assert set(SCENARIOS) == CATALOG_IDS

    def test_every_scenario_has_claim_and_thresholds(self):
        for sid, sc in SCENARIOS.items():
            assert sc.claim
            assert sc.thresholds
            assert callable(sc.runner)

    def test_unknown_scenario(self):
        with pytest.raises(UnknownScenario):
            run_scenario("nonexistent")
        with pytest.raises(UnknownScenario):
            run_scenarios(["halfplane_invariance", "nope"])

    def test_invalid_config_key(self):
        with pytest.raises(InvalidConfig) as err:
            run_scenario("halfplane_invariance", {"samplez": 10})
        assert err.value.key == "samplez"

    def test_invalid_nested_key(self):
        with pytest.raises(InvalidConfig):
            run_scenario("halfplane_invariance", {"budget": {"iterations": 5}})


class TestRunScenario:
    def test_cheap_pass_with_overrides(self):
        rep = run_scenario("halfplane_invariance",
                           {"samples": 200, "budget": {"max_iter": 40}})
        assert rep.verdict == PASS
        assert rep.config_echo["samples"] == 200
        assert rep.config_echo["budget"]["max_iter"] == 40
        assert rep.metrics["violations_right"] == 0.0
        assert rep.scenario_id == "halfplane_invariance"
        assert rep.claim

    def test_threshold_override_can_fail(self):
        rep = run_scenario("halfplane_invariance",
                           {"samples": 100, "budget": {"max_iter": 20},
                            "thresholds": {"violations_right": [">=", 1.0]}})
        assert rep.verdict == FAIL

    def test_artifacts_written(self, tmp_path):
        rep = run_scenario("escape_in_julia",
                           {"resolution": 24, "depth": 3, "budget": {"max_iter": 60}},
                           out_dir=tmp_path)
        assert rep.verdict == PASS
        names = {p.split("/")[-1] for p in rep.artifacts}
        assert {"all_branch.json", "all_branch.png", "all_branch_fig.png",
                "metrics.csv", "report.json"} <= names
        saved = json.loads((tmp_path / "escape_in_julia" / "report.json").read_text())
        assert saved["verdict"] == PASS
        assert saved["config_echo"]["resolution"] == 24

    def test_rerun_from_echo_reproduces(self, tmp_path):
        cfg = {"resolution": 20, "depth": 3, "budget": {"max_iter": 50}}
        rep1 = run_scenario("escape_in_julia", cfg, out_dir=tmp_path / "a")
        rep2 = run_scenario("escape_in_julia", rep1.config_echo, out_dir=tmp_path / "b")
        assert rep1.metrics == rep2.metrics
        raster1 = (tmp_path / "a" / "escape_in_julia" / "all_branch.json").read_bytes()
        raster2 = (tmp_path / "b" / "escape_in_julia" / "all_branch.json").read_bytes()
        assert raster1 == raster2
        png1 = (tmp_path / "a" / "escape_in_julia" / "all_branch.png").read_bytes()
        png2 = (tmp_path / "b" / "escape_in_julia" / "all_branch.png").read_bytes()
        assert png1 == png2

    def test_run_scenarios_parallel(self, tmp_path):
        reps = run_scenarios(["psb_example", "psf_inheritance"], jobs=2, out_dir=tmp_path)
        assert [r.verdict for r in reps] == [PASS, PASS]


class TestRender:
    def test_single_pixel_image(self, tmp_path):
        r = Raster((-1, 1, -1, 1), 1, 1, np.array([[CODE_ESC]], dtype=np.uint8))
        path = render(r, path=str(tmp_path / "one.png"))
        assert png_size(path) == (1, 1)

    def test_dimensions_and_determinism(self, tmp_path):
        r = compute_grid(ExpAffine(1.0), (-4, 4, -4, 4), 64, 48)
        p1 = render(r, path=str(tmp_path / "a.png"))
        p2 = render(r, path=str(tmp_path / "b.png"))
        assert png_size(p1) == (64, 48)
        with open(p1, "rb") as f1, open(p2, "rb") as f2:
            assert f1.read() == f2.read()

    def test_ppm_fallback(self, tmp_path):
        r = Raster((-1, 1, -1, 1), 2, 2,
                   np.array([[CODE_ESC, CODE_BND], [CODE_UND, CODE_ESC]], dtype=np.uint8))
        path = render(r, path=str(tmp_path / "img.ppm"))
        data = open(path, "rb").read()
        assert data.startswith(b"P6\n2 2\n255\n")
        assert len(data) == len(b"P6\n2 2\n255\n") + 12

    def test_figure_written(self, tmp_path):
        r = compute_grid(ExpAffine(1.0), (-4, 4, -4, 4), 16, 16)
        path = raster_figure(r, str(tmp_path / "fig.png"), title="escape")
        assert png_size(path)[0] > 100
