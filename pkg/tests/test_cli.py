import json

import pytest

from semescape.cli import main
from semescape.escape import compute_grid, raster_to_json
from semescape.maps import ExpAffine, map_to_json
from semescape.words import periodic_translate_semigroup, semigroup_to_dict

import math

EXP_JSON = map_to_json(ExpAffine(1.0))


class TestRender:
    def test_writes_image(self, tmp_path):
        out = tmp_path / "img.png"
        code = main(["render", "--map", EXP_JSON, "--window=-4,4,-4,4",
                     "--size", "16x16", "--out", str(out)])
        assert code == 0
        assert out.exists() and out.stat().st_size > 0

    def test_map_from_file(self, tmp_path):
        mpath = tmp_path / "map.json"
        mpath.write_text(EXP_JSON)
        out = tmp_path / "img.ppm"
        assert main(["render", "--map", str(mpath), "--window=-2,2,-2,2",
                     "--size", "8x8", "--out", str(out)]) == 0
        assert out.read_bytes().startswith(b"P6\n8 8\n")

    def test_bad_window_is_usage_error(self, tmp_path):
        code = main(["render", "--map", EXP_JSON, "--window", "oops",
                     "--size", "8x8", "--out", str(tmp_path / "x.png")])
        assert code == 2


class TestOrbit:
    def test_summary_and_csv(self, tmp_path, capsys):
        csv_path = tmp_path / "orbit.csv"
        code = main(["orbit", "--map", EXP_JSON, "--z", "1,0",
                     "--iters", "50", "--csv", str(csv_path)])
        assert code == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["status"] == "escaped"
        assert summary["step"] <= 6
        lines = csv_path.read_text().strip().splitlines()
        assert lines[0] == "step,re,im,modulus"
        assert len(lines) == 5  # header + the four finite orbit points


class TestComponents:
    def test_reports_components(self, tmp_path, capsys):
        raster = compute_grid(ExpAffine(1.0), (-4, 4, -4, 4), 24, 24)
        rpath = tmp_path / "raster.json"
        rpath.write_text(raster_to_json(raster))
        bpath = tmp_path / "boundary.csv"
        code = main(["components", "--raster", str(rpath),
                     "--connectivity", "8", "--boundary-csv", str(bpath)])
        assert code == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["component_count"] >= 1
        assert bpath.read_text().splitlines()[0] == "i,j"


class TestConjugate:
    def test_conjugates_semigroup(self, tmp_path, capsys):
        g = periodic_translate_semigroup(ExpAffine(1.0), 1, 2j * math.pi)
        gpath = tmp_path / "sg.json"
        gpath.write_text(json.dumps(semigroup_to_dict(g)))
        code = main(["conjugate", "--semigroup", str(gpath), "--phi", "2,1"])
        assert code == 0
        out = json.loads(capsys.readouterr().out)
        assert len(out["generators"]) == 2
        assert out["generators"][0]["family"] == "exp_affine"
        assert out["generators"][0]["a"] == [0.5, 0.0]
        assert out["periodic_translate"] == {"s": 1}


class TestVerify:
    def test_unknown_scenario_is_config_error(self):
        assert main(["verify", "bogus_scenario"]) == 2

    def test_single_pass(self, capsys):
        code = main(["verify", "halfplane_invariance", "--config",
                     '{"samples": 100, "budget": {"max_iter": 30}}'])
        assert code == 0
        out = capsys.readouterr().out
        assert "halfplane_invariance: PASS" in out

    def test_failing_threshold_sets_exit_code(self):
        code = main(["verify", "halfplane_invariance", "--config",
                     '{"samples": 50, "budget": {"max_iter": 20},'
                     ' "thresholds": {"violations_right": [">=", 1]}}'])
        assert code == 1

    def test_bad_config_key(self):
        assert main(["verify", "halfplane_invariance", "--config", '{"nope": 1}']) == 2


class TestUsage:
    def test_no_arguments(self):
        assert main([]) == 2

    def test_unknown_command(self):
        assert main(["frobnicate"]) == 2
