"""End-to-end command-line checks, run in process through main()."""

import json

import pytest

from dmlwb.cli import load_experiment_config, main

HENON = {"f1": "y", "f2": "y^2 - x"}
TRIANG = {"f1": "2*x", "f2": "x^3*y + x^5"}
FLIP = {"f1": "x + 1", "f2": "-y"}


@pytest.fixture
def henon_file(tmp_path):
    path = tmp_path / "henon.json"
    path.write_text(json.dumps(HENON))
    return str(path)


@pytest.fixture
def triang_file(tmp_path):
    path = tmp_path / "triang.json"
    path.write_text(json.dumps(TRIANG))
    return str(path)


@pytest.fixture
def flip_file(tmp_path):
    path = tmp_path / "flip.json"
    path.write_text(json.dumps(FLIP))
    return str(path)


def run_json(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    assert code == 0, captured.err
    return json.loads(captured.out)


class TestEnvelope:
    def test_shape(self, capsys, henon_file):
        doc = run_json(capsys, ["degrees", "--map", henon_file, "--horizon", "3"])
        assert doc["schema_version"] == 1
        assert doc["tool"]["name"] == "dmlwb"
        assert doc["command"] == "degrees"
        assert set(doc) == {"schema_version", "tool", "command", "config", "result"}

    def test_out_file_instead_of_stdout(self, capsys, henon_file, tmp_path):
        out = tmp_path / "report.json"
        code = main(
            ["degrees", "--map", henon_file, "--horizon", "3", "--out", str(out)]
        )
        captured = capsys.readouterr()
        assert code == 0
        assert captured.out == ""
        doc = json.loads(out.read_text())
        assert doc["command"] == "degrees"


class TestDegrees:
    def test_henon_profile(self, capsys, henon_file):
        doc = run_json(capsys, ["degrees", "--map", henon_file, "--horizon", "8"])
        assert doc["result"]["profile"]["degrees"] == [2, 4, 8, 16, 32, 64, 128, 256]
        assert doc["result"]["profile"]["growth_class"] == "exponential"
        assert doc["result"]["stability"] == "stable_up_to_8"

    def test_triangular_profile(self, capsys, triang_file):
        doc = run_json(capsys, ["degrees", "--map", triang_file, "--horizon", "8"])
        assert doc["result"]["profile"]["degrees"] == [
            3 * n + 2 for n in range(1, 9)
        ]
        assert doc["result"]["profile"]["growth_class"] == "linear"
        assert doc["result"]["stability"] == "unstable_at(2)"


class TestSmallCommands:
    def test_height(self, capsys):
        doc = run_json(capsys, ["height", "--point", "3/2,5"])
        assert doc["result"]["height"] == 10

    def test_northcott(self, capsys):
        doc = run_json(capsys, ["northcott", "--bound", "2", "--dim", "1"])
        assert doc["result"]["count"] == 8
        assert len(doc["result"]["points"]) == 8

    def test_product_check(self, capsys):
        doc = run_json(capsys, ["product-check", "--value", "12/35"])
        assert doc["result"]["product_is_one"] is True
        places = [entry["place"] for entry in doc["result"]["places"]]
        assert places == ["inf", "2", "3", "5", "7"]

    def test_curve_period(self, capsys, flip_file):
        doc = run_json(
            capsys,
            ["curve-period", "--map", flip_file, "--curve", "y - 1",
             "--max-period", "4"],
        )
        assert doc["result"]["period"] == 2
        assert doc["result"]["is_fixed"] is False

    def test_intersect(self, capsys):
        doc = run_json(
            capsys,
            ["intersect", "--c1", "y", "--c2", "y - x^2", "--at", "0,0"],
        )
        assert doc["result"]["multiplicity"] == 2

    def test_intersect_infinity(self, capsys):
        doc = run_json(
            capsys,
            ["intersect", "--c1", "y*(y - x)", "--c2", "y*(y + x)", "--at", "0,0"],
        )
        assert doc["result"]["multiplicity"] == "infinity"

    def test_intersect_all_points(self, capsys):
        doc = run_json(
            capsys,
            ["intersect", "--c1", "y - x^2", "--c2", "y - 4", "--at", "2,4",
             "--all-points"],
        )
        assert doc["result"]["multiplicity"] == 1
        assert doc["result"]["rational_points"] == [["-2", "4"], ["2", "4"]]
        assert doc["result"]["nonrational_detected"] is False


class TestBasin:
    def test_fn_auto_converges(self, capsys, triang_file):
        doc = run_json(
            capsys,
            ["basin", "--map", triang_file, "--point", "1,1",
             "--eps", "2^-20", "--horizon", "30"],
        )
        assert doc["result"]["verdict"] == "converged_at"
        assert doc["result"]["at"] <= 30

    def test_fn_explicit_n(self, capsys, triang_file):
        doc = run_json(
            capsys,
            ["basin", "--map", triang_file, "--model", "fn:3", "--point", "1,1",
             "--place", "inf", "--eps", "1e-6", "--horizon", "50"],
        )
        assert doc["result"]["verdict"] == "converged_at"

    def test_p2_requires_target(self, capsys, triang_file):
        code = main(["basin", "--map", triang_file, "--model", "p2",
                     "--point", "1,1"])
        captured = capsys.readouterr()
        assert code == 2
        assert "target" in captured.err

    def test_p2_with_nonfixed_target_is_domain_error(self, capsys, triang_file):
        code = main(["basin", "--map", triang_file, "--model", "p2",
                     "--point", "1,1", "--target", "5,5"])
        captured = capsys.readouterr()
        assert code == 1
        assert "not fixed" in captured.err

    def test_bad_model_tag(self, capsys, triang_file):
        code = main(["basin", "--map", triang_file, "--model", "zeta",
                     "--point", "1,1"])
        assert code == 2


class TestFnModel:
    def test_auto(self, capsys, triang_file):
        doc = run_json(capsys, ["fn-model", "--map", triang_file])
        res = doc["result"]
        assert res["n"] == 3 and res["threshold"] == 3 and res["stable"] is True
        assert res["contraction_check"] is True
        assert res["indeterminacy"]["point"] == "[1, 0, 0, 1]"
        assert res["components"][1] == "x2"
        assert res["components"][3] == "x2^3*x4"

    def test_below_threshold(self, capsys, triang_file):
        doc = run_json(capsys, ["fn-model", "--map", triang_file, "--n", "1"])
        res = doc["result"]
        assert res["stable"] is False
        assert res["indeterminacy"] is None
        assert res["contraction_check"] is None

    def test_report_flag_writes_file(self, capsys, triang_file, tmp_path):
        out = tmp_path / "model.json"
        code = main(["fn-model", "--map", triang_file, "--report", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["result"]["n"] == 3


class TestDmlScan:
    def test_curve_periodic_instance(self, capsys, flip_file):
        doc = run_json(
            capsys,
            ["dml", "scan", "--map", flip_file, "--curve", "y - 1",
             "--point", "0,1", "--horizon", "10", "--max-period", "4"],
        )
        res = doc["result"]
        assert res["verdict"] == "dichotomy_confirmed_curve_periodic"
        assert res["visit_set"] == [0, 2, 4, 6, 8, 10]
        assert res["ap"]["progressions"] == [[2, 0]]
        assert res["curve_period_witness"] == 2
        assert doc["command"] == "dml scan"

    def test_missing_map_file(self, capsys):
        code = main(["dml", "scan", "--map", "/nonexistent/f.json",
                     "--curve", "y", "--point", "0,0"])
        captured = capsys.readouterr()
        assert code == 2
        assert "usage error" in captured.err

    def test_malformed_map_file(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = main(["dml", "scan", "--map", str(bad),
                     "--curve", "y", "--point", "0,0"])
        assert code == 2

    def test_argparse_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["dml", "scan", "--curve", "y", "--point", "0,0"])
        assert exc.value.code == 2

    def test_zero_horizon_rejected(self, capsys, flip_file):
        with pytest.raises(SystemExit) as exc:
            main(["dml", "scan", "--map", flip_file, "--curve", "y",
                  "--point", "0,0", "--horizon", "0"])
        assert exc.value.code == 2


class TestBatch:
    @pytest.fixture
    def config_file(self, tmp_path, triang_file, flip_file):
        cfg = {
            "maps": [triang_file, flip_file],
            "curves": ["y - 1", "y - 2*x"],
            "points": ["0,1", "1,1"],
            "places": ["inf"],
            "horizons": {"N": 30, "K": 4, "M": 20},
        }
        path = tmp_path / "batch.json"
        path.write_text(json.dumps(cfg))
        return str(path)

    def test_cross_product_size_and_order(self, capsys, config_file):
        doc = run_json(capsys, ["batch", "--config", config_file])
        items = doc["result"]
        assert len(items) == 8
        # items iterate maps, then curves, then points, then places
        assert [it["curve"] for it in items[:4]] == [
            "y - 1", "y - 1", "y - 2*x", "y - 2*x",
        ]
        assert all(it["error"] is None for it in items)

    def test_local_probe_only_for_triangular(self, capsys, config_file, triang_file):
        doc = run_json(capsys, ["batch", "--config", config_file])
        for it in doc["result"]:
            if it["map"] == triang_file:
                assert it["local"] is not None
            else:
                assert it["local"] is None

    def test_parallel_output_is_byte_identical(self, config_file, tmp_path):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["batch", "--config", config_file, "--jobs", "1",
                     "--out", str(out1)]) == 0
        assert main(["batch", "--config", config_file, "--jobs", "3",
                     "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_jobs_env_override(self, config_file, tmp_path, monkeypatch):
        out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["batch", "--config", config_file, "--out", str(out1)]) == 0
        monkeypatch.setenv("DMLWB_JOBS", "4")
        assert main(["batch", "--config", config_file, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_bad_env_jobs(self, capsys, config_file, monkeypatch):
        monkeypatch.setenv("DMLWB_JOBS", "zero")
        assert main(["batch", "--config", config_file]) == 2

    def test_config_out_used_when_flag_absent(self, tmp_path, triang_file, capsys):
        target = tmp_path / "from_config.json"
        cfg = {
            "maps": [triang_file],
            "curves": ["y"],
            "points": ["1,1"],
            "out": str(target),
            "horizons": {"N": 10, "K": 3, "M": 5},
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert main(["batch", "--config", str(path)]) == 0
        capsys.readouterr()
        assert target.exists()

    def test_missing_config_is_usage_error(self, capsys):
        assert main(["batch", "--config", "/nonexistent/cfg.json"]) == 2

    def test_invalid_curve_rejected_at_load(self, tmp_path, triang_file, capsys):
        cfg = {
            "maps": [triang_file],
            "curves": ["y +* x"],
            "points": ["1,1"],
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert main(["batch", "--config", str(path)]) == 2
        assert "bad curve" in capsys.readouterr().err

    def test_inline_map_object_rejected_at_load(self, tmp_path, capsys):
        # maps entries are file paths, not inline map objects
        cfg = {
            "maps": [{"f1": "x + 1", "f2": "-y"}],
            "curves": ["y"],
            "points": ["1,1"],
        }
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        assert main(["batch", "--config", str(path)]) == 2
        assert "file paths" in capsys.readouterr().err

    def test_load_experiment_config_defaults(self, tmp_path, triang_file):
        cfg = {"maps": [triang_file], "curves": ["y"], "points": ["0,0"]}
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg))
        loaded = load_experiment_config(str(path))
        assert loaded.places == ("inf",)
        assert loaded.N == 200 and loaded.K == 12
        assert loaded.bit_guard == 10**6
