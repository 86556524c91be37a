import json
import math

import pytest

from potentia.cli.commands.calibrate import CalibrateResponse
from potentia.cli.commands.capacity import CapacityResponse, FeketeResponse
from potentia.cli.commands.chebyshev import ChebyshevResponse
from potentia.cli.commands.diophantine import BernsteinResponse, EnumerateResponse, SearchResponse, VolumeResponse
from potentia.cli.commands.jacobi import JacobiResponse
from potentia.main import run
from potentia.models.integerize import LiftCertificateOut, PipelineReport


def _invoke(capsys, tmp_path, *argv):
    code = run([*argv, "--output-dir", str(tmp_path)])
    lines = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(lines[-1]) if lines else None


def _reload(tmp_path, name, model):
    return model.model_validate(json.loads((tmp_path / f"{name}.json").read_text()))


class TestCommands:
    def test_capacity_of_an_interval(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "capacity", "--interval", "-1", "1", "--n", "64")
        assert code == 0
        assert out["code"] == 0
        assert out["data"]["value"] == pytest.approx(0.5, rel=0.02)
        assert _reload(tmp_path, "capacity", CapacityResponse).value == pytest.approx(out["data"]["value"])

    def test_jacobi_literal(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "jacobi", "--json", '{"r": 2, "a": [0, 0], "b": [1, 2]}')
        assert code == 0
        assert out["data"]["bands"] == [[pytest.approx(-3.0), pytest.approx(-1.0)],
                                        [pytest.approx(1.0), pytest.approx(3.0)]]
        assert out["data"]["capacity"] == pytest.approx(math.sqrt(2))
        saved = json.loads((tmp_path / "jacobi.json").read_text())
        assert saved["naiman"] == ["-5", "0", "1"]
        assert saved["modulus"] == "2"
        _reload(tmp_path, "jacobi", JacobiResponse)

    def test_lift(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "lift", "--poly", '["-1/2", 1]', "--R2", "2", "--localize")
        assert code == 0
        assert out["data"]["c"] == 2
        assert out["data"]["certified"] is True
        saved = _reload(tmp_path, "lift", LiftCertificateOut)
        assert saved.gamma == ["0", "-1", "1"]
        assert saved.zeros_inside == 2

    def test_lift_of_a_quadratic(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "lift", "--poly", '["-29/4", 0, 1]', "--R2", "1.25")
        assert code == 0
        assert out["data"]["c"] == 4
        saved = _reload(tmp_path, "lift", LiftCertificateOut)
        assert saved.gamma == ["2744", "0", "-1519", "0", "315", "0", "-29", "0", "1"]
        assert saved.certified

    def test_enumerate_unit_disk(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "enumerate", "--disk", "1", "--n", "1")
        assert code == 0
        # z, z - 1, z + 1
        assert out["data"]["count"] == 3
        assert _reload(tmp_path, "enumerate", EnumerateResponse).count == 3

    def test_chebyshev_interval(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "chebyshev", "--interval", "-1", "1", "--degree", "3")
        assert code == 0
        saved = _reload(tmp_path, "chebyshev", ChebyshevResponse)
        assert saved.norm == pytest.approx(0.25)
        assert saved.alternation_count >= 4

    def test_calibrate_mirror_pair(self, capsys, tmp_path):
        code, _ = _invoke(capsys, tmp_path, "calibrate", "--bands", "-3", "-1", "1", "3", "--m", "4",
                          "--green", "0", "0")
        assert code == 0
        saved = _reload(tmp_path, "calibrate", CalibrateResponse)
        assert saved.calibrated.n_k == [2, 2]
        assert saved.capacity == pytest.approx(math.sqrt(2), rel=1e-6)
        assert saved.green[0].g > 0

    def test_pipeline_mirror_pair(self, capsys, tmp_path):
        code, _ = _invoke(capsys, tmp_path, "pipeline", "--bands", "-3", "-1", "1", "3", "--degree-budget", "8")
        assert code == 0
        report = _reload(tmp_path, "pipeline", PipelineReport)
        assert report.stages[-1].degree == 8
        assert report.stages[-1].band_counts == [4, 4]

    def test_search_unit_interval(self, capsys, tmp_path):
        code, _ = _invoke(capsys, tmp_path, "search", "--interval", "-1", "1", "--n", "3")
        assert code == 0
        assert len(_reload(tmp_path, "search", SearchResponse).polynomials) == 4

    def test_volume_of_the_linear_body(self, capsys, tmp_path):
        code, _ = _invoke(capsys, tmp_path, "volume", "--interval", "-1", "1", "--n", "1", "--samples", "20000")
        assert code == 0
        saved = _reload(tmp_path, "volume", VolumeResponse)
        assert saved.rows[0].volume == pytest.approx(2.0, rel=0.1)

    def test_bernstein(self, capsys, tmp_path):
        code, _ = _invoke(capsys, tmp_path, "bernstein", "--values", '["0", "1/4", "1"]')
        assert code == 0
        saved = _reload(tmp_path, "bernstein", BernsteinResponse)
        assert saved.n == 2
        assert saved.ferguson_approximable


class TestExitCodes:
    def test_small_capacity_is_refused(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "pipeline", "--interval", "-1", "1")
        assert code == 3
        assert out["code"] == 3
        assert out["error"]["kind"] == "refused"

    def test_bad_band_set(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "capacity", "--bands", "1", "0")
        assert code == 2

    def test_bad_json(self, capsys, tmp_path):
        code, _ = _invoke(capsys, tmp_path, "jacobi", "--json", "{not json")
        assert code == 2

    def test_missing_argument(self, capsys, tmp_path):
        assert run(["fekete", "--interval", "-1", "1"]) == 2

    def test_enumeration_budget(self, capsys, tmp_path):
        code, out = _invoke(capsys, tmp_path, "search", "--interval", "-1", "1", "--n", "10", "--bound", "10")
        assert code == 4
        assert out["error"]["kind"] == "budget_exceeded"


class TestOutputFiles:
    def test_csv_table(self, capsys, tmp_path):
        code, _ = _invoke(capsys, tmp_path, "fekete", "--interval", "-1", "1", "--n", "5", "--format", "csv")
        assert code == 0
        lines = (tmp_path / "fekete.csv").read_text().strip().splitlines()
        assert lines[0] == "re,im"
        assert len(lines) == 6

    def test_reruns_are_byte_identical(self, capsys, tmp_path):
        first, second = tmp_path / "a", tmp_path / "b"
        argv = ["fekete", "--interval", "-1", "1", "--n", "12", "--seed", "5"]
        assert run([*argv, "--output-dir", str(first)]) == 0
        assert run([*argv, "--output-dir", str(second), "--threads", "2"]) == 0
        capsys.readouterr()
        assert (first / "fekete.json").read_bytes() == (second / "fekete.json").read_bytes()
        assert _reload(first, "fekete", FeketeResponse).n == 12
