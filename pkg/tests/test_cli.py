import json

import numpy as np
import pytest

from pwlab.cli import builtin_body, run
from pwlab.geometry import GeometryError


class TestDispatch:
    def test_omega_anchor_output(self, capsys):
        assert run(["omega", "--body", "ball2", "--point", "1,0"]) == 0
        assert capsys.readouterr().out.strip() == "1.228370"

    def test_omega_monte_carlo(self, capsys):
        assert run(["omega", "--body", "square", "--point", "0.5,1",
                    "--mode", "mc", "--samples", "100000", "--seed", "3"]) == 0
        out = capsys.readouterr().out
        assert abs(float(out.split()[0]) - 0.5) < 0.02

    def test_unknown_command_usage_error(self, capsys):
        assert run(["frobnicate"]) == 2

    def test_unknown_body_is_failure(self, capsys):
        assert run(["omega", "--body", "dodecahedron", "--point", "0,0"]) == 1

    def test_builtin_table(self):
        for name in ("ball2", "ball3", "square", "cube", "triangle",
                     "pyramid", "halfline-model"):
            builtin_body(name)

    def test_body_file_roundtrip(self, tmp_path):
        from pwlab.geometry import body_to_json, unit_box
        path = tmp_path / "poly.json"
        path.write_text(body_to_json(unit_box(2)))
        body = builtin_body(str(path))
        assert body.dim == 2


class TestReports:
    def test_sublevel_csv_and_json(self, tmp_path, capsys):
        out = tmp_path / "sub.json"
        csv_path = tmp_path / "sub.csv"
        code = run(["sublevel", "--body", "halfline-model", "--t-min", "1e-2",
                    "--t-max", "1e-1", "--count", "6", "--samples", "200000",
                    "--seed", "4", "--out", str(out), "--csv", str(csv_path)])
        assert code == 0
        doc = json.loads(out.read_text())
        assert {"exponent", "residual", "config"} <= set(doc)
        header = csv_path.read_text().splitlines()[0]
        assert header == "t,measure,stderr"

    def test_nehari_report_byte_identical(self, tmp_path):
        args = ["nehari-sweep", "--p", "6", "--eps", "0.4,0.3,0.2,0.15",
                "--seed", "7"]
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        assert run(args + ["--out", str(a)]) == 0
        assert run(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        doc = json.loads(a.read_text())
        assert len(doc["rows"]) == 4
        assert "log_ratio_vs_log_N_slope" in doc

    def test_hardy_tent_report(self, tmp_path, capsys):
        out = tmp_path / "tent.json"
        assert run(["hardy", "--family", "tent_product", "--body", "square",
                    "--d", "1.0", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert abs(doc["ratio"] - 4.0) < 0.05

    def test_simplicial_report(self, tmp_path, capsys):
        out = tmp_path / "approx.json"
        assert run(["simplicial", "--poly", "pyramid", "--eps", "0.2,0.1",
                    "--seed", "11", "--out", str(out)]) == 0
        doc = json.loads(out.read_text())
        assert doc["all_checks_pass"]
        assert len(doc["stages"]) == 2
        stage = doc["stages"][0]
        assert {"vertices", "facet_incidences", "certificates",
                "containment_margin", "checks"} <= set(stage)
        assert all(len(r["rho"]) == 5 for r in stage["certificates"])

    def test_verify_single_suite(self, capsys):
        assert run(["verify", "--suite", "fourier"]) == 0
        out = capsys.readouterr().out
        assert "[pass]" in out and "FAIL" not in out
