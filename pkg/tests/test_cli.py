"""CLI surface tests: artifacts, determinism, exit codes."""
import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from pseudoht.cli import main


def run_cli(args, tmp_path=None, out_name=None):
    out = str(tmp_path / out_name) if tmp_path else "-"
    return main(["--output", out] + args), out


class TestCatalog:
    def test_catalog_lists_signatures(self, tmp_path):
        code, out = run_cli(["catalog"], tmp_path, "cat.json")
        assert code == 0
        data = json.load(open(out))
        assert len(data["catalog"]) == 8
        assert all(e["passed"] for e in data["catalog"])
        assert all(e["max_residual"] <= 1e-12 for e in data["catalog"])

    def test_validate_known_signature(self, tmp_path):
        code, out = run_cli(["validate", "--sig", "1,1,2"], tmp_path, "val.json")
        assert code == 0
        assert json.load(open(out))["passed"]

    def test_validate_unknown_signature_usage_error(self, tmp_path):
        code, _ = run_cli(["validate", "--sig", "9,9,9"], tmp_path, "x.json")
        assert code == 1


class TestTables:
    def test_kernel_eval_csv(self, tmp_path):
        code, out = run_cli(["kernel", "eval", "--n", "2", "--s", "1",
                             "--count", "5"], tmp_path, "k.csv")
        assert code == 0
        rows = list(csv.reader(open(out)))
        assert rows[0] == ["xi1", "xi2", "xi3", "xi4", "theta1", "re_q", "im_q"]
        assert len(rows) == 6

    def test_kernel_eval_deterministic(self, tmp_path):
        _, a = run_cli(["kernel", "eval", "--count", "4", "--seed", "7"],
                       tmp_path, "a.csv")
        _, b = run_cli(["kernel", "eval", "--count", "4", "--seed", "7"],
                       tmp_path, "b.csv")
        assert open(a).read() == open(b).read()

    def test_kernel_cone_csv(self, tmp_path):
        code, out = run_cli(["kernel", "cone", "--n", "2", "--s", "1",
                             "--grid", "5"], tmp_path, "cone.csv")
        assert code == 0
        rows = list(csv.reader(open(out)))
        assert rows[0] == ["x1", "z1", "re_K", "im_K"]
        assert len(rows) > 1

    def test_specfun_table(self, tmp_path):
        code, out = run_cli(["specfun", "table", "--nu", "0.5", "--count", "8"],
                            tmp_path, "sf.csv")
        assert code == 0
        rows = list(csv.reader(open(out)))
        assert rows[0] == ["v", "J", "Y", "H"]
        v, J, Y, H = (float(x) for x in rows[1])
        assert J == pytest.approx(np.sqrt(2 / (np.pi * v)) * np.sin(v), abs=1e-10)


class TestPairCommand:
    def test_pair_json_roundtrip(self, tmp_path):
        from pseudoht.gausspoly import GaussPoly

        fn = tmp_path / "phi.json"
        fn.write_text(GaussPoly.iso_gaussian(5).to_json())
        code, out = run_cli(["pair", "--testfn", str(fn), "--n", "2", "--s", "1",
                             "--selector", "heaviside"], tmp_path, "pair.json")
        assert code == 0
        data = json.load(open(out))
        assert "value" in data and "est_error" in data and "budget" in data

    def test_pair_dimension_mismatch(self, tmp_path):
        from pseudoht.gausspoly import GaussPoly

        fn = tmp_path / "phi.json"
        fn.write_text(GaussPoly.iso_gaussian(3).to_json())
        code, _ = run_cli(["pair", "--testfn", str(fn), "--n", "2", "--s", "2"],
                          tmp_path, "pair.json")
        assert code == 1


class TestVerify:
    def test_verify_nonexistence(self, tmp_path):
        code, out = run_cli(["verify-nonexistence", "--sig", "1,1",
                             "--eta0", "2,1", "--delta", "0.5",
                             "--flow-nodes", "48"], tmp_path, "ne.json")
        assert code == 0
        data = json.load(open(out))
        assert data["passed"]
        assert data["relative_residual"] <= 1e-8
        assert data["integral"] > 0
        assert abs(data["phi_at_0"] - 1.0) < 1e-9

    def test_verify_nonexistence_rejects_r0(self, tmp_path):
        code, _ = run_cli(["verify-nonexistence", "--sig", "0,1,1"],
                          tmp_path, "x.json")
        assert code == 1

    @pytest.mark.slow
    def test_verify_fs(self, tmp_path):
        code, out = run_cli(["verify-fs", "--n", "2", "--s", "1", "--tol", "1e-2"],
                            tmp_path, "fs.json")
        assert code == 0
        assert json.load(open(out))["passed"]

    def test_byte_reproducible_json(self, tmp_path):
        _, a = run_cli(["verify-nonexistence", "--flow-nodes", "16"], tmp_path, "a.json")
        _, b = run_cli(["verify-nonexistence", "--flow-nodes", "16"], tmp_path, "b.json")
        assert open(a).read() == open(b).read()


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "pseudoht.cli", "catalog"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert '"catalog"' in proc.stdout
