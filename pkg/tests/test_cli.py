import json

import numpy as np
import pytest
from click.testing import CliRunner

from gbpflow.cli import main
from gbpflow.model import bundled

BUNDLED = ["chain", "cone", "triangle", "tree7", "clamped_chain", "frustrated_triangle"]


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def payload(result):
    return json.loads(result.output)


class TestInfer:
    def test_chain_converges(self):
        r = invoke("infer", "chain")
        assert r.exit_code == 0, r.output
        out = payload(r)
        assert out["converged"] and out["iterations"] <= out["diameter"] + 1
        assert out["drift"]["global_sum"] < 1e-10
        assert len(out["residuals"]) == out["iterations"] + 1

    def test_matches_exact(self):
        q = payload(invoke("infer", "chain", "--tol", "1e-12"))["marginals"]
        p = payload(invoke("exact", "chain"))["marginals"]
        assert q.keys() == p.keys()
        for k in q:
            np.testing.assert_allclose(q[k], p[k], atol=1e-8)

    def test_deterministic(self):
        args = ("infer", "triangle", "--step", "0.5")
        assert invoke(*args).output == invoke(*args).output

    def test_seventeen_digits(self):
        out = invoke("exact", "chain").output
        value = payload(invoke("exact", "chain"))["free_energy"]
        assert repr(value) in out or f"{value:.17g}" in out

    def test_trace_file(self, tmp_path):
        path = tmp_path / "trace.jsonl"
        r = invoke("infer", "tree7", "--trace", str(path))
        assert r.exit_code == 0
        rows = [json.loads(line) for line in path.read_text().splitlines()]
        assert [row["iter"] for row in rows] == list(range(len(rows)))
        assert rows[-1]["residual"] <= 1e-10

    def test_normalized(self):
        out = payload(invoke("infer", "triangle", "--flux", "normalized", "--step", "0.5"))
        assert out["divergence"] == "truncated" and out["normalize_each_step"]
        assert out["converged"] and out["drift"]["log_product"] < 1e-9

    def test_clamped(self):
        out = payload(invoke("infer", "clamped_chain", "--clamp"))
        assert out["divergence"] == "interior" and out["converged"]

    def test_figures(self, tmp_path):
        r = invoke("compare", "chain", "--figures", str(tmp_path))
        assert r.exit_code == 0
        names = {p.name for p in tmp_path.iterdir()}
        assert {"chain_residuals.png", "chain_marginals.png"} <= names
        for f in payload(r)["figures"]:
            assert open(f, "rb").read(8) == b"\x89PNG\r\n\x1a\n"


class TestOtherCommands:
    def test_exact(self):
        out = payload(invoke("exact", "triangle"))
        for v in out["marginals"].values():
            assert abs(sum(v) - 1) < 1e-12
        assert np.isfinite(out["entropy"]) and np.isfinite(out["free_energy"])

    def test_compare_tree(self):
        out = payload(invoke("compare", "tree7"))
        assert out["max_total_variation"] < 1e-8
        assert abs(out["free_energy_gap"]) < 1e-8

    def test_compare_loopy_gap(self):
        out = payload(invoke("compare", "triangle", "--step", "0.5"))
        assert out["converged"] and out["max_total_variation"] > 0

    def test_spectrum(self, tmp_path):
        r = invoke("spectrum", "triangle", "--step", "0.5", "--figures", str(tmp_path))
        assert r.exit_code == 0
        out = payload(r)
        assert out["eigen_residual"] < 1e-8
        assert all(len(pair) == 2 for pair in out["eigenvalues"])
        assert (tmp_path / "triangle_spectrum.png").exists()

    @pytest.mark.parametrize("name", BUNDLED)
    def test_check_bundled(self, name):
        r = invoke("check", name)
        assert r.exit_code == 0, r.output
        assert payload(r)["ok"]

    def test_all_bundled_listed(self):
        assert set(BUNDLED) <= set(bundled())

    def test_version(self):
        r = invoke("--version")
        assert r.exit_code == 0 and "0.1.0" in r.output


class TestExitCodes:
    def test_parse(self, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text('{"variables": [{"id": 0, "cardinality": 2}], "factors": '
                     '[{"vars": [0], "table": [1, 2, 3]}]}')
        r = invoke("infer", str(p))
        assert r.exit_code == 2
        assert "factors[0].table" in r.output

    def test_missing_file(self):
        assert invoke("exact", "/nonexistent/model.json").exit_code == 2

    def test_precondition(self):
        assert invoke("infer", "chain", "--clamp").exit_code == 3
        assert invoke("infer", "chain", "--flux", "normalized").exit_code == 3
        assert invoke("infer", "chain", "--step", "2").exit_code == 3

    def test_divergence(self):
        r = invoke("infer", "triangle", "--flux", "standard", "--divergence", "full")
        assert r.exit_code == 4
        assert payload(r)["diverged"]

    def test_spectrum_without_equilibrium(self):
        r = invoke("spectrum", "frustrated_triangle", "--max-iters", "5")
        assert r.exit_code == 4

    def test_guard(self, tmp_path):
        n = 23
        doc = {"variables": [{"id": i, "cardinality": 2} for i in range(n)],
               "factors": [{"vars": [i, i + 1], "table": [0, 0, 0, 0]} for i in range(n - 1)]}
        p = tmp_path / "big.json"
        p.write_text(json.dumps(doc))
        assert invoke("exact", str(p)).exit_code == 5

    def test_check_failure_exit(self, monkeypatch):
        from gbpflow import cli
        from gbpflow.checks import Check
        monkeypatch.setattr(cli, "property_suite", lambda *a: [Check("forced", 1.0, 0.5)])
        r = invoke("check", "chain")
        assert r.exit_code == 1
        assert not payload(r)["ok"]
