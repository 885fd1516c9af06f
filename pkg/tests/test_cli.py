"""Command line interface: subcommands, formats, exit codes."""

import json

import pytest

from persym.cli import main, parse_range


class TestParseRange:
    def test_forms(self):
        assert parse_range("1,3-5,9") == [1, 3, 4, 5, 9]
        assert parse_range("4") == [4]
        assert parse_range("2-2") == [2]
        assert parse_range("3,3,3") == [3]

    def test_bad(self):
        with pytest.raises(ValueError):
            parse_range("5-3")
        with pytest.raises(ValueError):
            parse_range("")


class TestCensusCommand:
    def test_csv(self, capsys):
        assert main(["census", "--n", "1", "--k", "3", "--format", "csv"]) == 0
        out = capsys.readouterr().out.strip().splitlines()
        assert out == ["i,count", "0,1", "1,3", "2,12"]

    def test_json(self, capsys):
        assert main(["census", "--n", "2", "--k", "4", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["counts"] == ["1", "9", "126", "504", "384"]
        assert doc["method"] == "exhaustive"

    def test_table(self, capsys):
        assert main(["census", "--n", "1", "--k", "2"]) == 0
        out = capsys.readouterr().out
        assert "rank  2" in out and "total=2^3" in out

    def test_multiset_method(self, capsys):
        assert main(["census", "--n", "2", "--k", "3", "--method", "multiset",
                     "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["method"] == "multiset-reduced"
        assert doc["counts"] == ["1", "9", "78", "168"]

    def test_budget_refusal_exit_2(self, capsys):
        assert main(["census", "--n", "3", "--k", "9"]) == 2
        err = capsys.readouterr().err
        assert "refused" in err and "budget=31" in err

    def test_raised_budget_runs(self, capsys):
        assert main(["census", "--n", "2", "--k", "9", "--budget", "21",
                     "--format", "csv"]) == 0

    def test_out_file(self, tmp_path, capsys):
        target = tmp_path / "census.json"
        assert main(["census", "--n", "1", "--k", "3", "--format", "json",
                     "--out", str(target)]) == 0
        assert json.loads(target.read_text())["counts"] == ["1", "3", "12"]
        assert capsys.readouterr().out == ""

    def test_bad_k_exit_2(self, capsys):
        assert main(["census", "--n", "1", "--k", "70"]) == 2


class TestVerifyCommand:
    def test_formulas_only(self, capsys):
        assert main(["verify", "--formulas-only"]) == 0
        out = capsys.readouterr().out
        assert "rank8-two-routes" in out and "0 errors" in out

    def test_point_grid_json(self, tmp_path, capsys):
        assert main([
            "verify", "--n", "1-2", "--k", "2-4", "--no-identities",
            "--cache-dir", str(tmp_path / "cache"), "--format", "json",
        ]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["exit_code"] == 0
        assert doc["tally"]["normative_mismatches"] == 0
        points = {(c["n"], c["k"]) for c in doc["checks"] if c["check"] == "sum-identity"}
        assert points == {(n, k) for n in (1, 2) for k in (2, 3, 4)}

    def test_n_without_k_exit_2(self, capsys):
        assert main(["verify", "--n", "1"]) == 2

    def test_no_cache_flag(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["verify", "--n", "1", "--k", "2", "--no-cache",
                     "--no-identities"]) == 0
        assert not (tmp_path / ".census-cache").exists()

    def test_default_cache_dir_created(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["verify", "--n", "1", "--k", "2", "--no-identities"]) == 0
        assert (tmp_path / ".census-cache" / "census_v0.1.0_n1_k2.json").exists()

    def test_cache_dir_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("PERSYM_CACHE_DIR", str(tmp_path / "envcache"))
        assert main(["verify", "--n", "1", "--k", "3", "--no-identities"]) == 0
        assert (tmp_path / "envcache" / "census_v0.1.0_n1_k3.json").exists()


class TestExtractCommand:
    def test_fit_in_2n_json(self, capsys):
        assert main(["extract", "--i", "2", "--fix-k", "5",
                     "--samples-n", "1-3", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["coefficients"] == ["-46", "39", "7"]
        assert doc["verdict"] == "consistent"

    def test_factored_route_text(self, capsys):
        assert main(["extract", "--i", "4", "--fix-k", "5", "--samples-n", "1-4",
                     "--route", "factored"]) == 0
        out = capsys.readouterr().out
        assert "route=factored" in out and "bracket" in out

    def test_fit_in_2k(self, capsys):
        assert main(["extract", "--i", "2", "--fix-n", "1",
                     "--samples-k", "3-5", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["coefficients"] == ["-4", "2"]

    def test_affine_check_tabled(self, capsys):
        assert main(["extract", "--i", "5", "--affine-check",
                     "--ks", "6,7,8", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["slope"] == "155/4" and doc["intercept"] == "-2573"
        assert doc["matches_table"] and doc["source"] == "tabled-row"

    def test_affine_check_empirical(self, capsys):
        assert main(["extract", "--i", "2", "--affine-check", "--ks", "3-5",
                     "--empirical", "--format", "json"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["source"] == "fitted-counts" and doc["matches_table"]

    def test_missing_mode_exit_2(self, capsys):
        assert main(["extract", "--i", "2"]) == 2

    def test_budget_refusal_exit_2(self, capsys):
        assert main(["extract", "--i", "2", "--fix-k", "9",
                     "--samples-n", "1-3"]) == 2
        assert "refused" in capsys.readouterr().err


class TestCatalogCommand:
    def test_dump(self, capsys):
        assert main(["catalog"]) == 0
        doc = json.loads(capsys.readouterr().out)
        assert doc["schema_version"] == 1
        assert doc["leading_affine_pairs"]["pairs"]["8"] == ["10795/32", "173485"]
