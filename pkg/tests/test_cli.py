"""End-to-end tests of the command line interface (in-process)."""

import json

import pytest

from densilab.cli import main, parse_matrix


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


FAST = ("--samples", "20000", "--j-max", "4")


# --------------------------------------------------------------------------
# matrix literals


class TestParseMatrix:
    def test_inline_literal(self):
        assert parse_matrix("1,2;3,4") == [[1, 2], [3, 4]]

    def test_diag_literal(self):
        assert parse_matrix("diag(2,4)") == [[2, 0], [0, 4]]

    def test_floats(self):
        assert parse_matrix("1.5,0;0,2") == [[1.5, 0], [0, 2]]

    def test_json_file(self, tmp_path):
        f = tmp_path / "m.json"
        f.write_text('{"rows": [[2, 0], [0, 4]]}')
        assert parse_matrix(str(f)) == [[2, 0], [0, 4]]
        g = tmp_path / "bare.json"
        g.write_text("[[3, 0], [0, 5]]")
        assert parse_matrix(str(g)) == [[3, 0], [0, 5]]

    @pytest.mark.parametrize("bad", ["1,2;3", "1,x;0,2", "", ";"])
    def test_rejects_malformed(self, bad):
        from densilab import ParseError
        with pytest.raises(ParseError):
            parse_matrix(bad)


# --------------------------------------------------------------------------
# analyze


class TestAnalyze:
    def test_json_report(self, capsys):
        code, out, err = run_cli(capsys, "analyze", "diag(2,4)")
        assert code == 0 and err == ""
        d = json.loads(out)
        assert d["dim"] == 2
        assert d["exact"] is True
        assert d["lattice"] is True
        assert d["expansive"] is True
        assert d["positive"] is True
        assert d["eigenvalues"] == [{"value": 2.0, "multiplicity": 1},
                                    {"value": 4.0, "multiplicity": 1}]
        assert d["integer_spectrum"] == [[2, 1], [4, 1]]
        assert d["absolutized"]["rows"] == [[2.0, 0.0], [0.0, 4.0]]

    def test_non_expansive_map(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "diag(1,2)")
        assert code == 0
        d = json.loads(out)
        assert d["expansive"] is False
        assert d["absolutized"] is None

    def test_csv_and_text_formats(self, capsys):
        code, out, _ = run_cli(capsys, "analyze", "--format", "csv", "diag(2,4)")
        assert code == 0
        assert out.splitlines()[0] == "value,multiplicity"
        code, out, _ = run_cli(capsys, "analyze", "--format", "text", "3,1;1,3")
        assert code == 0
        assert "expansive: True" in out

    def test_rejects_non_symmetric(self, capsys):
        code, out, err = run_cli(capsys, "analyze", "1,2;0,3")
        assert code == 2 and out == ""
        assert json.loads(err)["error"]["code"] == "NotSymmetric"


# --------------------------------------------------------------------------
# equiv


class TestEquiv:
    def test_equivalent_pair_exits_zero(self, capsys):
        code, out, _ = run_cli(capsys, "equiv", "diag(4,9)", "diag(8,27)")
        assert code == 0
        d = json.loads(out)
        assert d["status"] == "EquivalentTrivially"
        assert d["verdict"]["t"] == pytest.approx(1.5)
        assert d["witness"]["kind"] == "RationalExponent"

    def test_non_equivalent_pair_exits_one(self, capsys):
        code, out, _ = run_cli(capsys, "equiv", "diag(2,4)", "diag(2,8)")
        assert code == 1
        d = json.loads(out)
        assert d["status"] == "NotEquivalent"
        assert d["reason"] == "ExponentMismatch"

    def test_error_exits_two(self, capsys):
        code, _, err = run_cli(capsys, "equiv", "diag(1,2)", "diag(2,4)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "NotExpansive"

    def test_text_format_mentions_witness(self, capsys):
        code, out, _ = run_cli(capsys, "equiv", "--format", "text",
                               "diag(2,4)", "diag(3,9)")
        assert code == 0
        assert "status: EquivalentTrivially" in out
        assert "kind=CommonBase" in out


# --------------------------------------------------------------------------
# density


class TestDensity:
    def test_json_sweep(self, capsys):
        code, out, _ = run_cli(capsys, "density", "--set", "ealpha", "--alpha", "3",
                               *FAST, "diag(2,4)")
        assert code == 0
        d = json.loads(out)
        assert [e["j"] for e in d["series"]] == [0, 1, 2, 3, 4]
        assert d["classification"] == "ConvergesToOne"

    def test_exact_column(self, capsys):
        code, out, _ = run_cli(capsys, "density", "--alpha", "2", "--exact",
                               *FAST, "diag(2,4)")
        assert code == 0
        d = json.loads(out)
        for e in d["series"]:
            assert e["exact"] == pytest.approx(2.0 / 3.0, rel=1e-12)
            assert abs(e["ratio"] - e["exact"]) < 5 * e["stderr"]

    def test_exact_column_complement(self, capsys):
        code, out, _ = run_cli(capsys, "density", "--alpha", "2", "--exact",
                               "--complement", *FAST, "diag(2,4)")
        assert code == 0
        d = json.loads(out)
        for e in d["series"]:
            assert e["exact"] == pytest.approx(1.0 / 3.0, rel=1e-12)

    def test_csv_format_with_exact(self, capsys):
        code, out, _ = run_cli(capsys, "density", "--format", "csv", "--alpha", "2",
                               "--exact", *FAST, "diag(2,4)")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "j,ratio,stderr,samples,exact"
        assert len(lines) == 6
        assert float(lines[1].split(",")[4]) == pytest.approx(2.0 / 3.0)

    def test_reruns_are_byte_identical(self, capsys):
        argv = ("density", "--alpha", "1.5", "--seed", "3", *FAST, "diag(2,4)")
        _, first, _ = run_cli(capsys, *argv)
        _, second, _ = run_cli(capsys, *argv)
        assert first == second

    def test_gdelta_defaults_to_the_fast_axis(self, capsys):
        code, out, _ = run_cli(capsys, "density", "--set", "gdelta", "--delta", "1",
                               *FAST, "diag(2,4)")
        assert code == 0
        assert json.loads(out)["classification"] == "ConvergesToOne"

    def test_gdelta_explicit_slow_axis(self, capsys):
        code, out, _ = run_cli(capsys, "density", "--set", "gdelta", "--delta", "1",
                               "--u", "0,1", *FAST, "diag(2,4)")
        assert code == 0
        assert json.loads(out)["classification"] == "ConvergesToZero"

    def test_region_json_file(self, capsys, tmp_path):
        f = tmp_path / "region.json"
        f.write_text(json.dumps({"kind": "ball", "dim": 2, "r": 0.9}))
        code, out, _ = run_cli(capsys, "density", "--set", "json",
                               "--region-json", str(f), *FAST, "diag(2,4)")
        assert code == 0
        assert json.loads(out)["classification"] == "ConvergesToOne"

    def test_region_dimension_mismatch(self, capsys, tmp_path):
        f = tmp_path / "region.json"
        f.write_text(json.dumps({"kind": "ball", "dim": 3, "r": 0.9}))
        code, _, err = run_cli(capsys, "density", "--set", "json",
                               "--region-json", str(f), *FAST, "diag(2,4)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "BadParameter"

    def test_exact_needs_diagonal_map(self, capsys):
        code, _, err = run_cli(capsys, "density", "--alpha", "2", "--exact",
                               *FAST, "3,1;1,3")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "BadParameter"

    def test_exact_rejects_other_sets(self, capsys):
        code, _, err = run_cli(capsys, "density", "--set", "gdelta", "--delta", "1",
                               "--exact", *FAST, "diag(2,4)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "BadParameter"

    def test_missing_alpha(self, capsys):
        code, _, err = run_cli(capsys, "density", *FAST, "diag(2,4)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "BadParameter"


# --------------------------------------------------------------------------
# seeds and config files


class TestConfig:
    def test_env_seed_matches_flag(self, capsys, monkeypatch):
        argv = ("density", "--alpha", "2", *FAST, "diag(2,4)")
        monkeypatch.setenv("DENSILAB_SEED", "5")
        _, via_env, _ = run_cli(capsys, *argv)
        monkeypatch.delenv("DENSILAB_SEED")
        _, via_flag, _ = run_cli(capsys, *argv[:-1], "--seed", "5", argv[-1])
        assert via_env == via_flag

    def test_flag_overrides_env_seed(self, capsys, monkeypatch):
        argv = ("density", "--alpha", "2", *FAST, "--seed", "7", "diag(2,4)")
        monkeypatch.setenv("DENSILAB_SEED", "5")
        _, with_env, _ = run_cli(capsys, *argv)
        monkeypatch.delenv("DENSILAB_SEED")
        _, without, _ = run_cli(capsys, *argv)
        assert with_env == without

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("DENSILAB_SEED", "not-a-number")
        code, _, err = run_cli(capsys, "analyze", "diag(2,4)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "ParseError"

    def test_toml_config(self, capsys, tmp_path):
        cfg = tmp_path / "densilab.toml"
        cfg.write_text('samples = 20000\nj_max = 3\nformat = "csv"\nseed = 2\n')
        code, out, _ = run_cli(capsys, "density", "--config", str(cfg),
                               "--alpha", "2", "diag(2,4)")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "j,ratio,stderr,samples"
        assert len(lines) == 5                      # j = 0..3

    def test_flag_overrides_toml(self, capsys, tmp_path):
        cfg = tmp_path / "densilab.toml"
        cfg.write_text('format = "csv"\nsamples = 20000\nj_max = 2\n')
        code, out, _ = run_cli(capsys, "density", "--config", str(cfg),
                               "--format", "json", "--alpha", "2", "diag(2,4)")
        assert code == 0
        json.loads(out)                             # json despite the file

    def test_unknown_config_key(self, capsys, tmp_path):
        cfg = tmp_path / "densilab.toml"
        cfg.write_text("smaples = 100\n")
        code, _, err = run_cli(capsys, "analyze", "--config", str(cfg), "diag(2,4)")
        assert code == 2
        e = json.loads(err)["error"]
        assert e["code"] == "ParseError" and "smaples" in e["message"]

    def test_bad_config_type(self, capsys, tmp_path):
        cfg = tmp_path / "densilab.toml"
        cfg.write_text('samples = "many"\n')
        code, _, err = run_cli(capsys, "analyze", "--config", str(cfg), "diag(2,4)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "ParseError"

    def test_missing_config_file(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "analyze", "--config",
                               str(tmp_path / "nope.toml"), "diag(2,4)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "ParseError"


# --------------------------------------------------------------------------
# classify and dyadic


class TestClassify:
    def test_root_two_representative(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "0,2;1,0")
        assert code == 0
        d = json.loads(out)
        assert d["det"] == -2 and d["trace"] == 0
        assert d["expanding"] is True
        assert d["classification"]["class"] == "A1"
        assert d["root_of_identity"] == {"l": 2, "n": 2}
        assert d["negative_det_square"] is True
        assert d["dyadic"] is None                  # not symmetric

    def test_negative_entries_need_separator(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--", "-1,-1;1,-1")
        assert code == 0
        assert json.loads(out)["classification"]["class"] == "-A3"

    def test_scalar_matrix(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "2,0;0,2")
        assert code == 0
        d = json.loads(out)
        assert d["classification"] is None          # det 4 is out of scope
        assert d["root_of_identity"] == {"l": 1, "n": 2}
        assert d["dyadic"] == {"dyadic": True, "t": 1.0}

    def test_symmetric_non_dyadic(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "diag(2,8)")
        assert code == 0
        d = json.loads(out)
        assert d["root_of_identity"] is None
        assert d["dyadic"]["dyadic"] is False

    def test_non_expanding(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "0,1;1,0")
        assert code == 0
        d = json.loads(out)
        assert d["expanding"] is False
        assert d["classification"] is None

    def test_non_integer_rejected(self, capsys):
        code, _, err = run_cli(capsys, "classify", "1.5,0;0,2")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "BadParameter"

    def test_scan_csv(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--scan", "2", "--format", "csv")
        assert code == 0
        lines = out.strip().split("\n")
        assert lines[0] == "entries,det,trace,class,conjugator,l,n"
        assert len(lines) > 10

    def test_scan_json_count(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "--scan", "1")
        assert code == 0
        d = json.loads(out)
        assert d["count"] == len(d["rows"]) > 0

    def test_scan_with_matrix_is_an_error(self, capsys):
        code, _, err = run_cli(capsys, "classify", "--scan", "2", "0,2;1,0")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "BadParameter"

    def test_matrix_file(self, capsys, tmp_path):
        f = tmp_path / "m.json"
        f.write_text('{"rows": [[0, 2], [-1, 0]]}')
        code, out, _ = run_cli(capsys, "classify", str(f))
        assert code == 0
        assert json.loads(out)["classification"]["class"] == "A2"


class TestDyadic:
    def test_scalar_map(self, capsys):
        code, out, _ = run_cli(capsys, "dyadic", "diag(4,4)")
        assert code == 0
        assert json.loads(out) == {"dyadic": True, "t": 2.0}

    def test_non_scalar_map(self, capsys):
        code, out, _ = run_cli(capsys, "dyadic", "diag(2,4)")
        assert code == 0
        assert json.loads(out) == {"dyadic": False, "t": None}

    def test_csv_format(self, capsys):
        code, out, _ = run_cli(capsys, "dyadic", "--format", "csv", "diag(4,4)")
        assert code == 0
        assert out == "dyadic,t\nTrue,2\n"

    def test_mixed_signs(self, capsys):
        code, out, _ = run_cli(capsys, "dyadic", "--", "diag(-2,2)")
        assert code == 0
        assert json.loads(out) == {"dyadic": True, "t": 1.0}

    def test_requires_expansive(self, capsys):
        code, _, err = run_cli(capsys, "dyadic", "diag(1,2)")
        assert code == 2
        assert json.loads(err)["error"]["code"] == "NotExpansive"
