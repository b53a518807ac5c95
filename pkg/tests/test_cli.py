import csv
import json

import numpy as np
import pytest

import vncert.haar
from vncert import cli


def run_cli(argv, capsys):
    rc = cli.main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def last_json(out):
    return json.loads(out)


class TestAnalytic:
    def test_both_unknown_symmetric(self, capsys):
        rc, out, _ = run_cli(["analytic", "--mode", "both-unknown",
                              "--scheme", "symmetric", "--dim", "2"], capsys)
        assert rc == 0
        record = last_json(out)
        assert record["command"] == "analytic"
        assert set(record) == {"command", "version", "config", "duration_s",
                               "result"}
        assert record["result"]["p_succ"] == 0.75
        assert record["result"]["p1"] == 0.0
        assert record["result"]["ancilla_needed"] is False

    def test_one_fixed_asymmetric(self, capsys):
        rc, out, _ = run_cli(["analytic", "--mode", "one-fixed",
                              "--scheme", "asymmetric", "--dim", "5"], capsys)
        assert rc == 0
        result = last_json(out)["result"]
        assert result["p2"] == 0.2
        assert result["p_succ"] == 0.9
        assert result["diamond"] == pytest.approx(1.6, abs=1e-12)

    def test_dim_too_small(self, capsys):
        rc, _, err = run_cli(["analytic", "--dim", "1"], capsys)
        assert rc == 2
        assert "dimension" in err

    def test_unknown_flag(self, capsys):
        rc, _, _ = run_cli(["analytic", "--bogus"], capsys)
        assert rc == 2

    def test_missing_command(self, capsys):
        rc, _, _ = run_cli([], capsys)
        assert rc == 2


class TestSimulate:
    def test_record_and_z_scores(self, capsys):
        rc, out, _ = run_cli(["simulate", "--mode", "both-unknown",
                              "--scheme", "symmetric", "--dim", "3",
                              "--trials", "20000", "--seed", "7",
                              "--threads", "1"], capsys)
        assert rc == 0
        record = last_json(out)
        assert record["config"]["seed"] == 7
        est = record["result"]["empirical"]["p_succ"]
        assert abs(est["z"]) <= 4.0
        assert abs(est["value"] - record["result"]["analytic"]["p_succ"]) \
            <= 4 * est["stderr"]

    def test_asymmetric_zero_false_positive(self, capsys):
        rc, out, _ = run_cli(["simulate", "--mode", "one-fixed",
                              "--scheme", "asymmetric", "--dim", "2",
                              "--trials", "10000", "--seed", "8",
                              "--threads", "2"], capsys)
        assert rc == 0
        empirical = last_json(out)["result"]["empirical"]
        assert empirical["p1"]["value"] == 0.0
        assert abs(empirical["p2"]["z"]) <= 4.0

    def test_byte_identical_repeats(self, capsys):
        argv = ["simulate", "--dim", "2", "--trials", "5000", "--seed", "9",
                "--threads", "1"]
        _, out1, _ = run_cli(argv, capsys)
        _, out2, _ = run_cli(argv, capsys)
        r1, r2 = last_json(out1), last_json(out2)
        assert json.dumps(r1["result"]) == json.dumps(r2["result"])

    def test_zero_trials(self, capsys):
        rc, _, err = run_cli(["simulate", "--trials", "0"], capsys)
        assert rc == 2
        assert "trials" in err

    def test_env_seed_fallback(self, capsys, monkeypatch):
        argv = ["simulate", "--dim", "2", "--trials", "5000", "--threads", "1"]
        monkeypatch.setenv(cli.DEFAULT_SEED_ENV, "31")
        _, out_env, _ = run_cli(argv, capsys)
        monkeypatch.delenv(cli.DEFAULT_SEED_ENV)
        _, out_explicit, _ = run_cli(argv + ["--seed", "31"], capsys)
        env_rec, exp_rec = last_json(out_env), last_json(out_explicit)
        assert env_rec["config"]["seed"] == 31
        assert env_rec["result"] == exp_rec["result"]


class TestVerify:
    def test_passes_at_dmax2(self, capsys):
        rc, out, _ = run_cli(["verify", "--dmax", "2", "--seed", "0",
                              "--mc-samples", "20000",
                              "--inequality-instances", "100"], capsys)
        assert rc == 0
        lines = out.strip().splitlines()
        assert all(line.startswith("[PASS]") for line in lines[:-1])
        assert lines[-1].endswith("checks passed")

    def test_detects_injected_sign_error(self, capsys, monkeypatch):
        # corrupting the dephased swap skews the averaged difference, so
        # the recomputed bounds stop matching the closed forms
        real = vncert.haar.dephased_swap
        monkeypatch.setattr(vncert.haar, "dephased_swap",
                            lambda d: -real(d))
        rc, out, _ = run_cli(["verify", "--dmax", "2", "--seed", "0",
                              "--mc-samples", "2000",
                              "--inequality-instances", "50"], capsys)
        assert rc == 1
        assert "[FAIL]" in out

    def test_dmax_too_small(self, capsys):
        rc, _, err = run_cli(["verify", "--dmax", "1"], capsys)
        assert rc == 2
        assert "dmax" in err


class TestSweep:
    def base_argv(self, out_path, fmt="csv"):
        return ["sweep", "--dims", "2,4", "--trials", "4000", "--seed", "5",
                "--threads", "1", "--out", str(out_path), "--format", fmt]

    def test_csv_contents(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        rc, out, _ = run_cli(self.base_argv(out_path), capsys)
        assert rc == 0
        record = last_json(out)
        assert record["result"]["rows"] == 2 * 2 * 2
        with open(out_path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 8
        assert rows[0].keys() == set(cli.SWEEP_COLUMNS)
        by_key = {(r["mode"], r["scheme"], r["d"]): r for r in rows}
        both4 = by_key[("both-unknown", "symmetric", "4")]
        assert float(both4["p_succ_analytic"]) == 0.625
        assert both4["p1_hat"] == ""
        fixed4 = by_key[("one-fixed", "asymmetric", "4")]
        assert float(fixed4["p2_analytic"]) == 0.25
        assert float(fixed4["p1_hat"]) == 0.0
        assert fixed4["p_succ_hat"] == ""

    def test_jsonl_format(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.jsonl"
        rc, _, _ = run_cli(self.base_argv(out_path, fmt="jsonl"), capsys)
        assert rc == 0
        rows = [json.loads(line) for line in
                out_path.read_text().splitlines()]
        assert len(rows) == 8
        sym = [r for r in rows if r["scheme"] == "symmetric"]
        assert all(r["p1_hat"] is None for r in sym)
        assert all(abs(r["p_succ_z"]) <= 5 for r in sym)

    def test_plot_renders_figures(self, capsys, tmp_path):
        out_path = tmp_path / "sweep.csv"
        rc, out, _ = run_cli(self.base_argv(out_path) + ["--plot"], capsys)
        assert rc == 0
        figures = last_json(out)["result"]["figures"]
        assert len(figures) == 2
        for fig in figures:
            assert fig.endswith(".png")
            assert (tmp_path / fig.split("/")[-1]).stat().st_size > 0

    def test_unwritable_path(self, capsys, tmp_path):
        missing_dir = tmp_path / "no" / "such" / "dir" / "sweep.csv"
        rc, _, err = run_cli(self.base_argv(missing_dir), capsys)
        assert rc == 1
        assert "cannot write" in err

    def test_bad_mode(self, capsys, tmp_path):
        rc, _, err = run_cli(["sweep", "--modes", "bogus", "--out",
                              str(tmp_path / "x.csv")], capsys)
        assert rc == 2
        assert "unknown mode" in err

    def test_bad_dims(self, capsys, tmp_path):
        rc, _, _ = run_cli(["sweep", "--dims", "2,x", "--out",
                            str(tmp_path / "x.csv")], capsys)
        assert rc == 2
