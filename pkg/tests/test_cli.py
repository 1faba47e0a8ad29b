"""CLI wiring: output schemas, golden files, exit codes."""

import json
import math
import os
from fractions import Fraction
from pathlib import Path

import pytest

from lxebkit import cli, refval

GOLDEN = Path(__file__).parent / "golden"


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestRef:
    def test_bs_exact_golden(self, capsys):
        code, out, _ = run_cli(capsys, "ref", "--model", "bs", "--m", "2", "--n", "2", "--exact")
        assert code == 0
        assert out == (GOLDEN / "ref_bs_2_2.json").read_text()
        doc = json.loads(out)
        assert doc["result"]["value_exact"] == "7/15"

    def test_lossy_full_survival_equals_lossless(self, capsys):
        code, lossy, _ = run_cli(
            capsys, "ref", "--model", "bs-lossy", "--m", "6", "--n", "3", "--ell", "3"
        )
        assert code == 0
        code, plain, _ = run_cli(capsys, "ref", "--model", "bs", "--m", "6", "--n", "3", "--exact")
        assert code == 0
        lossy_doc, plain_doc = json.loads(lossy), json.loads(plain)
        assert lossy_doc["result"]["value_exact"] == plain_doc["result"]["value_exact"]

    def test_gbs_pairs(self, capsys):
        code, out, _ = run_cli(
            capsys, "ref", "--model", "gbs-uniform", "--m", "4", "--pairs", "2", "--d", "4"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["value_float"] > 0
        assert doc["result"]["n"] == 4

    def test_sbs_csv_golden(self, capsys):
        code, out, _ = run_cli(
            capsys, "ref", "--model", "sbs", "--m", "4", "--n", "2", "--d", "4",
            "--format", "csv",
        )
        assert code == 0
        assert out == (GOLDEN / "ref_sbs_4_2_4.csv").read_text()

    def test_product_state_route(self, capsys, tmp_path):
        state = tmp_path / "state.json"
        state.write_text(
            '{"modes": [{"kind": "fock", "n": 1}, {"kind": "fock", "n": 1}]}'
        )
        code, out, _ = run_cli(
            capsys, "ref", "--model", "product", "--state", str(state), "--n", "2", "--exact"
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["value_exact"] == "7/15"
        assert doc["result"]["method"] == "general-pipeline"

    def test_missing_param_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "ref", "--model", "bs", "--m", "2")
        assert code == 2 and "needs" in err

    def test_validation_exit_2(self, capsys):
        code, _, err = run_cli(capsys, "ref", "--model", "bs", "--m", "2", "--n", "5")
        assert code == 2 and "m >= n" in err

    def test_bad_state_file_exit_2(self, capsys, tmp_path):
        state = tmp_path / "bad.json"
        state.write_text('{"modes": [{"kind": "thermal"}]}')
        code, _, err = run_cli(
            capsys, "ref", "--model", "product", "--state", str(state), "--n", "1"
        )
        assert code == 2 and "modes[0].kind" in err


class TestAc:
    def test_bs_golden(self, capsys):
        code, out, _ = run_cli(capsys, "ac", "--model", "bs", "--m", "2", "--n", "2")
        assert code == 0
        assert out == (GOLDEN / "ac_bs_2_2.json").read_text()
        doc = json.loads(out)
        assert doc["result"]["ac_score"] == pytest.approx(1.4)
        assert doc["result"]["bound"] == pytest.approx(38.2)
        assert doc["result"]["verdict"] == "pass"

    def test_sbs_bracket(self, capsys):
        code, out, _ = run_cli(capsys, "ac", "--model", "sbs", "--m", "6", "--n", "12", "--d", "6")
        assert code == 0
        doc = json.loads(out)["result"]
        assert doc["bound_lower"] <= doc["ac_score"] <= doc["bound_upper"]
        assert doc["verdict"] == "pass"

    def test_gbs_single_source_concentrates(self, capsys):
        _, out1, _ = run_cli(capsys, "ac", "--model", "gbs", "--m", "4", "--n", "4", "--d", "1")
        _, out4, _ = run_cli(capsys, "ac", "--model", "gbs", "--m", "4", "--n", "4", "--d", "4")
        score1 = json.loads(out1)["result"]["ac_score"]
        score4 = json.loads(out4)["result"]["ac_score"]
        assert score1 > score4

    def test_gbs_d1_diagnostic_field(self, capsys):
        _, out, _ = run_cli(capsys, "ac", "--model", "gbs", "--m", "4", "--n", "2", "--d", "1")
        doc = json.loads(out)["result"]
        assert Fraction(doc["single_source_closed_form"]) == Fraction(doc["ac_exact"])

    def test_library_equivalence(self, capsys):
        # CLI output equals the library call bit for bit
        _, out, _ = run_cli(capsys, "ac", "--model", "bs", "--m", "5", "--n", "3")
        doc = json.loads(out)["result"]
        assert doc["ac_exact"] == str(refval.ac_bs(5, 3))
        assert doc["ac_score"] == float(refval.ac_bs(5, 3))


class TestEstimate:
    def test_deterministic_bytes(self, capsys):
        args = ("estimate", "--m", "4", "--n", "2", "--trials", "3", "--samples", "40", "--seed", "9")
        code1, out1, _ = run_cli(capsys, *args)
        code2, out2, _ = run_cli(capsys, *args)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_config_embedded(self, capsys):
        _, out, _ = run_cli(
            capsys, "estimate", "--m", "4", "--n", "2", "--trials", "2", "--samples", "10"
        )
        doc = json.loads(out)
        assert doc["config"]["seed"] == 0
        assert doc["config"]["trials"] == 2
        assert doc["result"]["samples_per_trial"] == 10

    def test_uniform_null_route(self, capsys):
        code, out, _ = run_cli(
            capsys, "estimate", "--m", "4", "--n", "2", "--trials", "4",
            "--samples", "100", "--null", "uniform", "--seed", "5",
        )
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["null_model"] == "uniform"
        assert abs(doc["result"]["fidelity_mean"]) < 0.2

    def test_guard_exit_3(self, capsys):
        code, _, err = run_cli(
            capsys, "estimate", "--m", "20", "--n", "15", "--trials", "2", "--samples", "5"
        )
        assert code == 3 and "guard" in err


class TestOracle:
    def test_default_passes(self, capsys):
        code, out, err = run_cli(capsys, "oracle", "--m", "2", "--n", "2")
        assert code == 0
        doc = json.loads(out)
        assert doc["result"]["all_passed"] is True
        names = {c["name"] for c in doc["result"]["checks"]}
        assert "projector-laws" in names and "swap-oracle-equivalence" in names
        assert "[pass]" in err

    def test_inject_fault_exit_4(self, capsys):
        code, out, err = run_cli(capsys, "oracle", "--m", "2", "--n", "2", "--inject-fault")
        assert code == 4
        doc = json.loads(out)
        failing = [c for c in doc["result"]["checks"] if not c["passed"]]
        assert [c["name"] for c in failing] == ["coefficient-row-sums"]
        assert "[FAIL] coefficient-row-sums" in err


class TestScan:
    def test_bs_point_golden(self, capsys):
        code, out, _ = run_cli(
            capsys, "scan", "--model", "bs", "--ratio", "2", "--n-min", "2", "--n-max", "2"
        )
        assert code == 0
        assert out == (GOLDEN / "scan_bs_point.csv").read_text()

    def test_single_point_matches_ref(self, capsys):
        _, out, _ = run_cli(
            capsys, "scan", "--model", "bs", "--ratio", "2", "--n-min", "3", "--n-max", "3"
        )
        row = out.splitlines()[1].split(",")
        value = float(row[4])
        assert value == pytest.approx(
            refval.lxe_ref_bs(6, 3, exact=False).value_float, rel=1e-15
        )

    def test_lossy_fidelity_decreasing(self, capsys):
        code, out, _ = run_cli(
            capsys, "scan", "--model", "gbs-lossy", "--eta", "0.9,0.75,0.6",
            "--m-min", "2", "--m-max", "5",
        )
        assert code == 0
        lines = out.strip().splitlines()
        header = lines[0].split(",")
        fid_idx, m_idx, eta_idx = (
            header.index("fidelity"), header.index("m"), header.index("eta")
        )
        per_m = {}
        for line in lines[1:]:
            cells = line.split(",")
            per_m.setdefault(int(cells[m_idx]), []).append(
                (float(cells[eta_idx]), float(cells[fid_idx]))
            )
        for m, rows in per_m.items():
            rows.sort(reverse=True)  # decreasing eta == increasing loss
            fids = [f for _, f in rows]
            assert all(a > b for a, b in zip(fids, fids[1:])), (m, fids)

    def test_plot_file_written(self, capsys, tmp_path):
        target = tmp_path / "sweep.png"
        code, out, err = run_cli(
            capsys, "scan", "--model", "bs", "--ratio", "2,3", "--n-min", "2",
            "--n-max", "4", "--plot", str(target),
        )
        assert code == 0
        assert target.exists() and target.stat().st_size > 0
        assert "figure written" in err
        assert out.startswith("model,m,n,ratio")

    def test_lossy_plot(self, capsys, tmp_path):
        target = tmp_path / "lossy.png"
        code, _, _ = run_cli(
            capsys, "scan", "--model", "gbs-lossy", "--eta", "0.9,0.6",
            "--m-min", "2", "--m-max", "3", "--plot", str(target),
        )
        assert code == 0 and target.exists()

    def test_line_endings(self, capsys):
        _, out, _ = run_cli(
            capsys, "scan", "--model", "bs", "--ratio", "2", "--n-min", "2", "--n-max", "3"
        )
        assert "\r" not in out


class TestEntropy:
    def test_pattern_log2(self, capsys):
        code, out, _ = run_cli(capsys, "entropy", "--pattern", "1,1", "--q", "1")
        assert code == 0
        doc = json.loads(out)["result"]
        assert doc["purity_exact"] == "1/2"
        assert doc["renyi2_entropy"] == pytest.approx(math.log(2))

    def test_uniform_average_golden(self, capsys):
        code, out, _ = run_cli(capsys, "entropy", "--m", "2", "--n", "2", "--q", "1")
        assert code == 0
        assert out == (GOLDEN / "entropy_uniform_2_2_1.json").read_text()
        doc = json.loads(out)["result"]
        assert doc["avg_purity_exact"] == "5/6"

    def test_jensen_direction(self, capsys):
        # bound <= enumerated mean entropy at (3, 3, 1)
        from lxebkit import schur

        _, out, _ = run_cli(capsys, "entropy", "--m", "3", "--n", "3", "--q", "1")
        bound = json.loads(out)["result"]["entropy_lower_bound"]
        pats = schur.patterns(3, 3)
        mean = sum(-math.log(schur.trace_S_fock(p, 1)) for p in pats) / len(pats)
        assert bound <= mean + 1e-12

    def test_q_range_exit_2(self, capsys):
        code, _, _ = run_cli(capsys, "entropy", "--pattern", "1,1", "--q", "5")
        assert code == 2


class TestHj:
    def test_csv_golden(self, capsys):
        code, out, _ = run_cli(capsys, "hj", "--n-max", "3", "--format", "csv")
        assert code == 0
        assert out == (GOLDEN / "hj_3.csv").read_text()

    def test_values(self, capsys):
        _, out, _ = run_cli(capsys, "hj", "--n-list", "1,2")
        rows = json.loads(out)["result"]["rows"]
        assert rows[0]["ratio_exact"] == "1"
        assert rows[1]["ratio_exact"] == "9/5"

    def test_gap_column_shrinks(self, capsys):
        _, out, _ = run_cli(capsys, "hj", "--n-list", "10,40")
        rows = json.loads(out)["result"]["rows"]
        assert rows[1]["gap_to_limit"] < rows[0]["gap_to_limit"]


class TestParser:
    def test_unknown_subcommand_exit_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            cli.main(["frobnicate"])
        assert exc.value.code == 2

    def test_console_entry_configured(self):
        pyproject = (Path(__file__).parents[1] / "pyproject.toml").read_text()
        assert 'lxebkit = "lxebkit.cli:main"' in pyproject
