"""Command-line pipeline: exit codes, reports, idempotence."""

import json
from fractions import Fraction

import numpy as np
import pytest

import lqhv as L
from lqhv import io
from lqhv.cli import main


@pytest.fixture()
def pr_file(tmp_path):
    path = tmp_path / "pr.json"
    io.save_family(L.pr_box(), str(path))
    return str(path)


@pytest.fixture()
def signaling_file(tmp_path):
    path = tmp_path / "signal.json"
    io.save_family(L.signaling_example(), str(path))
    return str(path)


class TestCheck:
    def test_pass_exits_zero(self, pr_file, capsys):
        assert main(["check", pr_file]) == 0
        assert "pass" in capsys.readouterr().out

    def test_signaling_exits_two_with_witness(self, signaling_file, capsys):
        assert main(["check", signaling_file]) == 2
        out = capsys.readouterr().out
        assert "FAIL" in out
        assert "(2,)" in out

    def test_truncated_json_exits_one(self, tmp_path, capsys):
        path = tmp_path / "trunc.json"
        path.write_text('{"parties": [{"settings": 2')
        assert main(["check", str(path)]) == 1
        assert "input error" in capsys.readouterr().err

    def test_missing_file_exits_one(self, capsys):
        assert main(["check", "/no/such/file.json"]) == 1

    def test_json_report(self, pr_file, capsys):
        assert main(["check", pr_file, "--json"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["consistency"]["passed"] is True
        assert len(report["digest"]) == 64
        assert "check" in report["timings"]


class TestBuild:
    def test_pr_box_report(self, pr_file, tmp_path, capsys):
        out_path = tmp_path / "measure.json"
        assert main(["build", pr_file, "-o", str(out_path)]) == 0
        out = capsys.readouterr().out
        assert "min atom: -1/16" in out
        assert "total variation: 2" in out
        assert "max marginal error: 0" in out
        measure = io.load_measure(str(out_path))
        assert measure.min_atom == Fraction(-1, 16)

    def test_signaling_exits_two_without_output(self, signaling_file, tmp_path, capsys):
        out_path = tmp_path / "never.json"
        assert main(["build", signaling_file, "-o", str(out_path)]) == 2
        assert not out_path.exists()
        assert "precondition failed" in capsys.readouterr().err

    def test_budget_exits_three(self, pr_file, tmp_path, capsys):
        out_path = tmp_path / "m.json"
        assert main(["build", pr_file, "-o", str(out_path), "--budget", "4"]) == 3
        assert not out_path.exists()
        assert "resource limit" in capsys.readouterr().err

    def test_uniform_family_all_atoms_equal(self, tmp_path, capsys):
        fam_path = tmp_path / "uniform.json"
        io.save_family(L.uniform_family(L.CHSH_SCENARIO), str(fam_path))
        out_path = tmp_path / "m.json"
        assert main(["build", str(fam_path), "-o", str(out_path)]) == 0
        measure = io.load_measure(str(out_path))
        assert set(measure.atoms.reshape(-1)) == {Fraction(1, 16)}

    def test_mode_flag_converts(self, pr_file, tmp_path):
        out_path = tmp_path / "float.json"
        assert main(["build", pr_file, "-o", str(out_path), "--mode", "float"]) == 0
        measure = io.load_measure(str(out_path))
        assert measure.mode == L.FLOAT
        assert measure.min_atom == pytest.approx(-1 / 16)

    def test_export_import_reverify_idempotent(self, pr_file, tmp_path, capsys):
        # one pipeline pass, then reload the export and rebuild: the
        # reports and the files must agree bit for bit in rational mode
        out_a = tmp_path / "a.json"
        out_b = tmp_path / "b.json"
        assert main(["build", pr_file, "-o", str(out_a), "--json"]) == 0
        report_a = json.loads(capsys.readouterr().out)
        assert main(["build", pr_file, "-o", str(out_b), "--json"]) == 0
        report_b = json.loads(capsys.readouterr().out)
        for key in ("construction", "verification", "consistency", "digest"):
            assert report_a[key] == report_b[key]
        assert out_a.read_text() == out_b.read_text()
        # independent re-verification of the exported measure
        measure = io.load_measure(str(out_a))
        family = io.load_family(pr_file)
        assert L.verify_marginals(measure, family).max_error == 0


class TestQuantum:
    def test_chsh_pipeline(self, tmp_path, capsys):
        q_path = tmp_path / "singlet.json"
        io.save_quantum(L.chsh_optimal_scenario(), str(q_path))
        fam_path = tmp_path / "family.json"
        assert main(["quantum", str(q_path), "-o", str(fam_path)]) == 0
        fam = io.load_family(str(fam_path))
        assert L.chsh_value(fam) == pytest.approx(2 * np.sqrt(2), abs=1e-9)

    def test_malformed_quantum_file(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"rho": []}')
        assert main(["quantum", str(path), "-o", str(tmp_path / "f.json")]) == 1
        assert "input error" in capsys.readouterr().err


class TestLhv:
    def test_pr_infeasible(self, pr_file, tmp_path, capsys):
        verdict_path = tmp_path / "verdict.json"
        assert main(["lhv", pr_file, "-o", str(verdict_path)]) == 0
        assert "infeasible" in capsys.readouterr().out
        data = json.loads(verdict_path.read_text())
        assert data["feasible"] is False
        assert data["certificate"] is not None

    def test_product_feasible(self, tmp_path, capsys):
        fam_path = tmp_path / "uniform.json"
        io.save_family(L.uniform_family(L.CHSH_SCENARIO), str(fam_path))
        assert main(["lhv", str(fam_path)]) == 0
        assert "verdict: feasible" in capsys.readouterr().out

    def test_signaling_exits_two(self, signaling_file):
        assert main(["lhv", signaling_file]) == 2


class TestExpect:
    def test_constant_observables(self, pr_file, capsys):
        code = main(["expect", pr_file, "--tuple", "1,1",
                     "--observables", '[["1","1"],["1","1"]]'])
        assert code == 0
        assert "expectation at 1,1: 1" in capsys.readouterr().out

    def test_pr_correlator_with_model(self, pr_file, capsys):
        code = main(["expect", pr_file, "--tuple", "2,2",
                     "--observables", '[["1","-1"],["1","-1"]]', "--compare-model"])
        assert code == 0
        out = capsys.readouterr().out
        assert "expectation at 2,2: -1" in out
        assert "measure-side value: -1" in out

    def test_bad_observables_exit_one(self, pr_file):
        assert main(["expect", pr_file, "--tuple", "1,1", "--observables", "[[1,"]) == 1


class TestRandom:
    def test_seeded_family_is_reproducible(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        assert main(["random", "--seed", "7", "-o", str(a)]) == 0
        assert main(["random", "--seed", "7", "-o", str(b)]) == 0
        assert a.read_text() == b.read_text()
        fam = io.load_family(str(a))
        assert L.check_nonsignaling(fam) is None

    def test_explicit_weights(self, tmp_path):
        out = tmp_path / "w.json"
        weights = ",".join(["0"] * 16 + ["1"] + ["0"] * 7)
        assert main(["random", "--seed", "0", "--weights", weights, "-o", str(out)]) == 0
        fam = io.load_family(str(out))
        assert L.chsh_value(fam) == 4


class TestUsage:
    def test_no_command_exits_one(self, capsys):
        assert main([]) == 1

    def test_unknown_command_exits_one(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 1
