import io
import json
import subprocess
import sys

import pytest
from conftest import THRESHOLDS_16

from relbounds.cli import main
from relbounds.io import dump_config, load_config


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def write_config(path, **kw):
    cfg = dict(scenario=THRESHOLDS_16, statistic="one_sided_true_minus_emp",
               epsilon_grid=[0.1, 0.3], m=100, trials=100, tau=0.01, master_seed=1)
    cfg.update(kw)
    path.write_text(json.dumps(cfg))
    return path


class TestBound:
    def test_cor7(self):
        code, out, _ = run("bound", "--id", "cor7", "--m", "1000", "--epsilon", "0.1", "--shatter", "8")
        assert code == 0
        doc = json.loads(out)
        assert doc["rhs"] == pytest.approx(4.443e-10, rel=1e-3)
        assert doc["vacuous"] is False

    def test_psi_domain_error(self):
        code, out, err = run("bound", "--id", "psi", "--alpha", "2")
        assert code == 1 and out == ""
        doc = json.loads(err)
        assert doc["error"] == "DomainError"
        assert "alpha must exceed 2" in doc["message"]

    def test_unknown_id(self):
        code, _, err = run("bound", "--id", "thm99")
        assert code == 1 and "unknown bound identifier" in err

    def test_usage_errors(self, capsys):
        assert run("bound")[0] == 2
        assert run("bound", "--id", "cor7", "--m", "many")[0] == 2
        assert run("nonsense")[0] == 2
        assert run()[0] == 2


class TestScan:
    def test_csv(self):
        code, out, _ = run("binomial-scan", "--m-max", "14", "--resolution", "0.001")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "m,p,tail_probability"
        assert all(float(r.split(",")[2]) > 0.25 for r in lines[1:])
        assert len(lines) > 1000

    def test_json_leq(self):
        code, out, _ = run("binomial-scan", "--which", "leq_mean", "--m-max", "10", "--format", "json")
        assert code == 0
        doc = json.loads(out)
        assert doc["all_above_quarter"] is True

    def test_bad_resolution(self):
        assert run("binomial-scan", "--resolution", "0.3")[0] == 1


class TestCapacity:
    def test_ops(self, tmp_path):
        table = tmp_path / "t.csv"
        table.write_text("1,1,1,1\n0,1,1,1\n0,0,1,1\n0,0,0,1\n0,0,0,0\n")
        assert json.loads(run("capacity", "--table", str(table), "--op", "vc")[1])["value"] == 1
        assert json.loads(run("capacity", "--table", str(table), "--op", "growth", "--m", "2")[1])["value"] == 3
        assert json.loads(run("capacity", "--table", str(table), "--op", "shatter",
                              "--sample", "0,2,3")[1])["value"] == 4
        losses = tmp_path / "l.csv"
        losses.write_text("0,0\n0,2\n2,0\n2,2\n")
        assert json.loads(run("capacity", "--table", str(losses), "--op", "pdim")[1])["value"] == 2

    def test_budget_error(self, tmp_path):
        table = tmp_path / "t.csv"
        table.write_text("0,1,0,1,1\n1,1,0,0,1\n")
        code, _, err = run("capacity", "--table", str(table), "--op", "growth", "--m", "3",
                           "--max-domain", "4")
        assert code == 1 and json.loads(err)["error"] == "BudgetError"

    def test_missing_arguments(self, tmp_path):
        table = tmp_path / "t.csv"
        table.write_text("0,1\n")
        assert run("capacity", "--table", str(table), "--op", "growth")[0] == 1
        assert run("capacity", "--table", str(table), "--op", "shatter")[0] == 1


class TestAnalytic:
    def test_approx_point(self):
        code, out, _ = run("analytic", "--op", "approx", "--epsilon", "0.99", "--beta", "0.76")
        assert code == 0 and json.loads(out)["holds"] is False

    def test_approx_grid_csv(self):
        code, out, _ = run("analytic", "--op", "approx", "--format", "csv")
        assert code == 0 and out.startswith("epsilon,lhs,rhs\n")

    def test_moment_and_sqrt_tail(self):
        code, out, _ = run("analytic", "--op", "moment", "--pareto-shape", "3", "--alpha", "2")
        doc = json.loads(out)
        assert doc["quadrature"] == pytest.approx(doc["closed_form"], rel=1e-8)
        code, out, _ = run("analytic", "--op", "sqrt-tail", "--pareto-shape", "5", "--alpha", "4")
        assert json.loads(out)["holds"] is True

    def test_monotonicity(self):
        code, out, _ = run("analytic", "--op", "monotonicity", "--alpha", "1.5", "--eta", "1",
                           "--samples", "1000")
        assert json.loads(out)["violations"] == 0

    def test_missing(self):
        assert run("analytic", "--op", "f", "--alpha", "2")[0] == 1

    def test_infinite_moment(self):
        code, _, err = run("analytic", "--op", "moment", "--pareto-shape", "2", "--alpha", "2")
        assert code == 1 and "moment of order alpha is infinite" in err


class TestExperiment:
    def test_json_and_records(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        code, out, _ = run("experiment", "--config", str(cfg), "--records", str(tmp_path / "r.jsonl"))
        assert code == 0
        doc = json.loads(out)
        assert [r["verdict"] for r in doc["rows"]] in (["vacuous", "pass"], ["vacuous", "vacuous"])
        assert len((tmp_path / "r.jsonl").read_text().splitlines()) == 100

    def test_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path / "c.json")
        run("experiment", "--config", str(cfg), "--format", "csv", "--output", str(tmp_path / "a.csv"))
        run("experiment", "--config", str(cfg), "--format", "csv", "--output", str(tmp_path / "b.csv"))
        a, b = (tmp_path / "a.csv").read_bytes(), (tmp_path / "b.csv").read_bytes()
        assert a == b
        assert a.decode().splitlines()[0] == "epsilon,frequency,ci_upper,rhs,verdict"

    def test_single_row_csv(self, tmp_path):
        cfg = write_config(tmp_path / "c.json", epsilon_grid=[0.2])
        code, out, _ = run("experiment", "--config", str(cfg), "--format", "csv")
        assert len(out.splitlines()) == 2

    def test_output_dir_env(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path / "c.json")
        monkeypatch.setenv("RELBOUNDS_OUTPUT_DIR", str(tmp_path / "out"))
        assert run("experiment", "--config", str(cfg), "--output", "rep.json")[0] == 0
        assert (tmp_path / "out" / "rep.json").exists()

    @pytest.mark.parametrize("kw,match", [
        (dict(trials=10), "trials >= 100"),
        (dict(scenario={"kind": "unbounded_loss", "model": "pareto", "shape": 2.0}, alpha=2.0),
         "moment of order alpha is infinite"),
        (dict(colour="red"), "unknown config keys"),
    ])
    def test_invalid_config(self, tmp_path, kw, match):
        cfg = write_config(tmp_path / "c.json", **kw)
        code, _, err = run("experiment", "--config", str(cfg))
        assert code == 1 and match in json.loads(err)["message"]

    def test_malformed(self, tmp_path):
        bad = tmp_path / "c.json"
        bad.write_text("{not json")
        assert run("experiment", "--config", str(bad))[0] == 1
        assert run("experiment", "--config", str(tmp_path / "missing.json"))[0] == 1

    def test_fail_verdict_exits_nonzero(self, tmp_path, monkeypatch):
        import relbounds.montecarlo as mc

        cfg = write_config(tmp_path / "c.json", epsilon_grid=[0.05])
        monkeypatch.setattr(mc, "theorem_rhs", lambda *a: mc.bounds.Bound(1e-9, -20.0, False))
        code, out, err = run("experiment", "--config", str(cfg))
        assert code == 1
        assert json.loads(out)["rows"][0]["verdict"] == "fail"
        assert "verification failed" in err

    def test_config_round_trip(self, tmp_path):
        path = write_config(tmp_path / "c.json")
        original = json.loads(path.read_text())
        assert json.loads(dump_config(load_config(path))) == {
            **original, "alpha": 2.0, "confidence": 0.99}


class TestFigures:
    def test_writes_files(self, tmp_path):
        code, out, _ = run("figures", "--output-dir", str(tmp_path))
        assert code == 0
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == ["approximation.csv", "binomial_tail_geq_mean.csv", "binomial_tail_geq_mean_k2.csv"]
        assert json.loads(out)["all_above_quarter"] is True
        assert (tmp_path / "approximation.csv").read_text().startswith("epsilon,lhs,rhs")


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "relbounds", "bound", "--id", "kappa", "--tau", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["kappa"] == 1.5
