import json
import math

import pytest

from kuramoto_spectral import piecewise_constant
from kuramoto_spectral.cli import main, run_verify


def run(argv):
    return main(argv)


class TestConfig:
    def test_minimal_flags_apply_defaults(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        assert run(["transition", "--density", "gaussian", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["density"]["kind"] == "gaussian"
        assert data["K_c"] == pytest.approx(2 * math.sqrt(2 / math.pi), abs=1e-6)

    def test_malformed_density_kind(self, capsys):
        assert run(["transition", "--density", "nonsense"]) == 2
        assert "config error" in capsys.readouterr().err

    def test_config_file_resolution_in_metadata(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text('density = { kind = "lorentzian", params = [1.0] }\nresolution = 1024\n')
        out = tmp_path / "eta.csv"
        assert run(["eta", "--config", str(cfg), "--k", "1.0", "--t-max", "1.0",
                    "--samples", "3", "--method", "predict", "--out", str(out)]) == 0
        header = out.read_text().splitlines()
        assert header[2] == '# density={"kind": "lorentzian", "params": [1.0]}'
        # a different resolution must change the config hash
        cfg2 = tmp_path / "run2.toml"
        cfg2.write_text('density = { kind = "lorentzian", params = [1.0] }\nresolution = 256\n')
        out2 = tmp_path / "eta2.csv"
        run(["eta", "--config", str(cfg2), "--k", "1.0", "--t-max", "1.0",
             "--samples", "3", "--method", "predict", "--out", str(out2)])
        h1 = out.read_text().splitlines()[1]
        h2 = out2.read_text().splitlines()[1]
        assert h1 != h2

    def test_unknown_config_key_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "bad.toml"
        cfg.write_text("unknown_knob = 3\n")
        assert run(["transition", "--config", str(cfg)]) == 2
        assert "unknown" in capsys.readouterr().err

    def test_flags_override_config(self, tmp_path):
        cfg = tmp_path / "run.toml"
        cfg.write_text('density = { kind = "lorentzian" }\n')
        out = tmp_path / "t.json"
        assert run(["transition", "--config", str(cfg), "--density", "gaussian", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["density"]["kind"] == "gaussian"

    def test_density_params_flag(self, tmp_path):
        out = tmp_path / "t.json"
        assert run(["transition", "--density", "lorentzian", "--density-params", "[2.0]", "--out", str(out)]) == 0
        assert json.loads(out.read_text())["K_c"] == pytest.approx(4.0, abs=1e-9)


class TestSubcommands:
    def test_poles_csv_columns(self, tmp_path):
        out = tmp_path / "poles.csv"
        assert run(["poles", "--density", "lorentzian", "--k", "1.0",
                    "--window=-0.9,-0.01,-1,1", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[3] == "re_lambda,im_lambda,kind,multiplicity,re_D,im_D,residual"
        fields = lines[4].split(",")
        assert float(fields[0]) == pytest.approx(-0.5, abs=1e-10)
        assert fields[2] == "resonance_pole"

    def test_eta_both_sources(self, tmp_path):
        out = tmp_path / "eta.csv"
        assert run(["eta", "--density", "lorentzian", "--k", "1.0", "--t-max", "2.0",
                    "--samples", "5", "--method", "both", "--out", str(out)]) == 0
        body = [l for l in out.read_text().splitlines() if not l.startswith("#")][1:]
        sources = {l.split(",")[3] for l in body}
        assert sources == {"residue_prediction", "direct_integration"}

    def test_simulate_galerkin(self, tmp_path):
        out = tmp_path / "traj.csv"
        assert run(["simulate", "--density", "gaussian", "--backend", "galerkin", "--k", "1.0",
                    "--t-max", "5.0", "--modes", "8", "--nodes", "361", "--out", str(out)]) == 0
        body = [l for l in out.read_text().splitlines() if not l.startswith("#")][1:]
        assert len(body) == 21
        assert body[0].split(",")[3] == "galerkin"

    def test_simulate_finite_n_deterministic(self, tmp_path):
        args = ["simulate", "--density", "gaussian", "--backend", "finite-n", "--k", "1.0",
                "--t-max", "2.0", "--n", "200", "--seed", "7"]
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(args + ["--out", str(out1)]) == 0
        assert run(args + ["--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_eval_F(self, tmp_path):
        out = tmp_path / "f.json"
        assert run(["eval-F", "--density", "lorentzian", "--lambda=-0.5,0", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["F"]["re"] == pytest.approx(2.0, abs=1e-12)
        assert data["sheet"] == "second"

    def test_bifurcate_csv(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert run(["bifurcate", "--density", "lorentzian", "--k-min", "2.3", "--k-max", "2.5",
                    "--k-steps", "2", "--backend", "galerkin", "--t-max", "60", "--out", str(out)]) == 0
        lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
        assert lines[0] == "K,r_theory,r_sim,sim_stderr,converged"
        assert len(lines) == 3

    def test_numerical_failure_exit_code(self, capsys):
        # second-sheet evaluation for a piecewise density is a numerical-domain error
        assert run(["eval-F", "--density", "two_step", "--lambda=-0.5,0"]) == 3
        assert "numerical failure" in capsys.readouterr().err


class TestVerify:
    def test_fresh_checkout_passes(self, tmp_path, capsys):
        out = tmp_path / "verify.json"
        code = run_verify(out_path=str(out))
        assert code == 0
        data = json.loads(out.read_text())
        assert data["n_checks"] >= 20
        assert data["n_failed"] == 0
        assert data["K_c_gaussian"] == pytest.approx(1.5957691216057308, abs=1e-9)

    def test_perturbed_fixture_fails(self, capsys):
        # 1% taller first plateau shifts the two-step transition coupling
        bad = piecewise_constant([(-1.0, -0.5, 1.01), (0.25, 1.25, 0.5)])
        code = run_verify(overrides={"two_step": bad})
        assert code == 1
        assert "FAIL" in capsys.readouterr().out
