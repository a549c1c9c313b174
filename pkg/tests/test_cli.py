import json
import os

import numpy
import pytest

from click.testing import CliRunner

from levyhg.cli import GRID, format_rows, main, run
from levyhg.params import HGParams

HG_ARGS = ["--beta", "0.5", "--gamma", "0.5", "--betah", "0.5", "--gammah", "0.5"]
EHG_ARGS = ["--beta", "1.5", "--gamma", "0.75", "--betah=-0.25", "--gammah", "0.75"]


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


class Test_Grid:
    def test_range(self) -> None:
        numpy.testing.assert_allclose(
            GRID.convert("0:1:5", None, None), [0, 0.25, 0.5, 0.75, 1]
        )

    def test_list(self) -> None:
        numpy.testing.assert_allclose(
            GRID.convert("0.5,-2,3", None, None), [0.5, -2, 3]
        )


def test_format_rows() -> None:
    rows = [{"x": 0.1, "n": 3, "tag": "a"}]
    assert format_rows(rows, "csv") == "x,n,tag\n0.10000000000000001,3,a\n"
    assert json.loads(format_rows(rows, "json")) == rows
    assert format_rows([], "csv") == ""


def test_classify(runner) -> None:
    result = runner.invoke(main, ["classify"] + EHG_ARGS)
    assert result.exit_code == 0, result.output
    summary = json.loads(result.output)
    p = HGParams(1.5, 0.75, -0.25, 0.75)
    assert summary["classes"] == ["EHG"]
    assert summary["regime"] == p.regime
    assert summary["params"] == p.to_dict()


def test_inadmissible_parameters(runner) -> None:
    result = runner.invoke(
        main,
        ["classify", "--beta", "3", "--gamma", "0.5"]
        + ["--betah", "0.5", "--gammah", "0.5"],
    )
    assert result.exit_code == 1
    assert "Error:" in result.output


def test_usage_error(runner) -> None:
    result = runner.invoke(main, ["classify", "--bogus", "1"])
    assert result.exit_code == 2


def test_missing_required(runner) -> None:
    assert runner.invoke(main, ["classify", "--beta", "0.5"]).exit_code == 2


def test_psi_json(runner) -> None:
    result = runner.invoke(
        main, ["psi"] + HG_ARGS + ["--theta-grid", "-1,0,1", "--format", "json"]
    )
    assert result.exit_code == 0, result.output
    rows = json.loads(result.output)
    assert [row["theta"] for row in rows] == [-1.0, 0.0, 1.0]
    assert set(rows[0].keys()) == {"theta", "re_psi", "im_psi"}
    assert rows[0]["re_psi"] == pytest.approx(rows[2]["re_psi"])
    assert rows[0]["im_psi"] == pytest.approx(-rows[2]["im_psi"])


def test_whf(runner) -> None:
    result = runner.invoke(main, ["whf"] + HG_ARGS + ["--check-grid", "20"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "theta,residual"
    assert len(lines) == 21


def test_density(runner) -> None:
    args = ["--beta", "0.5", "--gamma", "0.5", "--betah", "0.5", "--gammah", "0.25"]
    result = runner.invoke(main, ["density"] + args + ["--x-grid", "0.5,-0.5"])
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[0] == "x,pi_closed,pi_series,rel_diff"
    assert len(lines) == 3


def test_density_default_grid(runner) -> None:
    args = ["--beta", "0.5", "--gamma", "0.5", "--betah", "0.5", "--gammah", "0.25"]
    result = runner.invoke(main, ["density"] + args + ["--format", "json"])
    assert result.exit_code == 0, result.output
    assert [row["x"] for row in json.loads(result.output)] == [
        0.05,
        0.5,
        5.0,
        -0.05,
        -0.5,
        -5.0,
    ]


def test_mellin_radial(runner) -> None:
    result = runner.invoke(
        main,
        ["mellin", "--kind", "radial", "--alpha", "1.5"]
        + ["--s-grid", "1", "--format", "json"],
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)[0]["re_m"] == 1.0


def test_mellin_radial_needs_alpha(runner) -> None:
    result = runner.invoke(main, ["mellin", "--kind", "radial", "--s-grid", "1"])
    assert result.exit_code == 2


def test_mellin_out_of_strip(runner) -> None:
    result = runner.invoke(main, ["mellin"] + HG_ARGS + ["--s-grid", "2"])
    assert result.exit_code == 1
    assert "Error:" in result.output


def test_stable_hit_prob(runner) -> None:
    result = runner.invoke(
        main, ["stable", "hit-prob", "--alpha", "1.5", "--x-grid", "0,0.5"]
    )
    assert result.exit_code == 0, result.output
    lines = result.output.splitlines()
    assert lines[:2] == ["x,probability", "0,1"]


def test_stable_hit_prob_needs_alpha_above_one(runner) -> None:
    result = runner.invoke(main, ["stable", "hit-prob", "--alpha", "0.8"])
    assert result.exit_code == 1


def test_stable_mellin_ckl(runner) -> None:
    result = runner.invoke(
        main,
        ["stable", "mellin", "--alpha", "1.3333333333333333", "--which", "ckl"]
        + ["--s-grid", "1"],
    )
    assert result.exit_code == 0, result.output
    assert result.output.splitlines()[1].startswith("1,1,")


def test_ckl_rho(runner) -> None:
    result = runner.invoke(
        main, ["ckl-rho", "--alpha", "1.3333333333333333", "--k", "1", "--l", "2"]
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["rho"] == pytest.approx(0.5, abs=1e-15)


def test_run_collects_artifacts(tmp_path) -> None:
    output = tmp_path / "psi.csv"
    result = run(["psi"] + HG_ARGS + ["--theta-grid", "0:1:3", "-o", str(output)])
    assert result["exit_code"] == 0
    assert result["artifacts"] == [str(output)]
    assert result["summary"]["class"] == "HG"
    assert output.read_text().splitlines()[0] == "theta,re_psi,im_psi"


def test_run_exit_codes() -> None:
    assert run(["classify", "--bogus"])["exit_code"] == 2
    assert run(["ckl-rho", "--alpha", "1.5", "--k", "0", "--l", "2"])["exit_code"] == 1


def test_slurm_script(tmp_path, monkeypatch) -> None:
    monkeypatch.delenv("LEVY_HG_SEED", raising=False)
    script = tmp_path / "job.sh"
    result = run(
        [
            "simulate",
            "--alpha",
            "1.5",
            "--n-paths",
            "10",
            "--threads",
            "4",
            "--job-name",
            "t0run",
            "--slurm-script",
            str(script),
        ]
    )
    assert result["exit_code"] == 0
    assert result["artifacts"] == [str(script)]
    text = script.read_text()
    assert "#SBATCH -p maxcpu" in text
    assert "#SBATCH --cpus-per-task=4" in text
    assert "#SBATCH --job-name t0run" in text
    assert 'FULLCOMMAND="srun levyhg simulate --mode t0 --alpha 1.5 ' in text
    assert "--horizon" not in text
    assert os.access(script, os.X_OK)
    assert result["summary"]["config"]["n_paths"] == 10


def test_seed_from_environment(tmp_path, monkeypatch) -> None:
    monkeypatch.setenv("LEVY_HG_SEED", "42")
    script = tmp_path / "job.sh"
    result = run(
        ["simulate", "--alpha", "1.5", "--seed", "1", "--slurm-script", str(script)]
    )
    assert result["summary"]["config"]["seed"] == 42
    assert "--seed 42" in script.read_text()

    monkeypatch.setenv("LEVY_HG_SEED", "not-a-number")
    result = run(["simulate", "--alpha", "1.5", "--slurm-script", str(script)])
    assert result["exit_code"] == 1


def test_simulate_degenerate_moment(monkeypatch) -> None:
    monkeypatch.delenv("LEVY_HG_SEED", raising=False)
    result = run(["simulate", "--alpha", "1.5", "--s", "1", "--n-paths", "5"])
    assert result["exit_code"] == 0
    assert result["summary"]["estimate"] == 1.0
    assert result["summary"]["n_effective"] == 5


def test_verify_command(tmp_path) -> None:
    report = tmp_path / "report.md"
    result = run(["verify", "--check", "radial_constant", "--report", str(report)])
    assert result["exit_code"] == 0
    assert result["summary"] == {
        "quick": False,
        "checks": ["radial_constant"],
        "failed": [],
    }
    assert "| radial_constant | PASS |" in report.read_text()
