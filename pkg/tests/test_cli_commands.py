import json
from unittest.mock import patch

import pytest
from click.testing import CliRunner

from src.egorovga.cli.commands import kernel as kernel_group
from src.egorovga.cli.commands import run_scenario, show_config, show_env_vars, verify
from src.egorovga.cli.main import app
from src.egorovga.core.models import CheckResult, RunReport, RunSummary
from src.egorovga.utils.serialization import save_kernel


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def kernel_file(tmp_path, kernel):
    path = tmp_path / "kernel.json"
    save_kernel(kernel, path)
    return path


class TestKernelBuildCommand:
    def test_build_writes_artifact(self, runner, tmp_path):
        """Given m=1, When kernel build runs, Then the artifact is written and the exit code is 0."""
        out = tmp_path / "k1.json"

        result = runner.invoke(kernel_group, ["build", "--m", "1", "--out", str(out)])

        assert result.exit_code == 0
        assert "Kernel m=1 (q=3)" in result.output
        assert json.loads(out.read_text())["m"] == 1

    def test_build_rejects_ill_conditioned_m(self, runner, tmp_path):
        """Given m above the supported maximum, When kernel build runs, Then it exits with the configuration error code."""
        result = runner.invoke(kernel_group, ["build", "--m", "9", "--out", str(tmp_path / "k9.json")])

        assert result.exit_code == 2
        assert not (tmp_path / "k9.json").exists()


class TestRunCommand:
    def test_missing_scenario(self, runner, tmp_path):
        """Given a scenario path that does not exist, When run, Then the exit code is 2."""
        result = runner.invoke(run_scenario, [str(tmp_path / "absent.toml")])
        assert result.exit_code == 2

    def test_missing_kernel_file(self, runner, tmp_path):
        """Given a scenario naming a missing kernel artifact, When run, Then the exit code is 2."""
        scenario = tmp_path / "desk.toml"
        scenario.write_text('checks = ["scalars"]\n[kernel]\nfile = "nowhere.json"\n')

        result = runner.invoke(run_scenario, [str(scenario)])

        assert result.exit_code == 2

    def test_passing_scenario_writes_artifacts(self, runner, tmp_path, kernel_file):
        """Given a scalar-only scenario with a prebuilt kernel, When run with --out, Then it passes and writes artifacts."""
        scenario = tmp_path / "desk.toml"
        scenario.write_text(f'name = "desk"\nchecks = ["scalars"]\n[kernel]\nfile = "{kernel_file.name}"\n')
        out = tmp_path / "artifacts"

        result = runner.invoke(run_scenario, [str(scenario), "--out", str(out)])

        assert result.exit_code == 0, result.output
        verdicts = json.loads((out / "verdicts.json").read_text())
        assert verdicts["scenario"] == "desk"
        assert verdicts["summary"]["all_passed"] is True
        assert (out / "summary.md").read_text().startswith("# desk")


    def test_repeated_runs_write_identical_artifacts(self, runner, tmp_path, kernel_file):
        """Given one seeded scenario, When it is run twice, Then the JSON and CSV artifacts are byte-identical."""
        scenario = tmp_path / "desk.toml"
        scenario.write_text(
            f'name = "desk"\nmode = "fast"\nseed = 11\nchecks = ["scalars", "cutoff"]\n[kernel]\nfile = "{kernel_file.name}"\n'
        )

        for target in ("first", "second"):
            result = runner.invoke(run_scenario, [str(scenario), "--out", str(tmp_path / target)])
            assert result.exit_code == 0, result.output

        for artifact in ("verdicts.json", "fits.json", "sweeps.csv"):
            assert (tmp_path / "first" / artifact).read_bytes() == (tmp_path / "second" / artifact).read_bytes()


class TestVerifyCommand:
    def test_invalid_rho_min(self, runner):
        """Given a rho-min that is not a power of two, When verify runs, Then the exit code is 2."""
        result = runner.invoke(verify, ["scalars", "--rho-min", "0.3"])
        assert result.exit_code == 2
        assert "--rho-min" in result.output

    def test_unknown_check_name(self, runner):
        result = runner.invoke(verify, ["telepathy"])
        assert result.exit_code == 2

    def test_failing_check_exits_with_one(self, runner):
        """Given a run whose check fails, When verify finishes, Then the exit code is 1."""
        failing = RunReport(
            scenario="verify-polynomials",
            summary=RunSummary(total_checks=1, passed_checks=0, failed_checks=1),
            results=[CheckResult("polynomials", "polynomials/reproduction", False, 1e-3, issues=["x^3 drifts"])],
        )
        with patch("src.egorovga.runners.ScenarioRunner") as runner_class:
            runner_class.return_value.run.return_value = failing

            result = runner.invoke(verify, ["polynomials", "--m", "2", "--rho-min", "2^-12", "--seed", "3"])

        assert result.exit_code == 1
        scenario = runner_class.call_args.args[0]
        assert scenario.checks == ["polynomials"]
        assert scenario.config.kernel.m == 2
        assert scenario.config.grid.rho_exponent_max == 12
        assert scenario.config.sampling.seed == 3
        assert "x^3 drifts" in result.output


class TestShowConfigCommand:
    def test_without_mode_lists_modes(self, runner):
        result = runner.invoke(show_config, [])
        assert result.exit_code == 0
        assert "Available modes: default, fast, strict, custom" in result.output

    def test_fast_mode(self, runner):
        """Given the fast mode, When shown, Then the configuration dataclass is printed."""
        result = runner.invoke(show_config, ["fast"])
        assert result.exit_code == 0
        assert "EgorovConfig" in result.output
        assert "rho_exponent_max=12" in result.output

    def test_invalid_mode(self, runner):
        result = runner.invoke(show_config, ["turbo"])
        assert "Invalid mode: turbo" in result.output


class TestShowEnvVarsCommand:
    def test_lists_prefixed_variables(self, runner):
        result = runner.invoke(show_env_vars, [])
        assert result.exit_code == 0
        assert "EGOROV_GA_KERNEL_M=2" in result.output
        assert "EGOROV_GA_THREADS=4" in result.output


class TestApp:
    def test_commands_are_registered(self, runner):
        result = runner.invoke(app, ["--help"])
        assert result.exit_code == 0
        for command in ("kernel", "run", "verify", "show-config", "show-env-vars"):
            assert command in result.output
