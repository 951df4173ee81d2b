import json
import math

import pytest
from click.testing import CliRunner

from hsearch.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def err_text(result):
    try:
        return result.stderr
    except ValueError:
        return result.output


def csv_parts(text):
    """Split CSV output into (comment lines, header, data rows)."""
    comments, data = [], []
    for line in text.strip().splitlines():
        (comments if line.startswith("#") else data).append(line)
    return comments, data[0].split(","), [row.split(",") for row in data[1:]]


class TestReadout:
    def test_farhi_canonical(self, runner):
        result = runner.invoke(main, ["readout", "--preset", "farhi",
                                      "--overlap", "0.1"])
        assert result.exit_code == 0
        assert result.output == "T=15.707963267949 P=1.000000000000\n"

    def test_defaults_give_perfect_search(self, runner):
        result = runner.invoke(main, ["readout", "--overlap", "0.1"])
        assert result.exit_code == 0
        # defaults a=d=r=1, phi=0: q=1.1, D=sqrt(1.21-0)=1.1, T=pi/2.2
        assert f"T={math.pi / 2.2:.12f} P=1.000000000000" in result.output

    def test_missing_overlap_is_usage_error(self, runner):
        result = runner.invoke(main, ["readout"])
        assert result.exit_code == 2
        assert "overlap" in err_text(result)

    def test_overlap_out_of_range(self, runner):
        result = runner.invoke(main, ["readout", "--overlap", "1.5"])
        assert result.exit_code == 2

    def test_no_oscillation_exits_one(self, runner):
        result = runner.invoke(main, ["readout", "--overlap", "0.5",
                                      "--a", "0", "--d", "0", "--r", "0"])
        assert result.exit_code == 1
        assert "numerical failure" in err_text(result)


class TestSimulate:
    def test_trace_output(self, runner):
        result = runner.invoke(main, [
            "simulate", "--preset", "perfect", "--overlap", "0.25",
            "--t-max", "1.0", "--steps", "3"])
        assert result.exit_code == 0
        comments, header, rows = csv_parts(result.output)
        assert comments[0] == "# hsearch simulate"
        assert "# overlap = 0.25" in comments
        assert header == ["t", "P", "re_w", "im_w", "re_r", "im_r"]
        assert len(rows) == 3
        t0 = [float(v) for v in rows[0]]
        assert t0[0] == 0.0
        assert t0[1] == pytest.approx(0.0625)         # P(0) = x^2
        assert t0[2] == pytest.approx(0.25)           # amp_w(0) = x
        assert t0[4] == pytest.approx(math.sqrt(1 - 0.0625))

    def test_fenner_preset_derives_coupling(self, runner):
        result = runner.invoke(main, [
            "simulate", "--preset", "fenner", "--overlap", "0.1",
            "--t-max", "1.0", "--steps", "2"])
        assert result.exit_code == 0
        comments, _, _ = csv_parts(result.output)
        assert "# r = 0.2" in comments
        assert f"# phi = {math.pi / 2:.15g}" in comments

    def test_fenner_preset_needs_overlap(self, runner):
        # simulate requires an overlap anyway, so that check fires first
        result = runner.invoke(main, [
            "simulate", "--preset", "fenner", "--t-max", "1.0"])
        assert result.exit_code == 2
        assert "overlap" in err_text(result)
        # trials has no overlap flag at all, exposing the preset's own demand
        result = runner.invoke(main, [
            "trials", "--preset", "fenner", "--n", "8", "--targets", "1"])
        assert result.exit_code == 2
        assert "fenner" in err_text(result)

    def test_missing_t_max(self, runner):
        result = runner.invoke(main, ["simulate", "--overlap", "0.2"])
        assert result.exit_code == 2
        assert "t-max" in err_text(result)


class TestConfigPrecedence:
    def test_config_supplies_values(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# comment\nr = 0.5\noverlap = 0.1\n")
        result = runner.invoke(main, ["readout", "--config", str(cfg)])
        assert result.exit_code == 0
        # a=d=1, r=0.5, x=0.1: q=1.05, D=0.6, T=pi/1.2
        assert result.output == f"T={math.pi / 1.2:.12f} P=1.000000000000\n"

    def test_flag_beats_config(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("r = 0.5\noverlap = 0.1\n")
        result = runner.invoke(main, ["readout", "--config", str(cfg),
                                      "--r", "2"])
        # r=2: q=1.2, D=2.1, T=pi/4.2
        assert result.output == f"T={math.pi / 4.2:.12f} P=1.000000000000\n"

    def test_preset_beats_config(self, runner, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("r = 0.5\noverlap = 0.1\n")
        result = runner.invoke(main, ["readout", "--config", str(cfg),
                                      "--preset", "farhi"])
        assert result.output == "T=15.707963267949 P=1.000000000000\n"

    def test_malformed_config(self, runner, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("energy 2\n")
        result = runner.invoke(main, ["readout", "--config", str(cfg),
                                      "--overlap", "0.1"])
        assert result.exit_code == 2
        assert "key = value" in err_text(result)

    def test_unreadable_config_value(self, runner, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("energy = fast\noverlap = 0.1\n")
        result = runner.invoke(main, ["readout", "--config", str(cfg)])
        assert result.exit_code == 2


class TestSweepPhase:
    def test_endpoints_and_footer(self, runner):
        result = runner.invoke(main, [
            "sweep-phase", "--overlap", "0.1", "--points", "5"])
        assert result.exit_code == 0
        comments, header, rows = csv_parts(result.output)
        assert header == ["phi", "P", "T"]
        assert len(rows) == 5
        assert float(rows[0][1]) == pytest.approx(1.0, abs=1e-9)
        assert float(rows[2][1]) == pytest.approx(0.9901, abs=1e-9)
        assert float(rows[-1][1]) == pytest.approx(1.0, abs=1e-9)
        assert "# monotone_first_quadrant = true" in comments
        assert not any(c.startswith("# phi =") for c in comments)


class TestScaling:
    def test_farhi_fit(self, runner):
        result = runner.invoke(main, [
            "scaling", "--family", "farhi", "--n-list", "4,16,64,256"])
        assert result.exit_code == 0
        comments, header, rows = csv_parts(result.output)
        assert header == ["N", "x", "T"]
        assert len(rows) == 4
        slope_line = next(c for c in comments if c.startswith("# slope"))
        assert float(slope_line.split("=")[1]) == pytest.approx(0.5, abs=1e-9)

    def test_family_required(self, runner):
        result = runner.invoke(main, ["scaling"])
        assert result.exit_code == 2

    def test_bad_n_list(self, runner):
        result = runner.invoke(main, [
            "scaling", "--family", "farhi", "--n-list", "4,sixteen"])
        assert result.exit_code == 2


class TestTrials:
    def test_perfect_trials(self, runner):
        result = runner.invoke(main, [
            "trials", "--preset", "perfect", "--n", "16", "--targets", "2",
            "--trials", "5", "--seed", "42"])
        assert result.exit_code == 0
        comments, header, rows = csv_parts(result.output)
        assert header == ["trial", "x", "P"]
        assert len(rows) == 5
        min_line = next(c for c in comments if c.startswith("# min_P"))
        assert float(min_line.split("=")[1]) >= 1 - 1e-8
        assert "# seed = 42" in comments

    def test_env_seed_matches_flag(self, runner):
        args = ["trials", "--n", "8", "--targets", "1", "--trials", "3"]
        via_env = runner.invoke(main, args, env={"HSEARCH_SEED": "7"})
        via_flag = runner.invoke(main, args + ["--seed", "7"])
        assert via_env.output == via_flag.output
        assert "# seed = 7" in via_env.output

    def test_bad_env_seed(self, runner):
        result = runner.invoke(main, [
            "trials", "--n", "8", "--targets", "1"],
            env={"HSEARCH_SEED": "soon"})
        assert result.exit_code == 2

    def test_missing_dimensions(self, runner):
        result = runner.invoke(main, ["trials", "--targets", "1"])
        assert result.exit_code == 2


class TestOutputContract:
    def test_byte_identical_reruns(self, runner, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["trials", "--n", "16", "--targets", "2", "--trials", "10",
                "--seed", "3"]
        assert runner.invoke(main, args + ["--out", str(out1)]).exit_code == 0
        assert runner.invoke(main, args + ["--out", str(out2)]).exit_code == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_json_format(self, runner):
        result = runner.invoke(main, [
            "sweep-phase", "--overlap", "0.2", "--points", "3",
            "--format", "json"])
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["command"] == "sweep-phase"
        assert doc["columns"] == ["phi", "P", "T"]
        assert len(doc["rows"]) == 3
        assert doc["footer"]["monotone_first_quadrant"] == "true"
        assert doc["config"]["overlap"] == 0.2


class TestVerify:
    def test_only_filter(self, runner):
        result = runner.invoke(main, ["verify", "--only", "special"])
        assert result.exit_code == 0
        assert "PASS special-cases" in result.output
        assert "all 1 criteria passed" in result.output

    def test_unknown_filter(self, runner):
        result = runner.invoke(main, ["verify", "--only", "nosuch"])
        assert result.exit_code == 2

    def test_absurd_tolerance_fails(self, runner):
        result = runner.invoke(main, [
            "verify", "--only", "special", "--tolerance", "1e-16"])
        assert result.exit_code == 1
        assert "FAIL" in result.output
