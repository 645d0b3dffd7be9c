"""Tests for the command-line front end: summaries, files, exit codes."""

import json

import pytest

from homeowheel.cli import run
from homeowheel.executor import Trajectory, read_trajectory_file, write_trajectory_file
from homeowheel.mechanism import ServoState
from homeowheel.planner import count_engaged_sweeps


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSimulateCommand:
    def test_summary_and_exit_code(self, capsys, tmp_path):
        out = tmp_path / "trace.csv"
        code, stdout, _ = invoke(capsys, "simulate", "--n", "1",
                                 "--radius-m", "0.5", "--out", str(out))
        assert code == 0
        assert "theta_wheel_deg=720.000000000" in stdout
        assert "x_m=6.283185307" in stdout
        assert "max_twist_shaft_axial_deg=360.000000000" in stdout
        assert "violations=0" in stdout
        assert out.read_text().startswith("t,s1,s2,s3,")

    def test_two_iterations(self, capsys):
        code, stdout, _ = invoke(capsys, "simulate", "--n", "2")
        assert code == 0
        assert "theta_wheel_deg=1440.000000000" in stdout

    def test_zero_n_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run(["simulate", "--n", "0"])
        assert excinfo.value.code == 2
        assert "usage" in capsys.readouterr().err

    def test_writes_the_trajectory_too(self, capsys, tmp_path):
        traj_path = tmp_path / "routine.json"
        code, _, _ = invoke(capsys, "simulate", "--n", "1", "--out-traj", str(traj_path))
        assert code == 0
        trajectory = read_trajectory_file(traj_path)
        assert len(trajectory.waypoints) == 11


class TestPlanCommand:
    def test_plan_rotation_writes_a_valid_file(self, capsys, tmp_path):
        out = tmp_path / "plan.json"
        code, stdout, _ = invoke(capsys, "plan", "--target-deg", "450", "--out", str(out))
        assert code == 0
        assert "predicted_theta_wheel_deg=450.000000000" in stdout
        assert "segments=" in stdout
        trajectory = read_trajectory_file(out)
        assert count_engaged_sweeps(trajectory) >= 2

    def test_zero_target(self, capsys, tmp_path):
        out = tmp_path / "plan.json"
        code, stdout, _ = invoke(capsys, "plan", "--target-deg", "0", "--out", str(out))
        assert code == 0
        assert "predicted_theta_wheel_deg=0.000000000" in stdout
        assert out.exists()

    def test_distance_goal(self, capsys, tmp_path):
        out = tmp_path / "plan.json"
        code, stdout, _ = invoke(capsys, "plan", "--distance-m", "-1.0",
                                 "--radius-m", "0.1", "--out", str(out))
        assert code == 0
        assert "predicted_x_m=-1.000000000" in stdout

    def test_target_and_distance_are_mutually_exclusive(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            run(["plan", "--target-deg", "90", "--distance-m", "1.0",
                 "--out", str(tmp_path / "x.json")])
        assert excinfo.value.code == 2

    def test_one_goal_is_required(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            run(["plan", "--out", str(tmp_path / "x.json")])
        assert excinfo.value.code == 2

    def test_non_finite_target_is_a_usage_error(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            run(["plan", "--target-deg", "nan", "--out", str(tmp_path / "x.json")])
        assert excinfo.value.code == 2


class TestGaitCommand:
    def test_two_cycles(self, capsys, tmp_path):
        out = tmp_path / "gait.json"
        code, stdout, _ = invoke(capsys, "gait", "--period-s", "8",
                                 "--cycles", "2", "--out", str(out))
        assert code == 0
        assert "theta_wheel_deg=1440.000000000" in stdout
        assert out.exists()

    def test_infeasible_period(self, capsys, tmp_path):
        code, stdout, _ = invoke(capsys, "gait", "--period-s", "2.9",
                                 "--cycles", "1", "--out", str(tmp_path / "g.json"))
        assert code == 1
        assert "RateInfeasible" in stdout

    def test_zero_cycles_is_a_usage_error(self, capsys, tmp_path):
        with pytest.raises(SystemExit) as excinfo:
            run(["gait", "--period-s", "8", "--cycles", "0",
                 "--out", str(tmp_path / "g.json")])
        assert excinfo.value.code == 2


class TestCheckCommand:
    def _write(self, tmp_path, states, name="traj.json"):
        trajectory = Trajectory.from_states([ServoState(*s) for s in states])
        path = tmp_path / name
        write_trajectory_file(trajectory, path)
        return path

    def test_accepts_the_canonical_routine(self, capsys, tmp_path):
        traj_path = tmp_path / "routine.json"
        invoke(capsys, "simulate", "--n", "1", "--out-traj", str(traj_path))
        code, stdout, _ = invoke(capsys, "check", str(traj_path))
        assert code == 0
        assert "ok=1" in stdout

    def test_accepts_every_produced_file(self, capsys, tmp_path):
        produced = []
        invoke(capsys, "simulate", "--n", "2", "--out-traj", str(tmp_path / "a.json"))
        produced.append(tmp_path / "a.json")
        invoke(capsys, "plan", "--target-deg", "-540", "--out", str(tmp_path / "b.json"))
        produced.append(tmp_path / "b.json")
        invoke(capsys, "gait", "--period-s", "6", "--cycles", "1",
               "--out", str(tmp_path / "c.json"))
        produced.append(tmp_path / "c.json")
        for path in produced:
            code, stdout, _ = invoke(capsys, "check", str(path))
            assert code == 0, path
            assert "ok=1" in stdout

    def test_range_violation_exits_one(self, capsys, tmp_path):
        path = self._write(tmp_path, [(0, 0, 0), (400, 0, 0), (0, 0, 0)])
        code, stdout, _ = invoke(capsys, "check", str(path))
        assert code == 1
        assert "RangeViolation servo1" in stdout

    def test_truncated_file_exits_three(self, capsys, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{\n  "format_version": 1,\n')
        code, _, stderr = invoke(capsys, "check", str(path))
        assert code == 3
        assert "line" in stderr and "column" in stderr

    def test_missing_file_is_a_usage_error(self, capsys, tmp_path):
        code, _, stderr = invoke(capsys, "check", str(tmp_path / "nope.json"))
        assert code == 2

    def test_policy_gates_disengaged_motion(self, capsys, tmp_path):
        path = self._write(tmp_path, [(0, 0, 0), (90, 0, 0)])
        code_strict, stdout_strict, _ = invoke(capsys, "check", str(path))
        assert code_strict == 1
        assert "DisengagedShaftMotion" in stdout_strict
        code_lenient, stdout_lenient, _ = invoke(
            capsys, "check", str(path), "--policy", "lenient")
        assert code_lenient == 0
        assert "event=DisengagedShaftMotion" in stdout_lenient
        assert "event=GimbalLockRisk" in stdout_lenient


class TestScaleCommand:
    def test_ratio_of_two_sizes(self, capsys):
        code, stdout, _ = invoke(capsys, "scale", "--lengths-m", "1,0.1")
        assert code == 0
        assert "accel_ratio=10.000000000" in stdout

    def test_identity_row_at_the_reference(self, capsys):
        code, stdout, _ = invoke(capsys, "scale", "--lengths-m", "1")
        assert code == 0
        assert "L_m=1.000000000 mass_kg=1.000000000 force_n=1.000000000 accel_m_s2=1.000000000" in stdout

    def test_non_positive_length_is_a_usage_error(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            run(["scale", "--lengths-m", "0"])
        assert excinfo.value.code == 2
        with pytest.raises(SystemExit) as excinfo:
            run(["scale", "--lengths-m", "1,-2"])
        assert excinfo.value.code == 2


class TestConfigAndDeterminism:
    def test_config_overrides_geometry(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"wheel_radius_m": 0.5}))
        code, stdout, _ = invoke(capsys, "simulate", "--n", "1", "--config", str(config))
        assert code == 0
        assert "x_m=6.283185307" in stdout

    def test_flag_beats_config(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text(json.dumps({"wheel_radius_m": 0.5}))
        code, stdout, _ = invoke(capsys, "simulate", "--n", "1",
                                 "--config", str(config), "--radius-m", "1.0")
        assert code == 0
        assert "x_m=12.566370614" in stdout

    def test_bad_config_is_a_usage_error(self, capsys, tmp_path):
        config = tmp_path / "config.json"
        config.write_text("{not json")
        code, _, stderr = invoke(capsys, "simulate", "--n", "1", "--config", str(config))
        assert code == 2
        assert "config" in stderr

    def test_every_command_writes_identical_bytes_twice(self, capsys, tmp_path):
        runs = {
            "trace.csv": ["simulate", "--n", "2", "--radius-m", "0.25", "--out"],
            "routine.json": ["simulate", "--n", "2", "--out-traj"],
            "plan.json": ["plan", "--target-deg", "765.4321", "--out"],
            "gait.json": ["gait", "--period-s", "7.7", "--cycles", "3", "--out"],
        }
        for filename, argv in runs.items():
            first = tmp_path / ("first_" + filename)
            second = tmp_path / ("second_" + filename)
            assert run(argv + [str(first)]) == 0
            assert run(argv + [str(second)]) == 0
            capsys.readouterr()
            assert first.read_bytes() == second.read_bytes()
