import csv
import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from qfb.cli import _fmt, load_config, main
from qfb.errors import ConfigError

REPO = Path(__file__).resolve().parent.parent
CONFIGS = REPO / "configs"


def run_cli(args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "qfb.cli", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=REPO,
    )


def write_config(tmp_path, text, name="run.toml"):
    p = tmp_path / name
    p.write_text(text)
    return p


SMALL = """
[system]
topology = "tms"
lambda_over_kappa = 10.0

[freq]
min = 0.0
max = 2.0
points = 3

[sweep]
delta_range = 0.1
samples = 9
"""


class TestLoadConfig:
    def test_round_trip(self):
        cfg, spec, out = load_config(CONFIGS / "tms_fb.toml")
        assert cfg.topology == "tms"
        assert cfg.lam0 == 10.0 and cfg.kappa0 == 1.0
        assert cfg.feedback_mode == 2 and cfg.rho == 0.04
        assert len(cfg.omega_grid) == 200
        assert spec.samples == 90 and spec.pairing == "grid"
        assert out is None

    def test_overrides(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        cfg, spec, _ = load_config(
            p, ["feedback.mode=2", "feedback.rho=0.05", "sweep.samples=30"]
        )
        assert cfg.feedback_mode == 2 and cfg.rho == 0.05
        assert spec.samples == 30

    def test_none_override_disables_feedback(self, tmp_path):
        p = write_config(tmp_path, SMALL + "\n[feedback]\nmode = 2\nrho = 0.04\n")
        cfg, _, _ = load_config(p, ["feedback.mode=none"])
        assert cfg.feedback_mode is None

    def test_unknown_key_rejected(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        with pytest.raises(ConfigError):
            load_config(p, ["system.gain=3"])

    def test_unknown_section_rejected(self, tmp_path):
        p = write_config(tmp_path, SMALL + "\n[plotting]\nstyle = 'x'\n")
        with pytest.raises(ConfigError):
            load_config(p)


class TestFloatFormat:
    @pytest.mark.parametrize(
        "x", [0.0, 1.0, -0.5, math.pi, 1e-17, 1601.0, 0.05270870398112955]
    )
    def test_seventeen_digits_round_trip(self, x):
        assert float(_fmt(x)) == x


class TestExitCodes:
    def test_stable_poles_exit_zero(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        r = run_cli(["poles", "--config", str(p)])
        assert r.returncode == 0
        assert "stable" in r.stderr

    def test_unstable_closed_loop_exit_two(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        r = run_cli(
            ["poles", "--config", str(p), "--set", "feedback.mode=2",
             "--set", "feedback.rho=0.06"]
        )
        assert r.returncode == 2
        assert "unstable" in r.stderr

    def test_missing_config_exit_one(self):
        r = run_cli(["poles", "--config", "/nonexistent.toml"])
        assert r.returncode == 1

    def test_unknown_key_exit_one(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        r = run_cli(["entropy", "--config", str(p), "--set", "system.gain=1"])
        assert r.returncode == 1
        assert "error" in r.stderr


class TestEntropyCommand:
    def test_csv_values(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        out = tmp_path / "entropy.csv"
        r = run_cli(["entropy", "--config", str(p), "--out", str(out)])
        assert r.returncode == 0
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 3
        assert float(rows[0]["omega"]) == 0.0
        s1 = float(rows[0]["S_1"])
        assert s1 == pytest.approx(8.3781, abs=1e-4)
        assert s1 == float(rows[0]["S_2"])


class TestSweepCommand:
    def test_summary_and_determinism_across_threads(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        outputs = []
        for name, threads in (("a.csv", "1"), ("b.csv", "2"), ("c.csv", "1")):
            out = tmp_path / name
            r = run_cli(
                ["sweep", "--config", str(p), "--out", str(out)],
                env_extra={"QFB_THREADS": threads},
            )
            assert r.returncode == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1] == outputs[2]
        summary = tmp_path / "a.summary.csv"
        rows = list(csv.DictReader(summary.open()))
        assert len(rows) == 3
        assert float(rows[0]["spread"]) > 0

    def test_unstable_samples_reported(self, tmp_path):
        p = write_config(tmp_path, SMALL)
        out = tmp_path / "sweep.csv"
        r = run_cli(
            ["sweep", "--config", str(p), "--out", str(out),
             "--set", "system.topology=linear4",
             "--set", "feedback.mode=2", "--set", "feedback.rho=0.04",
             "--set", "sweep.samples=90"]
        )
        assert r.returncode == 0
        assert "excluded_unstable" in r.stderr


class TestCompareCommand:
    def test_two_rows(self, tmp_path):
        pa = write_config(tmp_path, SMALL, "a.toml")
        pb = write_config(
            tmp_path, SMALL.replace("lambda_over_kappa = 10.0",
                                    "lambda_over_kappa = 5.0"), "b.toml")
        out = tmp_path / "cmp.csv"
        code = main(
            ["compare", "--config", str(pa), "--config-b", str(pb),
             "--set", "feedback.mode=2", "--set", "feedback.rho=0.04",
             "--out", str(out)]
        )
        assert code == 0
        rows = list(csv.DictReader(out.open()))
        assert [r["scenario"] for r in rows] == ["a", "b"]
        assert float(rows[0]["spread0"]) < float(rows[1]["spread0"])
