import json
import os
import subprocess
import sys

import pytest

from afl_lab.cli import DEFAULT_SIGNATURES, SweepConfig, main, run_sweep
from afl_lab.errors import InputError


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.pop("AFL_LAB_SEED", None)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run(
        [sys.executable, "-m", "afl_lab", *args],
        capture_output=True,
        text=True,
        env=env,
    )
    return proc


# ---------------------------------------------------------------------------
# gen


def test_gen_signature():
    proc = run_cli("gen", "--q", "3", "--sig", "sp:1:3", "--seed", "2")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["n"] == 3 and data["p"] == 3


def test_gen_coxeter():
    proc = run_cli("gen", "--coxeter", "--q", "3", "--n", "3")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 3


def test_gen_rejects_composite_q():
    proc = run_cli("gen", "--q", "4", "--sig", "sp:1:1")
    assert proc.returncode == 2
    assert "odd prime" in proc.stderr


# ---------------------------------------------------------------------------
# verify


def test_verify_inline_spec_passes():
    proc = run_cli("verify", "--q", "3", "--sig", "sp:1:1")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["verdict"] == "PASS" and data["A"] == 1 and data["G"] == 1


def test_verify_empty_support_passes():
    proc = run_cli("verify", "--q", "3", "--sig", "sp:1:1,sp:1:1,sp:1:1")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["support"] == "Empty" and data["G"] == 0


def test_verify_file_roundtrip(tmp_path):
    gen = run_cli("gen", "--q", "5", "--sig", "cp:1:2,sp:1:1", "--seed", "3")
    path = tmp_path / "inst.json"
    path.write_text(gen.stdout)
    proc = run_cli("verify", "--in", str(path))
    assert proc.returncode == 0


def test_verify_corrupted_instance_exit2(tmp_path):
    gen = run_cli("gen", "--q", "3", "--sig", "cp:1:1,sp:1:1", "--seed", "3")
    data = json.loads(gen.stdout)
    orig = data["gram"][0][1]
    data["gram"][0][1] = [(orig[0] + 1) % 3, orig[1]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    proc = run_cli("verify", "--in", str(path))
    assert proc.returncode == 2
    assert "conjugate-symmetric" in proc.stderr


# ---------------------------------------------------------------------------
# fl / dl / orbital


def test_fl_subcommand():
    proc = run_cli("fl", "--q", "3", "--sig", "cp:1:1")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["lhs"] == data["rhs"] == 2


def test_dl_subcommand():
    proc = run_cli("dl", "--q", "3", "--t", "3", "--seed", "1")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["count"] == 3 and data["galois_transitive"] is True


def test_orbital_subcommand():
    proc = run_cli("orbital", "--q", "3", "--sig", "sp:1:1", "--ell", "0")
    assert proc.returncode == 0
    data = json.loads(proc.stdout)
    assert data["pretty"] == "1 - u"
    assert data["value_at_1"] == 0


# ---------------------------------------------------------------------------
# sweep


def test_sweep_rejects_zero_count():
    proc = run_cli("sweep", "--count", "0", "--seed", "1")
    assert proc.returncode == 2


def test_sweep_same_seed_byte_identical():
    a = run_cli("sweep", "--count", "10", "--seed", "9", "--q", "3")
    b = run_cli("sweep", "--count", "10", "--seed", "9", "--q", "3")
    assert a.returncode == 0 and a.stdout == b.stdout


def test_sweep_parallelism_byte_identical():
    a = run_cli("sweep", "--count", "12", "--seed", "4", "--q", "3", "--jobs", "1")
    b = run_cli("sweep", "--count", "12", "--seed", "4", "--q", "3", "--jobs", "8")
    assert a.returncode == 0 and a.stdout == b.stdout


def test_sweep_summary_shape():
    summary, reports = run_sweep(
        SweepConfig(qs=(3,), max_dim=5, count=6, seed=0, signatures=DEFAULT_SIGNATURES, jobs=1, out=None)
    )
    assert summary["instances"] == 6 == len(reports)
    assert summary["passes"] + summary["fails"] == 6
    assert isinstance(summary["findings"], list)


def test_run_sweep_rejects_empty_grid():
    with pytest.raises(InputError):
        run_sweep(SweepConfig(qs=(3,), max_dim=0, count=1, seed=0, signatures=("sp:1:1",), jobs=1, out=None))


# ---------------------------------------------------------------------------
# selftest, env seed, entry point


def test_selftest_passes():
    proc = run_cli("selftest")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["ok"] is True


def test_env_seed_overrides_flag():
    with_env = run_cli("gen", "--q", "3", "--sig", "sp:3:1", "--seed", "1", env_extra={"AFL_LAB_SEED": "7"})
    explicit = run_cli("gen", "--q", "3", "--sig", "sp:3:1", "--seed", "7")
    assert with_env.stdout == explicit.stdout


def test_main_returns_int():
    assert main(["selftest"]) == 0
