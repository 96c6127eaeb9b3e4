"""Integration tests for the command-line interface."""

import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "modfactor.cli"]


def run_cli(*args, **kw):
    return subprocess.run(CLI + list(args), capture_output=True, text=True, **kw)


@pytest.fixture(scope="module")
def golden_path(tmp_path_factory):
    p = tmp_path_factory.mktemp("cli") / "golden.json"
    r = run_cli("random", "--golden", "--out", str(p))
    assert r.returncode == 0, r.stderr
    return p


@pytest.fixture(scope="module")
def spec_path(tmp_path_factory):
    p = tmp_path_factory.mktemp("cli") / "spec.json"
    p.write_text(json.dumps({
        "blocks_B": [[1, 1], [2, 1]], "blocks_C": [[2, 1]],
        "module_multiplicity": 2, "corr_multiplicity": 1,
        "with_unit_vector": True,
    }))
    return p


def test_help():
    r = run_cli("--help")
    assert r.returncode == 0
    assert "usage:" in r.stdout.lower()


def test_validate_golden(golden_path):
    r = run_cli("validate", str(golden_path))
    assert r.returncode == 0
    assert "dim E=4" in r.stdout


def test_validate_missing_file():
    r = run_cli("validate", "/no/such/file.json")
    assert r.returncode != 0
    assert "INVALID" in r.stderr


def test_verify_golden(golden_path, tmp_path):
    report = tmp_path / "report.json"
    r = run_cli("verify", "--instance", str(golden_path),
                "--report", str(report))
    assert r.returncode == 0, r.stderr
    assert "PASS" in r.stdout
    body = json.loads(report.read_text())
    assert body["passed"] is True
    assert body["methods"]["unit_vector"]["status"] == "not_applicable"


def test_verify_reports_are_byte_identical(golden_path, tmp_path):
    p1, p2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run_cli("verify", "--instance", str(golden_path),
                   "--report", str(p1)).returncode == 0
    assert run_cli("verify", "--instance", str(golden_path),
                   "--report", str(p2)).returncode == 0
    assert p1.read_bytes() == p2.read_bytes()


def test_random_roundtrip_and_factorize(spec_path, tmp_path):
    inst = tmp_path / "inst.json"
    r = run_cli("random", "--spec", str(spec_path), "--seed", "4",
                "--out", str(inst))
    assert r.returncode == 0, r.stderr

    for method in ("dual", "unit-vector", "qons", "commutant"):
        rep = tmp_path / f"rep_{method}.json"
        r = run_cli("factorize", "--method", method, "--instance", str(inst),
                    "--report", str(rep), "--tol", "1e-9")
        assert r.returncode == 0, (method, r.stderr)
        body = json.loads(rep.read_text())
        assert body["residual_unitary"] <= 1e-8
        assert body["theta_residual"] <= 1e-8

    dims = set()
    for method in ("dual", "unit-vector", "qons", "commutant"):
        body = json.loads((tmp_path / f"rep_{method}.json").read_text())
        dims.add(body["dims"]["correspondence"])
    assert len(dims) == 1  # every method found the same correspondence size


def test_factorize_emit_unitaries(spec_path, tmp_path):
    inst = tmp_path / "inst.json"
    assert run_cli("random", "--spec", str(spec_path), "--seed", "4",
                   "--out", str(inst)).returncode == 0
    rep = tmp_path / "rep.json"
    r = run_cli("factorize", "--method", "dual", "--instance", str(inst),
                "--report", str(rep), "--emit-unitaries")
    assert r.returncode == 0
    body = json.loads(rep.read_text())
    assert "unitary" in body
    assert isinstance(body["unitary"][0][0], list)


def test_random_determinism(spec_path, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run_cli("random", "--spec", str(spec_path), "--seed", "9",
                   "--out", str(a)).returncode == 0
    assert run_cli("random", "--spec", str(spec_path), "--seed", "9",
                   "--out", str(b)).returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_product_system(golden_path, tmp_path):
    rep = tmp_path / "ps.json"
    r = run_cli("product-system", "--instance", str(golden_path),
                "--steps", "3", "--report", str(rep))
    assert r.returncode == 0, r.stderr
    body = json.loads(rep.read_text())
    assert body["member_dims"] == [5, 5, 5]
    assert body["max_residual"] <= 1e-8


def test_random_requires_spec_or_golden():
    r = run_cli("random")
    assert r.returncode == 2
