import json
import subprocess
import sys

import pytest

from superhyp import geometry as geo
from superhyp import minkowski as mk
from superhyp.cli import EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_OK, random_points, run
from superhyp.grassmann import AlgebraContext, from_json
from superhyp.supermatrix import matrix_from_json


def call(tmp_path, *argv):
    out = tmp_path / "report.json"
    code = run([*argv, "--out", str(out)])
    return code, json.loads(out.read_text()), out.read_bytes()


def write_points(tmp_path, points, n):
    path = tmp_path / "points.json"
    path.write_text(json.dumps({"generators": n, "points": [mk.point_to_json(P) for P in points]}))
    return str(path)


def test_zero_trials_is_an_empty_success(tmp_path):
    code, rep, _ = call(tmp_path, "verify-invariance", "--trials", "0")
    assert code == EXIT_OK
    assert rep["checks"] == {} and rep["counterexample"] is None


def test_small_default_suite_passes(tmp_path):
    code, rep, _ = call(tmp_path, "verify-invariance", "--trials", "3", "--gens", "6")
    assert code == EXIT_OK and rep["status"] == "ok"
    assert rep["checks"]["Q invariance"] == {"passed": 3, "failed": 0}
    # known-false closed forms are tallied but do not gate unless --strict
    assert rep["claims"]["theta' = -2 theta"]["failed"] == 3


def test_strict_mode_gates_on_false_claims(tmp_path):
    code, rep, _ = call(tmp_path, "verify-invariance", "--trials", "2", "--strict")
    assert code == EXIT_COUNTEREXAMPLE
    assert rep["counterexample"]["check"] == "theta' = -2 theta"


def test_sabotaged_theta_yields_replayable_witness(tmp_path):
    code, rep, _ = call(tmp_path, "verify-invariance", "--trials", "2", "--theta", "x-only")
    assert code == EXIT_COUNTEREXAMPLE
    cx = rep["counterexample"]
    assert cx["delta"]
    ctx = AlgebraContext(rep["generators"])
    g = matrix_from_json(ctx, cx["g"])
    P = mk.point_from_json(ctx, cx["P"])
    th = mk.theta(g, P, "x-only").value
    assert mk.delta_quadratic(g, P, th) == from_json(ctx, cx["delta"])
    assert not mk.delta_quadratic(g, P, th).is_zero()


def test_exact_reports_are_byte_identical(tmp_path):
    _, _, a = call(tmp_path, "verify-appendix", "--trials", "2", "--seed", "5")
    _, _, b = call(tmp_path, "verify-appendix", "--trials", "2", "--seed", "5")
    assert a == b


def test_env_var_sets_default_mode(tmp_path, monkeypatch):
    monkeypatch.setenv("SUPERHYP_MODE", "float")
    code, rep, _ = call(tmp_path, "verify-invariance", "--trials", "1")
    assert code == EXIT_INPUT
    code, _, _ = call(tmp_path, "verify-invariance", "--trials", "0", "--mode", "exact")
    assert code == EXIT_OK


def test_geometry_needs_float_mode(tmp_path):
    code, rep, _ = call(tmp_path, "triangle", "--mode", "exact")
    assert code == EXIT_INPUT and rep["error"] == "InputError"


def test_two_point_file_gives_one_distance(tmp_path):
    ctx = AlgebraContext(4, "float")
    path = write_points(tmp_path, random_points(ctx, 1, 2), 4)
    code, rep, _ = call(tmp_path, "geodesic", "--points", path)
    assert code == EXIT_OK
    assert len(rep["distances"]) == 1
    assert max(rep["geodesic"]["norm_residuals"]) < 1e-9


def test_tetrahedron_dual_paths(tmp_path):
    ctx = AlgebraContext(4, "float")
    bosonic = [P.body() for P in random_points(ctx, 3, 4)]
    path = write_points(tmp_path, bosonic, 4)
    code, rep, _ = call(tmp_path, "tetrahedron", "--points", path)
    assert code == EXIT_OK
    assert len(rep["dihedral"]) == 6
    assert rep["max_dual_path_residual"] < 1e-9


def test_collinear_triple_is_an_input_error(tmp_path):
    ctx = AlgebraContext(4, "float")
    P, Q = random_points(ctx, 2, 2)
    L, D = geo.geodesic_through(P, Q)
    path = write_points(tmp_path, [P, Q, geo.geodesic_point(L, D / 2)], 4)
    code, rep, _ = call(tmp_path, "triangle", "--points", path)
    assert code == EXIT_INPUT and rep["error"] == "DegenerateConfiguration"


def test_wrong_point_count_and_bad_file(tmp_path):
    ctx = AlgebraContext(4, "float")
    path = write_points(tmp_path, random_points(ctx, 2, 3), 4)
    assert call(tmp_path, "tetrahedron", "--points", path)[0] == EXIT_INPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert call(tmp_path, "geodesic", "--points", str(bad))[0] == EXIT_INPUT


def test_point_off_hyperboloid_rejected(tmp_path):
    ctx = AlgebraContext(4, "float")
    P, Q = random_points(ctx, 2, 2)
    path = write_points(tmp_path, [P.scale(2), Q], 4)
    assert call(tmp_path, "geodesic", "--points", path)[0] == EXIT_INPUT


def test_single_eps_is_a_fit_error(tmp_path):
    code, rep, _ = call(tmp_path, "volume-divergence", "--eps", "0.1")
    assert code == EXIT_INPUT and rep["error"] == "FitFailure"


def test_bosonic_volume_report_converges(tmp_path):
    code, rep, _ = call(tmp_path, "volume-divergence", "--bosonic", "--smax", "10")
    assert code == EXIT_OK
    assert rep["fit"]["exponent"] is None
    assert list(rep["per_monomial"]) == ["1"]
    assert rep["body_increment"] < 1e-2


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "superhyp.cli", "verify-appendix", "--trials", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "ok"
