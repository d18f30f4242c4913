"""Smoke tests for the python bindings: classic closed-form cases."""

import math

import pytest

import hsurf


def test_field_evaluation_and_derivatives():
    one = hsurf.Field.constant(1.0)
    assert one([1.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert one.estrella_value([0.0, 0.0, 1.0]) == pytest.approx(3.0)

    lin = hsurf.Field.linear(1.0, 0.0, [0.0, 0.0, 1.0])
    assert lin.gradient([1.0, 0.0, 0.0]) == pytest.approx([0.0, 0.0, 1.0])
    x = [0.6, 0.0, 0.8]
    assert lin.laplacian(x) == pytest.approx(-2.0 * 0.8, rel=1e-8)


def test_flat_curve_circle():
    sol = hsurf.flat_curve(hsurf.Field.constant(1.0), s_max=2 * math.pi)
    assert sol["closed"]
    assert sol["gap"] < 1e-8
    assert sol["period"] == pytest.approx(math.pi, rel=1e-8)
    # radius 1/2 circle through the origin
    xs = [p[0] for p in sol["points"]]
    ys = [p[1] for p in sol["points"]]
    assert max(ys) == pytest.approx(1.0, abs=1e-6)
    assert max(xs) == pytest.approx(0.5, abs=1e-6)


def test_estrella_minimum_linear_field():
    lin = hsurf.Field.linear(1.0, 0.0, [0.0, 0.0, 1.0])
    rep = hsurf.estrella_minimum(lin, resolution=2000)
    assert rep["c"] == pytest.approx(-1.0, abs=1e-4)
    assert not rep["certified_positive"]

    one = hsurf.estrella_minimum(hsurf.Field.constant(1.0), resolution=500)
    assert one["c"] == pytest.approx(3.0)
    assert one["radius_bound"] == pytest.approx(2 * math.pi / math.sqrt(9.0))


def test_solve_graph_cap_height():
    domain = {
        "type": "disk",
        "radius": 0.5,
        "spacing": 1.0 / 24,
        "boundary": {"kind": "zero"},
    }
    out = hsurf.solve_graph(hsurf.Field.constant(1.0), domain)
    assert out["converged"]
    assert out["max_height"] == pytest.approx(1 - math.sqrt(0.75), abs=5e-3)


def test_rotational_sphere_diagnostics():
    out = hsurf.rotational([1.0, 0.0, 0.5], shape="sphere", rows=48, cols=48)
    assert out["pole_to_pole"]
    assert out["strictly_convex"]
    assert abs(out["flux_axis"]) < 1e-4 * out["area"]


def test_stability_report_sphere():
    surface = {"kind": "round-sphere", "rows": 48, "cols": 48}
    rep = hsurf.stability_report(hsurf.Field.constant(1.0), surface, 500)
    assert rep["lambda0"] == pytest.approx(-2.0, abs=0.05)
    assert rep["certificate"] == "unstable"
    assert rep["estrella_c"] == pytest.approx(3.0)


def test_run_command_roundtrip(tmp_path):
    cfg = {
        "field": {"kind": "analytic", "formula": "constant", "params": {"H0": 1.0}},
        "s_max": 2 * math.pi,
    }
    summary = hsurf.run_command("flat-curve", cfg, out_dir=str(tmp_path))
    assert summary["closed"]
    assert (tmp_path / "curve.csv").exists()


def test_config_errors_raise_value_error():
    with pytest.raises(ValueError):
        hsurf.run_command("flat-curve", {"bogus": 1})
