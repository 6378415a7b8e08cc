# SPDX-License-Identifier: Apache-2.0

import math
import os
from pathlib import Path

import numpy as np
import pytest

import mdsd

DATA = Path(os.environ.get("MDSD_TEST_DATA", Path(__file__).resolve().parents[2] / "tests" / "data"))


def test_dust_attenuation_point_value():
    lam = 299792458.0 / 1e12
    hand = 1.029e6 * 6.3 / (3.55**2 + 6.3**2) / lam * (4e-6) ** 3 * 1e8
    assert mdsd.dust_attenuation(1e8, 1e12) == pytest.approx(hand, rel=1e-12)
    n = mdsd.concentration_from_attenuation(mdsd.dust_attenuation(3e7, 2e12), 2e12)
    assert n == pytest.approx(3e7, rel=1e-12)
    assert mdsd.concentration_from_cdod(1.0) == pytest.approx(6.53e5, rel=5e-3)


def test_domain_errors_map_to_exceptions():
    with pytest.raises(mdsd.DomainError):
        mdsd.visibility_from_attenuation(0.0, 1e12)
    with pytest.raises(mdsd.MdsdError):
        mdsd.dust_attenuation(-1.0, 1e12)
    with pytest.raises(mdsd.ConfigError):
        mdsd.run_scenario("run.sede = 1\n")


def test_catalog_and_absorption():
    catalog = mdsd.parse_line_catalog((DATA / "co2_1thz.par").read_text())
    assert len(catalog) == 5
    co2 = catalog[0]
    assert co2.molecule_id == 2
    k = mdsd.absorption_coefficient(catalog, co2.center_frequency)
    assert k > 0
    assert mdsd.absorption_coefficient(catalog, co2.center_frequency + 1e9) == 0.0
    assert mdsd.doppler_halfwidth(co2, 210.0) == pytest.approx(7.82e5, rel=2e-3)
    with pytest.raises(mdsd.ParseError):
        mdsd.parse_line_catalog("garbage\n")


def test_interpolate_methods_and_support():
    rng = np.random.default_rng(3)
    pos = rng.uniform([0, 0], [40, 20], size=(25, 2))
    vals = 2.0 + np.sin(pos[:, 0] / 6.0)
    extent = [0, 40, 0, 20]
    for method in mdsd.METHODS:
        grid = mdsd.interpolate(pos, vals, extent, 16, 8, method, variances=np.full(25, 0.1))
        assert grid.shape == (8, 16)
        finite = grid[np.isfinite(grid)]
        assert finite.size > 0
        if method in ("linear", "cubic"):
            assert np.isnan(grid).any() or finite.size == grid.size
        else:
            assert finite.size == grid.size
        if method in ("linear", "nearest", "idw", "weighted"):
            assert finite.min() >= vals.min() - 1e-12 and finite.max() <= vals.max() + 1e-12
    with pytest.raises(mdsd.MethodInfeasibleError):
        mdsd.interpolate(np.array([[0.0, 0.0], [1.0, 1.0]]), np.array([1.0, 2.0]), extent, 4, 4, "linear")


def test_evaluate_and_grid_round_trip(tmp_path):
    truth = np.full((2, 3, 4), 10.0)
    pred = np.full((2, 3, 4), 8.0)
    m = mdsd.evaluate(pred, truth)
    assert m["mae"] == pytest.approx(2.0)
    assert m["nbias"] == pytest.approx(0.25)
    assert math.isnan(m["rho"])
    assert m["coverage"] == 100.0

    g = np.arange(12, dtype=float).reshape(3, 4)
    g[1, 2] = np.nan
    path = tmp_path / "g.grid"
    mdsd.write_grid(str(path), g, [0, 4, 0, 3], {"method": "idw"})
    back, extent = mdsd.read_grid(str(path))
    assert extent == [0, 4, 0, 3]
    np.testing.assert_array_equal(np.isnan(back), np.isnan(g))
    np.testing.assert_array_equal(back[~np.isnan(g)], g[~np.isnan(g)])
    bad = tmp_path / "bad.grid"
    bad.write_text("MDSD-GRID v2\n1 1 0 1 0 1\n0\n")
    with pytest.raises(mdsd.IngestError):
        mdsd.read_grid(str(bad))


def test_detection_and_errprop():
    rng = np.random.default_rng(0)
    ramp = -2.0 * np.arange(24) / 12.0
    windows = ramp + rng.normal(0, 0.05, size=(5, 24))
    r = mdsd.detect_storm(windows)
    assert r["detected"] and r["rho_bar"] > 0.9
    v = mdsd.variance_components(1e8, 1e12)
    assert v["total_sigma"] == pytest.approx(math.sqrt(v["var_r"] + v["var_n"] + v["var_eps_real"] + v["var_eps_imag"]))
    mc = mdsd.monte_carlo_sigma(1e8, 1e12, samples=200000, seed=1)
    assert mc == pytest.approx(v["total_sigma"], rel=0.05)


def test_small_scenario_is_deterministic():
    mdsd.set_warnings(False)
    cfg = (
        "run.seed = 5\nrun.threads = {threads}\nfield.sols = 1\nfield.calibration_sols = 1\n"
        "field.seasons = storm\narea.width = 40\narea.height = 20\ngrid.nx = 8\ngrid.ny = 4\n"
        "network.nodes = 12, 24\nnetwork.path_points = 4\ninterp.methods = linear, idw\n"
    )
    rows = mdsd.run_scenario(cfg.format(threads=1))
    assert len(rows) == 4
    assert {r["method"] for r in rows} == {"linear", "idw"}
    assert mdsd.metrics_csv(cfg.format(threads=1)) == mdsd.metrics_csv(cfg.format(threads=3))
    field = mdsd.synthetic_field("storm", [0, 40, 0, 20], 8, 4, hour=3.0, seed=2)
    assert field.shape == (4, 8) and np.all(field >= 0)
