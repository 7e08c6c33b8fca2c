import math

import pytest

import ddbrink


def test_identities():
    rep = ddbrink.verify_identities(5, 42)
    assert rep.ok()
    assert rep.max_identity_residual <= 1e-11


def test_compute_rate():
    assert ddbrink.compute_rate(4e-3, 1e-3, 2.0) == pytest.approx(2.0)


def test_spatial_sweep_rates():
    table = ddbrink.spatial_sweep([4, 8], dt=0.01, t_end=0.03)
    rows = table["rows"]
    assert rows[0]["rate_u"] is None
    assert rows[1]["rate_u"] == pytest.approx(2.0, abs=0.2)


def test_bad_theta_rejected():
    with pytest.raises(ddbrink.ConfigError):
        ddbrink.spatial_sweep([2, 4], theta=0.25)


def test_small_cavity(tmp_path):
    c = ddbrink.CavityConfig()
    c.nx, c.ny, c.dt, c.t_end = 4, 6, 1e-3, 3e-3
    res = ddbrink.run_cavity(c, tmp_path, snapshot_every=3)
    assert res["steps"] == 3
    assert all(math.isfinite(s["nu_hot"]) for s in res["history"])
    assert (tmp_path / "nu_sh.csv").exists()
    assert (tmp_path / "fields_3.vtk").exists()
