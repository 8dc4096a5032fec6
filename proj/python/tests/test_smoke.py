import json
import math

import numpy as np
import pytest

import isaacs_lab as lab


def test_models_listed():
    assert "heat_no_control" in lab.model_names()
    assert all(c["passed"] for c in lab.validate_model("risk_sensitive_1d"))


def test_heat_value():
    r = lab.solve_pde("heat_no_control", nx=200)
    assert r["value"].shape == (len(r["t"]), len(r["x"]))
    assert abs(r["u0"] - math.exp(-0.5)) <= 2e-2
    assert r["residual"] <= 1e-2


def test_isaacs_order():
    lo, hi = lab.hamiltonians("nonseparable", 0.2, 0.1, 0.0, 1.0, 0.0)
    assert lo <= hi
    lo, hi = lab.hamiltonians("separable_isaacs", 0.2, 0.1, 0.0, 1.0, 0.0)
    assert lo == hi


def test_rbsde_sandwich_and_skorokhod():
    r = lab.solve_rbsde("risk_sensitive_1d", nx=60)
    assert max(r["skorokhod"]) <= 1e-12
    assert np.all(np.isfinite(r["y"]))


def test_transform_cancellation():
    assert lab.exp_transform(2.0, 0.5, 3.0, 1.7) == pytest.approx(6.0, abs=1e-12)
    assert lab.inverse_transform_value(math.e, 0.5) == pytest.approx(1.0)
    with pytest.raises(lab.IsaacsError, match="NonpositiveInput"):
        lab.inverse_transform_value(0.0, 0.5)


def test_methods_agree():
    pde = lab.solve_pde("risk_sensitive_1d", nx=60)["u0"]
    tr = lab.solve_pde("risk_sensitive_1d", nx=60, transform=True)["u0"]
    assert abs(pde - tr) <= 5e-2


def test_run_config(tmp_path):
    cfg = {"model": "heat_no_control", "method": "pde", "grid": {"nx": 80}}
    manifest = lab.run(json.dumps(cfg), tmp_path)
    assert all(c["passed"] for c in manifest["checks"])
    assert (tmp_path / "manifest.json").exists()


def test_config_error():
    with pytest.raises(lab.IsaacsError, match="ConfigError"):
        lab.run(json.dumps({"model": "heat_no_control"}), "unused")
