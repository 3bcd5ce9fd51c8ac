import json
import math

import numpy as np
import pytest

import stokeswaves as sw


def test_dispersion():
    deep = sw.PhysicalParams()
    assert deep.depth == "inf"
    assert sw.omega(deep, 4.0) == pytest.approx(2.0, rel=1e-15)
    assert sw.phase_speed(deep, 1.0) == pytest.approx(1.0, rel=1e-15)
    plus, minus = sw.bond_numbers(sw.PhysicalParams(depth=1.0, kappa=0.5))
    assert plus == minus == pytest.approx(0.5)
    with pytest.raises(sw.DomainError):
        sw.PhysicalParams(g=-1.0)


def test_wilton_kernel():
    assert sw.find_resonant_kappa(1.0, "inf", 0.0, -1, -2) == pytest.approx(0.5, abs=1e-12)
    rec = sw.classify_kernel(sw.PhysicalParams(kappa=0.5), -1)
    assert rec["kernel_dim"] == 4
    assert rec["partner"] == -2


def test_dno_and_residual():
    p = sw.PhysicalParams(depth=2.0)
    grid = sw.SpectralGrid(16)
    eta = np.zeros(17, dtype=complex)
    psi = np.zeros(17, dtype=complex)
    psi[2] = 0.5
    g = sw.dno_apply(p, grid, eta, psi)
    assert g[2] == pytest.approx(2 * math.tanh(4.0) * 0.5)
    f_eta, f_zeta = sw.residual(p, grid, 1.0, eta, eta)
    assert np.abs(f_eta).max() == 0.0 and np.abs(f_zeta).max() == 0.0


def test_branch():
    pts = sw.nonresonant_branch(sw.PhysicalParams(), sw.SpectralGrid(32), 1, [0.01])
    assert pts[0]["residual_norm"] <= 1e-10
    assert pts[0]["c"] == pytest.approx(1.0, abs=1e-3)
    with pytest.raises(sw.MisuseError):
        sw.nonresonant_branch(sw.PhysicalParams(kappa=0.5), sw.SpectralGrid(16), -1, [0.01])


def test_config_and_cli():
    text = sw.normalize_config('{"j_star": -1}')
    assert json.loads(text)["j_star"] == -1
    with pytest.raises(sw.ConfigError):
        sw.normalize_config('{"unknown": 1}')
    code, out, _ = sw.run_cli(["classify", "--kappa", "0.5", "--j-star", "-1"])
    assert code == 0 and json.loads(out)["kernel_dim"] == 4
    code, _, _ = sw.run_cli(["classify", "--bogus"])
    assert code == 2


def test_selfcheck():
    report = sw.selfcheck(sw.PhysicalParams(), sw.SpectralGrid(32), 1, 2)
    assert report["passed"]
