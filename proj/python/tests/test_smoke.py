import json
import math

import pytest

import intime


def test_reduced_mass():
    assert intime.reduced_mass(1.0, 2.0, 3.0) == pytest.approx(1.0, abs=1e-15)
    assert intime.reduced_mass(1.0, 1.0, 1.0) == pytest.approx(1.0 / math.sqrt(3.0), abs=1e-15)


def test_parametric_closed_form():
    # theta = 0.5, elastic 2 -> 0: sqrt(2)/8
    w = intime.transition_probability_parametric(0.5, 2, 0)
    assert w == pytest.approx(math.sqrt(2.0) / 8.0, rel=1e-14)
    # parity: odd m - n vanishes identically
    assert intime.transition_probability_parametric(0.3, 3, 0) == 0.0


def test_identity_limit():
    params = intime.ScatteringParameters(theta=0.0)
    mat = intime.assemble_matrix(params, 6, intime.MatrixMode.Legendre)
    for i in range(7):
        for j in range(7):
            expected = 1.0 if i == j else 0.0
            assert mat[i, j] == pytest.approx(expected, abs=1e-12)


def test_ground_state_survival():
    theta = 0.37
    params = intime.ScatteringParameters(theta=theta)
    w00 = intime.transition_probability(params, 0, 0)
    assert w00 == pytest.approx(math.sqrt(1.0 - theta), rel=1e-12)


def test_sudden_step_theta():
    # instantaneous 1 -> 2 jump: theta = (1/3)^2
    prof = intime.profile_step(1.0, 2.0, 8.0, 1601)
    sol = intime.solve_xi(prof)
    assert sol.theta() == pytest.approx(1.0 / 9.0, abs=1e-6)
    assert sol.wronskian_drift < 1e-7


def test_tanh_closed_form():
    prof = intime.profile_tanh(1.0, 2.0, 0.35)
    sol = intime.solve_xi(prof)
    assert sol.theta() == pytest.approx(intime.tanh_profile_theta(1.0, 2.0, 0.35), rel=1e-5)


def test_driven_poisson_column():
    # resonant drive on a constant profile: column 0 is Poisson(nu)
    nu_target = 0.25
    width = 3.0
    omega = 1.0
    prof = intime.profile_constant(omega, 24.0, 1921)
    overlap = 0.5 * math.sqrt(2.0 * math.pi) * width * (1.0 + math.exp(-2.0 * omega**2 * width**2))
    amplitude = math.sqrt(2.0 * omega * nu_target) / overlap
    intime.set_gaussian_force(prof, amplitude, width, omega, 0.0)
    xi = intime.solve_xi(prof)
    eta = intime.solve_eta(prof, xi)
    assert eta.nu == pytest.approx(nu_target, rel=1e-6)
    params = intime.extract_parameters(xi.c1, xi.c2, eta.d_inf, omega, omega)
    for m in range(5):
        poisson = math.exp(-eta.nu) * eta.nu**m / math.factorial(m)
        assert intime.transition_probability(params, m, 0) == pytest.approx(poisson, rel=1e-8)


def test_oracle_agrees_with_closed_form():
    prof = intime.profile_tanh(1.0, 2.0, 0.35)
    xi = intime.solve_xi(prof)
    params = intime.extract_parameters(xi.c1, xi.c2, 0j, 1.0, 2.0)
    closed = intime.assemble_matrix(params, 2, intime.MatrixMode.Legendre)
    grid = intime.GridSpec(12.0, 1024)
    direct = intime.oracle_matrix(prof, 2, grid, 0.01)
    for i in range(3):
        for j in range(3):
            assert direct[i, j] == pytest.approx(closed[i, j], rel=2e-3, abs=1e-6)


def test_run_config(tmp_path):
    config = {
        "system": {"mA": 1.0, "mB": 2.0, "mC": 3.0, "E": 2.0, "E_kin_in": 1.0},
        "profile": {
            "source": "analytic-profile",
            "shape": {"type": "tanh", "omega_in": 1.0, "omega_out": 2.0,
                      "T": 0.35, "tau_span": 12.0},
        },
        "modes": ["legendre"],
        "n_max": 4,
        "output": {"dir": str(tmp_path / "run")},
    }
    result = intime.run_config(json.dumps(config))
    assert result["exit_code"] == 0
    assert len(result["points"]) == 1
    point = result["points"][0]
    assert point["status"] == "ok"
    assert point["theta"] == pytest.approx(intime.tanh_profile_theta(1.0, 2.0, 0.35), rel=1e-5)
    assert (tmp_path / "run" / "manifest.json").exists()
    theta = point["theta"]
    assert point["W00"] == pytest.approx(math.sqrt(1.0 - theta), rel=1e-9)
    # column sums over a 4-row window are truncated; only the n = 0 column
    # converges this fast
    mat = point["matrices"]["legendre"]
    assert mat[0, 0] == pytest.approx(point["W00"], rel=1e-12)
    assert mat.column_sums[0] == pytest.approx(1.0, abs=1e-3)


def test_config_rejects_unknown_keys():
    config = {
        "system": {"mA": 1.0, "mB": 2.0, "mC": 3.0, "E": 2.0, "E_kin_in": 1.0},
        "profile": {
            "source": "analytic-profile",
            "shape": {"type": "constant", "omega0": 1.0},
        },
        "modes": ["legendre"],
        "n_mx": 4,  # typo must fail loudly
    }
    with pytest.raises(ValueError):
        intime.run_config(json.dumps(config))
