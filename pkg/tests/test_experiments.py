import math

import numpy as np
import pytest
import sympy as sp

from sepdist import data, experiments as ex
from sepdist.compensation import loss_sweep
from sepdist.network import prepare_three_mode
from sepdist.symplectic import ppt_values


def symbolic_ideal_state():
    """Ideal preparation with symbols: squeezing s, preparation loss l, thermal variance n."""
    s, l, n = sp.symbols("s l n", positive=True)
    x_sq = (1 - l) / s + l
    p_sq = (1 - l) * s + l
    g = sp.diag(x_sq, p_sq, 1, 1, n, n)
    r = 1 / sp.sqrt(2)

    def bs(i, j):
        S = sp.eye(6)
        for q in (0, 1):
            u, v = 2 * i + q, 2 * j + q
            S[u, u], S[u, v], S[v, u], S[v, v] = r, r, r, -r
        return S

    S = bs(1, 2) * bs(1, 0)
    return S * g * S.T, (s, l, n)


def test_symbolic_crossing_condition():
    g, (s, l, n) = symbolic_ideal_state()
    flip = sp.diag(1, 1, 1, 1, 1, -1)
    gt = flip * g * flip
    J = sp.zeros(6)
    for k in range(3):
        J[2 * k, 2 * k + 1], J[2 * k + 1, 2 * k] = 1, -1
    # a symplectic eigenvalue equals 1 exactly when det(gamma + iJ) vanishes
    d = sp.numer(sp.together(sp.expand((gt + sp.I * J).det(method="berkowitz"))))
    factors = {sp.expand(f) for f, _ in sp.factor_list(d)[1]}
    key = sp.expand(3 * l * n - l - n - 1)
    assert key in factors or -key in factors
    # the only factor depending on n besides the trivial n = 1
    assert {f for f in factors if f.has(n)} <= {key, -key, n - 1, 1 - n}
    assert sp.solve(key, n) == [(1 + l) / (3 * l - 1)]


def test_symbolic_state_matches_numeric():
    g, (s, l, n) = symbolic_ideal_state()
    num = sp.lambdify((s, l, n), g, "numpy")
    for sq_db, loss, t_db in [(10, 0.4, 12.0), (6, 0.2, 3.0), (3, 0.0, 0.0)]:
        expected = np.array(num(10 ** (sq_db / 10), loss, 10 ** (t_db / 10)), dtype=float)
        assert np.allclose(ex.ideal_state(sq_db, loss, t_db), expected, atol=1e-12)


@pytest.mark.parametrize("loss", [0.4, 0.5, 0.6])
@pytest.mark.parametrize("sq_db", [6.0, 10.0])
def test_crossing_matches_closed_form(sq_db, loss):
    grid = np.linspace(0, 60, 200)
    expected = 10 * math.log10((1 + loss) / (3 * loss - 1))
    assert ex.thermal_crossing(sq_db, loss, grid) == pytest.approx(expected, abs=1e-6)


def test_crossing_at_loss_04_independent_of_squeezing():
    grid = np.linspace(0, 60, 200)
    a = ex.thermal_crossing(6, 0.4, grid)
    b = ex.thermal_crossing(10, 0.4, grid)
    assert abs(a - b) <= 0.05
    assert a == pytest.approx(10 * math.log10(7), abs=1e-6)


@pytest.mark.parametrize("loss", [0.0, 0.2, 0.3, 0.33])
def test_no_crossing_below_threshold(loss):
    grid = np.linspace(0, 60, 200)
    assert not ex.crossing_exists(10, loss, grid)
    assert ex.thermal_crossing(10, loss, grid) is None
    assert np.all(ex.ppt_vs_thermal(10, loss, grid)[:, 2] < 1)


@pytest.mark.parametrize("sq_db", [6.0, 10.0])
def test_loss_threshold(sq_db):
    assert ex.loss_threshold(sq_db, np.linspace(0, 60, 200)) == pytest.approx(1 / 3, abs=0.005)


def test_b_and_c_symmetric():
    vals = ex.ppt_vs_thermal(10, 0.5, np.linspace(0, 60, 50))
    assert np.max(np.abs(vals[:, 1] - vals[:, 2])) <= 1e-8


def test_fig3_result_layout():
    res = ex.fig3((10.0,), (0.2, 0.4), np.linspace(0, 20, 5))
    assert res.header() == ["thermal_db", "ppt_C_sq10dB_loss0.2", "ppt_C_sq10dB_loss0.4"]
    rows = list(res.rows())
    assert len(rows) == 5 and all(len(r) == 3 for r in rows)
    assert res.crossings[(10.0, 0.2)] is None
    assert res.max_bc_asymmetry() <= 1e-8


def test_protocol_with_experimental_inputs():
    g = prepare_three_mode(data.SQUEEZED_INPUT, data.VACUUM_INPUT, data.HOT_SQUEEZED_INPUT)
    rep = ex.run_protocol(g)
    a, b, c = rep.ppt
    assert a < 1 <= min(b, c)
    assert rep.physical and rep.class_iii
    assert rep.duan < 4
    assert rep.success and rep.verdict == ex.SUCCESS


def test_protocol_on_measured_matrix(gamma_m):
    rep = ex.run_protocol(gamma_m)
    assert rep.class_iii and rep.duan < 4
    doc = rep.to_json()
    assert doc["verdict"] == ex.SUCCESS
    assert doc["separable"] == {"A": False, "B": True, "C": True}
    assert {"ppt_A", "ppt_B", "ppt_C", "mu0", "phi_deg", "duan", "physical"} <= set(doc)


def test_protocol_fails_for_vacuum_inputs():
    rep = ex.run_protocol(np.eye(6))
    assert not rep.class_iii and not rep.success
    assert rep.verdict == ex.FAILURE


def test_loss_band_summary(gamma_m):
    rows = loss_sweep(gamma_m, np.linspace(0, 0.3, 61))
    summary = ex.loss_band_summary(rows, data.DETECTION_LOSS_BAND)
    assert summary["rows"] == 33
    assert summary["min_muB"] > 1 and summary["min_muC"] > 1 and summary["max_muA"] < 1
    assert summary["all_physical"]
    assert ex.loss_band_summary(rows, (0.5, 0.6))["rows"] == 0


def test_figs2(gamma_m, eta):
    res = ex.figs2(gamma_m, eta, 0.25 * np.arange(41), 0.75)
    rows = list(res.rows())
    assert len(rows) == 41 and all(len(r) == len(res.header) for r in rows)
    assert res.plain.threshold_deg == pytest.approx(7.0, abs=0.5)
    assert rows[0][0] == 0 and rows[0][3] == pytest.approx(min(ppt_values(data.GAMMA_LOSS_CORRECTED)[1:]), abs=0.01)
