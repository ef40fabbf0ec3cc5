import json

import numpy as np
import pytest

from qshape import oracle
from qshape import potentials as pot
from qshape.oracle import GridSpec



def test_ho_rel_diff_tight(ho):
    res = oracle.compare(ho, 4)
    assert [r.n for r in res.rows] == [0, 1, 2, 3]
    assert res.max_rel_diff <= 1e-6


def test_morse_five_levels(morse):
    res = oracle.compare(morse, 5)
    assert res.max_rel_diff <= 1e-5
    assert [r.E_algebraic for r in res.rows] == pytest.approx([0, 9, 17, 24, 30], abs=1e-11)


def test_scarf_small_window():
    m = pot.make_model("Scarf", {"V0": 4.0, "lambda": 1.0})
    res = oracle.compare(m, 3)
    assert len(res.rows) == 3
    assert res.max_rel_diff <= 1e-5


def test_coulomb_gaps(coulomb):
    res = oracle.compare(coulomb, 3)
    assert [r.E_algebraic for r in res.rows] == pytest.approx([0, 0.375, 4 / 9], abs=1e-14)
    assert res.max_rel_diff <= 1e-5


def test_coulomb_higher_l():
    m = pot.make_model("Coulomb", {"Z": 2.0, "L": 1})
    res = oracle.compare(m, 3)
    assert res.max_rel_diff <= 1e-5


def test_ground_state_is_zero(model):
    res = oracle.compare(model, 2)
    assert abs(res.rows[0].E_numeric) <= 1e-5 * res.spectral_scale


def test_second_order_convergence(model):
    # error against the exact level must drop ~4x when h halves
    levels = min(4, pot.bound_state_count(model) + 1)
    if model.kind is pot.PotentialKind.COULOMB:
        levels = 2
    grid = oracle.default_grid(model)
    exact = model.hbar_omega * np.array(pot.energy_ladder(model, levels - 1))
    e0 = oracle.solve_spectrum(model, grid, levels)
    e1 = oracle.solve_spectrum(model, oracle.refine(grid), levels)
    err0, err1 = np.abs(e0 - exact), np.abs(e1 - exact)
    assert np.all(err0 / err1 >= oracle.RICHARDSON_FACTOR)


def test_raw_solution_is_sorted(morse):
    e = oracle.solve_spectrum(morse, oracle.default_grid(morse), 5)
    assert np.all(np.diff(e) > 0)


def test_coarse_grid_gets_refined(ho):
    vals, used = oracle.converged_spectrum(ho, 3, GridSpec(-12.0, 12.0, 200))
    assert used.points > 200
    assert vals == pytest.approx([0, 1, 2], abs=1e-5)


def test_unconverged_grid_raises():
    # a well much narrower than h is outside the asymptotic regime
    m = pot.make_model("HarmonicOscillator", {"omega": 1000.0})
    with pytest.raises(oracle.GridConvergenceError):
        oracle.converged_spectrum(m, 3, GridSpec(-12.0, 12.0, 200), max_doublings=0)


def test_zero_levels(morse):
    res = oracle.compare(morse, 0)
    assert res.rows == ()
    assert res.to_csv() == "n,E_algebraic,E_numeric,rel_diff\n"
    assert res.max_rel_diff == 0.0


def test_too_many_levels():
    m = pot.make_model("Scarf", {"V0": 4.0, "lambda": 1.0})
    with pytest.raises(ValueError):
        oracle.compare(m, 4)
    with pytest.raises(ValueError):
        oracle.compare(m, -1)


def test_coulomb_needs_radial_grid(coulomb):
    with pytest.raises(ValueError):
        oracle.solve_spectrum(coulomb, GridSpec(-10.0, 10.0, 400), 2)


def test_grid_validation():
    with pytest.raises(ValueError):
        GridSpec(1.0, 0.0)
    with pytest.raises(ValueError):
        GridSpec(0.0, 1.0, 10)
    with pytest.raises(ValueError):
        GridSpec(-1.0, 1.0, 400, radial=True)
    g = GridSpec(0.0, 1.0, 999)
    assert g.h == pytest.approx(1e-3)
    assert g.nodes()[0] == pytest.approx(1e-3) and g.nodes()[-1] == pytest.approx(0.999)


def test_serialization(ho):
    res = oracle.compare(ho, 2)
    lines = res.to_csv().splitlines()
    assert lines[0] == "n,E_algebraic,E_numeric,rel_diff"
    assert lines[1].startswith("0,0,")
    recs = json.loads(res.to_json())
    assert recs[1]["E_algebraic"] == 1.0
    assert set(recs[0]) == {"n", "E_algebraic", "E_numeric", "rel_diff"}
