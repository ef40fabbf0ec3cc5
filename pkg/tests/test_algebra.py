import json

import numpy as np
import pytest

from qshape import algebra
from qshape import potentials as pot
from qshape import spectra
from qshape.qnum import q_bracket

from conftest import catalog_model

Q_LIST = [0.8, 1.1, 1.5]


def n_eff(model, N=8):
    return min(N, pot.bound_state_count(model) + 1)


def test_ho_B_is_fock_creation(ho):
    Bp, Bm = algebra.build_B(ho, 6)
    a = algebra.fock_annihilation(6)
    assert np.array_equal(Bm, a)
    assert np.array_equal(Bp, a.T)


def test_minus_is_transpose_of_plus(model):
    N = n_eff(model)
    pairs = [
        algebra.build_B(model, N),
        algebra.build_Bq(model, 1.3, N),
        algebra.build_C(model, 1.3, N),
        algebra.build_D(model, 1.3, N),
        algebra.build_S(model, 1.3, N),
    ]
    for plus, minus in pairs:
        assert np.array_equal(minus, plus.T)
        assert np.count_nonzero(np.triu(plus)) == 0


def test_hamiltonian_diagonal(model):
    N = n_eff(model)
    e = np.array(pot.energy_ladder(model, N - 1))
    Bp, Bm = algebra.build_B(model, N)
    H = model.hbar_omega * Bp @ Bm
    assert np.max(np.abs(H - np.diag(model.hbar_omega * e))) <= 1e-12 * model.hbar_omega * max(1, e[-1])

    Bqp, Bqm = algebra.build_Bq(model, 1.2, N)
    Hq = Bqp @ Bqm
    assert np.allclose(Hq, np.diag(q_bracket(e, 1.2)), rtol=1e-13, atol=1e-13)


def test_deformed_commutator_diagonal(model):
    N = n_eff(model)
    q = 0.9
    e = np.array(pot.energy_ladder(model, N - 1))
    Bqp, Bqm = algebra.build_Bq(model, q, N)
    comm = Bqm @ Bqp - Bqp @ Bqm
    inner = np.diag(comm)[: N - 1]
    assert np.allclose(inner, q_bracket(e[1:], q) - q_bracket(e[:-1], q), rtol=1e-12, atol=1e-13)


def test_smodel_commutator_ho(ho):
    q = 1.2
    Sp, Sm = algebra.build_S(ho, q, 8)
    comm = Sm @ Sp - Sp @ Sm
    expected = [q ** (2 * k + 3) for k in range(7)]
    assert np.allclose(np.diag(comm)[:7], expected, rtol=1e-12)
    assert algebra.verify_relation("smodel", ho, q, 8).max_residual <= 1e-11


def test_smodel_hamiltonian_equals_both_paths(model):
    N = n_eff(model)
    q = 1.3
    Sp, Sm = algebra.build_S(model, q, N)
    d = np.diag(Sp @ Sm)
    for n in range(N):
        assert d[n] == pytest.approx(spectra.s_model_energy_sum(model, q, n), rel=1e-11, abs=1e-14)
        assert d[n] == pytest.approx(spectra.s_model_energy_closed(model, q, n), rel=1e-11, abs=1e-14)


def test_diag_rule(morse):
    D = algebra.build_diag(morse, lambda k: pot.ladder_remainder(morse, k), 0, 5)
    assert np.all(D.valid)
    assert D.values == pytest.approx([pot.remainder(morse, n + 1) for n in range(5)])
    D1 = algebra.build_diag(morse, lambda k: float(k), 3, 5)
    assert list(D1.valid) == [False, False, True, True, True]
    assert list(D1.values[2:]) == [0.0, 1.0, 2.0]


def test_diag_rule_coulomb_domain(coulomb):
    # ladder index 0 is a_{-1} = -1 for L = 0: outside the domain
    D = algebra.build_diag(coulomb, lambda k: pot.ladder_remainder(coulomb, k), 1, 4)
    assert list(D.valid) == [False, True, True, True]
    assert np.diag(D.matrix())[0] == 0.0


def test_std_plus_morse_example(morse):
    assert algebra.verify_relation("std+", morse, 1.1, 8).max_residual <= 1e-11


@pytest.mark.parametrize("q", Q_LIST)
def test_all_relations_pass(model, q):
    for rep in algebra.verify_batch(model, [q], 8):
        assert rep.passed, (rep.relation_id, rep.max_residual)
        assert rep.interior >= 1


def test_three_level_window():
    # Scarf V0 = 4 holds three levels: every relation except the two
    # S-towers still has an interior block
    small = pot.make_model("Scarf", {"V0": 4.0, "lambda": 1.0})
    for rel in algebra.RELATIONS:
        if rel in ("s_tower", "s_tower2"):
            continue
        for q in Q_LIST:
            rep = algebra.verify_relation(rel, small, q, 8)
            assert rep.N == 3 and rep.passed


def test_interior_size(morse):
    reps = {r.relation_id: r for r in algebra.verify_batch(morse, [1.1], 8)}
    assert reps["cb1"].interior == 7
    # reach 2 drops two top states; G with base index 2 has no value on state 0
    assert reps["s_tower"].interior == 5
    assert reps["s_tower2"].interior == 5


def test_window_clipping():
    scarf = catalog_model("scarf")
    rep = algebra.verify_relation("cb1", scarf, 1.1, 8)
    assert rep.N == 4


def test_ho_reductions_tight(ho, morse):
    for m in (ho, morse):
        for q in (0.7, 1.3):
            for rel in ("ho_std", "ho_Q", "ho_d"):
                assert algebra.verify_relation(rel, m, q, 8).max_residual <= 1e-12


def test_errors(morse):
    with pytest.raises(ValueError, match="N too small for relation band reach"):
        algebra.verify_relation("cb1", morse, 1.1, 3)
    with pytest.raises(KeyError):
        algebra.verify_relation("nope", morse, 1.1, 8)
    with pytest.raises(ValueError):
        algebra.verify_relation("cb1", morse, -1.0, 8)
    small = pot.make_model("Scarf", {"V0": 4.0, "lambda": 1.0})
    with pytest.raises(ValueError, match="N too small"):
        algebra.verify_relation("s_tower", small, 1.1, 8)
    with pytest.raises(ValueError):
        algebra.build_B(morse, 11)


def test_env_tolerance(monkeypatch, morse):
    monkeypatch.setenv("QSHAPE_TOL", "1e-30")
    rep = algebra.verify_relation("std+", morse, 1.1, 8)
    assert rep.tolerance == 1e-30
    assert not rep.passed or rep.max_residual == 0.0
    monkeypatch.setenv("QSHAPE_TOL", "-1")
    with pytest.raises(ValueError):
        algebra.verify_relation("std+", morse, 1.1, 8)


def test_explicit_tol_beats_env(monkeypatch, morse):
    monkeypatch.setenv("QSHAPE_TOL", "1e-30")
    assert algebra.verify_relation("cb1", morse, 1.1, 8, tol=1e-9).tolerance == 1e-9


# -- negative controls: a corrupted operator must be caught ----------------------


def test_corrupted_S_is_detected(monkeypatch, morse):
    real = algebra.build_S

    def skewed(model, q, N):
        plus, minus = real(model, q, N)
        plus = plus * 1.0001
        return plus, plus.T.copy()

    monkeypatch.setattr(algebra, "build_S", skewed)
    rep = algebra.verify_relation("smodel", morse, 1.1, 8)
    assert not rep.passed


def test_wrong_deformation_is_detected(monkeypatch, morse):
    real = algebra.build_Bq
    monkeypatch.setattr(algebra, "build_Bq", lambda m, q, N: real(m, q * 1.001, N))
    assert not algebra.verify_relation("std+", morse, 1.1, 8).passed


def test_report_json(ho):
    reps = algebra.verify_batch(ho, [1.1, 0.8], 6, relations=["cb1", "smodel"])
    recs = json.loads(algebra.reports_to_json(reps))
    assert [r["relation"] for r in recs] == ["cb1", "smodel", "cb1", "smodel"]
    assert set(recs[0]) == {"relation", "model", "q", "N", "interior", "max_residual", "pass"}
    assert recs[0]["pass"] is True
