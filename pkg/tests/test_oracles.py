import math

import numpy as np
import pytest

import trisep as ts
from trisep.errors import BracketError
from trisep.oracles import (GridConfig, OdeConfig, boundary_bisection,
                            grid_feasibility, grid_feasibility_detail,
                            rk4_propagator, rk4_propagator_batch)
from trisep.separability import SchurPair


def test_rk4_pure_decay():
    bath = ts.BathParams(np.array([1.0, 2.0, 0.5]), np.zeros(3))
    p = rk4_propagator(np.zeros((3, 3)), bath, 1.5, OdeConfig(1e-3))
    expected = np.diag(np.exp(-0.5 * bath.rates * 1.5))
    assert np.max(np.abs(p.m - expected)) < 1e-10
    assert np.max(np.abs(p.n)) < 1e-14


def test_rk4_matches_scalar_closed_form():
    bath = ts.BathParams.uniform(1, 1.0, 0.0)
    p = rk4_propagator(np.array([[0.3]]), bath, 2.0, OdeConfig(1e-3))
    assert abs(p.m[0, 0] - math.exp(-1.0) * math.cosh(0.6)) < 1e-9
    assert abs(p.n[0, 0] + math.exp(-1.0) * math.sinh(0.6)) < 1e-9
    with pytest.raises(ValueError):
        OdeConfig(0.0)


def test_rk4_fourth_order_convergence():
    rng = np.random.default_rng(2)
    eta = rng.uniform(-1, 1, (3, 3))
    eta = 0.5 * (eta + eta.T)
    bath = ts.BathParams.uniform(3, 1.0, 0.0)
    exact = ts.propagator_equal_damping(eta, 1.0, 1.0)
    coarse = rk4_propagator(eta, bath, 1.0, OdeConfig(2e-2))
    fine = rk4_propagator(eta, bath, 1.0, OdeConfig(1e-2))
    e1 = np.max(np.abs(coarse.m - exact.m))
    e2 = np.max(np.abs(fine.m - exact.m))
    assert 10.0 < e1 / e2 < 25.0


def test_rk4_batch_matches_single():
    rng = np.random.default_rng(6)
    etas = rng.uniform(-1, 1, (4, 3, 3))
    etas = 0.5 * (etas + np.transpose(etas, (0, 2, 1)))
    rates = rng.uniform(0.5, 2.0, (4, 3))
    snaps = rk4_propagator_batch(etas, rates, (0.5, 1.0), 1e-3)
    for k in range(4):
        single = rk4_propagator(etas[k], ts.BathParams(rates[k], np.zeros(3)),
                                1.0, OdeConfig(1e-3))
        assert np.max(np.abs(snaps[1.0][0][k].real - single.m)) < 1e-12
        assert np.max(np.abs(snaps[1.0][1][k].real - single.n)) < 1e-12


def test_grid_feasibility_trivial_pairs():
    eye_pair = SchurPair(np.eye(2, dtype=complex), np.eye(2, dtype=complex))
    ok, witness = grid_feasibility(eye_pair)
    assert ok and abs(witness[0]) < 1e-9 and abs(witness[1]) < 1e-9
    half = SchurPair(0.5 * np.eye(2, dtype=complex), 0.5 * np.eye(2, dtype=complex))
    ok2, witness2 = grid_feasibility(half)
    assert not ok2 and witness2 is None


def test_grid_feasibility_family_threshold():
    for n2, expected in ((2.6, True), (2.45, False)):
        fam = ts.SymmetricFamily.from_zetas(0.8, -0.4, math.sqrt(n2), math.inf)
        g = ts.build_symmetric_gamma(ts.symmetric_entries(fam))
        ok, witness = grid_feasibility(ts.schur_complements(g))
        assert ok == expected
        if ok:
            assert ts.feasibility_slacks(ts.schur_complements(g), *witness) >= -1e-12


def test_grid_feasibility_monotone_under_refinement():
    fam = ts.SymmetricFamily.from_zetas(0.8, -0.4, math.sqrt(2.6), math.inf)
    pair = ts.schur_complements(ts.build_symmetric_gamma(ts.symmetric_entries(fam)))
    previous = None
    for levels in (3, 4, 5, 6):
        ok, _, slack = grid_feasibility_detail(pair, GridConfig(levels=levels))
        if previous is not None and previous:
            assert ok
        previous = ok
    with pytest.raises(ValueError):
        GridConfig(resolution=32)


def test_boundary_bisection_reproduces_thresholds():
    def fullsep_pred(n2):
        fam = ts.SymmetricFamily.from_zetas(0.8, -0.4, math.sqrt(n2), math.inf)
        g = ts.build_symmetric_gamma(ts.symmetric_entries(fam))
        return ts.classify(g).label is ts.StateClass.FULLY_SEPARABLE

    found = boundary_bisection(fullsep_pred, 1.0, 6.0, xtol=1e-6)
    assert abs(found - 2.52) < 1e-3

    def ppt_pred(n2):
        fam = ts.SymmetricFamily.from_zetas(0.8, -0.4, math.sqrt(n2), math.inf)
        g = ts.build_symmetric_gamma(ts.symmetric_entries(fam))
        return ts.ppt_min_eig(g, 1) >= 0

    found2 = boundary_bisection(ppt_pred, 1.0, 6.0, xtol=1e-6)
    assert abs(found2 - ts.bisep_boundary(0.8, -0.4)) < 1e-3


def test_boundary_bisection_bracket_error_on_product_family():
    def pred(n2):
        fam = ts.SymmetricFamily.from_zetas(0.5, 0.5, math.sqrt(n2), math.inf)
        g = ts.build_symmetric_gamma(ts.symmetric_entries(fam))
        return ts.classify(g).label is ts.StateClass.FULLY_SEPARABLE

    with pytest.raises(BracketError):
        boundary_bisection(pred, 1.0, 6.0)
