"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; every tolerance is pinned here and matches the library's own
verification suites.
"""

import math
import time

import numpy as np

import trisep as ts
from trisep import commands
from trisep.cli import main as cli_main
from trisep.oracles import GridConfig, boundary_bisection, grid_feasibility, \
    rk4_propagator_batch
from trisep.separability import StateClass
from trisep.verify import (BISEP_BISECTION_PAIRS, FULLSEP_BISECTION_PAIRS,
                           fullsep_predicate, ppt_predicate,
                           suite_ppt_polynomial_vs_spectrum)


def _report(num, ok, detail):
    print(f"\ncriterion {num:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def test_c01_propagator_closed_forms_vs_rk4():
    start = time.perf_counter()
    rng = np.random.default_rng(20260810)
    n_sys = 20
    etas = rng.uniform(-1.0, 1.0, (n_sys, 3, 3))
    etas = 0.5 * (etas + np.transpose(etas, (0, 2, 1)))
    rates_eq = np.ones((n_sys, 3))
    rates_un = rng.uniform(0.5, 2.0, (n_sys, 3))
    horizons = (0.5, 1.0, 3.0)
    snaps_eq = rk4_propagator_batch(etas, rates_eq, horizons, 1e-3)
    snaps_un = rk4_propagator_batch(etas, rates_un, horizons, 1e-3)
    worst = 0.0
    for t in horizons:
        for k in range(n_sys):
            closed = ts.propagator_equal_damping(etas[k], 1.0, t)
            worst = max(worst,
                        float(np.max(np.abs(closed.m - snaps_eq[t][0][k].real))),
                        float(np.max(np.abs(closed.n - snaps_eq[t][1][k].real))))
            closed_un = ts.propagator_real_eta(
                etas[k], ts.BathParams(rates_un[k], np.zeros(3)), t)
            worst = max(worst,
                        float(np.max(np.abs(closed_un.m - snaps_un[t][0][k].real))),
                        float(np.max(np.abs(closed_un.n - snaps_un[t][1][k].real))))
    elapsed = time.perf_counter() - start
    _report(1, worst < 1e-6 and elapsed < 5.0,
            f"20 random systems x 3 horizons, both closed forms vs RK4(dt=1e-3): "
            f"max |err| = {worst:.3e} (< 1e-6), runtime {elapsed:.2f}s (< 5s)")


def test_c02_steady_moments_residuals_and_closed_form():
    rng = np.random.default_rng(414213)
    worst_res = 0.0
    worst_cf = 0.0
    for _ in range(50):
        z0, z1 = rng.uniform(-0.9, 0.9, 2)
        nbar = rng.uniform(0.0, 2.0)
        fam = ts.SymmetricFamily.from_zetas(float(z0), float(z1),
                                            2.0 * nbar + 1.0, math.inf)
        bath = ts.BathParams.uniform(3, 1.0, nbar)
        eta = fam.eta_matrix(1.0)
        solved = ts.steady_alpha_beta(eta, bath)
        worst_res = max(worst_res, *ts.steady_residuals(eta, bath, solved))
        closed = ts.steady_symmetric(float(z0), float(z1), 2.0 * nbar + 1.0)
        worst_cf = max(worst_cf,
                       float(np.max(np.abs(solved.alpha - closed.alpha))),
                       float(np.max(np.abs(solved.beta - closed.beta))))
    _report(2, worst_res < 1e-10 and worst_cf < 1e-10,
            f"50 random parameter sets: max fixed-point residual {worst_res:.3e} "
            f"(< 1e-10), max |solver - closed form| {worst_cf:.3e} (< 1e-10)")


def test_c03_pipeline_consistency_on_grid():
    worst = 0.0
    points = 0
    for z0 in (-0.8, -0.4, 0.0, 0.4, 0.8):
        for z1 in (-0.8, -0.4, 0.0, 0.4, 0.8):
            for nprime in (1.0, 2.0, 3.0):
                for tprime in (0.3, 1.0, 2.5, math.inf):
                    fam = ts.SymmetricFamily.from_zetas(z0, z1, nprime, tprime)
                    bath = ts.BathParams.uniform(3, 1.0, fam.nbar)
                    eta = fam.eta_matrix(1.0)
                    steady = ts.steady_alpha_beta(eta, bath)
                    if math.isinf(tprime):
                        moments = steady
                    else:
                        prop = ts.propagator_equal_damping(eta, 1.0, 2.0 * tprime)
                        moments = ts.evolve_complex_cm(ts.vacuum_moments(3),
                                                       prop, steady)
                    piped = ts.complex_to_real_cm(moments)
                    direct = ts.build_symmetric_gamma(ts.symmetric_entries(fam))
                    worst = max(worst, float(np.max(np.abs(piped.entries
                                                           - direct.entries))))
                    points += 1
    _report(3, worst < 1e-10 and points >= 300,
            f"vacuum -> evolve -> quadrature matrix vs entry formulas on "
            f"{points} grid points (incl. asymptotic): max |diff| = {worst:.3e} "
            f"(< 1e-10)")


def test_c04_ppt_polynomial_vs_spectrum():
    suite = suite_ppt_polynomial_vs_spectrum("full")
    _report(4, suite.passed and suite.checks >= 4000,
            f"20x20x5 grid at t' in (0.5, 2, inf): {suite.detail} "
            f"(threshold: 100% agreement off the 1e-6 band)")


def test_c05_fully_separable_boundary_bisection():
    worst = 0.0
    for z0, z1 in FULLSEP_BISECTION_PAIRS:
        found = boundary_bisection(fullsep_predicate(z0, z1), 1.0, 16.0,
                                   xtol=1e-7)
        expected = ts.fully_sep_boundary(z0, z1)
        worst = max(worst, abs(found - expected))
    _report(5, worst < 1e-3,
            f"{len(FULLSEP_BISECTION_PAIRS)} weak+strong pairs incl. "
            f"(0.8,-0.4)->2.52 and (2,-2)->9: max |bisection - formula| "
            f"= {worst:.3e} (< 1e-3)")


def test_c06_biseparable_boundary_values():
    exact_ok = (abs(ts.bisep_boundary(1.0, -0.5) - 2.75) < 1e-12
                and abs(ts.bisep_boundary(2.0, 0.0) - 25.0 / 9.0) < 1e-12
                and abs(ts.bisep_boundary(2.0, -2.0) - 8.0) < 1e-12)
    worst = 0.0
    for z0, z1 in BISEP_BISECTION_PAIRS:
        found = boundary_bisection(ppt_predicate(z0, z1), 1.0, 16.0, xtol=1e-7)
        worst = max(worst, abs(found - ts.bisep_boundary(z0, z1)))
    _report(6, exact_ok and worst < 1e-3,
            "closed forms exact (2.75, 25/9, 8 to 1e-12); bisection over the "
            f"PPT predicate confirms to {worst:.3e} (< 1e-3)")


def test_c07_three_class_witness():
    labels = {}
    agree = True
    for n2 in (1.0, 2.45, 2.6):
        fam = ts.SymmetricFamily.from_zetas(0.8, -0.4, math.sqrt(n2), math.inf)
        labels[n2] = ts.classify_family(fam).label
        gamma = ts.build_symmetric_gamma(ts.symmetric_entries(fam))
        pair = ts.schur_complements(gamma)
        analytic = ts.fully_separable_test(pair)
        grid_ok, _ = grid_feasibility(pair, GridConfig())
        agree = agree and (analytic.feasible == grid_ok)
    ok = (labels[1.0] is StateClass.FULLY_INSEPARABLE
          and labels[2.45] is StateClass.BISEPARABLE
          and labels[2.6] is StateClass.FULLY_SEPARABLE
          and agree)
    _report(7, ok,
            f"(0.8,-0.4) at n'^2 = 1 / 2.45 / 2.6: "
            f"{labels[1.0].value} / {labels[2.45].value} / {labels[2.6].value}; "
            f"analytic and grid oracles agree at all three points: {agree}")


def test_c08_figure3_containment_and_gap():
    start = time.perf_counter()
    result = commands.figure_data(3)
    elapsed = time.perf_counter() - start
    lines = result.csv.strip().split("\n")[1:]
    diffs = [float(line.split(",")[3]) for line in lines]
    swept_range = 4.0
    max_gap = max(diffs)
    ok = (min(diffs) >= -1e-12 and max_gap < 0.05 * swept_range
          and elapsed < 30.0)
    _report(8, ok,
            f"zero-noise curves: containment holds (min diff {min(diffs):.2e} "
            f">= 0), max gap {max_gap:.6f} (< {0.05 * swept_range}, i.e. 5% of "
            f"the swept range), runtime {elapsed:.2f}s (< 30s)")


def test_c09_monotonicity_in_noise():
    rng = np.random.default_rng(97)
    rays = 0
    monotone = True
    while rays < 50:
        if rays < 40:
            z0, z1 = rng.uniform(-0.85, 0.85, 2)
        else:
            z0, z1 = rng.uniform(-2.0, 2.0, 2)
            if max(abs(z0), abs(z1)) <= 1.05:
                continue
            if min(abs(abs(z0) - 1.0), abs(abs(z1) - 1.0)) < 0.05:
                continue
        crit = ts.fully_sep_boundary(float(z0), float(z1))
        top = max(4.0, 1.5 * crit)
        ranks = []
        for n2 in np.linspace(1.0, top, 10):
            fam = ts.SymmetricFamily.from_zetas(float(z0), float(z1),
                                                math.sqrt(n2), math.inf)
            ranks.append(ts.classify_family(fam).label.separability_rank)
        if any(b < a for a, b in zip(ranks, ranks[1:])):
            monotone = False
        rays += 1
    _report(9, monotone,
            "50 rays of increasing noise at fixed (zeta0, zeta1, t'=inf): "
            "class never moves toward entanglement")


def test_c10_determinism(tmp_path, capsys):
    first = commands.figure_data(3)
    second = commands.figure_data(3)
    p1 = tmp_path / "jobs1.csv"
    p8 = tmp_path / "jobs8.csv"
    assert cli_main(["figure", "3", "--out", str(p1), "--jobs", "1"]) == 0
    assert cli_main(["figure", "3", "--out", str(p8), "--jobs", "8"]) == 0
    capsys.readouterr()
    identical = (first.csv == second.csv and p1.read_bytes() == p8.read_bytes())
    _report(10, identical,
            "figure 3 is byte-identical across repeated runs and across "
            "--jobs 1 vs --jobs 8")
