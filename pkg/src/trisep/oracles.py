"""Independent brute-force verifiers.

These deliberately avoid the closed forms they are used to check: the
propagator equations are integrated with a fixed-step classical RK4 scheme,
full-separability feasibility is decided by a refining grid search over the
witness disk, and phase boundaries are located by bisection over a
classifier predicate.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError
from .evolution import PropagatorPair, _as_sym_matrix
from .separability import feasibility_slacks


@dataclass(frozen=True)
class OdeConfig:
    """Fixed-step RK4 configuration; the step is shrunk if needed so that an
    integer number of steps (at least 10) lands exactly on the horizon."""

    dt: float = 1e-3

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")

    def steps_for(self, t):
        return max(10, int(math.ceil(t / self.dt - 1e-12)))


@dataclass(frozen=True)
class GridConfig:
    """Feasibility search: resolution points per axis, zooming refinement
    levels, and the acceptance slack (slightly permissive so boundary
    witnesses remain reproducible)."""

    resolution: int = 65
    levels: int = 4
    slack_tol: float = -1e-12

    def __post_init__(self):
        if self.resolution < 64:
            raise ValueError("resolution must be at least 64")
        if self.levels < 3:
            raise ValueError("at least 3 refinement levels are required")


def _rk4_steps(eta, rates, t, n_steps, record=()):
    """Integrate dM/dt = -eta* N - Gamma M/2, dN/dt = -eta M - Gamma N/2 from
    (I, 0).  Works on a single (s, s) system or a stacked batch (..., s, s);
    ``record`` maps step indices to snapshot slots."""
    eta = np.asarray(eta, complex)
    eta_c = eta.conj()
    half = 0.5 * np.asarray(rates, float)[..., :, None]
    s = eta.shape[-1]
    shape = eta.shape
    m = np.broadcast_to(np.eye(s, dtype=complex), shape).copy()
    n = np.zeros(shape, complex)
    dt = t / n_steps if n_steps else 0.0
    snapshots = {}
    if 0 in record:
        snapshots[0] = (m.copy(), n.copy())

    def rhs(mm, nn):
        return -eta_c @ nn - half * mm, -eta @ mm - half * nn

    for step in range(n_steps):
        k1m, k1n = rhs(m, n)
        k2m, k2n = rhs(m + 0.5 * dt * k1m, n + 0.5 * dt * k1n)
        k3m, k3n = rhs(m + 0.5 * dt * k2m, n + 0.5 * dt * k2n)
        k4m, k4n = rhs(m + dt * k3m, n + dt * k3n)
        m = m + (dt / 6.0) * (k1m + 2.0 * k2m + 2.0 * k3m + k4m)
        n = n + (dt / 6.0) * (k1n + 2.0 * k2n + 2.0 * k3n + k4n)
        if step + 1 in record:
            snapshots[step + 1] = (m.copy(), n.copy())
    return m, n, snapshots


def rk4_propagator(eta, bath, t, cfg=OdeConfig()):
    """Numerically integrated propagator pair; global error O(dt^4)."""
    eta = _as_sym_matrix(eta)
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if bath.modes != eta.shape[0]:
        raise ValueError("bath and amplification matrix sizes differ")
    if t == 0:
        s = eta.shape[0]
        return PropagatorPair(np.eye(s, dtype=complex), np.zeros((s, s), complex))
    m, n, _ = _rk4_steps(eta, bath.rates, t, cfg.steps_for(t))
    if np.isrealobj(np.asarray(eta)):
        m, n = m.real, n.real
    return PropagatorPair(m, n)


def rk4_propagator_batch(etas, rates, times, dt):
    """Batched RK4 over stacked systems, recording the propagators at several
    horizons in one pass.  ``times`` must be positive multiples of dt; returns
    {time: (M, N)} with leading batch dimensions."""
    times = sorted(times)
    t_max = times[-1]
    n_steps = int(round(t_max / dt))
    record = {}
    for t in times:
        k = int(round(t / dt))
        if abs(k * dt - t) > 1e-12 * max(t, 1.0):
            raise ValueError(f"horizon {t} is not a multiple of dt = {dt}")
        record[k] = t
    _, _, snaps = _rk4_steps(np.asarray(etas, complex), np.asarray(rates, float),
                             t_max, n_steps, record=set(record))
    return {record[k]: mn for k, mn in snaps.items()}


def grid_feasibility_detail(pair, cfg=GridConfig()):
    """Grid/refinement feasibility search returning (feasible, witness,
    best_slack).  The search square always covers the disk allowed by the
    trace constraint and zooms onto the maximal-slack cell; the constraint
    sets are convex, so refinement never fabricates feasibility."""
    m = min(pair.trace_k, pair.trace_kt)
    if m < 2.0:
        # Empty disk: the disk slack is maximal at the origin, so one
        # evaluation settles both the decision and the best slack.
        slack0 = float(feasibility_slacks(pair, 0.0, 0.0))
        return (slack0 >= cfg.slack_tol,
                (0.0, 0.0) if slack0 >= cfg.slack_tol else None,
                slack0)
    radius = math.sqrt(max(m * m / 4.0 - 1.0, 0.0))
    cy, cz, half = 0.0, 0.0, max(radius, 1e-12)
    best_slack = -math.inf
    best_point = (0.0, 0.0)
    for _ in range(cfg.levels):
        ys = np.linspace(cy - half, cy + half, cfg.resolution)
        zs = np.linspace(cz - half, cz + half, cfg.resolution)
        yy, zz = np.meshgrid(ys, zs, indexing="ij")
        slacks = feasibility_slacks(pair, yy, zz)
        idx = np.unravel_index(int(np.argmax(slacks)), slacks.shape)
        level_best = float(slacks[idx])
        if level_best > best_slack:
            best_slack = level_best
            best_point = (float(yy[idx]), float(zz[idx]))
        if best_slack >= cfg.slack_tol:
            return True, best_point, best_slack
        cy, cz = best_point
        cell = 2.0 * half / (cfg.resolution - 1)
        half = 1.5 * cell
    return False, None, best_slack


def grid_feasibility(pair, cfg=GridConfig()):
    """Feasibility decision and witness point (if any) by grid refinement."""
    feasible, witness, _ = grid_feasibility_detail(pair, cfg)
    return feasible, witness


def boundary_bisection(predicate, lo, hi, xtol=1e-6, max_iter=200):
    """Bisect a boolean predicate over [lo, hi]; the predicate must differ
    at the bracket ends.  Returns the crossing within xtol."""
    p_lo = predicate(lo)
    p_hi = predicate(hi)
    if p_lo == p_hi:
        raise BracketError(
            f"predicate does not change over [{lo}, {hi}] (both {p_lo})")
    for _ in range(max_iter):
        if hi - lo <= xtol:
            break
        mid = 0.5 * (lo + hi)
        if predicate(mid) == p_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
