"""Separability classification of three-mode Gaussian states.

A state is fully inseparable when some (equivalently, by symmetry of the
states treated here, any) single-mode partial transposition violates the
physicality bound.  States passing all partial-transposition tests are
either biseparable or fully separable; the latter is decided by a convex
feasibility problem on two 2x2 Schur complements of the covariance matrix.
Closed-form critical-noise boundaries are provided for the fully symmetric
family in its asymptotic state.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import PiecewiseMismatchError, ResonanceError, SingularSystemError
from .gaussian import (min_eigenvalue_hermitian, partial_transpose,
                       pt_symplectic_form, symplectic_form)
from .evolution import RESONANCE_EPS, build_symmetric_gamma, symmetric_entries


class StateClass(enum.Enum):
    FULLY_INSEPARABLE = "fully_inseparable"
    BISEPARABLE = "biseparable"
    FULLY_SEPARABLE = "fully_separable"

    @property
    def separability_rank(self):
        """0 = fully inseparable, 1 = biseparable, 2 = fully separable."""
        return _CLASS_ORDER.index(self)


_CLASS_ORDER = [StateClass.FULLY_INSEPARABLE, StateClass.BISEPARABLE,
                StateClass.FULLY_SEPARABLE]


@dataclass(frozen=True)
class Classification:
    label: StateClass
    marginal: bool
    ppt: tuple
    min_eigs: tuple = None
    method: str = "spectral+analytic"


@dataclass(frozen=True)
class SchurPair:
    """The two 2x2 Hermitian Schur complements used by the full-separability
    test: k from the physical two-mode form and kt from the partially
    transposed one."""

    k: np.ndarray
    kt: np.ndarray

    @property
    def u(self):
        return float(self.k[0, 0].real)

    @property
    def v(self):
        return complex(self.k[0, 1])

    @property
    def w(self):
        return float(self.k[1, 1].real)

    @property
    def ut(self):
        return float(self.kt[0, 0].real)

    @property
    def vt(self):
        return complex(self.kt[0, 1])

    @property
    def wt(self):
        return float(self.kt[1, 1].real)

    @property
    def trace_k(self):
        return self.u + self.w

    @property
    def trace_kt(self):
        return self.ut + self.wt

    @property
    def det_k(self):
        return self.u * self.w - abs(self.v) ** 2

    @property
    def det_kt(self):
        return self.ut * self.wt - abs(self.vt) ** 2

    @property
    def l_vec(self):
        return np.array([self.u - self.w, 2.0 * self.v.real])

    @property
    def lt_vec(self):
        return np.array([self.ut - self.wt, 2.0 * self.vt.real])


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    marginal: bool
    witness: tuple = None
    method: str = "analytic"


def ppt_min_eig(cm, mode):
    """Smallest eigenvalue of the partially transposed matrix plus iJ."""
    flipped = partial_transpose(cm, mode)
    j = symplectic_form(cm.modes)
    return min_eigenvalue_hermitian(flipped.entries + 1j * j)


def ppt_test(cm, mode, tol=1e-9):
    """Partial-transposition test for one mode: passes iff the flipped
    matrix stays physical within tol.  Failure witnesses entanglement
    across that mode's cut."""
    return ppt_min_eig(cm, mode) >= -tol


def schur_complements(cm, cond_limit=1e12):
    """Schur complements of the mode-1 block against the two-mode rest.

    k = A - C (B - iJ)^(-1) C^T and kt = A - C (B - iJt)^(-1) C^T, with
    Jt the two-mode form with its second block negated.  Both are
    Hermitian up to roundoff and symmetrized on return.
    """
    if cm.modes != 3:
        raise ValueError("Schur complements are defined for three-mode states")
    g = cm.entries
    a = g[:2, :2]
    c = g[:2, 2:]
    b = g[2:, 2:]
    if np.max(np.abs(c)) <= 1e-14 * max(1.0, float(np.max(np.abs(g)))):
        # Uncoupled first mode: both complements equal A and the two-mode
        # block never needs inverting (it is singular for pure reductions).
        k = a.astype(complex)
        return SchurPair(k, k.copy())
    out = []
    for j in (symplectic_form(2), pt_symplectic_form(2, 2)):
        denom = b - 1j * j
        cond = float(np.linalg.cond(denom))
        if not math.isfinite(cond) or cond > cond_limit:
            raise SingularSystemError(
                f"two-mode block minus iJ is near-singular (cond ~ {cond:.3e})",
                condition=cond)
        k = a - c @ np.linalg.solve(denom, c.T)
        scale = max(1.0, float(np.max(np.abs(k))))
        if np.max(np.abs(k - k.conj().T)) > 1e-8 * scale:
            raise SingularSystemError("Schur complement lost Hermiticity")
        out.append(0.5 * (k + k.conj().T))
    return SchurPair(out[0], out[1])


def feasibility_slacks(pair, y, z):
    """Minimum slack of the three feasibility inequalities at points (y, z).

    Positive slack means the point satisfies all three constraints:
    the disk min(tr k, tr kt) >= 2x and the two ellipse conditions
    det + 1 + L.(y, z) >= x * tr, with x = sqrt(1 + y^2 + z^2).
    """
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    x = np.sqrt(1.0 + y * y + z * z)
    m = min(pair.trace_k, pair.trace_kt)
    l, lt = pair.l_vec, pair.lt_vec
    s1 = m - 2.0 * x
    s2 = pair.det_k + 1.0 + l[0] * y + l[1] * z - x * pair.trace_k
    s3 = pair.det_kt + 1.0 + lt[0] * y + lt[1] * z - x * pair.trace_kt
    return np.minimum(s1, np.minimum(s2, s3))


def _ellipse_interval(trace, slope, offset):
    """The y-interval of {y: trace*sqrt(1+y^2) <= slope*y + offset}, trace > 0.

    Returns (lo, hi) with infinities for half-lines, or None when empty.
    """
    t, s, d = trace, slope, offset
    degtol = 1e-12 * max(t, abs(s), 1.0)
    if t > abs(s) + degtol:
        gap = d * d + s * s - t * t
        if gap < 0:
            return None
        aq = t * t - s * s
        bq = -2.0 * s * d
        cq = t * t - d * d
        disc = 4.0 * t * t * gap
        if disc <= 0:
            r = -bq / (2.0 * aq)
            return (r, r)
        sq = math.sqrt(disc)
        qf = -0.5 * (bq + math.copysign(sq, bq if bq != 0.0 else 1.0))
        r1 = qf / aq
        r2 = cq / qf
        return (min(r1, r2), max(r1, r2))
    if abs(t - abs(s)) <= degtol:
        # Slope matches the asymptote: one-sided crossing, empty when d <= 0.
        if d <= 0:
            return None
        ystar = (t * t - d * d) / (2.0 * t * d)
        return (ystar, math.inf) if s > 0 else (-math.inf, -ystar)
    # |slope| exceeds trace: the constraint holds on one half-line.
    aq = t * t - s * s
    bq = -2.0 * s * d
    cq = t * t - d * d
    sq = math.sqrt(bq * bq - 4.0 * aq * cq)
    qf = -0.5 * (bq + math.copysign(sq, bq if bq != 0.0 else 1.0))
    roots = [qf / aq]
    if qf != 0.0:
        roots.append(cq / qf)
    valid = [r for r in roots
             if s * r + d >= -1e-9 * (abs(s * r) + abs(d) + 1.0)]
    if not valid:
        valid = roots
    return (max(valid), math.inf) if s > 0 else (-math.inf, min(valid))


def _analytic_feasible(pair, eps):
    """Feasibility decision with every constraint relaxed by eps.

    The Schur pair must have Re(v) = Re(vt) = 0, which makes all three
    constraint sets even in z, so the z = 0 section decides feasibility.
    A boundary-curve crossing inside the disk is used as a shortcut and
    provides an off-section witness.
    """
    m = min(pair.trace_k, pair.trace_kt) + eps
    if m < 2.0:
        return False, None
    radius = math.sqrt(max(m * m / 4.0 - 1.0, 0.0))
    tk, tkt = pair.trace_k, pair.trace_kt
    sk, skt = pair.u - pair.w, pair.ut - pair.wt
    dk, dkt = pair.det_k + 1.0 + eps, pair.det_kt + 1.0 + eps

    det_lines = -tk * skt + tkt * sk
    if abs(det_lines) > 1e-9 * max(1.0, abs(tk * skt), abs(tkt * sk)):
        x0 = (-dk * skt + dkt * sk) / det_lines
        y0 = (tk * dkt - tkt * dk) / det_lines
        zsq = x0 * x0 - 1.0 - y0 * y0
        if zsq >= 0.0 and 2.0 * x0 <= m:
            return True, (y0, math.sqrt(zsq))

    if tk <= 0.0 or tkt <= 0.0:
        return False, None
    iv1 = _ellipse_interval(tk, sk, dk)
    if iv1 is None:
        return False, None
    iv2 = _ellipse_interval(tkt, skt, dkt)
    if iv2 is None:
        return False, None
    lo = max(iv1[0], iv2[0], -radius)
    hi = min(iv1[1], iv2[1], radius)
    if lo > hi:
        return False, None
    return True, (0.5 * (lo + hi), 0.0)


def fully_separable_test(pair, tol=1e-9, grid_cfg=None):
    """Decide whether a witness point for full separability exists.

    Callers are expected to have verified the partial-transposition tests
    already.  The primary path is the exact analytic reduction available
    when Re(v) = Re(vt) = 0; otherwise a refining grid search is used.
    The marginal flag is set when tightening/relaxing every constraint by
    tol flips the decision.
    """
    scale = max(1.0, float(np.max(np.abs(pair.k))), float(np.max(np.abs(pair.kt))))
    if max(abs(pair.v.real), abs(pair.vt.real)) <= 1e-11 * scale:
        feasible, witness = _analytic_feasible(pair, 0.0)
        relaxed, _ = _analytic_feasible(pair, tol)
        tightened, _ = _analytic_feasible(pair, -tol)
        return FeasibilityResult(feasible, relaxed != tightened, witness, "analytic")
    from .oracles import GridConfig, grid_feasibility_detail
    cfg = grid_cfg if grid_cfg is not None else GridConfig()
    feasible, witness, best_slack = grid_feasibility_detail(pair, cfg)
    marginal = best_slack is not None and abs(best_slack) < tol
    return FeasibilityResult(feasible, marginal, witness, "grid")


def ppt_symmetric_value(entries):
    """Decision polynomial of the symmetric-family partial-transposition test:

        1 - (a'b' + 8 b'c' + 8 a'd' + c'd')/9 + a'b'c'd'.

    Non-negative iff the partially transposed state stays physical.
    """
    ap, bp, cp, dp = entries.aprime, entries.bprime, entries.cprime, entries.dprime
    if not all(map(math.isfinite, (ap, bp, cp, dp))):
        raise ValueError("primed entries must be finite; use the asymptotic "
                         "boundary formulas for diverging channels")
    return 1.0 - (ap * bp + 8.0 * bp * cp + 8.0 * ap * dp + cp * dp) / 9.0 \
        + ap * bp * cp * dp


def ppt_symmetric_condition(entries):
    """Sign test of :func:`ppt_symmetric_value` (True = PPT holds)."""
    return ppt_symmetric_value(entries) >= 0.0


def intersection_condition(entries):
    """Existence test for the crossing of the two ellipse boundary curves.

    Finite time: -c d [(a-c)(b+2d) - 1][(b-d)(a+2c) - 1] >= 0; in the
    asymptotic state this reduces to (a'd' - 1)(c'b' - 1) >= 0.
    """
    if entries.asymptotic:
        return (entries.aprime * entries.dprime - 1.0) \
            * (entries.cprime * entries.bprime - 1.0) >= 0.0
    expr = -entries.c * entries.d \
        * (entries.cprime * entries.bprime - 1.0) \
        * (entries.dprime * entries.aprime - 1.0)
    return expr >= 0.0


def fully_sep_boundary(zeta0, zeta1):
    """Critical squared noise factor for full separability of the asymptotic
    state: (1+zeta0)(1-zeta1) when zeta0 > zeta1, mirrored otherwise."""
    if zeta0 > zeta1:
        return (1.0 + zeta0) * (1.0 - zeta1)
    if zeta0 < zeta1:
        return (1.0 - zeta0) * (1.0 + zeta1)
    return 1.0 - zeta0 * zeta0


def _bisep_weak(z0, z1):
    rad = 288.0 + z0 * z0 + 34.0 * z0 * z1 + z1 * z1
    return 1.0 - (z0 * z0 + 16.0 * z0 * z1 + z1 * z1) / 18.0 \
        + abs(z0 - z1) * math.sqrt(rad) / 18.0


def _bisep_strong_edge(zp, zm):
    # Shared form of the two both-channels-amplified corners.
    return 8.0 * (1.0 + zp) * (1.0 - zm) / 9.0


_BISEP_PIECES = (
    # (applicability over region codes, value or None)
    (lambda c0, c1: abs(c0) <= 1 and abs(c1) <= 1, _bisep_weak),
    (lambda c0, c1: c0 >= 1 and abs(c1) <= 1,
     lambda z0, z1: (1.0 - z1) * (1.0 + z0) - (1.0 - z1) * (z0 - z1) / 9.0),
    (lambda c0, c1: c0 >= 1 and c1 <= -1,
     lambda z0, z1: _bisep_strong_edge(z0, z1)),
    (lambda c0, c1: abs(c0) <= 1 and c1 <= -1,
     lambda z0, z1: (1.0 - z1) * (1.0 + z0) - (1.0 + z0) * (z0 - z1) / 9.0),
    (lambda c0, c1: abs(c0) <= 1 and c1 >= 1,
     lambda z0, z1: (1.0 + z1) * (1.0 - z0) - (1.0 - z0) * (z1 - z0) / 9.0),
    (lambda c0, c1: c0 <= -1 and abs(c1) <= 1,
     lambda z0, z1: (1.0 + z1) * (1.0 - z0) - (1.0 + z1) * (z1 - z0) / 9.0),
    (lambda c0, c1: c0 <= -1 and c1 >= 1,
     lambda z0, z1: _bisep_strong_edge(z1, z0)),
    (lambda c0, c1: c0 >= 1 and c1 >= 1, None),
    (lambda c0, c1: c0 <= -1 and c1 <= -1, None),
)


def _region_code(z, seam_tol):
    if abs(z - 1.0) <= seam_tol:
        return 1
    if abs(z + 1.0) <= seam_tol:
        return -1
    if z > 1.0:
        return 2
    if z < -1.0:
        return -2
    return 0


def bisep_boundary(zeta0, zeta1, seam_tol=1e-12, consistency_tol=1e-9):
    """Critical squared noise factor for the asymptotic state to pass the
    partial-transposition test, or None where no noise is needed at all
    (both channels amplified the same way: always separable).

    Points on a |zeta| = 1 seam are evaluated through every adjacent piece;
    the pieces are continuous across the seams and a disagreement beyond
    ``consistency_tol`` raises PiecewiseMismatchError.
    """
    c0 = _region_code(zeta0, seam_tol)
    c1 = _region_code(zeta1, seam_tol)
    values = []
    unrestricted = False
    for applies, value in _BISEP_PIECES:
        # Seam codes +-1 belong to the closures of every adjacent piece.
        hit = applies(c0 if abs(c0) != 2 else (2 if c0 > 0 else -2),
                      c1 if abs(c1) != 2 else (2 if c1 > 0 else -2))
        if not hit:
            continue
        if value is None:
            unrestricted = True
        else:
            values.append(value(zeta0, zeta1))
    if values:
        spread = max(values) - min(values)
        if spread > consistency_tol * max(1.0, max(abs(v) for v in values)):
            raise PiecewiseMismatchError(
                f"threshold pieces disagree at zeta = ({zeta0}, {zeta1}): {values}")
        if unrestricted and max(abs(v) for v in values) > consistency_tol:
            raise PiecewiseMismatchError(
                f"threshold pieces conflict with the unrestricted domain at "
                f"zeta = ({zeta0}, {zeta1}): {values}")
        return values[0]
    return None


def classify(cm, tol=1e-9):
    """Three-way classification of a physical three-mode covariance matrix."""
    eigs = tuple(ppt_min_eig(cm, j) for j in (1, 2, 3))
    flags = tuple(e >= -tol for e in eigs)
    worst = min(eigs)
    ppt_marginal = abs(worst) < tol
    if worst < -tol:
        return Classification(StateClass.FULLY_INSEPARABLE, ppt_marginal,
                              flags, eigs, "spectral")
    # All partial transpositions pass (within the band when marginal).
    pair = schur_complements(cm)
    fs = fully_separable_test(pair, tol)
    label = StateClass.FULLY_SEPARABLE if fs.feasible else StateClass.BISEPARABLE
    return Classification(label, ppt_marginal or fs.marginal, flags, eigs,
                          "spectral+" + fs.method)


def classify_family(family, tol=1e-9):
    """Classify a symmetric-family state.

    Finite times (and the asymptotic weak-amplification state, whose
    covariance matrix is finite) go through the spectral + feasibility
    path on the explicit matrix; the asymptotic strong-amplification
    state is decided by the closed-form critical-noise thresholds.
    """
    z0, z1 = family.zeta0, family.zeta1
    if math.isinf(family.tprime) and max(abs(z0), abs(z1)) >= 1.0 - RESONANCE_EPS:
        if abs(abs(z0) - 1.0) < RESONANCE_EPS or abs(abs(z1) - 1.0) < RESONANCE_EPS:
            raise ResonanceError(
                f"asymptotic state undefined at |zeta| = 1 (zetas {z0}, {z1})")
        x = family.nprime ** 2
        fs_crit = fully_sep_boundary(z0, z1)
        bs_crit = bisep_boundary(z0, z1)
        if x >= fs_crit:
            marginal = abs(x - fs_crit) < tol
            return Classification(StateClass.FULLY_SEPARABLE, marginal,
                                  (True, True, True), None, "asymptotic-thresholds")
        if bs_crit is None or x >= bs_crit:
            marginal = abs(x - fs_crit) < tol or (bs_crit is not None
                                                  and abs(x - bs_crit) < tol)
            return Classification(StateClass.BISEPARABLE, marginal,
                                  (True, True, True), None, "asymptotic-thresholds")
        return Classification(StateClass.FULLY_INSEPARABLE, abs(x - bs_crit) < tol,
                              (False, False, False), None, "asymptotic-thresholds")
    gamma = build_symmetric_gamma(symmetric_entries(family))
    return classify(gamma, tol)
