"""Second-moment dynamics under parametric amplification, amplitude damping
and thermal noise.

The state is tracked through the Hermitian/symmetric blocks (alpha, beta) of
the complex-parameter covariance matrix.  Two closed-form propagators are
provided (equal damping via a conjugated matrix cosh/sinh series, and real
amplification with per-mode damping via matrix exponentials), together with
the steady second moments and the fully symmetric three-mode family where
everything reduces to two scalar channels.

Scalar channels of the symmetric family: with zeta0 = eta0' + 2*eta1' and
zeta1 = eta0' - eta1' (eta' = 2*eta/Gamma, t' = Gamma*t/2, n' = 2*nbar + 1),
the position-like variance of a channel is

    X(z) = exp(2(z-1)t') * (1 - n'/(1-z)) + n'/(1-z)

and the momentum-like variance is

    P(z) = exp(-2(z+1)t') * (1 - n'/(1+z)) + n'/(1+z).

The covariance entries are a = (X(zeta0)+2X(zeta1))/3, c = (X(zeta0)-X(zeta1))/3
(and b, d likewise from P), with primed combinations a' = a+2c = X(zeta0),
c' = a-c = X(zeta1), b' = b+2d = P(zeta0), d' = b-d = P(zeta1).
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import NumericalFailureError, ResonanceError, SingularSystemError
from .gaussian import CovarianceMatrix

# Bath squeezing is taken to be zero (purely thermal bath): the steady-state
# equations are solved with their squeezing source switched off, which is the
# unique choice consistent with the symmetric-family closed forms.
BATH_SQUEEZING = 0.0

RESONANCE_EPS = 1e-13


def coupling_matrix(s):
    """All-ones off-diagonal coupling pattern (1 for i != j, 0 on the diagonal)."""
    return np.ones((s, s)) - np.eye(s)


def _as_sym_matrix(eta, name="eta"):
    m = np.asarray(eta)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(np.asarray(m, complex).imag)):
        raise ValueError(f"{name} entries must be finite")
    scale = max(1.0, float(np.max(np.abs(m))))
    if np.max(np.abs(m - m.T)) > 1e-12 * scale:
        raise ValueError(f"{name} must be symmetric")
    return np.asarray(0.5 * (m + m.T))


@dataclass(frozen=True)
class BathParams:
    """Per-mode damping rates and thermal occupations (both >= 0)."""

    rates: np.ndarray
    nbar: np.ndarray

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.rates, dtype=float))
        n = np.atleast_1d(np.asarray(self.nbar, dtype=float))
        if r.shape != n.shape or r.ndim != 1:
            raise ValueError("rates and nbar must be 1-d arrays of equal length")
        if np.any(r < 0) or np.any(n < 0) or not np.all(np.isfinite(r)) or not np.all(np.isfinite(n)):
            raise ValueError("rates and nbar must be finite and non-negative")
        object.__setattr__(self, "rates", r)
        object.__setattr__(self, "nbar", n)

    @classmethod
    def uniform(cls, s, rate, nbar=0.0):
        return cls(np.full(s, float(rate)), np.full(s, float(nbar)))

    @property
    def modes(self):
        return self.rates.shape[0]

    @property
    def nprime(self):
        """Effective noise factor 2*nbar + 1 per mode."""
        return 2.0 * self.nbar + 1.0


@dataclass(frozen=True)
class PropagatorPair:
    """Time-dependent propagator matrices; M(0) = I and N(0) = 0."""

    m: np.ndarray
    n: np.ndarray

    @property
    def modes(self):
        return self.m.shape[0]

    def is_real(self, tol=1e-14):
        return (np.max(np.abs(np.asarray(self.m, complex).imag)) <= tol
                and np.max(np.abs(np.asarray(self.n, complex).imag)) <= tol)


@dataclass(frozen=True)
class ComplexMoments:
    """Hermitian block alpha and symmetric block beta of the complex covariance."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=complex)
        b = np.asarray(self.beta, dtype=complex)
        if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("alpha and beta must be square matrices of equal shape")
        scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
        if np.max(np.abs(a - a.conj().T)) > 1e-10 * scale:
            raise ValueError("alpha must be Hermitian")
        if np.max(np.abs(b - b.T)) > 1e-10 * scale:
            raise ValueError("beta must be symmetric")
        object.__setattr__(self, "alpha", 0.5 * (a + a.conj().T))
        object.__setattr__(self, "beta", 0.5 * (b + b.T))

    @property
    def modes(self):
        return self.alpha.shape[0]

    def is_real(self, tol=1e-12):
        return (np.max(np.abs(self.alpha.imag)) <= tol
                and np.max(np.abs(self.beta.imag)) <= tol)


def vacuum_moments(s):
    """Vacuum complex moments: alpha = I, beta = 0."""
    return ComplexMoments(np.eye(s, dtype=complex), np.zeros((s, s), dtype=complex))


def propagator_equal_damping(eta, gamma0, t, series_tol=1e-16, max_terms=200):
    """Closed-form propagator when every mode is damped at the same rate.

    M(t) = exp(-gamma0*t/2) * conj(cosh-series(eta*t)) and
    N(t) = -exp(-gamma0*t/2) * sinh-series(eta*t), where the series are

        cosh-series(xi) = I + xi xi*/2! + (xi xi*)^2/4! + ...
        sinh-series(xi) = xi + xi xi* xi/3! + (xi xi*)^2 xi/5! + ...

    truncated once a term falls below ``series_tol`` relative to the
    accumulated sums.  For real eta the conjugation is a no-op and the
    series are plain matrix cosh/sinh of eta*t.
    """
    eta = _as_sym_matrix(eta)
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    if gamma0 < 0:
        raise ValueError(f"damping rate must be non-negative, got {gamma0}")
    s = eta.shape[0]
    xi = np.asarray(eta, complex) * t
    p = xi @ xi.conj()
    cosh_sum = np.eye(s, dtype=complex)
    sinh_sum = xi.copy()
    term_c = np.eye(s, dtype=complex)
    term_s = xi.copy()
    for k in range(1, max_terms + 1):
        term_c = term_c @ p / ((2 * k - 1) * (2 * k))
        term_s = p @ term_s / ((2 * k) * (2 * k + 1))
        cosh_sum += term_c
        sinh_sum += term_s
        ref = max(float(np.max(np.abs(cosh_sum))), float(np.max(np.abs(sinh_sum))), 1.0)
        if max(float(np.max(np.abs(term_c))), float(np.max(np.abs(term_s)))) < series_tol * ref:
            break
    else:
        raise NumericalFailureError(
            f"propagator series did not converge within {max_terms} terms")
    decay = math.exp(-0.5 * gamma0 * t)
    m = decay * cosh_sum.conj()
    n = -decay * sinh_sum
    if np.isrealobj(eta):
        m = m.real
        n = n.real
    return PropagatorPair(m, n)


def propagator_real_eta(eta, bath, t):
    """Closed-form propagator for real amplification with per-mode damping.

    M = [exp(-(eta + Gamma/2) t) + exp((eta - Gamma/2) t)] / 2,
    N = [exp(-(eta + Gamma/2) t) - exp((eta - Gamma/2) t)] / 2.
    """
    eta = _as_sym_matrix(eta)
    if np.iscomplexobj(eta) and np.max(np.abs(eta.imag)) > 0:
        raise ValueError("this propagator requires a real amplification matrix")
    eta = eta.real.astype(float)
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    half_gamma = 0.5 * np.diag(bath.rates)
    e_minus = expm((-eta - half_gamma) * t)
    e_plus = expm((eta - half_gamma) * t)
    return PropagatorPair(0.5 * (e_minus + e_plus), 0.5 * (e_minus - e_plus))


def _pair_resonances(eta, rates, tol):
    """Pairwise amplification/damping resonances for a uniform bath.

    Returns the list of |(z_i + z_j)/2| values within ``tol`` of 1, where z
    are the eigenvalues of 2*eta/Gamma0.
    """
    if np.ptp(rates) > 0 or rates[0] == 0:
        return []
    zmat = 2.0 * eta / rates[0]
    if np.isrealobj(zmat):
        z = np.linalg.eigvalsh(zmat)
    else:
        z = np.linalg.eigvals(zmat)
    hits = []
    for i in range(len(z)):
        for j in range(i, len(z)):
            avg = 0.5 * (z[i] + z[j])
            if abs(abs(avg) - 1.0) < tol:
                hits.append(complex(avg) if np.iscomplexobj(zmat) else float(avg.real))
    return hits


def steady_alpha_beta(eta, bath, resonance_tol=1e-9):
    """Stationary moments: the solution of the linear fixed-point equations

        2 eta alpha + 2 alpha* eta - Gamma beta - beta Gamma = 0
        Gamma alpha + alpha Gamma - 2 eta* beta - 2 beta* eta
            = Gamma n' + n' Gamma,     n' = 2 nbar + 1,

    with the bath squeezing source set to zero.  Raises ResonanceError when
    amplification balances damping and the system degenerates.
    """
    eta = _as_sym_matrix(eta)
    s = eta.shape[0]
    if bath.modes != s:
        raise ValueError("bath and amplification matrix sizes differ")
    rates = bath.rates
    hits = _pair_resonances(eta, rates, resonance_tol)
    if hits:
        raise ResonanceError(
            "steady moments are singular: amplification/damping eigenvalue(s) "
            + ", ".join(f"{h}" for h in hits) + " within tolerance of magnitude 1")

    gamma = np.diag(rates)
    eye = np.eye(s)
    l_gamma = np.kron(gamma, eye) + np.kron(eye, gamma)
    rhs_mat = gamma @ np.diag(bath.nprime) + np.diag(bath.nprime) @ gamma

    if np.isrealobj(eta) or np.max(np.abs(np.asarray(eta, complex).imag)) == 0:
        eta_r = np.asarray(eta, complex).real
        l_eta = np.kron(eta_r, eye) + np.kron(eye, eta_r)
        n2 = s * s
        sys = np.zeros((2 * n2, 2 * n2))
        sys[:n2, :n2] = 2.0 * l_eta
        sys[:n2, n2:] = -l_gamma
        sys[n2:, :n2] = l_gamma
        sys[n2:, n2:] = -2.0 * l_eta
        rhs = np.concatenate([np.zeros(n2), rhs_mat.ravel()])
        sol = _solve_checked(sys, rhs)
        alpha = sol[:n2].reshape(s, s)
        beta = sol[n2:].reshape(s, s)
    else:
        alpha, beta = _steady_complex(eta, l_gamma, rhs_mat)

    moments = ComplexMoments(alpha, beta)
    res = steady_residuals(eta, bath, moments)
    scale = max(1.0, float(np.max(np.abs(alpha))), float(np.max(np.abs(beta))))
    if max(res) > 1e-8 * scale:
        raise NumericalFailureError(f"steady-state solve residual too large: {max(res):.3e}")
    return moments


def _solve_checked(sys, rhs, cond_limit=1e12):
    svals = np.linalg.svd(sys, compute_uv=False)
    if svals[-1] == 0 or svals[0] / svals[-1] > cond_limit:
        cond = math.inf if svals[-1] == 0 else float(svals[0] / svals[-1])
        raise SingularSystemError(
            f"steady-state system is singular or near-singular (cond ~ {cond:.3e})",
            condition=cond)
    return np.linalg.solve(sys, rhs)


def _steady_complex(eta, l_gamma, rhs_mat):
    """Real/imaginary split of the fixed-point equations for complex eta."""
    s = eta.shape[0]
    eye = np.eye(s)
    r, q = eta.real, eta.imag
    kr1, ki1 = np.kron(r, eye), np.kron(q, eye)
    kr2, ki2 = np.kron(eye, r), np.kron(eye, q)
    n2 = s * s
    z = np.zeros((n2, n2))
    # Unknown order: [Re vec(alpha), Im vec(alpha), Re vec(beta), Im vec(beta)]
    rows = [
        np.hstack([2 * (kr1 + kr2), 2 * (ki2 - ki1), -l_gamma, z]),
        np.hstack([2 * (ki1 + ki2), 2 * (kr1 - kr2), z, -l_gamma]),
        np.hstack([l_gamma, z, -2 * (kr1 + kr2), -2 * (ki1 + ki2)]),
        np.hstack([z, l_gamma, 2 * (ki1 - ki2), 2 * (kr2 - kr1)]),
    ]
    sys = np.vstack(rows)
    rhs = np.concatenate([np.zeros(n2), np.zeros(n2), rhs_mat.ravel(), np.zeros(n2)])
    sol = _solve_checked(sys, rhs)
    alpha = (sol[:n2] + 1j * sol[n2:2 * n2]).reshape(s, s)
    beta = (sol[2 * n2:3 * n2] + 1j * sol[3 * n2:]).reshape(s, s)
    return alpha, beta


def steady_residuals(eta, bath, moments):
    """Max-abs residuals of the two fixed-point equations at given moments."""
    eta = np.asarray(eta, complex)
    gamma = np.diag(bath.rates)
    nprime = np.diag(bath.nprime)
    a, b = moments.alpha, moments.beta
    r1 = 2 * eta @ a + 2 * a.conj() @ eta - gamma @ b - b @ gamma
    r2 = gamma @ a + a @ gamma - 2 * eta.conj() @ b - 2 * b.conj() @ eta \
        - gamma @ nprime - nprime @ gamma
    return float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))


def steady_symmetric(zeta0, zeta1, nprime):
    """Closed-form steady moments of the fully symmetric family:
    alpha = n'(a1 I + a2 S), beta = n'(b1 I + b2 S) with

        a1 = (1/(1-z0^2) + 2/(1-z1^2))/3,  a2 = (1/(1-z0^2) - 1/(1-z1^2))/3,
        b1 = (z0/(1-z0^2) + 2 z1/(1-z1^2))/3,  b2 = (z0/(1-z0^2) - z1/(1-z1^2))/3.
    """
    for z in (zeta0, zeta1):
        if abs(1.0 - z * z) < RESONANCE_EPS:
            raise ResonanceError(f"steady moments diverge at |zeta| = 1 (zeta = {z})")
    f0 = 1.0 / (1.0 - zeta0 ** 2)
    f1 = 1.0 / (1.0 - zeta1 ** 2)
    a1 = (f0 + 2.0 * f1) / 3.0
    a2 = (f0 - f1) / 3.0
    b1 = (zeta0 * f0 + 2.0 * zeta1 * f1) / 3.0
    b2 = (zeta0 * f0 - zeta1 * f1) / 3.0
    eye, coup = np.eye(3), coupling_matrix(3)
    return ComplexMoments(nprime * (a1 * eye + a2 * coup),
                          nprime * (b1 * eye + b2 * coup))


def evolve_complex_cm(initial, prop, steady):
    """Propagate complex moments: with T = [[M, -N], [-N, M]],

        gamma_c(t) = T (gamma_c(0) - gamma_steady) T + gamma_steady.

    Only the real-amplification case is supported; the conjugation pattern
    of the complex case is not pinned down by the block form used here.
    """
    s = initial.modes
    if prop.modes != s or steady.modes != s:
        raise ValueError("dimension mismatch between moments and propagator")
    if not (initial.is_real() and steady.is_real() and prop.is_real()):
        raise ValueError("complex-amplification evolution is not supported; "
                         "all blocks must be real")
    m = np.asarray(prop.m, complex).real
    n = np.asarray(prop.n, complex).real
    t = np.block([[m, -n], [-n, m]])
    g0 = np.block([[initial.alpha.real, initial.beta.real],
                   [initial.beta.real, initial.alpha.real]])
    gs = np.block([[steady.alpha.real, steady.beta.real],
                   [steady.beta.real, steady.alpha.real]])
    out = t @ (g0 - gs) @ t + gs
    return ComplexMoments(out[:s, :s].astype(complex), out[s:, :s].astype(complex))


def complex_to_real_cm(moments):
    """Quadrature covariance matrix from complex moments.

    For real blocks the per-mode-pair position block is alpha + beta and the
    momentum block is alpha - beta, with no position-momentum coupling.
    Imaginary parts (Hermitian alpha / symmetric beta) land in the
    momentum-position cross block as Im(alpha) - Im(beta); this fixed map is
    pinned by consistency with the real symmetric family.
    """
    s = moments.modes
    gxx = (moments.alpha + moments.beta).real
    gpp = (moments.alpha - moments.beta).real
    gpx = moments.alpha.imag - moments.beta.imag
    g = np.zeros((2 * s, 2 * s))
    g[0::2, 0::2] = gxx
    g[1::2, 1::2] = gpp
    g[1::2, 0::2] = gpx
    g[0::2, 1::2] = gpx.T
    return CovarianceMatrix(g)


@dataclass(frozen=True)
class SymmetricFamily:
    """Fully symmetric three-mode family in rescaled parameters.

    eta0p and eta1p are the single-mode and inter-mode amplification-to-
    damping ratios 2*eta/Gamma, nprime = 2*nbar + 1 >= 1, and tprime is the
    rescaled time Gamma*t/2 (math.inf selects the asymptotic state).
    """

    eta0p: float
    eta1p: float
    nprime: float = 1.0
    tprime: float = math.inf

    def __post_init__(self):
        if self.nprime < 1.0:
            raise ValueError(f"nprime must be >= 1, got {self.nprime}")
        if not (self.tprime >= 0.0):
            raise ValueError(f"tprime must be >= 0 or inf, got {self.tprime}")

    @classmethod
    def from_nbar(cls, eta0p, eta1p, nbar, tprime):
        if nbar < 0:
            raise ValueError(f"nbar must be >= 0, got {nbar}")
        return cls(eta0p, eta1p, 2.0 * nbar + 1.0, tprime)

    @classmethod
    def from_zetas(cls, zeta0, zeta1, nprime, tprime):
        return cls((zeta0 + 2.0 * zeta1) / 3.0, (zeta0 - zeta1) / 3.0, nprime, tprime)

    @property
    def zeta0(self):
        return self.eta0p + 2.0 * self.eta1p

    @property
    def zeta1(self):
        return self.eta0p - self.eta1p

    @property
    def nbar(self):
        return 0.5 * (self.nprime - 1.0)

    def eta_matrix(self, gamma0=1.0):
        """Amplification matrix eta0*I + eta1*S for damping rate gamma0."""
        return 0.5 * gamma0 * (self.eta0p * np.eye(3) + self.eta1p * coupling_matrix(3))


@dataclass(frozen=True)
class SymmetricEntries:
    """Covariance coefficients of the symmetric family (vacuum initial state).

    a, b are the per-mode position/momentum variances, c, d the x-x and p-p
    cross correlations; primed values are the channel combinations a' = a+2c,
    c' = a-c, b' = b+2d, d' = b-d.  Entries may be +inf in the asymptotic
    strong-amplification regime.
    """

    a: float
    b: float
    c: float
    d: float
    aprime: float
    bprime: float
    cprime: float
    dprime: float
    tprime: float = math.inf

    @property
    def asymptotic(self):
        return math.isinf(self.tprime)

    def finite(self):
        return all(map(math.isfinite,
                       (self.a, self.b, self.c, self.d,
                        self.aprime, self.bprime, self.cprime, self.dprime)))


def _x_channel(z, nprime, tprime):
    # X(z) = exp(2(z-1)t')(1 - n'/(1-z)) + n'/(1-z); pole at z = 1.
    if abs(1.0 - z) < RESONANCE_EPS:
        raise ResonanceError(f"resonance at zeta = 1 (zeta = {z}): division by 1 - zeta")
    if math.isinf(tprime):
        return math.inf if z > 1.0 else nprime / (1.0 - z)
    x = 2.0 * (z - 1.0) * tprime
    try:
        # exp(x) - n' * expm1(x)/(1-z) is stable arbitrarily close to the pole.
        return math.exp(x) - nprime * math.expm1(x) / (1.0 - z)
    except OverflowError:
        return math.inf


def _p_channel(z, nprime, tprime):
    if abs(1.0 + z) < RESONANCE_EPS:
        raise ResonanceError(f"resonance at zeta = -1 (zeta = {z}): division by 1 + zeta")
    if math.isinf(tprime):
        return math.inf if z < -1.0 else nprime / (1.0 + z)
    y = -2.0 * (z + 1.0) * tprime
    try:
        return math.exp(y) - nprime * math.expm1(y) / (1.0 + z)
    except OverflowError:
        return math.inf


def symmetric_entries(family):
    """Time-dependent covariance coefficients of the symmetric family.

    At tprime = inf the damped exponentials vanish; channels with
    amplification beyond damping return +inf.
    """
    z0, z1 = family.zeta0, family.zeta1
    x0 = _x_channel(z0, family.nprime, family.tprime)
    x1 = _x_channel(z1, family.nprime, family.tprime)
    p0 = _p_channel(z0, family.nprime, family.tprime)
    p1 = _p_channel(z1, family.nprime, family.tprime)
    return SymmetricEntries(
        a=(x0 + 2.0 * x1) / 3.0,
        b=(p0 + 2.0 * p1) / 3.0,
        c=(x0 - x1) / 3.0,
        d=(p0 - p1) / 3.0,
        aprime=x0, bprime=p0, cprime=x1, dprime=p1,
        tprime=family.tprime,
    )


def build_symmetric_gamma(entries, scale=1.0):
    """Explicit 6x6 covariance matrix of the symmetric family.

    Diagonal pairs (scale*a, scale*b) per mode, every x-x cross correlation
    scale*c and every p-p cross correlation scale*d.
    """
    vals = (entries.a, entries.b, entries.c, entries.d)
    if not all(map(math.isfinite, vals)) or not math.isfinite(scale):
        raise ValueError("covariance entries must be finite to build the matrix")
    eye, coup = np.eye(3), coupling_matrix(3)
    g = np.zeros((6, 6))
    g[0::2, 0::2] = scale * (entries.a * eye + entries.c * coup)
    g[1::2, 1::2] = scale * (entries.b * eye + entries.d * coup)
    return CovarianceMatrix(g)
