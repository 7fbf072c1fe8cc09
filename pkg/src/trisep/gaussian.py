"""Covariance-matrix conventions and elementary Gaussian-state checks.

Quadratures are ordered mode by mode, (x1, p1, x2, p2, ...), and covariance
matrices are normalized so that the vacuum state is the identity.  In this
convention a state is physical iff gamma + iJ >= 0 with J the block-diagonal
symplectic form.
"""

from dataclasses import dataclass, field

import numpy as np

SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric 2s x 2s second-moment matrix (vacuum = identity).

    Construction symmetrizes the input and rejects it if the asymmetry
    exceeds ``SYMMETRY_TOL``.  Physicality is *not* enforced here; use
    :func:`is_valid_cm` (intermediate matrices may be unphysical).
    """

    entries: np.ndarray = field(repr=False)
    modes: int = 0

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2 != 0 or m.shape[0] == 0:
            raise ValueError(f"covariance matrix must be square with even size, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix entries must be finite")
        asym = np.max(np.abs(m - m.T))
        if asym > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(m)))):
            raise ValueError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
        m = 0.5 * (m + m.T)
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)
        object.__setattr__(self, "modes", m.shape[0] // 2)

    @property
    def size(self):
        return 2 * self.modes


def symplectic_form(s):
    """Block-diagonal symplectic form, s copies of [[0, -1], [1, 0]]."""
    if s < 1:
        raise ValueError(f"mode count must be >= 1, got {s}")
    j = np.zeros((2 * s, 2 * s))
    for k in range(s):
        j[2 * k, 2 * k + 1] = -1.0
        j[2 * k + 1, 2 * k] = 1.0
    return j


def pt_symplectic_form(s, flipped_mode):
    """Symplectic form with the block of one mode negated (J with a mode
    partially transposed); for two modes and flipped_mode=2 this is
    J (+) (-J)."""
    if not 1 <= flipped_mode <= s:
        raise ValueError(f"flipped mode must be in 1..{s}, got {flipped_mode}")
    j = symplectic_form(s)
    k = flipped_mode - 1
    j[2 * k:2 * k + 2, 2 * k:2 * k + 2] *= -1.0
    return j


def pt_sign_matrix(mode, s=3):
    """Diagonal sign matrix of partial transposition: flips the momentum of
    one mode and leaves everything else untouched."""
    if not 1 <= mode <= s:
        raise ValueError(f"mode must be in 1..{s}, got {mode}")
    signs = np.ones(2 * s)
    signs[2 * (mode - 1) + 1] = -1.0
    return np.diag(signs)


def partial_transpose(cm, mode):
    """Partially transposed covariance matrix for one mode.

    Conjugates the covariance matrix with the diagonal sign matrix that
    flips the chosen mode's momentum quadrature.
    """
    s = cm.modes
    if not 1 <= mode <= s:
        raise ValueError(f"mode must be in 1..{s}, got {mode}")
    signs = np.ones(2 * s)
    signs[2 * (mode - 1) + 1] = -1.0
    flipped = cm.entries * np.outer(signs, signs)
    return CovarianceMatrix(flipped)


def min_eigenvalue_hermitian(h, herm_tol=1e-12):
    """Smallest eigenvalue of a Hermitian matrix.

    Rejects inputs whose deviation from Hermiticity exceeds ``herm_tol``
    relative to the largest entry.
    """
    h = np.asarray(h)
    if not np.all(np.isfinite(h.real)) or not np.all(np.isfinite(h.imag)):
        raise ValueError("matrix entries must be finite")
    scale = max(1.0, float(np.max(np.abs(h))))
    dev = float(np.max(np.abs(h - h.conj().T)))
    if dev > herm_tol * scale:
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return float(np.linalg.eigvalsh(0.5 * (h + h.conj().T))[0])


def is_valid_cm(cm, tol=1e-9):
    """Bona-fide test: gamma + iJ >= -tol in the smallest-eigenvalue sense."""
    g = cm.entries
    if not np.all(np.isfinite(g)):
        raise ValueError("covariance matrix entries must be finite")
    j = symplectic_form(cm.modes)
    return min_eigenvalue_hermitian(g + 1j * j) >= -tol
