"""One-ring spatial correlation model: correlation matrices, their eigen and
DFT structure, and per-block channel realizations.

All angles are radians. BS arrays are uniform linear arrays with element
spacing ``spacing_ratio`` wavelengths; azimuths are measured from array
broadside.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import toeplitz

__all__ = [
    "EigenBasis",
    "one_ring_coefficients",
    "correlation_matrix",
    "eigen_basis",
    "dft_index_set",
    "analytic_rank",
    "exponential_user_correlation",
    "sample_channel",
]

# 15-point Gauss-Kronrod pair (nodes on [-1, 1]); the embedded 7-point Gauss
# rule supplies the error estimate for the adaptive panels below.
_GK_NODES = np.array([
    -0.991455371120813, -0.949107912342759, -0.864864423359769,
    -0.741531185599394, -0.586087235467691, -0.405845151377397,
    -0.207784955007898, 0.0,
    0.207784955007898, 0.405845151377397, 0.586087235467691,
    0.741531185599394, 0.864864423359769, 0.949107912342759,
    0.991455371120813,
])
_GK_WEIGHTS = np.array([
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728,
    0.204432940075298, 0.190350578064785, 0.169004726639267,
    0.140653259715525, 0.104790010322250, 0.063092092629979,
    0.022935322010529,
])
_G7_WEIGHTS = np.array([
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469, 0.381830050505119, 0.279705391489277,
    0.129484966168870,
])
_G7_PICK = np.arange(1, 15, 2)


@dataclass(frozen=True)
class EigenBasis:
    """Dominant eigenpairs of a BS-side correlation matrix.

    ``vectors`` is Nt x r with orthonormal columns, ``values`` the matching
    eigenvalues in descending order.
    """

    vectors: np.ndarray
    values: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.values.size)

    def matrix(self) -> np.ndarray:
        """Reconstruct the (truncated) correlation matrix."""
        return (self.vectors * self.values) @ self.vectors.conj().T


def _panel_integrate(freqs, lo, hi):
    """Integrate exp(-1j * f * sin(a)) over [lo, hi] for all f at once."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    s = np.sin(mid + half * _GK_NODES)
    ph = np.exp(-1j * np.outer(freqs, s))
    full = half * ph @ _GK_WEIGHTS
    coarse = half * ph[:, _G7_PICK] @ _G7_WEIGHTS
    return full, np.max(np.abs(full - coarse))


def one_ring_coefficients(theta, delta, nt, spacing_ratio, tol=1e-10):
    """First row of the one-ring correlation matrix.

    Entry k is the normalized integral of exp(-2*pi*1j*k*spacing*sin(a))
    over the azimuth interval [theta - delta, theta + delta], evaluated by
    adaptive Gauss-Kronrod panels (all antenna lags integrated together, the
    panel error taken as the worst lag).
    """
    if delta <= 0:
        raise ValueError("degenerate spread")
    freqs = 2.0 * np.pi * spacing_ratio * np.arange(nt)
    panels = [(theta - delta, theta + delta)]
    total = np.zeros(nt, dtype=complex)
    # absolute tolerance: the normalized entries have modulus <= 1
    budget = tol * 2.0 * delta
    for _ in range(64):
        vals, errs = [], []
        for lo, hi in panels:
            v, e = _panel_integrate(freqs, lo, hi)
            vals.append(v)
            errs.append(e)
        if max(errs) <= budget / max(len(panels), 1):
            total = sum(vals)
            break
        # split every panel; the integrand is smooth so this converges fast
        panels = [p for lo, hi in panels for p in ((lo, 0.5 * (lo + hi)), (0.5 * (lo + hi), hi))]
    else:
        raise RuntimeError("one-ring quadrature did not reach tolerance")
    return total / (2.0 * delta)


def correlation_matrix(theta, delta, nt, spacing_ratio, tol=1e-10):
    """Nt x Nt one-ring correlation matrix (Hermitian, PSD, Toeplitz, unit
    diagonal): entry (p, q) is the ring average of the steering-phase lag
    p - q."""
    row = one_ring_coefficients(theta, delta, nt, spacing_ratio, tol=tol)
    r = toeplitz(row, row.conj())
    return 0.5 * (r + r.conj().T)


def eigen_basis(r_matrix, eigen_threshold):
    """Eigenpairs of a correlation matrix above ``eigen_threshold`` relative
    to the largest eigenvalue, descending."""
    asym = np.max(np.abs(r_matrix - r_matrix.conj().T))
    if asym > 1e-10:
        raise ValueError(f"correlation matrix is not Hermitian (asymmetry {asym:.2e})")
    w, v = np.linalg.eigh(r_matrix)
    w = w[::-1]
    v = v[:, ::-1]
    keep = w >= eigen_threshold * w[0]
    return EigenBasis(vectors=v[:, keep], values=w[keep])


def dft_index_set(theta, delta, nt, spacing_ratio):
    """Sorted DFT column indices whose spatial frequencies fall inside the
    azimuth interval of the cluster.

    Indices n satisfy n in [Nt*s*sin(theta-delta)+Nt/2,
    Nt*s*sin(theta+delta)+Nt/2] (endpoints ordered, both inclusive) and are
    clamped to [0, Nt).
    """
    a = nt * spacing_ratio * np.sin(theta - delta) + nt / 2.0
    b = nt * spacing_ratio * np.sin(theta + delta) + nt / 2.0
    lo, hi = (a, b) if a <= b else (b, a)
    if lo < -1e-9 or hi > nt - 1 + 1e-9:
        warnings.warn("DFT index interval clipped to [0, Nt)", stacklevel=2)
    n0 = max(int(np.ceil(lo - 1e-9)), 0)
    n1 = min(int(np.floor(hi + 1e-9)), nt - 1)
    return tuple(range(n0, n1 + 1)) if n1 >= n0 else ()


def analytic_rank(theta, delta, nt, spacing_ratio):
    """Closed-form effective rank 2*Nt*s*|cos(theta)|*sin(delta)."""
    return 2.0 * nt * spacing_ratio * abs(np.cos(theta)) * np.sin(delta)


def exponential_user_correlation(rho, nr):
    """Exponential correlation matrix rho^|p-q| for the user array."""
    idx = np.arange(nr)
    return rho ** np.abs(np.subtract.outer(idx, idx)).astype(float)


def _matrix_sqrt(mat):
    w, v = np.linalg.eigh(mat)
    if w.min() < -1e-10 * max(w.max(), 1.0):
        raise ValueError("matrix is not positive semidefinite")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def sample_channel(basis, beta, phi, nr, rng):
    """Draw one Nr x Nt channel through the Karhunen-Loeve representation.

    H^H = sqrt(beta) * E * Lambda^(1/2) * W * Phi^(1/2), W an r x Nr matrix
    of i.i.d. unit complex Gaussians, so the BS-side covariance of each
    receive antenna's channel is the (truncated) correlation matrix and the
    channel rides the beams of the cluster's own angular support. ``rng`` is
    a seeded Generator (or an int seed); identical seeds reproduce the
    matrix bit for bit.
    """
    if isinstance(rng, (int, np.integer)):
        rng = np.random.default_rng(int(rng))
    r = basis.rank
    w = (rng.standard_normal((r, nr)) + 1j * rng.standard_normal((r, nr))) / np.sqrt(2.0)
    phi = np.asarray(phi, dtype=complex)
    if phi.shape == (nr, nr) and not np.allclose(phi, np.eye(nr)):
        w = w @ _matrix_sqrt(phi)
    h_h = np.sqrt(beta) * (basis.vectors * np.sqrt(basis.values)) @ w
    return h_h.conj().T
