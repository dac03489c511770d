"""Inner precoding for center clusters: zero-forcing over the effective
channel, equivalent-noise covariance of the soft-reuse links, and the
composition of the two precoding stages.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ZfPrecoder", "zf_inner", "equivalent_noise_cov", "compose"]


@dataclass(frozen=True)
class ZfPrecoder:
    matrix: np.ndarray  # M x S
    gain: float         # normalization so that Hbar @ matrix = gain * I


def zf_inner(hbar, cond_limit=1e12) -> ZfPrecoder:
    """Zero-forcing inner precoder V = zeta * Hbar^H (Hbar Hbar^H)^-1.

    zeta = sqrt(S / tr(Z Z^H)) constrains the precoder power gain, so the
    equalized link becomes zeta * I_S.
    """
    hbar = np.asarray(hbar, dtype=complex)
    s, m = hbar.shape
    if m < s:
        raise ValueError("ZF needs at least as many beams as rows")
    gram = hbar @ hbar.conj().T
    sv = np.linalg.svd(hbar, compute_uv=False)
    if sv[0] <= 0 or sv[0] / max(sv[-1], 1e-300) > cond_limit:
        raise np.linalg.LinAlgError("ZF singular")
    z = hbar.conj().T @ np.linalg.inv(gram)
    zeta = float(np.sqrt(s / np.trace(z @ z.conj().T).real))
    return ZfPrecoder(matrix=zeta * z, gain=zeta)


def equivalent_noise_cov(cross_channels, p_cent, noise_variance=1.0):
    """Covariance of noise plus leaked cross-cell center transmissions.

    ``cross_channels`` holds one K_j*Nr x M' matrix per interfering link
    (interfering inner precoders are taken orthonormal, so each link adds
    p_cent * G G^H).
    """
    if p_cent < 0:
        raise ValueError("p_cent must be nonnegative")
    mats = [np.asarray(g, dtype=complex) for g in cross_channels]
    if not mats:
        raise ValueError("need the receiver dimension: pass at least a 0-column matrix")
    n = mats[0].shape[0]
    k = noise_variance * np.eye(n, dtype=complex)
    for g in mats:
        k = k + p_cent * (g @ g.conj().T)
    return 0.5 * (k + k.conj().T)


def compose(prebeam_matrix, inner):
    """Two-stage precoder P = B V."""
    b = np.asarray(prebeam_matrix)
    v = inner.matrix if hasattr(inner, "matrix") else np.asarray(inner)
    if b.shape[1] != v.shape[0]:
        raise ValueError(f"stage dimensions disagree: {b.shape} vs {v.shape}")
    return b @ v
