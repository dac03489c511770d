"""DFT-based prebeamforming: each cluster is served on the DFT columns of
its own angular support minus the supports of the clusters it must not
disturb. Edge clusters avoid every other cluster in the system; center
clusters avoid only their own cell and the edge area (soft space reuse).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Prebeamformer", "dft_columns", "edge_prebeam", "center_prebeam"]


@dataclass(frozen=True)
class Prebeamformer:
    """Selected DFT columns for one (BS, cluster) link."""

    matrix: np.ndarray        # Nt x M, orthonormal columns (possibly M = 0)
    indices: tuple[int, ...]  # ascending DFT column indices
    bs: int
    cluster_id: str

    @property
    def rank(self) -> int:
        return len(self.indices)


def dft_columns(nt: int, indices) -> np.ndarray:
    """Columns of the Nt-point unitary DFT matrix, ascending index order.

    Index n labels the beam at spatial frequency (n - Nt/2)/Nt cycles per
    element, so index Nt/2 is broadside; this matches the half-shifted index
    convention of the angular support sets.
    """
    idx = np.asarray(sorted(indices), dtype=int)
    rows = np.arange(nt)[:, None]
    freq = idx[None, :] - nt // 2
    return np.exp(-2j * np.pi * rows * freq / nt) / np.sqrt(nt)


def _select(own, excluded_sets):
    excl = set()
    for s in excluded_sets:
        excl.update(s)
    return tuple(n for n in sorted(own) if n not in excl)


def edge_prebeam(nt, own_indices, other_indices, bs=0, cluster_id=""):
    """Prebeamformer for an edge cluster: its DFT support minus the union of
    every other cluster's support at this BS. An empty result is returned as
    a rank-0 beamformer, not an error."""
    keep = _select(own_indices, other_indices)
    return Prebeamformer(matrix=dft_columns(nt, keep), indices=keep,
                         bs=bs, cluster_id=cluster_id)


def center_prebeam(nt, own_indices, same_cell_and_edge_indices, bs=0, cluster_id=""):
    """Prebeamformer for a center cluster: only same-cell clusters and the
    edge area are excluded, so supports may be reused across cells."""
    keep = _select(own_indices, same_cell_and_edge_indices)
    return Prebeamformer(matrix=dft_columns(nt, keep), indices=keep,
                         bs=bs, cluster_id=cluster_id)
