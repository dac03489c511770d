"""Power allocation: per-link capacities, water-filling over the edge
streams, and the golden-section search that splits the budget between the
single center power level and the edge streams.

The center power couples into the center noise covariance, which is why an
outer one-dimensional search is needed at all: for a fixed center level the
edge side reduces to classical water-filling.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "CenterLink",
    "EdgeLink",
    "AllocationProblem",
    "PowerAllocation",
    "capacity_edge",
    "capacity_center",
    "waterfill",
    "allocate",
    "evaluate_candidate",
]


@dataclass(frozen=True)
class CenterLink:
    """One soft-reuse center link after zero-forcing.

    ``interference_eigs`` are the eigenvalues of the summed cross-cell
    leakage covariance restricted to the served rows, so the equivalent
    noise eigenvalues at center power p are noise_variance + p * sigma_s.
    """

    key: str
    gain: float
    interference_eigs: np.ndarray
    noise_variance: float
    n_streams: int


@dataclass(frozen=True)
class EdgeLink:
    """One aligned edge link: the eigenvalues of the S x S effective
    channel Gram matrix."""

    key: tuple
    eigenvalues: np.ndarray


@dataclass(frozen=True)
class AllocationProblem:
    center_links: list
    edge_links: list


@dataclass
class PowerAllocation:
    p_cent: float
    edge_powers: dict            # EdgeLink.key -> per-stream power vector
    total_budget: float
    sum_capacity: float = 0.0
    center_capacities: dict = field(default_factory=dict)
    edge_capacities: dict = field(default_factory=dict)

    @property
    def mean_edge_power(self) -> float:
        if not self.edge_powers:
            return 0.0
        vals = np.concatenate([np.atleast_1d(v) for v in self.edge_powers.values()])
        return float(vals.mean()) if vals.size else 0.0

    @property
    def split_factor(self) -> float:
        """Center stream power over the average edge stream power."""
        m = self.mean_edge_power
        if m > 0:
            return self.p_cent / m
        return np.inf if self.p_cent > 0 else 0.0


def capacity_edge(eigenvalues, powers):
    """Sum of log2(1 + lambda_s * p_s) over the streams of one edge link."""
    lam = np.asarray(eigenvalues, dtype=float)
    p = np.asarray(powers, dtype=float)
    return float(np.sum(np.log2(1.0 + lam * p)))


def capacity_center(noise_eigenvalues, gain, powers):
    """Sum of log2(1 + zeta^2 * p_s / k_s) for one center link."""
    k = np.asarray(noise_eigenvalues, dtype=float)
    p = np.asarray(powers, dtype=float)
    return float(np.sum(np.log2(1.0 + (gain ** 2) * p / k)))


def waterfill(eigenvalues, budget, rel_tol=1e-10):
    """KKT water-filling p_s = max(0, 1/mu - 1/lambda_s), budget met with
    equality. Returns (powers, mu)."""
    lam = np.asarray(eigenvalues, dtype=float)
    if np.any(lam <= 0):
        raise ValueError("eigenvalues must be positive")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    if budget == 0 or lam.size == 0:
        return np.zeros_like(lam), np.inf
    inv = 1.0 / lam
    lo = inv.min()                  # water level at which allocation starts
    hi = inv.max() + budget         # certainly overshoots
    for _ in range(128):
        mid = 0.5 * (lo + hi)
        if np.sum(np.clip(mid - inv, 0.0, None)) > budget:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rel_tol * max(hi, 1e-300):
            break
    level = 0.5 * (lo + hi)
    p = np.clip(level - inv, 0.0, None)
    active = p > 0
    if active.any():
        # close the bisection residue exactly on the active set and report
        # the matching water level, so complementary slackness holds against
        # the returned multiplier
        level = level - (p.sum() - budget) / active.sum()
        p = np.clip(level - inv, 0.0, None)
    return p, 1.0 / level


def _center_capacity_at(link: CenterLink, p_cent: float) -> float:
    k = link.noise_variance + p_cent * np.asarray(link.interference_eigs, dtype=float)
    return capacity_center(k, link.gain, np.full(link.n_streams, p_cent))


def evaluate_candidate(problem: AllocationProblem, total_power, n_center_streams, p_cent):
    """Sum capacity and per-link details for one candidate center level."""
    edge_budget = max(total_power - n_center_streams * p_cent, 0.0)
    lam_all = (np.concatenate([np.asarray(l.eigenvalues, dtype=float)
                               for l in problem.edge_links])
               if problem.edge_links else np.zeros(0))
    powers, _ = waterfill(lam_all, edge_budget) if lam_all.size else (np.zeros(0), np.inf)
    edge_powers, edge_caps = {}, {}
    pos = 0
    total = 0.0
    for link in problem.edge_links:
        n = np.asarray(link.eigenvalues).size
        p = powers[pos:pos + n]
        pos += n
        edge_powers[link.key] = p
        c = capacity_edge(link.eigenvalues, p)
        edge_caps[link.key] = c
        total += c
    center_caps = {}
    for link in problem.center_links:
        c = _center_capacity_at(link, p_cent)
        center_caps[link.key] = c
        total += c
    alloc = PowerAllocation(p_cent=p_cent, edge_powers=edge_powers,
                            total_budget=total_power, sum_capacity=total,
                            center_capacities=center_caps,
                            edge_capacities=edge_caps)
    return alloc


def allocate(problem: AllocationProblem, total_power, eps) -> PowerAllocation:
    """Golden-section search over the common center power level.

    Interior points sit at the 0.382/0.618 splits of the bracket; each
    candidate re-waterfills the edge streams on the remaining budget. The
    best allocation visited is returned (a guard against shallow or
    non-strict unimodality).
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if total_power < 0:
        raise ValueError("total_power must be nonnegative")
    n_center = sum(l.n_streams for l in problem.center_links)
    if total_power == 0:
        return evaluate_candidate(problem, 0.0, n_center, 0.0)
    if n_center == 0:
        return evaluate_candidate(problem, total_power, 0, 0.0)

    lo, hi = 0.0, total_power / n_center
    best = evaluate_candidate(problem, total_power, n_center, 0.0)
    while hi - lo >= eps:
        m1 = lo + 0.382 * (hi - lo)
        m2 = lo + 0.618 * (hi - lo)
        a1 = evaluate_candidate(problem, total_power, n_center, m1)
        a2 = evaluate_candidate(problem, total_power, n_center, m2)
        for cand in (a1, a2):
            if cand.sum_capacity > best.sum_capacity:
                best = cand
        if a1.sum_capacity > a2.sum_capacity:
            hi = m2
        else:
            lo = m1
    mid = evaluate_candidate(problem, total_power, n_center, 0.5 * (lo + hi))
    if mid.sum_capacity > best.sum_capacity:
        best = mid
    return best
