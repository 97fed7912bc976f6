"""Wavevector grids for mode-space quadrature."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KGrid:
    """Quadrature nodes and weights over wavevectors, excluding k = 0.

    Node placement straddles zero symmetrically at half-step offsets so the
    1/sqrt|k| mode weights are always finite on the grid.
    """

    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape != weights.shape or nodes.ndim != 1:
            raise ValueError("nodes and weights must be matching 1-D arrays")
        if np.any(nodes == 0.0):
            raise ValueError("k = 0 must not be a node")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform_symmetric(cls, k_max: float, n_per_side: int) -> "KGrid":
        """Midpoint rule on [-k_max, k_max] with nodes at +/-(j+1/2)dk."""
        if k_max <= 0 or n_per_side < 1:
            raise ValueError("k_max must be positive and n_per_side >= 1")
        dk = k_max / n_per_side
        positive = (np.arange(n_per_side) + 0.5) * dk
        nodes = np.concatenate([-positive[::-1], positive])
        weights = np.full(nodes.size, dk)
        return cls(nodes, weights)

    def integrate(self, values) -> float | complex:
        return (np.asarray(values) * self.weights).sum()

    @property
    def k_max(self) -> float:
        return float(np.max(np.abs(self.nodes)))


DEFAULT_MODE_GRID = (256.0, 32768)      # (k_max, n_per_side) for beta^2 norms
DEFAULT_ENERGY_GRID = (2048.0, 131072)  # finer/longer grid for energy sums


def default_mode_grid() -> KGrid:
    return KGrid.uniform_symmetric(*DEFAULT_MODE_GRID)


def default_energy_grid() -> KGrid:
    return KGrid.uniform_symmetric(*DEFAULT_ENERGY_GRID)
