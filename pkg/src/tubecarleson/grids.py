"""Spectral grids and sampled spectral densities.

A SpectralGrid is a cone-adapted quadrature grid on a truncated cone: nodes,
weights, and the base/fiber factorization used by the restriction operators
(for the rank-2 three-dimensional cones every node belongs to the fiber of a
base node).  A SpectralFunction is a density sampled on such a grid.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import cones
from .cones import ConeDescriptor, ConeKind


class DecayTag(enum.Enum):
    CompactSupport = "compact-support"
    ExponentialEnvelope = "exponential-envelope"


@dataclass(frozen=True)
class SpectralGrid:
    cone: ConeDescriptor
    radius: float
    nodes: np.ndarray        # (N, n)
    weights: np.ndarray      # (N,)
    base_index: np.ndarray   # (N,) node -> base node
    base_nodes: np.ndarray   # (Nb,) or (Nb, 2)
    base_weights: np.ndarray
    fiber_weights: np.ndarray

    def __post_init__(self):
        inside = cones.contains(self.cone, self.nodes)
        if not np.all(inside):
            raise ValueError("spectral grid node outside the open cone")

    @property
    def size(self) -> int:
        return self.nodes.shape[0]

    def integrate(self, values: np.ndarray):
        """Quadrature sum of sampled values over the truncated cone."""
        return np.sum(self.weights * values)

    def fiber_integrate(self, values: np.ndarray) -> np.ndarray:
        """Per-base-node fiber integrals (identity for rank-1 grids)."""
        out = np.zeros(len(self.base_weights), dtype=np.result_type(values, float))
        np.add.at(out, self.base_index, self.fiber_weights * values)
        return out


def spectral_grid(cone: ConeDescriptor, radius: float, n_base: int,
                  n_fiber: int = 0, n_angle: int = 0) -> SpectralGrid:
    nodes, w, idx, bn, bw, fw = cones.cone_nodes(
        cone, radius, n_base, n_fiber=n_fiber, n_angle=n_angle)
    return SpectralGrid(cone=cone, radius=radius, nodes=nodes, weights=w,
                        base_index=idx, base_nodes=bn, base_weights=bw,
                        fiber_weights=fw)


@dataclass(frozen=True)
class SpectralFunction:
    """Sampled spectral density f on a truncated cone grid."""

    grid: SpectralGrid
    values: np.ndarray
    decay_tag: DecayTag = DecayTag.ExponentialEnvelope

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.size,):
            raise ValueError("values shape mismatches grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite spectral values")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_callable(cls, grid: SpectralGrid, fn,
                      decay_tag: DecayTag = DecayTag.ExponentialEnvelope):
        pts = grid.nodes if grid.cone.n > 1 else grid.nodes[:, 0]
        return cls(grid=grid, values=np.asarray(fn(pts)), decay_tag=decay_tag)

    @property
    def cone(self) -> ConeDescriptor:
        return self.grid.cone

    def l2_squared(self, extra_weight: np.ndarray | None = None) -> float:
        w = np.abs(self.values) ** 2
        if extra_weight is not None:
            w = w * extra_weight
        return float(np.real(self.grid.integrate(w)))

    def with_values(self, values: np.ndarray) -> "SpectralFunction":
        return SpectralFunction(grid=self.grid, values=values,
                                decay_tag=self.decay_tag)
