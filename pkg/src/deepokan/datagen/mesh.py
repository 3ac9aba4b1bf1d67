"""Structured bilinear-quad meshes of the unit square."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class FemMesh:
    """Node grid, counter-clockwise quad connectivity and edge tags.

    Nodes are numbered row-major in y: node (i, j) has index j*nx + i and
    sits at (i/(nx-1), j/(ny-1)). Corner nodes belong to both adjacent
    boundary tags.
    """

    nx: int
    ny: int
    nodes: np.ndarray = field(repr=False)
    elements: np.ndarray = field(repr=False)
    boundary: dict = field(repr=False)

    @classmethod
    def unit_square(cls, nx: int, ny: int) -> "FemMesh":
        """nx x ny node grid, (nx-1) x (ny-1) bilinear quads."""
        if nx < 2 or ny < 2:
            raise ValueError("need at least 2 nodes per side")
        x = np.linspace(0.0, 1.0, nx)
        y = np.linspace(0.0, 1.0, ny)
        xx, yy = np.meshgrid(x, y)  # row-major in y
        nodes = np.column_stack([xx.ravel(), yy.ravel()])
        ii, jj = np.meshgrid(np.arange(nx - 1), np.arange(ny - 1))
        n0 = (jj * nx + ii).ravel()
        elements = np.column_stack([n0, n0 + 1, n0 + nx + 1, n0 + nx]).astype(np.int64)
        all_idx = np.arange(nx * ny)
        boundary = {
            "left": all_idx[nodes[:, 0] == 0.0],
            "right": all_idx[nodes[:, 0] == 1.0],
            "bottom": all_idx[nodes[:, 1] == 0.0],
            "top": all_idx[nodes[:, 1] == 1.0],
        }
        return cls(nx=nx, ny=ny, nodes=nodes, elements=elements, boundary=boundary)

    @property
    def num_nodes(self) -> int:
        return self.nodes.shape[0]

    def signed_areas(self) -> np.ndarray:
        """Shoelace area per element; positive means counter-clockwise."""
        p = self.nodes[self.elements]  # (E, 4, 2)
        x, y = p[:, :, 0], p[:, :, 1]
        return 0.5 * np.sum(x * np.roll(y, -1, axis=1) - np.roll(x, -1, axis=1) * y, axis=1)

    def top_edges(self) -> np.ndarray:
        """(num_segments, 2) node pairs along the top edge, left to right."""
        top = self.boundary["top"]
        order = np.argsort(self.nodes[top, 0])
        t = top[order]
        return np.column_stack([t[:-1], t[1:]])
