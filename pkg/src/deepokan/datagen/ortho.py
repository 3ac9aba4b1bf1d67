"""Orthotropic plane-stress elasticity on the unit square.

A sampled material/load record is solved with bilinear quads under the
fixed boundary layout: roller supports u_y = 0 on the bottom edge and
u_x = 0 on the right edge, a constant traction (t_x, t_y) on the top edge,
and a traction-free left edge. The learning target per node is the
displacement magnitude.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..rng import make_rng
from .dataset import Dataset, split_dataset
from .fem import LinearSolver, assemble, eliminate_dirichlet, element_stiffness_elastic, vector_dofs
from .mesh import FemMesh

TRACTION_RANGE = (-0.3, 0.3)
MODULUS_RANGE = (5.0, 20.0)
POISSON_RANGE = (0.15, 0.35)


@dataclass(frozen=True)
class OrthoParams:
    """Traction and orthotropic material record.

    nu_yx and G_xy are derived, not sampled: nu_yx = nu_xy * E_y / E_x keeps
    the compliance matrix symmetric, and G_xy is the mean of the two
    isotropic-equivalent shear moduli, which keeps shear softer than tension.
    """

    t_x: float
    t_y: float
    e_x: float
    e_y: float
    nu_xy: float
    nu_yx: float
    g_xy: float

    def __post_init__(self):
        lo, hi = TRACTION_RANGE
        if not (lo <= self.t_x <= hi and lo <= self.t_y <= hi):
            raise ValueError(f"tractions must lie in [{lo}, {hi}]")
        lo, hi = MODULUS_RANGE
        if not (lo <= self.e_x <= hi and lo <= self.e_y <= hi):
            raise ValueError(f"moduli must lie in [{lo}, {hi}]")
        lo, hi = POISSON_RANGE
        if not lo <= self.nu_xy <= hi:
            raise ValueError(f"nu_xy must lie in [{lo}, {hi}]")
        if not np.isclose(self.nu_yx, self.nu_xy * self.e_y / self.e_x, rtol=1e-12):
            raise ValueError("nu_yx inconsistent with nu_xy * E_y / E_x")
        g = 0.5 * (self.e_x / (2 * (1 + self.nu_xy)) + self.e_y / (2 * (1 + self.nu_yx)))
        if not np.isclose(self.g_xy, g, rtol=1e-12):
            raise ValueError("G_xy inconsistent with the shear-modulus rule")
        if self.nu_xy * self.nu_yx >= 1.0:
            raise ValueError("Poisson ratios violate thermodynamic stability")

    @classmethod
    def from_sampled(cls, t_x: float, t_y: float, e_x: float, e_y: float, nu_xy: float) -> "OrthoParams":
        nu_yx = nu_xy * e_y / e_x
        g_xy = 0.5 * (e_x / (2 * (1 + nu_xy)) + e_y / (2 * (1 + nu_yx)))
        return cls(t_x=t_x, t_y=t_y, e_x=e_x, e_y=e_y, nu_xy=nu_xy, nu_yx=nu_yx, g_xy=g_xy)

    def branch_features(self) -> np.ndarray:
        """The six quantities the operator's branch network consumes."""
        return np.array([self.t_x, self.t_y, self.e_x, self.e_y, self.nu_xy, self.g_xy])


def sample_ortho_params(rng: np.random.Generator) -> OrthoParams:
    """Draw tractions, moduli and nu_xy uniformly; derive the rest."""
    return OrthoParams.from_sampled(
        t_x=rng.uniform(*TRACTION_RANGE),
        t_y=rng.uniform(*TRACTION_RANGE),
        e_x=rng.uniform(*MODULUS_RANGE),
        e_y=rng.uniform(*MODULUS_RANGE),
        nu_xy=rng.uniform(*POISSON_RANGE),
    )


def elasticity_matrix(params: OrthoParams) -> np.ndarray:
    """Plane-stress stiffness: inverse of the orthotropic compliance matrix."""
    s = np.array(
        [
            [1.0 / params.e_x, -params.nu_xy / params.e_x, 0.0],
            [-params.nu_yx / params.e_y, 1.0 / params.e_y, 0.0],
            [0.0, 0.0, 1.0 / params.g_xy],
        ]
    )
    return np.linalg.inv(s)


def traction_loads(mesh: FemMesh, t_x: float, t_y: float) -> np.ndarray:
    """Consistent nodal forces for a constant traction on the top edge."""
    f = np.zeros(2 * mesh.num_nodes)
    segs = mesh.top_edges()
    length = mesh.nodes[segs[:, 1], 0] - mesh.nodes[segs[:, 0], 0]
    half = 0.5 * length[:, None]
    np.add.at(f, 2 * segs, t_x * half)
    np.add.at(f, 2 * segs + 1, t_y * half)
    return f


def solve_ortho_fem(params: OrthoParams, mesh: FemMesh) -> tuple[np.ndarray, np.ndarray]:
    """Nodal displacements (num_nodes, 2) and their magnitudes (num_nodes,)."""
    d = elasticity_matrix(params)
    ke = element_stiffness_elastic(mesh, d)
    k = assemble(vector_dofs(mesh.elements), ke, 2 * mesh.num_nodes)
    f = traction_loads(mesh, params.t_x, params.t_y)
    fixed = np.concatenate([2 * mesh.boundary["bottom"] + 1, 2 * mesh.boundary["right"]])
    fixed = np.unique(fixed)
    free, k_ff, f_f = eliminate_dirichlet(k, f, fixed, np.zeros(fixed.size))
    u = np.zeros(2 * mesh.num_nodes)
    u[free] = LinearSolver(k_ff).solve(f_f)
    disp = u.reshape(-1, 2)
    return disp, np.hypot(disp[:, 0], disp[:, 1])


def gen_ortho_dataset(num_samples: int, seed: int = 0, nx: int = 32, ny: int = 32) -> Dataset:
    """Sampled plane-stress solves: branch features -> displacement magnitude.

    Sample i draws its parameters from RNG stream i, so generation order
    does not affect the data. Targets are nodal magnitudes on the shared
    mesh; an 80/20 split is applied.
    """
    if num_samples < 2:
        raise ValueError("need at least 2 samples")
    mesh = FemMesh.unit_square(nx, ny)
    branch = np.empty((num_samples, 6))
    targets = np.empty((num_samples, mesh.num_nodes))
    for i in range(num_samples):
        params = sample_ortho_params(make_rng(seed, stream=i))
        branch[i] = params.branch_features()
        _, targets[i] = solve_ortho_fem(params, mesh)
    ds = Dataset(branch_inputs=branch, targets=targets, coords=mesh.nodes.copy())
    return split_dataset(ds, 0.8, seed)
