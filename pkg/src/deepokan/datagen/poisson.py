"""Transient Poisson problem with a spline-interpolated right-edge BC.

The PDE du/dt = laplace(u) on the unit square starts from u = 0 and is
driven by a time-dependent Dirichlet value on the right edge (u = 0 on the
left edge, zero flux top and bottom). Time integration is backward Euler
over the same 100 stamps at which the boundary series is sampled, so each
stored frame has an exactly matching boundary value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NumericalError
from ..rng import make_rng
from .dataset import Dataset, split_dataset
from .fem import LinearSolver, assemble, element_matrices_scalar
from .mesh import FemMesh

NUM_STEPS = 100  # stored time frames, including t = 0
NUM_CONTROL = 6  # spline control points, including the fixed origin
CONTROL_SIGMA = 0.5


@dataclass
class BcSeries:
    """Boundary series: spline through 6 control points, sampled at 100 times."""

    control_points: np.ndarray  # (6, 2) rows of (time, value), first (0, 0)
    values: np.ndarray  # (100,) spline evaluations at even times in [0, T]
    t_final: float

    def __post_init__(self):
        self.control_points = np.asarray(self.control_points, dtype=np.float64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.control_points.shape != (NUM_CONTROL, 2):
            raise ValueError(f"expected {NUM_CONTROL} control points")
        if self.control_points[0, 0] != 0.0 or self.control_points[0, 1] != 0.0:
            raise ValueError("first control point must be the origin")
        if np.any(np.abs(self.control_points[:, 1]) > 1.0):
            raise ValueError("control values must lie in [-1, 1]")
        if self.values.shape != (NUM_STEPS,):
            raise ValueError(f"expected {NUM_STEPS} series values")
        if self.values[0] != 0.0:
            raise ValueError("series must start at 0")
        if not self.t_final > 0:
            raise ValueError("final time must be positive")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, NUM_STEPS)


def gen_poisson_bc(rng: np.random.Generator, t_final: float = 1.0) -> BcSeries:
    """Five N(0, 0.5) control values clipped to [-1, 1], splined to 100 times."""
    from .spline import natural_cubic_spline

    if not t_final > 0:
        raise ValueError("final time must be positive")
    times = np.linspace(0.0, t_final, NUM_CONTROL)
    vals = np.concatenate([[0.0], np.clip(rng.normal(0.0, CONTROL_SIGMA, NUM_CONTROL - 1), -1.0, 1.0)])
    spline = natural_cubic_spline(np.column_stack([times, vals]))
    series = spline(np.linspace(0.0, t_final, NUM_STEPS))
    series[0] = 0.0  # exact by interpolation; pin against rounding
    return BcSeries(control_points=np.column_stack([times, vals]), values=series, t_final=t_final)


class TransientPoissonSolver:
    """Backward-Euler integrator with a factorization reused across samples.

    Each step solves (M/dt + K) u = M u_prev / dt on the free nodes with
    u = 0 on the left edge and u = bc(t) on the right edge. The reduced
    matrix is constant, so it is factorized once per mesh.
    """

    def __init__(self, mesh: FemMesh, t_final: float = 1.0):
        self.mesh = mesh
        self.t_final = t_final
        self.dt = t_final / (NUM_STEPS - 1)
        ke, me = element_matrices_scalar(mesh)
        n = mesh.num_nodes
        stiff = assemble(mesh.elements, ke, n)
        self.mass = assemble(mesh.elements, me, n)
        system = (self.mass / self.dt + stiff).tocsr()
        self.left = mesh.boundary["left"]
        self.right = mesh.boundary["right"]
        fixed = np.unique(np.concatenate([self.left, self.right]))
        self.fixed = fixed
        self.free = np.setdiff1d(np.arange(n), fixed)
        self.a_ff = system[self.free][:, self.free].tocsr()
        self.a_fc = system[self.free][:, fixed].tocsr()
        self.solver = LinearSolver(self.a_ff)

    def run(self, bc: BcSeries) -> np.ndarray:
        """Field history (100, num_nodes); the first frame is all zeros."""
        if bc.t_final != self.t_final:
            raise ValueError("boundary series horizon differs from the solver's")
        n = self.mesh.num_nodes
        history = np.zeros((NUM_STEPS, n))
        u = np.zeros(n)
        fixed_vals = np.zeros(self.fixed.size)
        right_pos = np.searchsorted(self.fixed, self.right)
        for k in range(1, NUM_STEPS):
            rhs = self.mass @ u / self.dt
            fixed_vals[:] = 0.0
            fixed_vals[right_pos] = bc.values[k]
            rhs_f = rhs[self.free] - self.a_fc @ fixed_vals
            try:
                u_f = self.solver.solve(rhs_f)
            except NumericalError as exc:
                raise NumericalError(f"time step {k} failed: {exc}") from exc
            u = np.zeros(n)
            u[self.free] = u_f
            u[self.fixed] = fixed_vals
            history[k] = u
        return history


def solve_transient_poisson(bc: BcSeries, mesh: FemMesh) -> np.ndarray:
    """One-shot convenience wrapper around TransientPoissonSolver."""
    return TransientPoissonSolver(mesh, t_final=bc.t_final).run(bc)


def gen_poisson_dataset(
    num_samples: int, seed: int = 0, nx: int = 32, ny: int = 32, t_final: float = 1.0
) -> Dataset:
    """Boundary-series samples mapped to full transient field histories.

    Branch inputs are the 100-value series; targets are
    (num_samples, num_nodes, 100) so each coordinate carries its time
    history. Sample i draws its control points from RNG stream i.
    """
    if num_samples < 2:
        raise ValueError("need at least 2 samples")
    mesh = FemMesh.unit_square(nx, ny)
    solver = TransientPoissonSolver(mesh, t_final=t_final)
    branch = np.empty((num_samples, NUM_STEPS))
    targets = np.empty((num_samples, mesh.num_nodes, NUM_STEPS))
    for i in range(num_samples):
        bc = gen_poisson_bc(make_rng(seed, stream=i), t_final=t_final)
        branch[i] = bc.values
        targets[i] = solver.run(bc).T
    ds = Dataset(branch_inputs=branch, targets=targets, coords=mesh.nodes.copy())
    return split_dataset(ds, 0.8, seed)
