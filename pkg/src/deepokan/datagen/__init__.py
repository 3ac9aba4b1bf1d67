"""Ground-truth data generation: waves, elasticity, splines, Poisson."""

from .dataset import Dataset, split_dataset
from .fem import LinearSolver, assemble, eliminate_dirichlet
from .mesh import FemMesh
from .ortho import OrthoParams, gen_ortho_dataset, sample_ortho_params, solve_ortho_fem
from .poisson import (
    BcSeries,
    TransientPoissonSolver,
    gen_poisson_bc,
    gen_poisson_dataset,
    solve_transient_poisson,
)
from .spline import NaturalCubicSpline, natural_cubic_spline
from .waves import (
    gen_wave1,
    gen_wave2,
    gen_wave_operator_dataset,
    wave1,
    wave2,
    wave_regression_dataset,
)

__all__ = [
    "Dataset",
    "split_dataset",
    "LinearSolver",
    "assemble",
    "eliminate_dirichlet",
    "FemMesh",
    "OrthoParams",
    "gen_ortho_dataset",
    "sample_ortho_params",
    "solve_ortho_fem",
    "BcSeries",
    "TransientPoissonSolver",
    "gen_poisson_bc",
    "gen_poisson_dataset",
    "solve_transient_poisson",
    "NaturalCubicSpline",
    "natural_cubic_spline",
    "wave1",
    "wave2",
    "gen_wave1",
    "gen_wave2",
    "gen_wave_operator_dataset",
    "wave_regression_dataset",
]
