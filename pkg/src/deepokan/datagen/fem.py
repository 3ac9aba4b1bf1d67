"""Bilinear-quad finite element machinery shared by both PDE pipelines.

Element integrals use 2x2 Gauss quadrature, exact for the bilinear shape
functions on the structured meshes used here. Assembly is vectorized over
elements into sparse COO triplets. Constrained systems are reduced by
eliminating Dirichlet rows/columns; the reduced solve goes through a direct
sparse factorization up to a size cutoff and Jacobi-preconditioned
conjugate gradients beyond it, with an explicit residual check either way.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from ..errors import NumericalError
from .mesh import FemMesh

DIRECT_LIMIT = 5000  # max unknowns for the direct factorization path
RESIDUAL_TOL = 1e-10

_G = 1.0 / np.sqrt(3.0)
GAUSS_POINTS = np.array([[-_G, -_G], [_G, -_G], [_G, _G], [-_G, _G]])


def shape_functions(xi: float, eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Values (4,) and reference gradients (2, 4) of the bilinear quad."""
    n = 0.25 * np.array(
        [(1 - xi) * (1 - eta), (1 + xi) * (1 - eta), (1 + xi) * (1 + eta), (1 - xi) * (1 + eta)]
    )
    dn = 0.25 * np.array(
        [
            [-(1 - eta), (1 - eta), (1 + eta), -(1 + eta)],
            [-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)],
        ]
    )
    return n, dn


def _gauss_geometry(mesh: FemMesh, dn: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-element physical gradients (E, 2, 4) and Jacobian dets (E,)."""
    coords = mesh.nodes[mesh.elements]  # (E, 4, 2)
    jac = np.einsum("ab,ebc->eac", dn, coords)  # (E, 2, 2)
    det = jac[:, 0, 0] * jac[:, 1, 1] - jac[:, 0, 1] * jac[:, 1, 0]
    if np.any(det <= 0):
        raise ValueError("degenerate or inverted element")
    inv = np.empty_like(jac)
    inv[:, 0, 0] = jac[:, 1, 1]
    inv[:, 1, 1] = jac[:, 0, 0]
    inv[:, 0, 1] = -jac[:, 0, 1]
    inv[:, 1, 0] = -jac[:, 1, 0]
    inv /= det[:, None, None]
    grad = np.einsum("eab,bc->eac", inv, dn)
    return grad, det


def element_matrices_scalar(mesh: FemMesh) -> tuple[np.ndarray, np.ndarray]:
    """Stiffness and consistent mass (E, 4, 4) for the scalar Laplacian."""
    num = mesh.elements.shape[0]
    ke = np.zeros((num, 4, 4))
    me = np.zeros((num, 4, 4))
    for xi, eta in GAUSS_POINTS:
        n, dn = shape_functions(xi, eta)
        grad, det = _gauss_geometry(mesh, dn)
        ke += np.einsum("eai,eaj->eij", grad, grad) * det[:, None, None]
        me += np.outer(n, n)[None, :, :] * det[:, None, None]
    return ke, me


def element_stiffness_elastic(mesh: FemMesh, d_matrix: np.ndarray) -> np.ndarray:
    """Plane-stress stiffness (E, 8, 8); dof order x0, y0, x1, y1, ..."""
    num = mesh.elements.shape[0]
    ke = np.zeros((num, 8, 8))
    b = np.zeros((num, 3, 8))
    for xi, eta in GAUSS_POINTS:
        _, dn = shape_functions(xi, eta)
        grad, det = _gauss_geometry(mesh, dn)
        b[:] = 0.0
        b[:, 0, 0::2] = grad[:, 0, :]
        b[:, 1, 1::2] = grad[:, 1, :]
        b[:, 2, 0::2] = grad[:, 1, :]
        b[:, 2, 1::2] = grad[:, 0, :]
        ke += np.einsum("eik,ij,ejl->ekl", b, d_matrix, b) * det[:, None, None]
    return ke


def assemble(element_dofs: np.ndarray, element_mats: np.ndarray, num_dofs: int) -> sp.csr_matrix:
    """Sum element matrices into a global CSR matrix (COO duplicates merge)."""
    k = element_dofs.shape[1]
    rows = np.repeat(element_dofs, k, axis=1).ravel()
    cols = np.tile(element_dofs, (1, k)).ravel()
    mat = sp.coo_matrix((element_mats.ravel(), (rows, cols)), shape=(num_dofs, num_dofs))
    return mat.tocsr()


def vector_dofs(elements: np.ndarray) -> np.ndarray:
    """Interleaved (x, y) dof indices (E, 8) from node connectivity (E, 4)."""
    dofs = np.empty((elements.shape[0], 8), dtype=np.int64)
    dofs[:, 0::2] = 2 * elements
    dofs[:, 1::2] = 2 * elements + 1
    return dofs


def eliminate_dirichlet(
    a: sp.csr_matrix, b: np.ndarray, fixed_idx: np.ndarray, fixed_vals: np.ndarray
) -> tuple[np.ndarray, sp.csr_matrix, np.ndarray]:
    """Reduce to the free unknowns; returns (free_idx, A_ff, adjusted rhs)."""
    n = a.shape[0]
    free = np.setdiff1d(np.arange(n), fixed_idx, assume_unique=False)
    a_ff = a[free][:, free].tocsr()
    b_f = b[free] - a[free][:, fixed_idx] @ fixed_vals
    return free, a_ff, b_f


class LinearSolver:
    """Reusable solver for one sparse SPD matrix.

    Factorizes once with a sparse LU up to DIRECT_LIMIT unknowns; larger
    systems fall back to Jacobi-preconditioned conjugate gradients. Every
    solve verifies the residual against RESIDUAL_TOL.
    """

    def __init__(self, a: sp.csr_matrix):
        self.a = a.tocsr()
        self.n = a.shape[0]
        if self.n <= DIRECT_LIMIT:
            self.factor = splu(self.a.tocsc())
            self.inv_diag = None
        else:
            self.factor = None
            diag = self.a.diagonal()
            if np.any(diag <= 0):
                raise NumericalError("non-positive diagonal; matrix is not SPD")
            self.inv_diag = 1.0 / diag

    def solve(self, b: np.ndarray) -> np.ndarray:
        if self.factor is not None:
            x = self.factor.solve(b)
        else:
            x = self._pcg(b)
        res = np.linalg.norm(self.a @ x - b)
        if not res <= RESIDUAL_TOL * max(1.0, np.linalg.norm(b)):
            raise NumericalError(f"linear solve residual {res:.3e} exceeds tolerance")
        return x

    def _pcg(self, b: np.ndarray, max_iter: int | None = None) -> np.ndarray:
        a, inv_diag = self.a, self.inv_diag
        max_iter = max_iter or 20 * self.n
        x = np.zeros_like(b)
        r = b.copy()
        z = inv_diag * r
        p = z.copy()
        rz = r @ z
        b_norm = max(1.0, np.linalg.norm(b))
        for _ in range(max_iter):
            if np.linalg.norm(r) <= 0.1 * RESIDUAL_TOL * b_norm:
                return x
            ap = a @ p
            alpha = rz / (p @ ap)
            x += alpha * p
            r -= alpha * ap
            z = inv_diag * r
            rz_new = r @ z
            p = z + (rz_new / rz) * p
            rz = rz_new
        if np.linalg.norm(r) <= RESIDUAL_TOL * b_norm:
            return x
        raise NumericalError("conjugate gradients failed to converge")
