"""Generic numerical machinery for matrix Lie subalgebras.

Subspaces of gl(N, R) are carried as lists of basis matrices; span
arithmetic flattens matrices to vectors and uses rank-revealing SVD with a
relative threshold.  All operations optionally work modulo a distinguished
line (or subspace), which realizes quotient algebras concretely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space

from .core import SymplecticModel, as_matrix

#: relative singular-value threshold for rank decisions
RANK_RTOL = 1e-7


def bracket(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Commutator XY - YX."""
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    return x @ y - y @ x


@dataclass
class MatrixLieSubspace:
    """Span of a list of N x N matrices, with numerically independent basis."""

    ambient_dim: int
    basis: list[np.ndarray]
    tol: float = 1e-9
    _row_space: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def stacked(self) -> np.ndarray:
        """dim x N^2 matrix of flattened basis elements."""
        n2 = self.ambient_dim ** 2
        if not self.basis:
            return np.zeros((0, n2))
        return np.stack([b.reshape(-1) for b in self.basis])

    def row_space(self) -> np.ndarray:
        """Orthonormal rows spanning the flattened basis (cached)."""
        if self._row_space is None:
            stack = self.stacked()
            if stack.shape[0] == 0:
                self._row_space = stack
            else:
                _, s, vt = np.linalg.svd(stack, full_matrices=False)
                keep = s > RANK_RTOL * s[0]
                self._row_space = vt[keep]
        return self._row_space

    def distance(self, x: np.ndarray) -> float:
        """Sup-norm distance from x to the span."""
        v = x.reshape(-1)
        q = self.row_space()
        if q.shape[0] == 0:
            return float(np.max(np.abs(v))) if v.size else 0.0
        return float(np.max(np.abs(v - q.T @ (q @ v))))

    def contains(self, x: np.ndarray, tol: float | None = None) -> bool:
        return self.distance(x) <= (self.tol if tol is None else tol)

    def project_out(self, x: np.ndarray) -> np.ndarray:
        """Component of x orthogonal to the span (flattened metric)."""
        v = x.reshape(-1)
        q = self.row_space()
        if q.shape[0] == 0:
            return x
        return (v - q.T @ (q @ v)).reshape(x.shape)

    def coordinates(self, x: np.ndarray) -> np.ndarray:
        """Least-squares coefficients of x in the basis."""
        stack = self.stacked()
        coeff, *_ = np.linalg.lstsq(stack.T, x.reshape(-1), rcond=None)
        return coeff

    def smallest_singular_ratio(self) -> float:
        stack = self.stacked()
        if stack.shape[0] == 0:
            return 1.0
        s = np.linalg.svd(stack, compute_uv=False)
        return float(s[-1] / s[0])


#: matrices below this max-norm count as zero (inputs are kept at unit scale)
ZERO_FLOOR = 1e-12


def subspace_from_matrices(mats, ambient_dim: int, tol: float = 1e-9) -> MatrixLieSubspace:
    """Rank-reduce a list of matrices to an independent spanning set."""
    mats = [np.asarray(m, dtype=float) for m in mats]
    mats = [m for m in mats if np.max(np.abs(m)) > ZERO_FLOOR]
    if not mats:
        return MatrixLieSubspace(ambient_dim, [], tol)
    stack = np.stack([m.reshape(-1) for m in mats])
    _, s, vt = np.linalg.svd(stack, full_matrices=False)
    keep = s > np.maximum(RANK_RTOL * s[0], ZERO_FLOOR)
    basis = [row.reshape(ambient_dim, ambient_dim) for row in vt[keep]]
    return MatrixLieSubspace(ambient_dim, basis, tol)


def _reduce(x: np.ndarray, modulo: MatrixLieSubspace | None) -> np.ndarray:
    return x if modulo is None else modulo.project_out(x)


def line(x: np.ndarray, tol: float = 1e-9) -> MatrixLieSubspace:
    """The one-dimensional span of a single matrix."""
    return subspace_from_matrices([x], x.shape[0], tol)


def centralizer_in_sp(model: SymplecticModel, a, tol: float = 1e-9,
                      exact: bool = False) -> MatrixLieSubspace:
    """Basis of {X : tX Omega + Omega X = 0 and XA = AX}.

    Solved as one SVD nullspace of the stacked linear constraints on
    vec(X).  With exact=True a rational-arithmetic nullspace cross-checks
    the dimension (entries of Omega and A are rational for k = 1).
    """
    amat = as_matrix(a)
    omega = model.omega
    dim = model.ambient_dim
    ident = np.eye(dim)
    # row-major vec: vec(MX) = (M kron I) v, vec(XM) = (I kron tM) v
    transpose_perm = np.zeros((dim * dim, dim * dim))
    for i in range(dim):
        for j in range(dim):
            transpose_perm[i * dim + j, j * dim + i] = 1.0
    sp_rows = np.kron(ident, omega.T) @ transpose_perm + np.kron(omega, ident)
    comm_rows = np.kron(ident, amat.T) - np.kron(amat, ident)
    system = np.vstack([sp_rows, comm_rows])
    kernel = null_space(system, rcond=RANK_RTOL)
    basis = [kernel[:, j].reshape(dim, dim) for j in range(kernel.shape[1])]
    sub = MatrixLieSubspace(dim, basis, tol)
    if exact:
        from .exact import rational_nullspace_dimension
        exact_dim = rational_nullspace_dimension(system)
        if exact_dim != sub.dim:
            raise RuntimeError(
                f"floating nullspace dim {sub.dim} != exact dim {exact_dim}")
    return sub


def closure_residual(s: MatrixLieSubspace,
                     modulo: MatrixLieSubspace | None = None) -> float:
    """Max distance of pairwise basis brackets from the span (mod ``modulo``)."""
    res = 0.0
    span = s if modulo is None else subspace_from_matrices(
        s.basis + modulo.basis, s.ambient_dim, s.tol)
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            res = max(res, span.distance(bracket(s.basis[i], s.basis[j])))
    return res


def involution_eigenspace(s: MatrixLieSubspace, theta, sign: int,
                          tol: float = 1e-9) -> MatrixLieSubspace:
    """(+1)- or (-1)-eigenspace of an involutive map theta preserving s."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if s.dim == 0:
        return MatrixLieSubspace(s.ambient_dim, [], s.tol)
    images = [theta(b) for b in s.basis]
    t_mat = np.zeros((s.dim, s.dim))
    for j, img in enumerate(images):
        if s.distance(img) > 1e-7:
            raise ValueError("theta does not preserve the subspace")
        t_mat[:, j] = s.coordinates(img)
    if np.max(np.abs(t_mat @ t_mat - np.eye(s.dim))) > 1e-7:
        raise ValueError("theta is not involutive on the subspace")
    kernel = null_space(t_mat - sign * np.eye(s.dim), rcond=RANK_RTOL)
    basis = []
    for j in range(kernel.shape[1]):
        mat = sum(c * b for c, b in zip(kernel[:, j], s.basis))
        basis.append(mat)
    return subspace_from_matrices(basis, s.ambient_dim, tol)


def bracket_span(s1: MatrixLieSubspace, s2: MatrixLieSubspace,
                 modulo: MatrixLieSubspace | None = None) -> MatrixLieSubspace:
    """Span of all pairwise brackets [s1, s2], reduced mod ``modulo``."""
    if s1.ambient_dim != s2.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    mats = [_reduce(bracket(b1, b2), modulo) for b1 in s1.basis for b2 in s2.basis]
    return subspace_from_matrices(mats, s1.ambient_dim, s1.tol)


def center(s: MatrixLieSubspace,
           modulo: MatrixLieSubspace | None = None) -> MatrixLieSubspace:
    """Elements commuting with everything in s (mod ``modulo``)."""
    if s.dim == 0:
        return s
    # solve sum_i c_i [b_i, b_j] = 0 (mod `modulo`) for all j
    system = np.concatenate(
        [np.stack([_reduce(bracket(bi, bj), modulo).reshape(-1) for bi in s.basis], axis=1)
         for bj in s.basis], axis=0)
    kernel = null_space(system, rcond=RANK_RTOL)
    basis = []
    for c in kernel.T:
        basis.append(sum(ci * bi for ci, bi in zip(c, s.basis)))
    return subspace_from_matrices(basis, s.ambient_dim, s.tol)


@dataclass
class StructureCertificate:
    """Series dimensions and structural flags of a bracket-closed subspace."""

    dimension: int
    derived_series_dims: list[int]
    lower_central_dims: list[int]
    center_dim: int
    abelian: bool
    solvable: bool
    nilpotent: bool
    heisenberg: bool


def _series(s: MatrixLieSubspace, against_self: bool,
            modulo: MatrixLieSubspace | None) -> list[int]:
    dims = [s.dim]
    current = s
    while current.dim > 0:
        nxt = bracket_span(current if against_self else s, current, modulo=modulo)
        if nxt.dim >= current.dim:
            dims.append(nxt.dim)
            break
        dims.append(nxt.dim)
        current = nxt
    return dims


def series_certificate(s: MatrixLieSubspace,
                       modulo: MatrixLieSubspace | None = None,
                       closure_tol: float = 1e-8) -> StructureCertificate:
    """Derived/lower-central series dims and abelian/solvable/nilpotent/heisenberg flags."""
    if closure_residual(s, modulo=modulo) > closure_tol:
        raise ValueError("subspace is not closed under the bracket")
    derived = _series(s, against_self=True, modulo=modulo)
    lower = _series(s, against_self=False, modulo=modulo)
    cent = center(s, modulo=modulo)
    solvable = derived[-1] == 0
    nilpotent_flag = lower[-1] == 0
    abelian = s.dim == 0 or derived[1] == 0
    heis = _heisenberg_flag(s, cent, modulo)
    return StructureCertificate(
        dimension=s.dim,
        derived_series_dims=derived,
        lower_central_dims=lower,
        center_dim=cent.dim,
        abelian=abelian,
        solvable=solvable,
        nilpotent=nilpotent_flag,
        heisenberg=heis,
    )


def _heisenberg_flag(s: MatrixLieSubspace, cent: MatrixLieSubspace,
                     modulo: MatrixLieSubspace | None) -> bool:
    # center dim 1, derived algebra equal to the center, and the induced
    # antisymmetric form on s/center nondegenerate (equivalently dim odd)
    if s.dim < 3 or s.dim % 2 == 0 or cent.dim != 1:
        return False
    derived = bracket_span(s, s, modulo=modulo)
    if derived.dim != 1 or cent.distance(derived.basis[0]) > 1e-7:
        return False
    z = cent.basis[0]
    z_norm_sq = float(z.reshape(-1) @ z.reshape(-1))
    lam = np.zeros((s.dim, s.dim))
    for i in range(s.dim):
        for j in range(i + 1, s.dim):
            br = _reduce(bracket(s.basis[i], s.basis[j]), modulo)
            lam[i, j] = float(br.reshape(-1) @ z.reshape(-1)) / z_norm_sq
            lam[j, i] = -lam[i, j]
    rank = int(np.linalg.matrix_rank(lam, tol=1e-8))
    return rank == s.dim - 1


def ad_matrix(s: MatrixLieSubspace, x: np.ndarray,
              modulo: MatrixLieSubspace | None = None) -> np.ndarray:
    """Matrix of ad(x) = [x, .] in the basis coordinates of s."""
    mat = np.zeros((s.dim, s.dim))
    for j, b in enumerate(s.basis):
        img = _reduce(bracket(x, b), modulo)
        if s.distance(img) > 1e-6:
            raise ValueError("ad(x) does not preserve the subspace")
        mat[:, j] = s.coordinates(img)
    return mat


def ad_eigenvalues(s: MatrixLieSubspace, x: np.ndarray,
                   modulo: MatrixLieSubspace | None = None) -> np.ndarray:
    """Complex eigenvalue multiset of ad(x) on s, sorted by (re, im)."""
    vals = np.linalg.eigvals(ad_matrix(s, x, modulo=modulo))
    order = np.lexsort((vals.imag, vals.real))
    return vals[order]


def _null_space_atol(mat: np.ndarray, atol: float) -> np.ndarray:
    """Right null space with an absolute singular-value cutoff."""
    _, s, vt = np.linalg.svd(mat)
    num = int(np.sum(s <= atol)) + max(0, mat.shape[1] - mat.shape[0])
    if num == 0:
        return np.zeros((mat.shape[1], 0))
    return vt[len(vt) - num:].T


def ad_eigenspaces(s: MatrixLieSubspace, x: np.ndarray,
                   cluster_tol: float = 1e-6,
                   modulo: MatrixLieSubspace | None = None) -> dict[float, MatrixLieSubspace]:
    """Real eigen-decomposition of ad(x) on s, eigenvalues clustered.

    Raises if ad(x) is not diagonalizable over R (complex or defective
    eigenstructure at the given tolerance).
    """
    mat = ad_matrix(s, x, modulo=modulo)
    vals = np.linalg.eigvals(mat)
    if np.max(np.abs(vals.imag)) > cluster_tol:
        raise ValueError("ad(x) has non-real eigenvalues; not split over R")
    reals = np.sort(vals.real)
    clusters: list[list[float]] = []
    for v in reals:
        if clusters and abs(v - clusters[-1][-1]) <= cluster_tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    out: dict[float, MatrixLieSubspace] = {}
    total = 0
    scale = max(1.0, float(np.max(np.abs(mat))))
    for group in clusters:
        lam = float(np.mean(group))
        kernel = _null_space_atol(mat - lam * np.eye(s.dim), 10 * cluster_tol * scale)
        if kernel.shape[1] != len(group):
            raise ValueError(f"ad(x) defective at eigenvalue {lam:.6g}")
        basis = []
        for c in kernel.T:
            basis.append(sum(ci * bi for ci, bi in zip(c, s.basis)))
        out[lam] = subspace_from_matrices(basis, s.ambient_dim, s.tol)
        total += len(group)
    if total != s.dim:
        raise ValueError("eigenspace dimensions do not fill the subspace")
    return out
