"""Iwasawa-type simply transitive deformations for the negative case with p = 1.

The transvection algebra of the elliptic p = 1 model is su(1, n), realized
as real 2(n+1) matrices through the complex identification z = x + iy.
With the standard rank-one element a of the odd part, the algebra splits
into ad(a)-eigenspaces with eigenvalues {0, +-1, +-2}; n is the sum of the
positive ones (a Heisenberg algebra of dimension 2n - 1) and m is the
centralizer of a in the even part.  Graphs a_phi = {X + phi(X)} over the
line R a, with phi(a) in the maximal torus of m, give a family of solvable
algebras h_phi = a_phi + n whose groups act simply transitively on the
ball chart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm, null_space

from ..core import CharacteristicElement, SymplecticModel, build_model
from ..geometry import ChartPoint, act_chart
from ..lie import (
    MatrixLieSubspace,
    ad_eigenspaces,
    ad_eigenvalues,
    bracket,
    subspace_from_matrices,
)
from ..transvection import TransvectionData, transvection_algebra


def realify(m_complex: np.ndarray) -> np.ndarray:
    """Real 2N x 2N matrix of a C-linear map acting on z = x + iy."""
    re, im = m_complex.real, m_complex.imag
    return np.block([[re, -im], [im, re]])


def rank_one_odd_element(n: int) -> np.ndarray:
    """The standard a = [[0, e1^T], [e1, 0]] of su(1, n), realified."""
    v = np.zeros((n + 1, n + 1), dtype=complex)
    v[0, 1] = 1.0
    v[1, 0] = 1.0
    return realify(v)


def torus_element(n: int, phi_params: np.ndarray) -> np.ndarray:
    """Torus element of m with diagonal angles phi_params, realified.

    diag(-i s/2, -i s/2, i t_1, ..., i t_{n-1}) with s = sum(t); traceless
    and commuting with the rank-one element.
    """
    phi_params = np.asarray(phi_params, dtype=float)
    if phi_params.shape != (n - 1,):
        raise ValueError(f"phi_params must have length n-1 = {n - 1}")
    s = float(np.sum(phi_params))
    diag = np.concatenate([[-0.5j * s, -0.5j * s], 1j * phi_params])
    return realify(np.diag(diag))


@dataclass
class IwasawaData:
    """su(1, n) with its Iwasawa-adapted pieces, all as real matrix subspaces."""

    model: SymplecticModel
    element: CharacteristicElement
    transvection: TransvectionData
    algebra: MatrixLieSubspace        # g = su(1, n)
    compact_part: MatrixLieSubspace   # k = u(n)
    abelian_part: MatrixLieSubspace   # a, one-dimensional
    centralizer_m: MatrixLieSubspace  # m = centralizer of a in k
    nilpotent_part: MatrixLieSubspace  # n = positive ad(a)-eigenspaces
    a_generator: np.ndarray

    @property
    def n(self) -> int:
        return self.model.n


def iwasawa_su1n(n: int, k: float = 1.0) -> IwasawaData:
    """Build su(1, n) inside the elliptic p = 1 model with its Iwasawa pieces."""
    if n < 2:
        raise ValueError("n must be >= 2")
    model, elem = build_model("elliptic", n, k=k, p=1)
    tv = transvection_algebra(model, elem)
    g = tv.algebra
    a_gen = rank_one_odd_element(n)
    if tv.p_part.distance(a_gen / np.linalg.norm(a_gen)) > 1e-9:
        raise RuntimeError("rank-one element is not in the odd part")
    spaces = ad_eigenspaces(g, a_gen)
    pos_bases: list[np.ndarray] = []
    for lam, sub in spaces.items():
        if lam > 0.5:
            pos_bases.extend(sub.basis)
    n_plus = subspace_from_matrices(pos_bases, model.ambient_dim)
    # m = centralizer of a inside k = [p1, p1]
    k_part = tv.k_part
    mats = []
    cols = np.stack([bracket(a_gen, b).reshape(-1) for b in k_part.basis], axis=1)
    kernel = null_space(cols, rcond=1e-9)
    for cvec in kernel.T:
        mats.append(sum(ci * bi for ci, bi in zip(cvec, k_part.basis)))
    m_part = subspace_from_matrices(mats, model.ambient_dim)
    return IwasawaData(
        model=model,
        element=elem,
        transvection=tv,
        algebra=g,
        compact_part=k_part,
        abelian_part=subspace_from_matrices([a_gen], model.ambient_dim),
        centralizer_m=m_part,
        nilpotent_part=n_plus,
        a_generator=a_gen,
    )


def build_a_phi(iw: IwasawaData, phi_params=None, phi_matrix: np.ndarray | None = None
                ) -> tuple[MatrixLieSubspace, MatrixLieSubspace, np.ndarray]:
    """Graph deformation a_phi and the solvable algebra h_phi = a_phi + n.

    phi is given either by torus coordinates (length n-1) or directly as a
    matrix, which must lie in m.  Returns (a_phi, h_phi, deformed generator).
    """
    if phi_matrix is None:
        phi_params = np.zeros(iw.n - 1) if phi_params is None else phi_params
        phi_matrix = torus_element(iw.n, phi_params)
    else:
        phi_matrix = np.asarray(phi_matrix, dtype=float)
    norm = np.linalg.norm(phi_matrix)
    if norm > 0 and iw.centralizer_m.distance(phi_matrix / norm) > 1e-8:
        raise ValueError("phi(a) does not lie in the centralizer m")
    gen = iw.a_generator + phi_matrix
    a_phi = subspace_from_matrices([gen], iw.model.ambient_dim)
    h_phi = subspace_from_matrices([gen] + iw.nilpotent_part.basis, iw.model.ambient_dim)
    return a_phi, h_phi, gen


def ad_spectrum_on_n(iw: IwasawaData, phi_params=None) -> np.ndarray:
    """Complex eigenvalue multiset of ad(a + phi(a)) restricted to n."""
    _, _, gen = build_a_phi(iw, phi_params)
    return ad_eigenvalues(iw.nilpotent_part, gen)


def ball_fundamental_fields(iw: IwasawaData, generators, fd_step: float = 1e-5):
    """Fundamental vector fields on the ball chart by differencing the chart action.

    Group elements exp(-s X) are precomputed per generator; each returned
    callable maps a ball ChartPoint to its 2n tangent coordinates.
    """
    model, elem = iw.model, iw.element
    fields = []
    for x_mat in generators:
        g_minus = expm(-fd_step * x_mat)
        g_plus = expm(fd_step * x_mat)

        def field(cp: ChartPoint, gm=g_minus, gp=g_plus):
            plus = act_chart(model, elem, gm, cp).coords
            minus = act_chart(model, elem, gp, cp).coords
            return (plus - minus) / (2.0 * fd_step)

        fields.append(field)
    return fields


def sample_ball_points(n: int, count: int, seed: int, radius: float = 0.9) -> list[ChartPoint]:
    """Seeded sample of points of the ball chart |w| < 1."""
    rng = np.random.default_rng(seed)
    points = []
    for _ in range(count):
        v = rng.standard_normal(2 * n)
        r = radius * rng.uniform() ** (1.0 / (2 * n))
        w = r * v / np.linalg.norm(v)
        points.append(ChartPoint("elliptic", "ball", w))
    return points
