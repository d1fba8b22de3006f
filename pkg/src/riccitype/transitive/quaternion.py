"""Quaternion double-cover machinery and the tangent-sphere orbit-rank bound.

Left and right multiplication by unit quaternions give the two SU(2)
factors of SO(4); the symmetric traceless part of sl(4, R) is parametrized
by a bilinear map eta equivariant under both factors.  For any nonzero
w in R^3, the span su(2)_L + {eta(v, w) : v} has fundamental-field rank at
most 5 at the base point (u = e1, w = 0) of the tangent-sphere chart of
the positive-case model with n = 3, one short of the dimension 6 needed
for a transitive orbit.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

from ..core import build_model
from ..geometry import act_tangent_sphere


def cross_matrix(v: np.ndarray) -> np.ndarray:
    """Matrix of x -> v x (cross product)."""
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def q_left_matrix(q: np.ndarray) -> np.ndarray:
    """Matrix of x -> q x on R^4 = H, q = (q0, vec)."""
    q = np.asarray(q, dtype=float)
    q0, vec = q[0], q[1:]
    out = np.zeros((4, 4))
    out[0, 0] = q0
    out[0, 1:] = -vec
    out[1:, 0] = vec
    out[1:, 1:] = q0 * np.eye(3) + cross_matrix(vec)
    return out


def q_right_matrix(q: np.ndarray) -> np.ndarray:
    """Matrix of x -> x q^{-1} on R^4 for unit q."""
    q = np.asarray(q, dtype=float)
    q0, vec = q[0], q[1:]
    out = np.zeros((4, 4))
    out[0, 0] = q0
    out[0, 1:] = vec
    out[1:, 0] = -vec
    out[1:, 1:] = q0 * np.eye(3) + cross_matrix(vec)
    return out


def rotation_matrix(q: np.ndarray) -> np.ndarray:
    """SO(3) rotation of the conjugation x -> q x q^{-1} for unit q.

    R(q) v = (q0^2 - |vec|^2) v + 2 q0 (vec x v) + 2 (vec . v) vec
    """
    q = np.asarray(q, dtype=float)
    q0, vec = q[0], q[1:]
    return ((q0 * q0 - vec @ vec) * np.eye(3)
            + 2.0 * q0 * cross_matrix(vec)
            + 2.0 * np.outer(vec, vec))


def eta(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Symmetric traceless 4x4 block matrix pairing two vectors of R^3.

    eta(x, y) = [[x.y, (y x x)^T], [y x x, x y^T + y x^T - (x.y) I]]
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    cross = np.cross(y, x)
    out = np.zeros((4, 4))
    out[0, 0] = x @ y
    out[0, 1:] = cross
    out[1:, 0] = cross
    out[1:, 1:] = np.outer(x, y) + np.outer(y, x) - (x @ y) * np.eye(3)
    return out


def equivariance_residuals(q: np.ndarray, x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Residuals of q_L eta q_L^{-1} = eta(R x, y) and q_R eta q_R^{-1} = eta(x, R y)."""
    ql, qr, rot = q_left_matrix(q), q_right_matrix(q), rotation_matrix(q)
    e = eta(x, y)
    left = np.max(np.abs(ql @ e @ ql.T - eta(rot @ x, y)))
    right = np.max(np.abs(qr @ e @ qr.T - eta(x, rot @ y)))
    return float(left), float(right)


def su2_left_basis() -> list[np.ndarray]:
    """Generators of the left-multiplication su(2) inside so(4)."""
    return [q_left_matrix(np.concatenate([[0.0], e])) for e in np.eye(3)]


def tangent_sphere_field(x_mat: np.ndarray, u: np.ndarray, w: np.ndarray,
                         k: float = 1.0, fd_step: float = 1e-6) -> np.ndarray:
    """Fundamental field of a gl(n+1) generator on the tangent-sphere chart."""
    b_minus = expm(-fd_step * x_mat)
    b_plus = expm(fd_step * x_mat)
    up, wp = act_tangent_sphere(b_minus, u, w, k)
    um, wm = act_tangent_sphere(b_plus, u, w, k)
    return np.concatenate([up - um, wp - wm]) / (2.0 * fd_step)


def orbit_rank_ts3_evidence(w: np.ndarray, k: float = 1.0,
                            fd_step: float = 1e-6) -> dict:
    """Rank bound for su(2)_L + eta(. , w) at the base point of TS^3.

    Returns the stacked-field singular values, the rank (expected <= 5 < 6),
    the rank of the su(2)_L fields alone (expected 3) and the norm of the
    field of the stabilizer element eta(w, w).
    """
    w = np.asarray(w, dtype=float)
    if w.shape != (3,) or np.max(np.abs(w)) == 0.0:
        raise ValueError("w must be a nonzero vector in R^3")
    build_model("hyperbolic", 3, k=k)  # parameter validation only
    u0 = np.array([1.0, 0.0, 0.0, 0.0])
    w0 = np.zeros(4)
    gens = su2_left_basis() + [eta(v, w) for v in np.eye(3)]
    fields = np.stack([tangent_sphere_field(g, u0, w0, k, fd_step) for g in gens], axis=1)
    svals = np.linalg.svd(fields, compute_uv=False)
    rank = int(np.sum(svals > 1e-7 * max(svals[0], 1.0)))
    su2_fields = fields[:, :3]
    su2_rank = int(np.linalg.matrix_rank(su2_fields, tol=1e-9))
    stab_field = tangent_sphere_field(eta(w, w), u0, w0, k, fd_step)
    return {
        "singular_values": svals,
        "rank": rank,
        "dim_needed": 6,
        "su2_rank": su2_rank,
        "stabilizer_field_norm": float(np.max(np.abs(stab_field))),
        "passed": rank <= 5 and su2_rank == 3,
    }
