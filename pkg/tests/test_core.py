"""Model construction, characteristic identities, flows and Sigma_A sampling."""

import numpy as np
import pytest

from riccitype import core


def series_exp(a, t, terms=25):
    acc = np.eye(a.shape[0])
    term = np.eye(a.shape[0])
    for j in range(1, terms):
        term = term @ (t * a) / j
        acc = acc + term
    return acc


@pytest.mark.parametrize("case,n,p,q", core.admissible_parameters((2, 3, 4)))
def test_construction_identities(case, n, p, q):
    model, elem = core.build_model(case, n, k=1.0, p=p or None, q=q or None)
    res = core.characteristic_residuals(model, elem)
    assert res["sp_membership"] <= 1e-12
    assert res["square_identity"] <= 1e-12
    assert res["nonzero"] > 0
    # omega antisymmetric and invertible
    assert np.max(np.abs(model.omega + model.omega.T)) == 0
    assert abs(np.linalg.det(model.omega)) > 1e-6


def test_nilpotent_block_structure():
    model, elem = core.build_model("nilpotent", 2, p=2, q=1)
    a = elem.matrix
    assert np.allclose(a[:2, 4:], np.eye(2))
    a_zeroed = a.copy()
    a_zeroed[:2, 4:] = 0
    assert np.max(np.abs(a_zeroed)) == 0
    # corner blocks -diag(1,-1) / diag(1,-1)
    assert np.allclose(model.omega[:2, 4:], -np.diag([1.0, -1.0]))
    assert np.allclose(model.omega[4:, :2], np.diag([1.0, -1.0]))


def test_hyperbolic_normal_form():
    model, elem = core.build_model("hyperbolic", 2, k=1.0)
    expected = np.zeros((6, 6))
    expected[:3, :3] = np.eye(3)
    expected[3:, 3:] = -np.eye(3)
    assert np.array_equal(elem.matrix, expected)
    assert np.allclose(elem.matrix @ elem.matrix, np.eye(6))


@pytest.mark.parametrize("case,kwargs", [
    ("hyperbolic", {"n": 1}),
    ("hyperbolic", {"n": 3, "k": 0.0}),
    ("hyperbolic", {"n": 3, "k": -2.0}),
    ("elliptic", {"n": 2, "p": 0}),
    ("elliptic", {"n": 2, "p": 4}),
    ("nilpotent", {"n": 2, "p": 2, "q": 3}),
    ("nilpotent", {"n": 2, "p": 4, "q": 1}),
    ("nilpotent", {"n": 2, "p": 2, "q": 0}),
])
def test_build_model_rejects_bad_parameters(case, kwargs):
    with pytest.raises(ValueError):
        core.build_model(case, **kwargs)


def test_build_A_from_ricci_zero_case():
    elem = core.build_A_from_ricci(np.zeros((4, 4)), 0.0, 2)
    a = elem.matrix
    assert np.linalg.matrix_rank(a) == 1
    assert np.max(np.abs(a @ a)) == 0


def test_build_A_from_ricci_positive_square():
    # direct matrix-squaring oracle for rho_check = Id, mu = 1
    elem = core.build_A_from_ricci(np.eye(4), 1.0, 2)
    square = elem.matrix @ elem.matrix
    assert np.max(np.abs(square - np.eye(6) / 36.0)) <= 1e-15
    assert abs(elem.mu - 1.0 / 36.0) <= 1e-15


def test_build_A_from_ricci_negative_square():
    rho = core.standard_symplectic_form(2)  # J with J^2 = -Id, J in sp
    elem = core.build_A_from_ricci(rho, -1.0, 2)
    square = elem.matrix @ elem.matrix
    assert np.max(np.abs(square + np.eye(6) / 36.0)) <= 1e-15


def test_build_A_from_ricci_sp_membership_for_sp_input():
    # rho in sp(4) with rho^2 = Id: paired swap blocks
    rho = np.zeros((4, 4))
    rho[0, 2] = rho[2, 0] = 1.0
    rho[1, 3] = rho[3, 1] = 1.0
    omega4 = core.standard_symplectic_form(2)
    assert core.sp_residual(omega4, rho) == 0
    elem = core.build_A_from_ricci(rho, 1.0, 2)
    assert core.sp_residual(core.ricci_ambient_form(2), elem.matrix) <= 1e-15


def test_build_A_from_ricci_rejects_bad_square():
    with pytest.raises(ValueError):
        core.build_A_from_ricci(np.eye(4), -1.0, 2)
    with pytest.raises(ValueError):
        core.build_A_from_ricci(np.eye(6), 1.0, 2)


@pytest.mark.parametrize("case,n,p,q", [
    ("hyperbolic", 2, None, None),
    ("elliptic", 2, 1, None),
    ("nilpotent", 2, 2, 1),
])
def test_exp_identity_at_zero(case, n, p, q):
    model, elem = core.build_model(case, n, p=p, q=q)
    assert np.array_equal(core.exp_tA(elem.matrix, elem.mu, 0.0), np.eye(model.ambient_dim))


def test_exp_nilpotent_closed_form():
    model, elem = core.build_model("nilpotent", 2, p=2, q=1)
    assert np.array_equal(elem.flow(3.0), np.eye(6) + 3.0 * elem.matrix)


@pytest.mark.parametrize("case,n,p,t", [
    ("hyperbolic", 2, None, 0.7),
    ("elliptic", 2, 1, 0.7),
    ("hyperbolic", 3, None, -2.3),
    ("elliptic", 3, 2, 3.0),
])
def test_exp_matches_series_oracle(case, n, p, t):
    model, elem = core.build_model(case, n, p=p)
    assert np.max(np.abs(elem.flow(t) - series_exp(elem.matrix, t))) <= 1e-12


@pytest.mark.parametrize("case,n,p,q", [
    ("hyperbolic", 2, None, None),
    ("elliptic", 3, 2, None),
    ("nilpotent", 3, 3, 2),
])
def test_exp_flow_properties(case, n, p, q):
    model, elem = core.build_model(case, n, p=p, q=q)
    rng = np.random.default_rng(0)
    for _ in range(5):
        s, t = rng.uniform(-5, 5, size=2)
        lhs = elem.flow(s) @ elem.flow(t)
        assert np.max(np.abs(lhs - elem.flow(s + t))) <= 1e-10
    m = elem.flow(1.3)
    assert np.max(np.abs(m.T @ model.omega @ m - model.omega)) <= 1e-12
    for pt in core.sample_sigma(model, elem, 5, seed=1):
        moved = elem.flow(2.1) @ pt.x
        assert abs(core.sigma_value(model, elem, moved) - core.sigma_value(model, elem, pt)) <= 1e-10


def test_sigma_value_base_points_and_scaling():
    model, elem = core.build_model("nilpotent", 2, p=2, q=1)
    e1_star = np.zeros(6)
    e1_star[4] = 1.0
    assert core.sigma_value(model, elem, e1_star) == 1.0

    model_e, elem_e = core.build_model("elliptic", 2, k=1.0, p=1)
    e1 = np.zeros(6)
    e1[0] = 1.0
    assert core.sigma_value(model_e, elem_e, e1) == 1.0

    rng = np.random.default_rng(3)
    x = rng.standard_normal(6)
    lam = 1.7
    assert np.isclose(core.sigma_value(model_e, elem_e, lam * x),
                      lam ** 2 * core.sigma_value(model_e, elem_e, x))


def test_sigma_value_dimension_mismatch():
    model, elem = core.build_model("elliptic", 2, p=1)
    with pytest.raises(ValueError):
        core.sigma_value(model, elem, np.zeros(4))


@pytest.mark.parametrize("case,n,p,q", [
    ("hyperbolic", 2, None, None),
    ("hyperbolic", 4, None, None),
    ("elliptic", 2, 1, None),
    ("elliptic", 3, 4, None),
    ("nilpotent", 2, 2, 1),
    ("nilpotent", 3, 4, 4),
    ("nilpotent", 4, 5, 3),
    ("nilpotent", 3, 3, 1),
])
def test_sample_sigma_constraint_and_determinism(case, n, p, q):
    model, elem = core.build_model(case, n, p=p, q=q)
    pts = core.sample_sigma(model, elem, 25, seed=7)
    for pt in pts:
        assert abs(core.sigma_value(model, elem, pt) - 1.0) <= 1e-12
    again = core.sample_sigma(model, elem, 25, seed=7)
    for a, b in zip(pts, again):
        assert np.array_equal(a.x, b.x)


def test_sample_sigma_hyperbolic_pairing():
    k = 0.8
    model, elem = core.build_model("hyperbolic", 2, k=k)
    for pt in core.sample_sigma(model, elem, 10, seed=1):
        xp, xm = pt.x[:3], pt.x[3:]
        assert abs(xp @ xm + 1.0 / (2.0 * k)) <= 1e-12


def test_sample_sigma_nilpotent_component():
    model, elem = core.build_model("nilpotent", 2, p=2, q=1)
    for pt in core.sample_sigma(model, elem, 20, seed=0):
        xs = pt.x[4:]
        assert xs[0] > 0
        assert abs(xs[0] ** 2 - xs[1] ** 2 - 1.0) <= 1e-12


def test_sample_sigma_rejects_bad_count():
    model, elem = core.build_model("hyperbolic", 2)
    with pytest.raises(ValueError):
        core.sample_sigma(model, elem, 0, seed=0)
