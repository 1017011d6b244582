from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sympack.symplin import (BilinearForm, InvariantError, LinearMap, check_compatible, check_tame,
                             compatible_acs_from_metric, conjugation, equivariant_acs, metric_from_acs,
                             normalize_involution, polar_decomposition, standard_acs, standard_omega,
                             symmetrize_form)


def frac(rows):
    return np.array([[Fraction(x) for x in r] for r in rows], dtype=object)


def test_standard_triple_is_compatible():
    for n in (1, 2, 3):
        W, J = standard_omega(n), standard_acs(n)
        assert check_tame(W, J)
        assert check_compatible(W, J)
        assert not check_tame(W, -J)
        # omega0(e_i, f_i) = +1 and g_J0 = identity
        assert W[0, n] == 1
        np.testing.assert_allclose(metric_from_acs(W, J), np.eye(2 * n))


def test_tame_witness_points_at_negative_direction():
    res = check_tame(standard_omega(1), -standard_acs(1))
    v = res.witness
    assert v @ standard_omega(1) @ (-standard_acs(1)) @ v < 0


def test_perturbed_form_decided_by_eigenvalues():
    rng = np.random.default_rng(3)
    W, J = standard_omega(2), standard_acs(2)
    for _ in range(20):
        S = rng.normal(size=(4, 4))
        S = 0.5 * (S + S.T)
        # antisymmetric perturbation keeps it a 2-form
        A = W + 0.5 * (S @ W - (S @ W).T) / 2
        sym = 0.5 * ((A @ J) + (A @ J).T)
        assert bool(check_tame(A, J)) == (np.linalg.eigvalsh(sym).min() > 0)


def test_form_validation():
    BilinearForm(np.eye(4), "metric")
    with pytest.raises(InvariantError):
        BilinearForm(np.array([[0.0, 0.0], [0.0, 0.0]]), "symplectic")
    with pytest.raises(InvariantError):
        BilinearForm(np.array([[1.0, 0.0], [0.0, -1.0]]), "metric")
    with pytest.raises(InvariantError):
        LinearMap(np.eye(2), "acs")
    with pytest.raises(ValueError):
        BilinearForm(np.eye(3), "metric")


def test_polar_examples():
    Q, U = polar_decomposition(np.eye(4))
    np.testing.assert_allclose(Q.matrix, np.eye(4))
    np.testing.assert_allclose(U.matrix, np.eye(4))
    Q, U = polar_decomposition(3 * standard_acs(1))
    np.testing.assert_allclose(Q.matrix, 3 * np.eye(2), atol=1e-14)
    np.testing.assert_allclose(U.matrix, standard_acs(1), atol=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3]))
def test_polar_reconstruction_with_metric(seed, n):
    rng = np.random.default_rng(seed)
    dim = 2 * n
    a = rng.normal(size=(dim, dim)) + 3 * np.eye(dim)
    B = rng.normal(size=(dim, dim)) / np.sqrt(dim)
    G = B @ B.T + np.eye(dim)
    Q, U = polar_decomposition(a, G)
    q, u = Q.matrix, U.matrix
    assert np.abs(q @ u - a).max() <= 1e-10
    # Q is g-self-adjoint positive, U is g-orthogonal
    assert np.abs(G @ q - (G @ q).T).max() <= 1e-10
    assert np.linalg.eigvalsh(0.5 * (G @ q + (G @ q).T)).min() > 0
    assert np.abs(u.T @ G @ u - G).max() <= 1e-10


def test_singular_map_rejected():
    with pytest.raises(InvariantError):
        polar_decomposition(np.zeros((2, 2)))


def test_identity_metric_gives_standard_acs():
    for scale in (1.0, 2.0, 0.3):
        J = compatible_acs_from_metric(scale * np.eye(4), standard_omega(2))
        np.testing.assert_allclose(J.matrix, standard_acs(2), atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([1, 2, 3, 4]))
def test_compatible_acs_properties(seed, n):
    rng = np.random.default_rng(seed)
    dim = 2 * n
    S = np.eye(dim) + 0.3 * rng.normal(size=(dim, dim)) / np.sqrt(dim)
    W = S.T @ standard_omega(n) @ S
    B = rng.normal(size=(dim, dim)) / np.sqrt(dim)
    G = B @ B.T + 0.5 * np.eye(dim)
    J = compatible_acs_from_metric(G, W).matrix
    assert np.abs(J @ J + np.eye(dim)).max() <= 1e-9
    assert np.abs(J.T @ W @ J - W).max() <= 1e-9
    assert check_tame(W, J)
    back = compatible_acs_from_metric(metric_from_acs(W, J), W).matrix
    assert np.abs(back - J).max() <= 1e-9


def test_compatible_metric_gives_back_its_acs():
    # if g is already g_J for a compatible J, the construction returns J
    J0 = standard_acs(2)
    W = standard_omega(2)
    S = np.array([[1.0, 0.3, 0.0, 0.2], [0.0, 1.0, 0.1, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, -0.4, 1.0]])
    Ws = S.T @ W @ S
    J = np.linalg.solve(S, J0 @ S)
    out = compatible_acs_from_metric(metric_from_acs(Ws, J), Ws).matrix
    assert np.abs(out - J).max() <= 1e-12


def test_equivariant_acs_anticommutes():
    rng = np.random.default_rng(0)
    for n in (1, 2, 3):
        dim = 2 * n
        S = np.eye(dim) + 0.2 * rng.normal(size=(dim, dim)) / np.sqrt(dim)
        W = S.T @ standard_omega(n) @ S
        P = np.linalg.solve(S, conjugation(n) @ S)
        G = np.eye(dim) + 0.1 * np.ones((dim, dim))
        J = equivariant_acs(G, W, P).matrix
        assert np.abs(P @ J + J @ P).max() <= 1e-9
        assert check_compatible(W, J)


def test_equivariant_acs_rejects_symplectic_phi():
    with pytest.raises(InvariantError):
        equivariant_acs(np.eye(2), standard_omega(1), np.eye(2))


def test_normalize_involution_examples():
    psi = normalize_involution(frac([[1, 2], [0, -1]]))
    assert psi.exact
    assert (psi.matrix == frac([[1, 1], [0, 1]])).all()
    psi = normalize_involution(np.array([[1.0, 2.0], [0.0, -1.0]]))
    np.testing.assert_allclose(psi.matrix, [[1, 1], [0, 1]], atol=1e-12)
    c = conjugation(2)
    np.testing.assert_allclose(normalize_involution(c).matrix, np.eye(4), atol=1e-12)


def test_normalize_involution_errors():
    with pytest.raises(InvariantError):
        normalize_involution(frac([[1, 0], [0, 1]]))
    with pytest.raises(InvariantError):
        # fixes R^n but is symplectic rather than anti-symplectic
        normalize_involution(frac([[1, 0], [1, -1]]))
    with pytest.raises(InvariantError):
        # anti-symplectic involution whose fixed line is not R^1
        normalize_involution(frac([[-1, 0], [0, 1]]))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.data())
def test_normalize_involution_closed_form(n, data):
    # every anti-symplectic involution fixing R^n is [[I, X], [0, -I]] with X symmetric;
    # the normalization is then [[I, X/2], [0, I]]
    q = st.fractions(min_value=-10, max_value=10, max_denominator=9)
    X = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            X[i][j] = X[j][i] = data.draw(q)
    dim = 2 * n
    P = frac([[0] * dim for _ in range(dim)])
    want = frac([[int(i == j) for j in range(dim)] for i in range(dim)])
    for i in range(n):
        P[i, i], P[n + i, n + i] = Fraction(1), Fraction(-1)
        for j in range(n):
            P[i, n + j] = X[i][j]
            want[i, n + j] = X[i][j] / 2
    psi = normalize_involution(P).matrix
    assert (psi == want).all()


def test_symmetrize_form():
    W, J, c = standard_omega(2), standard_acs(2), conjugation(2)
    out = symmetrize_form(W, c, J)
    np.testing.assert_allclose(out.matrix, W)
    # add a c-invariant piece: it is removed, the anti-invariant part survives
    E = np.zeros((4, 4))
    E[0, 1], E[1, 0] = 0.3, -0.3
    assert np.allclose(c.T @ E @ c, E)
    bar = symmetrize_form(W + E, c, J).matrix
    np.testing.assert_allclose(bar, W, atol=1e-15)
    assert np.allclose(c.T @ bar @ c, -bar)
    rng = np.random.default_rng(1)
    for _ in range(100):
        v = rng.normal(size=4)
        assert v @ bar @ J @ v > 0


def test_symmetrize_form_idempotent():
    W, J, c = standard_omega(2), standard_acs(2), conjugation(2)
    once = symmetrize_form(W, c, J).matrix
    twice = symmetrize_form(once, c, J).matrix
    np.testing.assert_allclose(once, twice)


def test_symmetrize_form_needs_taming():
    with pytest.raises(InvariantError) as info:
        symmetrize_form(-standard_omega(1), conjugation(1), standard_acs(1))
    assert info.value.witness is not None
