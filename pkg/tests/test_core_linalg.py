import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wpolar.core_linalg import (
    INSTANCE_KINDS,
    Tolerance,
    classify_basic,
    cluster_eigenvalues,
    eig_hermitian,
    inv_sqrt_pd,
    matrix_function_hermitian,
    opnorm,
    polar,
    random_instance,
    sqrt_pd,
)
from wpolar.errors import (
    BadParams,
    DomainError,
    NotHermitian,
    NotPositiveDefinite,
    Singular,
)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 10)


class TestEigHermitian:
    def test_diagonal(self, tol):
        e = eig_hermitian(np.diag([3.0, 1.0]), tol)
        np.testing.assert_allclose(e.eigenvalues, [1, 3])
        np.testing.assert_allclose(np.abs(e.basis), [[0, 1], [1, 0]])

    def test_swap(self, tol):
        # det([[-t, 1], [1, -t]]) = t^2 - 1 -> t = -1, 1 with vectors (1, -1), (1, 1)
        e = eig_hermitian(np.array([[0.0, 1.0], [1.0, 0.0]]), tol)
        np.testing.assert_allclose(e.eigenvalues, [-1, 1], atol=1e-15)
        v = e.basis / e.basis[0]  # fix the phase of each column
        np.testing.assert_allclose(v, [[1, 1], [-1, 1]], atol=1e-15)
        np.testing.assert_allclose(np.abs(e.basis), np.full((2, 2), 2**-0.5))

    def test_random_reconstruction(self, tol):
        h = random_instance("hermitian", 6, 1)
        e = eig_hermitian(h, tol)
        assert opnorm(e.reconstruct() - h) <= 1e-12 * opnorm(h)
        assert opnorm(e.basis.conj().T @ e.basis - np.eye(6)) <= 1e-12
        assert np.all(np.diff(e.eigenvalues) >= 0)

    def test_not_hermitian(self, tol):
        with pytest.raises(NotHermitian):
            eig_hermitian(np.array([[1.0, 2.0], [0.0, 1.0]]), tol)

    def test_rejects_nonsquare_and_nan(self, tol):
        with pytest.raises(BadParams):
            eig_hermitian(np.ones((2, 3)), tol)
        with pytest.raises(BadParams):
            eig_hermitian(np.array([[np.nan, 0], [0, 1]]), tol)


class TestMatrixFunction:
    def test_sqrt_diag(self, tol):
        np.testing.assert_allclose(matrix_function_hermitian(np.diag([4.0, 9.0]), np.sqrt, tol), np.diag([2, 3]))

    def test_reciprocal(self, tol):
        np.testing.assert_allclose(matrix_function_hermitian(np.diag([2.0, 4.0]), lambda t: 1 / t, tol), np.diag([0.5, 0.25]))

    def test_abs(self, tol):
        # eigenvalues +-2, |+-2| = 2, so the result is 2 I
        out = matrix_function_hermitian(np.array([[0.0, 2.0], [2.0, 0.0]]), np.abs, tol)
        np.testing.assert_allclose(out, 2 * np.eye(2), atol=1e-14)

    def test_domain_errors(self, tol):
        with pytest.raises(DomainError):
            matrix_function_hermitian(np.diag([-1.0, 1.0]), np.sqrt, tol)
        with pytest.raises(DomainError):
            matrix_function_hermitian(np.diag([1e-14, 1.0]), lambda t: 1 / t, tol,
                                      domain=lambda t: np.abs(t) > 1e-12)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=dims)
    def test_identity_function(self, seed, n):
        h = random_instance("hermitian", n, seed)
        out = matrix_function_hermitian(h, lambda t: t)
        assert opnorm(out - h) <= 1e-9 * opnorm(h)


class TestSquareRoots:
    def test_trivial(self, tol):
        np.testing.assert_allclose(sqrt_pd(np.eye(3), tol), np.eye(3))
        np.testing.assert_allclose(sqrt_pd(np.diag([4.0, 16.0]), tol), np.diag([2, 4]))
        np.testing.assert_allclose(inv_sqrt_pd(np.diag([4.0, 16.0]), tol), np.diag([0.5, 0.25]))

    def test_not_pd(self, tol):
        with pytest.raises(NotPositiveDefinite):
            sqrt_pd(np.diag([1.0, -1.0]), tol)
        with pytest.raises(NotPositiveDefinite):
            sqrt_pd(np.array([[1.0, 1.0], [0.0, 1.0]]), tol)

    def test_random_pd(self, tol):
        p = random_instance("positive_definite", 5, 3, 100)
        r = sqrt_pd(p, tol)
        assert opnorm(r @ r - p) / opnorm(p) <= 1e-10

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=dims)
    def test_roots_consistent(self, seed, n):
        p = random_instance("positive_definite", n, seed, 100)
        kp = np.linalg.cond(p)
        r, ir = sqrt_pd(p), inv_sqrt_pd(p)
        assert opnorm(r @ r - p) <= 1e-9 * kp * opnorm(p)
        assert opnorm(ir - np.linalg.inv(r)) <= 1e-9 * kp * opnorm(ir)
        assert classify_basic(r).positive_definite


class TestPolar:
    def test_positive_input(self, tol):
        f = polar(np.diag([2.0, 3.0]), tol)
        np.testing.assert_allclose(f.unitary_part, np.eye(2), atol=1e-15)
        np.testing.assert_allclose(f.left_positive, np.diag([2, 3]))
        np.testing.assert_allclose(f.right_positive, np.diag([2, 3]))

    def test_unitary_input(self, tol):
        u = random_instance("unitary", 4, 0)
        f = polar(u, tol)
        np.testing.assert_allclose(f.unitary_part, u, atol=1e-14)
        np.testing.assert_allclose(f.left_positive, np.eye(4), atol=1e-14)

    def test_two_by_two(self, tol):
        # g g* = diag(4, 1) -> lam = diag(2, 1); u = lam^-1 g = [[0, -1], [1, 0]];
        # g* g = diag(1, 4) -> lam' = diag(1, 2)
        f = polar(np.array([[0.0, -2.0], [1.0, 0.0]]), tol)
        np.testing.assert_allclose(f.left_positive, np.diag([2, 1]), atol=1e-15)
        np.testing.assert_allclose(f.unitary_part, [[0, -1], [1, 0]], atol=1e-15)
        np.testing.assert_allclose(f.right_positive, np.diag([1, 2]), atol=1e-15)

    def test_singular(self, tol):
        with pytest.raises(Singular):
            polar(np.array([[1.0, 1.0], [1.0, 1.0]]), tol)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=dims)
    def test_properties(self, seed, n):
        g = random_instance("general_invertible", n, seed, 100)
        v = random_instance("unitary", n, seed + 1)
        f = polar(g)
        eye = np.eye(n)
        assert opnorm(f.unitary_part.conj().T @ f.unitary_part - eye) <= 1e-9
        assert opnorm(f.left_positive @ f.unitary_part - g) <= 1e-9 * opnorm(g)
        assert opnorm(f.unitary_part @ f.right_positive - g) <= 1e-9 * opnorm(g)
        assert classify_basic(f.left_positive).positive_definite
        assert classify_basic(f.right_positive).positive_definite
        # right-multiplying by a unitary moves the unitary part along
        assert opnorm(polar(g @ v).unitary_part - f.unitary_part @ v) <= 1e-9 * np.linalg.cond(g)


class TestClassifyBasic:
    def test_identity(self, tol):
        r = classify_basic(np.eye(3), tol)
        assert r.hermitian and r.positive_definite and r.unitary and r.reflection and r.invertible
        assert not r.nilpotent

    def test_unipotent(self, tol):
        x = np.array([[1.0, 1.0], [0.0, 1.0]])
        r = classify_basic(x, tol)
        assert r.invertible
        assert not (r.hermitian or r.positive_definite or r.unitary or r.reflection or r.nilpotent)
        assert classify_basic(x - np.eye(2), tol).nilpotent

    def test_swap(self, tol):
        # x^2 = I, x = x*, eigenvalues +-1
        r = classify_basic(np.array([[0.0, 1.0], [1.0, 0.0]]), tol)
        assert r.hermitian and r.unitary and r.reflection
        assert not r.positive_definite

    def test_zero_is_nilpotent(self, tol):
        r = classify_basic(np.zeros((3, 3)), tol)
        assert r.nilpotent and not r.invertible

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, n=st.integers(2, 8), kind=st.sampled_from(INSTANCE_KINDS))
    def test_flags_match_generated_kind(self, seed, n, kind):
        expected = {
            "general_invertible": set(),
            "unitary": {"unitary"},
            "hermitian": {"hermitian"},
            "positive_definite": {"hermitian", "positive_definite"},
            "reflection": {"hermitian", "unitary", "reflection"},
        }[kind]
        r = classify_basic(random_instance(kind, n, seed))
        got = {k for k in ("hermitian", "positive_definite", "unitary", "reflection") if getattr(r, k)}
        assert got == expected


class TestRandomInstance:
    def test_pd_conditioning(self):
        p = random_instance("positive_definite", 4, 5, 100)
        lam = np.linalg.eigvalsh(p)
        assert lam.max() / lam.min() <= 100
        assert lam.min() >= 0.1

    def test_unitary(self):
        u = random_instance("unitary", 3, 5)
        assert opnorm(u.conj().T @ u - np.eye(3)) <= 1e-12

    @pytest.mark.parametrize("kind", INSTANCE_KINDS)
    def test_deterministic(self, kind):
        np.testing.assert_array_equal(random_instance(kind, 4, 9), random_instance(kind, 4, 9))
        assert not np.array_equal(random_instance(kind, 4, 9), random_instance(kind, 4, 10))

    @pytest.mark.parametrize("kwargs", [
        dict(kind="nope", dim=2, seed=0),
        dict(kind="unitary", dim=0, seed=0),
        dict(kind="unitary", dim=2, seed=0, cond_bound=1.0),
    ])
    def test_bad_params(self, kwargs):
        with pytest.raises(BadParams):
            random_instance(**kwargs)


def test_tolerance_validation():
    with pytest.raises(BadParams):
        Tolerance(rtol=0)
    with pytest.raises(BadParams):
        Tolerance(atol=-1)


def test_cluster_eigenvalues():
    groups = cluster_eigenvalues([1.0, 2.0, 1.0 + 1e-12, 5.0])
    assert [sorted(g.tolist()) for g in groups] == [[0, 2], [1], [3]]
