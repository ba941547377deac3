import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wpolar.core_linalg import classify_basic, opnorm, random_instance, sqrt_pd
from wpolar.errors import (
    BadParams,
    EnumerationOverflow,
    MultiplicityWarning,
    NotPositiveDefinite,
    NotReflection,
)
from wpolar.oracles import descent_pt_2x2
from wpolar.pt_solver import (
    all_solutions,
    solve_pt,
    theta,
    unique_positive_middle,
    unique_unitary_completion,
)
from wpolar.weighted_calculus import make_weight, sharp_adjoint

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 8)


def pd(n, seed, cond=100.0):
    return random_instance("positive_definite", n, seed, cond)


def is_unitary(u, bound=1e-10):
    return opnorm(u.conj().T @ u - np.eye(u.shape[0])) <= bound


class TestSolvePT:
    def test_identity_h(self):
        k = pd(3, 0)
        np.testing.assert_allclose(solve_pt(np.eye(3), k), sqrt_pd(k), atol=1e-12)

    def test_identity_k(self):
        h = pd(3, 1)
        np.testing.assert_allclose(solve_pt(h, np.eye(3)), np.linalg.inv(sqrt_pd(h)), atol=1e-12)

    def test_commuting(self):
        # T = k^1/2 h^-1/2 = diag(3, 4/2); T h T = diag(9, 16)
        np.testing.assert_allclose(solve_pt(np.diag([1.0, 4.0]), np.diag([9.0, 16.0])), np.diag([3, 2]), atol=1e-14)

    def test_not_pd(self):
        with pytest.raises(NotPositiveDefinite):
            solve_pt(np.diag([1.0, -1.0]), np.eye(2))
        with pytest.raises(NotPositiveDefinite) as exc:
            solve_pt(np.eye(2), np.array([[1.0, 1.0], [0.0, 1.0]]))
        assert exc.value.arg == "k"

    @settings(max_examples=50, deadline=None)
    @given(seed=seeds, n=dims)
    def test_residual_and_characterization(self, seed, n):
        h, k = pd(n, seed), pd(n, seed + 1)
        t = solve_pt(h, k)
        assert opnorm(t @ h @ t - k) <= 1e-10 * opnorm(k) * 100
        assert classify_basic(t).positive_definite
        u = sqrt_pd(h) @ t @ np.linalg.inv(sqrt_pd(k))
        assert is_unitary(u, 1e-9)

    def test_non_solution_is_not_unitary(self):
        h, k = pd(3, 5), pd(3, 6)
        t = solve_pt(h, k) + 0.1 * np.eye(3)
        u = sqrt_pd(h) @ t @ np.linalg.inv(sqrt_pd(k))
        assert not is_unitary(u, 1e-6)

    def test_local_uniqueness(self):
        rng = np.random.default_rng(3)
        h, k = pd(3, 7), pd(3, 8)
        t = solve_pt(h, k)
        base = opnorm(t @ h @ t - k)
        for _ in range(20):
            d = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            d = 1e-3 * (d + d.conj().T) / opnorm(d + d.conj().T)
            tp = t + d
            assert classify_basic(tp).positive_definite
            assert opnorm(tp @ h @ tp - k) > base

    @pytest.mark.parametrize("seed", range(5))
    def test_matches_descent(self, seed):
        rng = np.random.default_rng(seed)
        mats = []
        for _ in range(2):
            q, _ = np.linalg.qr(rng.standard_normal((2, 2)))
            mats.append(q @ np.diag(rng.uniform(0.2, 5, 2)) @ q.T)
        h, k = mats
        x = descent_pt_2x2(h, k)
        assert np.abs(x - solve_pt(h, k)).max() <= 1e-6


class TestAllSolutions:
    def test_identity_weight(self):
        fam = all_solutions(np.eye(2), np.diag([4.0, 9.0]), enumerate=True)
        np.testing.assert_allclose(fam.m, np.diag([2, 3]), atol=1e-14)
        assert len(fam.enumerated) == 4
        got = sorted(tuple(np.round(np.diag(x).real, 12)) for x in fam.enumerated)
        assert got == [(-2, -3), (-2, 3), (2, -3), (2, 3)]
        for x in fam.enumerated:
            np.testing.assert_allclose(x @ x, np.diag([4, 9]), atol=1e-13)
        assert not fam.multiplicity_warning

    def test_b_equals_a(self):
        a = pd(3, 2)
        np.testing.assert_allclose(all_solutions(a, a).positive_solution, np.eye(3), atol=1e-12)

    def test_multiplicity(self):
        with pytest.warns(MultiplicityWarning):
            fam = all_solutions(np.eye(2), np.eye(2), enumerate=True)
        assert fam.eigenspace_blocks == [(1.0, 2)]
        assert fam.multiplicity_warning
        diags = {tuple(np.round(np.diag(x).real).astype(int)) for x in fam.enumerated}
        assert diags == {(1, 1), (1, -1), (-1, 1), (-1, -1)}
        # the continuum: any reflection gives a solution of x^2 = 1
        c, s = np.cos(0.3), np.sin(0.3)
        x = fam.member(np.array([[c, s], [s, -c]]))
        np.testing.assert_allclose(x @ x, np.eye(2), atol=1e-14)

    def test_member_rejects(self):
        fam = all_solutions(np.eye(2), np.diag([1.0, 2.0]))
        with pytest.raises(NotReflection):
            fam.member(np.diag([1.0, 2.0]))
        with pytest.raises(BadParams):
            fam.member(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_overflow(self):
        with pytest.raises(EnumerationOverflow):
            all_solutions(pd(4, 0), pd(4, 1), enumerate=True, cap=15)
        assert len(all_solutions(pd(4, 0), pd(4, 1), enumerate=True, cap=16).enumerated) == 16
        with pytest.raises(BadParams):
            all_solutions(np.eye(2), np.eye(2), cap=0)

    def test_shape_mismatch(self):
        with pytest.raises(BadParams):
            all_solutions(np.eye(2), np.eye(3))

    @settings(max_examples=30, deadline=None)
    @given(seed=seeds, n=st.integers(1, 6))
    def test_family_invariants(self, seed, n):
        a, b = pd(n, seed), pd(n, seed + 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", MultiplicityWarning)
            fam = all_solutions(a, b, enumerate=True)
        assert len(fam.enumerated) == 2**n
        assert fam.signs[0] == (1,) * n
        np.testing.assert_array_equal(fam.positive_solution, fam.enumerated[0])
        np.testing.assert_allclose(fam.positive_solution, solve_pt(a, b), atol=1e-9 * opnorm(fam.positive_solution))
        w = make_weight(a)
        for x, r in zip(fam.enumerated, fam.residuals):
            assert opnorm(x @ a @ x - b) <= 1e-9 * opnorm(b)
            assert r <= 1e-9
            # x a is self-adjoint for the a-weighted product
            xa = x @ a
            assert opnorm(sharp_adjoint(w, xa) - xa) <= 1e-10 * opnorm(xa) * w.kappa

    def test_sign_order(self):
        fam = all_solutions(np.eye(2), np.diag([4.0, 9.0]), enumerate=True)
        assert fam.signs == [(1, 1), (1, -1), (-1, 1), (-1, -1)]


class TestUniquePositiveMiddle:
    def test_identity(self):
        np.testing.assert_allclose(unique_positive_middle(np.eye(2), np.eye(2)), np.eye(2), atol=1e-15)

    def test_commuting(self):
        x = unique_positive_middle(np.diag([2.0, 1.0]), np.diag([1.0, 3.0]))
        np.testing.assert_allclose(x, np.diag([1 / 2, 1 / 3]), atol=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=dims)
    def test_random(self, seed, n):
        a, b = pd(n, seed), pd(n, seed + 1)
        x = unique_positive_middle(a, b)
        assert classify_basic(x).positive_definite
        assert is_unitary(a @ x @ b)
        # same x from the equation x a^2 x = b^-2
        np.testing.assert_allclose(x, solve_pt(a @ a, np.linalg.inv(b @ b)), atol=1e-8 * opnorm(x))


class TestTheta:
    def test_identity(self):
        np.testing.assert_allclose(theta(np.eye(2), np.eye(2)), np.eye(2), atol=1e-15)

    def test_commuting(self):
        np.testing.assert_allclose(theta(np.diag([2.0, 1.0]), np.diag([1.0, 3.0])), np.eye(2), atol=1e-15)

    @settings(max_examples=40, deadline=None)
    @given(seed=seeds, n=dims)
    def test_random(self, seed, n):
        a, b = pd(n, seed), pd(n, seed + 1)
        t = theta(a, b)
        assert is_unitary(t)
        assert classify_basic(unique_positive_middle(a, b)).positive_definite


class TestUniqueUnitaryCompletion:
    def test_identity(self):
        np.testing.assert_allclose(unique_unitary_completion(np.eye(2), np.eye(2)), np.eye(2), atol=1e-15)

    def test_commuting(self):
        u = unique_unitary_completion(np.diag([2.0, 1.0]), np.diag([1.0, 3.0]))
        np.testing.assert_allclose(u, np.eye(2), atol=1e-15)

    @pytest.mark.parametrize("seed", range(5))
    def test_random(self, seed):
        a, lam = pd(4, seed), pd(4, seed + 100)
        u = unique_unitary_completion(a, lam)
        assert is_unitary(u)
        g = a @ lam @ u
        assert opnorm(g - g.conj().T) <= 1e-10 * opnorm(g)
        assert classify_basic(g).positive_definite
        for k in range(8):
            v = random_instance("unitary", 4, 1000 * seed + k)
            assert not classify_basic(a @ lam @ v).positive_definite
