"""Independent brute-force checks for ``x a x = b``.

Neither routine uses square roots or polar factors: one minimizes the
residual over positive definite ``x`` by generic least squares, the other
scans a grid of 2x2 Hermitian matrices and refines the survivors.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from . import kernels
from .core_linalg import opnorm

__all__ = ["descent_pt_2x2", "GridSearchResult", "grid_search_pt_2x2", "refine_hermitian_2x2"]


def _chol(theta):
    u, v, w = theta
    return np.array([[np.exp(u), 0.0], [v, np.exp(w)]])


def descent_pt_2x2(h, k, starts=((0.0, 0.0, 0.0), (1.0, 0.5, -1.0), (-1.0, -0.5, 1.0))):
    """Minimize ``||X h X - k||`` over real 2x2 positive definite ``X = L L^T``.

    ``L`` is lower triangular with log-parametrized diagonal, so every
    iterate is positive definite. Returns the best minimizer over the
    starting points.
    """
    h = np.real_if_close(np.asarray(h)).astype(float)
    k = np.real_if_close(np.asarray(k)).astype(float)
    iu = np.triu_indices(2)

    def resid(theta):
        lo = _chol(theta)
        x = lo @ lo.T
        return (x @ h @ x - k)[iu]

    best = None
    for x0 in starts:
        sol = least_squares(resid, np.asarray(x0, float), method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=2000)
        if best is None or sol.cost < best.cost:
            best = sol
    lo = _chol(best.x)
    return lo @ lo.T


_BASIS = np.array(
    [
        [[1, 0], [0, 0]],
        [[0, 0], [0, 1]],
        [[0, 1], [1, 0]],
        [[0, 1j], [-1j, 0]],
    ],
    dtype=complex,
)


def _params_to_x(theta):
    return np.einsum("mi,ijk->mjk", theta.astype(complex), _BASIS)


def _hvec(d):
    return np.stack([d[:, 0, 0].real, d[:, 1, 1].real, d[:, 0, 1].real, d[:, 0, 1].imag], axis=1)


def refine_hermitian_2x2(a, b, theta, iters=60):
    """Batched Levenberg-Marquardt on ``x a x = b`` from starting parameters.

    ``theta`` rows are ``(p, s, q, r)`` with ``x = [[p, q + ir], [q - ir, s]]``.
    Returns refined parameters and the Frobenius residual at each.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    theta = np.array(theta, dtype=float)
    m = theta.shape[0]
    if m == 0:
        return theta, np.empty(0)
    mu = np.full(m, 1e-3)

    def residual(th):
        x = _params_to_x(th)
        return _hvec(x @ a @ x - b), x

    f, x = residual(theta)
    cost = np.einsum("mi,mi->m", f, f)
    eye = np.eye(4)
    for _ in range(iters):
        xa = x @ a
        ax = a @ x
        # d(x a x) along basis matrix E: E a x + x a E
        jac = np.stack([_hvec(_BASIS[i] @ ax + xa @ _BASIS[i]) for i in range(4)], axis=2)
        jt = np.transpose(jac, (0, 2, 1))
        lhs = jt @ jac + mu[:, None, None] * eye
        rhs = -np.einsum("mij,mj->mi", jt, f)
        step = np.linalg.solve(lhs, rhs[..., None])[..., 0]
        trial = theta + step
        f_new, x_new = residual(trial)
        cost_new = np.einsum("mi,mi->m", f_new, f_new)
        ok = cost_new < cost
        theta[ok], f[ok], x[ok], cost[ok] = trial[ok], f_new[ok], x_new[ok], cost_new[ok]
        mu = np.where(ok, np.maximum(mu / 3, 1e-12), mu * 4)
        if np.all(cost < 1e-28):
            break
    return theta, np.sqrt(cost)


@dataclass
class GridSearchResult:
    n_points: int
    n_candidates: int
    overflow: bool
    found: list
    extra: list
    missed: list
    backend: str

    @property
    def ok(self):
        return not (self.extra or self.missed or self.overflow)


def grid_search_pt_2x2(a, b, known, lo=-20.0, hi=20.0, step=0.25, ball=1e-6, max_candidates=2_000_000):
    """Exhaustive grid search for Hermitian solutions of ``x a x = b``.

    Every grid point within half a cell of a true solution has residual at
    most ``2 ||a|| d ||x||_F + 3 ||a|| d^2`` where ``d`` is the Frobenius
    half-diagonal of a cell, so keeping those points loses no solution in
    the box. Survivors are refined locally and every converged solution is
    compared with ``known``.

    Parameters
    ----------
    known : list of ndarray
        The solutions the search should reproduce.
    ball : float
        Relative radius of the balls around ``known``.

    Returns
    -------
    GridSearchResult
        ``extra`` lists converged solutions outside every ball; ``missed``
        lists known solutions inside the box with no candidate near them.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    half = 0.5 * step * np.sqrt(6.0)
    na = opnorm(a)
    c1 = 2.0 * na * half * (1 + 1e-9)
    c0 = 3.0 * na * half * half * (1 + 1e-9)
    cand, _, n_points, _, overflow = kernels.scan_hermitian_2x2(a, b, lo, hi, step, c0, c1, max_candidates)
    theta, res = refine_hermitian_2x2(a, b, cand)
    nb = np.linalg.norm(b)
    conv = theta[res <= 1e-10 * nb]
    found = []
    for th in conv:
        x = _params_to_x(th[None])[0]
        if not any(np.linalg.norm(x - y) <= 1e-6 * max(1.0, np.linalg.norm(y)) for y in found):
            found.append(x)
    known = [np.asarray(y, dtype=complex) for y in known]
    extra = [
        x for x in found
        if not any(np.linalg.norm(x - y) <= ball * max(1.0, np.linalg.norm(y)) for y in known)
    ]
    cand_x = _params_to_x(cand) if len(cand) else np.empty((0, 2, 2), complex)
    missed = []
    for y in known:
        yp = np.array([y[0, 0].real, y[1, 1].real, y[0, 1].real, y[0, 1].imag])
        if np.any(yp < lo) or np.any(yp > hi):
            continue
        d = np.linalg.norm((cand_x - y).reshape(len(cand_x), -1), axis=1) if len(cand_x) else np.array([])
        if d.size == 0 or d.min() > half * (1 + 1e-9):
            missed.append(y)
    return GridSearchResult(n_points, int(len(cand)), bool(overflow), found, extra, missed, kernels.BACKEND)
