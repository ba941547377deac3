"""Unitary-part maps and their sections.

``pi`` sends an invertible matrix to the unitary factor of its polar
decomposition. Restricted to the a-unitary group it is a bijection onto
the unitary group, with inverse ``alpha``; restricted to the a-positive
matrices, the positive-part map ``pi_plus`` is a bijection onto the
positive definite matrices.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core_linalg import DEFAULT_TOL, _frozen, as_matrix, opnorm, polar, require_pd
from .errors import NotReflection, NotUnitary
from .weighted_calculus import phi, phi_inv

__all__ = [
    "WeightedPolarFactors",
    "pi",
    "pi_plus",
    "pi_plus_right",
    "weighted_polar",
    "alpha",
    "alpha_positive_factor",
    "lift_reflection",
    "inv_positive_restriction",
]


@dataclass(frozen=True)
class WeightedPolarFactors:
    """``g = a_positive_left @ a_unitary_part = a_unitary_part @ a_positive_right``."""

    a_unitary_part: np.ndarray
    a_positive_left: np.ndarray
    a_positive_right: np.ndarray


def pi(g, tol=DEFAULT_TOL):
    return polar(g, tol).unitary_part


def pi_plus(g, tol=DEFAULT_TOL):
    """``(g g*)^1/2``."""
    return polar(g, tol).left_positive


def pi_plus_right(g, tol=DEFAULT_TOL):
    """``(g* g)^1/2``."""
    return polar(g, tol).right_positive


def weighted_polar(w, g, tol=DEFAULT_TOL):
    """Polar decomposition relative to ``<,>_a``.

    Conjugates to ``h = a^1/2 g a^-1/2``, takes the classical polar
    factors of ``h`` and maps them back with ``phi``.
    """
    g = as_matrix(g, "g")
    f = polar(phi_inv(w, g), tol)
    return WeightedPolarFactors(
        _frozen(phi(w, f.unitary_part)),
        _frozen(phi(w, f.left_positive)),
        _frozen(phi(w, f.right_positive)),
    )


def _require_unitary(u, tol, name="u"):
    u = as_matrix(u, name)
    r = opnorm(u.conj().T @ u - np.eye(u.shape[0]))
    if r > tol.bound():
        raise NotUnitary(name, f"||u* u - I|| = {r:.3e}")
    return u


def alpha_positive_factor(w, u, tol=DEFAULT_TOL):
    """Unique positive ``lam`` with ``lam a lam = u a u^-1``.

    ``a^-1/2 (a^1/2 u a u* a^1/2)^1/2 a^-1/2``; the inner root is the left
    polar factor of ``a^1/2 u a^1/2``, whose Gram matrix is the root's
    argument.
    """
    u = _require_unitary(u, tol)
    inner = polar(w.sqrt_a @ u @ w.sqrt_a, tol).left_positive
    lam = w.inv_sqrt_a @ inner @ w.inv_sqrt_a
    return 0.5 * (lam + lam.conj().T)


def alpha(w, u, tol=DEFAULT_TOL):
    """The unique a-unitary matrix whose unitary part is ``u``."""
    u = _require_unitary(u, tol)
    return alpha_positive_factor(w, u, tol) @ u


def lift_reflection(w, rho, tol=DEFAULT_TOL):
    """Lift an orthogonal reflection ``rho`` to the a-Hermitian reflection over it.

    Raises
    ------
    NotReflection
        If ``rho`` is not Hermitian, unitary and involutive within tolerance.
    """
    rho = as_matrix(rho, "rho")
    eye = np.eye(rho.shape[0])
    checks = {
        "hermitian": opnorm(rho - rho.conj().T),
        "unitary": opnorm(rho.conj().T @ rho - eye),
        "involution": opnorm(rho @ rho - eye),
    }
    bad = {k: v for k, v in checks.items() if v > tol.bound()}
    if bad:
        raise NotReflection("rho", ", ".join(f"{k} residual {v:.3e}" for k, v in bad.items()))
    return alpha(w, rho, tol)


def inv_positive_restriction(w, mu, tol=DEFAULT_TOL):
    """The a-positive ``g`` with ``pi_plus(g) = mu``: ``a^-1 pi_plus(a mu)``."""
    mu = as_matrix(mu, "mu")
    require_pd(mu, "mu", tol)
    return w.inv_a @ pi_plus(w.a @ mu, tol)
