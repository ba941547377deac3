"""Perturbed scalar products ``<x, y>_a = <a x, y>``.

A positive definite weight ``a`` induces the involution
``x# = a^-1 x* a`` and the *-isomorphism ``phi(b) = a^-1/2 b a^1/2`` from
the standard structure onto the weighted one. Membership in the
a-unitary, a-Hermitian and a-positive classes is decided in the
conjugated frame ``a^1/2 g a^-1/2``, where it reduces to the classical
notions.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core_linalg import (
    DEFAULT_TOL,
    _frozen,
    as_matrix,
    herm,
    opnorm,
    require_pd,
)
from .errors import DimensionMismatch, NumericalFailure, RankDeficient, Singular

__all__ = [
    "Weight",
    "ClassVerdict",
    "WeightedProjection",
    "make_weight",
    "sharp_adjoint",
    "weighted_inner",
    "weighted_op_norm",
    "phi",
    "phi_inv",
    "classify_weighted",
    "a_orthogonal_projection",
]


@dataclass(frozen=True)
class Weight:
    """Validated positive definite weight with cached roots and inverse."""

    a: np.ndarray
    sqrt_a: np.ndarray
    inv_sqrt_a: np.ndarray
    inv_a: np.ndarray
    kappa: float

    @property
    def dim(self):
        return self.a.shape[0]


@dataclass(frozen=True)
class ClassVerdict:
    a_unitary: bool
    a_hermitian: bool
    a_positive: bool
    residuals: dict = field(default_factory=dict)
    spectrum: np.ndarray = None


@dataclass(frozen=True)
class WeightedProjection:
    q: np.ndarray
    reflection: np.ndarray
    range_basis: np.ndarray


def make_weight(a, tol=DEFAULT_TOL):
    """Validate ``a`` as positive definite and cache ``a^(1/2)``, ``a^(-1/2)``, ``a^-1``."""
    a = as_matrix(a, "a")
    eig = require_pd(a, "a", tol)
    lam, u = eig.eigenvalues, eig.basis
    uh = u.conj().T
    root = np.sqrt(lam)
    sqrt_a = herm((u * root) @ uh)
    inv_sqrt_a = herm((u / root) @ uh)
    inv_a = herm((u / lam) @ uh)
    kappa = float(lam[-1] / lam[0])
    na = opnorm(a)
    eye = np.eye(a.shape[0])
    if opnorm(sqrt_a @ sqrt_a - a) > tol.bound(kappa * na) or opnorm(
        sqrt_a @ inv_sqrt_a - eye
    ) > tol.bound(kappa):
        raise NumericalFailure("a", "square root of the weight failed validation")
    return Weight(_frozen(herm(a)), _frozen(sqrt_a), _frozen(inv_sqrt_a), _frozen(inv_a), kappa)


def _check_dim(w, x, name):
    x = np.asarray(x, dtype=complex)
    if x.shape[0] != w.dim:
        raise DimensionMismatch(name, f"expected dimension {w.dim}, got {x.shape}")
    return x


def sharp_adjoint(w, x):
    """``x# = a^-1 x* a``."""
    x = _check_dim(w, x, "x")
    return w.inv_a @ x.conj().T @ w.a


def weighted_inner(w, xi, eta):
    """``<xi, eta>_a = <a xi, eta>``, linear in the first argument."""
    xi = _check_dim(w, xi, "xi")
    eta = _check_dim(w, eta, "eta")
    if xi.shape != eta.shape or xi.ndim != 1:
        raise DimensionMismatch("eta", f"vectors of equal length required, got {xi.shape} and {eta.shape}")
    return complex(np.vdot(eta, w.a @ xi))


def weighted_op_norm(w, x):
    """Operator norm induced by ``<,>_a``: ``||a^1/2 x a^-1/2||``."""
    x = _check_dim(w, x, "x")
    return opnorm(w.sqrt_a @ x @ w.inv_sqrt_a)


def phi(w, b):
    """``a^-1/2 b a^1/2``: carries unitary/Hermitian/positive to their a-analogues."""
    b = _check_dim(w, b, "b")
    return w.inv_sqrt_a @ b @ w.sqrt_a


def phi_inv(w, b):
    b = _check_dim(w, b, "b")
    return w.sqrt_a @ b @ w.inv_sqrt_a


def classify_weighted(w, g, tol=DEFAULT_TOL):
    """Decide membership of ``g`` in the a-unitary, a-Hermitian and a-positive classes.

    Residuals reported are ``||a^-1 g* a g - I||`` and ``||a^-1 g* a - g||``.
    Thresholds are ``tol`` scaled by ``kappa(a)`` and by ``||g||^2``
    (unitary) or ``||g||`` (Hermitian). Positivity is read off the
    spectrum of the Hermitian matrix ``a^1/2 g a^-1/2``, to which an
    a-Hermitian ``g`` is similar.

    Raises
    ------
    Singular
        If ``g`` is not invertible.
    """
    g = as_matrix(g, "g")
    g = _check_dim(w, g, "g")
    n = g.shape[0]
    s = np.linalg.svd(g, compute_uv=False)
    if s[-1] <= tol.atol or s[-1] <= n * np.finfo(float).eps * s[0]:
        raise Singular("g", f"smallest singular value {s[-1]:.3e}")
    ng = float(s[0])
    gs = sharp_adjoint(w, g)
    res = {
        "a_unitary": opnorm(gs @ g - np.eye(n)),
        "a_hermitian": opnorm(gs - g),
    }
    a_unitary = res["a_unitary"] <= tol.bound(w.kappa * max(1.0, ng * ng))
    a_hermitian = res["a_hermitian"] <= tol.bound(w.kappa * ng)
    h = phi_inv(w, g)
    spectrum = np.linalg.eigvals(h)
    spectrum = spectrum[np.lexsort((spectrum.imag, spectrum.real))]
    a_positive = False
    if a_hermitian:
        lam = np.linalg.eigvalsh(herm(h))
        res["min_eigenvalue"] = float(lam[0])
        a_positive = bool(lam[0] > tol.atol)
    spectrum.flags.writeable = False
    return ClassVerdict(bool(a_unitary), bool(a_hermitian), a_positive, res, spectrum)


def a_orthogonal_projection(w, range_basis, tol=DEFAULT_TOL):
    """Projection onto ``span(M)`` that is self-adjoint for ``<,>_a``.

    ``q = M (M* a M)^-1 M* a``; the associated reflection ``2q - 1`` lies
    in the a-Hermitian reflections.
    """
    m = np.array(range_basis, dtype=complex)
    if m.ndim == 1:
        m = m[:, None]
    if m.ndim != 2 or m.shape[0] != w.dim:
        raise DimensionMismatch("range_basis", f"expected {w.dim} rows, got shape {m.shape}")
    if m.shape[1] == 0 or m.shape[1] > m.shape[0]:
        raise RankDeficient("range_basis", f"cannot span a subspace with {m.shape[1]} columns")
    if not np.all(np.isfinite(m)):
        raise RankDeficient("range_basis", "entries must be finite")
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= tol.atol or s[-1] <= max(m.shape) * np.finfo(float).eps * s[0]:
        raise RankDeficient("range_basis", f"smallest singular value {s[-1]:.3e}")
    mha = m.conj().T @ w.a
    gram = herm(mha @ m)
    q = m @ np.linalg.solve(gram, mha)
    eps = 2 * q - np.eye(w.dim)
    return WeightedProjection(_frozen(q), _frozen(eps), _frozen(m))
