"""Dense complex matrix kernel.

Hermitian eigendecomposition, functional calculus for Hermitian matrices,
the classical polar decomposition, structural predicates decided against
a tolerance, and seeded random test instances.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    BadParams,
    DomainError,
    NotHermitian,
    NotPositiveDefinite,
    NumericalFailure,
    Singular,
)

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "HermitianEigen",
    "PolarFactors",
    "BasicReport",
    "as_matrix",
    "opnorm",
    "herm",
    "cluster_eigenvalues",
    "eig_hermitian",
    "matrix_function_hermitian",
    "require_pd",
    "sqrt_pd",
    "inv_sqrt_pd",
    "polar",
    "classify_basic",
    "random_instance",
    "random_unitary",
    "INSTANCE_KINDS",
]

CLUSTER_GAP = 1e-8


@dataclass(frozen=True)
class Tolerance:
    """Residual thresholds.

    ``rtol`` is relative and gets multiplied by a problem scale (operator
    norm, condition number) at each use site; ``atol`` is an absolute floor.
    """

    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self):
        if not (np.isfinite(self.rtol) and self.rtol > 0):
            raise BadParams("rtol", f"must be finite and > 0, got {self.rtol!r}")
        if not (np.isfinite(self.atol) and self.atol >= 0):
            raise BadParams("atol", f"must be finite and >= 0, got {self.atol!r}")

    def bound(self, scale=1.0):
        return self.rtol * scale + self.atol


DEFAULT_TOL = Tolerance()


def _frozen(x):
    x = np.array(x, dtype=complex)
    x.flags.writeable = False
    return x


@dataclass(frozen=True)
class HermitianEigen:
    eigenvalues: np.ndarray
    basis: np.ndarray

    def reconstruct(self):
        return (self.basis * self.eigenvalues) @ self.basis.conj().T


@dataclass(frozen=True)
class PolarFactors:
    """``g = left_positive @ unitary_part = unitary_part @ right_positive``."""

    unitary_part: np.ndarray
    left_positive: np.ndarray
    right_positive: np.ndarray


@dataclass(frozen=True)
class BasicReport:
    hermitian: bool
    positive_definite: bool
    unitary: bool
    reflection: bool
    invertible: bool
    nilpotent: bool
    residuals: dict = field(default_factory=dict)

    def flags(self):
        return {
            "hermitian": self.hermitian,
            "positive_definite": self.positive_definite,
            "unitary": self.unitary,
            "reflection": self.reflection,
            "invertible": self.invertible,
            "nilpotent": self.nilpotent,
        }


def as_matrix(x, name="x"):
    """Validate ``x`` as a finite square complex matrix and return a copy."""
    try:
        x = np.array(x, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise BadParams(name, f"not a numeric matrix: {exc}") from None
    if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] == 0:
        raise BadParams(name, f"expected a non-empty square matrix, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise BadParams(name, "entries must be finite")
    return x


def opnorm(x):
    """Spectral (operator) norm."""
    if x.size == 0:
        return 0.0
    return float(np.linalg.norm(x, 2))


def herm(x):
    """Hermitian part ``(x + x*)/2``."""
    return 0.5 * (x + x.conj().T)


def cluster_eigenvalues(values, rel_gap=CLUSTER_GAP):
    """Group sorted real eigenvalues whose consecutive gap is below
    ``rel_gap * max(1, max|values|)``. Returns a list of index arrays."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    order = np.argsort(values, kind="stable")
    scale = max(1.0, float(np.max(np.abs(values))))
    groups = [[order[0]]]
    for prev, cur in zip(order[:-1], order[1:]):
        if values[cur] - values[prev] > rel_gap * scale:
            groups.append([cur])
        else:
            groups[-1].append(cur)
    return [np.array(g) for g in groups]


def eig_hermitian(h, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises
    ------
    NotHermitian
        If ``||h - h*|| > tol * ||h||``.
    NumericalFailure
        If LAPACK fails or the reconstruction residual exceeds the tolerance.
    """
    h = as_matrix(h, "h")
    scale = opnorm(h)
    asym = opnorm(h - h.conj().T)
    if asym > tol.bound(scale):
        raise NotHermitian("h", f"asymmetry ||x - x*|| = {asym:.3e}")
    hs = herm(h)
    try:
        w, v = np.linalg.eigh(hs)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("h", str(exc)) from None
    res = opnorm((v * w) @ v.conj().T - hs)
    if res > tol.bound(scale) + 64 * np.finfo(float).eps * scale * h.shape[0]:
        raise NumericalFailure("h", f"eigen reconstruction residual {res:.3e}")
    w.flags.writeable = False
    return HermitianEigen(w, _frozen(v))


def matrix_function_hermitian(
    h,
    f: Callable[[np.ndarray], np.ndarray],
    tol=DEFAULT_TOL,
    domain: Optional[Callable[[np.ndarray], np.ndarray]] = None,
):
    """Apply a real scalar function to a Hermitian matrix through its spectrum.

    Parameters
    ----------
    h : array_like
        Hermitian matrix.
    f : callable
        Vectorized real function evaluated on the eigenvalues.
    domain : callable, optional
        Predicate on eigenvalues; ``False`` anywhere raises ``DomainError``.
        Without it, any non-finite or non-real value of ``f`` is treated as
        leaving the domain.

    Returns
    -------
    ndarray
        ``U f(diag(w)) U*``.
    """
    eig = eig_hermitian(h, tol)
    lam = eig.eigenvalues
    if domain is not None and not np.all(domain(lam)):
        bad = lam[~np.asarray(domain(lam), dtype=bool)]
        raise DomainError("h", f"eigenvalues outside domain: {bad}")
    with np.errstate(all="ignore"):
        fl = np.asarray(f(lam))
    if fl.shape != lam.shape:
        raise BadParams("f", "function must map eigenvalue vectors elementwise")
    if not np.all(np.isfinite(fl)) or (np.iscomplexobj(fl) and np.any(fl.imag != 0)):
        raise DomainError("h", f"f is not finite and real on spectrum {lam}")
    fl = np.real(fl)
    u = eig.basis
    return herm((u * fl) @ u.conj().T)


def require_pd(p, name="p", tol=DEFAULT_TOL):
    """Return the eigendecomposition of ``p`` or raise ``NotPositiveDefinite``.

    A matrix that is not Hermitian is reported as not positive definite too.
    """
    try:
        eig = eig_hermitian(p, tol)
    except NotHermitian as exc:
        raise NotPositiveDefinite(name, f"not Hermitian ({exc.detail})") from None
    except BadParams as exc:
        raise BadParams(name, exc.detail) from None
    if eig.eigenvalues[0] <= tol.atol:
        raise NotPositiveDefinite(name, f"min eigenvalue {eig.eigenvalues[0]:.3e}")
    return eig


def _spectral(eig, fl):
    u = eig.basis
    return herm((u * fl) @ u.conj().T)


def sqrt_pd(p, tol=DEFAULT_TOL):
    """Principal (positive definite) square root."""
    eig = require_pd(p, "p", tol)
    return _spectral(eig, np.sqrt(eig.eigenvalues))


def inv_sqrt_pd(p, tol=DEFAULT_TOL):
    """Inverse of the principal square root."""
    eig = require_pd(p, "p", tol)
    return _spectral(eig, 1.0 / np.sqrt(eig.eigenvalues))


def polar(g, tol=DEFAULT_TOL):
    """Polar decomposition ``g = lam u = u lam'`` of an invertible matrix.

    Computed from the SVD ``g = W S V*``: ``u = W V*``, ``lam = W S W*``
    and ``lam' = V S V*``, which equal ``(g g*)^{1/2}`` and ``(g* g)^{1/2}``.
    """
    g = as_matrix(g, "g")
    try:
        w, s, vh = np.linalg.svd(g)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure("g", str(exc)) from None
    n = g.shape[0]
    if s[-1] <= tol.atol or s[-1] <= n * np.finfo(float).eps * s[0]:
        raise Singular("g", f"smallest singular value {s[-1]:.3e}")
    u = w @ vh
    left = herm((w * s) @ w.conj().T)
    v = vh.conj().T
    right = herm((v * s) @ vh)
    return PolarFactors(_frozen(u), _frozen(left), _frozen(right))


def classify_basic(x, tol=DEFAULT_TOL):
    """Decide the classical structure flags of ``x`` from residuals.

    Residuals are spectral norms: ``||x - x*||``, ``||x* x - I||``,
    ``||x^2 - I||`` and ``||x^n||``; each flag compares its residual with
    ``tol`` scaled by ``||x||`` (or its square where products appear).
    """
    x = as_matrix(x, "x")
    n = x.shape[0]
    eye = np.eye(n)
    nx = opnorm(x)
    s = np.linalg.svd(x, compute_uv=False)
    res = {
        "hermitian": opnorm(x - x.conj().T),
        "unitary": opnorm(x.conj().T @ x - eye),
        "reflection": opnorm(x @ x - eye),
        "nilpotent": opnorm(np.linalg.matrix_power(x, n)),
        "min_singular": float(s[-1]),
    }
    invertible = bool(s[-1] > tol.atol and s[-1] > n * np.finfo(float).eps * s[0])
    hermitian = res["hermitian"] <= tol.bound(nx)
    unitary = invertible and res["unitary"] <= tol.bound(max(1.0, nx * nx))
    reflection = invertible and res["reflection"] <= tol.bound(max(1.0, nx * nx))
    nilpotent = res["nilpotent"] <= tol.bound(max(1.0, nx) ** n)
    # P = Q n U sits inside the Hermitian matrices
    hermitian = hermitian or (reflection and unitary)
    pd = False
    if hermitian and invertible:
        lam = np.linalg.eigvalsh(herm(x))
        res["min_eigenvalue"] = float(lam[0])
        pd = bool(lam[0] > tol.atol)
    return BasicReport(
        hermitian=bool(hermitian),
        positive_definite=pd,
        unitary=bool(unitary),
        reflection=bool(reflection),
        invertible=invertible,
        nilpotent=bool(nilpotent),
        residuals=res,
    )


INSTANCE_KINDS = ("general_invertible", "unitary", "hermitian", "positive_definite", "reflection")


def random_unitary(rng, dim):
    """Haar-distributed unitary from the QR factorization of a complex Gaussian."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def _log_uniform(rng, dim, cond_bound):
    half = 0.5 * np.log(cond_bound)
    return np.exp(rng.uniform(-half, half, size=dim))


def _mixed_signs(rng, dim):
    signs = rng.choice([-1.0, 1.0], size=dim)
    if dim >= 2 and abs(signs.sum()) == dim:
        signs[rng.integers(dim)] *= -1
    return signs


def random_instance(kind, dim, seed, cond_bound=100.0):
    """Deterministic random matrix of a given structural kind.

    Parameters
    ----------
    kind : str
        One of ``INSTANCE_KINDS``.
    dim : int
        Matrix size, at least 1.
    seed : int or sequence of int or numpy.random.SeedSequence
        Anything accepted by ``numpy.random.default_rng``.
    cond_bound : float
        Upper bound (> 1) on the condition number for the kinds that have
        a nontrivial spectrum spread.

    Notes
    -----
    For ``dim >= 2`` the ``hermitian`` and ``reflection`` kinds always mix
    signs, so they are never positive definite.
    """
    if kind not in INSTANCE_KINDS:
        raise BadParams("kind", f"unknown kind {kind!r}; expected one of {INSTANCE_KINDS}")
    if not isinstance(dim, (int, np.integer)) or dim < 1:
        raise BadParams("dim", f"must be a positive integer, got {dim!r}")
    if not (np.isfinite(cond_bound) and cond_bound > 1):
        raise BadParams("cond_bound", f"must be > 1, got {cond_bound!r}")
    rng = np.random.default_rng(seed)
    u = random_unitary(rng, dim)
    if kind == "unitary":
        return u
    if kind == "general_invertible":
        v = random_unitary(rng, dim)
        return (u * _log_uniform(rng, dim, cond_bound)) @ v
    if kind == "positive_definite":
        lam = _log_uniform(rng, dim, cond_bound)
    elif kind == "hermitian":
        lam = _log_uniform(rng, dim, cond_bound) * _mixed_signs(rng, dim)
    else:
        lam = _mixed_signs(rng, dim)
    return herm((u * lam) @ u.conj().T)
