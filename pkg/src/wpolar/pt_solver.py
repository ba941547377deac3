"""The equation ``x a x = b`` for positive definite ``a``, ``b``.

The positive solution is ``a^-1/2 (a^1/2 b a^1/2)^1/2 a^-1/2``. Every
other solution has the form ``a^-1/2 m e a^-1/2`` with
``m = (a^1/2 b a^1/2)^1/2`` and ``e`` a reflection commuting with ``m``.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core_linalg import (
    DEFAULT_TOL,
    _frozen,
    as_matrix,
    cluster_eigenvalues,
    eig_hermitian,
    herm,
    opnorm,
    polar,
    require_pd,
)
from .errors import BadParams, EnumerationOverflow, MultiplicityWarning, NotReflection

__all__ = [
    "SolutionFamily",
    "solve_pt",
    "all_solutions",
    "unique_positive_middle",
    "theta",
    "unique_unitary_completion",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 1024


def _roots(eig):
    u, lam = eig.basis, eig.eigenvalues
    uh = u.conj().T
    r = np.sqrt(lam)
    return herm((u * r) @ uh), herm((u / r) @ uh)


def solve_pt(h, k, tol=DEFAULT_TOL):
    """Unique positive definite ``t`` with ``t h t = k``."""
    h = as_matrix(h, "h")
    k = as_matrix(k, "k")
    if h.shape != k.shape:
        raise BadParams("k", f"shape {k.shape} does not match h {h.shape}")
    hr, hir = _roots(require_pd(h, "h", tol))
    require_pd(k, "k", tol)
    # (h^1/2 k h^1/2)^1/2 is the left polar factor of h^1/2 k^1/2
    kr, _ = _roots(eig_hermitian(k, tol))
    mid = polar(hr @ kr, tol).left_positive
    return herm(hir @ mid @ hir)


@dataclass(frozen=True)
class SolutionFamily:
    """All solutions of ``x a x = b``.

    Members are ``a^-1/2 m e a^-1/2`` for reflections ``e`` commuting with
    ``m``. ``enumerated`` holds the sign choices ``e = V diag(s) V*`` in the
    eigenbasis ``V`` of ``m``, in lexicographic order with ``+1`` first,
    so the first member is the positive solution.
    """

    positive_solution: np.ndarray
    m: np.ndarray
    eigenspace_blocks: list
    enumerated: Optional[list] = None
    signs: Optional[list] = None
    multiplicity_warning: bool = False
    m_basis: np.ndarray = None
    m_eigenvalues: np.ndarray = None
    inv_sqrt_a: np.ndarray = None
    residuals: list = field(default_factory=list)

    def member(self, eps, tol=DEFAULT_TOL):
        """Solution attached to an arbitrary reflection ``eps`` commuting with ``m``."""
        eps = as_matrix(eps, "eps")
        n = eps.shape[0]
        scale = max(1.0, opnorm(eps))
        if opnorm(eps @ eps - np.eye(n)) > tol.bound(scale * scale):
            raise NotReflection("eps", "eps^2 != 1")
        if opnorm(eps @ self.m - self.m @ eps) > tol.bound(scale * opnorm(self.m)):
            raise BadParams("eps", "does not commute with m")
        return self.inv_sqrt_a @ self.m @ eps @ self.inv_sqrt_a


def all_solutions(a, b, enumerate=False, cap=DEFAULT_CAP, tol=DEFAULT_TOL):
    """Describe every solution of ``x a x = b``.

    Parameters
    ----------
    enumerate : bool
        List the ``2^n`` sign-pattern solutions. With repeated eigenvalues
        of ``m`` the true solution set is a continuum; the listed ones are
        representatives and a ``MultiplicityWarning`` is issued.
    cap : int
        Maximum number of solutions to enumerate.

    Raises
    ------
    EnumerationOverflow
        If ``enumerate`` and ``2^n > cap``.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise BadParams("b", f"shape {b.shape} does not match a {a.shape}")
    if cap < 1:
        raise BadParams("cap", f"must be positive, got {cap}")
    ar, air = _roots(require_pd(a, "a", tol))
    require_pd(b, "b", tol)
    br, _ = _roots(eig_hermitian(b, tol))
    m = polar(ar @ br, tol).left_positive
    meig = eig_hermitian(m, tol)
    mu, v = meig.eigenvalues, meig.basis
    blocks = [(float(np.mean(mu[idx])), int(idx.size)) for idx in cluster_eigenvalues(mu)]
    degenerate = any(mult > 1 for _, mult in blocks)
    if degenerate:
        warnings.warn(
            "m has repeated eigenvalues; enumerated solutions are representatives of a continuum",
            MultiplicityWarning,
            stacklevel=2,
        )
    positive = herm(air @ m @ air)
    enumerated = signs = None
    residuals = []
    if enumerate:
        n = a.shape[0]
        if 2**n > cap:
            raise EnumerationOverflow("cap", f"2^{n} = {2**n} solutions exceed cap {cap}")
        left = air @ v
        right = left.conj().T
        nb = opnorm(b)
        enumerated, signs = [], []
        for s in itertools.product((1.0, -1.0), repeat=n):
            s = np.array(s)
            x = herm((left * (mu * s)) @ right)
            enumerated.append(_frozen(x))
            signs.append(tuple(int(t) for t in s))
            residuals.append(opnorm(x @ a @ x - b) / nb)
        # positive_solution is the all-plus member; keep them bitwise equal
        positive = np.array(enumerated[0])
    return SolutionFamily(
        positive_solution=_frozen(positive),
        m=_frozen(m),
        eigenspace_blocks=blocks,
        enumerated=enumerated,
        signs=signs,
        multiplicity_warning=degenerate,
        m_basis=_frozen(v),
        m_eigenvalues=mu,
        inv_sqrt_a=_frozen(air),
        residuals=residuals,
    )


def unique_positive_middle(a, b, tol=DEFAULT_TOL):
    """Unique positive definite ``x`` making ``a x b`` unitary.

    Equals ``solve_pt(a^2, b^-2)``, i.e. ``a^-1 (a b^-2 a)^1/2 a^-1``; the
    middle root is taken as the left polar factor of ``a b^-1``.
    """
    a = as_matrix(a, "a")
    b = as_matrix(b, "b")
    if a.shape != b.shape:
        raise BadParams("b", f"shape {b.shape} does not match a {a.shape}")
    ea = require_pd(a, "a", tol)
    eb = require_pd(b, "b", tol)
    ua, la = ea.basis, ea.eigenvalues
    ub, lb = eb.basis, eb.eigenvalues
    inv_a = herm((ua / la) @ ua.conj().T)
    inv_b = herm((ub / lb) @ ub.conj().T)
    root = polar(a @ inv_b, tol).left_positive
    return herm(inv_a @ root @ inv_a)


def theta(a, b, tol=DEFAULT_TOL):
    """``a x b`` with ``x = unique_positive_middle(a, b)``: a unitary written
    as a product of three positive definite factors."""
    x = unique_positive_middle(a, b, tol)
    return np.asarray(a, dtype=complex) @ x @ np.asarray(b, dtype=complex)


def unique_unitary_completion(a, lam, tol=DEFAULT_TOL):
    """Unique unitary ``u`` with ``a lam u`` positive definite.

    If ``a lam = p w`` is the polar decomposition then ``u = w*``.
    """
    a = as_matrix(a, "a")
    lam = as_matrix(lam, "lam")
    if a.shape != lam.shape:
        raise BadParams("lam", f"shape {lam.shape} does not match a {a.shape}")
    require_pd(a, "a", tol)
    require_pd(lam, "lam", tol)
    return polar(a @ lam, tol).unitary_part.conj().T
