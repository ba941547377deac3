"""How the weighted classes intersect and what their unions are.

Intersections reduce to commutants: for weights ``a``, ``b`` and
``c = b^-1/2 a b^-1/2`` each intersection of an a-class with a b-class is
``phi_b`` applied to a structured subset of the commutant of ``c``.
Unions over all weights are similarity orbits, decided in finite
dimension from an eigendecomposition.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from .core_linalg import (
    DEFAULT_TOL,
    as_matrix,
    classify_basic,
    cluster_eigenvalues,
    eig_hermitian,
    herm,
    opnorm,
    polar,
    random_instance,
    random_unitary,
)
from .errors import BadParams, IllConditionedEigenbasis, NotHermitian, Singular
from .weighted_calculus import classify_weighted, make_weight, phi

__all__ = [
    "UnionVerdict",
    "IntersectionReport",
    "GsReport",
    "COMMUTANT_KINDS",
    "INTERSECTION_KINDS",
    "in_commutant",
    "sample_commutant",
    "gs_intersection_check",
    "intersection_report",
    "classify_union",
]

COMMUTANT_KINDS = ("unitary", "hermitian", "positive", "reflection")


@dataclass(frozen=True)
class UnionVerdict:
    in_union_unitary: bool
    in_union_positive: bool
    in_union_hermitian: bool
    witness_weight: Optional[np.ndarray] = None
    diag_basis: Optional[np.ndarray] = None
    residuals: dict = field(default_factory=dict)
    diagonalizable: bool = True


@dataclass(frozen=True)
class IntersectionReport:
    c: np.ndarray
    samples: list

    @property
    def all_pass(self):
        return all(ok for _, _, _, ok in self.samples)


@dataclass(frozen=True)
class GsReport:
    in_intersection: bool
    commuting_reflection: bool
    trivial_polar: bool
    residuals: dict

    @property
    def agree(self):
        return self.in_intersection == self.commuting_reflection == self.trivial_polar


def in_commutant(c, d, tol=DEFAULT_TOL):
    c = np.asarray(c, dtype=complex)
    d = np.asarray(d, dtype=complex)
    return bool(opnorm(d @ c - c @ d) <= tol.bound(opnorm(c) * opnorm(d)))


def _block_element(rng, kind, k):
    if kind == "reflection":
        u = random_unitary(rng, k)
        s = rng.choice([-1.0, 1.0], size=k)
        return herm((u * s) @ u.conj().T)
    mapped = {"unitary": "unitary", "hermitian": "hermitian", "positive": "positive_definite"}[kind]
    return random_instance(mapped, k, rng.integers(2**63), cond_bound=10.0)


def sample_commutant(c, kind, seed, tol=DEFAULT_TOL):
    """Random element of the given structure commuting with Hermitian ``c``.

    Built block-diagonally in the eigenbasis of ``c``, one block per
    cluster of equal eigenvalues.
    """
    if kind not in COMMUTANT_KINDS:
        raise BadParams("kind", f"unknown kind {kind!r}; expected one of {COMMUTANT_KINDS}")
    try:
        eig = eig_hermitian(c, tol)
    except NotHermitian as exc:
        raise NotHermitian("c", exc.detail) from None
    rng = np.random.default_rng(seed)
    v = eig.basis
    blocks = cluster_eigenvalues(eig.eigenvalues)
    order = np.concatenate(blocks)
    vb = v[:, order]
    d = scipy.linalg.block_diag(*[_block_element(rng, kind, idx.size) for idx in blocks])
    out = vb @ d @ vb.conj().T
    if kind != "unitary":
        out = herm(out)
    return out


def gs_intersection_check(w, b, tol=DEFAULT_TOL):
    """Decide ``b`` in (a-unitary and Hermitian) by three independent routes.

    (i) direct membership tests; (ii) ``b`` is an orthogonal reflection
    commuting with ``a``; (iii) the polar decomposition of ``b`` has
    trivial positive part and its unitary part is a reflection commuting
    with ``a``.
    """
    b = as_matrix(b, "b")
    basic = classify_basic(b, tol)
    if not basic.invertible:
        raise Singular("b", "not invertible")
    verdict = classify_weighted(w, b, tol)
    route_i = verdict.a_unitary and basic.hermitian
    route_ii = basic.reflection and basic.unitary and basic.hermitian and in_commutant(w.a, b, tol)
    f = polar(b, tol)
    u = f.unitary_part
    n = b.shape[0]
    lam_res = opnorm(f.left_positive - np.eye(n))
    ub = classify_basic(u, tol)
    route_iii = bool(
        lam_res <= tol.bound(opnorm(b))
        and ub.reflection
        and ub.hermitian
        and in_commutant(w.a, u, tol)
    )
    res = {
        "a_unitary": verdict.residuals["a_unitary"],
        "hermitian": basic.residuals["hermitian"],
        "reflection": basic.residuals["reflection"],
        "commutator": opnorm(w.a @ b - b @ w.a),
        "positive_part": lam_res,
    }
    return GsReport(bool(route_i), bool(route_ii), route_iii, res)


INTERSECTION_KINDS = {
    "unitary_hermitian": ("reflection", ("a_unitary", "b_hermitian")),
    "unitary_unitary": ("unitary", ("a_unitary", "b_unitary")),
    "hermitian_hermitian": ("hermitian", ("a_hermitian", "b_hermitian")),
    "positive_positive": ("positive", ("a_positive", "b_positive")),
    "unitary_positive": (None, ("a_unitary", "b_positive")),
}


def intersection_report(a, b, kinds=tuple(INTERSECTION_KINDS), samples_per_kind=20, seed=0, tol=DEFAULT_TOL):
    """Sample intersections of a-classes with b-classes and verify both memberships.

    For each kind the samples are ``phi_b(d)`` with ``d`` drawn from the
    matching structure in the commutant of ``c = b^-1/2 a b^-1/2``. The
    ``unitary_positive`` intersection is the identity alone; its only
    sample is ``phi_b(1)``.

    Returns
    -------
    IntersectionReport
        ``samples`` holds ``(kind, element, residuals, passed)`` tuples.
    """
    wa = make_weight(a, tol)
    wb = make_weight(b, tol)
    c = herm(wb.inv_sqrt_a @ wa.a @ wb.inv_sqrt_a)
    rng = np.random.default_rng(seed)
    samples = []
    for kind in kinds:
        if kind not in INTERSECTION_KINDS:
            raise BadParams("kinds", f"unknown intersection kind {kind!r}")
        commutant_kind, claims = INTERSECTION_KINDS[kind]
        count = 1 if commutant_kind is None else samples_per_kind
        for _ in range(count):
            if commutant_kind is None:
                d = np.eye(c.shape[0], dtype=complex)
            else:
                d = sample_commutant(c, commutant_kind, rng.integers(2**63), tol)
            x = phi(wb, d)
            va = classify_weighted(wa, x, tol)
            vb = classify_weighted(wb, x, tol)
            flags = {
                "a_unitary": va.a_unitary,
                "a_hermitian": va.a_hermitian,
                "a_positive": va.a_positive,
                "b_unitary": vb.a_unitary,
                "b_hermitian": vb.a_hermitian,
                "b_positive": vb.a_positive,
            }
            res = {f"a_{k}": v for k, v in va.residuals.items()}
            res.update({f"b_{k}": v for k, v in vb.residuals.items()})
            ok = all(flags[cl] for cl in claims)
            if commutant_kind is None:
                res["identity"] = opnorm(x - np.eye(x.shape[0]))
                ok = ok and res["identity"] <= 1e-8
            samples.append((kind, x, res, bool(ok)))
    return IntersectionReport(c, samples)


def _eig_tol(tol, kv, nx, lam):
    eps = np.finfo(float).eps
    return tol.rtol * max(1.0, abs(lam)) + 10 * eps * kv * max(1.0, nx) + tol.atol


def classify_union(x, tol=DEFAULT_TOL):
    """Decide whether ``x`` is a-unitary, a-positive or a-Hermitian for some weight.

    In finite dimension these unions are the matrices similar to a
    unitary, a positive definite and an invertible Hermitian matrix,
    i.e. diagonalizable with spectrum on the unit circle, in the positive
    reals, or in the reals. Clusters of eigenvalues are checked for
    geometric multiplicity; a defective cluster puts ``x`` outside every
    union. When a flag is set, ``(V V*)^-1`` built from the unit-norm
    eigenvector matrix ``V`` is returned as a witness weight, and is
    verified with ``classify_weighted``.

    Raises
    ------
    Singular
        If ``x`` is not invertible.
    IllConditionedEigenbasis
        If the eigenbasis is too ill-conditioned (``kappa(V) > 1/(10 rtol)``)
        or the witness fails verification; the verdict is undecidable.
    """
    x = as_matrix(x, "x")
    n = x.shape[0]
    s = np.linalg.svd(x, compute_uv=False)
    if s[-1] <= tol.atol or s[-1] <= n * np.finfo(float).eps * s[0]:
        raise Singular("x", f"smallest singular value {s[-1]:.3e}")
    nx = float(s[0])
    lam, v = np.linalg.eig(x)
    order = np.lexsort((lam.imag, lam.real))
    lam, v = lam[order], v[:, order]
    v = v / np.linalg.norm(v, axis=0)
    res = {}

    # group numerically coincident eigenvalues and compare geometric multiplicity
    scale = max(1.0, float(np.max(np.abs(lam))))
    gap = max(1e-8, np.sqrt(tol.rtol)) * scale
    groups = _complex_clusters(lam, gap)
    for idx in groups:
        if idx.size == 1:
            continue
        mu = lam[idx].mean()
        _, sv, vh = np.linalg.svd(x - mu * np.eye(n))
        spread = float(np.max(np.abs(lam[idx] - mu)))
        thresh = max(tol.bound(nx), 10 * spread)
        geo = int(np.sum(sv <= thresh))
        res["max_cluster_size"] = max(res.get("max_cluster_size", 1), int(idx.size))
        if geo < idx.size:
            return UnionVerdict(False, False, False, None, None, res, diagonalizable=False)
        v[:, idx] = vh[n - idx.size :].conj().T
        lam[idx] = mu
    kv = float(np.linalg.cond(v))
    res["eigenbasis_cond"] = kv
    if kv > 1.0 / (10 * tol.rtol):
        raise IllConditionedEigenbasis("x", f"eigenbasis condition number {kv:.3e}; undecidable at tol")

    real = all(abs(l.imag) <= _eig_tol(tol, kv, nx, l) for l in lam)
    unit = all(abs(abs(l) - 1.0) <= _eig_tol(tol, kv, nx, l) for l in lam)
    positive = real and all(l.real > _eig_tol(tol, kv, nx, l) for l in lam)
    res["max_imag"] = float(np.max(np.abs(lam.imag)))
    res["max_unit_defect"] = float(np.max(np.abs(np.abs(lam) - 1.0)))
    if not (real or unit):
        return UnionVerdict(False, False, False, None, v, res)

    witness = herm(np.linalg.inv(herm(v @ v.conj().T)))
    wt = make_weight(witness, tol)
    verdict = classify_weighted(wt, x, tol)
    res["witness_a_unitary"] = verdict.residuals["a_unitary"]
    res["witness_a_hermitian"] = verdict.residuals["a_hermitian"]
    confirmed = (
        (not unit or verdict.a_unitary)
        and (not real or verdict.a_hermitian)
        and (not positive or verdict.a_positive)
    )
    if not confirmed:
        raise IllConditionedEigenbasis("x", "witness weight failed verification; undecidable at tol")
    return UnionVerdict(unit, positive, real, witness, v, res)


def _complex_clusters(lam, gap):
    """Single-linkage clusters of complex eigenvalues at distance <= gap."""
    n = lam.size
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(lam[i] - lam[j]) <= gap:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [np.array(sorted(g)) for g in sorted(groups.values(), key=min)]
