"""Seeded property suites behind ``wpolar verify``.

Each suite runs independent trials. Trial ``i`` of suite ``s`` draws its
inputs from ``SeedSequence([seed, crc32(s), i])`` so results do not depend
on execution order or on how many workers run them.
"""
from __future__ import annotations

import hashlib
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .core_linalg import (
    DEFAULT_TOL,
    classify_basic,
    herm,
    inv_sqrt_pd,
    matrix_function_hermitian,
    opnorm,
    polar,
    random_instance,
    sqrt_pd,
)
from .errors import WPolarError
from .fibration import (
    alpha,
    alpha_positive_factor,
    inv_positive_restriction,
    lift_reflection,
    pi,
    pi_plus,
    weighted_polar,
)
from .oracles import descent_pt_2x2, grid_search_pt_2x2
from .pt_solver import all_solutions, solve_pt, theta, unique_positive_middle, unique_unitary_completion
from .structure_sets import (
    classify_union,
    gs_intersection_check,
    intersection_report,
    sample_commutant,
)
from .weighted_calculus import (
    a_orthogonal_projection,
    classify_weighted,
    make_weight,
    phi,
    phi_inv,
    sharp_adjoint,
    weighted_inner,
    weighted_op_norm,
)

__all__ = ["SUITES", "Check", "run_suite", "run_suites", "trial_seed"]

COND = 100.0


@dataclass
class Check:
    name: str
    value: float
    limit: float
    residual: bool = True

    @property
    def ok(self):
        return bool(np.isfinite(self.value) and self.value <= self.limit)


def flag(name, cond):
    return Check(name, 0.0 if cond else 1.0, 0.0, residual=False)


def rel(x, y):
    return opnorm(x - y) / max(1.0, opnorm(y))


def trial_seed(seed, suite, trial):
    return np.random.SeedSequence([int(seed), zlib.crc32(suite.encode()), int(trial)])


class _Trial:
    """Per-trial input generator that records what it produced."""

    def __init__(self, seq):
        self.rng = np.random.default_rng(seq)
        self.inputs = []

    def seed(self):
        return int(self.rng.integers(2**63))

    def inst(self, kind, dim, cond=COND):
        x = random_instance(kind, dim, self.seed(), cond)
        self.inputs.append(x)
        return x

    def weight(self, dim, tol, cond=COND):
        return make_weight(self.inst("positive_definite", dim, cond), tol)

    def vec(self, dim):
        v = self.rng.standard_normal(dim) + 1j * self.rng.standard_normal(dim)
        self.inputs.append(v)
        return v

    def digest(self):
        h = hashlib.sha256()
        for x in self.inputs:
            h.update(np.ascontiguousarray(x, dtype=complex).tobytes())
        return h.hexdigest()[:16]


def _core(t, n, tol):
    eye = np.eye(n)
    h = t.inst("hermitian", n)
    p = t.inst("positive_definite", n)
    g = t.inst("general_invertible", n)
    v = t.inst("unitary", n)
    kp = np.linalg.cond(p)
    r = sqrt_pd(p, tol)
    ir = inv_sqrt_pd(p, tol)
    f = polar(g, tol)
    fv = polar(g @ v, tol)
    checks = [
        Check("funcalc_identity", rel(matrix_function_hermitian(h, lambda s: s, tol), h), tol.bound()),
        Check("sqrt_square", rel(r @ r, p), tol.bound(kp)),
        Check("inv_sqrt", opnorm(ir @ r - eye), tol.bound(kp)),
        Check("polar_unitary", opnorm(f.unitary_part.conj().T @ f.unitary_part - eye), tol.bound()),
        Check("polar_left", rel(f.left_positive @ f.unitary_part, g), tol.bound()),
        Check("polar_right", rel(f.unitary_part @ f.right_positive, g), tol.bound()),
        Check("polar_uniqueness", opnorm(fv.unitary_part - f.unitary_part @ v), tol.bound(np.linalg.cond(g))),
        flag("polar_positive_parts", classify_basic(f.left_positive, tol).positive_definite
             and classify_basic(f.right_positive, tol).positive_definite),
    ]
    expected = {
        "general_invertible": set(),
        "unitary": {"unitary"},
        "hermitian": {"hermitian"},
        "positive_definite": {"hermitian", "positive_definite"},
        "reflection": {"hermitian", "unitary", "reflection"},
    }
    if n >= 2:
        for kind, want in expected.items():
            rep = classify_basic(t.inst(kind, n), tol)
            got = {k for k in ("hermitian", "positive_definite", "unitary", "reflection") if getattr(rep, k)}
            checks.append(flag(f"classify_basic_{kind}", got == want and rep.invertible and not rep.nilpotent))
    return checks


def _weighted(t, n, tol):
    w = t.weight(n, tol)
    k = w.kappa
    x = t.inst("general_invertible", n)
    y = t.inst("general_invertible", n)
    sx = sharp_adjoint(w, x)
    checks = [
        Check("sharp_involutive", rel(sharp_adjoint(w, sx), x), tol.bound(k * k)),
        Check("sharp_antimultiplicative", rel(sharp_adjoint(w, x @ y), sharp_adjoint(w, y) @ sx), tol.bound(k * k * opnorm(x) * opnorm(y))),
        Check("sharp_inverse", rel(np.linalg.inv(sx), sharp_adjoint(w, np.linalg.inv(x))), tol.bound(k * k * np.linalg.cond(x))),
        Check("phi_star_iso", rel(sharp_adjoint(w, phi(w, x)), phi(w, x.conj().T)), tol.bound(k * k)),
        Check("phi_roundtrip", rel(phi_inv(w, phi(w, x)), x), tol.bound(k)),
    ]
    # weighted operator norm: upper bound on random vectors, attained by power iteration
    nrm = weighted_op_norm(w, x)
    worst = 0.0
    for _ in range(200):
        xi = t.vec(n)
        xi = xi / np.sqrt(weighted_inner(w, xi, xi).real)
        worst = max(worst, np.sqrt(weighted_inner(w, x @ xi, x @ xi).real) / nrm)
    hm = w.sqrt_a @ x @ w.inv_sqrt_a
    z = np.ones(n, dtype=complex)
    for _ in range(500):
        z = hm.conj().T @ (hm @ z)
        z /= np.linalg.norm(z)
    xi = w.inv_sqrt_a @ z
    attained = np.sqrt(weighted_inner(w, x @ xi, x @ xi).real / weighted_inner(w, xi, xi).real) / nrm
    checks.append(Check("op_norm_bound", max(0.0, worst - 1.0), tol.bound(k)))
    checks.append(Check("op_norm_attained", abs(1.0 - attained), 1e-6, residual=False))
    xi, eta = t.vec(n), t.vec(n)
    checks.append(Check("adjoint_identity", abs(weighted_inner(w, x @ xi, eta) - weighted_inner(w, xi, sx @ eta))
                        / max(1.0, opnorm(x) * np.linalg.norm(xi) * np.linalg.norm(eta) * opnorm(w.a)), tol.bound(k)))
    # classify_weighted agrees with classify_basic through phi
    for kind, key in (("unitary", "unitary"), ("hermitian", "hermitian"), ("positive_definite", "positive_definite")):
        base = t.inst(kind, n)
        v = classify_weighted(w, phi(w, base), tol)
        b = classify_basic(phi_inv(w, phi(w, base)), tol)
        checks.append(flag(f"classify_weighted_{kind}",
                           (v.a_unitary, v.a_hermitian, v.a_positive) == (b.unitary, b.hermitian, b.positive_definite)))
    # a-orthogonal projection
    kcols = int(t.rng.integers(1, n + 1))
    m = np.column_stack([t.vec(n) for _ in range(kcols)])
    pr = a_orthogonal_projection(w, m, tol)
    q = pr.q
    eta = m @ (t.rng.standard_normal(kcols))
    xi = t.vec(n)
    kk = k * np.linalg.cond(m) ** 2
    checks += [
        Check("proj_idempotent", rel(q @ q, q), tol.bound(kk)),
        Check("proj_self_adjoint", rel(sharp_adjoint(w, q), q), tol.bound(k * kk)),
        Check("proj_fixes_range", rel(q @ m, m), tol.bound(kk)),
        Check("proj_orthogonal_residual", abs(weighted_inner(w, q @ xi - xi, eta))
              / max(1.0, np.linalg.norm(xi) * np.linalg.norm(eta) * opnorm(w.a)), tol.bound(kk)),
        Check("proj_reflection", opnorm(pr.reflection @ pr.reflection - np.eye(n)), tol.bound(kk)),
    ]
    return checks


def _pt(t, n, tol):
    h = t.inst("positive_definite", n)
    k = t.inst("positive_definite", n)
    eye = np.eye(n)
    tt = solve_pt(h, k, tol)
    kh = np.linalg.cond(h)
    u = sqrt_pd(h, tol) @ tt @ inv_sqrt_pd(k, tol)
    other = t.inst("positive_definite", n)
    uo = sqrt_pd(h, tol) @ other @ inv_sqrt_pd(k, tol)
    checks = [
        Check("pt_residual", opnorm(tt @ h @ tt - k) / opnorm(k), tol.bound(kh)),
        flag("pt_positive", classify_basic(tt, tol).positive_definite),
        Check("pt_unitary_characterization", opnorm(u.conj().T @ u - eye), tol.bound(kh)),
        flag("pt_non_solution_not_unitary", opnorm(uo.conj().T @ uo - eye) > 1e-3),
    ]
    fam = all_solutions(h, k, enumerate=True, cap=2**n)
    wa = make_weight(h, tol)
    sharp = max(rel(sharp_adjoint(wa, x @ h), x @ h) for x in fam.enumerated)
    checks += [
        Check("family_residual", max(fam.residuals), tol.bound(kh)),
        Check("family_xa_sharp_hermitian", sharp, tol.bound(wa.kappa ** 2)),
        Check("family_positive_member", rel(fam.positive_solution, tt), tol.bound(kh)),
    ]
    if not fam.multiplicity_warning:
        checks.append(flag("family_count", len(fam.enumerated) == 2**n))
    a, b = h, k
    x = unique_positive_middle(a, b, tol)
    th = theta(a, b, tol)
    ka = np.linalg.cond(a) * np.linalg.cond(b)
    checks += [
        Check("middle_equals_pt", rel(x, solve_pt(a @ a, np.linalg.inv(b @ b), tol)), tol.bound(ka * ka)),
        Check("theta_unitary", opnorm(th.conj().T @ th - eye), tol.bound(ka)),
        flag("theta_factors_pd", classify_basic(x, tol).positive_definite),
    ]
    uc = unique_unitary_completion(a, b, tol)
    prod = a @ b @ uc
    checks += [
        Check("completion_unitary", opnorm(uc.conj().T @ uc - eye), tol.bound()),
        Check("completion_hermitian", rel(prod, prod.conj().T), tol.bound(ka)),
        flag("completion_pd", classify_basic(prod, tol).positive_definite),
    ]
    return checks


def _bruteforce(t, n, tol):
    h = np.real(t.inst("positive_definite", 2, 10.0))
    h = 0.5 * (h + h.T)
    k = np.real(t.inst("positive_definite", 2, 10.0))
    k = 0.5 * (k + k.T)
    tt = solve_pt(h, k, tol)
    x = descent_pt_2x2(h, k)
    checks = [Check("descent_matches_closed_form", opnorm(x - tt), 1e-6, residual=False)]
    # local uniqueness: nearby positive matrices have larger residual
    base = opnorm(tt @ h @ tt - k)
    worse = True
    hh = t.inst("positive_definite", n)
    kk = t.inst("positive_definite", n)
    tn = solve_pt(hh, kk, tol)
    base_n = opnorm(tn @ hh @ tn - kk)
    for _ in range(20):
        d = herm(t.inst("hermitian", n))
        d /= opnorm(d)
        y = tn + 1e-4 * opnorm(tn) * d
        worse = worse and opnorm(y @ hh @ y - kk) > base_n
    checks.append(flag("local_uniqueness", worse and base <= tol.bound(opnorm(k))))
    return checks


def _grid(t, n, tol):
    a = t.inst("positive_definite", 2, 10.0)
    b = t.inst("positive_definite", 2, 10.0)
    fam = all_solutions(a, b, enumerate=True)
    r = grid_search_pt_2x2(a, b, fam.enumerated)
    return [
        flag("grid_no_extra_solutions", not r.extra),
        flag("grid_no_missed_solutions", not r.missed),
        flag("grid_no_overflow", not r.overflow),
    ]


def _fibration(t, n, tol):
    eye = np.eye(n)
    w = t.weight(n, tol)
    k = w.kappa
    u = t.inst("unitary", n)
    lam = t.inst("positive_definite", n)
    g = alpha(w, u, tol)
    vg = classify_weighted(w, g, tol)
    ua = phi(w, t.inst("unitary", n))
    rho = t.inst("reflection", n)
    eps = lift_reflection(w, rho, tol)
    mu = t.inst("positive_definite", n)
    gp = inv_positive_restriction(w, mu, tol)
    checks = [
        Check("fiber", opnorm(pi(lam @ u, tol) - u), tol.bound(np.linalg.cond(lam))),
        Check("pi_alpha", opnorm(pi(g, tol) - u), tol.bound(k)),
        Check("alpha_a_unitary", vg.residuals["a_unitary"], tol.bound(k * max(1.0, opnorm(g) ** 2))),
        Check("alpha_pi", rel(alpha(w, pi(ua, tol), tol), ua), tol.bound(k)),
        Check("lift_square", opnorm(eps @ eps - eye), tol.bound(k)),
        Check("lift_sharp", rel(sharp_adjoint(w, eps), eps), tol.bound(k * k)),
        Check("lift_inverse", rel(np.linalg.inv(eps), eps), tol.bound(k * k)),
        Check("positive_section", rel(pi_plus(gp, tol), mu), tol.bound(k * np.linalg.cond(mu))),
        flag("positive_section_a_positive", classify_weighted(w, gp, tol).a_positive),
    ]
    # only the alpha factor puts the fiber point into the a-unitary group
    lam_star = alpha_positive_factor(w, u, tol)
    hits = []
    for _ in range(10):
        cand = t.inst("positive_definite", n)
        hits.append(classify_weighted(w, cand @ u, tol).a_unitary == (opnorm(cand - lam_star) <= tol.bound(k)))
    checks.append(flag("fiber_intersection_unique", all(hits) and classify_weighted(w, lam_star @ u, tol).a_unitary))
    # weighted polar, plus the alternative a-unitary candidate from alpha
    x = t.inst("general_invertible", n)
    wp = weighted_polar(w, x, tol)
    kx = np.linalg.cond(x) * k
    v2 = alpha(w, pi(phi_inv(w, x), tol), tol)
    r2 = x @ np.linalg.inv(v2)
    checks += [
        Check("wpolar_left", rel(wp.a_positive_left @ wp.a_unitary_part, x), tol.bound(kx)),
        Check("wpolar_right", rel(wp.a_unitary_part @ wp.a_positive_right, x), tol.bound(kx)),
        flag("wpolar_classes", classify_weighted(w, wp.a_unitary_part, tol).a_unitary
             and classify_weighted(w, wp.a_positive_left, tol).a_positive
             and classify_weighted(w, wp.a_positive_right, tol).a_positive),
        Check("wpolar_phi_route", rel(wp.a_unitary_part, phi(w, pi(phi_inv(w, x), tol))), tol.bound(k)),
        flag("alpha_route_a_unitary", classify_weighted(w, v2, tol).a_unitary),
        Check("alpha_route_reconstructs", rel(r2 @ v2, x), tol.bound(kx * k)),
        Check("alpha_route_difference", opnorm(wp.a_unitary_part - v2), np.inf, residual=False),
    ]
    return checks


def _structure(t, n, tol):
    w = t.weight(n, tol)
    checks = []
    pds = [t.inst("positive_definite", n) for _ in range(5)]
    checks.append(flag("unitary_meets_positive_only_at_identity",
                       not any(classify_weighted(w, p, tol).a_unitary for p in pds)
                       and opnorm(alpha(w, np.eye(n), tol) - np.eye(n)) <= tol.bound(w.kappa)))
    # union classifier with witnesses
    p1, p2 = t.inst("positive_definite", n), t.inst("positive_definite", n)
    members = {
        "in_union_unitary": phi(w, t.inst("unitary", n)),
        "in_union_positive": p1 @ p2,
        "in_union_hermitian": p1 @ t.inst("hermitian", n) @ np.linalg.inv(p1),
    }
    for key, x in members.items():
        try:
            v = classify_union(x, tol)
        except WPolarError:
            checks.append(flag(f"union_{key}", False))
            continue
        ok = getattr(v, key) and v.witness_weight is not None
        checks.append(flag(f"union_{key}", ok))
        if ok and key != "in_union_unitary":
            a = v.witness_weight
            checks.append(Check(f"witness_identity_{key}", opnorm(a @ x - x.conj().T @ a) / (opnorm(a) * opnorm(x)),
                                tol.bound(np.linalg.cond(a))))
    jordan = np.eye(n, dtype=complex) + np.diag(np.ones(n - 1), 1) if n > 1 else None
    if jordan is not None:
        v = classify_union(jordan, tol)
        checks.append(flag("union_unipotent_outside", not (v.in_union_unitary or v.in_union_positive or v.in_union_hermitian)))
    # three routes for the a-unitary Hermitian elements
    probes = [
        np.eye(n),
        -np.eye(n),
        sample_commutant(w.a, "reflection", t.seed(), tol),
        phi(w, t.inst("unitary", n)),
        t.inst("reflection", n),
        t.inst("hermitian", n),
        lift_reflection(w, t.inst("reflection", n), tol),
    ]
    checks.append(flag("gs_three_routes", all(gs_intersection_check(w, b, tol).agree for b in probes)))
    b = t.inst("positive_definite", n)
    rep = intersection_report(w.a, b, samples_per_kind=3, seed=t.seed(), tol=tol)
    checks.append(flag("intersection_samples", rep.all_pass))
    return checks


SUITES = {
    "core": _core,
    "weighted": _weighted,
    "pt": _pt,
    "bruteforce": _bruteforce,
    "grid": _grid,
    "fibration": _fibration,
    "structure": _structure,
}


def _run_trial(suite, seed, trial, dim, tol):
    t = _Trial(trial_seed(seed, suite, trial))
    try:
        checks = SUITES[suite](t, dim, tol)
        error = None
    except WPolarError as exc:
        checks, error = [], str(exc)
    except np.linalg.LinAlgError as exc:
        checks, error = [], f"LinAlgError: {exc}"
    failed = [c for c in checks if not c.ok]
    residuals = {c.name: c.value for c in checks if c.residual}
    return {
        "case": f"{suite}-{trial}",
        "dim": dim,
        "digest": t.digest(),
        "ok": error is None and not failed,
        "error": error,
        "failed_checks": {c.name: {"value": c.value, "limit": c.limit} for c in failed},
        "residuals": residuals,
    }


def run_suite(suite, seed=0, trials=10, dims=(2, 4, 8), tol=DEFAULT_TOL, jobs=1):
    """Run one suite and return its report as a JSON-ready dict."""
    if suite not in SUITES:
        raise KeyError(suite)
    dims = [int(d) for d in dims]
    started = datetime.now(timezone.utc)
    t0 = time.perf_counter()
    args = [(suite, seed, i, dims[i % len(dims)], tol) for i in range(trials)]
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as ex:
            results = list(ex.map(lambda a: _run_trial(*a), args))
    else:
        results = [_run_trial(*a) for a in args]
    failures = []
    max_res = 0.0
    for r in results:
        if r["residuals"]:
            max_res = max(max_res, max(r["residuals"].values()))
        if not r["ok"]:
            failures.append({
                "case": r["case"],
                "inputs_digest": r["digest"],
                "dim": r["dim"],
                "error": r["error"],
                "residuals": r["failed_checks"] or r["residuals"],
            })
    return {
        "suite": suite,
        "seed": int(seed),
        "trials": int(trials),
        "dims": dims,
        "tol": {"rtol": tol.rtol, "atol": tol.atol},
        "passes": trials - len(failures),
        "failures": failures,
        "max_residual": max_res,
        "timestamp": {"started": started.isoformat(), "elapsed_s": time.perf_counter() - t0},
    }


def run_suites(names, **kw):
    return [run_suite(s, **kw) for s in names]
