"""Property suite run by ``gbpflow check`` on a single model."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import complex as cx
from .diffusion import (RunConfig, canonical_jacobian_fd, conservation_check,
                        faithfulness_probe, run, spectrum, twisted_laplacian)
from .energy import PreconditionError, criticality_residual
from .hypergraph import convolve
from .interaction import (DecompositionUnavailable, character_partition, homotopy_defect,
                          interaction_projection)
from .oracle import GuardError, exact_marginals, global_pass, globalize, variational_check
from .energy import effective_gradient
from .tensor import gibbs
from .transforms import mobius0, mobius1, mobius1_direct, zeta0, zeta1


@dataclass
class Check:
    name: str
    value: float | None
    tol: float
    skipped: str = ""

    @property
    def ok(self) -> bool:
        return bool(self.skipped) or (self.value is not None and self.value < self.tol)

    def as_dict(self) -> dict:
        out = {"name": self.name, "value": self.value, "tol": self.tol, "ok": self.ok}
        if self.skipped:
            out["skipped"] = self.skipped
        return out


def _max_over(dom, fn, rng, trials):
    return max(fn(dom, rng) for _ in range(trials))


def _delta_squared(dom, rng):
    if not dom.chains(2):
        return 0.0
    return cx.boundary(cx.boundary(dom.random(2, rng))).norm()


def _d_squared(dom, rng):
    return cx.differential(cx.differential(dom.random(0, rng))).norm()


def _adjoint(dom, rng):
    q, phi = dom.random(0, rng), dom.random(1, rng)
    return abs(cx.pairing(cx.differential(q), phi) - cx.pairing(q, cx.boundary(phi)))


def _gauss(dom, rng):
    phi = dom.random(1, rng)
    worst = 0.0
    for a in dom.X:
        lhs, rhs = cx.gauss_cone(phi, a)
        worst = max(worst, float(np.max(np.abs(lhs - rhs), initial=0.0)))
    return worst


def algebra_checks(dom, rng, trials: int = 10) -> list[Check]:
    X = dom.X
    checks = [
        Check("delta_squared", _max_over(dom, _delta_squared, rng, trials), 1e-12),
        Check("d_squared", _max_over(dom, _d_squared, rng, trials), 1e-12),
        Check("adjointness", _max_over(dom, _adjoint, rng, trials), 1e-10),
        Check("gauss_per_cone", _max_over(dom, _gauss, rng, trials), 1e-12),
    ]
    delta = {(a, b): int(a == b) for a in X for b in X.below(a, strict=False)}
    conv = convolve(X.mobius, X.zeta, X)
    checks.append(Check("mobius_zeta_identity",
                        float(max(abs(conv[k] - delta[k]) for k in delta)), 0.5))
    u = dom.random(0, rng)
    checks.append(Check("zeta0_roundtrip", (mobius0(zeta0(u)) - u).norm(), 1e-10))
    if X.closed:
        phi = dom.random(1, rng)
        checks.append(Check("zeta1_roundtrip", (mobius1(zeta1(phi)) - phi).norm(), 1e-10))
        checks.append(Check("mobius1_forms", (mobius1(phi) - mobius1_direct(phi)).norm(), 1e-10))
    else:
        checks += [Check(n, None, 0, "hypergraph not closed")
                   for n in ("zeta1_roundtrip", "mobius1_forms")]
    checks.append(Check("homotopy_degree0", homotopy_defect(dom.random(0, rng)), 1e-12))
    try:
        sizes = max(abs(sum(character_partition(dom, a).sizes().values()) - dom.size(a))
                    for a in X)
        u = dom.random(0, rng)
        Pu = interaction_projection(u)
        checks += [
            Check("character_group_sizes", float(sizes), 0.5),
            Check("projection_idempotent", (interaction_projection(Pu) - Pu).norm(), 1e-10),
            Check("projection_kills_boundaries",
                  interaction_projection(cx.boundary(dom.random(1, rng))).norm(), 1e-10),
        ]
    except DecompositionUnavailable as exc:
        checks += [Check(n, None, 0, str(exc)) for n in
                   ("character_group_sizes", "projection_idempotent",
                    "projection_kills_boundaries")]
    return checks


def oracle_checks(dom, h, rng) -> list[Check]:
    names = ("exact_consistency", "global_pass_gradient", "global_pass_marginals",
             "variational_inequality")
    try:
        M = globalize(h)
    except GuardError as exc:
        return [Check(n, None, 0, str(exc)) for n in names]
    p = exact_marginals(M, dom)
    U, _ = global_pass(M, dom)
    rep = variational_check(M, rng)
    return [
        Check(names[0], cx.differential(p).norm(), 1e-12),
        Check(names[1], effective_gradient(U).norm(), 1e-10),
        Check(names[2], float(max(np.max(np.abs(gibbs(U[a]) - p[a])) for a in dom.X)), 1e-12),
        Check(names[3], 0.0 if rep.ok else 1.0, 0.5),
    ]


def diffusion_checks(dom, h, tol: float = 1e-10) -> list[Check]:
    X = dom.X
    if not X.closed:
        return [Check("canonical_run", None, 0, "hypergraph not closed")]
    retractable, _ = X.is_retractable()
    step = 1.0 if retractable else 0.5
    eq, trace = run(h, RunConfig(step=step, tol=tol, max_iters=2000), "canonical")
    cons = conservation_check(trace)
    checks = [
        Check("canonical_run_residual", eq.residual, tol * (1 + 1e-9)),
        Check("global_sum_drift", cons.global_sum_drift, 1e-10),
        Check("belief_consistency", eq.consistency, 10 * tol),
    ]
    if not eq.converged:
        return checks
    flux_norm, grad_norm = faithfulness_probe(eq.u, "canonical")
    checks.append(Check("faithfulness", grad_norm, 10 * tol))
    if retractable:
        try:
            p = exact_marginals(globalize(h), dom)
            tv = max(0.5 * float(np.abs(eq.q[a] - p[a]).sum()) for a in X)
            checks.append(Check("retractable_exactness", tv, 1e-8))
        except GuardError as exc:
            checks.append(Check("retractable_exactness", None, 0, str(exc)))
    try:
        checks.append(Check("criticality", criticality_residual(eq.q, zeta0(h)), 1e-6))
    except PreconditionError as exc:
        checks.append(Check("criticality", None, 0, str(exc)))
    L = twisted_laplacian(eq.u)
    J = canonical_jacobian_fd(eq.u)
    scale = max(float(np.abs(L).max()), 1e-300)
    checks.append(Check("laplacian_vs_fd", float(np.abs(L + J).max()) / scale, 1e-4))
    checks.append(Check("eigen_residual", spectrum(L).residual, 1e-8))
    return checks


def property_suite(dom, h, seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    return algebra_checks(dom, rng) + oracle_checks(dom, h, rng) + diffusion_checks(dom, h)
