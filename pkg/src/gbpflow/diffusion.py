"""Energy fluxes, Euler integrators of u̇ = δΦ(u), and message-passing."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import (Domain, Field, boundary, differential, interior_divergence,
                      nabla, truncated_divergence)
from .energy import beliefs, effective_gradient, free_energy
from .hypergraph import BoundarySplit
from .interaction import global_sum
from .tensor import partial_sum, safe_log
from .transforms import mobius0, mobius1, zeta0

FLUX_KINDS = ("standard", "normalized", "canonical")
DIVERGENCES = ("full", "truncated", "interior")


class DivergenceError(ArithmeticError):
    def __init__(self, msg, trace=None):
        super().__init__(msg)
        self.trace = trace


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    step: float = 1.0
    tol: float = 1e-10
    max_iters: int = 1000
    divergence: str = "full"
    normalize_each_step: bool = False
    record_trace: bool = True
    split: BoundarySplit | None = None
    blowup: float = 1e6

    def __post_init__(self):
        if not 0 < self.step <= 1:
            raise ConfigError("step must lie in (0, 1]")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.divergence not in DIVERGENCES:
            raise ConfigError(f"divergence must be one of {DIVERGENCES}")
        if self.divergence == "interior" and self.split is None:
            raise ConfigError("interior divergence needs a boundary split")
        if self.divergence == "interior" and self.normalize_each_step:
            raise ConfigError("normalisation would move clamped boundary potentials")


@dataclass
class Trace:
    residuals: list = field(default_factory=list)
    global_sums: list = field(default_factory=list)
    log_products: list = field(default_factory=list)

    def __len__(self):
        return len(self.residuals)

    def rows(self):
        for i, r in enumerate(self.residuals):
            row = {"iter": i, "residual": r}
            if self.global_sums:
                row["global_sum_drift"] = float(np.max(np.abs(
                    self.global_sums[i] - self.global_sums[0]), initial=0.0))
            if self.log_products:
                row["log_product_drift"] = float(np.max(np.abs(
                    self.log_products[i] - self.log_products[0]), initial=0.0))
            yield row


@dataclass
class Equilibrium:
    u: Field
    q: Field
    converged: bool
    iters: int
    residual: float
    consistency: float
    diverged: bool = False


def standard_flux(u: Field) -> Field:
    """Φ(u) = −D(ζ0 u)."""
    return -effective_gradient(zeta0(u))


def flux(u: Field, kind: str = "standard") -> Field:
    if kind not in FLUX_KINDS:
        raise ConfigError(f"flux must be one of {FLUX_KINDS}")
    Phi = standard_flux(u)
    if kind == "standard":
        return Phi
    X = u.domain.X
    if kind == "normalized":
        if () not in X:
            raise ConfigError("the normalized flux needs ∅ among the regions")
        mu = X.mobius
        outbound = {b: Phi.values[b, ()] for b in X if b != ()}
        for a in outbound:
            Phi.values[a, ()] = np.asarray(sum(
                mu[a, b] * outbound[b] for b in X.below(a, strict=False) if b != ()),
                dtype=float)
        return Phi
    if not X.closed:
        raise ConfigError("the canonical flux needs an intersection-closed hypergraph")
    return mobius1(Phi)


def divergence(phi: Field, config: RunConfig) -> Field:
    if config.divergence == "full":
        return boundary(phi)
    if config.divergence == "truncated":
        return truncated_divergence(phi)
    return interior_divergence(phi, config.split)


def normalize(u: Field) -> Field:
    """Shift u along per-region constants so that every belief sums to one."""
    U = zeta0(u)
    dom = u.domain
    shift = mobius0(dom.constant({a: -free_energy(U[a]) for a in dom.X}))
    return u + shift


def log_product(u: Field) -> np.ndarray:
    """Σ_a c_a ln q_a on Ω, centred; constant along runs up to numerical error."""
    dom = u.domain
    c = dom.X.mobius_numbers.c
    q = beliefs(zeta0(u))
    omega = dom.X.omega
    acc = np.zeros(dom.shape(omega))
    for a in dom.X:
        if c[a]:
            acc += c[a] * dom.extend(safe_log(q[a]), a, omega)
    return acc - acc.mean()


def euler_step(u: Field, config: RunConfig, kind: str = "standard") -> Field:
    step = divergence(flux(u, kind), config)
    out = u + config.step * step
    if config.normalize_each_step:
        out = normalize(out)
    if not out.isfinite():
        raise DivergenceError("non-finite potentials after an Euler step")
    return out


def run(h: Field, config: RunConfig, kind: str = "standard") -> tuple[Equilibrium, Trace]:
    """Iterate Euler steps from u(0) = h until the residual ‖Δ flux(u)‖∞ ≤ tol."""
    trace = Trace()
    u = h.copy()
    converged = diverged = False
    iters = 0
    residual = np.inf
    while True:
        try:
            phi = flux(u, kind)
            div = divergence(phi, config)
            residual = div.norm() if div.isfinite() else np.inf
        except FloatingPointError:
            residual = np.inf
        if config.record_trace:
            trace.residuals.append(float(residual))
            trace.global_sums.append(global_sum(u))
            trace.log_products.append(log_product(u) if u.isfinite() else
                                      np.full(u.domain.shape(u.domain.X.omega), np.nan))
        if residual <= config.tol:
            converged = True
            break
        if not np.isfinite(residual) or residual > config.blowup:
            diverged = True
            break
        if iters >= config.max_iters:
            break
        u = u + config.step * div
        if config.normalize_each_step:
            u = normalize(u)
        iters += 1
    q = beliefs(zeta0(u))
    consistency = differential(q).norm() if q.isfinite() else np.inf
    return Equilibrium(u, q, converged, iters, float(residual), consistency, diverged), trace


def clamp_boundary(u: Field, boundary_values: Field, split: BoundarySplit) -> Field:
    """Replace the boundary components of u by the prescribed potentials."""
    out = u.copy()
    for a in split.boundary:
        out.values[(a,)] = np.array(boundary_values[a], dtype=float)
    return out


def bp_messages(f: Field, m0: Field | None = None, lam: float = 1.0,
                iters: int = 1) -> tuple[Field, Field]:
    """Generalised belief propagation in multiplicative form.

    Beliefs are q_a = [∏_{b ⊆ a} f_b · ∏_{(a'b') ∈ dΛ^a} m_{a'b'}] and each
    synchronous sweep updates m_ab ← m_ab (Σ^{ba} q_a / q_b)^λ.
    """
    dom = f.domain
    X = dom.X
    if any(np.any(v <= 0) for v in f.values.values()):
        raise ArithmeticError("factors must be strictly positive")
    m = m0.copy() if m0 is not None else dom.zeros(1).map(lambda v: np.ones_like(v))
    cob = {a: X.cone_coboundary(a) for a in X}

    def compute_beliefs(m):
        vals = {}
        for a in X:
            g = np.ones(dom.shape(a))
            for b in X.below(a, strict=False):
                g = g * dom.extend(f[b], b, a)
            for c in cob[a]:
                g = g * dom.extend(m.values[c], c[1], a)
            if not np.all(g > 0) or not np.all(np.isfinite(g)):
                raise ArithmeticError(f"non-positive belief on {a}")
            vals[(a,)] = g / g.sum()
        return Field(dom, 0, vals)

    q = compute_beliefs(m)
    for _ in range(iters):
        new = {}
        for a, b in dom.chains(1):
            ratio = partial_sum(q[a], a, b) / q[b]
            mab = m.values[a, b] * ratio ** lam
            new[a, b] = mab / mab.max()
        m = Field(dom, 1, new)
        q = compute_beliefs(m)
    return q, m


@dataclass
class ConservationReport:
    global_sum_drift: float
    log_product_drift: float


def conservation_check(trace: Trace) -> ConservationReport:
    if len(trace) == 0:
        return ConservationReport(0.0, 0.0)
    g0, l0 = trace.global_sums[0], trace.log_products[0]
    gs = max(float(np.max(np.abs(g - g0), initial=0.0)) for g in trace.global_sums)
    lp = max(float(np.max(np.abs(l - l0), initial=0.0)) for l in trace.log_products)
    return ConservationReport(gs, lp)


def faithfulness_probe(u: Field, kind: str = "standard") -> tuple[float, float]:
    return boundary(flux(u, kind)).norm(), effective_gradient(zeta0(u)).norm()


def boundary_matrix(dom: Domain) -> np.ndarray:
    n1 = dom.dim(1)
    cols = []
    for j in range(n1):
        e = np.zeros(n1)
        e[j] = 1.0
        cols.append(boundary(dom.from_vector(1, e)).vector())
    return np.array(cols).T if cols else np.zeros((dom.dim(0), 0))


def homology_residual(u: Field, h: Field) -> float:
    """Least-squares distance from u − h to the image of δ."""
    B = boundary_matrix(u.domain)
    r = (u - h).vector()
    x, *_ = np.linalg.lstsq(B, r, rcond=None)
    return float(np.linalg.norm(r - B @ x))


def twisted_laplacian(u_star: Field) -> np.ndarray:
    """Matrix of L = δ ∘ μ ∘ ∇ ∘ ζ linearised at the beliefs of u*.

    The canonical flow near u* reads v̇ ≈ −L v.
    """
    dom = u_star.domain
    U = zeta0(u_star)
    n0 = dom.dim(0)
    cols = []
    for j in range(n0):
        e = np.zeros(n0)
        e[j] = 1.0
        v = dom.from_vector(0, e)
        cols.append(boundary(mobius1(nabla(U, zeta0(v)))).vector())
    return np.array(cols).T


def canonical_jacobian_fd(u_star: Field, eps: float = 1e-5) -> np.ndarray:
    """Central finite-difference Jacobian of v ↦ δ φ(u* + v) for the canonical flux."""
    dom = u_star.domain
    n0 = dom.dim(0)
    cols = []
    for j in range(n0):
        e = np.zeros(n0)
        e[j] = eps
        dv = dom.from_vector(0, e)
        plus = boundary(flux(u_star + dv, "canonical")).vector()
        minus = boundary(flux(u_star - dv, "canonical")).vector()
        cols.append((plus - minus) / (2 * eps))
    return np.array(cols).T


@dataclass
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residual: float


def spectrum(L: np.ndarray) -> Spectrum:
    w, V = np.linalg.eig(L)
    order = np.lexsort((w.imag, w.real))
    w, V = w[order], V[:, order]
    res = float(np.max(np.linalg.norm(L @ V - V * w, axis=0), initial=0.0))
    return Spectrum(w, V, res)


def bethe_expected_flux(Phi: Field) -> Field:
    """Σ_{ω ∉ Λ^a} c_ω Φ_{ω → ω∩a}, read on each member a.

    Matches ζ∘δ∘μ applied to Φ when the hypergraph has no top element.
    """
    dom = Phi.domain
    X = dom.X
    c = X.mobius_numbers.c
    vals = {}
    for a in X:
        cone = set(X.below(a, strict=False))
        acc = np.zeros(dom.shape(a))
        for w in X:
            if w in cone or not c[w]:
                continue
            b = tuple(v for v in w if v in a)
            if (w, b) not in Phi.values:
                continue
            acc += c[w] * dom.extend(Phi.values[w, b], b, a)
        vals[(a,)] = acc
    return Field(dom, 0, vals)
