"""Brute-force ground truth over the full configuration space."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .complex import Domain, Field
from .energy import effective_energy, free_energy, shannon_entropy
from .hypergraph import Region
from .interaction import global_sum
from .tensor import gibbs, partial_sum
from .transforms import mobius0

GUARD = 2 ** 22


class GuardError(RuntimeError):
    pass


@dataclass
class GlobalModel:
    domain: Domain
    H: np.ndarray

    @property
    def omega(self) -> Region:
        return self.domain.X.omega

    def gibbs(self, theta: float = 1.0) -> np.ndarray:
        return gibbs(self.H, theta)

    def free_energy(self) -> float:
        return free_energy(self.H)

    def entropy(self) -> float:
        return shannon_entropy(self.gibbs())


def _guard(dom: Domain):
    n = dom.size(dom.X.omega)
    if n > GUARD:
        raise GuardError(f"{n} global states exceed the guard of {GUARD}")


def globalize(h: Field) -> GlobalModel:
    _guard(h.domain)
    return GlobalModel(h.domain, global_sum(h))


def exact_marginals(M: GlobalModel, dom: Domain | None = None) -> Field:
    dom = dom or M.domain
    _guard(dom)
    p = M.gibbs()
    omega = M.omega
    return Field(dom, 0, {(a,): partial_sum(p, omega, a) for a in dom.X})


def conditional_marginals(M: GlobalModel, boundary_vars, boundary_belief: np.ndarray,
                          dom: Domain | None = None) -> Field:
    """Marginals of p(x_int | x_B) · q_B(x_B): the model with its boundary law replaced."""
    dom = dom or M.domain
    omega = M.omega
    B = tuple(sorted(boundary_vars))
    p = M.gibbs()
    pB = partial_sum(p, omega, B)
    cond = p / dom.extend(pB, B, omega)
    joint = cond * dom.extend(boundary_belief, B, omega)
    return Field(dom, 0, {(a,): partial_sum(joint, omega, a) for a in dom.X})


def global_pass(M: GlobalModel, dom: Domain | None = None) -> tuple[Field, Field]:
    """U*_a = F^{aΩ}(H_Ω) and the potentials u* = μ·U*."""
    dom = dom or M.domain
    _guard(dom)
    U = Field(dom, 0, {(a,): effective_energy(M.H, M.omega, a) for a in dom.X})
    return U, mobius0(U)


@dataclass
class VariationalReport:
    free_energy: float
    gibbs_gap: float
    min_gap: float
    violations: int
    thetas: list = field(default_factory=list)
    energies: list = field(default_factory=list)
    monotone: bool = True

    @property
    def ok(self) -> bool:
        return self.violations == 0 and abs(self.gibbs_gap) < 1e-10 and self.monotone


def variational_check(M: GlobalModel, rng: np.random.Generator, samples: int = 100,
                      thetas=None) -> VariationalReport:
    """⟨p, H⟩ − S(p) ≥ F^Ω(H) on random densities, with equality at the Gibbs state."""
    _guard(M.domain)
    H = M.H
    F = M.free_energy()

    def gibbs_functional(p):
        return float(np.sum(p * H)) - shannon_entropy(p)

    gaps = []
    for _ in range(samples):
        p = rng.dirichlet(np.ones(H.size)).reshape(H.shape)
        gaps.append(gibbs_functional(p) - F)
    gaps = np.array(gaps)
    thetas = list(np.linspace(0.0, 4.0, 41) if thetas is None else thetas)
    energies = [float(np.sum(gibbs(H, t) * H)) for t in thetas]
    monotone = bool(np.all(np.diff(energies) <= 1e-12))
    return VariationalReport(F, gibbs_functional(M.gibbs()) - F, float(gaps.min()),
                             int(np.sum(gaps < -1e-12)), thetas, energies, monotone)
