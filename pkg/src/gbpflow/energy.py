"""Free and effective energies, entropies and Bethe functionals."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .complex import Domain, Field, differential, truncated_divergence
from .hypergraph import Region
from .tensor import gibbs, partial_sum, safe_log
from .transforms import zeta0


class PreconditionError(ValueError):
    pass


def free_energy(H, theta: float = 1.0) -> float:
    """F = −θ⁻¹ ln Σ e^{−θH}."""
    H = np.asarray(H, dtype=float)
    m = H.min()
    return float(m - np.log(np.sum(np.exp(-theta * (H - m)))) / theta)


def effective_energy(H, a: Region, b: Region) -> np.ndarray:
    """F^{ba}(H) = −ln Σ^{ba} e^{−H}, shifted per output cell."""
    H = np.asarray(H, dtype=float)
    keep = [i for i, v in enumerate(a) if v in b]
    drop = tuple(i for i in range(len(a)) if i not in keep)
    if not drop:
        return H.copy()
    m = H.min(axis=drop, keepdims=True)
    s = np.sum(np.exp(-(H - m)), axis=drop, keepdims=True)
    return np.squeeze(m - np.log(s), axis=drop)


def effective_gradient(U: Field) -> Field:
    """D(U)_ab = U_b − F^{ba}(U_a)."""
    dom = U.domain
    return Field(dom, 1, {(a, b): U[b] - effective_energy(U[a], a, b)
                          for a, b in dom.chains(1)})


def beliefs(U: Field) -> Field:
    return U.map(gibbs)


def neg_log(p: Field) -> Field:
    return p.map(lambda v: -safe_log(v))


def local_free_energies(U: Field) -> dict:
    return {a: free_energy(U[a]) for a in U.domain.X}


def shannon_entropy(p) -> float:
    p = np.asarray(p, dtype=float)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def conditional_entropy(p, a: Region, b: Region) -> float:
    """S(p_a | p_b) = Σ_{x_b} p_b(x_b) S(p_{a|x_b})."""
    p = np.asarray(p, dtype=float)
    pb = partial_sum(p, a, b)
    keep = [i for i, v in enumerate(a) if v in b]
    shape = [p.shape[i] if i in keep else 1 for i in range(len(a))]
    cond = p / pb.reshape(shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(p > 0, -p * np.log(cond), 0.0)
    return float(np.sum(terms))


def mutual_information(marginals: dict, a: Region) -> float:
    """I_a = Σ_{b ⊆ a} (−1)^{|b|+1} S(p_b), from marginals on every subset."""
    if len(a) > 4:
        raise PreconditionError("mutual information is limited to regions of size ≤ 4")
    total = 0.0
    for k in range(1, len(a) + 1):
        for b in combinations(a, k):
            total += (-1) ** (k + 1) * shannon_entropy(marginals[b])
    return total


def bethe_entropy(p: Field) -> float:
    c = p.domain.X.mobius_numbers.c
    return float(sum(c[a] * shannon_entropy(p[a]) for a in p.domain.X))


def bethe_free_energy(p: Field, H: Field) -> float:
    """F_B = Σ_b c_b (⟨p_b, H_b⟩ − S(p_b))."""
    c = p.domain.X.mobius_numbers.c
    return float(sum(c[b] * (np.sum(p[b] * H[b]) - shannon_entropy(p[b]))
                     for b in p.domain.X))


def covariance(H, f, g) -> float:
    p = gibbs(H)
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    return float(np.sum(p * f * g) - np.sum(p * f) * np.sum(p * g))


def flux_operator(dom: Domain) -> np.ndarray:
    """Matrix of φ ↦ ζ0(δ′φ) from A_1 to A_0 in the flat layouts."""
    cols = []
    n1 = dom.dim(1)
    for j in range(n1):
        e = np.zeros(n1)
        e[j] = 1.0
        cols.append(zeta0(truncated_divergence(dom.from_vector(1, e))).vector())
    return np.array(cols).T if cols else np.zeros((dom.dim(0), 0))


def criticality_residual(p: Field, H: Field, consistency_tol: float = 1e-6,
                         ridge: float = 1e-12) -> float:
    """Distance from −ln p − H to the span of ζ0(δ′φ), in the Euclidean norm.

    Near zero exactly when p is a critical point of the Bethe free energy
    restricted to consistent beliefs.
    """
    dom = p.domain
    if () not in dom.X:
        raise PreconditionError("criticality needs ∅ among the regions")
    if abs(float(np.asarray(H[()]))) > 0:
        raise PreconditionError("criticality needs H_∅ = 0")
    drift = differential(p).norm()
    if drift > consistency_tol:
        raise PreconditionError(f"beliefs are inconsistent (‖dp‖ = {drift:.3e})")
    r = (neg_log(p) - H).vector()
    M = flux_operator(dom)
    A = M.T @ M + ridge * np.eye(M.shape[1])
    x = np.linalg.solve(A, M.T @ r)
    return float(np.linalg.norm(r - M @ x))
