"""Canonical interaction decomposition through discrete Fourier characters."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .complex import Domain, Field, boundary
from .hypergraph import ClosureUndefinedError, Region, show

REAL_RESIDUE = 1e-10


class DecompositionUnavailable(ValueError):
    pass


@dataclass(frozen=True)
class CharacterPartition:
    region: Region
    groups: dict  # member b ⊆ a -> list of wave vectors

    def sizes(self) -> dict:
        return {b: len(ks) for b, ks in self.groups.items()}


def character_partition(dom: Domain, a: Region) -> CharacterPartition:
    """Assign each wave vector k of E_a to the closure of its support."""
    X = dom.X
    a = X.check(a)
    groups = {b: [] for b in X.below(a, strict=False)}
    for k in product(*(range(n) for n in dom.shape(a))):
        support = [v for v, kv in zip(a, k) if kv]
        try:
            b = X.x_closure(support, within=a)
        except ClosureUndefinedError as exc:
            raise DecompositionUnavailable(
                f"support {show(tuple(support))} in {show(a)}: {exc}") from None
        groups[b].append(k)
    return CharacterPartition(a, groups)


def _masks(dom: Domain, a: Region) -> dict:
    cache = dom.__dict__.setdefault("_character_masks", {})
    if a not in cache:
        part = character_partition(dom, a)
        masks = {}
        for b, ks in part.groups.items():
            m = np.zeros(dom.shape(a), dtype=bool)
            for k in ks:
                m[k] = True
            masks[b] = m
        cache[a] = masks
    return cache[a]


def project_interaction(dom: Domain, u: np.ndarray, a: Region, b: Region) -> np.ndarray:
    """P^{ba}(u): the component of u in the interaction subspace Z_b ⊆ A_a."""
    mask = _masks(dom, a)[tuple(b)]
    spec = np.fft.fftn(np.asarray(u, dtype=float)) if np.ndim(u) else np.asarray(u, complex)
    out = np.fft.ifftn(spec * mask) if np.ndim(u) else spec * mask
    if np.max(np.abs(out.imag), initial=0.0) > REAL_RESIDUE:
        raise ArithmeticError(f"imaginary residue in projection onto {show(b)}")
    return np.array(out.real)


def interaction_projection(u: Field) -> Field:
    """P(u)_b = Σ_{a ⊇ b} P^{ba}(u_a), each term read back onto b."""
    dom = u.domain
    X = dom.X
    vals = {}
    for b in X:
        acc = np.zeros(dom.shape(b))
        for a in X.above(b, strict=False):
            z = project_interaction(dom, u[a], a, b)
            keep = tuple(i for i, v in enumerate(a) if v in b)
            idx = tuple(slice(None) if i in keep else 0 for i in range(len(a)))
            acc += z[idx]
        vals[(b,)] = acc
    return Field(dom, 0, vals)


def global_sum(u: Field) -> np.ndarray:
    """Σ_a u_a extended to Ω."""
    dom = u.domain
    omega = dom.X.omega
    acc = np.zeros(dom.shape(omega))
    for a in dom.X:
        acc += dom.extend(u[a], a, omega)
    return acc


def homologous(u: Field, v: Field, tol: float = 1e-9) -> bool:
    return float(np.max(np.abs(global_sum(u) - global_sum(v)), initial=0.0)) < tol


def eta(field: Field) -> Field:
    """Homotopy η = Σ_a c_a e_a, where e_a prepends a to chains below it."""
    dom = field.domain
    X = dom.X
    c = X.mobius_numbers.c
    vals = {}
    for chain in dom.chains(field.degree + 1):
        head, tail = chain[0], chain[1:]
        vals[chain] = c[head] * field.values[tail]
    return Field(dom, field.degree + 1, vals)


def cone_total(u: Field) -> Field:
    """C(u)_a = c_a Σ_{b ⊆ a} u_b in degree 0, zero in higher degrees."""
    dom = u.domain
    if u.degree > 0:
        return dom.zeros(u.degree)
    X = dom.X
    c = X.mobius_numbers.c
    vals = {}
    for a in X:
        acc = np.zeros(dom.shape(a))
        for b in X.below(a, strict=False):
            acc += dom.extend(u[b], b, a)
        vals[(a,)] = c[a] * acc
    return Field(dom, 0, vals)


def homotopy_defect(field: Field) -> float:
    """‖(ηδ + δη)(f) − (1 − C)(f)‖∞."""
    lhs = boundary(eta(field))
    if field.degree > 0:
        lhs = lhs + eta(boundary(field))
    rhs = field - cone_total(field)
    return (lhs - rhs).norm()
