"""Zeta and Möbius transforms on fields of degree 0 and 1."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .complex import DegreeError, Field
from .hypergraph import intersect


class ClosureRequired(ValueError):
    pass


def _require_closed(field: Field):
    if not field.domain.X.closed:
        raise ClosureRequired("degree-1 transforms need an intersection-closed hypergraph")


def zeta0(u: Field) -> Field:
    """U_a = Σ_{b ⊆ a} u_b."""
    dom = u.domain
    vals = {}
    for a in dom.X:
        acc = np.zeros(dom.shape(a))
        for b in dom.X.below(a, strict=False):
            acc += dom.extend(u[b], b, a)
        vals[(a,)] = acc
    return Field(dom, 0, vals)


def mobius0(U: Field) -> Field:
    """u_a = Σ_{b ⊆ a} μ_ab U_b."""
    dom = U.domain
    mu = dom.X.mobius
    vals = {}
    for a in dom.X:
        acc = np.zeros(dom.shape(a))
        for b in dom.X.below(a, strict=False):
            if mu[a, b]:
                acc += mu[a, b] * dom.extend(U[b], b, a)
        vals[(a,)] = acc
    return Field(dom, 0, vals)


def zeta1(phi: Field) -> Field:
    """ζ(φ)_ab: total flux of φ from Λ^a ∖ Λ^b into Λ^b, read on b."""
    _require_closed(phi)
    dom = phi.domain
    X = dom.X
    vals = {}
    for a, b in dom.chains(1):
        sb = set(b)
        acc = np.zeros(dom.shape(b))
        for b1 in X.below(a, strict=False):
            if set(b1) <= sb:
                continue
            for c1 in X.below(b1):
                if set(c1) <= sb:
                    acc += dom.extend(phi[b1, c1], c1, b)
        vals[a, b] = acc
    return Field(dom, 1, vals)


def _nu(Phi: Field, a0) -> dict:
    """ν_{a0}(Φ)_{b1} = Σ_{b0 ⊆ a0, b0 ⊄ b1} μ_{a0 b0} Φ_{b0, b0∩b1} on b1 ⊊ a0."""
    dom = Phi.domain
    X = dom.X
    mu = X.mobius
    out = {}
    for b1 in X.below(a0):
        acc = np.zeros(dom.shape(b1))
        for b0 in X.below(a0, strict=False):
            if set(b0) <= set(b1) or not mu[a0, b0]:
                continue
            c = intersect(b0, b1)
            if c in X:
                acc += mu[a0, b0] * dom.extend(Phi[b0, c], c, b1)
        out[b1] = acc
    return out


def mobius1(Phi: Field) -> Field:
    """Inverse of :func:`zeta1`, computed by the two-stage ν recursion."""
    _require_closed(Phi)
    dom = Phi.domain
    X = dom.X
    mu = X.mobius
    vals = {}
    for a0 in X:
        nu = _nu(Phi, a0)
        for a1 in X.below(a0):
            acc = np.zeros(dom.shape(a1))
            for b1 in X.below(a1, strict=False):
                if mu[a1, b1]:
                    acc += mu[a1, b1] * dom.extend(nu[b1], b1, a1)
            vals[a0, a1] = acc
    return Field(dom, 1, vals)


def mobius1_direct(Phi: Field) -> Field:
    """Nested-sum form of the degree-1 Möbius transform (reference path)."""
    _require_closed(Phi)
    dom = Phi.domain
    X = dom.X
    mu = X.mobius
    vals = {}
    for a0, a1 in dom.chains(1):
        acc = np.zeros(dom.shape(a1))
        for b1 in X.below(a1, strict=False):
            for b0 in X.below(a0, strict=False):
                if set(b0) <= set(b1):
                    continue
                c = intersect(b0, b1)
                if c in X:
                    acc += mu[a1, b1] * mu[a0, b0] * dom.extend(Phi[b0, c], c, a1)
        vals[a0, a1] = acc
    return Field(dom, 1, vals)


def zeta(field: Field) -> Field:
    if field.degree == 0:
        return zeta0(field)
    if field.degree == 1:
        return zeta1(field)
    raise DegreeError("transforms are provided in degrees 0 and 1")


def mobius(field: Field) -> Field:
    if field.degree == 0:
        return mobius0(field)
    if field.degree == 1:
        return mobius1(field)
    raise DegreeError("transforms are provided in degrees 0 and 1")


def conjugate(T: Callable[[Field], Field], kind: str) -> Callable[[Field], Field]:
    """T^ζ = ζ∘T∘μ or T^μ = μ∘T∘ζ, degrees read off the arguments."""
    if kind in ("zeta", "ζ"):
        return lambda f: zeta(T(mobius(f)))
    if kind in ("mobius", "mu", "μ"):
        return lambda f: mobius(T(zeta(f)))
    raise ValueError(f"unknown conjugation {kind!r}")
