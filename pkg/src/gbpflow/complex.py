"""Fields on the nerve and the boundary/differential operators acting on them."""

from __future__ import annotations

from functools import cached_property
from typing import Callable, Mapping

import numpy as np

from .hypergraph import BoundarySplit, Chain, Hypergraph, Region, show
from .tensor import conditional_expectation, extend, partial_sum, shape_of


class DegreeError(ValueError):
    pass


class Domain:
    """A hypergraph together with the cardinality of each variable."""

    def __init__(self, X: Hypergraph, cards: Mapping[int, int]):
        missing = [v for v in X.omega if v not in cards]
        if missing:
            raise ValueError(f"no cardinality for variables {missing}")
        self.X = X
        self.cards = {int(v): int(cards[v]) for v in X.omega}

    def __repr__(self):
        return f"Domain({self.X!r}, cards={self.cards})"

    def shape(self, a: Region) -> tuple[int, ...]:
        return shape_of(a, self.cards).cards

    def size(self, a: Region) -> int:
        return int(np.prod(self.shape(a), dtype=np.int64))

    def chains(self, p: int) -> list[Chain]:
        return self.X.nerve(p)

    @cached_property
    def _layouts(self) -> dict:
        return {}

    def layout(self, p: int) -> tuple[list[Chain], np.ndarray]:
        """Chains of degree p and the offsets of their blocks in a flat vector."""
        if p not in self._layouts:
            cs = self.chains(p)
            sizes = [self.size(c[-1]) for c in cs]
            self._layouts[p] = (cs, np.concatenate([[0], np.cumsum(sizes)]).astype(int))
        return self._layouts[p]

    def dim(self, p: int) -> int:
        return int(self.layout(p)[1][-1])

    def extend(self, u, b: Region, a: Region) -> np.ndarray:
        return extend(u, b, a, self.cards)

    def zeros(self, p: int) -> "Field":
        return Field(self, p, {c: np.zeros(self.shape(c[-1])) for c in self.chains(p)})

    def constant(self, value: float | Mapping[Region, float]) -> "Field":
        get = (lambda a: value[a]) if isinstance(value, Mapping) else (lambda a: value)
        return Field(self, 0, {(a,): np.full(self.shape(a), float(get(a))) for a in self.X})

    def random(self, p: int, rng: np.random.Generator, scale: float = 1.0) -> "Field":
        return Field(self, p, {c: scale * rng.standard_normal(self.shape(c[-1]))
                               for c in self.chains(p)})

    def from_vector(self, p: int, vec: np.ndarray) -> "Field":
        cs, off = self.layout(p)
        vec = np.asarray(vec, dtype=float)
        return Field(self, p, {c: vec[off[i]:off[i + 1]].reshape(self.shape(c[-1])).copy()
                               for i, c in enumerate(cs)})

    def field(self, p: int, values: Mapping) -> "Field":
        """Wrap a mapping keyed by chains (or by regions in degree 0)."""
        vals = {}
        for c in self.chains(p):
            key = c[0] if p == 0 and c[0] in values else c
            vals[c] = np.asarray(values[key], dtype=float).reshape(self.shape(c[-1]))
        return Field(self, p, vals)


class Field:
    """Observables indexed by the p-chains of the nerve.

    Every chain carries an array shaped after its terminal region; missing
    chains are an error rather than an implicit zero.
    """

    __array_priority__ = 100

    def __init__(self, domain: Domain, degree: int, values: dict):
        self.domain = domain
        self.degree = degree
        chains = domain.chains(degree)
        if set(values) != set(chains):
            extra = set(values) - set(chains)
            raise DegreeError(f"field keys do not match the {degree}-chains"
                              + (f" (unexpected {sorted(extra)[:3]})" if extra else ""))
        for c in chains:
            if np.shape(values[c]) != domain.shape(c[-1]):
                raise ValueError(f"value on {'>'.join(map(show, c))} has shape "
                                 f"{np.shape(values[c])}")
        self.values = {c: values[c] for c in chains}

    def __getitem__(self, key):
        if isinstance(key, tuple) and key and isinstance(key[0], int):
            key = (key,)
        elif isinstance(key, tuple) and key == ():
            key = ((),)
        return self.values[key]

    def __setitem__(self, key, val):
        if isinstance(key, tuple) and key and isinstance(key[0], int):
            key = (key,)
        elif isinstance(key, tuple) and key == ():
            key = ((),)
        self.values[key] = np.asarray(val, dtype=float).reshape(self.values[key].shape)

    def __iter__(self):
        return iter(self.values.items())

    def items(self):
        return self.values.items()

    def map(self, fn: Callable) -> "Field":
        return Field(self.domain, self.degree, {c: fn(v) for c, v in self.values.items()})

    def copy(self) -> "Field":
        return self.map(np.array)

    def _zip(self, other, op) -> "Field":
        if isinstance(other, Field):
            if other.degree != self.degree:
                raise DegreeError("degree mismatch")
            return Field(self.domain, self.degree,
                         {c: op(v, other.values[c]) for c, v in self.values.items()})
        return self.map(lambda v: op(v, other))

    def __add__(self, other):
        return self._zip(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._zip(other, np.subtract)

    def __rsub__(self, other):
        return self._zip(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._zip(other, np.multiply)

    __rmul__ = __mul__

    def __neg__(self):
        return self.map(np.negative)

    def vector(self) -> np.ndarray:
        cs, _ = self.domain.layout(self.degree)
        if not cs:
            return np.zeros(0)
        return np.concatenate([self.values[c].ravel() for c in cs])

    def norm(self) -> float:
        vals = [np.max(np.abs(v)) for v in self.values.values() if v.size]
        return float(max(vals)) if vals else 0.0

    def isfinite(self) -> bool:
        return all(np.all(np.isfinite(v)) for v in self.values.values())

    def __repr__(self):
        return f"Field(degree={self.degree}, chains={len(self.values)})"


def pairing(u: Field, v: Field) -> float:
    """Counting-measure pairing Σ_chains ⟨u, v⟩ of two fields of equal degree."""
    return float(sum(np.sum(u.values[c] * v.values[c]) for c in u.values))


def boundary(phi: Field) -> Field:
    """δ : A_{n+1} → A_n, alternating sum of faces.

    Removing a_k from a0 … a_{n+1} contributes (−1)^k φ; the face dropping
    the terminal region extends φ from a_{n+1} to a_n.
    """
    if phi.degree < 1:
        raise DegreeError("boundary needs a field of degree ≥ 1")
    dom, n = phi.domain, phi.degree - 1
    out = dom.zeros(n)
    acc = out.values
    for c, v in phi.values.items():
        for k in range(n + 1):
            acc[c[:k] + c[k + 1:]] += (-1) ** k * v
        acc[c[:-1]] += (-1) ** (n + 1) * dom.extend(v, c[-1], c[-2])
    return out


def differential(q: Field) -> Field:
    """d : A*_n → A*_{n+1}, adjoint of δ for the counting pairing.

    In degree zero, (dq)_ab = q_b − Σ^{ba} q_a.
    """
    dom, n = q.domain, q.degree
    vals = {}
    for c in dom.chains(n + 1):
        v = np.zeros(dom.shape(c[-1]))
        for k in range(n + 1):
            v = v + (-1) ** k * q.values[c[:k] + c[k + 1:]]
        v = v + (-1) ** (n + 1) * partial_sum(q.values[c[:-1]], c[-2], c[-1])
        vals[c] = v
    return Field(dom, n + 1, vals)


def nabla(H: Field, f: Field) -> Field:
    """∇(f)_ab = f_b − E^{ba}[f_a] with Gibbs weights from H_a."""
    dom = f.domain
    vals = {}
    for a, b in dom.chains(1):
        vals[a, b] = f[b] - conditional_expectation(H[a], f[a], a, b)
    return Field(dom, 1, vals)


def metric(u: Field, v: Field, p: Field) -> float:
    """Σ_chains E_{p_terminal}[u · v] for a belief field p."""
    return float(sum(np.sum(p[c[-1]] * u.values[c] * v.values[c]) for c in u.values))


def interior_divergence(phi: Field, split: BoundarySplit) -> Field:
    """δ̊φ: the boundary δφ restricted to interior members, zero on ∂X."""
    out = boundary(phi)
    for a in split.boundary:
        out.values[(a,)] = np.zeros_like(out.values[(a,)])
    return out


def empty_split(X: Hypergraph) -> BoundarySplit:
    """The split whose only boundary member is ∅; δ̊ is then the truncation δ′."""
    return X.boundary_split(())


def truncated_divergence(phi: Field) -> Field:
    """δ′: zero the ∅ component of δφ."""
    out = boundary(phi)
    if (( ),) in out.values:
        out.values[((),)] = np.zeros_like(out.values[((),)])
    return out


def flux_split(phi: Field, split: BoundarySplit) -> tuple[Field, Field]:
    inner_, outer = {}, {}
    for c, v in phi.values.items():
        if split.is_boundary(c[-1]):
            outer[c], inner_[c] = v.copy(), np.zeros_like(v)
        else:
            inner_[c], outer[c] = v.copy(), np.zeros_like(v)
    return Field(phi.domain, phi.degree, inner_), Field(phi.domain, phi.degree, outer)


def gauss_cone(phi: Field, a: Region) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of the Gauss formula on the cone Λ^a, as observables on a."""
    dom = phi.domain
    X = dom.X
    a = X.check(a)
    div = boundary(phi)
    lhs = np.zeros(dom.shape(a))
    for b in X.below(a, strict=False):
        lhs += dom.extend(div[b], b, a)
    rhs = np.zeros(dom.shape(a))
    for c in X.cone_coboundary(a):
        rhs += dom.extend(phi.values[c], c[1], a)
    return lhs, rhs
