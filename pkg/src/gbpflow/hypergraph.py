"""Finite posets of regions: closure, nerve, incidence combinatorics."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse.csgraph import connected_components, shortest_path

Region = tuple[int, ...]
Chain = tuple[Region, ...]


class HypergraphError(ValueError):
    """Rejected hypergraph input or query."""


class NotAMemberError(HypergraphError):
    pass


class ClosureUndefinedError(HypergraphError):
    pass


class AdaptednessError(HypergraphError):
    pass


def region(vars: Iterable[int]) -> Region:
    """Canonical sorted tuple for a set of variable ids.

    Duplicates and negative ids are rejected.
    """
    vs = [int(v) for v in vars]
    if any(v < 0 for v in vs):
        raise HypergraphError(f"negative variable id in {vs}")
    if len(set(vs)) != len(vs):
        raise HypergraphError(f"duplicate variable id in {vs}")
    return tuple(sorted(vs))


def member_key(a: Region):
    return (-len(a), a)


def is_subset(b: Region, a: Region) -> bool:
    return set(b) <= set(a)


def intersect(a: Region, b: Region) -> Region:
    return tuple(sorted(set(a) & set(b)))


def show(a: Region) -> str:
    return "{" + ",".join(map(str, a)) + "}" if a else "∅"


class Hypergraph:
    """An inclusion-ordered family of regions.

    Members are kept in a fixed order (cardinality descending, then
    lexicographic) so that every traversal downstream is deterministic.
    ``closed`` records whether the family is stable under intersection,
    where an empty intersection is tolerated when ∅ is not a member: it
    then plays the role of an implicit bottom carrying no data.
    """

    def __init__(self, regions: Iterable[Sequence[int]]):
        rs = [region(r) for r in regions]
        if len(set(rs)) != len(rs):
            raise HypergraphError("duplicate regions")
        self.regions: tuple[Region, ...] = tuple(sorted(rs, key=member_key))
        self.index = {a: i for i, a in enumerate(self.regions)}
        self._sets = [frozenset(a) for a in self.regions]
        omega = set().union(*self._sets) if self._sets else set()
        self.omega: Region = tuple(sorted(omega))

    @classmethod
    def build(cls, regions, close=False, include_empty=False) -> "Hypergraph":
        rs = [region(r) for r in regions]
        if not rs:
            raise HypergraphError("at least one region is required")
        if len(set(rs)) != len(rs):
            raise HypergraphError("duplicate regions: " + ", ".join(
                show(r) for r in sorted(set(rs), key=member_key) if rs.count(r) > 1))
        members = set(rs)
        if close:
            frontier = set(members)
            while frontier:
                new = set()
                for a in frontier:
                    for b in members:
                        c = intersect(a, b)
                        if c and c not in members:
                            new.add(c)
                members |= new
                frontier = new
        if include_empty:
            members.add(())
        return cls(members)

    def __iter__(self):
        return iter(self.regions)

    def __len__(self):
        return len(self.regions)

    def __contains__(self, a) -> bool:
        return tuple(a) in self.index

    def __repr__(self):
        return "Hypergraph(" + ", ".join(show(a) for a in self.regions) + ")"

    def __eq__(self, other):
        return isinstance(other, Hypergraph) and self.regions == other.regions

    def __hash__(self):
        return hash(self.regions)

    def check(self, a: Region) -> Region:
        a = tuple(a)
        if a not in self.index:
            raise NotAMemberError(f"{show(a)} is not a member")
        return a

    @cached_property
    def closed(self) -> bool:
        for a, b in combinations(self.regions, 2):
            c = intersect(a, b)
            if c and c not in self.index:
                return False
        return True

    @cached_property
    def _below(self) -> dict[Region, tuple[Region, ...]]:
        out = {}
        for i, a in enumerate(self.regions):
            sa = self._sets[i]
            out[a] = tuple(b for j, b in enumerate(self.regions)
                           if j != i and self._sets[j] < sa)
        return out

    @cached_property
    def _above(self) -> dict[Region, tuple[Region, ...]]:
        out = {b: [] for b in self.regions}
        for a in self.regions:
            for b in self._below[a]:
                out[b].append(a)
        return {b: tuple(v) for b, v in out.items()}

    def below(self, a: Region, strict=True) -> tuple[Region, ...]:
        """Members contained in ``a``; the cone Λ^a when not strict."""
        bs = self._below[tuple(a)]
        return bs if strict else (tuple(a),) + bs

    def above(self, b: Region, strict=True) -> tuple[Region, ...]:
        as_ = self._above[tuple(b)]
        return as_ if strict else as_ + (tuple(b),)

    def leq(self, b: Region, a: Region) -> bool:
        """True when b ⊆ a."""
        return set(b) <= set(a)

    @cached_property
    def _nerve(self) -> list[list[Chain]]:
        levels = [[(a,) for a in self.regions]]
        while True:
            nxt = [c + (b,) for c in levels[-1] for b in self._below[c[-1]]]
            if not nxt:
                break
            nxt.sort(key=lambda c: tuple(self.index[r] for r in c))
            levels.append(nxt)
        return levels

    def nerve(self, p: int) -> list[Chain]:
        """Non-degenerate p-chains a0 ⊋ ... ⊋ ap in index-lexicographic order."""
        if p < 0:
            raise HypergraphError("degree must be non-negative")
        levels = self._nerve
        return list(levels[p]) if p < len(levels) else []

    @property
    def dim(self) -> int:
        return len(self._nerve) - 1

    def sub(self, members: Iterable[Region]) -> "Hypergraph":
        return Hypergraph(members)

    def cone(self, a: Region) -> "Hypergraph":
        a = self.check(a)
        return Hypergraph(self.below(a, strict=False))

    def cone_coboundary(self, a: Region) -> list[Chain]:
        """1-chains (a', b') entering Λ^a: b' ⊆ a and a' ⊄ a."""
        a = self.check(a)
        sa = set(a)
        return [c for c in self.nerve(1) if set(c[1]) <= sa and not set(c[0]) <= sa]

    @cached_property
    def mobius(self) -> dict[tuple[Region, Region], int]:
        """Möbius function as exact integers on comparable pairs."""
        mu = {}
        for a in self.regions:
            mu[a, a] = 1
            # walk down the cone from large to small members
            for c in sorted(self._below[a], key=member_key):
                between = [b for b in self.below(a, strict=False)
                           if set(c) < set(b)]
                mu[a, c] = -sum(mu[a, b] for b in between)
        return mu

    @cached_property
    def zeta(self) -> dict[tuple[Region, Region], int]:
        return {(a, b): 1 for a in self.regions for b in self.below(a, strict=False)}

    @cached_property
    def mobius_numbers(self) -> "MobiusNumbers":
        mu = self.mobius
        c = {b: sum(mu[a, b] for a in self.above(b, strict=False)) for b in self.regions}
        cbar = {a: sum(mu[a, b] for b in self.below(a, strict=False)) for a in self.regions}
        for b in self.regions:
            total = sum(c[a] for a in self.above(b, strict=False))
            if total != 1:
                raise ArithmeticError(f"Möbius numbers fail to sum to 1 above {show(b)}")
        return MobiusNumbers(c, cbar)

    def x_closure(self, s: Iterable[int], within: Region | None = None) -> Region:
        """Smallest member containing ``s`` (optionally inside the cone of ``within``)."""
        s = set(s)
        pool = self.regions if within is None else self.below(within, strict=False)
        holders = [a for a in pool if s <= set(a)]
        if not holders:
            raise ClosureUndefinedError(f"no member contains {show(tuple(sorted(s)))}")
        inter = set(holders[0]).intersection(*map(set, holders[1:]))
        c = tuple(sorted(inter))
        if c not in self.index or (within is not None and not set(c) <= set(within)):
            raise ClosureUndefinedError(
                f"closure of {show(tuple(sorted(s)))} is {show(c)}, not a member")
        return c

    def boundary_split(self, boundary_vars: Iterable[int]) -> "BoundarySplit":
        bv = set(boundary_vars)
        trace = {}
        for a in self.regions:
            da = tuple(sorted(set(a) & bv))
            if da not in self.index:
                raise AdaptednessError(
                    f"{show(a)} ∩ boundary = {show(da)} is not a member")
            trace[a] = da
        boundary = tuple(a for a in self.regions if set(a) <= bv)
        interior = tuple(a for a in self.regions if not set(a) <= bv)
        return BoundarySplit(tuple(sorted(bv)), interior, boundary, trace)

    def maximal(self) -> tuple[Region, ...]:
        return tuple(a for a in self.regions if not self._above[a])

    def is_retractable(self) -> tuple[bool, list[tuple[str, object]]]:
        """Graham reduction of the maximal members.

        Alternately drop a variable owned by a single hyperedge, and a
        hyperedge contained in another one. Succeeds when one hyperedge is
        left; the returned steps record the reduction sequence.
        """
        edges = [set(a) for a in self.maximal()]
        steps: list[tuple[str, object]] = []
        changed = True
        while len(edges) > 1 and changed:
            changed = False
            for v in sorted(set().union(*edges)):
                owners = [e for e in edges if v in e]
                if len(owners) == 1:
                    owners[0].discard(v)
                    steps.append(("variable", v))
                    changed = True
            for i, e in enumerate(edges):
                if any(j != i and e <= f for j, f in enumerate(edges)):
                    steps.append(("region", tuple(sorted(e))))
                    del edges[i]
                    changed = True
                    break
        return len(edges) <= 1, steps

    def comparability(self) -> np.ndarray:
        n = len(self.regions)
        adj = np.zeros((n, n))
        for a in self.regions:
            for b in self._below[a]:
                i, j = self.index[a], self.index[b]
                adj[i, j] = adj[j, i] = 1
        return adj

    def diameter(self) -> int:
        """Diameter of the comparability graph on members.

        A disconnected family yields the largest component diameter and a
        warning.
        """
        adj = self.comparability()
        dist = shortest_path(adj, unweighted=True, directed=False)
        ncomp, labels = connected_components(adj, directed=False)
        if ncomp > 1:
            warnings.warn(f"comparability graph has {ncomp} components", stacklevel=2)
        finite = dist[np.isfinite(dist)]
        return int(finite.max()) if finite.size else 0


@dataclass(frozen=True)
class MobiusNumbers:
    c: dict
    c_bar: dict


@dataclass(frozen=True)
class BoundarySplit:
    vars: Region
    interior: tuple[Region, ...]
    boundary: tuple[Region, ...]
    trace: dict

    def is_boundary(self, a: Region) -> bool:
        return set(a) <= set(self.vars)


def convolve(f: dict, g: dict, X: Hypergraph) -> dict:
    """Dirichlet convolution (f * g)_{ac} = Σ_{a ⊇ b ⊇ c} f_ab g_bc."""
    out = {}
    for a in X:
        for c in X.below(a, strict=False):
            s = 0
            for b in X.below(a, strict=False):
                if set(c) <= set(b):
                    s += f.get((a, b), 0) * g.get((b, c), 0)
            out[a, c] = s
    return out


def build(regions, close=False, include_empty=False) -> Hypergraph:
    return Hypergraph.build(regions, close=close, include_empty=include_empty)


def nerve(X: Hypergraph, p: int) -> list[Chain]:
    return X.nerve(p)


def mobius(X: Hypergraph) -> dict:
    return X.mobius


def mobius_numbers(X: Hypergraph) -> MobiusNumbers:
    return X.mobius_numbers
