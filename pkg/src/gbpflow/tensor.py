"""Dense observables over finite configuration spaces.

An observable on a region ``a`` is a numpy array with one axis per
variable of ``a``, axes sorted by variable id. With C ordering this is the
row-major layout in which the smallest id varies slowest.
"""

from __future__ import annotations

from typing import Mapping, NamedTuple

import numpy as np

from .hypergraph import Region, show

LOG_FLOOR = 1e-300


class TensorError(ValueError):
    pass


class Shape(NamedTuple):
    vars: Region
    cards: tuple[int, ...]

    @property
    def size(self) -> int:
        return int(np.prod(self.cards, dtype=np.int64))


def shape_of(a: Region, cards: Mapping[int, int]) -> Shape:
    return Shape(tuple(a), tuple(int(cards[v]) for v in a))


def zeros(a: Region, cards: Mapping[int, int]) -> np.ndarray:
    return np.zeros(shape_of(a, cards).cards)


def _axes(sub: Region, sup: Region) -> tuple[int, ...]:
    pos = {v: i for i, v in enumerate(sup)}
    try:
        return tuple(pos[v] for v in sub)
    except KeyError:
        raise TensorError(f"{show(sub)} is not contained in {show(sup)}") from None


def extend(u: np.ndarray, b: Region, a: Region, cards: Mapping[int, int]) -> np.ndarray:
    """Cylindrical extension j_ab: (j u)(x_a) = u(x_b)."""
    u = np.asarray(u, dtype=float)
    keep = _axes(b, a)
    if u.shape != tuple(cards[v] for v in b):
        raise TensorError(f"shape {u.shape} does not match region {show(b)}")
    expanded = u.reshape(tuple(u.shape[keep.index(i)] if i in keep else 1
                               for i in range(len(a))))
    return np.array(np.broadcast_to(expanded, tuple(cards[v] for v in a)))


def partial_sum(w: np.ndarray, a: Region, b: Region) -> np.ndarray:
    """Σ^{ba}: sum out the variables of a ∖ b."""
    keep = _axes(b, a)
    drop = tuple(i for i in range(len(a)) if i not in keep)
    return np.asarray(w, dtype=float).sum(axis=drop) if drop else np.array(w, dtype=float)


def restrict(u: np.ndarray, a: Region, b: Region) -> np.ndarray:
    """Read an observable on ``a`` that only depends on ``b`` back onto ``b``."""
    keep = _axes(b, a)
    idx = tuple(slice(None) if i in keep else 0 for i in range(len(a)))
    return np.array(np.asarray(u)[idx], dtype=float)


def gibbs(H: np.ndarray, theta: float = 1.0) -> np.ndarray:
    H = np.asarray(H, dtype=float)
    e = np.exp(-theta * (H - H.min()))
    return e / e.sum()


def safe_log(p: np.ndarray, floor: float = LOG_FLOOR) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0):
        raise TensorError("logarithm of a negative density")
    return np.log(np.maximum(p, floor))


def conditional_expectation(H, f, a: Region, b: Region) -> np.ndarray:
    """E^{ba}[f] under the Gibbs state of H on a."""
    p = gibbs(H)
    return partial_sum(np.asarray(f) * p, a, b) / partial_sum(p, a, b)


def inner(u, v, weight=None) -> float:
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape:
        raise TensorError(f"shape mismatch {u.shape} vs {v.shape}")
    if weight is None:
        return float(np.sum(u * v))
    return float(np.sum(np.asarray(weight) * u * v))
