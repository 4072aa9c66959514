"""JSON model documents: variables, factors, optional regions and boundary clamp."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from .complex import Domain, Field
from .hypergraph import BoundarySplit, Hypergraph, HypergraphError, Region, member_key, show

KINDS = ("energy", "potential")


class ModelError(ValueError):
    """A schema violation, located by a field path such as ``factors[2].table``."""

    def __init__(self, path: str, msg: str):
        super().__init__(f"{path}: {msg}" if path else msg)
        self.path = path


@dataclass
class Factor:
    vars: Region
    table: np.ndarray
    kind: str = "energy"

    def energy(self) -> np.ndarray:
        if self.kind == "energy":
            return self.table
        return -np.log(self.table)


@dataclass
class ModelSpec:
    cards: dict
    factors: list
    regions: list | None = None
    boundary: Region | None = None
    clamp: list = field(default_factory=list)
    close: bool = True
    include_empty: bool = False
    name: str = ""
    meta: dict = field(default_factory=dict)

    def hypergraph(self) -> Hypergraph:
        base = self.regions if self.regions is not None else [f.vars for f in self.factors]
        base = sorted(set(base), key=member_key)
        X = Hypergraph.build(base, close=self.close, include_empty=self.include_empty)
        missing = [v for v in self.cards if (v,) not in X and not any(v in a for a in X)]
        if missing:
            raise ModelError("variables", f"variables {missing} appear in no region")
        return X

    def domain(self) -> Domain:
        return Domain(self.hypergraph(), self.cards)

    def _home(self, X: Hypergraph, vars: Region, path: str) -> Region:
        if vars in X:
            return vars
        for a in reversed(X.regions):
            if set(vars) <= set(a):
                return a
        raise ModelError(path, f"no region contains {show(vars)}")

    def _accumulate(self, dom: Domain, factors, prefix: str) -> Field:
        h = dom.zeros(0)
        for i, f in enumerate(factors):
            home = self._home(dom.X, f.vars, f"{prefix}[{i}].vars")
            h.values[(home,)] += dom.extend(f.energy(), f.vars, home)
        return h

    def potentials(self, dom: Domain | None = None) -> Field:
        """h_a: the sum of the factor energies attached to each member."""
        dom = dom or self.domain()
        return self._accumulate(dom, self.factors, "factors")

    def split(self, dom: Domain) -> BoundarySplit | None:
        if self.boundary is None:
            return None
        return dom.X.boundary_split(self.boundary)

    def clamped(self, dom: Domain, h: Field) -> Field:
        """h with the boundary members replaced by the clamp tables."""
        split = self.split(dom)
        if split is None:
            raise ModelError("boundary", "the model declares no boundary")
        extra = self._accumulate(dom, self.clamp, "boundary.clamp")
        out = h.copy()
        for a in split.boundary:
            out.values[(a,)] = extra[a]
        return out


def _expect(cond, path, msg):
    if not cond:
        raise ModelError(path, msg)


def _int(value, path) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), path, "expected an integer")
    return value


def _vars(value, path, cards) -> Region:
    _expect(isinstance(value, list), path, "expected a list of variable ids")
    vs = [_int(v, f"{path}[{j}]") for j, v in enumerate(value)]
    for j, v in enumerate(vs):
        _expect(v in cards, f"{path}[{j}]", f"undeclared variable {v}")
    _expect(len(set(vs)) == len(vs), path, "repeated variable")
    return tuple(sorted(vs))


def _factor(doc, path, cards) -> Factor:
    _expect(isinstance(doc, dict), path, "expected an object")
    vars_doc = doc.get("vars")
    _expect(vars_doc is not None, f"{path}.vars", "missing")
    declared = [_int(v, f"{path}.vars[{j}]") for j, v in enumerate(vars_doc)] \
        if isinstance(vars_doc, list) else None
    vs = _vars(vars_doc, f"{path}.vars", cards)
    kind = doc.get("kind", "energy")
    _expect(kind in KINDS, f"{path}.kind", f"expected one of {KINDS}")
    table = doc.get("table")
    _expect(isinstance(table, list), f"{path}.table", "expected a flat list of numbers")
    _expect(all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in table),
            f"{path}.table", "entries must be numbers")
    shape = tuple(cards[v] for v in declared)
    n = int(np.prod(shape, dtype=np.int64))
    _expect(len(table) == n, f"{path}.table", f"length {len(table)}, expected {n}")
    arr = np.asarray(table, dtype=float)
    _expect(bool(np.all(np.isfinite(arr))), f"{path}.table", "entries must be finite")
    if kind == "potential":
        _expect(bool(np.all(arr > 0)), f"{path}.table", "potential tables must be positive")
    # tables are row-major in the declared order; reorder axes by variable id
    arr = arr.reshape(shape)
    perm = sorted(range(len(declared)), key=lambda i: declared[i])
    return Factor(vs, np.ascontiguousarray(arr.transpose(perm)), kind)


def parse_model(doc: dict, name: str = "") -> ModelSpec:
    _expect(isinstance(doc, dict), "", "a model document is a JSON object")
    variables = doc.get("variables")
    _expect(isinstance(variables, list) and variables, "variables", "expected a non-empty list")
    cards = {}
    for i, v in enumerate(variables):
        p = f"variables[{i}]"
        _expect(isinstance(v, dict), p, "expected an object")
        vid = _int(v.get("id"), f"{p}.id")
        card = _int(v.get("cardinality"), f"{p}.cardinality")
        _expect(vid >= 0, f"{p}.id", "ids are non-negative")
        _expect(card >= 1, f"{p}.cardinality", "cardinality must be at least 1")
        _expect(vid not in cards, f"{p}.id", f"variable {vid} declared twice")
        cards[vid] = card
    factors_doc = doc.get("factors", [])
    _expect(isinstance(factors_doc, list), "factors", "expected a list")
    factors = [_factor(f, f"factors[{i}]", cards) for i, f in enumerate(factors_doc)]
    regions = None
    if "regions" in doc:
        _expect(isinstance(doc["regions"], list) and doc["regions"], "regions",
                "expected a non-empty list")
        regions = [_vars(r, f"regions[{i}]", cards) for i, r in enumerate(doc["regions"])]
        for i, f in enumerate(factors):
            _expect(any(set(f.vars) <= set(r) for r in regions), f"factors[{i}].vars",
                    f"{show(f.vars)} is not covered by the region list")
    else:
        _expect(factors, "factors", "without a region list at least one factor is needed")
    opts = doc.get("options", {})
    _expect(isinstance(opts, dict), "options", "expected an object")
    for key in opts:
        _expect(key in ("close", "include_empty"), f"options.{key}", "unknown option")
        _expect(isinstance(opts[key], bool), f"options.{key}", "expected true or false")
    boundary, clamp = None, []
    if "boundary" in doc:
        b = doc["boundary"]
        _expect(isinstance(b, dict), "boundary", "expected an object")
        boundary = _vars(b.get("vars"), "boundary.vars", cards)
        clamp_doc = b.get("clamp", [])
        _expect(isinstance(clamp_doc, list), "boundary.clamp", "expected a list")
        clamp = [_factor(f, f"boundary.clamp[{i}]", cards) for i, f in enumerate(clamp_doc)]
        for i, f in enumerate(clamp):
            _expect(set(f.vars) <= set(boundary), f"boundary.clamp[{i}].vars",
                    "clamp tables live on boundary variables")
    meta = doc.get("meta", {})
    _expect(isinstance(meta, dict), "meta", "expected an object")
    spec = ModelSpec(cards, factors, regions, boundary, clamp,
                     opts.get("close", True), opts.get("include_empty", False),
                     doc.get("name", name), meta)
    try:
        spec.hypergraph()
    except HypergraphError as exc:
        raise ModelError("regions", str(exc)) from None
    return spec


def load_model(path) -> ModelSpec:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ModelError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError("", f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    return parse_model(doc, path.stem)


def bundled() -> list[str]:
    """Names of the model documents shipped with the package."""
    root = resources.files("gbpflow") / "data"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> ModelSpec:
    root = resources.files("gbpflow") / "data"
    with resources.as_file(root / f"{name}.json") as p:
        return load_model(p)
