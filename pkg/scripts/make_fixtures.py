"""Regenerate the bundled model documents under src/gbpflow/data.

The frustrated triangle is picked by a coupling sweep: the first
antiferromagnetic instance on which the canonical flow at step 1 misses
a residual of 1e-8 within 500 iterations while step 0.25 reaches it.
"""

import json
from pathlib import Path

import numpy as np

from gbpflow.diffusion import RunConfig, run
from gbpflow.model import parse_model

DATA = Path(__file__).resolve().parents[1] / "src" / "gbpflow" / "data"


def table(rng, shape, scale=1.0):
    return [round(float(x), 6) for x in rng.uniform(-scale, scale, shape).ravel()]


def variables(n, card=2):
    return [{"id": i, "cardinality": card} for i in range(n)]


def chain(rng):
    return {
        "name": "chain",
        "variables": variables(3),
        "factors": [{"vars": [0, 1], "table": table(rng, 4)},
                    {"vars": [1, 2], "table": table(rng, 4)},
                    {"vars": [0], "table": table(rng, 2)}],
    }


def cone(rng):
    return {
        "name": "cone",
        "variables": variables(2),
        "regions": [[0, 1], [0], [1]],
        "factors": [{"vars": [0, 1], "table": table(rng, 4)},
                    {"vars": [0], "table": table(rng, 2)},
                    {"vars": [1], "table": table(rng, 2)}],
        "options": {"include_empty": True},
    }


def triangle(rng):
    return {
        "name": "triangle",
        "variables": variables(3),
        "factors": [{"vars": list(e), "table": table(rng, 4)} for e in ((0, 1), (1, 2), (0, 2))],
        "options": {"include_empty": True},
    }


def tree7(rng):
    edges = [(0, 1, 2), (2, 3), (3, 4, 5), (3, 6)]
    return {
        "name": "tree7",
        "variables": variables(7),
        "factors": [{"vars": list(e), "table": table(rng, 2 ** len(e))} for e in edges],
    }


def clamped_chain(rng):
    return {
        "name": "clamped_chain",
        "variables": variables(3),
        "regions": [[0, 1], [1, 2], [2]],
        "factors": [{"vars": [0, 1], "table": table(rng, 4)},
                    {"vars": [1, 2], "table": table(rng, 4)}],
        "boundary": {"vars": [2], "clamp": [{"vars": [2], "table": table(rng, 2, 2.0)}]},
        "options": {"include_empty": True},
    }


def ising_triangle(J, field):
    s = np.array([1.0, -1.0])
    edge = [round(float(x), 6) for x in (J * np.outer(s, s)).ravel()]
    return {
        "name": "frustrated_triangle",
        "variables": variables(3),
        "factors": [{"vars": list(e), "table": edge} for e in ((0, 1), (1, 2), (0, 2))]
        + [{"vars": [i], "table": [round(float(x), 6) for x in field * (i + 1) * s]}
           for i in range(3)],
        "options": {"include_empty": True},
    }


def sweep():
    for J in np.arange(0.5, 6.01, 0.5):
        for field in (0.05, 0.1, 0.2, 0.3):
            doc = ising_triangle(J, field)
            spec = parse_model(doc)
            dom = spec.domain()
            h = spec.potentials(dom)
            fast, _ = run(h, RunConfig(step=1.0, tol=1e-8, max_iters=500, record_trace=False),
                          "canonical")
            if fast.converged:
                continue
            slow, _ = run(h, RunConfig(step=0.25, tol=1e-8, max_iters=500, record_trace=False),
                          "canonical")
            if slow.converged:
                doc["meta"] = {"flux": "canonical", "coupling": float(J), "field": field,
                               "fast_step": 1.0, "slow_step": 0.25, "tol": 1e-8,
                               "max_iters": 500, "slow_iters": slow.iters}
                return doc
    raise RuntimeError("no step-sensitive instance in the sweep range")


def main():
    DATA.mkdir(exist_ok=True)
    rng = np.random.default_rng(20240611)
    docs = [chain(rng), cone(rng), triangle(rng), tree7(rng), clamped_chain(rng), sweep()]
    for doc in docs:
        (DATA / f"{doc['name']}.json").write_text(json.dumps(doc, indent=1) + "\n")
        print(doc["name"])


if __name__ == "__main__":
    main()
