"""Command-line entry point: ``gbpflow {infer,exact,check,compare,spectrum} MODEL``."""

from __future__ import annotations

import functools
import sys
from pathlib import Path

import click
import numpy as np

from .checks import property_suite
from .complex import DegreeError, differential
from .diffusion import (FLUX_KINDS, ConfigError, DivergenceError, RunConfig,
                        conservation_check, run, spectrum, twisted_laplacian)
from .energy import PreconditionError, bethe_free_energy
from .hypergraph import HypergraphError, show
from .interaction import DecompositionUnavailable
from .model import ModelError, bundled, load_bundled, load_model
from .oracle import GuardError, exact_marginals, globalize
from .report import dumps, region_map, render_figures
from .transforms import ClosureRequired, zeta0

EXIT_PARSE, EXIT_PRECONDITION, EXIT_DIVERGENCE, EXIT_GUARD = 2, 3, 4, 5

_FAILURES = [
    (ModelError, EXIT_PARSE),
    (GuardError, EXIT_GUARD),
    (DivergenceError, EXIT_DIVERGENCE),
    ((PreconditionError, ConfigError, HypergraphError, ClosureRequired,
      DecompositionUnavailable, DegreeError), EXIT_PRECONDITION),
]


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except Exception as exc:
            for kinds, code in _FAILURES:
                if isinstance(exc, kinds):
                    click.echo(f"error: {exc}", err=True)
                    sys.exit(code)
            raise
    return wrapper


def _load(model: str):
    if not Path(model).exists() and model in bundled():
        return load_bundled(model)
    return load_model(model)


def _setup(model: str, clamp: bool = False):
    spec = _load(model)
    dom = spec.domain()
    h = spec.potentials(dom)
    split = None
    if clamp:
        split = spec.split(dom)
        if split is None:
            raise PreconditionError("--clamp needs a boundary block in the model")
        h = spec.clamped(dom, h)
    return spec, dom, h, split


def _config(flux, step, tol, max_iters, divergence, split):
    normalize = False
    if divergence == "auto":
        if split is not None:
            divergence = "interior"
        elif flux == "normalized":
            divergence, normalize = "truncated", True
        else:
            divergence = "full"
    return RunConfig(step=step, tol=tol, max_iters=max_iters, divergence=divergence,
                     normalize_each_step=normalize, split=split)


def _write_trace(path, trace):
    with open(path, "w") as fh:
        for row in trace.rows():
            fh.write(dumps(row, indent=None) + "\n")


def _emit(payload):
    click.echo(dumps(payload))


def run_options(fn):
    opts = [
        click.option("--flux", type=click.Choice(FLUX_KINDS), default="canonical",
                     show_default=True),
        click.option("--step", type=float, default=1.0, show_default=True,
                     help="Euler time step λ in (0, 1]."),
        click.option("--tol", type=float, default=1e-10, show_default=True),
        click.option("--max-iters", type=int, default=1000, show_default=True),
        click.option("--divergence", type=click.Choice(["auto", "full", "truncated", "interior"]),
                     default="auto", show_default=True,
                     help="auto: interior when clamped, truncated with renormalisation "
                          "for the normalized flux, full otherwise."),
        click.option("--clamp", is_flag=True, help="Pin the model's boundary potentials."),
        click.option("--trace", "trace_path", type=click.Path(dir_okay=False),
                     help="Write the iteration log as JSON lines."),
        click.option("--figures", type=click.Path(file_okay=False),
                     help="Directory for PNG figures."),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _infer(model, flux, step, tol, max_iters, divergence, clamp, trace_path):
    spec, dom, h, split = _setup(model, clamp)
    cfg = _config(flux, step, tol, max_iters, divergence, split)
    eq, trace = run(h, cfg, flux)
    if trace_path:
        _write_trace(trace_path, trace)
    cons = conservation_check(trace)
    payload = {
        "model": spec.name,
        "flux": flux,
        "step": step,
        "divergence": cfg.divergence,
        "normalize_each_step": cfg.normalize_each_step,
        "converged": eq.converged,
        "diverged": eq.diverged,
        "iterations": eq.iters,
        "residual": eq.residual,
        "consistency": eq.consistency,
        "diameter": dom.X.diameter(),
        "drift": {"global_sum": cons.global_sum_drift, "log_product": cons.log_product_drift},
        "marginals": region_map(eq.q),
        "residuals": trace.residuals,
    }
    return spec, dom, h, eq, trace, payload


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Belief diffusion on hypergraphs, with brute-force reference inference.

    MODEL is a JSON model file, or the name of a bundled model.
    """


@main.command()
@click.argument("model")
@run_options
@_guarded
def infer(model, flux, step, tol, max_iters, divergence, clamp, trace_path, figures):
    """Run the diffusion to equilibrium and report beliefs."""
    spec, _, _, eq, trace, payload = _infer(model, flux, step, tol, max_iters, divergence,
                                            clamp, trace_path)
    if figures:
        payload["figures"] = render_figures(figures, spec.name, residuals=trace.residuals)
    _emit(payload)
    if eq.diverged:
        sys.exit(EXIT_DIVERGENCE)


@main.command()
@click.argument("model")
@_guarded
def exact(model):
    """Exact marginals, global free energy and entropy by enumeration."""
    spec, dom, h, _ = _setup(model)
    M = globalize(h)
    _emit({"model": spec.name, "free_energy": M.free_energy(), "entropy": M.entropy(),
           "marginals": region_map(exact_marginals(M, dom))})


@main.command()
@click.argument("model")
@click.option("--seed", type=int, default=0, show_default=True)
@_guarded
def check(model, seed):
    """Run the property suite; exit status 1 if any check fails."""
    spec, dom, h, _ = _setup(model)
    results = property_suite(dom, h, seed)
    ok = all(c.ok for c in results)
    _emit({"model": spec.name, "ok": ok, "checks": [c.as_dict() for c in results]})
    sys.exit(0 if ok else 1)


@main.command()
@click.argument("model")
@run_options
@_guarded
def compare(model, flux, step, tol, max_iters, divergence, clamp, trace_path, figures):
    """Diffusion beliefs against exact marginals."""
    spec, dom, h, eq, trace, payload = _infer(model, flux, step, tol, max_iters, divergence,
                                              clamp, trace_path)
    M = globalize(h)
    p = exact_marginals(M, dom)
    tv = {show(a): 0.5 * float(np.abs(eq.q[a] - p[a]).sum()) for a in dom.X}
    bethe = bethe_free_energy(eq.q, zeta0(h)) if eq.q.isfinite() else float("nan")
    payload.update({
        "exact_marginals": region_map(p),
        "total_variation": tv,
        "max_total_variation": max(tv.values()),
        "exact_consistency": differential(p).norm(),
        "bethe_free_energy": bethe,
        "exact_free_energy": M.free_energy(),
        "free_energy_gap": bethe - M.free_energy(),
    })
    if figures:
        payload["figures"] = render_figures(
            figures, spec.name, residuals=trace.residuals,
            marginals=(region_map(eq.q), region_map(p)))
    _emit(payload)
    if eq.diverged:
        sys.exit(EXIT_DIVERGENCE)


@main.command("spectrum")
@click.argument("model")
@run_options
@_guarded
def spectrum_cmd(model, flux, step, tol, max_iters, divergence, clamp, trace_path, figures):
    """Converge, then report the twisted-Laplacian eigenvalues."""
    spec, _, _, eq, trace, payload = _infer(model, flux, step, tol, max_iters, divergence,
                                            clamp, trace_path)
    if not eq.converged:
        _emit({k: payload[k] for k in ("model", "converged", "diverged", "iterations",
                                       "residual")})
        raise DivergenceError("no equilibrium reached; spectrum undefined")
    sp = spectrum(twisted_laplacian(eq.u))
    out = {k: payload[k] for k in ("model", "flux", "step", "converged", "iterations",
                                   "residual")}
    out["eigenvalues"] = [[float(w.real), float(w.imag)] for w in sp.eigenvalues]
    out["eigen_residual"] = sp.residual
    if figures:
        out["figures"] = render_figures(figures, spec.name, residuals=trace.residuals,
                                        eigenvalues=sp.eigenvalues)
    _emit(out)


if __name__ == "__main__":
    main()
