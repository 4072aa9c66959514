"""Chain complexes of local observables and belief diffusion on hypergraphs."""

from .complex import Domain, Field, boundary, differential
from .diffusion import Equilibrium, RunConfig, Trace, bp_messages, euler_step, flux, run
from .hypergraph import Hypergraph, build
from .model import ModelSpec, load_model, parse_model
from .oracle import exact_marginals, global_pass, globalize
from .transforms import mobius0, mobius1, zeta0, zeta1

__all__ = [
    "Domain", "Field", "boundary", "differential",
    "Equilibrium", "RunConfig", "Trace", "bp_messages", "euler_step", "flux", "run",
    "Hypergraph", "build",
    "ModelSpec", "load_model", "parse_model",
    "exact_marginals", "global_pass", "globalize",
    "mobius0", "mobius1", "zeta0", "zeta1",
]

__version__ = "0.1.0"
