"""Belief propagation as diffusion on intersection-closed hypergraphs."""

from .calculus import (
    bethe_flux,
    differential_d,
    divergence_delta,
    effective_energy,
    gbp_flux,
    gradient_D,
    mobius,
    mobius1,
    weighted_bethe_flux,
    zeta,
    zeta1,
)
from .diffusion import DiffusionConfig, DiffusionReport, residual, run, step_bethe, step_gbp
from .fields import Context, Field0, Field1, duality_pairing, extend, field_axpy, marginalize
from .model import Model, load_model, sample_initial, save_model
from .nerve import Nerve, bethe_numbers, intersection_closure, strict_pairs
from .oracle import free_energy, partition_function, total_hamiltonian, true_marginals

__all__ = [
    "Context", "DiffusionConfig", "DiffusionReport", "Field0", "Field1", "Model", "Nerve",
    "bethe_flux", "bethe_numbers", "differential_d", "divergence_delta", "duality_pairing",
    "effective_energy", "extend", "field_axpy", "free_energy", "gbp_flux", "gradient_D",
    "intersection_closure", "load_model", "marginalize", "mobius", "mobius1", "partition_function",
    "residual", "run", "sample_initial", "save_model", "step_bethe", "step_gbp", "strict_pairs",
    "total_hamiltonian", "true_marginals", "weighted_bethe_flux", "zeta", "zeta1",
]
