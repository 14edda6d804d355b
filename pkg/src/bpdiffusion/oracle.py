"""Brute-force computations on the global state space E_Omega."""
from __future__ import annotations

import numpy as np

from .fields import Context, Field0, broadcastable, marginalize

DEFAULT_STATE_CAP = 2**20


class StateSpaceTooLarge(ValueError):
    pass


def _global_shape(ctx: Context, cap: int) -> tuple[int, ...]:
    shape = ctx.face_shape(ctx.omega)
    size = int(np.prod(shape, dtype=object))
    if size > cap:
        raise StateSpaceTooLarge(f"state space too large: {size} > {cap} configurations")
    return shape


def total_hamiltonian(u: Field0, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    """Pointwise sum of all local potentials, as an array over E_Omega."""
    ctx = u.context
    shape = _global_shape(ctx, cap)
    H = np.zeros(shape)
    for a in ctx.nerve:
        H += broadcastable(u[a], a, ctx.omega)
    return H


def log_partition_function(u: Field0, cap: int = DEFAULT_STATE_CAP) -> float:
    H = total_hamiltonian(u, cap)
    m = H.min()
    return float(-m + np.log(np.exp(-(H - m)).sum()))


def partition_function(u: Field0, cap: int = DEFAULT_STATE_CAP) -> float:
    return float(np.exp(log_partition_function(u, cap)))


def free_energy(u: Field0, cap: int = DEFAULT_STATE_CAP) -> float:
    return -log_partition_function(u, cap)


def gibbs_state(u: Field0, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    H = total_hamiltonian(u, cap)
    p = np.exp(-(H - H.min()))
    return p / p.sum()


def factor_product_state(u: Field0, cap: int = DEFAULT_STATE_CAP) -> np.ndarray:
    """Same Gibbs state, built as a normalized product of factors exp(-u_a)."""
    ctx = u.context
    P = np.ones(_global_shape(ctx, cap))
    for a in ctx.nerve:
        P = P * broadcastable(np.exp(-u[a]), a, ctx.omega)
    return P / P.sum()


def true_marginals(u: Field0, cap: int = DEFAULT_STATE_CAP) -> Field0:
    ctx = u.context
    p = gibbs_state(u, cap)
    return Field0(ctx, {a: marginalize(p, ctx.omega, a) for a in ctx.nerve})
