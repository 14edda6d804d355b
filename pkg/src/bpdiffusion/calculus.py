"""Operators on degree 0 and 1 fields.

``d`` and ``delta`` are the differential on densities and its adjoint on
observables; ``zeta``/``mobius`` sum potentials over subfaces and invert that
sum; ``gradient_D`` measures pairwise inconsistency of local Gibbs densities.
"""
from __future__ import annotations

import numpy as np

from .fields import Context, Field0, Field1, broadcastable, marginal_axes, marginalize
from .nerve import Face


def _same_context(f, context: Context | None) -> Context:
    if context is not None and f.context.nerve.faces != context.nerve.faces:
        raise ValueError("field does not live on this nerve")
    return f.context


def differential_d(lam: Field0) -> Field1:
    """d(lam)_ab = lam_b - marginal of lam_a on b, for every strict pair."""
    ctx = lam.context
    return Field1(ctx, {(a, b): lam[b] - marginalize(lam[a], a, b) for a, b in ctx.nerve.pairs})


def divergence_delta(phi: Field1) -> Field0:
    """Adjoint of d: incoming fluxes minus extended outgoing fluxes, per face."""
    ctx = phi.context
    out = {a: np.zeros(ctx.face_shape(a)) for a in ctx.nerve}
    # fixed pair order keeps the reduction bit-reproducible
    for a, b in ctx.nerve.pairs:
        out[b] += phi[a, b]
        out[a] -= broadcastable(phi[a, b], b, a)
    return Field0(ctx, out)


def zeta(u: Field0) -> Field0:
    ctx = u.context
    out = {}
    for a in ctx.nerve:
        acc = np.array(u[a], copy=True)
        for b in ctx.nerve.below(a):
            acc += broadcastable(u[b], b, a)
        out[a] = acc
    return Field0(ctx, out)


def mobius(U: Field0) -> Field0:
    """Inverse of :func:`zeta`, solved from the smallest faces upward."""
    ctx = U.context
    out: dict[Face, np.ndarray] = {}
    for a in reversed(ctx.nerve.faces):
        acc = np.array(U[a], copy=True)
        for b in ctx.nerve.below(a):
            acc -= broadcastable(out[b], b, a)
        out[a] = acc
    return Field0(ctx, {a: out[a] for a in ctx.nerve})


def effective_energy(U_a: np.ndarray, alpha: Face, beta: Face) -> np.ndarray:
    """-log of the Gibbs sum of exp(-U_a) over the fibers of E_alpha -> E_beta."""
    if not set(beta) <= set(alpha):
        raise ValueError(f"not a subface: {beta} of {alpha}")
    U_a = np.asarray(U_a, dtype=float)
    axes = marginal_axes(alpha, beta)
    if not axes:
        return U_a.copy()
    m = U_a.min(axis=axes, keepdims=True)
    s = np.exp(-(U_a - m)).sum(axis=axes, keepdims=True)
    return (m - np.log(s)).reshape([n for k, n in enumerate(U_a.shape) if k not in axes])


def normalize_hamiltonians(U: Field0) -> Field0:
    """U_a + log Z_a, so that exp(-U_a) sums to one on every face."""
    return U.map(_lognorm)


def _lognorm(v: np.ndarray) -> np.ndarray:
    m = v.min()
    return v - (m - np.log(np.exp(-(v - m)).sum()))


def gradient_D(U: Field0) -> Field1:
    """D(U)_ab = U_b - effective energy of U_a on b."""
    ctx = U.context
    return Field1(ctx, {(a, b): U[b] - effective_energy(U[a], a, b) for a, b in ctx.nerve.pairs})


def gbp_flux(u: Field0) -> Field1:
    """Flux of GBP diffusion: -D applied to the normalized local hamiltonians."""
    return -gradient_D(normalize_hamiltonians(zeta(u)))


def lower_pairs(nerve, pair: tuple[Face, Face]) -> list[tuple[Face, Face]]:
    """Strict pairs (a', b') != (a, b) with a' in a and b' in b."""
    a, b = pair
    sa, sb = set(a), set(b)
    return [(a2, b2) for a2, b2 in nerve.pairs if (a2, b2) != pair and set(a2) <= sa and set(b2) <= sb]


def _pair_order(nerve):
    # componentwise-smaller pairs have a strictly smaller total size
    return sorted(nerve.pairs, key=lambda p: (len(p[0]) + len(p[1]), nerve.index(p[0]), nerve.index(p[1])))


def zeta1(phi: Field1) -> Field1:
    """Sum of extended fluxes over componentwise-smaller strict pairs (inclusive)."""
    ctx = phi.context
    out = {}
    for a, b in ctx.nerve.pairs:
        acc = np.array(phi[a, b], copy=True)
        for a2, b2 in lower_pairs(ctx.nerve, (a, b)):
            acc += broadcastable(phi[a2, b2], b2, b)
        out[a, b] = acc
    return Field1(ctx, out)


def mobius1(Psi: Field1) -> Field1:
    """Inverse of :func:`zeta1`."""
    ctx = Psi.context
    out: dict = {}
    for a, b in _pair_order(ctx.nerve):
        acc = np.array(Psi[a, b], copy=True)
        for a2, b2 in lower_pairs(ctx.nerve, (a, b)):
            acc -= broadcastable(out[a2, b2], b2, b)
        out[a, b] = acc
    return Field1(ctx, {p: out[p] for p in ctx.nerve.pairs})


def bethe_flux(u: Field0) -> Field1:
    """Bethe diffusion flux: -D(zeta u) regularized by degree-1 Mobius inversion.

    No normalization step; harmonizing the local partition functions is left
    to the flux itself.
    """
    return mobius1(-gradient_D(zeta(u)))


def weighted_bethe_flux(u: Field0) -> Field1:
    """-D(zeta u) with each pair (a, b) scaled by the Bethe number of a.

    Coincides with :func:`bethe_flux` on graphs. On hypergraphs where a face
    with negative Bethe number has subfaces (the 2-horn), the diffusion it
    drives is linearly unstable at consistent beliefs.
    """
    ctx = u.context
    Phi = gradient_D(zeta(u))
    c = ctx.nerve.bethe
    return Field1(ctx, {(a, b): -c[a] * v for (a, b), v in Phi.items()})


def gibbs_beliefs(u: Field0) -> Field0:
    """Normalized local Gibbs densities q_a = exp(-U_a) / Z_a with U = zeta(u)."""
    return normalize_hamiltonians(zeta(u)).map(lambda v: np.exp(-v))
