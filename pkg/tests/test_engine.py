"""The batched engine must agree with the dict-based reference operators."""
import numpy as np
from hypothesis import given, settings, strategies as st

from bpdiffusion import calculus
from bpdiffusion.diffusion import get_engine

from conftest import contexts, random_field0, random_field1


@settings(max_examples=30, deadline=None)
@given(contexts(), st.integers(0, 2**32 - 1))
def test_engine_matches_reference(ctx, seed):
    rng = np.random.default_rng(seed)
    eng = get_engine(ctx)
    u, phi = random_field0(ctx, rng), random_field1(ctx, rng)
    x = eng.flatten0(u)[None, :]
    y = eng.flatten1(phi)[None, :]
    close = lambda a, b: np.allclose(a, b, rtol=1e-12, atol=1e-12)
    assert close(eng.apply(eng.zeta, x)[0], eng.flatten0(calculus.zeta(u)))
    assert close(eng.apply(eng.delta, y)[0], eng.flatten0(calculus.divergence_delta(phi)))
    assert close(eng.apply(eng.zeta1, y)[0], eng.flatten1(calculus.zeta1(phi)))
    assert close(eng.apply(eng.mobius1, y)[0], eng.flatten1(calculus.mobius1(phi)))
    assert close(eng.gradient_D(x)[0], eng.flatten1(calculus.gradient_D(u)))
    assert close(eng.gbp_flux(x)[0], eng.flatten1(calculus.gbp_flux(u)))
    assert close(eng.bethe_flux(x)[0], eng.flatten1(calculus.bethe_flux(u)))
    assert close(eng.weighted_bethe_flux(x)[0], eng.flatten1(calculus.weighted_bethe_flux(u)))
    assert close(eng.beliefs(x)[0], eng.flatten0(calculus.gibbs_beliefs(u)))


def test_roundtrip_flat(horn, rng):
    eng = get_engine(horn)
    u = random_field0(horn, rng)
    assert (eng.field0(eng.flatten0(u)) - u).sup_norm() == 0.0
    phi = random_field1(horn, rng)
    assert (eng.field1(eng.flatten1(phi)) - phi).sup_norm() == 0.0


def test_batch_rows_are_independent(horn, rng):
    eng = get_engine(horn)
    X = np.stack([eng.flatten0(random_field0(horn, rng)) for _ in range(5)])
    batched = eng.bethe_flux(X)
    for i in range(5):
        assert np.allclose(batched[i], eng.bethe_flux(X[i:i + 1])[0], rtol=1e-13, atol=1e-13)


def _jacobian_spectrum(eng, flux, x0, h=1e-6):
    f0 = eng.apply(eng.delta, flux(x0[None]))[0]
    J = np.empty((eng.n0, eng.n0))
    for i in range(eng.n0):
        x = x0.copy()
        x[i] += h
        J[:, i] = (eng.apply(eng.delta, flux(x[None]))[0] - f0) / h
    return np.linalg.eigvals(J)


def test_linear_stability_at_consistent_beliefs(horn, rng):
    from test_calculus import consistent_potential

    eng = get_engine(horn)
    u, _ = consistent_potential(horn, rng)
    x0 = eng.flatten0(u)
    for flux in (eng.gbp_flux, eng.bethe_flux):
        assert _jacobian_spectrum(eng, flux, x0).real.max() < 1e-4
    # c_a weighting of pair fluxes has a growing mode on the 2-horn
    assert _jacobian_spectrum(eng, eng.weighted_bethe_flux, x0).real.max() > 0.5
