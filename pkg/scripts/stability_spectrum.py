"""Linearized spectrum of u -> delta(flux(u)) at consistent potentials on the 2-horn.

An explicit Euler step with diffusivity eps is stable when every eigenvalue
lambda of the Jacobian satisfies |1 + eps * lambda| < 1, so the largest
stable eps is min over eigenvalues of -2 Re(lambda) / |lambda|^2.
"""
import argparse

import numpy as np

from bpdiffusion.calculus import mobius
from bpdiffusion.diffusion import get_engine
from bpdiffusion.fields import Field0
from bpdiffusion.model import horn2_context
from bpdiffusion.oracle import true_marginals


def jacobian(eng, flux, x0, h=1e-6):
    f0 = eng.apply(eng.delta, flux(x0[None]))[0]
    J = np.empty((eng.n0, eng.n0))
    for i in range(eng.n0):
        x = x0.copy()
        x[i] += h
        J[:, i] = (eng.apply(eng.delta, flux(x[None]))[0] - f0) / h
    return J


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--temperature", type=float, default=1.0)
    args = p.parse_args()

    ctx = horn2_context()
    eng = get_engine(ctx)
    rng = np.random.default_rng(0)
    fluxes = {"gbp": eng.gbp_flux, "bethe": eng.bethe_flux, "bethe-weighted": eng.weighted_bethe_flux}
    stats = {name: [] for name in fluxes}
    for _ in range(args.samples):
        h = Field0(ctx, {a: rng.standard_normal(ctx.face_shape(a)) / args.temperature for a in ctx.nerve})
        x0 = eng.flatten0(mobius(true_marginals(h).map(lambda v: -np.log(v))))
        for name, flux in fluxes.items():
            ev = np.linalg.eigvals(jacobian(eng, flux, x0))
            ev = ev[np.abs(ev) > 1e-6]
            growing = ev.real.max() > 1e-6
            eps_max = 0.0 if growing else float(np.min(-2 * ev.real / np.abs(ev) ** 2))
            stats[name].append((ev.real.max(), eps_max))
    print(f"{'flux':<16}{'max Re(lambda)':>16}{'stable eps (min)':>18}{'(median)':>10}")
    for name, rows in stats.items():
        re, eps = np.array(rows).T
        print(f"{name:<16}{re.max():>16.3f}{eps.min():>18.3f}{np.median(eps):>10.3f}")


if __name__ == "__main__":
    main()
