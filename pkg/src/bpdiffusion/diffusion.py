"""Euler integrators of du/dt = delta(flux(u)): GBP and Bethe diffusions."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import calculus
from .engine import FLUXES, Engine
from .fields import Context, Field0
from .model import Model
from .oracle import DEFAULT_STATE_CAP, total_hamiltonian

ALGORITHMS = tuple(FLUXES)

_FIELD_FLUXES = {
    "gbp": calculus.gbp_flux,
    "bethe": calculus.bethe_flux,
    "bethe-weighted": calculus.weighted_bethe_flux,
}


@dataclass(frozen=True)
class DiffusionConfig:
    algorithm: str = "gbp"
    diffusivity: float = 0.5
    iterations: int = 10
    residual_tolerance: float = 1e-8
    record_trajectory: bool = False
    divergence_cap: float = 1e8

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHMS}")
        if not self.diffusivity > 0:
            raise ValueError("diffusivity must be positive")
        if int(self.iterations) < 1:
            raise ValueError("iterations must be >= 1")
        if not self.residual_tolerance > 0:
            raise ValueError("residual tolerance must be positive")


@dataclass
class DiffusionReport:
    final_potential: Field0
    final_beliefs: Field0
    residual_initial: float
    residual_final: float
    decay_ratio: float
    converged: bool
    diverged: bool
    iterations: int
    residual_trace: list[float]
    trajectory: list[Field0] = field(default_factory=list, repr=False)
    energy_drift: float | None = None


_ENGINES: dict = {}


def get_engine(ctx: Context) -> Engine:
    key = (ctx.nerve.faces, tuple(sorted((v, int(n)) for v, n in ctx.cardinalities.items())))
    eng = _ENGINES.get(key)
    if eng is None:
        eng = _ENGINES[key] = Engine(ctx)
    return eng


def step(u: Field0, eps: float, algorithm: str) -> Field0:
    flux = _FIELD_FLUXES[algorithm](u)
    return u + eps * calculus.divergence_delta(flux)


def step_gbp(u: Field0, eps: float) -> Field0:
    return step(u, eps, "gbp")


def step_bethe(u: Field0, eps: float) -> Field0:
    return step(u, eps, "bethe")


def residual(u: Field0, algorithm: str) -> float:
    """Sup-norm of the algorithm's own flux at u."""
    return _FIELD_FLUXES[algorithm](u).sup_norm()


def consistency_residual(u: Field0) -> float:
    """Sup-norm of the effective energy gradient of the normalized beliefs of u."""
    return calculus.gbp_flux(u).sup_norm()


@dataclass
class BatchResult:
    potentials: np.ndarray  # (S, n0) final potentials
    residuals: np.ndarray  # (S, n_it + 1), nan after a row stops
    converged: np.ndarray
    diverged: np.ndarray
    iterations: np.ndarray

    @property
    def residual_initial(self) -> np.ndarray:
        return self.residuals[:, 0]

    @property
    def residual_final(self) -> np.ndarray:
        return self.residuals[np.arange(len(self.iterations)), self.iterations]

    @property
    def decay_ratio(self) -> np.ndarray:
        r0, rf = self.residual_initial, self.residual_final
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r0 > 0, rf / np.where(r0 > 0, r0, 1.0), 1.0)


def run_batch(engine: Engine, u0: np.ndarray, config: DiffusionConfig, trajectory: list | None = None) -> BatchResult:
    """Integrate every row of u0 independently; rows freeze on convergence or divergence."""
    u = np.array(u0, dtype=float, copy=True)
    S = u.shape[0]
    n_it = int(config.iterations)
    res = np.full((S, n_it + 1), np.nan)
    active = np.ones(S, dtype=bool)
    converged = np.zeros(S, dtype=bool)
    diverged = np.zeros(S, dtype=bool)
    iters = np.zeros(S, dtype=int)
    eps = float(config.diffusivity)
    with np.errstate(all="ignore"):
        for i in range(n_it + 1):
            if not active.any():
                break
            ua = u[active]
            Phi = engine.gbp_flux(ua)
            r = np.abs(Phi).max(axis=1) if engine.n1 else np.zeros(len(ua))
            idx = np.flatnonzero(active)
            res[idx, i] = r
            iters[idx] = i
            bad = ~np.isfinite(r) | (r > config.divergence_cap) | ~np.all(np.isfinite(ua), axis=1)
            good = r <= config.residual_tolerance
            diverged[idx[bad]] = True
            converged[idx[good & ~bad]] = True
            if i == n_it:
                break
            move = ~(bad | good)
            if not move.any():
                active[idx] = False
                break
            flux = Phi if config.algorithm == "gbp" else engine.flux(config.algorithm, ua)
            step_ = engine.apply(engine.delta, flux)
            u[idx[move]] = ua[move] + eps * step_[move]
            active[idx[~move]] = False
            if trajectory is not None:
                trajectory.append(u.copy())
    return BatchResult(u, res, converged, diverged, iters)


def run(model: Model, config: DiffusionConfig, check_conservation: bool = False) -> DiffusionReport:
    """Run one diffusion from the model's potential.

    With ``check_conservation``, the total hamiltonian is evaluated on E_Omega
    at every iteration and its largest pointwise drift is reported.
    """
    ctx = model.context
    eng = get_engine(ctx)
    traj: list | None = [] if (config.record_trajectory or check_conservation) else None
    u0 = eng.flatten0(model.potential)[None, :]
    out = run_batch(eng, u0, config, traj)
    u_final = eng.field0(out.potentials[0])
    n = int(out.iterations[0])
    trace = [float(x) for x in out.residuals[0, : n + 1]]
    fields = [eng.field0(x[0]) for x in traj] if traj is not None else []
    drift = None
    if check_conservation:
        H0 = total_hamiltonian(model.potential, DEFAULT_STATE_CAP)
        drift = max([0.0] + [float(np.max(np.abs(total_hamiltonian(f) - H0))) for f in fields])
    with np.errstate(all="ignore"):
        q = eng.field0(eng.beliefs(out.potentials[:1])[0])
    return DiffusionReport(
        final_potential=u_final,
        final_beliefs=q,
        residual_initial=trace[0],
        residual_final=trace[-1],
        decay_ratio=float(out.decay_ratio[0]),
        converged=bool(out.converged[0]),
        diverged=bool(out.diverged[0]),
        iterations=n,
        residual_trace=trace,
        trajectory=fields if config.record_trajectory else [],
        energy_drift=drift,
    )
