"""Diffusivity / temperature sweep of GBP and Bethe diffusions."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .diffusion import DiffusionConfig, get_engine, run_batch
from .fields import Context
from .model import horn2_context, sample_initial

DEFAULT_DIFFUSIVITIES = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0, 1.1)
DEFAULT_TEMPERATURES = (0.1, 0.3, 1.0, 3.0, 10.0)
BENCH_ALGORITHMS = ("gbp", "bethe")
CSV_HEADER = ["algorithm", "eps", "temperature", "seeds", "converged_fraction", "diverged_fraction", "mean_decay_ratio"]


@dataclass
class BenchSpec:
    """Sweep definition.

    A run counts as converged when its consistency residual after
    ``iterations`` steps is at most ``tolerance`` times the initial one.
    """

    nerve_preset: str = "horn2"
    temperatures: tuple[float, ...] = DEFAULT_TEMPERATURES
    diffusivities: tuple[float, ...] = DEFAULT_DIFFUSIVITIES
    seeds: int = 200
    iterations: int = 10
    tolerance: float = 0.5
    seed_base: int = 0
    context: Context | None = field(default=None, repr=False)

    def __post_init__(self):
        if not self.temperatures or not self.diffusivities:
            raise ValueError("empty grid")
        if any(not t > 0 for t in self.temperatures):
            raise ValueError("temperatures must be positive")
        if any(not e > 0 for e in self.diffusivities):
            raise ValueError("diffusivities must be positive")
        if int(self.seeds) < 1:
            raise ValueError("seeds must be >= 1")
        if int(self.iterations) < 1:
            raise ValueError("iterations must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.nerve_preset not in ("horn2", "custom-file"):
            raise ValueError(f"unknown preset {self.nerve_preset!r}")
        if self.nerve_preset == "custom-file" and self.context is None:
            raise ValueError("custom-file preset needs a context")


@dataclass(frozen=True)
class BenchRow:
    algorithm: str
    eps: float
    temperature: float
    seeds: int
    converged_fraction: float
    diverged_fraction: float
    mean_decay_ratio: float


@dataclass
class BenchTable:
    rows: list[BenchRow]

    def cell(self, algorithm: str, eps: float, temperature: float) -> BenchRow:
        for r in self.rows:
            if r.algorithm == algorithm and r.eps == eps and r.temperature == temperature:
                return r
        raise KeyError((algorithm, eps, temperature))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.rows:
            w.writerow([r.algorithm, repr(r.eps), repr(r.temperature), r.seeds,
                        f"{r.converged_fraction:.4f}", f"{r.diverged_fraction:.4f}", f"{r.mean_decay_ratio:.6g}"])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [list(map(str, CSV_HEADER))]
        for r in self.rows:
            lines.append([r.algorithm, f"{r.eps:g}", f"{r.temperature:g}", str(r.seeds),
                          f"{r.converged_fraction:.3f}", f"{r.diverged_fraction:.3f}", f"{r.mean_decay_ratio:.3g}"])
        widths = [max(len(l[k]) for l in lines) for k in range(len(CSV_HEADER))]
        fmt = lambda l: "| " + " | ".join(c.rjust(w) for c, w in zip(l, widths)) + " |"
        sep = "|" + "|".join("-" * (w + 1) + ":" for w in widths) + "|"
        return "\n".join([fmt(lines[0]), sep] + [fmt(l) for l in lines[1:]]) + "\n"

    def grid(self, algorithm: str, temperature: float) -> dict[float, float]:
        return {r.eps: r.converged_fraction for r in self.rows if r.algorithm == algorithm and r.temperature == temperature}


def bench(spec: BenchSpec) -> BenchTable:
    ctx = horn2_context() if spec.nerve_preset == "horn2" else spec.context
    eng = get_engine(ctx)
    seeds = range(spec.seed_base, spec.seed_base + int(spec.seeds))
    rows = []
    for T in spec.temperatures:
        # both algorithms and every eps start from the same potentials
        u0 = np.stack([eng.flatten0(sample_initial(ctx, T, s)) for s in seeds])
        for eps in spec.diffusivities:
            for alg in BENCH_ALGORITHMS:
                cfg = DiffusionConfig(alg, eps, spec.iterations, residual_tolerance=1e-300)
                out = run_batch(eng, u0, cfg)
                ratio = out.decay_ratio
                finite = np.isfinite(ratio) & ~out.diverged
                conv = finite & (ratio <= spec.tolerance)
                rows.append(BenchRow(
                    algorithm=alg,
                    eps=float(eps),
                    temperature=float(T),
                    seeds=len(seeds),
                    converged_fraction=float(conv.mean()),
                    diverged_fraction=float(out.diverged.mean()),
                    mean_decay_ratio=float(ratio[conv].mean()) if conv.any() else float("nan"),
                ))
    rows.sort(key=lambda r: (r.algorithm, r.eps, r.temperature))
    return BenchTable(rows)
