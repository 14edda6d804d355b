"""Command-line entry point: closure, solve, oracle, check, bench."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bench import DEFAULT_DIFFUSIVITIES, DEFAULT_TEMPERATURES, BenchSpec, bench
from .calculus import differential_d
from .diffusion import ALGORITHMS, DiffusionConfig, run
from .model import DocumentError, beliefs_document, load_beliefs, load_model, read_json, write_json
from .nerve import face_key
from .oracle import StateSpaceTooLarge, free_energy, true_marginals

EXIT_OK, EXIT_INVALID, EXIT_DIVERGED = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.replace(",", " ").split()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _load(path: str, closure: bool = True):
    return load_model(read_json(path), closure=closure)


def cmd_closure(args) -> int:
    model = _load(args.model)
    nerve = model.nerve
    doc = {"faces": [list(a) for a in nerve], "bethe": {face_key(a): nerve.bethe[a] for a in nerve}}
    _emit(json.dumps(doc, indent=1), args.output)
    return EXIT_OK


def cmd_solve(args) -> int:
    model = _load(args.model)
    cfg = DiffusionConfig(args.algorithm, args.eps, args.iters, args.tol)
    rep = run(model, cfg)
    print(
        f"{args.algorithm}: iterations={rep.iterations} residual={rep.residual_final:.3e} "
        f"decay_ratio={rep.decay_ratio:.3e} converged={rep.converged} diverged={rep.diverged}",
        file=sys.stderr,
    )
    if rep.diverged or not rep.final_beliefs.is_finite():
        return EXIT_DIVERGED
    doc = beliefs_document(
        rep.final_beliefs,
        algorithm=args.algorithm,
        diffusivity=args.eps,
        iterations=rep.iterations,
        residual=rep.residual_final,
        converged=rep.converged,
    )
    _emit(write_json(doc, None), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    model = _load(args.model)
    q = true_marginals(model.potential)
    _emit(write_json(beliefs_document(q, free_energy=free_energy(model.potential)), None), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    model = _load(args.model)
    q = load_beliefs(read_json(args.beliefs), model.context)
    d_res = differential_d(q).sup_norm()
    norm_err = max(abs(float(np.sum(q[a])) - 1.0) for a in model.nerve)
    print(f"d_residual {d_res:.3e}")
    print(f"normalization_error {norm_err:.3e}")
    return EXIT_OK


def cmd_bench(args) -> int:
    spec = BenchSpec(
        nerve_preset=args.preset,
        temperatures=tuple(args.temp),
        diffusivities=tuple(args.eps),
        seeds=args.seeds,
        iterations=args.iters,
        tolerance=args.tol,
        seed_base=args.seed_base,
        context=_load(args.model).context if args.preset == "custom-file" else None,
    )
    table = bench(spec)
    _emit(table.to_csv() if args.format == "csv" else table.to_markdown(), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bpdiffusion", description="Belief propagation as diffusion on hypergraphs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("closure", help="print the intersection closure and Bethe numbers")
    s.add_argument("model")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_closure)

    s = sub.add_parser("solve", help="run GBP or Bethe diffusion")
    s.add_argument("model")
    s.add_argument("--algorithm", choices=ALGORITHMS, default="gbp")
    s.add_argument("--eps", type=float, default=0.5)
    s.add_argument("--iters", type=int, default=1000)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("oracle", help="exact marginals by enumeration")
    s.add_argument("model")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("check", help="consistency and normalization of a beliefs file")
    s.add_argument("model")
    s.add_argument("beliefs")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("bench", help="diffusivity/temperature convergence sweep")
    s.add_argument("--preset", choices=["horn2", "custom-file"], default="horn2")
    s.add_argument("--model", help="model file for --preset custom-file")
    s.add_argument("--eps", type=_floats, default=list(DEFAULT_DIFFUSIVITIES))
    s.add_argument("--temp", type=_floats, default=list(DEFAULT_TEMPERATURES))
    s.add_argument("--seeds", type=int, default=200)
    s.add_argument("--seed-base", type=int, default=0)
    s.add_argument("--iters", type=int, default=10)
    s.add_argument("--tol", type=float, default=0.5, help="decay ratio counted as converged")
    s.add_argument("--format", choices=["csv", "md"], default="csv")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.command == "bench" and args.preset == "custom-file" and not args.model:
        print("bpdiffusion: error: --preset custom-file needs --model", file=sys.stderr)
        return EXIT_INVALID
    try:
        return args.func(args)
    except (DocumentError, StateSpaceTooLarge, ValueError, OSError, json.JSONDecodeError) as e:
        print(f"bpdiffusion: error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
