"""Convergence fractions of GBP and Bethe diffusion over the diffusivity/temperature grid."""
import argparse
import time

from bpdiffusion.bench import BenchSpec, bench


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--seeds", type=int, default=200)
    p.add_argument("--iters", type=int, default=10)
    p.add_argument("--tol", type=float, default=0.5)
    p.add_argument("--csv", help="also write the table as CSV")
    args = p.parse_args()

    t0 = time.perf_counter()
    table = bench(BenchSpec(seeds=args.seeds, iterations=args.iters, tolerance=args.tol))
    print(table.to_markdown())
    temps = sorted({r.temperature for r in table.rows})
    print("\nconverged fraction, rows eps / columns T  (gbp | bethe)")
    print("eps   " + "  ".join(f"T={T:<10g}" for T in temps))
    for eps in sorted({r.eps for r in table.rows}):
        cells = [f"{table.cell('gbp', eps, T).converged_fraction:.2f}|{table.cell('bethe', eps, T).converged_fraction:.2f}"
                 for T in temps]
        print(f"{eps:<5g} " + "  ".join(f"{c:<12}" for c in cells))
    print(f"\n{time.perf_counter() - t0:.1f} s")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(table.to_csv())


if __name__ == "__main__":
    main()
