"""Sweep the two continuum limits and print convergence tables.

Runs the Gaussian limit of the normalized one-bond integral over a decade
grid of inverse couplings, and the d = 2 free-energy limit over a decade
grid of lattice spacings, for N = 1 and N = 2.  Writes one CSV per sweep.
"""

import argparse
from pathlib import Path

from boselgt.records import write_csv
from boselgt.rmt import sweep_cue_gue, sweep_d2_limit


def decade_grid(start, stop):
    vals = []
    v = start
    while v >= stop * 0.999:
        vals.append(v)
        v /= 10.0
    return tuple(vals)


def show(sweep, label, unit):
    print(f"\n{label}  (target {sweep.target:.12g})")
    for v, result, _, err in sweep.rows():
        print(f"  {unit}={v:<10g} value={result:.12g}  abs_err={err:.3e}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", type=Path, default=Path("sweep-output"),
                    help="directory for the CSV tables")
    ap.add_argument("--beta-min", type=float, default=1e-4,
                    help="smallest inverse coupling of the Gaussian sweep")
    ap.add_argument("--a-min", type=float, default=1e-3,
                    help="smallest lattice spacing of the d=2 sweep")
    args = ap.parse_args(argv)
    args.out_dir.mkdir(parents=True, exist_ok=True)

    betas = decade_grid(1.0, args.beta_min)
    spacings = decade_grid(1.0, args.a_min)

    for n in (1, 2):
        sweep = sweep_cue_gue(betas, n)
        show(sweep, f"one-bond ratio -> Gaussian limit, N={n}", "beta")
        write_csv(args.out_dir / f"cue_gue_n{n}.csv",
                  ["beta", "value", "target", "abs_err"], sweep.rows())

        sweep = sweep_d2_limit(spacings, n=n)
        show(sweep, f"d=2 free energy -> continuum limit, N={n}", "a")
        write_csv(args.out_dir / f"d2_limit_n{n}.csv",
                  ["a", "value", "target", "abs_err"], sweep.rows())

    print(f"\nCSV tables in {args.out_dir}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
