"""Harmonic oscillator: one-sided Weyl truncations converge to 2k+1.

The regular problems on [-L, L] take their right-hand condition from the
solution that is square integrable at +inf, evaluated at the window's lower
edge.  As L grows the eigenvalues inside (0, 6.5) settle on 1, 3 and 5, the
residual check certifies each one, and the truncated eigenfunctions line up
with those of the larger truncations.

Run:  python3 demos/harmonic_oscillator.py [--L 4,6,8,11]
"""

import argparse

from gapeig.catalog import catalog
from gapeig.convergence import detect_accumulation, residual_window_check, run_study
from gapeig.io import summary_table
from gapeig.oracle import dense_fd_oracle
from gapeig.problem import SpectralWindow
from gapeig.truncation import OneSidedLP


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--L", default="4,6,8,11", help="half-widths of the truncations")
    args = parser.parse_args()

    spec = catalog("harmonic")
    window = SpectralWindow(0.0, 6.5)
    truncations = [(-float(L), float(L)) for L in args.L.split(",")]

    study = run_study(spec, OneSidedLP(), window, truncations)
    print(summary_table(study))

    print("\nerrors against the analytic spectrum 2k+1:")
    for k, lam in enumerate(sorted(study.limits)):
        print(f"  k={k}: {lam:.14f}  error {abs(lam - (2 * k + 1)):.2e}")

    print("\nedge-adjacent values (the generating solution makes lambda0 itself an eigenvalue):")
    for r in study.per_n:
        print(f"  n={r.n}: {list(r.eigen.edge_values)}")

    last = study.per_n[-1]
    print("\nresidual window check on the largest truncation (ratio < 1 certifies an eigenvalue):")
    for lam in study.limits:
        chk = residual_window_check(spec, last.rp, lam, window)
        print(f"  lambda={lam:.10f}  ratio {chk.ratio:.4f}  passed {chk.passed}")

    print("\nprojection overlaps along each trajectory:")
    for t in study.trajectories:
        print("  " + " ".join(f"{o:.8f}" for o in t.overlaps))

    acc = detect_accumulation(study)
    print(f"\naccumulation verdict: {acc.verdict} (counts {list(acc.counts)})")

    oracle = dense_fd_oracle(spec, (-11.0, 11.0), 4000, window)
    print("finite-difference oracle (Richardson):", [f"{v:.8f}" for v in oracle.extrapolated])


if __name__ == "__main__":
    main()
