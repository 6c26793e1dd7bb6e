"""Dirac operator with mass 1: bound states in the gap (-1, 1).

The spectrum outside [-1, 1] is essential on both sides, so there is no
ordering of eigenvalues to lean on.  Weyl-generated conditions at both
ends still give truncations whose eigenvalues in (-0.9, 0.9) converge,
checked here against a long, tightly integrated truncation.

Run:  python3 demos/dirac_well.py
"""

import argparse

from gapeig.catalog import catalog
from gapeig.convergence import residual_window_check, run_study, solve_truncation
from gapeig.problem import SpectralWindow
from gapeig.truncation import NaiveDirichlet, TwoSidedWeyl


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--L", default="8,16,24,32")
    args = parser.parse_args()

    spec = catalog("dirac_well")
    window = SpectralWindow(-0.9, 0.9)
    truncations = [(-float(L), float(L)) for L in args.L.split(",")]
    study = run_study(spec, TwoSidedWeyl(), window, truncations)
    fine = solve_truncation(spec, TwoSidedWeyl(), window, -64.0, 64.0, tol=1e-12, eigenfunctions=False)
    print("fine run on [-64, 64]:", [f"{v:.12f}" for v in fine.eigen.values])
    last = study.per_n[-1]
    for t in study.trajectories:
        ratio = residual_window_check(spec, last.rp, t.limit, window).ratio
        print(f"  limit {t.limit:.12f}  converged {t.converged}  residual ratio {ratio:.3f}")

    naive = run_study(spec, NaiveDirichlet(), window, truncations, eigen=True, eigenfunctions=False)
    print("\nDirichlet-type truncations (first component zero) for comparison:")
    for r in naive.per_n:
        print(f"  L={r.b_n:g}: " + " ".join(f"{v:.10f}" for v in r.eigen.values))


if __name__ == "__main__":
    main()
