"""Coulomb l=1: bound states -1/(4n^2) and their accumulation at 0.

Both endpoints are limit point.  In a window bounded away from 0 a fixed
number of eigenvalues converge to the hydrogen-like levels.  In a window
reaching up to the edge of the essential spectrum the truncation counts
keep growing with b, which is the signature of an accumulation point.

Run:  python3 demos/coulomb_accumulation.py
"""

import argparse

from gapeig.catalog import catalog
from gapeig.convergence import detect_accumulation, run_study
from gapeig.truncation import OneSidedLP, TwoSidedWeyl


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--b", default="50,100,200,400", help="right truncation points")
    args = parser.parse_args()

    spec = catalog("coulomb_l1")
    bs = [float(b) for b in args.b.split(",")]
    study = run_study(spec, OneSidedLP(), (-0.07, -0.012), [(4.0 / b, b) for b in bs])
    print("window (-0.07, -0.012)")
    for t in study.trajectories:
        n = round((-0.25 / t.limit) ** 0.5)
        print(f"  limit {t.limit:.12f}  analytic -1/(4*{n}^2) = {-0.25 / n**2:.12f}  "
              f"increments {[f'{abs(b - a):.1e}' for a, b in zip(t.values, t.values[1:])]}  converged {t.converged}")

    far = [200.0, 400.0, 800.0, 1600.0]
    acc_study = run_study(spec, TwoSidedWeyl(), (-0.01, -1e-6), [(4.0 / b, b) for b in far], eigen=False)
    acc = detect_accumulation(acc_study)
    print("\nwindow (-0.01, -1e-6) touching the accumulation point")
    for b, c in zip(far, acc.counts):
        print(f"  b={b:>6g}: {c} eigenvalues")
    print(f"verdict: {acc.verdict}")


if __name__ == "__main__":
    main()
