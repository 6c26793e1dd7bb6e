"""Spectral pollution in a gap, and how Weyl-generated conditions avoid it.

The potential 2cos(2x) plus a Gaussian well has bands of essential
spectrum with an impurity eigenvalue in the first gap.  The gap is located
from finite-difference levels on two periodic-length boxes.  Dirichlet
truncations then wander into the gap: their box-edge states produce
eigenvalues that move with L and break the count bound.  Truncations whose
conditions come from Weyl solutions keep exactly one eigenvalue in the
window.

Run:  python3 demos/mathieu_gap_pollution.py
"""

import argparse
import math

from gapeig.catalog import catalog
from gapeig.convergence import count_monotonicity_check, run_study
from gapeig.oracle import dense_fd_oracle, fd_eigenvalues, locate_gaps
from gapeig.truncation import NaiveDirichlet, OneSidedLP, TwoSidedWeyl


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--L", default="12,18,24,30,36")
    parser.add_argument("--N", type=int, default=8000, help="oracle grid size")
    args = parser.parse_args()

    spec = catalog("mathieu_impurity")
    boxes = (12 * math.pi, 18 * math.pi)
    levels = [fd_eigenvalues(spec, (-L, L), args.N, (-1.0, 4.0)) for L in boxes]
    gaps = locate_gaps(*levels)
    for g in gaps:
        print(f"gap ({g.lower_edge:.5f}, {g.upper_edge:.5f}) containing levels {[round(v, 8) for v in g.levels]}")
    window = gaps[0].window(0.1)
    ref = dense_fd_oracle(spec, (-boxes[1], boxes[1]), args.N, window).extrapolated
    print(f"window {window.lambda0:.5f}, {window.lambda1:.5f}; oracle eigenvalue(s) {ref.tolist()}\n")

    truncations = [(-float(L), float(L)) for L in args.L.split(",")]
    schemes = {
        "two-sided Weyl": TwoSidedWeyl(),
        "one-sided, lambda0": OneSidedLP(None, "lambda0"),
        "one-sided, lambda1": OneSidedLP(None, "lambda1"),
        "Dirichlet": NaiveDirichlet(),
    }
    for label, scheme in schemes.items():
        study = run_study(spec, scheme, window, truncations, eigen=True, eigenfunctions=False)
        chk = count_monotonicity_check(study, len(ref))
        print(f"{label}: counts {study.counts}, count bound {'holds' if chk.passed else 'violated at n=' + str(chk.violations)}")
        for r in study.per_n:
            print(f"    L={r.b_n:>4g}: " + " ".join(f"{v:.9f}" for v in r.eigen.values))
        conv = [t.limit for t in study.trajectories if t.converged]
        print(f"    converged limits: {[f'{v:.10f}' for v in conv]}\n")


if __name__ == "__main__":
    main()
