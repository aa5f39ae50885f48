"""Iterate-quotient estimation of the essential spectral radius.

For a map with a boundary attracting point the estimator pushes sample
points toward the boundary along the iteration, extrapolates the local
contraction rate, and raises it to the power N/2. The demo traces the
internal quantities and compares against the closed form.

Run:  python3 demos/essential_radius_demo.py
"""

import numpy as np

import lfmspec as L


def trace(name, f):
    cl = L.classify(f)
    closed = L.essential_radius_closed_form(cl)
    est = L.essential_radius_estimate(f, n_max=20)
    print(f"\n{name}  (kind {cl.kind.value})")
    print(f"  boundary point tau = {np.round(est.tau, 6)}")
    print(f"  g_n along the iteration: "
          + ", ".join(f"{g:.5f}" for g in est.g_values[-6:]))
    print(f"  fitted limit          : {est.limit:.6f}")
    if closed is not None:
        rel = abs(est.limit - closed) / closed
        print(f"  closed form           : {closed:.6f}   (relative error {rel:.2%})")


def main():
    trace("z/(2-z)", L.LinearFractionalMap([[1]], [0], [-1], 2))
    trace("(1+z)/2", L.LinearFractionalMap([[0.5]], [0.5], [0], 1))
    trace("((1+z)/2, w/2) on the two-ball",
          L.LinearFractionalMap(np.diag([0.5, 0.5]), [0.5, 0], [0, 0], 1))


if __name__ == "__main__":
    main()
