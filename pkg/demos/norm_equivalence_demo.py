"""Equivalence interval between the weighted and smoothness norms.

Both norms grade a polynomial by total degree; their ratio per degree is
bounded by an interval computed from the radial moment factors. Random
polynomials land inside the interval every time.

Run:  python3 demos/norm_equivalence_demo.py
"""

import numpy as np

import lfmspec as L
from lfmspec.series import basis_multi_indices


def main():
    rng = np.random.default_rng(0)
    for s, nu in [(0.5, 0.5), (1.0, 0.0), (0.0, -1.0)]:
        lo, hi = L.norm_equivalence_interval(s, nu, 30)
        print(f"\ns={s}, nu={nu}: ratio interval [{lo:.6g}, {hi:.6g}]")
        for _ in range(4):
            n = int(rng.integers(1, 4))
            deg = int(rng.integers(2, 31))
            coeffs = {
                alpha: complex(rng.standard_normal(), rng.standard_normal())
                for alpha in basis_multi_indices(n, deg)
                if rng.random() < 0.2
            }
            if not coeffs:
                continue
            ser = L.TruncatedSeries(n, deg, coeffs)
            ratio = L.weighted_norm_sq(ser, nu) / L.sobolev_norm_sq(ser, s, nu)
            inside = lo <= ratio <= hi
            print(f"  N={n} degree {deg:2d}: ratio {ratio:.6f}  inside={inside}")


if __name__ == "__main__":
    main()
