"""Density sweeps for the standard witness sets under diag(2, 4).

Run as a script; prints the ratio tables that motivate the critical
exponent alpha_12 = log(4)/log(2) = 2.
"""

import numpy as np

from densilab import (complement, density_sweep, ealpha, exact_ealpha_ratio,
                      gdelta, sym_diag)

A = sym_diag(2.0, 4.0)


def sweep_table(region, label, samples=200_000, j_max=8):
    series = density_sweep(region, A, j_range=range(j_max + 1),
                           samples=samples, seed=7)
    print(f"\n{label}  ->  {series.classification}")
    print("  j   ratio      stderr")
    for est in series.estimates:
        print(f"  {est.j}   {est.ratio:.5f}    {est.stderr:.1e}")
    return series


if __name__ == "__main__":
    # At the critical exponent the complement keeps exactly 1/3 of every
    # window: the Monte Carlo ratio hovers there while the closed form is
    # constant, so E_2 is neither full nor vanishing at the origin.
    sweep_table(complement(ealpha(2.0)), "complement of E_alpha, alpha = 2")
    print("  closed form:",
          [round(exact_ealpha_ratio(2.0, 4.0, 2.0, j), 6) for j in range(5)])

    # Above critical: the complement halves each step, E_3 fills up.
    sweep_table(ealpha(3.0), "E_alpha, alpha = 3")
    print("  complement closed form:",
          [exact_ealpha_ratio(2.0, 4.0, 3.0, j) for j in range(5)])

    # Below critical the set itself dies out.
    sweep_table(ealpha(1.5), "E_alpha, alpha = 1.5")

    # The paraboloid-like region G_delta is direction dependent: along the
    # slow axis the iterates flatten into it, along the fast axis they leave.
    e0 = np.array([[1.0], [0.0]])
    e1 = np.array([[0.0], [1.0]])
    sweep_table(gdelta(0.5, e0), "G_delta, axis e0 (slow direction)")
    sweep_table(gdelta(0.5, e1), "G_delta, axis e1 (fast direction)")
