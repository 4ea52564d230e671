"""The singularly perturbed moment differential equation.

eps^k a(z) D_z^p w - w = f(z, eps) has a unique formal power-series
solution.  A polynomial right side gives a polynomial solution; a
convergent but non-polynomial right side makes the eps-expansion diverge
at the level s2 * p / k, read off here by regression on the central
coefficients.
"""

import math
from fractions import Fraction

from momsum import (bivariate, fit_growth, germ, make_sequence, solve_main)
from momsum.solver import SingularlyPerturbedProblem


def problem(f, N_eps, N_z):
    m = make_sequence("factorial_power", 2 * N_z, s=1, mode="exact")
    return SingularlyPerturbedProblem(
        k=1, p=2, m1=m, m2=m, baseM=m, s1=1.0, s2=1.0,
        a=germ([Fraction(1)], 1.0, mode="exact"), f=f,
        N_eps=N_eps, N_z=N_z)


def main():
    # closed form: f = -z^2 gives exactly w = z^2 + 2 eps
    rows = [[Fraction(0)] * 9 for _ in range(7)]
    rows[0][2] = Fraction(-1)
    f = bivariate(rows, ("eps", "z"), mode="exact")
    sol = solve_main(problem(f, 6, 8))
    print("f = -z^2:  w(z, eps) = z^2 + 2 eps  "
          f"(coeffs {sol.coeff(0, 2)}, {sol.coeff(1, 0)}; "
          f"residual {sol.residual_norm})")

    # divergent: f = -(geometric series) makes w_n(0) = (2n)! exactly
    N_eps, N_z = 30, 64
    rows = [[Fraction(-1)] * (N_z + 1)] + \
           [[Fraction(0)] * (N_z + 1) for _ in range(N_eps)]
    f = bivariate(rows, ("eps", "z"), mode="exact")
    sol = solve_main(problem(f, N_eps, N_z))
    print(f"\nf = -1/(1-z):  residual {sol.residual_norm}; center values:")
    for n in (0, 1, 2, 5, 10, 30):
        print(f"  w_{n}(0) = {sol.coeff(n, 0)}  "
              f"((2n)! = {math.factorial(2 * n)})")

    logs = [math.lgamma(2 * n + 1) for n in range(N_eps + 1)]
    base = make_sequence("gamma_gevrey", N_eps, s=1.0)
    fit = fit_growth(logs, base, logs=True)
    print(f"\nfitted divergence level s_est = {fit.s_est:.3f} "
          "(the equation predicts s2 * p / k = 2)")


if __name__ == "__main__":
    main()
