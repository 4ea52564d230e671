"""Summing the alternating factorial series.

The series sum_p (-1)^p p! z^p has zero radius of convergence, yet along
the positive axis it determines a unique analytic function: divide out the
factorials, continue 1/(1+zeta) along the ray, and transform back with the
order-1 kernel.  The result matches the classical integral representation
int_0^inf e^{-t} / (1 + z t) dt.
"""

import math

from scipy.integrate import quad

from momsum import (SingularDirectionError, borel_sum, make_gevrey_kernel,
                    make_sequence, series)


def main():
    N = 60
    u = series([(-1) ** p * math.factorial(p) for p in range(N + 1)], "z")
    M = make_sequence("gamma_gevrey", N, s=1.0)
    k = make_gevrey_kernel(1.0)

    grid = [0.05, 0.1, 0.2]
    res = borel_sum(u, M, k, d=0.0, grid=grid)

    print("sum along d = 0 vs the integral oracle:")
    for z, v, e in zip(grid, res.values, res.err_est):
        oracle, _ = quad(lambda t: math.exp(-t) / (1 + z * t), 0, math.inf)
        print(f"  z = {z:4}: sum = {v.real:.12f}   "
              f"oracle = {oracle:.12f}   |dev| = {abs(v - oracle):.2e}   "
              f"err_est = {e:.2e}")

    print("\ncontinuation growth certificate:",
          f"|B(r)| <= {res.growth.C:.3g} * exp(M(r / {res.growth.K:.3g}))")

    # the lone singularity of the continued Borel transform sits at -1,
    # so the negative axis is a singular direction
    try:
        borel_sum(u, M, k, d=math.pi, grid=[-0.1])
    except SingularDirectionError as exc:
        print(f"\nd = pi is singular as expected: pole at {exc.pole:.6g}")


if __name__ == "__main__":
    main()
