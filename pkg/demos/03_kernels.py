"""Kernel pairs (e, E) of order s.

The flat kernel e drives the Laplace step; its entire dual
E(z) = sum z^p / Gamma(1+sp) drives reconstruction.  Two identities tie
them together: the moment function m_e(x) = Gamma(1+sx), and a Cauchy-type
quadrature identity producing 1/(w - z) that underpins contour
representations of moment derivatives.
"""

import cmath
import math

from momsum import (cauchy_kernel_identity, contour_moment_derivative,
                    eval_kernel, germ, make_gevrey_kernel, make_sequence)


def main():
    for s in (0.5, 1.0, 2.0):
        k = make_gevrey_kernel(s)
        slope = k.smallz_slope()
        C, K = k.flatness_fit()
        print(f"order s = {s}: small-z log-log slope of e = {slope:.4f} "
              f"(expect {1 / s:.4f}),  flatness |e(t)| <= "
              f"{C:.3g} exp(-M(t/{K:.3g}))")

    k = make_gevrey_kernel(1.0)
    print("\nE-function spot checks at order 1 (E = exp):")
    for z in (1.0, -5.0, 2.0 + 3.0j):
        got = eval_kernel(k, "E", z)
        print(f"  E({z}) = {got:.10g}   exp = {cmath.exp(z):.10g}")

    print("\nCauchy kernel identity, value vs 1/(w - z):")
    for s in (1.0, 0.5):
        k = make_gevrey_kernel(s)
        z, w = 0.02, 0.3 + 0.1j
        val = cauchy_kernel_identity(k, z, w, -cmath.phase(w))
        print(f"  s = {s}: |dev| = {abs(val - 1 / (w - z)):.2e}")

    # contour moment derivative of 1/(1-z) vs the coefficient rule
    k = make_gevrey_kernel(1.0)
    m = make_sequence("gamma_gevrey", 400, s=1.0)
    u = germ([1.0] * 420, 0.9)
    print("\ncontour moment derivatives of 1/(1-z) at z = 0.05:")
    for n in (1, 3, 5):
        got = contour_moment_derivative(u, k, 0.05, n)
        ref = sum(0.05 ** p * m.ratio(p + n, p) for p in range(360))
        print(f"  order {n}: value = {got.real:.10g}   |dev from "
              f"coefficient rule| = {abs(got - ref):.2e}")


if __name__ == "__main__":
    main()
