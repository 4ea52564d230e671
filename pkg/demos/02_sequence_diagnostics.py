"""Moment-sequence diagnostics.

Strong regularity (log-convexity, moderate growth, strong
non-quasianalyticity) is what makes a moment sequence usable for
summation.  The Gevrey family (p!)^s is the model case; q-factorials grow
too fast and fail the last condition.
"""

import numpy as np

from momsum import (associated_function, check_equivalence,
                    check_strongly_regular, estimate_omega, make_sequence)


def main():
    print("Gevrey powers (p!)^s:")
    for s in (0.5, 1.0, 1.5):
        m = make_sequence("factorial_power", 50, s=s)
        rep = check_strongly_regular(m)
        om = estimate_omega(m)
        print(f"  s = {s}: lc={rep.lc_ok} mg={rep.mg_ok} snq={rep.snq_ok}   "
              f"growth index = {om.value:.4f} (+- {om.uncertainty:.2g})")

    qf = make_sequence("q_factorial", 50, q=0.5)
    rep = check_strongly_regular(qf)
    print(f"\nq-factorials (q = 1/2): lc={rep.lc_ok} mg={rep.mg_ok} "
          f"snq={rep.snq_ok}  <- too fast for summation")

    # two sequences of the same level are equivalent: sandwiched between
    # geometric multiples of each other
    a = make_sequence("factorial_power", 40, s=1.5)
    b = make_sequence("gamma_gevrey", 40, s=1.5)
    ok, C, D, Ct, Dt = check_equivalence(a, b)
    print(f"\n(p!)^1.5 ~ Gamma(1+1.5p): {ok}   "
          f"{C:.3g}*{D:.3g}^p <= ratio <= {Ct:.3g}*{Dt:.3g}^p")

    m = make_sequence("factorial_power", 40, s=1.0)
    print("\nassociated function M(t) = sup_p log(t^p / M_p) for factorials:")
    for t in np.geomspace(0.5, 50, 5):
        print(f"  M({t:7.3f}) = {associated_function(m, t).value:9.4f}"
              f"   (t - log t ~ {t - np.log(t):9.4f} for large t)")


if __name__ == "__main__":
    main()
