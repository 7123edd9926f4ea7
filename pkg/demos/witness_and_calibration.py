"""Certifying the entanglement and recovering the coupling from data.

Two short stories, no figure:

1.  The partial-transpose witness.  Transposing one mode of a separable
    density matrix always leaves it positive; a negative eigenvalue after
    the transpose certifies entanglement.  The classical mixture stays
    positive, the shared-photon state drops to -1/2.

2.  Calibration.  Treat published extreme values of the mixture's
    correlation ratio as measurements and invert each for the coupling q.
    The two textbook targets (0.7557 for the minimum, 0.995 for the
    centre value) turn out to be mutually inconsistent: no single q fits
    both, and the report quantifies the gap each way.
"""

import numpy as np

from abfringe import (
    calibrate_q,
    classify,
    make_product,
    make_rho_ent,
    make_rho_sep,
    ppt_min_eigenvalue,
)


def main():
    vacuum = np.diag([1.0, 0.0]).astype(complex)

    print("=== partial-transpose witness ===")
    for state in (make_rho_sep(), make_rho_ent(),
                  make_product(vacuum, vacuum, label="vacuum product")):
        eig = ppt_min_eigenvalue(state)
        verdict = classify(state)
        print(f"  {state.label:16s} min eigenvalue after transpose "
              f"{eig:+.6f}  ->  {verdict.value}")

    print()
    print("=== coupling calibration against the two published targets ===")
    for which, target, other in (("min", 0.7557, 0.995),
                                 ("max", 0.995, 0.7557)):
        result = calibrate_q(target, which)
        predicted = result.bound_max if which == "min" else result.bound_min
        print(f"  fit the {which} bound to {target}:")
        print(f"    recovered q            = {result.q:.12f}")
        print(f"    predicted other bound  = {predicted:.12f}")
        print(f"    residual vs {other:<8} = {abs(predicted - other):.3e}")
    print()
    print("Neither fit predicts the other target to better than 4e-3, so no")
    print("single coupling reproduces both numbers; the minimum-bound fit")
    print("(q ~ 0.302) predicts 0.9995 for the centre value, suggesting the")
    print("published 0.995 may simply be that value truncated to three")
    print("digits. The library defaults to q = 0.3 on that reading.")


if __name__ == "__main__":
    main()
