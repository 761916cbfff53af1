"""Reduce a two-mode covariance matrix to its standard forms.

Every physical two-mode Gaussian state is locally equivalent to a
four-parameter form (n, m, c, c'), and from there to a squeeze-balanced
form used by the separability bound.  This script builds a correlated
covariance matrix, walks it through both reductions, and verifies the
balancing equations numerically.
"""

import math

import numpy as np

from gausscensus.states import (
    is_physical,
    symplectic_eigenvalues,
    to_standard_form_one,
    to_standard_form_two,
)


def main() -> None:
    rng = np.random.default_rng(7)
    A = rng.normal(size=(4, 4))
    M = A @ A.T + 2.0 * np.eye(4)
    print("covariance matrix (x1, p1, x2, p2):")
    print(np.array_str(M, precision=4))
    print(f"physical: {is_physical(M)}")

    nu = symplectic_eigenvalues(M)
    print(f"symplectic eigenvalues: {nu[0]:.6f}, {nu[1]:.6f}")
    print(f"product check nu1*nu2 = sqrt(det M): "
          f"{nu[0] * nu[1]:.6f} vs {math.sqrt(np.linalg.det(M)):.6f}")

    f1 = to_standard_form_one(M)
    print("\nfour-parameter form (n, m, c, c'):")
    print(f"  n  = {f1.n:.6f}")
    print(f"  m  = {f1.m:.6f}")
    print(f"  c  = {f1.c:.6f}")
    print(f"  c' = {f1.cp:.6f}")

    f2 = to_standard_form_two(f1)
    print("\nsqueeze-balanced form with scale a0:")
    print(f"  a0 = {f2.a0:.6f}   r1 = {f2.r1:.6f}   r2 = {f2.r2:.6f}")
    print(f"  n1 = {f2.n1:.6f}   n2 = {f2.n2:.6f}")
    print(f"  m1 = {f2.m1:.6f}   m2 = {f2.m2:.6f}")
    print(f"  c1 = {f2.c1:.6f}   c2 = {f2.c2:.6f}")

    # The two balancing equations the Newton solver drove to zero.
    bal1 = (f2.n1 - 1.0) * (f2.m2 - 1.0) - (f2.n2 - 1.0) * (f2.m1 - 1.0)
    bal2 = (
        abs(f2.c1) - abs(f2.c2)
        - math.sqrt((f2.n1 - 1.0) * (f2.m1 - 1.0))
        + math.sqrt((f2.n2 - 1.0) * (f2.m2 - 1.0))
    )
    print("\nbalancing residuals:")
    print(f"  cross-product balance = {bal1:.2e}")
    print(f"  correlation balance   = {bal2:.2e}")


if __name__ == "__main__":
    main()
