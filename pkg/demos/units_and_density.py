#!/usr/bin/env python3
"""Walk through g(P, Sigma) for a few real and imaginary quadratic fields, then find witness primes."""

from densecert import make_field
from densecert.density import g_invariant, is_dense, witness_primes
from densecert.localunits import unit_quotient
from densecert.quadfield import unit_group

CASES = [
    (2, 2, "all"),
    (3, 3, "all"),
    (5, 5, "all"),
    (2, 7, "none"),
    (-5, 5, "none"),
    (-1, 5, "none"),
]


def show(d, p, sigma):
    F = make_field(d)
    U = unit_group(F)
    Q = unit_quotient(F, p)
    r = g_invariant(F, p, sigma)
    print(f"Q(sqrt {d}), P = {Q.P}, Sigma = {sigma}")
    print(f"  units: w = {U.w}, fundamental = {U.fundamental}")
    print(f"  U/U^(1)^p realized at level {Q.level}: order {Q.order}, |mu_p| = {Q.mu_p}")
    print(f"  residual group {r.residual_invariants or '[trivial]'}  ->  g = {r.g}")
    if r.g == 0:
        print("  units alone are dense")
        return
    w = witness_primes(F, p, sigma, bound=10**4)
    names = ", ".join(f"{P} = ({x})" for P, x in zip(w.S, w.generators))
    print(f"  witness S: {names}")
    print(f"  density check on S: {w.report.status}")
    for P in w.S:
        rest = [Q for Q in w.S if Q != P]
        print(f"    without {P}: {is_dense(F, rest, sigma, p).status}")


if __name__ == "__main__":
    for case in CASES:
        show(*case)
        print()
