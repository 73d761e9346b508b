#!/usr/bin/env python3
"""Maximal orders of B_{p,inf} and the closure of O[1/l]^* in (O/p^m O)^*."""

from densecert.quaternion import closure_check, make_bpinf, norm_elements

print("maximal orders")
for p in (2, 3, 5, 7, 13, 17):
    O = make_bpinf(p)
    print(f"  p={p:<3} algebra ({O.algebra.a}, {O.algebra.b})  disc {O.discriminant}  "
          f"units {len(norm_elements(O, 1))}")

O = make_bpinf(2)
print("\nelements of the Hurwitz order by norm")
print("  " + "  ".join(f"{n}:{len(norm_elements(O, n))}" for n in range(1, 12)))

print("\nclosure checks")
for p, l, m, k in [(3, 2, 2, 3), (2, 5, 3, 4), (2, 7, 3, 4)]:
    r = closure_check(p, l, m, k)
    print(f"  p={p} l={l} m={m}: |units| {r.unit_order}, |P| {r.target_order} "
          f"(index {r.target_index}), |H| {r.closure_order}, growth {list(r.growth)}, "
          f"stable at k={r.stabilized_at}, H = P: {r.equal}")
