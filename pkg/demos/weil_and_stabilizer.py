#!/usr/bin/env python3
"""Quadratic Weil numbers, the x^2 - p x + p^n family, and finite-level density of l and mu."""

from densecert.hondatate import isogclass, weil_class
from densecert.stabilizer import (approxtorus_search, find_topgen, is_topological_generator,
                                  modular1_certificate, torus_fiber, unitary_index)
from densecert.quadfield import make_field, unit_group

print("Weil classes")
for t, p, real in [(0, 2, True), (0, 5, False), (4, 5, False)]:
    W = weil_class(t, p, real=real)
    invs = [str(i) for i in W.invariants()]
    print(f"  t={t} p={p}{' (pi^2 = p)' if real else ''}: K = Q(sqrt {W.field.d}), "
          f"invariants {invs}, dim {W.dim}, geometrically simple {W.geom_simple}")

print("\nx^2 - p x + p^n")
for p in (2, 3, 5, 7):
    row = []
    for n in (3, 4, 5):
        W = isogclass(p, n)
        row.append(f"n={n}: Q(sqrt {W.field.d})")
    print(f"  p={p}  " + "  ".join(row))

print("\ntopological generators of Z_p^*")
for p in (2, 3, 5, 7, 11, 13):
    l = find_topgen(p)
    c = is_topological_generator(l, p)
    print(f"  p={p}: l={l}  checks={list(c.checks) or ('l mod 8 = %d' % c.p2_rule)}")

print("\nmu and l generate (Z/p^m)^*")
for p, l in [(3, 2), (2, 5), (3, 7)]:
    c = modular1_certificate(p, 3, l, 5)
    orders = ", ".join(f"{h}/{g}" for _, h, g in c.subgroup_orders)
    print(f"  p={p} l={l}: topgen accepted {c.accepted}, closure orders by level {orders}")

print("\nnorm-one torus")
for d, p in [(-1, 5), (-7, 2)]:
    F = make_field(d)
    c = approxtorus_search(F, p)
    idx = [unitary_index(F, p, c.l, m) for m in range(1, 5)]
    print(f"  Q(sqrt {d}), p={p}: l={c.l}, pi={c.pi}, index of <beta> by level {idx}, "
          f"|mu| = {unit_group(F).w}")
for p in (2, 3, 5):
    print(f"  fiber of Q(i) at {p}: {torus_fiber(make_field(-1), p).value}")
