import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from densecert.fingroup import (FiniteGroup, abelian_invariants, closure, cyclic_group,
                                direct_product, find_generating_tuple, index, min_generators,
                                quotient, trivial_subgroup, units_mod)


def test_closure_examples():
    G = units_mod(16)
    assert closure(G, [5]).members == {1, 5, 9, 13}
    assert closure(G, [1]).members == {1}
    G25 = units_mod(25)
    H = closure(G25, [7])
    assert H.members == {1, 7, 24, 18}
    assert index(G25, H) == 5


def test_index_examples():
    G = units_mod(8)
    assert index(G, closure(G, [5])) == 2
    assert index(G, closure(G, G.sorted_elements())) == 1


def test_min_generators_examples():
    G = direct_product(cyclic_group(10), cyclic_group(5))
    assert min_generators(G) == 2
    assert abelian_invariants(G) == [5, 10]
    assert min_generators(cyclic_group(1)) == 0
    E = direct_product(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2))
    assert min_generators(E) == 3
    assert abelian_invariants(E) == [2, 2, 2]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 12, 97, 360, 1000])
def test_cyclic_rank(n):
    assert min_generators(cyclic_group(n)) == (1 if n > 1 else 0)


def test_cyclic_rank_sweep():
    assert all(min_generators(cyclic_group(n)) == (1 if n > 1 else 0) for n in range(1, 1001, 7))


moduli = st.integers(2, 200)


@given(moduli, st.lists(st.integers(1, 10**6), min_size=0, max_size=3))
@settings(max_examples=60, deadline=None)
def test_closure_properties(n, raw):
    G = units_mod(n)
    els = G.sorted_elements()
    gens = [els[r % len(els)] for r in raw]
    H = closure(G, gens)
    assert set(gens) <= H.members
    assert G.order % H.order == 0
    assert closure(G, sorted(H.members)) == H
    # oracle: brute-force multiplicative closure
    seen = {1 % n}
    frontier = list(seen)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g % n
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    assert H.members == seen


@given(moduli)
@settings(max_examples=60, deadline=None)
def test_units_mod_invariants_match_structure(n):
    G = units_mod(n)
    G.check_axioms()
    inv = abelian_invariants(G)
    assert math.prod(inv) == G.order
    assert all(b % a == 0 for a, b in zip(inv, inv[1:]))
    assert min_generators(G) == len(inv)
    # exponent of the group is the largest invariant
    exp = 1
    for x in G.elements:
        exp = math.lcm(exp, G.element_order(x))
    assert exp == (inv[-1] if inv else 1)


@given(st.integers(1, 30), st.integers(1, 30))
@settings(max_examples=40, deadline=None)
def test_rank_subadditive(a, b):
    G, H = cyclic_group(a), cyclic_group(b)
    P = direct_product(G, H)
    assert min_generators(P) <= min_generators(G) + min_generators(H)
    assert (min_generators(P) == 0) == (P.order == 1)


def test_quotient_and_projection():
    G = units_mod(25)
    H = closure(G, [7])
    Q, rep = quotient(G, H)
    assert Q.order == 5
    assert all(rep[G.op(x, y)] == Q.op(rep[x], rep[y]) for x, y in itertools.product(G.elements, repeat=2))
    assert rep[1] == Q.identity
    # cosets represented by their smallest member
    assert all(rep[x] <= x for x in G.elements)


def test_generating_tuple():
    G = direct_product(cyclic_group(10), cyclic_group(5))
    gens = find_generating_tuple(G, 2)
    assert closure(G, gens).is_whole()
    with pytest.raises(ValueError):
        find_generating_tuple(G, 1)


def test_nonabelian_closure():
    # S3 as permutations of (0, 1, 2)
    els = frozenset(itertools.permutations(range(3)))
    op = lambda a, b: tuple(a[b[i]] for i in range(3))
    inv = lambda a: tuple(sorted(range(3), key=lambda i: a[i]))
    G = FiniteGroup(els, op, (0, 1, 2), inv)
    G.check_axioms()
    assert not G.is_abelian()
    assert closure(G, [(1, 0, 2), (0, 2, 1)]).is_whole()
    assert closure(G, [(1, 2, 0)]).order == 3
    H = closure(G, [(1, 2, 0)], base=closure(G, [(1, 0, 2)]))
    assert H.is_whole()
    assert trivial_subgroup(G).order == 1
