import pytest
from sympy import n_order, primerange

from densecert.fingroup import closure, units_mod
from densecert.localunits import residue_units
from densecert.quadfield import SplitKind, is_squarefree, make_field, splitting_type, unit_group
from densecert.stabilizer import (SearchExhausted, TorusFiber, approxtorus_search, find_topgen,
                                  is_topological_generator, modular1_certificate, torus_fiber,
                                  unitary_index, weil_ratio)


def test_topgen_examples():
    c = is_topological_generator(2, 5)
    assert c.accepted and dict(c.checks) == {2: 24, 5: 16}
    assert not is_topological_generator(7, 3).accepted
    assert is_topological_generator(5, 2).accepted
    assert find_topgen(5) == 2 and find_topgen(2) == 3 and find_topgen(7) == 3
    assert find_topgen(5, exclusions=[2]) == 3


def test_topgen_p2_rule():
    for l in primerange(3, 200):
        c = is_topological_generator(l, 2)
        assert c.p2_rule == l % 8
        # oracle: <-1, l> is all of (Z/2^m)^* for m <= 7
        whole = all(closure(units_mod(2 ** m), [2 ** m - 1, l % 2 ** m]).is_whole() for m in range(3, 8))
        assert c.accepted == whole


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_topgen_matches_order_oracle(p):
    for l in primerange(2, 100):
        if l == p:
            continue
        c = is_topological_generator(l, p)
        assert c.accepted == (n_order(l, p * p) == p * (p - 1))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_topgen_generates_every_level(p):
    for l in primerange(2, 60):
        if l == p:
            continue
        c = is_topological_generator(l, p)
        full = all(closure(units_mod(p ** m), [l % p ** m]).is_whole() for m in range(1, 7))
        assert c.accepted == full


def test_bad_topgen_input():
    with pytest.raises(ValueError):
        is_topological_generator(5, 5)
    with pytest.raises(ValueError):
        is_topological_generator(4, 5)


def test_modular1_examples():
    c = modular1_certificate(3, 3, 2, 4)
    assert c.accepted and c.full and c.levels == (1, 2, 3, 4)
    c = modular1_certificate(2, 3, 5, 5)
    assert c.accepted and c.full and c.levels == (1, 2, 3, 4, 5)
    assert c.weil.field.d == -7
    c = modular1_certificate(3, 3, 7, 4)
    assert not c.accepted


@pytest.mark.parametrize("p,n", [(2, 3), (3, 3), (5, 3), (3, 4), (7, 3), (2, 5)])
def test_modular1_levels_are_downward_closed(p, n):
    c = modular1_certificate(p, n, m_max=4)
    assert c.accepted
    levels = set(c.levels)
    for m in levels:
        assert set(range(1, m + 1)) <= levels
    for m, h, g in c.subgroup_orders:
        assert g == (p - 1) * p ** (m - 1)


def test_modular1_with_a_non_generator_can_stay_full():
    # 7 has order 3 mod 9, but -1 and 7 still generate (Z/3^m)^*; the certificate follows
    # the topological-generator rule and rejects anyway
    c = modular1_certificate(3, 3, 7, 3)
    assert not c.accepted and c.full


def test_torus_examples():
    F = make_field(-1)
    c = approxtorus_search(F, 5)
    assert c.l == 13 and c.quotient_order == 20
    assert c.pi * c.pi.conj() == F(13)
    F7 = make_field(-7)
    c = approxtorus_search(F7, 2)
    assert c.l == 11 and c.pi * c.pi.conj() == F7(11)
    with pytest.raises(SearchExhausted):
        approxtorus_search(F, 5, bound=12)


def test_beta_residue_for_gaussian_field():
    F = make_field(-1)
    c = approxtorus_search(F, 5)
    # (3+2i)/(3-2i) is 3 mod 25 at one prime above 5 and 3^-1 = 17 at the other
    R = residue_units(F, 5, 2, c.prime)
    assert R.reduce(c.beta) in {R.reduce(F(3)), R.reduce(F(17))}


@pytest.mark.parametrize("d,p", [(-1, 5), (-7, 2), (-2, 3), (-1, 13), (-3, 7), (-5, 3)])
def test_torus_properties(d, p):
    F = make_field(d)
    c = approxtorus_search(F, p, bound=2000)
    assert c.beta * c.beta.conj() == F.one
    w = unit_group(F).w
    for m in range(1, 7):
        assert unitary_index(F, p, c.l, m) <= w


def test_unitary_index_examples():
    assert unitary_index(make_field(-1), 5, 13, 2) == 1
    assert unitary_index(make_field(-7), 2, 11, 3) == 2
    with pytest.raises(ValueError):
        unitary_index(make_field(-1), 3, 13, 2)


def test_weil_ratio_none_for_inert():
    assert weil_ratio(make_field(-1), 7) is None


def test_fiber_examples():
    F = make_field(-1)
    assert torus_fiber(F, 5) is TorusFiber.MULTIPLICATIVE
    assert torus_fiber(F, 3) is TorusFiber.NORM_ONE_TORUS
    assert torus_fiber(F, 2) is TorusFiber.ADDITIVE_TIMES_MU2
    assert TorusFiber.ADDITIVE_TIMES_MU2.value == "AdditiveTimesMu2"


def test_fiber_sweep():
    expected = {SplitKind.SPLIT: TorusFiber.MULTIPLICATIVE, SplitKind.INERT: TorusFiber.NORM_ONE_TORUS,
                SplitKind.RAMIFIED: TorusFiber.ADDITIVE_TIMES_MU2}
    for d in range(-20, 21):
        if d in (0, 1) or not is_squarefree(d):
            continue
        F = make_field(d)
        for p in primerange(2, 21):
            assert torus_fiber(F, p) is expected[splitting_type(F, p).kind]
