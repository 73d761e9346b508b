import itertools

import pytest
from hypothesis import given, settings, strategies as st

from densecert.density import (DENSE, INCONCLUSIVE, NOT_DENSE, SigmaSet, e_plus, g_bound,
                               g_invariant, is_dense, s_unit_basis, witness_primes)
from densecert.fingroup import closure, min_generators, quotient
from densecert.localunits import quotient_at_level, unit_quotient
from densecert.quadfield import Ideal, make_field, splitting_type


def test_sigma_set():
    F = make_field(2)
    assert SigmaSet.of(F, "all").places == {0, 1}
    assert SigmaSet.of(F, "none").places == frozenset()
    assert SigmaSet.of(make_field(-1), "all").places == frozenset()
    with pytest.raises(ValueError):
        SigmaSet.of(make_field(-1), [0])
    with pytest.raises(ValueError):
        SigmaSet.of(F, [2])


def test_e_plus_examples():
    F = make_field(2)
    B = e_plus(F, "all")
    assert B.torsion == [] and B.free == [F.from_sqrt(3, 2)]
    F = make_field(-5)
    assert e_plus(F).generators == [F(-1)]
    F = make_field(3)
    assert e_plus(F, "all").free == [F.from_sqrt(2, 1)]
    assert e_plus(F).torsion == [F(-1)]


@pytest.mark.parametrize("d", [2, 3, 5, 6, 7, 10, 13, 15, 21, 34])
def test_e_plus_is_sign_kernel(d):
    # oracle: among +-eps^k, |k| <= 4, the sigma-positive ones are exactly the powers of the listed generators
    F = make_field(d)
    eps = e_plus(F).free[0]
    units = [s * eps ** k for s in (1, -1) for k in range(-4, 5)]
    for sigma in ([], [0], [1], [0, 1]):
        B = e_plus(F, sigma)
        gens = B.generators
        generated = set()
        for k in range(-4, 5):
            for t in range(len(B.torsion) + 1):
                x = gens[-1] ** k * (F(-1) if t else F.one)
                generated.add(x)
        for u in units:
            if u.is_positive_at(sigma):
                assert u in generated, (d, sigma, u)
            else:
                assert u not in generated


def test_g_examples():
    assert g_invariant(make_field(5), 5, "all").g == 1
    assert g_invariant(make_field(2), 7, "none").g == 0
    assert g_invariant(make_field(3), 3, "all").g == 1
    r = g_invariant(make_field(-5), 5)
    assert r.g == 2 and r.residual_invariants == [5, 10]


def test_g_sqrt2_is_three():
    # eps = 1 + sqrt 2 is a principal unit at (sqrt 2), so eps^2 dies in U/U^(1)^2 and
    # the residual group is all of F_2^3
    r = g_invariant(make_field(2), 2, "all")
    assert r.residual_order == 8 and r.residual_invariants == [2, 2, 2]
    assert r.g == 3
    # with Sigma empty, -1 and eps are independent in F_2^3
    r = g_invariant(make_field(2), 2, "none")
    assert (r.residual_order, r.g) == (2, 1)


def test_gaussian_quotient_order():
    r = g_invariant(make_field(-1), 5)
    # oracle: (Z/25)^* modulo <7> (the image of i), by direct enumeration
    G = [x for x in range(25) if x % 5]
    H = {pow(7, k, 25) for k in range(4)}
    assert r.residual_order == len(G) // len(H) == 5
    assert r.g == 1


@pytest.mark.parametrize("d,p,sigma", [(2, 2, "all"), (3, 3, "all"), (-5, 5, "none"), (-1, 5, "none"),
                                       (5, 5, "all"), (-3, 3, "none"), (-7, 2, "none")])
def test_g_is_level_independent(d, p, sigma):
    F = make_field(d)
    r = g_invariant(F, p, sigma)
    Q = unit_quotient(F, p)
    R, H, Qg, proj = quotient_at_level(F, p, Q.level + 1)
    images = [proj[R.reduce(x)] for x in e_plus(F, sigma).generators]
    Rg, _ = quotient(Qg, closure(Qg, images))
    assert min_generators(Rg) == r.g


def test_is_dense_examples():
    F = make_field(2)
    assert is_dense(F, [], "none", 7).status == DENSE
    assert is_dense(F, [], "all", 2).status == NOT_DENSE
    assert is_dense(make_field(-7), [5], "none", 2).status == DENSE


def test_is_dense_rejects_target_prime():
    F = make_field(-1)
    with pytest.raises(ValueError):
        is_dense(F, [splitting_type(F, 5).ideal], "none", 5)


def test_nonprincipal_primes():
    F = make_field(-5)
    B = s_unit_basis(F, [3, 7])
    assert B.powers == [2, 2] and B.complete
    assert [v for v, _ in B.mixed] == [(1, 1)]
    for v, g in B.mixed:
        J = splitting_type(F, 3).ideal ** v[0] * splitting_type(F, 7).ideal ** v[1]
        assert Ideal.principal(F, g) == J
    assert is_dense(F, [3, 7], "none", 11).status == DENSE
    # a single prime is always complete: its lattice is k*Z
    r = is_dense(F, [7], "none", 3, box_cap=0)
    assert r.status == NOT_DENSE and r.complete
    # without the mixed products the realized group is smaller and a negative answer is withheld
    r = is_dense(F, [3, 7], "none", 11, box_cap=0)
    assert r.status == INCONCLUSIVE and not r.complete
    # unless the rank bound |S| < g decides it
    r = is_dense(F, [2, 3], "none", 11, box_cap=0)
    assert r.g == 2
    r = is_dense(F, [3, 7, 23], "none", 11, box_cap=0)
    assert r.status in (DENSE, INCONCLUSIVE)


WITNESS_CONFIGS = [(2, 2, "all"), (3, 3, "all"), (5, 5, "all"), (7, 7, "all"), (13, 13, "all"),
                   (-5, 5, "none"), (-1, 5, "none"), (2, 7, "none"), (-3, 7, "none"), (6, 5, "all"),
                   (-2, 3, "none"), (10, 3, "all")]


@pytest.mark.parametrize("d,p,sigma", WITNESS_CONFIGS)
def test_witness_realizes_g(d, p, sigma):
    F = make_field(d)
    g = g_invariant(F, p, sigma).g
    w = witness_primes(F, p, sigma, bound=10**4)
    assert w.found and len(w.S) == g == w.g
    assert is_dense(F, w.S, sigma, p).dense
    for x, P in zip(w.generators, w.S):
        assert Ideal.principal(F, x) == P
        assert x.is_positive_at(SigmaSet.of(F, sigma))
    # every proper subset fails, and |S| >= g for all dense subsets
    for r in range(len(w.S)):
        for sub in itertools.combinations(w.S, r):
            rep = is_dense(F, list(sub), sigma, p)
            assert not rep.dense
    # monotonicity: adding a prime keeps density
    extra = next(P for l in (101, 103, 107, 109, 113) for P in splitting_type(F, l).ideals)
    assert is_dense(F, list(w.S) + [extra], sigma, p).dense


def test_witness_tie_breaking():
    F = make_field(-1)
    w = witness_primes(F, 5)
    assert w.S[0].norm == 13
    w2 = witness_primes(F, 5, exclusions=[13])
    assert w2.found and w2.S[0].norm > 13


def test_witness_exhaustion_reports_progress():
    w = witness_primes(make_field(-5), 5, bound=50)
    assert not w.found
    assert w.unmatched
    assert w.report is None


@given(st.sampled_from([-1, -2, -3, -5, -7, 2, 3, 5, 6, 7]), st.sampled_from([2, 3, 5, 7, 11, 13]))
@settings(max_examples=40, deadline=None)
def test_g_bound_holds(d, p):
    F = make_field(d)
    for sigma in (["none", "all"] if F.is_real else ["none"]):
        assert g_invariant(F, p, sigma).g <= g_bound(F, p)
