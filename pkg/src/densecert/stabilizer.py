"""Topological generators of Z_p^*, finite-level density certificates and torus searches."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Optional

from sympy import isprime, nextprime, primefactors, primerange

from .fingroup import closure, index
from .hondatate import WeilClass, isogclass
from .localunits import residue_units, unit_quotient
from .quadfield import (Ideal, QuadElt, QuadField, SplitKind, cornacchia, splitting_type,
                        unit_group, valuation)

TOPGEN_CAP = 10**6
DEFAULT_BOUND = 10**4


class SearchExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class TopGenCertificate:
    l: int
    p: int
    checks: tuple  # ((k, alpha_k), ...) for odd p
    accepted: bool
    p2_rule: Optional[int] = None  # l mod 8 when p = 2


def is_topological_generator(l: int, p: int) -> TopGenCertificate:
    """Does l (together with -1 when p = 2) topologically generate Z_p^*?

    Odd p: accepted iff alpha_k = l^(p(p-1)/k) mod p^2 is not 1 for each prime k | p(p-1).
    """
    if not (isprime(l) and isprime(p)) or l == p:
        raise ValueError("need distinct primes l, p")
    if p == 2:
        r = l % 8
        return TopGenCertificate(l, p, (), r in (3, 5), r)
    N, mod = p * (p - 1), p * p
    checks = tuple((k, pow(l, N // k, mod)) for k in primefactors(N))
    return TopGenCertificate(l, p, checks, all(a != 1 for _, a in checks))


def find_topgen(p: int, exclusions: Iterable[int] = (), cap: int = TOPGEN_CAP) -> int:
    skip = set(exclusions) | {p}
    l = 2
    while l <= cap:
        if l not in skip and is_topological_generator(l, p).accepted:
            return l
        l = nextprime(l)
    raise SearchExhausted(f"no topological generator for p = {p} below {cap}")


def _split_prime(F: QuadField, p: int) -> Ideal:
    st = splitting_type(F, p)
    if st.kind is not SplitKind.SPLIT:
        raise ValueError(f"{p} does not split in {F}")
    return st.ideal


@dataclass(frozen=True)
class Modular1Certificate:
    weil: WeilClass = field(repr=False)
    p: int
    n: int
    l: int
    topgen: TopGenCertificate
    prime: Ideal  # the split prime with v(pi) = 1
    generators: tuple  # elements whose images are checked
    levels: tuple  # m with closure = whole group
    subgroup_orders: tuple  # ((m, |closure|, |(Z/p^m)^*|), ...)

    @property
    def accepted(self) -> bool:
        return self.topgen.accepted

    @property
    def full(self) -> bool:
        return all(h == g for _, h, g in self.subgroup_orders)


def modular1_certificate(p: int, n: int, l: Optional[int] = None,
                         m_max: int = 5) -> Modular1Certificate:
    """Check that mu(K) and l generate (O_K/P^m)^* = (Z/p^m)^* for m <= m_max.

    K is the center of isogclass(p, n) and P the prime above p with v_P(pi) = 1.
    """
    W = isogclass(p, n)
    F = W.field
    if l is None:
        l = find_topgen(p)
    cert = is_topological_generator(l, p)
    P = next(Q for Q in splitting_type(F, p).ideals if valuation(Q, W.pi) == 1)
    gens = (unit_group(F).torsion_generator, F(l))
    levels, orders = [], []
    for m in range(1, m_max + 1):
        R = residue_units(F, p, m, P)
        G = R.units
        H = closure(G, [R.reduce(x) for x in gens])
        orders.append((m, H.order, G.order))
        if H.is_whole():
            levels.append(m)
    return Modular1Certificate(W, p, n, l, cert, P, gens, tuple(levels), tuple(orders))


def weil_ratio(F: QuadField, l: int) -> Optional[tuple[QuadElt, QuadElt]]:
    """(pi, beta = pi/conj(pi)) for a generator pi of norm l, or None."""
    pi = cornacchia(F, l)
    if pi is None:
        return None
    beta = pi / pi.conj()
    if beta * beta.conj() != F.one:
        raise AssertionError("beta is not of norm one")
    return pi, beta


@dataclass(frozen=True)
class TorusCertificate:
    F: QuadField
    p: int
    prime: Ideal
    bound: int
    l: int
    pi: QuadElt
    beta: QuadElt
    quotient_order: int
    images: tuple  # images of the mu generator and beta in the quotient
    tried: tuple  # split l scanned before acceptance


def approxtorus_search(F: QuadField, p: int, bound: int = DEFAULT_BOUND) -> TorusCertificate:
    """First split l <= bound such that mu(F) and beta = pi/conj(pi) generate U_P / U_P^(1)^p."""
    if F.is_real:
        raise ValueError("needs an imaginary quadratic field")
    P = _split_prime(F, p)
    Q = unit_quotient(F, P)
    zeta = Q.reduce(unit_group(F).torsion_generator)
    tried = []
    for l in primerange(2, bound + 1):
        if l == p or splitting_type(F, l).kind is not SplitKind.SPLIT:
            continue
        found = weil_ratio(F, l)
        if found is None:
            continue
        tried.append(l)
        pi, beta = found
        b = Q.reduce(beta)
        if closure(Q.group, [zeta, b]).is_whole():
            return TorusCertificate(F, p, P, bound, l, pi, beta, Q.order, (zeta, b), tuple(tried[:-1]))
    raise SearchExhausted(f"no l <= {bound} for {F} at p = {p} (tried {tried})")


def unitary_index(F: QuadField, p: int, l: int, m: int) -> int:
    """Index of <beta mod P^m> in (O/P^m)^* = (Z/p^m)^*."""
    P = _split_prime(F, p)
    found = weil_ratio(F, l)
    if found is None:
        raise ValueError(f"no element of norm {l} in {F}")
    R = residue_units(F, p, m, P)
    return index(R.units, closure(R.units, [R.reduce(found[1])]))


class TorusFiber(enum.Enum):
    MULTIPLICATIVE = "Multiplicative"
    NORM_ONE_TORUS = "NormOneTorus"
    ADDITIVE_TIMES_MU2 = "AdditiveTimesMu2"


_FIBERS = {
    SplitKind.SPLIT: TorusFiber.MULTIPLICATIVE,
    SplitKind.INERT: TorusFiber.NORM_ONE_TORUS,
    SplitKind.RAMIFIED: TorusFiber.ADDITIVE_TIMES_MU2,
}


def torus_fiber(F: QuadField, p: int) -> TorusFiber:
    """Special fiber at p of the norm-one torus of F/Q."""
    return _FIBERS[splitting_type(F, p).kind]
