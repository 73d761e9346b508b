"""Quadratic Weil numbers: center field, local invariants, dimension, geometric simplicity."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from sympy import isprime

from .quadfield import (Ideal, QuadElt, QuadField, SplitKind, make_field, splitting_type,
                        squarefree_part, unit_group, valuation)


class NotQuadraticWeil(ValueError):
    pass


@dataclass(frozen=True)
class WeilClass:
    p: int
    a: int
    t: int
    n0: int  # f = x^2 - t*x + n0
    field: QuadField
    pi: QuadElt
    finite_invariants: tuple  # ((Ideal, Fraction), ...)
    real_invariants: tuple  # ((place, Fraction), ...)
    slopes: tuple  # Newton slopes of f at p, normalized by v_p(q)
    e: int
    dim: int
    geom_simple: bool

    @property
    def q(self) -> int:
        return self.p ** self.a

    @property
    def poly(self) -> tuple[int, int]:
        return self.t, self.n0

    def invariants(self) -> list[Fraction]:
        return [inv for _, inv in self.finite_invariants] + [inv for _, inv in self.real_invariants]


def _frac_mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


def newton_slopes(t: int, n0: int, p: int) -> tuple[Fraction, Fraction]:
    """Slopes of the p-adic Newton polygon of x^2 - t*x + n0, normalized so they sum to 1."""
    v0 = _vp(n0, p)
    v1 = _vp(t, p) if t else math.inf
    if 2 * v1 >= v0:
        return Fraction(1, 2), Fraction(1, 2)
    # vertices (0, v0), (1, v1), (2, 0): slopes v1 and v0 - v1
    lo, hi = sorted((Fraction(v1), Fraction(v0 - v1)))
    return lo / v0, hi / v0


def _vp(n: int, p: int) -> int:
    n, k = abs(n), 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def weil_field(t: int, n0: int) -> tuple[QuadField, QuadElt]:
    """Q(pi) and pi = (t + sqrt(t^2 - 4 n0))/2."""
    D = t * t - 4 * n0
    if D >= 0 and math.isqrt(D) ** 2 == D:
        raise NotQuadraticWeil(f"x^2 - {t}x + {n0} has rational roots; not a quadratic Weil class")
    d, s = squarefree_part(D)
    F = make_field(d)
    return F, F.from_sqrt(Fraction(t, 2), Fraction(s, 2))


def weil_class(t: int, p: int, a: int = 1, real: bool = False) -> WeilClass:
    """Analyse f = x^2 - t*x + p^a, or f = x^2 - p^a when real=True (the totally real case pi^2 = q)."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if a < 1:
        raise ValueError("a must be positive")
    q = p ** a
    if real:
        if t != 0:
            raise ValueError("the real case pi^2 = q has trace 0")
        n0 = -q
    else:
        n0 = q
        if t * t > 4 * q:
            raise NotQuadraticWeil(f"t^2 = {t * t} exceeds 4q = {4 * q}")
    F, pi = weil_field(t, n0)
    if not pi.is_integral():
        raise AssertionError("Weil number is not integral")
    pibar = pi.conj()
    if pi * pibar != F(n0):
        raise AssertionError("pi * conj(pi) != n0")

    st = splitting_type(F, p)
    vq = a * st.e
    finite = []
    for P in st.ideals:
        v = valuation(P, pi)
        if v + valuation(P, pibar) != vq:
            raise AssertionError(f"valuations at {P} do not add up to v(q)")
        finite.append((P, _frac_mod1(Fraction(v, vq) * st.local_degree)))
    real_inv = tuple((place, Fraction(1, 2)) for place in (0, 1)) if F.is_real else ()

    P0 = st.ideals[0]
    slopes = tuple(sorted((Fraction(valuation(P0, pi), vq), Fraction(valuation(P0, pibar), vq))))
    if slopes != newton_slopes(t, n0, p):
        raise AssertionError(f"ideal valuations {slopes} disagree with the Newton polygon")

    invs = [inv for _, inv in finite] + [inv for _, inv in real_inv]
    if sum(invs) % 1 != 0:
        raise AssertionError(f"invariants {invs} do not sum to 0 mod 1")
    e = 1
    for inv in invs:
        e = math.lcm(e, inv.denominator)
    dim = e * 2 // 2  # e * [K:Q] / 2 with [K:Q] = 2
    W = WeilClass(p, a, t, n0, F, pi, tuple(finite), real_inv, slopes, e, dim, False)
    return _with_simplicity(W)


def is_geom_simple(W: WeilClass) -> bool:
    """True iff no power of pi is rational, i.e. pi/conj(pi) is not a root of unity."""
    pibar = W.pi.conj()
    for P in splitting_type(W.field, W.p).ideals:
        if valuation(P, W.pi) != valuation(P, pibar):
            return True
    w = unit_group(W.field).w
    return (W.pi / pibar) ** w != W.field.one


def _with_simplicity(W: WeilClass) -> WeilClass:
    return replace(W, geom_simple=is_geom_simple(W))


def isogclass(p: int, n: int) -> WeilClass:
    """The class of x^2 - p x + p^n: imaginary center, p split, invariants 1/n and (n-1)/n."""
    if n < 3:
        raise ValueError("n must be >= 3")
    W = weil_class(p, p, n)
    F = W.field
    if F.is_real or p * p - 4 * p ** n >= 0:
        raise AssertionError("discriminant of f is not negative")
    if splitting_type(F, p).kind is not SplitKind.SPLIT:
        raise AssertionError(f"{p} does not split in {F}")
    if sorted(inv for _, inv in W.finite_invariants) != [Fraction(1, n), Fraction(n - 1, n)]:
        raise AssertionError(f"unexpected invariants {W.finite_invariants}")
    if W.dim != n or not W.geom_simple:
        raise AssertionError("dimension or simplicity check failed")
    return W


def inv_at(W: WeilClass, P: Ideal) -> Fraction:
    for Q, inv in W.finite_invariants:
        if Q == P:
            return inv
    raise KeyError(P)
