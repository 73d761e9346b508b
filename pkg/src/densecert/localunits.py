"""Finite quotients of the local unit group U_P = O_{k,P}^* of a quadratic field.

(O/P^m)^* is realized on canonical residues (a, b) of a + b*w modulo the
HNF lattice of P^m.  The quotient U_P / (U_P^(1))^p is found inside
(O/P^M)^* by raising M until its order matches the closed form
(q - 1) * p^[k_P:Q_p] * |mu_p(k_P)|.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Optional

from .fingroup import FiniteGroup, Subgroup, closure, quotient
from .quadfield import (Ideal, PrimeSplitting, QuadElt, QuadField, prime_of, splitting_type,
                        valuation)

MAX_LEVEL = 12
ELEMENT_CAP = 10**7


class StabilizationError(RuntimeError):
    pass


class LevelOverflow(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ResidueRing:
    """O_F / P^m for a prime ideal P."""

    F: QuadField
    prime: PrimeSplitting
    P: Ideal
    m: int
    modulus: Ideal = field(repr=False)

    @property
    def size(self) -> int:
        return self.modulus.norm

    @property
    def p(self) -> int:
        return self.prime.p

    def canon(self, a: int, b: int) -> tuple[int, int]:
        return self.modulus.reduce(a, b)

    @property
    def one(self) -> tuple[int, int]:
        return self.canon(1, 0)

    @property
    def zero(self) -> tuple[int, int]:
        return (0, 0)

    @cached_property
    def _tn(self) -> tuple[int, int, int, int, int]:
        M = self.modulus
        return self.F.t, self.F.n, M.a, M.b, M.c

    def mul(self, x, y):
        t, n, A, B, C = self._tn
        bb = x[1] * y[1]
        xa, xb = x[0] * y[0] + bb * n, x[0] * y[1] + x[1] * y[0] + bb * t
        k = xb // C
        return (xa - k * B) % A, xb - k * C

    def add(self, x, y):
        return self.canon(x[0] + y[0], x[1] + y[1])

    def sub(self, x, y):
        return self.canon(x[0] - y[0], x[1] - y[1])

    def in_prime(self, x) -> bool:
        return self.P.reduce(x[0], x[1]) == (0, 0)

    def elements(self):
        M = self.modulus
        for b in range(M.c):
            for a in range(M.a):
                yield (a, b)

    def ideal_elements(self, J: Ideal) -> set:
        """Residues of the ideal J (containing P^m) modulo P^m, by additive closure."""
        gens = [self.canon(J.a, 0), self.canon(J.b, J.c)]
        seen = {self.zero}
        frontier = [self.zero]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def reduce(self, x: QuadElt):
        """Image of a P-integral element."""
        den = x.denominator()
        if den % self.p == 0:
            # split p: the pole sits at the conjugate prime; clear it with t in conj(P)^k, t a P-unit
            k = 0
            while den % self.p == 0:
                den //= self.p
                k += 1
            others = [Q for Q in self.prime.ideals if Q != self.P]
            if not others or valuation(self.P, x) < 0:
                raise ValueError(f"{x} is not integral at {self.P}")
            J = others[0] ** k
            t = next(g for g in J.basis if g not in self.P)
            rt = self.reduce(t)
            n_units = self.size - self.size // self.P.norm
            return self.mul(self.reduce(x * t), _ring_pow(self, rt, n_units - 1))
        num = x * den
        r = self.canon(int(num.a), int(num.b))
        if den != 1:
            inv = pow(den, -1, self.modulus.a)
            r = self.canon(r[0] * inv, r[1] * inv)
        return r

    @cached_property
    def units(self) -> FiniteGroup:
        if self.size > ELEMENT_CAP:
            raise LevelOverflow(f"|O/P^{self.m}| = {self.size} exceeds {ELEMENT_CAP}")
        els = frozenset(x for x in self.elements() if not self.in_prime(x))
        order = len(els)
        return FiniteGroup(els, self.mul, self.one,
                           lambda x: _ring_pow(self, x, order - 1),
                           abelian=True, name=f"(O/P^{self.m})^*")


def _ring_pow(R: ResidueRing, x, k: int):
    result = R.one
    while k:
        if k & 1:
            result = R.mul(result, x)
        x = R.mul(x, x)
        k >>= 1
    return result


def _resolve_prime(F: QuadField, p, ideal: Optional[Ideal]) -> tuple[PrimeSplitting, Ideal]:
    if isinstance(p, Ideal):
        ideal = p
        st = prime_of(F, ideal)
    else:
        st = splitting_type(F, p)
    P = ideal if ideal is not None else st.ideal
    if P not in st.ideals:
        raise ValueError(f"{P} is not a prime above {st.p}")
    return st, P


@lru_cache(maxsize=512)
def _residue_ring(F: QuadField, P: Ideal, m: int) -> ResidueRing:
    st = prime_of(F, P)
    return ResidueRing(F, st, P, m, P ** m)


def residue_units(F: QuadField, p, m: int, ideal: Optional[Ideal] = None) -> ResidueRing:
    """O_F / P^m for the prime P above p (default: smallest HNF); `.units` is its unit group."""
    if m < 1:
        raise ValueError("level must be >= 1")
    _, P = _resolve_prime(F, p, ideal)
    return _residue_ring(F, P, m)


def count_mu_p(F: QuadField, p, ideal: Optional[Ideal] = None) -> int:
    st, P = _resolve_prime(F, p, ideal)
    return _count_mu_p(F, P)


@lru_cache(maxsize=512)
def _count_mu_p(F: QuadField, P: Ideal) -> int:
    """|mu_p(k_P)| by enumeration.

    Every solution of x^p = 1 modulo P^(2e+1) lies within P^(e+1) of a true
    p-th root of unity (Hensel, v(p x^(p-1)) = e), and distinct roots differ
    modulo P^(e+1), so the count is the number of classes mod P^(e+1).
    """
    st = prime_of(F, P)
    e = st.e
    R = _residue_ring(F, P, 2 * e + 1)
    coarse = P ** (e + 1)
    one = R.one
    classes = set()
    for y in R.ideal_elements(P):
        x = R.add(one, y)
        if _ring_pow(R, x, st.p) == one:
            classes.add(coarse.reduce(*x))
    return len(classes)


def predicted_order(F: QuadField, p, ideal: Optional[Ideal] = None) -> int:
    st, P = _resolve_prime(F, p, ideal)
    q = st.p ** st.f
    return (q - 1) * st.p ** st.local_degree * count_mu_p(F, st.p, P)


@dataclass(frozen=True, eq=False)
class LocalUnitQuotient:
    """U_P / (U_P^(1))^p realized at level M."""

    F: QuadField
    prime: PrimeSplitting
    P: Ideal
    level: int
    ring: ResidueRing = field(repr=False)
    group: FiniteGroup = field(repr=False)
    projection: dict = field(repr=False)
    kernel: Subgroup = field(repr=False)
    predicted_order: int = 0
    mu_p: int = 1

    @property
    def order(self) -> int:
        return self.group.order

    def reduce(self, x: QuadElt):
        return reduce_elt(self, x)


def _pth_powers_of_principal_units(R: ResidueRing) -> Subgroup:
    G = R.units
    one = R.one
    p = R.p
    powers = sorted({_ring_pow(R, R.add(one, y), p) for y in R.ideal_elements(R.P)})
    return closure(G, powers)


def quotient_at_level(F: QuadField, p, M: int, ideal: Optional[Ideal] = None):
    """(O/P^M)^* modulo the image of (U^(1))^p: (ring, kernel, quotient, projection)."""
    R = residue_units(F, p, M, ideal)
    H = _pth_powers_of_principal_units(R)
    Q, proj = quotient(R.units, H)
    return R, H, Q, proj


def unit_quotient(F: QuadField, p, ideal: Optional[Ideal] = None) -> LocalUnitQuotient:
    st, P = _resolve_prime(F, p, ideal)
    mu = count_mu_p(F, st.p, P)
    target = (st.p ** st.f - 1) * st.p ** st.local_degree * mu
    for M in range(1, MAX_LEVEL + 1):
        R, H, Q, proj = quotient_at_level(F, st.p, M, P)
        if Q.order == target:
            return LocalUnitQuotient(F, st, P, M, R, Q, proj, H, target, mu)
        if Q.order > target:
            raise StabilizationError(f"quotient order {Q.order} overshoots {target}")
    raise StabilizationError(f"no stabilization by level {MAX_LEVEL} for {F} at {P}")


def reduce_elt(Q: LocalUnitQuotient, x: QuadElt):
    if x.is_zero() or valuation(Q.P, x) != 0:
        raise ValueError(f"{x} is not a unit at {Q.P}")
    return Q.projection[Q.ring.reduce(x)]
