"""Exact arithmetic in quadratic fields Q(sqrt d) and their rings of integers.

Elements are stored in the integral basis (1, w) where w = (1 + sqrt d)/2 if
d = 1 mod 4 and w = sqrt d otherwise, so that w^2 = t*w + n with small
integers t, n.  Ideals are two-generator Hermite normal forms
[a, b + c*w] (as Z-lattices) with 0 <= b < a.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional

from sympy import factorint, isprime, jacobi_symbol
from sympy.ntheory import sqrt_mod

PERIOD_CAP = 10_000
COORD_BOUND = 10**6


class PeriodCapExceeded(ArithmeticError):
    """Continued fraction period of w longer than PERIOD_CAP."""


class SearchBoundExceeded(ArithmeticError):
    """A bounded generator search gave up without a proof either way."""


def is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(abs(n)).values())


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n = s^2 * d with d squarefree; return (d, s)."""
    if n == 0:
        raise ValueError("0 has no squarefree part")
    d, s = (1 if n > 0 else -1), 1
    for q, e in factorint(abs(n)).items():
        s *= q ** (e // 2)
        if e % 2:
            d *= q
    return d, s


def kronecker(D: int, p: int) -> int:
    """Kronecker symbol (D | p) for a prime p."""
    if p == 2:
        if D % 2 == 0:
            return 0
        return 1 if D % 8 in (1, 7) else -1
    return int(jacobi_symbol(D % p, p))


@dataclass(frozen=True)
class QuadField:
    d: int

    def __post_init__(self):
        if self.d in (0, 1) or not is_squarefree(self.d):
            raise ValueError(f"d = {self.d} is not a squarefree integer other than 0, 1")

    @property
    def disc(self) -> int:
        return self.d if self.d % 4 == 1 else 4 * self.d

    @property
    def signature(self) -> int:
        """Number of real embeddings."""
        return 2 if self.d > 0 else 0

    @property
    def is_real(self) -> bool:
        return self.d > 0

    @property
    def t(self) -> int:
        # w^2 = t*w + n
        return 1 if self.d % 4 == 1 else 0

    @property
    def n(self) -> int:
        return (self.d - 1) // 4 if self.d % 4 == 1 else self.d

    @property
    def omega(self) -> str:
        return "(1+sqrt(d))/2" if self.d % 4 == 1 else "sqrt(d)"

    def __call__(self, a, b=0) -> "QuadElt":
        return QuadElt(self, Fraction(a), Fraction(b))

    @property
    def one(self) -> "QuadElt":
        return self(1)

    @property
    def w(self) -> "QuadElt":
        return self(0, 1)

    def from_sqrt(self, u, v) -> "QuadElt":
        """The element u + v*sqrt(d)."""
        u, v = Fraction(u), Fraction(v)
        if self.d % 4 == 1:
            return QuadElt(self, u - v, 2 * v)
        return QuadElt(self, u, v)

    def __repr__(self):
        return f"QuadField({self.d})"


def make_field(d: int) -> QuadField:
    return QuadField(d)


def _sign_of(u: Fraction, v: Fraction, d: int) -> int:
    """Exact sign of u + v*sqrt(d) for d > 0."""
    if v == 0:
        return (u > 0) - (u < 0)
    if u == 0 or (u > 0) == (v > 0):
        return 1 if (u > 0 or (u == 0 and v > 0)) else -1
    # opposite signs: compare u^2 with v^2 d
    dom = u * u - v * v * d
    return (1 if u > 0 else -1) if dom > 0 else (1 if v > 0 else -1)


@dataclass(frozen=True)
class QuadElt:
    F: QuadField
    a: Fraction
    b: Fraction

    def _coerce(self, other) -> "QuadElt":
        if isinstance(other, QuadElt):
            if other.F != self.F:
                raise ValueError("elements of different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElt(self.F, Fraction(other), Fraction(0))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElt(self.F, self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(self.F, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        t, n = self.F.t, self.F.n
        bb = self.b * o.b
        return QuadElt(self.F, self.a * o.a + bb * n, self.a * o.b + self.b * o.a + bb * t)

    __rmul__ = __mul__

    def conj(self) -> "QuadElt":
        # conj(w) = t - w
        return QuadElt(self.F, self.a + self.b * self.F.t, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b * self.F.t - self.b * self.b * self.F.n

    def trace(self) -> Fraction:
        return 2 * self.a + self.b * self.F.t

    def inverse(self) -> "QuadElt":
        N = self.norm()
        if N == 0:
            raise ZeroDivisionError("inverse of zero")
        c = self.conj()
        return QuadElt(self.F, c.a / N, c.b / N)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = self.F.one, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, QuadElt):
            return self.F == other.F and self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        return hash((self.F.d, self.a, self.b))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    def is_rational(self) -> bool:
        return self.b == 0

    def denominator(self) -> int:
        return math.lcm(self.a.denominator, self.b.denominator)

    def sqrt_coords(self) -> tuple[Fraction, Fraction]:
        """(u, v) with self = u + v*sqrt(d)."""
        if self.F.d % 4 == 1:
            return self.a + self.b / 2, self.b / 2
        return self.a, self.b

    def sign(self, place: int) -> int:
        """Sign under real place 0 (sqrt d > 0) or 1 (sqrt d < 0)."""
        if not self.F.is_real:
            raise ValueError("imaginary field has no real places")
        u, v = self.sqrt_coords()
        return _sign_of(u, -v if place else v, self.F.d)

    def is_positive_at(self, places: Iterable[int]) -> bool:
        return all(self.sign(v) > 0 for v in places)

    def embed(self, place: int = 0) -> complex | float:
        u, v = self.sqrt_coords()
        r = math.sqrt(abs(self.F.d))
        if self.F.is_real:
            return float(u) + (-1 if place else 1) * float(v) * r
        return complex(float(u), (-1 if place else 1) * float(v) * r)

    def __str__(self):
        sign = "+" if self.b >= 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}*w"

    def __repr__(self):
        return f"QuadElt({self.F.d}: {self})"


def parse_elt(F: QuadField, s: str) -> QuadElt:
    """Inverse of str(QuadElt): 'a+b*w' / 'a-b*w' with rational a, b."""
    body = s.removesuffix("*w")
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut <= 0:
        raise ValueError(f"cannot parse {s!r}")
    return F(Fraction(body[:cut]), Fraction(body[cut:]))


# --- ideals ---------------------------------------------------------------


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _hnf2(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """HNF (a, b, c) of the full-rank lattice in Z^2 spanned by vectors: basis (a,0),(b,c)."""
    px, py = 0, 0
    a = 0
    for x, y in vectors:
        if y == 0:
            a = math.gcd(a, x)
            continue
        if py == 0:
            px, py = x, y
            continue
        g, s, t = _egcd(py, y)
        nx = s * px + t * x
        rx = (y // g) * px - (py // g) * x
        px, py = nx, g
        a = math.gcd(a, rx)
    if py < 0:
        px, py = -px, -py
    if a == 0 or py == 0:
        raise ValueError("lattice is not of full rank")
    return a, px % a, py


@dataclass(frozen=True)
class Ideal:
    """Integral ideal with Z-basis a, b + c*w."""

    F: QuadField
    a: int
    b: int
    c: int

    @classmethod
    def from_generators(cls, F: QuadField, gens: Iterable[QuadElt]) -> "Ideal":
        vecs = []
        for g in gens:
            if not g.is_integral():
                raise ValueError(f"{g} is not integral")
            gw = g * F.w
            vecs += [(int(g.a), int(g.b)), (int(gw.a), int(gw.b))]
        return cls(F, *_hnf2(vecs))

    @classmethod
    def principal(cls, F: QuadField, g: QuadElt) -> "Ideal":
        return cls.from_generators(F, [g])

    @property
    def basis(self) -> tuple[QuadElt, QuadElt]:
        return self.F(self.a), self.F(self.b, self.c)

    @property
    def norm(self) -> int:
        return self.a * self.c

    def __contains__(self, x: QuadElt) -> bool:
        if not x.is_integral():
            return False
        xa, xb = int(x.a), int(x.b)
        if xb % self.c:
            return False
        return (xa - (xb // self.c) * self.b) % self.a == 0

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal.from_generators(self.F, [x * y for x in self.basis for y in other.basis])

    def __pow__(self, k: int) -> "Ideal":
        if k < 0:
            raise ValueError("negative ideal powers are not integral")
        result = Ideal(self.F, 1, 0, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> "Ideal":
        return Ideal.from_generators(self.F, [x.conj() for x in self.basis])

    def reduce(self, xa: int, xb: int) -> tuple[int, int]:
        """Canonical representative of xa + xb*w modulo the ideal."""
        k = xb // self.c
        return (xa - k * self.b) % self.a, xb - k * self.c

    def sort_key(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def __str__(self):
        return f"[{self.a}, {self.b}+{self.c}*w]"


def valuation(I: Ideal, x: QuadElt) -> int:
    """Valuation of a nonzero element at the prime ideal I."""
    if x.is_zero():
        raise ValueError("valuation of zero")
    den = x.denominator()
    num = x * den
    v = 0
    while num in I ** (v + 1):
        v += 1
    if den == 1:
        return v
    return v - valuation(I, x.F(den))


# --- prime splitting ------------------------------------------------------


class SplitKind(enum.Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"


@dataclass(frozen=True)
class PrimeSplitting:
    F: QuadField
    p: int
    kind: SplitKind
    e: int
    f: int
    ideals: tuple[Ideal, ...]

    @property
    def ideal(self) -> Ideal:
        """The chosen prime above p: lexicographically smallest HNF."""
        return self.ideals[0]

    @property
    def local_degree(self) -> int:
        return self.e * self.f


def _omega_roots_mod(F: QuadField, p: int) -> list[int]:
    if p == 2:
        return [r for r in range(2) if (r * r - F.t * r - F.n) % 2 == 0]
    roots = sqrt_mod(F.disc % p, p, all_roots=True) or []
    inv2 = pow(2, -1, p)
    return sorted({(F.t + s) * inv2 % p for s in roots})


@lru_cache(maxsize=4096)
def splitting_type(F: QuadField, p: int) -> PrimeSplitting:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    k = kronecker(F.disc, p)
    if k == -1:
        return PrimeSplitting(F, p, SplitKind.INERT, 1, 2, (Ideal(F, p, 0, p),))
    ideals = tuple(sorted((Ideal(F, p, (-r) % p, 1) for r in _omega_roots_mod(F, p)),
                          key=Ideal.sort_key))
    if k == 0:
        return PrimeSplitting(F, p, SplitKind.RAMIFIED, 2, 1, ideals)
    return PrimeSplitting(F, p, SplitKind.SPLIT, 1, 1, ideals)


def prime_ideals_above(F: QuadField, p: int) -> tuple[Ideal, ...]:
    return splitting_type(F, p).ideals


def prime_of(F: QuadField, P: Ideal) -> PrimeSplitting:
    """Splitting data of the rational prime below a prime ideal P."""
    for p in factorint(P.norm):
        st = splitting_type(F, p)
        if P in st.ideals:
            return st
    raise ValueError(f"{P} is not a prime ideal")


# --- units ----------------------------------------------------------------


@dataclass(frozen=True)
class UnitGroup:
    F: QuadField
    w: int
    fundamental: Optional[QuadElt]
    sign_pattern: Optional[tuple[int, int]]

    @property
    def torsion_generator(self) -> QuadElt:
        if self.w == 4:
            return self.F.w  # i
        if self.w == 6:
            return self.F.w  # (1 + sqrt(-3))/2 has order 6
        return self.F(-1)

    def roots_of_unity(self) -> list[QuadElt]:
        z = self.torsion_generator
        return [z ** k for k in range(self.w)]


def _floor_quadratic(P: int, D: int, Q: int) -> int:
    """floor((P + sqrt D)/Q) for non-square D > 0."""
    s = math.isqrt(D)
    if Q > 0:
        return (P + s) // Q
    return -((P + s) // (-Q)) - 1


def _fundamental_unit(F: QuadField) -> QuadElt:
    # continued fraction of w = (P + sqrt D)/Q; the first convergent h/k with
    # N(h - k*w) = +-1 gives the unit of smallest w-coefficient
    D = F.disc
    P, Q = (1, 2) if F.d % 4 == 1 else (0, 2)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for _ in range(PERIOD_CAP):
        q = _floor_quadratic(P, D, Q)
        h_prev, h = h, q * h + h_prev
        k_prev, k = k, q * k + k_prev
        eta = F(h, -k)
        if abs(eta.norm()) == 1:
            eps = eta.conj()
            if eps.sign(0) < 0:
                eps = -eps
            return eps
        P = q * Q - P
        Q = (D - P * P) // Q
    raise PeriodCapExceeded(f"no unit within {PERIOD_CAP} partial quotients for d = {F.d}")


@lru_cache(maxsize=1024)
def unit_group(F: QuadField) -> UnitGroup:
    if not F.is_real:
        w = {-1: 4, -3: 6}.get(F.d, 2)
        return UnitGroup(F, w, None, None)
    eps = _fundamental_unit(F)
    return UnitGroup(F, 2, eps, (eps.sign(0), eps.sign(1)))


# --- principality ---------------------------------------------------------


def _reduce_definite_form(A: int, B: int, C: int):
    """Reduce a positive definite form, tracking M with Q_red(x) = Q(M x)."""
    m = [1, 0, 0, 1]  # row-major 2x2

    def translate(k):
        nonlocal A, B, C
        A, B, C = A, B + 2 * A * k, A * k * k + B * k + C
        m[1] += m[0] * k
        m[3] += m[2] * k

    while True:
        if not (-A < B <= A):
            translate((A - B) // (2 * A))
        if A > C or (A == C and B < 0):
            A, B, C = C, -B, A
            m[0], m[1], m[2], m[3] = m[1], -m[0], m[3], -m[2]
            continue
        return (A, B, C), m


def ideal_form(I: Ideal) -> tuple[int, int, int]:
    """Norm form N(u*a + v*(b + c*w)) / N(I) as integer coefficients (A, B, C)."""
    a1, a2 = I.basis
    N = I.norm
    A, B, C = a1.norm() * 1, (a1 * a2.conj()).trace(), a2.norm()
    if A % N or B % N or C % N:
        raise ArithmeticError("norm form not integral; not an ideal basis")
    return int(A // N), int(B // N), int(C // N)


def _generator_imaginary(I: Ideal) -> Optional[QuadElt]:
    (A, _, _), m = _reduce_definite_form(*ideal_form(I))
    if A != 1:
        return None
    a1, a2 = I.basis
    return a1 * m[0] + a2 * m[2]


def _generator_real(I: Ideal, eps: QuadElt) -> Optional[QuadElt]:
    # Some generator g has 1 <= |g/conj g| < eps^2, so |g| < eps*sqrt(N) and
    # |conj g| <= sqrt(N); then the coefficient v of b + c*w is bounded via
    # g - conj g = v*c*sqrt(disc).
    F = I.F
    N = I.norm
    a1, a2 = I.basis
    e = eps.embed(0)
    vmax = int((e + 1) * math.sqrt(N) / (I.c * math.sqrt(F.disc))) + 2
    if vmax > COORD_BOUND:
        raise SearchBoundExceeded(f"generator search for {I} needs |v| <= {vmax}")
    T2, N2 = int(a2.trace()), int(a2.norm())
    aa = I.a
    for v in range(0, vmax + 1):
        # N(u*a + v*alpha2) = a^2 u^2 + a v T2 u + v^2 N2 = +-N
        for target in (N, -N):
            disc = (aa * v * T2) ** 2 - 4 * aa * aa * (v * v * N2 - target)
            if disc < 0:
                continue
            r = math.isqrt(disc)
            if r * r != disc:
                continue
            for num in (-aa * v * T2 + r, -aa * v * T2 - r):
                if num % (2 * aa * aa) == 0:
                    u = num // (2 * aa * aa)
                    g = a1 * u + a2 * v
                    if not g.is_zero():
                        return g
    return None


def principal_generator(F: QuadField, I: Ideal, sigma: Iterable[int] = ()) -> Optional[QuadElt]:
    """A generator of I positive at the real places in sigma, or None if none exists.

    Raises SearchBoundExceeded when the real-field search cannot decide.
    """
    sigma = tuple(sorted(set(sigma)))
    if not F.is_real:
        if sigma:
            raise ValueError("imaginary fields have no real places")
        return _generator_imaginary(I)
    eps = unit_group(F).fundamental
    g = _generator_real(I, eps)
    if g is None:
        return None
    for u in (F.one, F(-1), eps, -eps):
        cand = g * u
        if cand.is_positive_at(sigma):
            return cand
    return None


def class_order(I: Ideal, sigma: Iterable[int] = (), cap: int = 1000) -> tuple[int, QuadElt]:
    """Smallest k >= 1 with I^k generated by a sigma-positive element, and that generator."""
    J = I
    for k in range(1, cap + 1):
        g = principal_generator(I.F, J, sigma)
        if g is not None:
            return k, g
        J = J * I
    raise SearchBoundExceeded(f"no principal power of {I} up to {cap}")


# --- norm equations ---------------------------------------------------------


def cornacchia(F: QuadField, l: int) -> Optional[QuadElt]:
    """pi in O_F with N(pi) = l for a prime l, via the modified Cornacchia algorithm."""
    if F.is_real:
        raise ValueError("cornacchia needs an imaginary quadratic field")
    D = F.disc
    four_l = 4 * l
    sol = None
    if -D >= four_l:
        # only y = 0 or tiny y can occur
        for y in range(1, math.isqrt(four_l // -D) + 1):
            r = four_l + D * y * y
            x = math.isqrt(r)
            if x * x == r:
                sol = (x, y)
                break
    elif l == 2:
        r = D + 8
        if r >= 0 and math.isqrt(r) ** 2 == r:
            sol = (math.isqrt(r), 1)
    elif kronecker(D, l) != -1:
        x0 = sqrt_mod(D % l, l)
        if (x0 - D) % 2:
            x0 = l - x0
        a, b = 2 * l, x0
        lim = math.isqrt(four_l)
        while b > lim:
            a, b = b, a % b
        rest = four_l - b * b
        if rest % -D == 0:
            c = rest // -D
            y = math.isqrt(c)
            if c > 0 and y * y == c:
                sol = (b, y)
    if sol is None:
        return None
    x, y = sol
    # pi = (x + y*sqrt(D))/2 and sqrt(D) = 2*sqrt(d) when D = 4d
    scale = 2 if D == 4 * F.d else 1
    return F.from_sqrt(Fraction(x, 2), Fraction(y * scale, 2))
