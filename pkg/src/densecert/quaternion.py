"""Maximal orders in definite quaternion algebras over Q and finite-level closure checks.

Orders are ramified at p and infinity only (B_{p,inf}).  Elements of an order
are integer coordinate 4-tuples in its Z-basis; residues mod p^m keep
coordinates in [0, p^m).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Optional, Sequence

import numpy as np
import sympy
from sympy import isprime, legendre_symbol, nextprime

from .fingroup import FiniteGroup, Subgroup, closure, index

ELEMENT_CAP = 10**7

Vec = tuple  # 4 rational coordinates over (1, i, j, k)


@dataclass(frozen=True)
class QuatAlgebra:
    """(a, b)_Q with i^2 = a, j^2 = b, k = ij = -ji."""

    a: int
    b: int

    def __post_init__(self):
        if self.a >= 0 or self.b >= 0:
            raise ValueError("a definite algebra needs a, b < 0")

    def mul(self, x: Vec, y: Vec) -> Vec:
        a, b = self.a, self.b
        x0, x1, x2, x3 = x
        y0, y1, y2, y3 = y
        # i^2 = a, j^2 = b, k^2 = -ab, ij = k, ji = -k, ik = aj, ki = -aj, jk = -bi, kj = bi
        return (
            x0 * y0 + a * x1 * y1 + b * x2 * y2 - a * b * x3 * y3,
            x0 * y1 + x1 * y0 - b * x2 * y3 + b * x3 * y2,
            x0 * y2 + x2 * y0 + a * x1 * y3 - a * x3 * y1,
            x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1,
        )

    def conj(self, x: Vec) -> Vec:
        return (x[0], -x[1], -x[2], -x[3])

    def nrd(self, x: Vec):
        x0, x1, x2, x3 = x
        return x0 * x0 - self.a * x1 * x1 - self.b * x2 * x2 + self.a * self.b * x3 * x3

    def trd(self, x: Vec):
        return 2 * x[0]


@dataclass(frozen=True, eq=False)
class QuatOrder:
    algebra: QuatAlgebra
    basis: tuple  # 4 rows of Fractions over (1, i, j, k)
    p: int

    @cached_property
    def _to_basis(self) -> sympy.Matrix:
        return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row]
                             for row in self.basis]).T.inv()

    def coords(self, x: Vec) -> tuple[Fraction, ...]:
        """Coordinates of an algebra element in the order basis."""
        v = self._to_basis * sympy.Matrix([sympy.Rational(c.numerator, c.denominator)
                                           for c in map(Fraction, x)])
        return tuple(Fraction(int(c.p), int(c.q)) for c in v)

    def element(self, v: Sequence[int]) -> Vec:
        return tuple(sum(Fraction(c) * row[t] for c, row in zip(v, self.basis)) for t in range(4))

    @cached_property
    def structure_constants(self) -> tuple:
        """c[i][j] = coordinates of e_i * e_j; raises if not integral."""
        A = self.algebra
        table = []
        for ei in self.basis:
            row = []
            for ej in self.basis:
                cs = self.coords(A.mul(ei, ej))
                if any(c.denominator != 1 for c in cs):
                    raise ValueError("basis is not closed under multiplication")
                row.append(tuple(int(c) for c in cs))
            table.append(tuple(row))
        return tuple(table)

    @cached_property
    def one(self) -> tuple[int, ...]:
        cs = self.coords((1, 0, 0, 0))
        if any(c.denominator != 1 for c in cs):
            raise ValueError("1 is not in the order")
        return tuple(int(c) for c in cs)

    @cached_property
    def trd_coeffs(self) -> tuple[int, ...]:
        return tuple(int(self.algebra.trd(e)) for e in self.basis)

    @cached_property
    def gram(self) -> tuple:
        """Gram matrix of (x, y) -> Trd(x conj(y)); Nrd(v) = v^T G v / 2."""
        A = self.algebra
        G = []
        for ei in self.basis:
            G.append(tuple(int(A.trd(A.mul(ei, A.conj(ej)))) for ej in self.basis))
        return tuple(G)

    @cached_property
    def discriminant(self) -> int:
        det = int(sympy.Matrix(self.gram).det())
        r = math.isqrt(det)
        if r * r != det:
            raise ValueError(f"Gram determinant {det} is not a square")
        return r

    def mul(self, u, v, mod: Optional[int] = None) -> tuple[int, ...]:
        c = self.structure_constants
        out = [0, 0, 0, 0]
        for i, ui in enumerate(u):
            if ui:
                for j, vj in enumerate(v):
                    if vj:
                        w = ui * vj
                        cij = c[i][j]
                        for t in range(4):
                            out[t] += w * cij[t]
        if mod is not None:
            return tuple(x % mod for x in out)
        return tuple(out)

    def nrd(self, v) -> int:
        G = self.gram
        s = 0
        for i in range(4):
            s += G[i][i] // 2 * v[i] * v[i]
            for j in range(i + 1, 4):
                s += G[i][j] * v[i] * v[j]
        return s

    def trd(self, v) -> int:
        return sum(c * x for c, x in zip(self.trd_coeffs, v))

    def conj(self, v) -> tuple[int, ...]:
        t = self.trd(v)
        return tuple(t * o - x for o, x in zip(self.one, v))

    def validate(self) -> None:
        self.structure_constants
        self.one
        G = self.gram
        if any(G[i][i] % 2 for i in range(4)):
            raise ValueError("norm form is not integral")
        if self.discriminant != self.p:
            raise ValueError(f"discriminant {self.discriminant} != {self.p}")
        if not np.all(np.linalg.eigvalsh(np.array(G, dtype=float)) > 0):
            raise ValueError("norm form is not positive definite")


def _F(*xs) -> tuple:
    return tuple(Fraction(x) for x in xs)


def _order_p1mod8(p: int) -> tuple[QuatAlgebra, tuple]:
    q = 3
    while not (q % 4 == 3 and legendre_symbol(p % q, q) == -1):
        q = nextprime(q)
    c = next(c for c in range(q) if (c * c * p + 1) % q == 0)
    basis = (_F(Fraction(1, 2), 0, Fraction(1, 2), 0), _F(0, Fraction(1, 2), 0, Fraction(1, 2)),
             _F(0, 0, Fraction(1, q), Fraction(c, q)), _F(0, 0, 0, 1))
    return QuatAlgebra(-p, -q), basis


@lru_cache(maxsize=64)
def make_bpinf(p: int) -> QuatOrder:
    """A maximal order in the quaternion algebra ramified exactly at p and infinity."""
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    h = Fraction(1, 2)
    if p == 2:
        A = QuatAlgebra(-1, -1)
        basis = (_F(1, 0, 0, 0), _F(0, 1, 0, 0), _F(0, 0, 1, 0), _F(h, h, h, h))
    elif p % 4 == 3:
        A = QuatAlgebra(-1, -p)
        basis = (_F(1, 0, 0, 0), _F(0, 1, 0, 0), _F(h, 0, h, 0), _F(0, h, 0, h))
    elif p % 8 == 5:
        A = QuatAlgebra(-2, -p)
        f = Fraction(1, 4)
        basis = (_F(1, 0, 0, 0), _F(h, 0, h, h), _F(0, f, h, f), _F(0, 0, 0, 1))
    else:
        A, basis = _order_p1mod8(p)
    O = QuatOrder(A, basis, p)
    O.validate()
    return O


def norm_elements(O: QuatOrder, n: int) -> list[tuple[int, ...]]:
    """All x in O with Nrd(x) = n (Fincke-Pohst enumeration of the norm form).

    The outer three coordinates are bounded in floating point with slack; the
    first coordinate is then solved exactly from an integer quadratic.
    """
    if n < 1:
        raise ValueError("n must be positive")
    G = O.gram
    Q = np.array(G, dtype=float) / 2.0
    # Q = R^T R with R upper triangular; enumerate the last coordinate first
    R = np.linalg.cholesky(Q).T.tolist()
    out = []
    eps = 1e-9 * max(1.0, n)
    x = [0, 0, 0, 0]
    q00 = G[0][0] // 2

    def solve_first():
        B = sum(G[0][j] * x[j] for j in range(1, 4))
        x[0] = 0
        C = O.nrd(x) - n
        disc = B * B - 4 * q00 * C
        if disc < 0:
            return
        r = math.isqrt(disc)
        if r * r != disc:
            return
        for num in sorted({-B - r, -B + r}):
            if num % (2 * q00) == 0:
                x[0] = num // (2 * q00)
                out.append(tuple(x))
        x[0] = 0

    def rec(k: int, rem: float):
        # sum_{r >= k} (R[r][r] x_r + sum_{s > r} R[r][s] x_s)^2 <= rem
        Rk = R[k]
        c = sum(Rk[s] * x[s] for s in range(k + 1, 4))
        span = math.sqrt(max(rem, 0.0) + eps) / Rk[k]
        centre = -c / Rk[k]
        for xk in range(math.ceil(centre - span - 1e-9), math.floor(centre + span + 1e-9) + 1):
            x[k] = xk
            left = rem - (Rk[k] * xk + c) ** 2
            if left < -eps:
                continue
            if k == 1:
                solve_first()
            else:
                rec(k - 1, left)
        x[k] = 0

    rec(3, float(n))
    return sorted(out)


@dataclass(frozen=True, eq=False)
class LocalQuotientGroup:
    """(O / p^m O)^* with its reduced norm into (Z/p^m)^*."""

    O: QuatOrder
    p: int
    m: int
    group: FiniteGroup = field(repr=False)

    @property
    def modulus(self) -> int:
        return self.p ** self.m

    def norm(self, u) -> int:
        return self.O.nrd(u) % self.modulus

    def reduce(self, v) -> tuple[int, ...]:
        return tuple(x % self.modulus for x in v)

    def scalar(self, s: int) -> tuple[int, ...]:
        return self.reduce(tuple(s * o for o in self.O.one))


def local_units(O: QuatOrder, p: int, m: int) -> LocalQuotientGroup:
    """Units of O/p^m O: the residues whose reduced norm is prime to p."""
    N = p ** m
    if N ** 4 > ELEMENT_CAP:
        raise ValueError(f"|O/p^m O| = {N ** 4} exceeds {ELEMENT_CAP}")
    els = frozenset(v for v in itertools.product(range(N), repeat=4) if O.nrd(v) % p)
    one = tuple(x % N for x in O.one)

    def op(u, v):
        return O.mul(u, v, N)

    def inv(u):
        s = pow(O.nrd(u), -1, N)
        return tuple(s * x % N for x in O.conj(u))

    G = FiniteGroup(els, op, one, inv, abelian=False, name=f"(O/{p}^{m}O)^*")
    return LocalQuotientGroup(O, p, m, G)


def _cyclic_closure(x: int, N: int) -> frozenset:
    seen, y = {1 % N}, x % N
    while y not in seen:
        seen.add(y)
        y = y * x % N
    return frozenset(seen)


@dataclass(frozen=True)
class ClosureReport:
    p: int
    l: int
    m: int
    k_max: int
    unit_order: int  # |(O/p^m O)^*|
    target_order: int  # |P|
    closure_order: int  # |H|
    growth: tuple  # |H| after adding norm-l^k elements, k = 0..k_max
    stabilized_at: Optional[int]  # first k with no further growth
    contained: bool  # H inside P
    equal: bool
    norm_image: tuple  # closure of <l> mod p^m, sorted

    @property
    def index(self) -> int:
        return self.target_order // self.closure_order

    @property
    def target_index(self) -> int:
        return self.unit_order // self.target_order


def closure_check(p: int, l: int, m: int, k_max: int = 3) -> ClosureReport:
    """Compare the closure H of O[1/l]^* images with P = {u : Nrd(u) in <l>} in (O/p^m O)^*."""
    if not isprime(l) or l == p:
        raise ValueError("l must be a prime different from p")
    O = make_bpinf(p)
    L = local_units(O, p, m)
    G = L.group
    N = L.modulus
    X = _cyclic_closure(l, N)
    target = frozenset(u for u in G.elements if L.norm(u) in X)

    H = closure(G, sorted(L.reduce(v) for v in norm_elements(O, 1)))
    H = closure(G, [L.scalar(pow(l, -1, N))], base=H)
    growth = [H.order]
    stabilized = None
    for k in range(1, k_max + 1):
        H = closure(G, sorted({L.reduce(v) for v in norm_elements(O, l ** k)}), base=H)
        if stabilized is None and H.order == growth[-1]:
            stabilized = k
        growth.append(H.order)
    contained = H.members <= target
    return ClosureReport(p, l, m, k_max, G.order, len(target), H.order, tuple(growth), stabilized,
                         contained, contained and H.order == len(target), tuple(sorted(X)))


def unit_count(p: int) -> int:
    return len(norm_elements(make_bpinf(p), 1))
