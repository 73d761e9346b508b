"""Sigma-positive units, the invariant g(P, Sigma), S-unit density and witness primes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from sympy import primerange

from .fingroup import (FiniteGroup, abelian_invariants, closure, find_generating_tuple,
                       min_generators, quotient)
from .localunits import LocalUnitQuotient, count_mu_p, unit_quotient
from .quadfield import (Ideal, QuadElt, QuadField, SearchBoundExceeded, SplitKind,
                        class_order, principal_generator, splitting_type, unit_group)

DEFAULT_BOUND = 10**4
BOX_CAP = 4096

DENSE = "dense"
NOT_DENSE = "not-dense"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SigmaSet:
    """A set of real places, 0 for sqrt(d) > 0 and 1 for sqrt(d) < 0."""

    places: frozenset = frozenset()

    @classmethod
    def of(cls, F: QuadField, places: Union[str, Iterable[int], None]) -> "SigmaSet":
        if places is None or places == "none":
            return cls(frozenset())
        if places == "all":
            return cls(frozenset((0, 1)) if F.is_real else frozenset())
        s = cls(frozenset(int(v) for v in places))
        s.check(F)
        return s

    def check(self, F: QuadField) -> None:
        allowed = {0, 1} if F.is_real else set()
        if not self.places <= allowed:
            raise ValueError(f"places {sorted(self.places)} are not real places of {F}")

    def __iter__(self):
        return iter(sorted(self.places))

    def __len__(self):
        return len(self.places)


@dataclass
class SUnitBasis:
    torsion: list
    free: list
    S: list = field(default_factory=list)
    powers: list = field(default_factory=list)  # exponent k with the S generator spanning P^k
    mixed: list = field(default_factory=list)  # (exponent vector, generator) for products of S primes
    lattice_complete: bool = False

    @property
    def generators(self) -> list:
        return list(self.torsion) + list(self.free) + [g for _, g in self.mixed]

    @property
    def complete(self) -> bool:
        """True when the listed elements generate the full Sigma-positive S-unit group."""
        return self.lattice_complete or all(k == 1 for k in self.powers)


@dataclass
class DensityReport:
    status: str
    g: int
    quotient_order: int
    residual_order: int
    residual_invariants: list
    generator_images: list
    complete: bool = True
    basis: Optional[SUnitBasis] = field(default=None, repr=False)
    note: str = ""

    @property
    def dense(self) -> bool:
        return self.status == DENSE


def _as_sigma(F: QuadField, sigma) -> SigmaSet:
    if isinstance(sigma, SigmaSet):
        sigma.check(F)
        return sigma
    return SigmaSet.of(F, sigma)


def _as_prime(F: QuadField, P) -> Ideal:
    if isinstance(P, Ideal):
        return P
    return splitting_type(F, int(P)).ideal


def e_plus(F: QuadField, sigma=()) -> SUnitBasis:
    """Generators of the units positive at every place of sigma."""
    sigma = _as_sigma(F, sigma)
    U = unit_group(F)
    if not F.is_real:
        return SUnitBasis([U.torsion_generator], [])
    eps = U.fundamental
    torsion = [F(-1)] if not sigma.places else []
    for cand in (eps, -eps, eps * eps):
        if cand.is_positive_at(sigma):
            return SUnitBasis(torsion, [cand])
    raise AssertionError("eps^2 is totally positive")


def s_unit_basis(F: QuadField, S: Sequence, sigma=(), box_cap: int = BOX_CAP) -> SUnitBasis:
    """E+ together with sigma-positive generators for the S part.

    Each P in S contributes a generator of its smallest sigma-positive principal
    power P^k.  Valuation vectors of sigma-positive S-units form a lattice
    containing diag(k); when the box prod(range(k_i)) has at most box_cap
    points, every box vector is tested, which yields the whole lattice.
    """
    sigma = _as_sigma(F, sigma)
    base = e_plus(F, sigma)
    primes, powers, free = [], [], list(base.free)
    for P in S:
        P = _as_prime(F, P)
        k, g = class_order(P, sigma)
        primes.append(P)
        powers.append(k)
        free.append(g)
    basis = SUnitBasis(base.torsion, free, primes, powers)
    if len(primes) <= 1:
        # a single prime: the lattice is k*Z by minimality of k
        basis.lattice_complete = True
        return basis
    if math.prod(powers) > box_cap:
        return basis
    for vec in itertools.product(*(range(k) for k in powers)):
        if sum(1 for v in vec if v) < 2:
            continue  # single-prime vectors below k_i are non-principal by minimality
        J = Ideal(F, 1, 0, 1)
        for P, v in zip(primes, vec):
            if v:
                J = J * P ** v
        g = principal_generator(F, J, sigma)
        if g is not None:
            basis.mixed.append((vec, g))
    basis.lattice_complete = True
    return basis


@dataclass
class _Residual:
    Q: LocalUnitQuotient
    images: list
    H: object
    R: FiniteGroup
    proj: dict


def _residual(Q: LocalUnitQuotient, gens: Sequence[QuadElt]) -> _Residual:
    images = [Q.reduce(x) for x in gens]
    H = closure(Q.group, sorted(set(images)))
    R, proj = quotient(Q.group, H)
    return _Residual(Q, images, H, R, proj)


def _prime_quotient(F: QuadField, prime) -> LocalUnitQuotient:
    if isinstance(prime, Ideal):
        return unit_quotient(F, prime)
    return unit_quotient(F, int(prime))


def g_invariant(F: QuadField, prime, sigma=()) -> DensityReport:
    """g(P, Sigma): minimal number of generators of U_P / psi(E+) U_P^(1)^p."""
    sigma = _as_sigma(F, sigma)
    Q = _prime_quotient(F, prime)
    basis = e_plus(F, sigma)
    res = _residual(Q, basis.generators)
    g = min_generators(res.R)
    return DensityReport(DENSE if g == 0 else NOT_DENSE, g, Q.order, res.R.order,
                         abelian_invariants(res.R), res.images, True, basis)


def g_bound(F: QuadField, p: int) -> int:
    """[k_P:Q_p] + 1 if k_P has nontrivial p-power roots of unity."""
    st = splitting_type(F, p)
    return st.local_degree + (1 if count_mu_p(F, p) > 1 else 0)


def is_dense(F: QuadField, S: Sequence, sigma, prime, box_cap: int = BOX_CAP) -> DensityReport:
    """Does the sigma-positive S-unit group (as realized) surject onto U_P / U_P^(1)^p?"""
    sigma = _as_sigma(F, sigma)
    Q = _prime_quotient(F, prime)
    if any(_as_prime(F, P) == Q.P for P in S):
        raise ValueError(f"{Q.P} must not lie in S")
    g = min_generators(_residual(Q, e_plus(F, sigma).generators).R)
    try:
        basis = s_unit_basis(F, S, sigma, box_cap)
    except SearchBoundExceeded as exc:
        return DensityReport(INCONCLUSIVE, g, Q.order, 0, [], [], False, None, str(exc))
    res = _residual(Q, basis.generators)
    whole = res.H.is_whole()
    note = ""
    if whole:
        status = DENSE
    elif basis.complete:
        status = NOT_DENSE
    elif len(basis.S) < g:
        # X_S / E+ embeds in Z^S, so its image needs at most |S| < g generators
        status, note = NOT_DENSE, "rank bound |S| < g"
    else:
        status, note = INCONCLUSIVE, "some prime of S entered through a proper power"
    return DensityReport(status, g, Q.order, res.R.order, abelian_invariants(res.R),
                         res.images, basis.complete, basis, note)


@dataclass
class WitnessResult:
    found: bool
    g: int
    bound: int
    targets: list
    S: list  # matched prime ideals, aligned with targets (None when unmatched)
    generators: list
    report: Optional[DensityReport] = None

    @property
    def unmatched(self) -> list[int]:
        return [i for i, P in enumerate(self.S) if P is None]


def _degree_one_primes(F: QuadField, l: int) -> list[Ideal]:
    st = splitting_type(F, l)
    if st.kind is SplitKind.INERT:
        return []
    return sorted(st.ideals, key=Ideal.sort_key)


def witness_primes(F: QuadField, prime, sigma=(), bound: int = DEFAULT_BOUND,
                   exclusions: Iterable[int] = ()) -> WitnessResult:
    """Find g principal sigma-positive primes whose generators hit a generating tuple of the residual group.

    Scans l <= bound in increasing order, and the degree-one primes above l by HNF.
    """
    if bound < 2:
        raise ValueError("bound must be >= 2")
    sigma = _as_sigma(F, sigma)
    Q = _prime_quotient(F, prime)
    base = _residual(Q, e_plus(F, sigma).generators)
    g = min_generators(base.R)
    targets = list(find_generating_tuple(base.R, g))
    matched: list = [None] * g
    gens: list = [None] * g
    skip = set(exclusions) | {Q.prime.p}
    open_slots = set(range(g))
    if open_slots:
        for l in primerange(2, bound + 1):
            if l in skip:
                continue
            for P in _degree_one_primes(F, l):
                try:
                    x = principal_generator(F, P, sigma)
                except SearchBoundExceeded:
                    continue
                if x is None:
                    continue
                img = base.proj[Q.reduce(x)]
                hit = next((i for i in sorted(open_slots) if targets[i] == img), None)
                if hit is not None:
                    matched[hit], gens[hit] = P, x
                    open_slots.discard(hit)
            if not open_slots:
                break
    result = WitnessResult(not open_slots, g, bound, targets, matched, gens)
    if result.found:
        result.report = is_dense(F, matched, sigma, Q.P)
    return result
