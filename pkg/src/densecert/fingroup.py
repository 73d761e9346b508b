"""Explicitly enumerated finite groups: closure, index, quotients, generator counts."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Optional, Sequence

from sympy import factorint

SIZE_CAP = 10**7
FULL_ABELIAN_CHECK = 10**4


class ClosureCapExceeded(RuntimeError):
    pass


class NotAbelian(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its full element set.

    Elements are hashable canonical encodings supplied by the caller; two
    elements are equal iff their encodings are equal.
    """

    elements: frozenset
    op: Callable[[Hashable, Hashable], Hashable]
    identity: Hashable
    inverse: Callable[[Hashable], Hashable]
    abelian: Optional[bool] = None
    name: str = ""

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.elements

    def power(self, x, k: int):
        if k < 0:
            x, k = self.inverse(x), -k
        result = self.identity
        while k:
            if k & 1:
                result = self.op(result, x)
            x = self.op(x, x)
            k >>= 1
        return result

    def element_order(self, x) -> int:
        n, y = 1, x
        while y != self.identity:
            y = self.op(y, x)
            n += 1
        return n

    def sorted_elements(self) -> list:
        return sorted(self.elements)

    def is_abelian(self, samples: int = 2000, seed: int = 0) -> bool:
        if self.abelian is not None:
            return self.abelian
        els = self.sorted_elements()
        if len(els) <= FULL_ABELIAN_CHECK:
            # commuting with a generating set would do, but the full check is cheap here
            gens = _some_generators(self, els)
            return all(self.op(g, x) == self.op(x, g) for g in gens for x in els)
        rng = random.Random(seed)
        return all(self.op(x, y) == self.op(y, x)
                   for x, y in ((rng.choice(els), rng.choice(els)) for _ in range(samples)))

    def check_axioms(self, samples: int = 200, seed: int = 0) -> None:
        """Closure, identity and inverse on every element; associativity on random triples."""
        els = self.sorted_elements()
        for x in els:
            if self.op(x, self.identity) != x or self.op(self.identity, x) != x:
                raise AssertionError(f"identity law fails at {x!r}")
            if self.op(x, self.inverse(x)) != self.identity:
                raise AssertionError(f"inverse law fails at {x!r}")
        rng = random.Random(seed)
        for _ in range(samples):
            x, y, z = (rng.choice(els) for _ in range(3))
            xy = self.op(x, y)
            if xy not in self.elements:
                raise AssertionError("not closed")
            if self.op(xy, z) != self.op(x, self.op(y, z)):
                raise AssertionError("not associative")


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: FiniteGroup
    members: frozenset
    gens: tuple = field(default=())

    @property
    def order(self) -> int:
        return len(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, x):
        return x in self.members

    def __eq__(self, other):
        if isinstance(other, Subgroup):
            return self.members == other.members
        return NotImplemented

    def __hash__(self):
        return hash(self.members)

    def is_whole(self) -> bool:
        return len(self.members) == self.parent.order


def _some_generators(G: FiniteGroup, els: Sequence) -> list:
    gens, H = [], trivial_subgroup(G)
    for x in els:
        if x not in H:
            H = closure(G, [x], base=H)
            gens.append(x)
            if H.is_whole():
                break
    return gens


def trivial_subgroup(G: FiniteGroup) -> Subgroup:
    return Subgroup(G, frozenset([G.identity]), ())


def closure(G: FiniteGroup, gens: Iterable, base: Optional[Subgroup] = None,
            cap: int = SIZE_CAP) -> Subgroup:
    """Smallest subgroup containing gens (and base), by Dimino's coset method."""
    H = base if base is not None else trivial_subgroup(G)
    members = set(H.members)
    used = list(H.gens)
    if not used and len(members) > 1:
        # coset bookkeeping needs generators of the base; its members will do
        used = sorted(members)
    op = G.op
    for g in gens:
        if g in members:
            continue
        if g not in G.elements:
            raise ValueError(f"{g!r} is not an element of the group")
        used.append(g)
        old = list(members)
        reps = [G.identity]
        members_new = set(members)

        def add_coset(x):
            for h in old:
                members_new.add(op(h, x))
            reps.append(x)
            if len(members_new) > cap:
                raise ClosureCapExceeded(f"subgroup exceeds {cap} elements")

        add_coset(g)
        i = 0
        while i < len(reps):
            r = reps[i]
            for s in used:
                x = op(r, s)
                if x not in members_new:
                    add_coset(x)
            i += 1
        members = members_new
    return Subgroup(G, frozenset(members), tuple(used))


def index(G: FiniteGroup, H: Subgroup) -> int:
    if G.order % H.order:
        raise ValueError("subgroup order does not divide group order")
    return G.order // H.order


def quotient(G: FiniteGroup, H: Subgroup) -> tuple[FiniteGroup, dict]:
    """G/H for normal H (always the case here: abelian G), with the projection map.

    Cosets are represented by their smallest member.
    """
    rep = {}
    hs = list(H.members)
    for g in G.sorted_elements():
        if g in rep:
            continue
        for h in hs:
            rep[G.op(g, h)] = g
    reps = frozenset(rep.values())
    Q = FiniteGroup(
        elements=reps,
        op=lambda x, y: rep[G.op(x, y)],
        identity=rep[G.identity],
        inverse=lambda x: rep[G.inverse(x)],
        abelian=G.abelian,
        name=f"{G.name}/H" if G.name else "",
    )
    return Q, rep


def _require_abelian(G: FiniteGroup) -> None:
    if not G.is_abelian():
        raise NotAbelian("group is not abelian")


def q_rank(G: FiniteGroup, q: int) -> int:
    """log_q |G / G^q| for a finite abelian group G."""
    images = {G.power(x, q) for x in G.elements}
    size, k = G.order // len(images), 0
    while size > 1:
        if size % q:
            raise ArithmeticError("|G/G^q| is not a power of q; group not abelian?")
        size //= q
        k += 1
    return k


def min_generators(G: FiniteGroup) -> int:
    """Minimal number of generators of a finite abelian group."""
    _require_abelian(G)
    return max((q_rank(G, q) for q in factorint(G.order)), default=0)


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group (empty if trivial)."""
    _require_abelian(G)
    elementary: dict[int, list[int]] = {}
    for q, e in factorint(G.order).items():
        # |G[q^k]| = q^{sum_i min(k, a_i)} determines the partition (a_i)
        counts = [1]
        for k in range(1, e + 1):
            qk = q ** k
            counts.append(sum(1 for x in G.elements if G.power(x, qk) == G.identity))
        logs = [round(_log(c, q)) for c in counts]
        at_least = [logs[k] - logs[k - 1] for k in range(1, e + 1)]  # #{i: a_i >= k}
        at_least.append(0)
        parts = []
        for k in range(1, e + 1):
            parts += [k] * (at_least[k - 1] - at_least[k])
        elementary[q] = sorted(parts, reverse=True)
    width = max((len(v) for v in elementary.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for q, parts in elementary.items():
            if i < len(parts):
                d *= q ** parts[i]
        factors.append(d)
    return sorted(factors)


def _log(n: int, q: int) -> int:
    k = 0
    while n > 1:
        n //= q
        k += 1
    return k


def find_generating_tuple(G: FiniteGroup, size: int) -> tuple:
    """Lexicographically first tuple of `size` elements generating G."""
    els = [x for x in G.sorted_elements() if x != G.identity]
    if size == 0:
        if G.order == 1:
            return ()
        raise ValueError("nontrivial group needs generators")
    for combo in itertools.combinations(els, size):
        if closure(G, combo).is_whole():
            return combo
    raise ValueError(f"no generating {size}-tuple")


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(frozenset(range(n)), lambda x, y: (x + y) % n, 0,
                       lambda x: (-x) % n, abelian=True, name=f"Z/{n}")


def units_mod(n: int) -> FiniteGroup:
    from math import gcd
    els = frozenset(x for x in range(1, n) if gcd(x, n) == 1) if n > 1 else frozenset([0])
    return FiniteGroup(els, lambda x, y: x * y % n, 1 % n, lambda x: pow(x, -1, n) if n > 1 else 0,
                       abelian=True, name=f"(Z/{n})^*")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    els = frozenset((x, y) for x in G.elements for y in H.elements)
    ab = None if G.abelian is None or H.abelian is None else (G.abelian and H.abelian)
    return FiniteGroup(els, lambda u, v: (G.op(u[0], v[0]), H.op(u[1], v[1])),
                       (G.identity, H.identity), lambda u: (G.inverse(u[0]), H.inverse(u[1])),
                       abelian=ab, name=f"{G.name} x {H.name}")
