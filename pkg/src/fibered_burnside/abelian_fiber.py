"""Finite abelian fiber groups and homomorphism sets Hom(K, A).

Fiber elements are residue tuples; characters store their values as indices
into the fiber's lexicographic element list, so pointwise products and
comparisons are integer-table lookups.
"""

from __future__ import annotations

import itertools
from math import prod
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainMismatch
from .group_core import FiniteGroup, Subgroup, abelianization, conjugate_members


class AbelianFiber:
    """A finite abelian group given as a tuple of cyclic orders.

    Elements are residue tuples, enumerated lexicographically; the all-zeros
    tuple (index 0) is the identity.
    """

    def __init__(self, factors: Sequence[int]):
        factors = tuple(int(d) for d in factors)
        if not factors or any(d < 1 for d in factors):
            raise ValueError("fiber factors must be positive integers")
        self.factors = factors
        self.order = prod(factors)
        self.elements: list[tuple[int, ...]] = list(
            itertools.product(*(range(d) for d in factors)))
        self.index = {e: i for i, e in enumerate(self.elements)}
        coords = np.array(self.elements, dtype=np.int64).reshape(
            self.order, len(factors))
        mods = np.array(factors, dtype=np.int64)
        sums = (coords[:, None, :] + coords[None, :, :]) % mods
        self.add_table = self._encode(sums)
        self.neg_table = self._encode((-coords) % mods)
        self._order_of = np.empty(self.order, dtype=np.int64)
        for i, e in enumerate(self.elements):
            self._order_of[i] = _tuple_order(e, factors)

    def _encode(self, coords: np.ndarray) -> np.ndarray:
        weights = np.ones(len(self.factors), dtype=np.int64)
        for i in range(len(self.factors) - 2, -1, -1):
            weights[i] = weights[i + 1] * self.factors[i + 1]
        return (coords * weights).sum(axis=-1)

    @classmethod
    def parse(cls, text: str) -> "AbelianFiber":
        """Parse a comma list of cyclic orders, e.g. "5" or "2,4"."""
        try:
            factors = [int(part) for part in text.split(",")]
        except ValueError as exc:
            raise ValueError(f"bad fiber spec {text!r}") from exc
        return cls(factors)

    def add(self, i: int, j: int) -> int:
        return int(self.add_table[i, j])

    def neg(self, i: int) -> int:
        return int(self.neg_table[i])

    def scale(self, k: int, i: int) -> int:
        e = self.elements[i]
        return self.index[tuple((k * x) % d for x, d in zip(e, self.factors))]

    def element_order(self, i: int) -> int:
        return int(self._order_of[i])

    def torsion_indices(self, n: int) -> list[int]:
        if n < 1:
            raise ValueError("torsion exponent must be positive")
        return [i for i in range(self.order) if self.scale(n, i) == 0]

    def torsion_elements(self, n: int) -> list[tuple[int, ...]]:
        """All a with n*a = 0, in lexicographic order."""
        return [self.elements[i] for i in self.torsion_indices(n)]

    def has_trivial_torsion(self, n: int) -> bool:
        return len(self.torsion_indices(n)) == 1

    def __repr__(self) -> str:
        return f"AbelianFiber{self.factors}"


def _tuple_order(e: tuple[int, ...], factors: tuple[int, ...]) -> int:
    from math import gcd
    o = 1
    for x, d in zip(e, factors):
        if x:
            o = o * (d // gcd(x, d)) // gcd(o, d // gcd(x, d))
    return o


class Character:
    """A homomorphism from a subgroup K into the fiber.

    ``values[i]`` is the fiber element index of the image of the i-th member
    of K (members sorted ascending).
    """

    __slots__ = ("domain", "fiber", "values", "_hash")

    def __init__(self, domain: Subgroup, fiber: AbelianFiber,
                 values: Sequence[int], *, verify: bool = True):
        values = tuple(int(v) for v in values)
        if len(values) != domain.order:
            raise ValueError("need one value per domain member")
        self.domain = domain
        self.fiber = fiber
        self.values = values
        self._hash = hash((id(domain.group), domain.members, fiber.factors,
                           values))
        if verify:
            self._verify()

    def _verify(self) -> None:
        if self.values[self.domain.position(0)] != 0:
            raise ValueError("character must send the identity to 0")
        group = self.domain.group
        mem = np.asarray(self.domain.members, dtype=np.int64)
        pos = np.full(group.order, -1, dtype=np.int64)
        pos[mem] = np.arange(mem.size)
        vals = np.asarray(self.values, dtype=np.int64)
        prod_pos = pos[group.mul[np.ix_(mem, mem)]]
        if prod_pos.min() < 0:
            raise ValueError("domain is not closed")
        lhs = vals[prod_pos]
        rhs = self.fiber.add_table[np.ix_(vals, vals)]
        if not np.array_equal(lhs, rhs):
            raise ValueError("value map is not a homomorphism")

    def value_index(self, g: int) -> int:
        return self.values[self.domain.position(g)]

    def value(self, g: int) -> tuple[int, ...]:
        return self.fiber.elements[self.value_index(g)]

    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.values)

    def __mul__(self, other: "Character") -> "Character":
        if (self.domain != other.domain
                or self.fiber.factors != other.fiber.factors):
            raise DomainMismatch("characters live on different domains")
        vals = self.fiber.add_table[np.asarray(self.values),
                                    np.asarray(other.values)]
        return Character(self.domain, self.fiber, vals, verify=False)

    def inverse(self) -> "Character":
        vals = self.fiber.neg_table[np.asarray(self.values)]
        return Character(self.domain, self.fiber, vals, verify=False)

    def restrict(self, sub: Subgroup) -> "Character":
        if not sub.is_subset_of(self.domain):
            raise DomainMismatch("restriction target is not a subgroup of the domain")
        vals = [self.value_index(m) for m in sub.members]
        return Character(sub, self.fiber, vals, verify=False)

    def conjugate(self, g: int) -> "Character":
        """The conjugate character on ^gK, x -> value(g^-1 x g)."""
        group = self.domain.group
        new_members = conjugate_members(group, g, self.domain.members)
        new_domain = Subgroup(group, new_members, verify=False)
        ginv = group.inverse(g)
        vals = [self.value_index(int(group.conj[ginv, x])) for x in new_members]
        return Character(new_domain, self.fiber, vals, verify=False)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Character)
                and self.domain == other.domain
                and self.fiber.factors == other.fiber.factors
                and self.values == other.values)

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Character(domain={self.domain.members}, values={self.values})"


def trivial_character(domain: Subgroup, fiber: AbelianFiber) -> Character:
    return Character(domain, fiber, [0] * domain.order, verify=False)


def hom_set(domain: Subgroup, fiber: AbelianFiber) -> list[Character]:
    """Every homomorphism K -> A, in a deterministic order.

    K is abelianized; a homomorphism is a choice of one d-torsion image per
    invariant factor C_d. The order is lexicographic in that image tuple.
    """
    key = ("hom", fiber.factors)
    cached = domain._hom_cache.get(key)
    if cached is not None:
        return list(cached)
    dec = abelianization(domain)
    candidate_lists = [fiber.torsion_indices(d) for d in dec.factors]
    homs = []
    for images in itertools.product(*candidate_lists):
        vals = []
        for m in domain.members:
            expo = dec.coords[m]
            acc = 0
            for k, img in zip(expo, images):
                acc = fiber.add(acc, fiber.scale(k, img))
            vals.append(acc)
        homs.append(Character(domain, fiber, vals))
    domain._hom_cache[key] = homs
    return list(homs)


def char_mul(a: Character, b: Character) -> Character:
    return a * b


def char_restrict(a: Character, sub: Subgroup) -> Character:
    return a.restrict(sub)


def char_conjugate(g: int, a: Character) -> Character:
    return a.conjugate(g)


__all__ = [
    "AbelianFiber", "Character", "trivial_character", "hom_set",
    "char_mul", "char_restrict", "char_conjugate",
]
