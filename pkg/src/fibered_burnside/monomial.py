"""Monomial pairs, the orbit basis of the fibered Burnside ring, gamma
coefficients, the reduced ghost ring, and the mark morphism.

The basis is ordered by subgroup class (class-table order), then by the
character value vector of each orbit representative. All coefficients are
exact Python integers.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .abelian_fiber import AbelianFiber, Character, hom_set, trivial_character
from .errors import ComponentMismatch
from .group_core import (FiniteGroup, Subgroup, SubgroupClassTable,
                         _left_coset_data, conjugacy_classes_of_subgroups,
                         double_coset_reps, normalizer)


@dataclass(frozen=True)
class MonomialPair:
    """A subgroup together with a character on it."""

    subgroup: Subgroup
    char: Character

    def __post_init__(self):
        if self.char.domain != self.subgroup:
            raise ValueError("character domain must equal the subgroup")

    def conjugate(self, g: int) -> "MonomialPair":
        chi = self.char.conjugate(g)
        return MonomialPair(chi.domain, chi)

    def key(self):
        return (self.subgroup.members, self.char.values)


def gamma_coefficient(pair_k: MonomialPair, pair_l: MonomialPair) -> int:
    """Number of cosets sL whose conjugated pair lies above (K, phi).

    Counts s with K <= sLs^-1 and the conjugate of psi restricting to phi
    on K. Both pairs must live over the same group and fiber.
    """
    group = pair_k.subgroup.group
    if pair_l.subgroup.group is not group:
        raise ValueError("pairs live over different groups")
    k_sub, phi = pair_k.subgroup, pair_k.char
    l_sub, psi = pair_l.subgroup, pair_l.char
    reps, masks = _left_coset_data(group, l_sub)
    gens = k_sub.generators()
    kmask = k_sub.mask
    conj = group.conj
    inv = group.inv
    count = 0
    for s, lmask in zip(reps, masks):
        if kmask & lmask != kmask:
            continue
        sinv = int(inv[s])
        # (^s psi)(x) = psi(s^-1 x s); agreement on generators of K suffices.
        if all(psi.value_index(int(conj[sinv, k])) == phi.value_index(k)
               for k in gens):
            count += 1
    return count


class MonomialBasis:
    """Orbit representatives of monomial pairs, with canonical lookup."""

    def __init__(self, group: FiniteGroup, fiber: AbelianFiber,
                 class_table: Optional[SubgroupClassTable] = None):
        if class_table is None:
            class_table = conjugacy_classes_of_subgroups(group)
        self.group = group
        self.fiber = fiber
        self.class_table = class_table
        self.reps: list[MonomialPair] = []
        self.stabilizers: list[Subgroup] = []
        self.rep_class: list[int] = []          # basis index -> class index
        self.rep_hom_index: list[int] = []      # basis index -> index in hom_set
        self.class_homs: list[list[Character]] = []
        self.class_block: list[tuple[int, int]] = []
        # per class: hom index -> basis index of its orbit representative
        self._char_to_basis: list[list[int]] = []
        self._canon_cache: dict = {}
        self._product_cache: dict = {}
        self._ghost_image_cache: dict = {}
        for ci, k_sub in enumerate(class_table.reps):
            homs = hom_set(k_sub, fiber)
            self.class_homs.append(homs)
            norm = normalizer(group, k_sub)
            perms = _normalizer_char_action(k_sub, homs, norm)
            n_h = len(homs)
            orbit_rep = list(range(n_h))
            # union-find style sweep over the full normalizer action
            for perm in perms.values():
                for i in range(n_h):
                    j = perm[i]
                    a, b = _find(orbit_rep, i), _find(orbit_rep, j)
                    if a != b:
                        orbit_rep[max(a, b)] = min(a, b)
            roots = sorted({_find(orbit_rep, i) for i in range(n_h)},
                           key=lambda r: homs[r].values)
            start = len(self.reps)
            basis_of_root: dict[int, int] = {}
            for r in roots:
                basis_of_root[r] = len(self.reps)
                chi = homs[r]
                stab_members = [n for n, perm in perms.items() if perm[r] == r]
                self.reps.append(MonomialPair(k_sub, chi))
                self.stabilizers.append(
                    Subgroup(group, stab_members, verify=False))
                self.rep_class.append(ci)
                self.rep_hom_index.append(r)
            self._char_to_basis.append(
                [basis_of_root[_find(orbit_rep, i)] for i in range(n_h)])
            self.class_block.append((start, len(self.reps)))
        self.size = len(self.reps)

    def hom_index(self, ci: int, char: Character) -> int:
        homs = self.class_homs[ci]
        for i, h in enumerate(homs):
            if h.values == char.values:
                return i
        raise KeyError("character not in hom set")

    def canonical_index(self, pair: MonomialPair) -> int:
        """Basis index of the orbit of an arbitrary monomial pair."""
        key = pair.key()
        cached = self._canon_cache.get(key)
        if cached is not None:
            return cached
        ci = self.class_table.class_of(pair.subgroup)
        g = self.class_table.transporter_to_rep(pair.subgroup)
        chi = pair.char if g == 0 else pair.char.conjugate(g)
        hi = self.hom_index(ci, chi)
        idx = self._char_to_basis[ci][hi]
        self._canon_cache[key] = idx
        return idx

    # -- ring structure

    def basis_element(self, i: int) -> "BurnsideElement":
        coeffs = [0] * self.size
        coeffs[i] = 1
        return BurnsideElement(self, coeffs)

    def identity_index(self) -> int:
        full = self.class_table.class_of(
            Subgroup(self.group, range(self.group.order), verify=False))
        homs = self.class_homs[full]
        for hi in range(len(homs)):
            if homs[hi].is_trivial():
                return self._char_to_basis[full][hi]
        raise AssertionError("trivial character missing")

    def identity_element(self) -> "BurnsideElement":
        return self.basis_element(self.identity_index())

    def product(self, i: int, j: int) -> list[tuple[int, int]]:
        """Structure constants of reps[i] * reps[j] as (index, coeff) pairs."""
        cached = self._product_cache.get((i, j))
        if cached is not None:
            return cached
        group, fiber = self.group, self.fiber
        k_sub, phi = self.reps[i].subgroup, self.reps[i].char
        l_sub, psi = self.reps[j].subgroup, self.reps[j].char
        conj, inv = group.conj, group.inv
        out: Counter = Counter()
        for s in double_coset_reps(group, k_sub, l_sub):
            smask = 0
            for m in l_sub.members:
                smask |= 1 << int(conj[s, m])
            inter = [m for m in k_sub.members if (smask >> m) & 1]
            m_sub = Subgroup(group, inter, verify=False)
            sinv = int(inv[s])
            vals = [fiber.add(phi.value_index(m),
                              psi.value_index(int(conj[sinv, m])))
                    for m in inter]
            chi = Character(m_sub, fiber, vals, verify=False)
            out[self.canonical_index(MonomialPair(m_sub, chi))] += 1
        result = sorted(out.items())
        self._product_cache[(i, j)] = result
        return result

    def to_json(self) -> dict:
        return {
            "fiber": list(self.fiber.factors),
            "pairs": [
                {"subgroup": list(p.subgroup.members),
                 "character": [list(p.char.value(m))
                               for m in p.subgroup.members]}
                for p in self.reps
            ],
        }


def _find(parent: list[int], i: int) -> int:
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def _normalizer_char_action(k_sub: Subgroup, homs: Sequence[Character],
                            norm: Subgroup) -> dict[int, list[int]]:
    """For each n in the normalizer, the permutation of hom-set indices."""
    group = k_sub.group
    mem = np.asarray(k_sub.members, dtype=np.int64)
    pos = np.full(group.order, -1, dtype=np.int64)
    pos[mem] = np.arange(mem.size)
    vals = np.asarray([h.values for h in homs], dtype=np.int64)
    lookup = {h.values: i for i, h in enumerate(homs)}
    perms: dict[int, list[int]] = {}
    for n in norm.members:
        ninv = group.inverse(n)
        perm_pos = pos[group.conj[ninv, mem]]
        permuted = vals[:, perm_pos]
        perms[n] = [lookup[tuple(int(v) for v in row)] for row in permuted]
    return perms


def monomial_basis(group: FiniteGroup, fiber: AbelianFiber,
                   class_table: Optional[SubgroupClassTable] = None
                   ) -> MonomialBasis:
    return MonomialBasis(group, fiber, class_table)


def all_monomial_pairs(group: FiniteGroup,
                       fiber: AbelianFiber) -> list[MonomialPair]:
    """Every monomial pair (not just orbit representatives)."""
    from .group_core import enumerate_subgroups
    pairs = []
    for sub in enumerate_subgroups(group):
        for chi in hom_set(sub, fiber):
            pairs.append(MonomialPair(sub, chi))
    return pairs


def gamma_table(basis: MonomialBasis) -> list[list[int]]:
    return [[gamma_coefficient(pk, pl) for pl in basis.reps]
            for pk in basis.reps]


# ---------------------------------------------------------------------------
# Ring elements


class BurnsideElement:
    """Integer vector over the monomial orbit basis."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: MonomialBasis, coeffs: Sequence[int]):
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) != basis.size:
            raise ValueError("coefficient vector has the wrong length")
        self.basis = basis
        self.coeffs = coeffs

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        return BurnsideElement(self.basis,
                               [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        self._check(other)
        return BurnsideElement(self.basis,
                               [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def _check(self, other: "BurnsideElement") -> None:
        if self.basis is not other.basis:
            raise ComponentMismatch("elements over different bases")

    def __eq__(self, other) -> bool:
        return (isinstance(other, BurnsideElement)
                and self.basis is other.basis and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((id(self.basis), tuple(self.coeffs)))

    def __repr__(self) -> str:
        return f"BurnsideElement({self.coeffs})"


def multiply(x: BurnsideElement, y: BurnsideElement) -> BurnsideElement:
    """Bilinear extension of the double-coset product of basis orbits."""
    if x.basis is not y.basis:
        raise ComponentMismatch("elements over different bases")
    basis = x.basis
    out = [0] * basis.size
    for i, a in enumerate(x.coeffs):
        if not a:
            continue
        for j, b in enumerate(y.coeffs):
            if not b:
                continue
            for idx, c in basis.product(i, j):
                out[idx] += a * b * c
    return BurnsideElement(basis, out)


# ---------------------------------------------------------------------------
# Ghost ring


class GhostRing:
    """Product over subgroup classes of the group rings of Hom(K, A),
    restricted (by construction of its elements) to normalizer-fixed points."""

    def __init__(self, basis: MonomialBasis):
        self.basis = basis
        self.class_homs = basis.class_homs
        self.trivial_index: list[int] = []
        self.mul_tables: list[np.ndarray] = []
        for homs in self.class_homs:
            lookup = {h.values: i for i, h in enumerate(homs)}
            n_h = len(homs)
            table = np.empty((n_h, n_h), dtype=np.int64)
            for i in range(n_h):
                for j in range(n_h):
                    table[i, j] = lookup[(homs[i] * homs[j]).values]
            self.mul_tables.append(table)
            self.trivial_index.append(
                next(i for i, h in enumerate(homs) if h.is_trivial()))

    def zero(self) -> "GhostElement":
        return GhostElement(self, [[0] * len(h) for h in self.class_homs])

    def identity(self) -> "GhostElement":
        comps = [[0] * len(h) for h in self.class_homs]
        for ci, ti in enumerate(self.trivial_index):
            comps[ci][ti] = 1
        return GhostElement(self, comps)


class GhostElement:
    """Per subgroup class, an integer vector over Hom(K, A)."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring: GhostRing, comps: Sequence[Sequence[int]]):
        comps = [[int(c) for c in comp] for comp in comps]
        if len(comps) != len(ring.class_homs) or any(
                len(comp) != len(h) for comp, h in zip(comps, ring.class_homs)):
            raise ComponentMismatch("component shapes do not match the ring")
        self.ring = ring
        self.comps = comps

    def __add__(self, other: "GhostElement") -> "GhostElement":
        if other.ring is not self.ring:
            raise ComponentMismatch("ghost elements over different rings")
        return GhostElement(self.ring,
                            [[a + b for a, b in zip(x, y)]
                             for x, y in zip(self.comps, other.comps)])

    def scaled(self, c: int) -> "GhostElement":
        return GhostElement(self.ring,
                            [[c * a for a in comp] for comp in self.comps])

    def is_orbit_closed(self) -> bool:
        """Each component constant on normalizer orbits of characters."""
        basis = self.ring.basis
        for ci, comp in enumerate(self.comps):
            orbit_of = basis._char_to_basis[ci]
            seen: dict[int, int] = {}
            for hi, c in enumerate(comp):
                root = orbit_of[hi]
                if root in seen:
                    if seen[root] != c:
                        return False
                else:
                    seen[root] = c
        return True

    def __eq__(self, other) -> bool:
        return (isinstance(other, GhostElement)
                and self.ring is other.ring and self.comps == other.comps)

    def __hash__(self):
        return hash((id(self.ring), tuple(tuple(c) for c in self.comps)))

    def __repr__(self) -> str:
        return f"GhostElement({self.comps})"


def ghost_multiply(a: GhostElement, b: GhostElement) -> GhostElement:
    """Componentwise group-ring convolution."""
    if a.ring is not b.ring:
        raise ComponentMismatch("ghost elements over different rings")
    ring = a.ring
    out = []
    for table, x, y in zip(ring.mul_tables, a.comps, b.comps):
        comp = [0] * len(x)
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                if not yj:
                    continue
                comp[int(table[i, j])] += xi * yj
        out.append(comp)
    return GhostElement(ring, out)


def ghost_ring(basis: MonomialBasis) -> GhostRing:
    cached = basis._ghost_image_cache.get("ring")
    if cached is None:
        cached = GhostRing(basis)
        basis._ghost_image_cache["ring"] = cached
    return cached


def mark_morphism(basis: MonomialBasis, x: BurnsideElement) -> GhostElement:
    """Image of x under the mark morphism into the reduced ghost ring.

    The K-component of the image of a basis orbit [L, psi] is the vector of
    gamma coefficients over Hom(K, A), extended linearly.
    """
    if x.basis is not basis:
        raise ComponentMismatch("element over a different basis")
    ring = ghost_ring(basis)
    result = ring.zero()
    for j, c in enumerate(x.coeffs):
        if not c:
            continue
        img = basis._ghost_image_cache.get(j)
        if img is None:
            pl = basis.reps[j]
            comps = []
            for ci, homs in enumerate(basis.class_homs):
                k_sub = basis.class_table.reps[ci]
                comps.append([gamma_coefficient(MonomialPair(k_sub, phi), pl)
                              for phi in homs])
            img = GhostElement(ring, comps)
            basis._ghost_image_cache[j] = img
        result = result + img.scaled(c)
    return result


# ---------------------------------------------------------------------------
# Exact linear algebra helper


def integer_matrix_determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    m = [[int(v) for v in row] for row in rows]
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            pivot = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if pivot is None:
                return 0
            m[k], m[pivot] = m[pivot], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


__all__ = [
    "MonomialPair", "MonomialBasis", "BurnsideElement", "GhostRing",
    "GhostElement", "monomial_basis", "all_monomial_pairs",
    "gamma_coefficient", "gamma_table", "multiply", "mark_morphism",
    "ghost_multiply", "ghost_ring", "trivial_character",
    "integer_matrix_determinant",
]
