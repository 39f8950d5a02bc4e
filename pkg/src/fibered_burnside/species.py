"""Verification and search of species isomorphisms between fibered
Burnside rings, via matching of gamma tables over class transversals.

A witness consists of a bijection of subgroup-class transversals together
with, per class, a bijection of the character groups Hom(K, A). The search
restricts the character bijections to group isomorphisms (the constructive
sufficient criterion); see ``EXHAUSTION_CAVEAT`` for what a failed search
does and does not rule out.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .abelian_fiber import AbelianFiber, Character, hom_set
from .errors import (FiberHasPTorsion, InvalidSpec, NotABijection,
                     NotAGroupIso, SearchBudgetExceeded)
from .group_core import (FiniteGroup, Subgroup, abelian_invariant_decomposition,
                         conjugacy_classes_of_subgroups)
from .monomial import MonomialBasis, MonomialPair, gamma_coefficient
from .thevenaz import ThevenazGroup, canonical_class_reps

EXHAUSTION_CAVEAT = (
    "A failed search only rules out witnesses whose character maps are all "
    "group isomorphisms of the character groups. Whether every species "
    "isomorphism must be of this form is an open question, so exhaustion "
    "does not certify that no species isomorphism exists."
)


@dataclass
class SpeciesWitness:
    """Candidate data for a species isomorphism.

    ``subgroup_map[i]`` is the index into ``h_reps`` of the image of
    ``g_reps[i]``; ``char_maps[i][a]`` is the index in the image class's hom
    set of the image of the a-th character of class i.
    """

    g_reps: list[Subgroup]
    h_reps: list[Subgroup]
    subgroup_map: list[int]
    char_maps: list[list[int]]
    is_group_iso: list[bool] = field(default_factory=list)

    def __post_init__(self):
        if not self.is_group_iso:
            self.is_group_iso = [True] * len(self.subgroup_map)

    def to_json(self) -> dict:
        return {"subgroup_map": list(self.subgroup_map),
                "char_maps": [list(m) for m in self.char_maps]}

    @classmethod
    def from_json(cls, data: dict, g_reps: Sequence[Subgroup],
                  h_reps: Sequence[Subgroup]) -> "SpeciesWitness":
        return cls(list(g_reps), list(h_reps),
                   [int(v) for v in data["subgroup_map"]],
                   [[int(v) for v in row] for row in data["char_maps"]])


@dataclass
class SpeciesVerdict:
    valid: bool
    counterexample: Optional[dict] = None
    basis_bijection: Optional[list[tuple[int, int]]] = None

    def to_json(self) -> dict:
        out: dict = {"valid": self.valid}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        if self.basis_bijection is not None:
            out["basis_bijection"] = [list(p) for p in self.basis_bijection]
        return out


# ---------------------------------------------------------------------------
# Character group structure


def _char_group_table(homs: Sequence[Character]) -> list[list[int]]:
    lookup = {h.values: i for i, h in enumerate(homs)}
    return [[lookup[(hi * hj).values] for hj in homs] for hi in homs]


def _char_group_data(homs: Sequence[Character]):
    """(product table, identity index, invariant decomposition)."""
    table = _char_group_table(homs)
    ident = next(i for i, h in enumerate(homs) if h.is_trivial())
    dec = abelian_invariant_decomposition(
        list(range(len(homs))), lambda a, b: table[a][b], ident)
    return table, ident, dec


def _element_orders_from_table(table, ident) -> list[int]:
    orders = []
    for e in range(len(table)):
        k, cur = 1, e
        while cur != ident:
            cur = table[cur][e]
            k += 1
        orders.append(k)
    return orders


def char_group_isomorphisms(homs1: Sequence[Character],
                            homs2: Sequence[Character]) -> Iterator[list[int]]:
    """All group isomorphisms Hom(K, A) -> Hom(K', A), as index maps.

    Deterministic order: candidates for each generator image ascend by
    hom-set index."""
    if len(homs1) != len(homs2):
        return
    table1, id1, dec1 = _char_group_data(homs1)
    table2, id2, dec2 = _char_group_data(homs2)
    if dec1.factors != dec2.factors:
        return
    n = len(homs1)
    gens1 = []
    for i, d in enumerate(dec1.factors):
        unit = tuple(1 if k == i else 0 for k in range(len(dec1.factors)))
        gens1.append(next(e for e, c in dec1.coords.items() if c == unit))
    orders2 = _element_orders_from_table(table2, id2)
    candidate_lists = [[e for e in range(n) if orders2[e] == d]
                       for d in dec1.factors]
    for images in itertools.product(*candidate_lists):
        mapping = [0] * n
        for e in range(n):
            expo = dec1.coords[e]
            img = id2
            for k, g_img in zip(expo, images):
                for _ in range(k):
                    img = table2[img][g_img]
            mapping[e] = img
        if len(set(mapping)) == n:
            yield mapping


def _is_char_group_iso(homs1, homs2, mapping: Sequence[int]) -> bool:
    table1 = _char_group_table(homs1)
    table2 = _char_group_table(homs2)
    n = len(homs1)
    for a in range(n):
        for b in range(n):
            if mapping[table1[a][b]] != table2[mapping[a]][mapping[b]]:
                return False
    return True


# ---------------------------------------------------------------------------
# Verification


def verify_species(g: FiniteGroup, h: FiniteGroup, fiber: AbelianFiber,
                   witness: SpeciesWitness,
                   *, check_structure: bool = True) -> SpeciesVerdict:
    """Check the gamma-matching condition of a witness on all quadruples.

    On success the induced basis bijection is materialized and, when
    ``check_structure`` is set, re-verified to transport all structure
    constants of the double-coset product (independent end-to-end oracle).
    """
    k = len(witness.g_reps)
    if len(witness.h_reps) != k or len(witness.subgroup_map) != k:
        raise NotABijection("subgroup map must cover all classes")
    if sorted(witness.subgroup_map) != list(range(k)):
        raise NotABijection("subgroup map is not a bijection of classes")
    homs_g = [hom_set(s, fiber) for s in witness.g_reps]
    homs_h = [hom_set(s, fiber) for s in witness.h_reps]
    for ci in range(k):
        cj = witness.subgroup_map[ci]
        cmap = witness.char_maps[ci]
        if (len(cmap) != len(homs_g[ci])
                or sorted(cmap) != list(range(len(homs_h[cj])))):
            raise NotABijection(f"character map of class {ci} is not a bijection")
        if not witness.is_group_iso[ci]:
            raise NotAGroupIso(
                f"character map of class {ci} must be flagged as a group "
                "isomorphism")
        if not _is_char_group_iso(homs_g[ci], homs_h[cj], cmap):
            raise NotAGroupIso(
                f"character map of class {ci} does not preserve products")
    for ci in range(k):
        for cj in range(k):
            bad = _gamma_mismatch(witness, homs_g, homs_h, ci, cj)
            if bad is not None:
                return SpeciesVerdict(False, counterexample=bad)
    bijection = None
    if check_structure:
        mismatch, bijection = _structure_constant_check(
            g, h, fiber, witness)
        if mismatch is not None:
            return SpeciesVerdict(False, counterexample=mismatch)
    return SpeciesVerdict(True, basis_bijection=bijection)


def _gamma_mismatch(witness, homs_g, homs_h, ci: int, cj: int):
    ki, kj = witness.g_reps[ci], witness.g_reps[cj]
    ti, tj = witness.subgroup_map[ci], witness.subgroup_map[cj]
    ri, rj = witness.h_reps[ti], witness.h_reps[tj]
    for a, phi in enumerate(homs_g[ci]):
        for b, psi in enumerate(homs_g[cj]):
            gg = gamma_coefficient(MonomialPair(ki, phi), MonomialPair(kj, psi))
            phi2 = homs_h[ti][witness.char_maps[ci][a]]
            psi2 = homs_h[tj][witness.char_maps[cj][b]]
            gh = gamma_coefficient(MonomialPair(ri, phi2),
                                   MonomialPair(rj, psi2))
            if gg != gh:
                return {
                    "classes": [ci, cj],
                    "char_indices": [a, b],
                    "gamma_g": gg,
                    "gamma_h": gh,
                }
    return None


def _structure_constant_check(g, h, fiber, witness):
    ct_g = conjugacy_classes_of_subgroups(g, reps=witness.g_reps)
    ct_h = conjugacy_classes_of_subgroups(h, reps=witness.h_reps)
    basis_g = MonomialBasis(g, fiber, ct_g)
    basis_h = MonomialBasis(h, fiber, ct_h)
    if basis_g.size != basis_h.size:
        return {"reason": "basis sizes differ",
                "sizes": [basis_g.size, basis_h.size]}, None
    mapping = []
    for idx in range(basis_g.size):
        ci = basis_g.rep_class[idx]
        hi = basis_g.rep_hom_index[idx]
        cj = witness.subgroup_map[ci]
        hj = witness.char_maps[ci][hi]
        mapping.append(basis_h._char_to_basis[cj][hj])
    if len(set(mapping)) != basis_g.size:
        return {"reason": "induced basis map is not a bijection"}, None
    for i in range(basis_g.size):
        for j in range(basis_g.size):
            transported = sorted((mapping[t], c)
                                 for t, c in basis_g.product(i, j))
            target = basis_h.product(mapping[i], mapping[j])
            if transported != target:
                return {
                    "reason": "structure constants differ",
                    "basis_pair": [i, j],
                    "transported": transported,
                    "target": target,
                }, None
    return None, list(enumerate(mapping))


# ---------------------------------------------------------------------------
# Search


def _class_invariant(group, table, ci: int, fiber) -> tuple:
    rep = table.reps[ci]
    homs = hom_set(rep, fiber)
    cross = Counter()
    for cj, other in enumerate(table.reps):
        cross[(other.order, table.class_sizes[cj],
               table.marks[ci][cj], table.marks[cj][ci])] += 1
    return (rep.order, table.class_sizes[ci], len(homs),
            tuple(sorted(cross.items())))


def search_species(g: FiniteGroup, h: FiniteGroup, fiber: AbelianFiber,
                   *, budget: Optional[int] = None) -> Optional[SpeciesWitness]:
    """Backtracking search for a witness with group-isomorphism character
    maps; returns the first witness in deterministic order or None.

    Class candidates are pruned by (order, class size, hom-set size,
    mark-profile multiset). A None result means exhaustion under the
    group-isomorphism restriction; see ``EXHAUSTION_CAVEAT``.
    """
    ct_g = conjugacy_classes_of_subgroups(g)
    ct_h = conjugacy_classes_of_subgroups(h)
    k = len(ct_g.reps)
    if len(ct_h.reps) != k:
        return None
    inv_g = [_class_invariant(g, ct_g, i, fiber) for i in range(k)]
    inv_h = [_class_invariant(h, ct_h, i, fiber) for i in range(k)]
    if sorted(inv_g) != sorted(inv_h):
        return None
    homs_g = [hom_set(s, fiber) for s in ct_g.reps]
    homs_h = [hom_set(s, fiber) for s in ct_h.reps]
    candidates = [[j for j in range(k) if inv_h[j] == inv_g[i]]
                  for i in range(k)]
    iso_cache: dict[tuple[int, int], list[list[int]]] = {}

    def isos_between(i: int, j: int) -> list[list[int]]:
        key = (i, j)
        if key not in iso_cache:
            iso_cache[key] = list(char_group_isomorphisms(homs_g[i], homs_h[j]))
        return iso_cache[key]

    gamma_g_cache: dict = {}
    gamma_h_cache: dict = {}

    def gamma_g(ci, a, cj, b):
        key = (ci, a, cj, b)
        if key not in gamma_g_cache:
            gamma_g_cache[key] = gamma_coefficient(
                MonomialPair(ct_g.reps[ci], homs_g[ci][a]),
                MonomialPair(ct_g.reps[cj], homs_g[cj][b]))
        return gamma_g_cache[key]

    def gamma_h(ci, a, cj, b):
        key = (ci, a, cj, b)
        if key not in gamma_h_cache:
            gamma_h_cache[key] = gamma_coefficient(
                MonomialPair(ct_h.reps[ci], homs_h[ci][a]),
                MonomialPair(ct_h.reps[cj], homs_h[cj][b]))
        return gamma_h_cache[key]

    assignment: list[Optional[int]] = [None] * k
    char_assignment: list[Optional[list[int]]] = [None] * k
    used = [False] * k
    nodes = 0

    def consistent(ci: int) -> bool:
        tj = assignment[ci]
        cmap_i = char_assignment[ci]
        for cj in range(ci + 1):
            if assignment[cj] is None:
                continue
            tl = assignment[cj]
            cmap_j = char_assignment[cj]
            for a in range(len(homs_g[ci])):
                for b in range(len(homs_g[cj])):
                    if gamma_g(ci, a, cj, b) != gamma_h(tj, cmap_i[a],
                                                        tl, cmap_j[b]):
                        return False
                    if gamma_g(cj, b, ci, a) != gamma_h(tl, cmap_j[b],
                                                        tj, cmap_i[a]):
                        return False
        return True

    def backtrack(ci: int) -> bool:
        nonlocal nodes
        if ci == k:
            return True
        for j in candidates[ci]:
            if used[j]:
                continue
            for cmap in isos_between(ci, j):
                nodes += 1
                if budget is not None and nodes > budget:
                    raise SearchBudgetExceeded(
                        f"species search exceeded {budget} nodes")
                assignment[ci] = j
                char_assignment[ci] = cmap
                used[j] = True
                if consistent(ci) and backtrack(ci + 1):
                    return True
                used[j] = False
                assignment[ci] = None
                char_assignment[ci] = None
        return False

    if not backtrack(0):
        return None
    return SpeciesWitness(list(ct_g.reps), list(ct_h.reps),
                          [int(v) for v in assignment],
                          [list(m) for m in char_assignment])


# ---------------------------------------------------------------------------
# The explicit family witness


def thevenaz_witness(tg1: ThevenazGroup, tg2: ThevenazGroup,
                     fiber: AbelianFiber) -> SpeciesWitness:
    """The explicit witness between two family members over the same (p, q).

    Classes are paired by position in the standard class list; on classes
    containing the order-q generator, characters are paired by their value
    on it. Requires the fiber to have trivial p-torsion.
    """
    if (tg1.spec.p, tg1.spec.q) != (tg2.spec.p, tg2.spec.q):
        raise InvalidSpec("family members must share p and q")
    p = tg1.spec.p
    if not fiber.has_trivial_torsion(p):
        raise FiberHasPTorsion(f"fiber has nontrivial {p}-torsion")
    g_reps = canonical_class_reps(tg1)
    h_reps = canonical_class_reps(tg2)
    subgroup_map = list(range(len(g_reps)))
    char_maps: list[list[int]] = []
    for ci, (k_sub, k_img) in enumerate(zip(g_reps, h_reps)):
        homs1 = hom_set(k_sub, fiber)
        homs2 = hom_set(k_img, fiber)
        if len(homs1) == 1:
            if len(homs2) != 1:
                raise InvalidSpec("character groups unexpectedly differ")
            char_maps.append([0])
            continue
        # non-p-subgroup classes: characters are determined by the value on z
        z1, z2 = tg1.z, tg2.z
        by_value = {h.value_index(z2): j for j, h in enumerate(homs2)}
        char_maps.append([by_value[h.value_index(z1)] for h in homs1])
    return SpeciesWitness(g_reps, h_reps, subgroup_map, char_maps)


__all__ = [
    "SpeciesWitness", "SpeciesVerdict", "verify_species", "search_species",
    "thevenaz_witness", "char_group_isomorphisms", "EXHAUSTION_CAVEAT",
]
