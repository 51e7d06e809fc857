"""Finite models of LCA groups: products of cyclic groups with exact character
pairing, Haar weights, subgroup enumeration, annihilators and volumes.

All values are immutable after construction and all operations are pure, so
everything here is safe to share across threads or executors.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

#: Hard ceiling on group cardinality (desk scale).
CARDINALITY_CAP = 4096

#: Largest cardinality for which dense per-group index tables are built.
_TABLE_CAP = 2048


class GroupShapeError(ValueError):
    """Elements, windows or subgroups of mismatched groups were combined."""


class CardinalityCapError(ValueError):
    """A group or enumeration would exceed the configured cardinality cap."""


def _lcm_many(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, v)
    return out


@dataclass(frozen=True)
class FiniteLcaGroup:
    """Z/n_1 x ... x Z/n_k carrying ``weight`` of Haar mass per point.

    The default weight 1 is counting measure.  ``dual()`` carries the
    Plancherel-dual weight 1/(|G| * weight), so Fourier inversion and the
    volume identity vol(L) * vol(L_perp) = 1 need no extra constants.
    """

    orders: tuple[int, ...]
    weight: Fraction = Fraction(1)

    def __post_init__(self):
        orders = tuple(int(n) for n in self.orders)
        if not orders or any(n < 1 for n in orders):
            raise ValueError(f"cyclic orders must be integers >= 1, got {self.orders!r}")
        card = math.prod(orders)
        if card > CARDINALITY_CAP:
            raise CardinalityCapError(f"|G| = {card} exceeds cap {CARDINALITY_CAP}")
        weight = Fraction(self.weight)
        if weight <= 0:
            raise ValueError("Haar weight must be positive")
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "weight", weight)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @cached_property
    def cardinality(self) -> int:
        return math.prod(self.orders)

    @cached_property
    def exponent(self) -> int:
        return _lcm_many(self.orders)

    @property
    def total_mass(self) -> Fraction:
        return self.cardinality * self.weight

    @cached_property
    def _strides(self) -> tuple[int, ...]:
        s = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            s[i] = s[i + 1] * self.orders[i + 1]
        return tuple(s)

    def dual(self) -> "FiniteLcaGroup":
        return FiniteLcaGroup(self.orders, Fraction(1, self.cardinality) / self.weight)

    def plane(self) -> "FiniteLcaGroup":
        """The time-frequency plane G x G^ with its canonical measure.

        The per-point mass weight * dual_weight = 1/|G| does not depend on the
        Haar normalization chosen on G.
        """
        return FiniteLcaGroup(self.orders + self.orders, Fraction(1, self.cardinality))

    def element(self, coords: Sequence[int] | int) -> "GroupElement":
        if isinstance(coords, int):
            coords = (coords,)
        return GroupElement(self, tuple(coords))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def element_by_index(self, index: int) -> "GroupElement":
        if not 0 <= index < self.cardinality:
            raise IndexError(f"index {index} out of range for |G| = {self.cardinality}")
        coords = tuple((index // s) % n for s, n in zip(self._strides, self.orders))
        return GroupElement(self, coords)

    def elements(self) -> Iterator["GroupElement"]:
        for i in range(self.cardinality):
            yield self.element_by_index(i)

    def __str__(self) -> str:
        return "x".join(f"Z{n}" for n in self.orders)


@dataclass(frozen=True)
class GroupElement:
    """Tuple of residues; coordinate i is reduced mod n_i on construction."""

    group: FiniteLcaGroup
    coords: tuple[int, ...]

    def __post_init__(self):
        if len(self.coords) != self.group.rank:
            raise GroupShapeError(
                f"{len(self.coords)} coordinates for rank-{self.group.rank} group {self.group}")
        reduced = tuple(int(c) % n for c, n in zip(self.coords, self.group.orders))
        object.__setattr__(self, "coords", reduced)

    @property
    def index(self) -> int:
        return sum(c * s for c, s in zip(self.coords, self.group._strides))

    def _same_group(self, other: "GroupElement") -> None:
        if self.group != other.group:
            raise GroupShapeError(f"elements of {self.group} and {other.group} cannot be combined")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same_group(other)
        return GroupElement(self.group, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._same_group(other)
        return GroupElement(self.group, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.group, tuple(-c for c in self.coords))

    def scaled(self, k: int) -> "GroupElement":
        return GroupElement(self.group, tuple(k * c for c in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


#: Elements of a dual group are plain GroupElements of ``group.dual()``;
#: the alias only documents intent in signatures.
DualElement = GroupElement


def pairing_exponent(omega: GroupElement, x: GroupElement) -> tuple[int, int]:
    """Exact pairing phase: (e, N) with <omega, x> = exp(2*pi*i*e/N).

    The formula sum_i omega_i x_i / n_i is symmetric, so this also evaluates
    elements of G acting as characters on G^.
    """
    if omega.group.orders != x.group.orders:
        raise GroupShapeError(f"cannot pair element of {omega.group} with element of {x.group}")
    N = omega.group.exponent
    e = 0
    for w, c, n in zip(omega.coords, x.coords, omega.group.orders):
        e += w * c * (N // n)
    return e % N, N


def pairing(omega: GroupElement, x: GroupElement) -> complex:
    """Unit-modulus character value <omega, x> = exp(2*pi*i sum omega_i x_i / n_i)."""
    e, N = pairing_exponent(omega, x)
    return complex(np.exp(2j * np.pi * (e / N)))


def pairing_is_one(omega: GroupElement, x: GroupElement) -> bool:
    return pairing_exponent(omega, x)[0] == 0


def _check_table_size(orders: tuple[int, ...]) -> None:
    card = math.prod(orders)
    if card > _TABLE_CAP:
        raise CardinalityCapError(f"dense tables limited to |G| <= {_TABLE_CAP}, got {card}")


@lru_cache(maxsize=None)
def coords_matrix(orders: tuple[int, ...]) -> np.ndarray:
    """(|G|, k) int64 coordinate matrix in element-index order (read-only)."""
    grids = np.indices(orders).reshape(len(orders), -1).T
    out = np.ascontiguousarray(grids, dtype=np.int64)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def pair_exponent_table(orders: tuple[int, ...]) -> np.ndarray:
    """E[w, x] = exact pairing exponent mod N, so CHI = exp(2*pi*i*E/N)."""
    _check_table_size(orders)
    C = coords_matrix(orders)
    N = _lcm_many(orders)
    scale = np.array([N // n for n in orders], dtype=np.int64)
    E = (C * scale) @ C.T % N
    E.setflags(write=False)
    return E


@lru_cache(maxsize=None)
def char_table(orders: tuple[int, ...]) -> np.ndarray:
    """CHI[w, x] = <w, x> as complex128 (read-only)."""
    E = pair_exponent_table(orders)
    N = _lcm_many(orders)
    CHI = np.exp(2j * np.pi * (E / N))
    CHI.setflags(write=False)
    return CHI


@lru_cache(maxsize=None)
def add_index_table(orders: tuple[int, ...]) -> np.ndarray:
    """ADD[a, b] = index of a + b (read-only)."""
    _check_table_size(orders)
    C = coords_matrix(orders)
    card = C.shape[0]
    orders_arr = np.array(orders, dtype=np.int64)
    strides = np.empty(len(orders), dtype=np.int64)
    acc = 1
    for i in range(len(orders) - 1, -1, -1):
        strides[i] = acc
        acc *= orders[i]
    out = np.empty((card, card), dtype=np.int64)
    for a in range(card):
        out[a] = ((C[a] + C) % orders_arr) @ strides
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def sub_index_table(orders: tuple[int, ...]) -> np.ndarray:
    """SUB[a, b] = index of a - b (read-only)."""
    ADD = add_index_table(orders)
    C = coords_matrix(orders)
    orders_arr = np.array(orders, dtype=np.int64)
    strides = np.empty(len(orders), dtype=np.int64)
    acc = 1
    for i in range(len(orders) - 1, -1, -1):
        strides[i] = acc
        acc *= orders[i]
    neg = ((-C) % orders_arr) @ strides
    out = ADD[:, neg]
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Subgroup:
    """Fully enumerated subgroup with a sorted element list.

    Equality and hashing use the element list only, so two subgroups given by
    different generating sets compare equal exactly when they coincide.
    """

    group: FiniteLcaGroup
    generators: tuple[GroupElement, ...]
    elements: tuple[GroupElement, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def index_array(self) -> np.ndarray:
        out = np.array([e.index for e in self.elements], dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def _coord_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(e.coords for e in self.elements)

    def __contains__(self, element: GroupElement) -> bool:
        if element.group != self.group:
            raise GroupShapeError(f"element of {element.group} tested against subgroup of {self.group}")
        return element.coords in self._coord_set

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.group == other.group and self._coord_set == other._coord_set

    def __hash__(self) -> int:
        return hash((self.group, self._coord_set))

    def is_subset_of(self, other: "Subgroup") -> bool:
        if self.group != other.group:
            raise GroupShapeError("subgroups of different groups")
        return self._coord_set <= other._coord_set

    @classmethod
    def from_elements(cls, group: FiniteLcaGroup,
                      elements: Sequence[GroupElement]) -> "Subgroup":
        """Wrap an already-closed element list; recovers a small generating set."""
        elems = sorted(elements, key=lambda e: e.index)
        gens: list[GroupElement] = []
        have = {group.zero().coords}
        for e in elems:
            if e.coords in have:
                continue
            gens.append(e)
            have = {m.coords for m in _closure(group, gens)}
        sub = cls(group, tuple(gens), tuple(elems))
        if have != sub._coord_set:
            raise ValueError("element list is not closed under the group operation")
        return sub


def _closure(group: FiniteLcaGroup, generators: Sequence[GroupElement]) -> list[GroupElement]:
    members = {group.zero().coords}
    elems = [group.zero()]
    for gen in generators:
        if gen.coords in members:
            continue
        base = list(elems)
        step = gen
        while step.coords not in members:
            shifted = [e + step for e in base]
            members.update(e.coords for e in shifted)
            elems.extend(shifted)
            step = step + gen
    return elems


def enumerate_subgroup(group: FiniteLcaGroup,
                       generators: Iterable[GroupElement]) -> Subgroup:
    """Smallest subgroup containing the generators, fully enumerated."""
    gens = tuple(generators)
    for g in gens:
        if g.group != group:
            raise GroupShapeError(f"generator {g} does not belong to {group}")
    elems = _closure(group, gens)
    if len(elems) > CARDINALITY_CAP:
        raise CardinalityCapError(f"subgroup enumeration exceeded cap {CARDINALITY_CAP}")
    elems.sort(key=lambda e: e.index)
    return Subgroup(group, gens, tuple(elems))


def trivial_subgroup(group: FiniteLcaGroup) -> Subgroup:
    return enumerate_subgroup(group, ())


def full_subgroup(group: FiniteLcaGroup) -> Subgroup:
    gens = []
    for i in range(group.rank):
        coords = [0] * group.rank
        coords[i] = 1
        gens.append(group.element(coords))
    return enumerate_subgroup(group, gens)


def annihilator(sub: Subgroup) -> Subgroup:
    """Characters of the ambient group trivial on ``sub``, inside the dual group.

    Exact integer arithmetic throughout; |sub| * |annihilator| = |G| always.
    """
    group = sub.group
    dual = group.dual()
    orders = group.orders
    N = group.exponent
    C = coords_matrix(orders)
    scale = np.array([N // n for n in orders], dtype=np.int64)
    Csub = (C[sub.index_array] * scale).T  # (k, m)
    hits: list[int] = []
    chunk = 512
    for start in range(0, group.cardinality, chunk):
        block = C[start:start + chunk]
        E = block @ Csub % N
        good = np.nonzero(~E.any(axis=1))[0]
        hits.extend(int(start + i) for i in good)
    elems = tuple(dual.element_by_index(i) for i in hits)
    return Subgroup.from_elements(dual, elems)


def lattice_volume(sub: Subgroup) -> Fraction:
    """Covolume of the subgroup for the ambient group's Haar measure (exact)."""
    return sub.group.total_mass / sub.order


def coset_transversal(group: FiniteLcaGroup, sub: Subgroup) -> list[GroupElement]:
    """Canonical coset representatives (smallest element index first)."""
    if sub.group != group:
        raise GroupShapeError("subgroup belongs to a different group")
    covered: set[int] = set()
    reps = []
    for i in range(group.cardinality):
        if i in covered:
            continue
        rep = group.element_by_index(i)
        reps.append(rep)
        covered.update((rep + s).index for s in sub.elements)
    return reps


def all_subgroups(group: FiniteLcaGroup) -> list[Subgroup]:
    """Every subgroup, by closing known subgroups under single extra elements."""
    _check_table_size(group.orders)
    ADD = add_index_table(group.orders)
    card = group.cardinality
    trivial = frozenset({0})
    seen = {trivial}
    queue = [trivial]
    while queue:
        H = queue.pop()
        for x in range(1, card):
            if x in H:
                continue
            closed = _close_index_set(H, x, ADD)
            if closed not in seen:
                seen.add(closed)
                queue.append(closed)
    subs = []
    for member_set in sorted(seen, key=lambda s: (len(s), sorted(s))):
        elems = tuple(group.element_by_index(i) for i in sorted(member_set))
        subs.append(Subgroup.from_elements(group, elems))
    return subs


def _close_index_set(H: frozenset[int], x: int, ADD: np.ndarray) -> frozenset[int]:
    base = np.fromiter(H, dtype=np.int64)
    out = set(H)
    y = x
    while y not in H:
        out.update(int(i) for i in ADD[base, y])
        y = int(ADD[y, x])
    return frozenset(out)


# --- specification grammar shared with the CLI ------------------------------

def parse_group_spec(text: str) -> FiniteLcaGroup:
    """Parse 'Z4', 'Z4xZ4', 'Z2xZ3xZ8' into a group with counting measure."""
    parts = text.strip().split("x")
    orders = []
    for part in parts:
        m = re.fullmatch(r"\s*[Zz](\d+)\s*", part)
        if m is None:
            raise ValueError(f"bad group spec {text!r}; expected e.g. 'Z4' or 'Z2xZ3xZ8'")
        orders.append(int(m.group(1)))
    return FiniteLcaGroup(tuple(orders))


def format_group_spec(group: FiniteLcaGroup) -> str:
    return str(group)


def parse_coord_tuples(text: str) -> list[tuple[int, ...]]:
    """Parse '(2,0),(0,2)' (or bare '2,3' for rank-1 groups) into tuples."""
    body = text.strip()
    if body.startswith("gens="):
        body = body[len("gens="):]
    tuples = re.findall(r"\(([^()]*)\)", body)
    if tuples:
        out = []
        for t in tuples:
            items = [s for s in t.split(",") if s.strip() != ""]
            out.append(tuple(int(s) for s in items))
        return out
    if body == "":
        return []
    return [(int(s),) for s in body.split(",")]


def parse_subgroup_spec(group: FiniteLcaGroup, text: str) -> Subgroup:
    """Parse a generator list such as 'gens=(2,0),(0,2)' into a subgroup."""
    gens = [group.element(c) for c in parse_coord_tuples(text)]
    return enumerate_subgroup(group, gens)
