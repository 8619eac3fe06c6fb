"""Finite groups of unimodular integer matrices acting on Z^rank.

Groups are stored as explicit, closed element lists because everything
downstream (orbits, fixed sublattices, coset sums) consumes the actual
matrices.  Closure, subgroup enumeration and orbits are brute force;
the groups this package meets have order at most a few dozen.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from numam.intlin import IntegerMatrix, Sublattice, determinant, full_sublattice, kernel_basis
from numam.numpoly import NumericalPolynomial, simplex_points

DEFAULT_CAP = 20000


class NotUnimodular(ValueError):
    """A generator does not have determinant +-1."""


class GroupTooLarge(RuntimeError):
    """Closure exceeded the configured size cap."""


class NotASubgroup(ValueError):
    """The alleged subgroup is not contained in the group."""


@dataclass(frozen=True)
class LatticeGroupAction:
    """A finite group of unimodular rank x rank matrices, identity first."""

    rank: int
    elements: tuple[IntegerMatrix, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_keys(self) -> frozenset:
        return frozenset(g.entries for g in self.elements)


@dataclass(frozen=True)
class Orbit:
    representative: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


def _tmul(a: tuple, b: tuple) -> tuple:
    """Product of two square matrices given as entry tuples."""
    bt = tuple(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def generate(
    generators: Iterable[IntegerMatrix | Sequence[Sequence[int]]],
    cap: int = DEFAULT_CAP,
    rank: int | None = None,
) -> LatticeGroupAction:
    """Close a set of unimodular matrices under multiplication.

    Elements come out in breadth-first order from the identity, with
    each layer sorted by entries, so the order is deterministic.  The
    rank argument is only needed for an empty generator list.
    """
    gens: list[IntegerMatrix] = []
    for g in generators:
        if not isinstance(g, IntegerMatrix):
            g = IntegerMatrix.from_rows(g)
        gens.append(g)
    if not gens:
        if rank is None:
            raise ValueError("rank is required for an empty generating set")
        return LatticeGroupAction(rank, (IntegerMatrix.identity(rank),))
    rank = gens[0].rows
    for g in gens:
        if g.rows != g.cols or g.rows != rank:
            raise ValueError("generators must be square of equal rank")
        if determinant(g) not in (1, -1):
            raise NotUnimodular(f"generator {g.entries} has determinant != +-1")
    ident = IntegerMatrix.identity(rank)
    gen_keys = sorted({g.entries for g in gens})
    seen = {ident.entries}
    elements = [ident]
    frontier = [k for k in gen_keys if k not in seen]
    seen.update(frontier)
    while frontier:
        elements.extend(IntegerMatrix(rank, rank, k) for k in frontier)
        if len(elements) > cap:
            raise GroupTooLarge(f"group closure exceeded cap of {cap}")
        nxt = set()
        for f in frontier:
            for g in gen_keys:
                h = _tmul(f, g)
                if h not in seen:
                    seen.add(h)
                    nxt.add(h)
        frontier = sorted(nxt)
    return LatticeGroupAction(rank, tuple(elements))


def _closure_keys(seed: frozenset, ident_key: tuple, cap: int) -> frozenset:
    elems = set(seed) | {ident_key}
    while True:
        new = set()
        for a in elems:
            for b in elems:
                p = _tmul(a, b)
                if p not in elems:
                    new.add(p)
        if not new:
            return frozenset(elems)
        elems |= new
        if len(elems) > cap:
            raise GroupTooLarge(f"subgroup closure exceeded cap of {cap}")


def subgroups(group: LatticeGroupAction, cap: int = DEFAULT_CAP) -> tuple[LatticeGroupAction, ...]:
    """All subgroups, from the trivial group up to the group itself.

    Brute force: close every cyclic subgroup, then keep closing unions
    of pairs until nothing new appears.  Result is sorted by order and
    then by element keys, and each subgroup lists the identity first
    with the rest in ascending entry order.
    """
    if group.order > cap:
        raise GroupTooLarge(f"group order {group.order} exceeds cap {cap}")
    ident_key = IntegerMatrix.identity(group.rank).entries
    found = {frozenset({ident_key})}
    for g in group.elements:
        found.add(_closure_keys(frozenset({g.entries}), ident_key, cap))
    while True:
        new_sets = set()
        current = sorted(found, key=lambda s: (len(s), sorted(s)))
        for a, b in combinations(current, 2):
            c = _closure_keys(a | b, ident_key, cap)
            if c not in found:
                new_sets.add(c)
        if not new_sets:
            break
        found |= new_sets

    def build(keys: frozenset) -> LatticeGroupAction:
        rest = sorted(k for k in keys if k != ident_key)
        mats = (IntegerMatrix(group.rank, group.rank, ident_key),) + tuple(
            IntegerMatrix(group.rank, group.rank, k) for k in rest
        )
        return LatticeGroupAction(group.rank, mats)

    ordered = sorted(found, key=lambda s: (len(s), sorted(s)))
    return tuple(build(s) for s in ordered)


def orbit(group: LatticeGroupAction, v: Sequence[int]) -> Orbit:
    """The orbit of v, deduplicated, in group element order."""
    v = tuple(int(x) for x in v)
    if len(v) != group.rank:
        raise ValueError("vector length does not match group rank")
    members = []
    seen = set()
    for g in group.elements:
        w = g.apply(v)
        if w not in seen:
            seen.add(w)
            members.append(w)
    return Orbit(v, tuple(members))


def orbit_sum(group: LatticeGroupAction, v: Sequence[int]) -> tuple[int, ...]:
    """Sum of the distinct orbit members; always fixed by the whole group."""
    members = orbit(group, v).members
    return tuple(sum(col) for col in zip(*members))


def fixed_lattice(group: LatticeGroupAction) -> Sublattice:
    """The saturated sublattice of vectors fixed by every group element."""
    rows: list[Sequence[int]] = []
    ident = IntegerMatrix.identity(group.rank)
    for g in group.elements:
        if g == ident:
            continue
        rows.extend((g - ident).entries)
    if not rows:
        return full_sublattice(group.rank)
    return kernel_basis(IntegerMatrix.from_rows(rows, group.rank))


def coset_sum_map(group: LatticeGroupAction, sub: LatticeGroupAction) -> IntegerMatrix:
    """Matrix of v -> sum over coset representatives of g . v.

    Representatives are chosen deterministically (first unseen element
    in group order).  Only the restriction to the fixed lattice of
    ``sub`` is independent of that choice.
    """
    if sub.rank != group.rank:
        raise NotASubgroup("rank mismatch")
    sub_keys = sub.element_keys()
    if not sub_keys <= group.element_keys():
        raise NotASubgroup("element set is not contained in the group")
    covered: set = set()
    total = IntegerMatrix.zeros(group.rank, group.rank)
    for g in group.elements:
        if g.entries in covered:
            continue
        covered.update(_tmul(g.entries, h) for h in sub_keys)
        total = total + g
    return total


def is_invariant_polynomial(f: NumericalPolynomial, group: LatticeGroupAction) -> bool:
    """Whether f(g x) = f(x) for every group element.

    Checked on the degree simplex, which determines polynomials of the
    declared degree, so agreement there is agreement everywhere.
    """
    if f.num_vars != group.rank:
        raise ValueError("polynomial arity does not match group rank")
    pts = simplex_points(group.rank, f.degree)
    base = {p: f.eval(p) for p in pts}
    for g in group.elements[1:]:
        for p in pts:
            if f.eval(g.apply(p)) != base[p]:
                return False
    return True
