"""Numerical Amitsur groups and Amitsur period bounds.

The central computation: given a lattice J-action on the Picard group
and a J-invariant Euler characteristic chi of bounded degree, the
subgroup generated by chi(D) times the orbit sum of D over all divisor
classes D admits a finite generating set.  For every subgroup H of J
one takes the coset-sum map into the J-invariants and evaluates it on
the lattice simplex of the fixed lattice of H, one degree above chi;
the union over H spans the whole subgroup.  A brute-force box scan of
the defining generators provides the independent oracle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from numam.intlin import FiniteAbelianGroup, Sublattice, quotient, span
from numam.latgroup import (
    LatticeGroupAction,
    coset_sum_map,
    fixed_lattice,
    subgroups,
)
from numam.numpoly import (
    NumericalPolynomial,
    from_values,
    gcd_k_values,
    lcm_upto,
    simplex_points,
)


class ChiNotInvariant(ValueError):
    """The Euler characteristic is not invariant under the given action."""


class ElementNotInvariant(ValueError):
    """A divisor class expected to be J-invariant is not."""


class ParityViolation(ValueError):
    """Surface intersection numbers with odd D^2 - D.K are not smooth-surface data."""


@dataclass(frozen=True)
class VarietySpec:
    """Picard rank, variety dimension, lattice action and Euler characteristic.

    The action is the group J on Z^pic_rank; chi must be J-invariant,
    which is validated at construction.  chi(0) is the Euler
    characteristic of the structure sheaf.
    """

    pic_rank: int
    dim: int
    action: LatticeGroupAction
    chi: NumericalPolynomial

    def __post_init__(self):
        if self.action.rank != self.pic_rank:
            raise ValueError("action rank does not match pic_rank")
        if self.chi.num_vars != self.pic_rank:
            raise ValueError("chi arity does not match pic_rank")
        if self.chi.degree > self.dim:
            raise ValueError("chi degree exceeds the variety dimension")
        pts = simplex_points(self.pic_rank, self.chi.degree)
        base = {p: self.chi.eval(p) for p in pts}
        for g in self.action.elements[1:]:
            if any(self.chi.eval(g.apply(p)) != base[p] for p in pts):
                raise ChiNotInvariant(f"chi is not invariant under {g.entries}")

    def chi_at_zero(self) -> int:
        return self.chi.eval((0,) * self.pic_rank)


@dataclass(frozen=True)
class GeneratorRecord:
    """One emitted generator: which subgroup produced it, at which simplex point."""

    subgroup: str
    point: tuple[int, ...]
    vector: tuple[int, ...]


@dataclass(frozen=True)
class AmitsurComputation:
    """Invariant lattice, split subgroup, their quotient, and bookkeeping."""

    invariant_lattice: Sublattice
    split_subgroup: Sublattice
    group: FiniteAbelianGroup
    generators_used: tuple[GeneratorRecord, ...]


def _generator_records(spec: VarietySpec) -> list[GeneratorRecord]:
    records = []
    for idx, sub in enumerate(subgroups(spec.action)):
        fixed = fixed_lattice(sub)
        if fixed.rank == 0:
            continue  # only the zero generator lives here
        sigma = coset_sum_map(spec.action, sub)
        basis = fixed.basis
        label = f"H{idx}(order {sub.order})"
        for a in simplex_points(fixed.rank, spec.dim + 1):
            divisor = basis.apply(a)
            c = spec.chi.eval(divisor)
            summed = sigma.apply(divisor)
            records.append(GeneratorRecord(label, a, tuple(c * x for x in summed)))
    return records


def pic_chi_generators(spec: VarietySpec) -> list[tuple[int, ...]]:
    """Finite generating set for the numerically split subgroup.

    For each subgroup H of the action: evaluate chi(D) times the
    J/H-coset sum of D at D running over the simplex points of the
    fixed lattice of H in degree dim + 1.  Every emitted vector is
    J-invariant and the emitted set spans the same subgroup as the
    defining generators over all of the Picard lattice.
    """
    return [r.vector for r in _generator_records(spec)]


def am_chi(spec: VarietySpec) -> AmitsurComputation:
    """Invariant lattice, split subgroup from the finite generating set, quotient."""
    records = _generator_records(spec)
    invariant = fixed_lattice(spec.action)
    split = span([r.vector for r in records], spec.pic_rank)
    return AmitsurComputation(invariant, split, quotient(invariant, split), tuple(records))


def am_chi_bruteforce(spec: VarietySpec, box_radius: int) -> AmitsurComputation:
    """Oracle: split subgroup from the defining generators over a box.

    Scans chi(D) times the orbit sum of D for D in [-B, B]^pic_rank,
    one representative per orbit (chi and the orbit sum are constant on
    orbits).  Definitional, so independent of the simplex machinery.
    """
    if box_radius < 1:
        raise ValueError("box radius must be >= 1")
    rank = spec.pic_rank
    mats = [g.entries for g in spec.action.elements[1:]]
    chi = spec.chi
    seen: set = set()
    vectors = []
    records = []
    rng = range(-box_radius, box_radius + 1)
    for point in product(rng, repeat=rank):
        if point in seen:
            continue
        members = {point}
        for m in mats:
            members.add(tuple(sum(r * x for r, x in zip(row, point)) for row in m))
        seen |= members
        c = chi.eval(point)
        if c == 0:
            continue
        vec = tuple(c * sum(col) for col in zip(*members))
        if any(vec) and vec not in vectors:
            vectors.append(vec)
            records.append(GeneratorRecord("box", point, vec))
    invariant = fixed_lattice(spec.action)
    split = span(vectors, rank)
    return AmitsurComputation(invariant, split, quotient(invariant, split), tuple(records))


@dataclass(frozen=True)
class OracleReport:
    """Side-by-side poised-set and box computation with the two checks."""

    poised: AmitsurComputation
    brute: AmitsurComputation
    box_radius: int
    spans_equal: bool
    stabilized: bool

    @property
    def passed(self) -> bool:
        return self.spans_equal and self.stabilized


def oracle_report(spec: VarietySpec, box_radius: int | None = None) -> OracleReport:
    """Compare am_chi against the box oracle and check span stabilization."""
    if box_radius is None:
        box_radius = spec.dim + 2
    poised = am_chi(spec)
    brute = am_chi_bruteforce(spec, box_radius)
    brute_next = am_chi_bruteforce(spec, box_radius + 1)
    stabilized = brute.split_subgroup == brute_next.split_subgroup
    if not stabilized:
        warnings.warn(
            f"box span did not stabilize between radius {box_radius} and {box_radius + 1}",
            stacklevel=2,
        )
    return OracleReport(
        poised=poised,
        brute=brute,
        box_radius=box_radius,
        spans_equal=poised.split_subgroup == brute.split_subgroup,
        stabilized=stabilized,
    )


def _require_invariant(spec: VarietySpec, v: Sequence[int]) -> tuple[int, ...]:
    v = tuple(int(x) for x in v)
    if not fixed_lattice(spec.action).contains(v):
        raise ElementNotInvariant(f"{v} is not fixed by the action")
    return v


def is_numerically_split(
    spec: VarietySpec,
    v: Sequence[int],
    computation: AmitsurComputation | None = None,
) -> bool:
    """Whether v lies in the numerically split subgroup."""
    v = _require_invariant(spec, v)
    if computation is None:
        computation = am_chi(spec)
    return computation.split_subgroup.contains(v)


def naive_invariant_span(spec: VarietySpec, box_radius: int) -> Sublattice:
    """Span of chi(L) L over invariant L only, in a box of the fixed lattice.

    This is the deliberately too-small variant: restricting the defining
    generators to invariant classes can lose generators whose orbits are
    not singletons, and the dP6 walkthrough exploits exactly that gap.
    """
    if box_radius < 1:
        raise ValueError("box radius must be >= 1")
    fixed = fixed_lattice(spec.action)
    vectors = []
    rng = range(-box_radius, box_radius + 1)
    for a in product(rng, repeat=fixed.rank):
        l = fixed.basis.apply(a)
        c = spec.chi.eval(l)
        if c:
            vectors.append(tuple(c * x for x in l))
    return span(vectors, spec.pic_rank)


def period_upper_bound(spec: VarietySpec, v: Sequence[int]) -> int:
    """gcd{ k * chi(k v) : k in Z }, an upper bound for the period of v."""
    v = _require_invariant(spec, v)
    f = from_values(1, spec.dim, lambda p: spec.chi.eval(tuple(p[0] * x for x in v)))
    return gcd_k_values(f)


def uniform_bound(dim: int, p_a: int) -> int:
    """|1 + (-1)^dim p_a| * lcm{1, ..., dim + 1}; 0 means the bound is vacuous."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    return abs(1 + (-1) ** dim * p_a) * lcm_upto(dim + 1)


def curve_gcds(deg_d: int, p_a: int) -> tuple[int, int, int | None]:
    """Closed forms of gcd{f(k)}, gcd{k f(k)} and their ratio on a curve.

    Here f(k) = deg(D) k + (1 - p_a) by Riemann-Roch.  Returns
    (gcd_f, gcd_kf, ratio); the degenerate case f = 0 returns
    (0, 0, None).
    """
    a0 = 1 - p_a
    a1 = deg_d
    gcd_f = math.gcd(a0, a1)
    gcd_kf = math.gcd(a1 + a0, 2 * a1)
    if gcd_f == 0:
        return 0, 0, None
    ratio = 2 if (a0 - a1) % 2 == 0 else 1
    return gcd_f, gcd_kf, ratio


def surface_period_candidates(d_squared: int, d_dot_k: int) -> set[int]:
    """Divisors of 6 not excluded by the surface congruences.

    Necessary conditions only: 2 survives when D^2 and D.K are both
    even but differ mod 4; 3 survives when D.K = 0 and D^2 = 1 mod 3.
    """
    if (d_squared - d_dot_k) % 2:
        raise ParityViolation("D^2 - D.K must be even on a smooth surface")
    two_ok = (
        d_squared % 2 == 0
        and d_dot_k % 2 == 0
        and (d_squared - d_dot_k) % 4 != 0
    )
    three_ok = d_dot_k % 3 == 0 and d_squared % 3 == 1
    out = {1}
    if two_ok:
        out.add(2)
    if three_ok:
        out.add(3)
    if two_ok and three_ok:
        out.add(6)
    return out


def threefold_period_candidates(d_cubed: int, d2_dot_k: int) -> set[int]:
    """Divisors m of 12 with 2 D^3 = 6 (mod m) and D^2.K = 4 (mod 2m)."""
    return {
        m
        for m in (1, 2, 3, 4, 6, 12)
        if (2 * d_cubed - 6) % m == 0 and (d2_dot_k - 4) % (2 * m) == 0
    }
