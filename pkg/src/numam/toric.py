"""Smooth complete toric surfaces and toric Amitsur groups.

Fan data feeds the exact sequence 0 -> M -> TDiv(X) -> Pic(X) -> 0: the
character lattice maps in by pairing with the ray generators, and the
Picard projection comes from a Smith form of that map.  Fan symmetries
are enumerated geometrically (images of one adjacent ray pair determine
the map), induce ray permutations on TDiv and a finite action on Pic,
and Am^T is computed twice, as the cokernel of TDiv^W -> Pic^J and from
the ray-class orbit sums, with the two answers compared.

Only two-dimensional fans are supported; products of projective spaces
of any dimension are covered by a dedicated closed-form builder.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from typing import Sequence

from numam.amitsur import AmitsurComputation, GeneratorRecord, ParityViolation, VarietySpec
from numam.intlin import (
    IntegerMatrix,
    Sublattice,
    kernel_basis,
    quotient,
    smith_form,
    span,
    unimodular_inverse,
)
from numam.latgroup import (
    GroupTooLarge,
    LatticeGroupAction,
    NotASubgroup,
    fixed_lattice,
    generate,
    orbit_sum,
)
from numam.numpoly import NumericalPolynomial, from_values


class InvalidFan(ValueError):
    """Base class for fan validation failures."""


class NonPrimitiveRay(InvalidFan):
    pass


class NotSmooth(InvalidFan):
    pass


class NotComplete(InvalidFan):
    pass


class NotASurface(InvalidFan):
    """Raised for fans of rank other than two."""


class InternalMismatch(RuntimeError):
    """Two computations that must agree did not; indicates a bug."""


@dataclass(frozen=True)
class Fan:
    """Rays and maximal cones of a fan in Z^lattice_rank.

    Ray order is the TDiv basis order and may be arbitrary; max_cones
    are index pairs.  Completeness and smoothness are checked by
    :func:`validate`.
    """

    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, rays: Sequence[Sequence[int]], max_cones: Sequence[Sequence[int]], lattice_rank: int = 2) -> Fan:
        rays = tuple(tuple(int(x) for x in r) for r in rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in max_cones)
        return cls(lattice_rank, rays, cones)


@dataclass(frozen=True)
class ToricPicard:
    """The exact sequence data M -> TDiv -> Pic for a validated fan."""

    fan: Fan
    tdiv_rank: int
    m_to_tdiv: IntegerMatrix
    pic_rank: int
    tdiv_to_pic: IntegerMatrix
    lift: IntegerMatrix  # section of tdiv_to_pic, used to transport maps to Pic
    ray_classes: tuple[tuple[int, ...], ...]
    class_multiplicities: tuple[tuple[tuple[int, ...], int], ...]


@dataclass(frozen=True)
class FanSymmetries:
    """Unimodular fan automorphisms with their ray and Picard shadows.

    ``pic_images[i]`` is the Picard matrix induced by ``lattice_group.
    elements[i]``; ``pic_action`` is the deduplicated image group and
    ``kernel_size`` the size of the fibres of the quotient map.
    """

    lattice_group: LatticeGroupAction
    ray_permutations: tuple[tuple[int, ...], ...]
    pic_images: tuple[IntegerMatrix, ...]
    pic_action: LatticeGroupAction
    kernel_size: int


def _det2(a: Sequence[int], b: Sequence[int]) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _ccw_order(rays: Sequence[tuple[int, ...]]) -> list[int]:
    """Ray indices sorted counterclockwise starting in the upper half plane."""

    def half(v):
        # 0 for angle in [0, pi), 1 for [pi, 2 pi)
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(i, j):
        a, b = rays[i], rays[j]
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        d = _det2(a, b)
        if d > 0:
            return -1
        if d < 0:
            return 1
        return 0

    return sorted(range(len(rays)), key=cmp_to_key(cmp))


@lru_cache(maxsize=None)
def validate(fan: Fan) -> ToricPicard:
    """Check the fan is a smooth complete surface fan and build the sequence.

    The Picard basis is whatever the Smith form of M -> TDiv produces;
    everything reported downstream (invariant factors, membership) is
    basis independent, and the ray classes express the paper bases of
    the bundled examples in tests.
    """
    if fan.lattice_rank != 2:
        raise NotASurface("only rank-2 fans are supported")
    r = len(fan.rays)
    if r < 3:
        raise NotComplete("a complete surface fan has at least 3 rays")
    for ray in fan.rays:
        if len(ray) != 2:
            raise InvalidFan(f"ray {ray} does not have 2 coordinates")
        if ray == (0, 0) or math.gcd(*ray) != 1:
            raise NonPrimitiveRay(f"ray {ray} is not primitive")
    if len(set(fan.rays)) != r:
        raise InvalidFan("duplicate rays")

    order = _ccw_order(fan.rays)
    adjacent = set()
    for k in range(r):
        i, j = order[k], order[(k + 1) % r]
        d = _det2(fan.rays[i], fan.rays[j])
        if d <= 0:
            raise NotComplete("rays do not wind once around the origin")
        if d != 1:
            raise NotSmooth(f"cone ({fan.rays[i]}, {fan.rays[j]}) has index {d}")
        adjacent.add(tuple(sorted((i, j))))
    for cone in fan.max_cones:
        if len(cone) != 2:
            raise InvalidFan(f"max cone {cone} is not 2-dimensional")
    if set(fan.max_cones) != adjacent:
        raise NotComplete("max cones do not match the complete fan on these rays")

    m_to_tdiv = IntegerMatrix.from_rows(fan.rays)
    s, u, _ = smith_form(m_to_tdiv)
    if any(s.entries[i][i] != 1 for i in range(2)):
        raise InternalMismatch("class group of a smooth fan has torsion")
    pic_rank = r - 2
    tdiv_to_pic = IntegerMatrix.from_rows(u.entries[2:], r)
    lift = IntegerMatrix.from_columns(unimodular_inverse(u).columns()[2:], r)
    if kernel_basis(tdiv_to_pic) != span(m_to_tdiv.columns(), r):
        raise InternalMismatch("TDiv -> Pic kernel is not the character image")
    ray_classes = tuple(tdiv_to_pic.column(i) for i in range(r))
    mult: dict[tuple[int, ...], int] = {}
    for c in ray_classes:
        mult[c] = mult.get(c, 0) + 1
    class_multiplicities = tuple(mult.items())
    if sum(n for _, n in class_multiplicities) != r:
        raise InternalMismatch("ray class multiplicities do not add up")
    return ToricPicard(
        fan=fan,
        tdiv_rank=r,
        m_to_tdiv=m_to_tdiv,
        pic_rank=pic_rank,
        tdiv_to_pic=tdiv_to_pic,
        lift=lift,
        ray_classes=ray_classes,
        class_multiplicities=class_multiplicities,
    )


def _permutation_matrix(perm: Sequence[int]) -> IntegerMatrix:
    n = len(perm)
    entries = [[0] * n for _ in range(n)]
    for i, target in enumerate(perm):
        entries[target][i] = 1
    return IntegerMatrix.from_rows(entries)


@lru_cache(maxsize=None)
def fan_automorphisms(fan: Fan, cap: int = 20000) -> FanSymmetries:
    """All unimodular maps preserving the fan, with induced Picard action.

    A candidate is determined by the images of one adjacent ray pair;
    every adjacent ordered pair (in both orientations) is tried and the
    solutions that permute the ray set are kept.  Such a map permutes
    the maximal cones automatically because it preserves the circular
    order of rays up to orientation.
    """
    tp = validate(fan)
    rays = fan.rays
    r = tp.tdiv_rank
    order = _ccw_order(rays)
    base = IntegerMatrix.from_columns([rays[order[0]], rays[order[1]]])
    base_inv = unimodular_inverse(base)
    ray_index = {ray: i for i, ray in enumerate(rays)}
    candidates = []
    for k in range(r):
        i, j = order[k], order[(k + 1) % r]
        for target in ((rays[i], rays[j]), (rays[j], rays[i])):
            g = IntegerMatrix.from_columns(list(target)).mul(base_inv)
            if all(tuple(g.apply(ray)) in ray_index for ray in rays):
                candidates.append(g)
    group = generate(candidates, cap=cap, rank=2)
    if group.order != len({g.entries for g in candidates}):
        raise InternalMismatch("fan symmetry candidates were not closed")

    perms = []
    pic_images = []
    for g in group.elements:
        perm = tuple(ray_index[g.apply(ray)] for ray in rays)
        perms.append(perm)
        p = _permutation_matrix(perm)
        q = tp.tdiv_to_pic.mul(p).mul(tp.lift)
        if q.mul(tp.tdiv_to_pic) != tp.tdiv_to_pic.mul(p):
            raise InternalMismatch("induced Picard matrix does not commute")
        pic_images.append(q)
    pic_action = generate({q.entries: q for q in pic_images}.values(), cap=cap, rank=tp.pic_rank)
    if group.order % pic_action.order:
        raise InternalMismatch("Picard action order does not divide the symmetry order")
    return FanSymmetries(
        lattice_group=group,
        ray_permutations=tuple(perms),
        pic_images=tuple(pic_images),
        pic_action=pic_action,
        kernel_size=group.order // pic_action.order,
    )


@dataclass(frozen=True)
class ProjectiveProduct:
    """(P^n)^m through its divisor bookkeeping, without a fan.

    Picard group Z^m, each factor contributing one ray class with
    multiplicity n + 1; chi is the product of the factor Hilbert
    polynomials; the Picard symmetry group is the full permutation
    group of the factors.
    """

    n: int
    m: int
    dim: int
    pic_rank: int
    tdiv_rank: int
    chi: NumericalPolynomial
    autp: LatticeGroupAction
    class_multiplicities: tuple[tuple[tuple[int, ...], int], ...]


def projective_product(n: int, m: int) -> ProjectiveProduct:
    """Build the (P^n)^m data: chi(k) = prod C(k_i + n, n)."""
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    chi = from_values(
        m,
        n * m,
        lambda k: math.prod(math.comb(ki + n, n) for ki in k),
    )
    gens = []
    if m >= 2:
        swap = list(range(m))
        swap[0], swap[1] = swap[1], swap[0]
        gens.append(_permutation_matrix(swap))
    if m >= 3:
        cycle = [(i + 1) % m for i in range(m)]
        gens.append(_permutation_matrix(cycle))
    autp = generate(gens, rank=m)
    basis = IntegerMatrix.identity(m)
    classes = tuple((basis.column(i), n + 1) for i in range(m))
    return ProjectiveProduct(
        n=n,
        m=m,
        dim=n * m,
        pic_rank=m,
        tdiv_rank=(n + 1) * m,
        chi=chi,
        autp=autp,
        class_multiplicities=classes,
    )


def _product_ray_permutations(prod: ProjectiveProduct, pic_subgroup: LatticeGroupAction) -> list[tuple[int, ...]]:
    """Ray permutations generating W for a product: in-block shuffles plus lifted factor moves."""
    n1 = prod.n + 1
    m = prod.m
    perms = []
    for block in range(m):
        base = list(range(prod.tdiv_rank))
        if n1 >= 2:
            a, b = block * n1, block * n1 + 1
            base[a], base[b] = base[b], base[a]
            perms.append(tuple(base))
            cyc = list(range(prod.tdiv_rank))
            for slot in range(n1):
                cyc[block * n1 + slot] = block * n1 + (slot + 1) % n1
            perms.append(tuple(cyc))
    for g in pic_subgroup.elements[1:]:
        # column i of the permutation matrix is e_{target(i)}
        target = [g.column(i).index(1) for i in range(m)]
        lifted = [0] * prod.tdiv_rank
        for block in range(m):
            for slot in range(n1):
                lifted[block * n1 + slot] = target[block] * n1 + slot
        perms.append(tuple(lifted))
    return perms


def am_t(target: Fan | ProjectiveProduct, j: LatticeGroupAction) -> AmitsurComputation:
    """Toric Amitsur group of the subgroup J of the Picard symmetry group.

    Computes both descriptions and insists they agree: the image of
    TDiv^W inside Pic^J, where W is the preimage of J among the fan
    symmetries acting on TDiv by ray permutations, and the span of
    n_i times the J-orbit sums of the distinct ray classes.
    """
    if isinstance(target, ProjectiveProduct):
        if not j.element_keys() <= target.autp.element_keys():
            raise NotASubgroup("J is not a subgroup of the factor permutations")
        pic_rank = target.pic_rank
        tdiv_rank = target.tdiv_rank
        w_perms = _product_ray_permutations(target, j)
        tdiv_to_pic = IntegerMatrix.from_rows(
            [[1 if col // (target.n + 1) == row else 0 for col in range(tdiv_rank)] for row in range(pic_rank)]
        )
        classes = target.class_multiplicities
    else:
        tp = validate(target)
        syms = fan_automorphisms(target)
        if not j.element_keys() <= syms.pic_action.element_keys():
            raise NotASubgroup("J is not a subgroup of the induced Picard action")
        pic_rank = tp.pic_rank
        tdiv_rank = tp.tdiv_rank
        jkeys = j.element_keys()
        w_perms = [
            perm
            for perm, q in zip(syms.ray_permutations, syms.pic_images)
            if q.entries in jkeys
        ]
        tdiv_to_pic = tp.tdiv_to_pic
        classes = tp.class_multiplicities

    ident = IntegerMatrix.identity(tdiv_rank)
    stack_rows: list[Sequence[int]] = []
    for perm in w_perms:
        p = _permutation_matrix(perm)
        if p == ident:
            continue
        stack_rows.extend((p - ident).entries)
    if stack_rows:
        tdiv_fixed = kernel_basis(IntegerMatrix.from_rows(stack_rows, tdiv_rank))
    else:
        tdiv_fixed = span(ident.columns(), tdiv_rank)
    image_span = span(
        [tdiv_to_pic.apply(col) for col in tdiv_fixed.basis_columns()], pic_rank
    )

    records = []
    class_vectors = []
    for idx, (cls, n_i) in enumerate(classes):
        summed = orbit_sum(j, cls)
        vec = tuple(n_i * x for x in summed)
        class_vectors.append(vec)
        records.append(GeneratorRecord(f"class{idx}(x{n_i})", cls, vec))
    class_span = span(class_vectors, pic_rank)

    if image_span != class_span:
        raise InternalMismatch("TDiv^W image and ray-class orbit span disagree")
    invariant = fixed_lattice(j)
    return AmitsurComputation(invariant, class_span, quotient(invariant, class_span), tuple(records))


def surface_intersection(fan: Fan) -> IntegerMatrix:
    """Intersection matrix of the torus-invariant divisors of a surface fan.

    Adjacent rays meet once, distinct non-adjacent divisors are
    disjoint, and the self-intersection is read off the wall relation:
    the two neighbours of a ray sum to a multiple of it.
    """
    tp = validate(fan)
    r = tp.tdiv_rank
    rays = fan.rays
    order = _ccw_order(rays)
    entries = [[0] * r for _ in range(r)]
    for k in range(r):
        prev_i = order[(k - 1) % r]
        i = order[k]
        next_i = order[(k + 1) % r]
        v = tuple(a + b for a, b in zip(rays[prev_i], rays[next_i]))
        alpha = _det2(v, rays[next_i])
        if v != tuple(alpha * x for x in rays[i]):
            raise InternalMismatch("wall relation failed; fan is not smooth complete")
        entries[i][i] = -alpha
        entries[i][next_i] = 1
        entries[next_i][i] = 1
    return IntegerMatrix.from_rows(entries)


def pic_intersection(fan: Fan) -> IntegerMatrix:
    """The intersection pairing transported to the computed Picard basis."""
    tp = validate(fan)
    inter = surface_intersection(fan)
    if any(any(row) for row in inter.mul(tp.m_to_tdiv).entries):
        raise InternalMismatch("principal divisors are not numerically trivial")
    return tp.lift.transpose().mul(inter).mul(tp.lift)


def canonical_class(fan: Fan) -> tuple[int, ...]:
    """Picard class of the canonical divisor, minus the sum of all ray classes."""
    tp = validate(fan)
    return tuple(-sum(col) for col in zip(*tp.ray_classes))


def surface_chi(fan: Fan) -> NumericalPolynomial:
    """Euler characteristic chi(D) = 1 + (D.D - D.K)/2 on the Picard lattice."""
    tp = validate(fan)
    pairing = pic_intersection(fan)
    k = canonical_class(fan)

    def chi_value(x: tuple[int, ...]) -> int:
        px = pairing.apply(x)
        quad = sum(a * b for a, b in zip(px, x))
        mixed = sum(a * b for a, b in zip(px, k))
        if (quad - mixed) % 2:
            raise ParityViolation("D^2 - D.K came out odd on a smooth surface")
        return 1 + (quad - mixed) // 2

    return from_values(tp.pic_rank, 2, chi_value)


def surface_variety_spec(fan: Fan, action: LatticeGroupAction | None = None) -> VarietySpec:
    """VarietySpec for a toric surface; trivial action when none is given."""
    tp = validate(fan)
    if action is None:
        action = generate([], rank=tp.pic_rank)
    return VarietySpec(pic_rank=tp.pic_rank, dim=2, action=action, chi=surface_chi(fan))


def amt_equals_amchi_certificate(fan: Fan) -> bool:
    """Whether chi(ray class) equals the ray multiplicity for every class.

    When true the toric generators sit among the chi generators with
    the same weights, and the two Amitsur groups agree for every
    subgroup of the Picard symmetries.
    """
    chi = surface_chi(fan)
    tp = validate(fan)
    return all(chi.eval(cls) == n for cls, n in tp.class_multiplicities)


def p2() -> Fan:
    """The projective plane."""
    return Fan.make([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)])


def hirzebruch(e: int) -> Fan:
    """The degree-e Hirzebruch surface; e = 0 is P^1 x P^1."""
    if e < 0:
        raise ValueError("e must be >= 0")
    return Fan.make(
        [(1, 0), (0, 1), (-1, e), (0, -1)],
        [(0, 1), (1, 2), (2, 3), (3, 0)],
    )


def dp6() -> Fan:
    """The del Pezzo surface of degree 6.

    Ray order is the divisor basis E1, E2, E3, L1, L2, L3: exceptional
    curves first, then the line transforms, so TDiv coordinates match
    the usual labels.
    """
    return Fan.make(
        [(1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)],
        [(0, 5), (5, 1), (1, 3), (3, 2), (2, 4), (4, 0)],
    )
