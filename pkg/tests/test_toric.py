import math
import random

import pytest

from numam.amitsur import am_chi, oracle_report
from numam.intlin import IntegerMatrix, full_sublattice, kernel_basis, span
from numam.latgroup import fixed_lattice, generate, is_invariant_polynomial, orbit, subgroups
from numam.numpoly import restrict
from numam.toric import (
    Fan,
    InternalMismatch,
    NonPrimitiveRay,
    NotASubgroup,
    NotASurface,
    NotComplete,
    NotSmooth,
    am_t,
    amt_equals_amchi_certificate,
    canonical_class,
    dp6,
    fan_automorphisms,
    hirzebruch,
    p2,
    pic_intersection,
    projective_product,
    surface_chi,
    surface_intersection,
    surface_variety_spec,
    validate,
)

DP6_S = IntegerMatrix.from_rows([[0, 1], [1, 0]])
DP6_R = IntegerMatrix.from_rows([[0, 1], [-1, 1]])


def bundled_fans():
    return [p2(), dp6()] + [hirzebruch(e) for e in range(5)]


def dp6_subgroup(*words):
    """Subgroup of the dP6 Picard action generated by words in s and r."""
    syms = fan_automorphisms(dp6())
    lookup = {g.entries: q for g, q in zip(syms.lattice_group.elements, syms.pic_images)}
    atoms = {"s": lookup[DP6_S.entries], "r": lookup[DP6_R.entries]}
    gens = []
    for word in words:
        m = IntegerMatrix.identity(4)
        for ch in word:
            if ch in atoms:
                last = atoms[ch]
                m = m.mul(last)
            else:
                for _ in range(int(ch) - 1):
                    m = m.mul(last)
        gens.append(m)
    return generate(gens, rank=4)


def pairing_fn(fan):
    p = pic_intersection(fan)
    return lambda x, y: sum(a * b for a, b in zip(p.apply(x), y))


class TestValidate:
    def test_p2(self):
        tp = validate(p2())
        assert tp.pic_rank == 1
        assert len(set(tp.ray_classes)) == 1
        assert tp.class_multiplicities[0][1] == 3

    def test_hirzebruch_classes(self):
        for e in range(5):
            tp = validate(hirzebruch(e))
            assert tp.pic_rank == 2
            f, h, f2, h_plus_ef = tp.ray_classes
            assert f == f2
            assert h_plus_ef == tuple(a + e * b for a, b in zip(h, f))
            counts = dict(tp.class_multiplicities)
            assert counts[f] == 2

    def test_dp6(self):
        tp = validate(dp6())
        assert tp.pic_rank == 4
        assert len(tp.class_multiplicities) == 6
        assert all(n == 1 for _, n in tp.class_multiplicities)

    def test_ray_order_is_tdiv_basis_order(self):
        fan = dp6()
        assert fan.rays[:3] == ((1, 0), (0, 1), (-1, -1))

    def test_exactness_for_bundled_fans(self):
        for fan in bundled_fans():
            tp = validate(fan)
            assert kernel_basis(tp.tdiv_to_pic) == span(
                tp.m_to_tdiv.columns(), tp.tdiv_rank
            )
            assert sum(n for _, n in tp.class_multiplicities) == tp.tdiv_rank

    def test_rejects_non_primitive_ray(self):
        with pytest.raises(NonPrimitiveRay):
            validate(Fan.make([(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (2, 0)]))

    def test_rejects_singular_fan(self):
        with pytest.raises(NotSmooth):
            validate(Fan.make([(1, 0), (0, 1), (-1, -2)], [(0, 1), (1, 2), (2, 0)]))

    def test_rejects_incomplete_fan(self):
        with pytest.raises(NotComplete):
            validate(Fan.make([(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)]))

    def test_rejects_wrong_cones(self):
        with pytest.raises(NotComplete):
            validate(Fan.make([(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2), (0, 0)]))

    def test_rejects_higher_rank(self):
        with pytest.raises(NotASurface):
            validate(Fan(3, ((1, 0, 0),), ((0,),)))


class TestIntersection:
    def test_p2_all_ones(self):
        inter = surface_intersection(p2())
        assert inter == IntegerMatrix.from_rows([[1, 1, 1], [1, 1, 1], [1, 1, 1]])

    def test_hirzebruch_pairing(self):
        for e in range(5):
            tp = validate(hirzebruch(e))
            pair = pairing_fn(hirzebruch(e))
            f, h = tp.ray_classes[0], tp.ray_classes[1]
            assert pair(f, f) == 0
            assert pair(h, h) == -e
            assert pair(f, h) == 1

    def test_dp6_degree_six(self):
        k = canonical_class(dp6())
        pair = pairing_fn(dp6())
        assert pair(k, k) == 6

    def test_dp6_exceptional_curves(self):
        tp = validate(dp6())
        pair = pairing_fn(dp6())
        k = canonical_class(dp6())
        for cls in tp.ray_classes:
            assert pair(cls, cls) == -1
            assert pair(cls, k) == -1

    def test_symmetries_preserve_intersections(self):
        for fan in bundled_fans():
            inter = surface_intersection(fan)
            syms = fan_automorphisms(fan)
            for perm in syms.ray_permutations:
                for i in range(len(fan.rays)):
                    for j in range(len(fan.rays)):
                        assert (
                            inter.entries[perm[i]][perm[j]] == inter.entries[i][j]
                        )


class TestChi:
    def test_hirzebruch_closed_form(self):
        for e in range(5):
            tp = validate(hirzebruch(e))
            chi = surface_chi(hirzebruch(e))
            f, h = tp.ray_classes[0], tp.ray_classes[1]
            for a in range(-4, 5):
                for b in range(-4, 5):
                    d = tuple(a * x + b * y for x, y in zip(h, f))
                    expected = (
                        -e * (a * (a - 1) // 2) + a * b + (1 - e) * a + b + 1
                    )
                    assert chi.eval(d) == expected

    def test_structure_sheaf(self):
        for fan in bundled_fans():
            chi = surface_chi(fan)
            assert chi.eval((0,) * validate(fan).pic_rank) == 1

    def test_chi_invariant_under_symmetries(self):
        for fan in bundled_fans():
            chi = surface_chi(fan)
            syms = fan_automorphisms(fan)
            assert is_invariant_polynomial(chi, syms.pic_action)


class TestFanAutomorphisms:
    def test_orders(self):
        assert fan_automorphisms(p2()).lattice_group.order == 6
        assert fan_automorphisms(dp6()).lattice_group.order == 12
        assert fan_automorphisms(hirzebruch(0)).lattice_group.order == 8
        for e in (1, 2, 3):
            assert fan_automorphisms(hirzebruch(e)).lattice_group.order == 2

    def test_pic_action_orders(self):
        assert fan_automorphisms(p2()).pic_action.order == 1
        assert fan_automorphisms(dp6()).pic_action.order == 12
        assert fan_automorphisms(hirzebruch(0)).pic_action.order == 2
        for e in (1, 2, 3):
            syms = fan_automorphisms(hirzebruch(e))
            assert syms.pic_action.order == 1
            assert syms.kernel_size == 2

    def test_dp6_contains_paper_generators(self):
        keys = fan_automorphisms(dp6()).lattice_group.element_keys()
        assert DP6_S.entries in keys
        assert DP6_R.entries in keys

    def test_dp6_paper_basis_dictionary(self):
        # H := [L1] + [E2] + [E3]; then L2 = H - E1 - E3 and L3 = H - E1 - E2
        tp = validate(dp6())
        e1, e2, e3, l1, l2, l3 = tp.ray_classes
        h = tuple(a + b + c for a, b, c in zip(l1, e2, e3))
        assert l2 == tuple(x - a - c for x, a, c in zip(h, e1, e3))
        assert l3 == tuple(x - a - b for x, a, b in zip(h, e1, e2))
        assert span([h, e1, e2, e3], 4) == full_sublattice(4)

    def test_dp6_rotation_acts_on_exceptional_triple(self):
        tp = validate(dp6())
        r2 = dp6_subgroup("rr")
        e1, e2, e3 = tp.ray_classes[:3]
        assert set(orbit(r2, e1).members) == {e1, e2, e3}


class TestAmT:
    def test_p2(self):
        comp = am_t(p2(), generate([], rank=1))
        assert comp.group.invariant_factors == (3,)

    def test_hirzebruch_full_symmetry_dichotomy(self):
        for e in range(7):
            syms = fan_automorphisms(hirzebruch(e))
            comp = am_t(hirzebruch(e), syms.pic_action)
            if e % 2:
                assert comp.group.is_trivial
            else:
                assert comp.group.invariant_factors == (2,)

    def test_hirzebruch_even_trivial_subgroup_differs(self):
        # with J = 1 the kernel of Aut -> AutP still acts on TDiv, and for
        # P^1 x P^1 that kernel is larger than the single ray swap
        comp = am_t(hirzebruch(0), generate([], rank=2))
        assert comp.group.invariant_factors == (2, 2)

    def test_dp6_rotation_subgroup(self):
        comp = am_t(dp6(), dp6_subgroup("rr"))
        assert comp.group.invariant_factors == (3,)

    def test_rejects_foreign_subgroup(self):
        with pytest.raises(NotASubgroup):
            am_t(hirzebruch(1), generate([[[0, 1], [1, 0]]]))

    def test_both_descriptions_agree_for_all_subgroups(self):
        # am_t raises InternalMismatch when the TDiv^W image and the
        # ray-class orbit span differ, so running it everywhere is the test
        for fan in bundled_fans():
            pic_action = fan_automorphisms(fan).pic_action
            for sub in subgroups(pic_action):
                am_t(fan, sub)


class TestProjectiveProduct:
    def test_chi_is_product_of_hilbert_polynomials(self):
        prod = projective_product(2, 2)
        for k1 in range(-3, 4):
            for k2 in range(-3, 4):
                expected = (
                    math.comb(k1 + 2, 2) * math.comb(k2 + 2, 2)
                    if k1 >= -2 and k2 >= -2
                    else prod.chi.eval((k1, k2))
                )
                assert prod.chi.eval((k1, k2)) == expected

    def test_chi_swap_invariant(self):
        prod = projective_product(3, 2)
        assert is_invariant_polynomial(prod.chi, prod.autp)

    def test_projective_space_cyclic(self):
        for n in (1, 2, 3):
            prod = projective_product(n, 1)
            comp = am_t(prod, generate([], rank=1))
            assert comp.group.invariant_factors == (n + 1,)

    def test_product_with_trivial_group(self):
        comp = am_t(projective_product(3, 2), generate([], rank=2))
        assert comp.group.invariant_factors == (4, 4)

    def test_swap_fixed_points(self):
        swap = generate([[[0, 1], [1, 0]]])
        for n in (1, 2, 3):
            comp = am_t(projective_product(n, 2), swap)
            assert comp.group.invariant_factors == (n + 1,)

    def test_certificate_holds(self):
        # chi at a ray class e_i is C(n+1, n) = n+1, the class multiplicity
        prod = projective_product(2, 2)
        for cls, n_i in prod.class_multiplicities:
            assert prod.chi.eval(cls) == n_i


class TestCertificate:
    def test_values(self):
        assert amt_equals_amchi_certificate(p2())
        assert amt_equals_amchi_certificate(dp6())
        assert not amt_equals_amchi_certificate(hirzebruch(2))

    def test_certificate_implies_group_equality_on_dp6(self):
        pic_action = fan_automorphisms(dp6()).pic_action
        chi = surface_chi(dp6())
        for sub in subgroups(pic_action):
            spec = surface_variety_spec(dp6(), sub)
            assert am_chi(spec).group == am_t(dp6(), sub).group

    def test_failed_certificate_shows_up_for_even_hirzebruch(self):
        spec = surface_variety_spec(hirzebruch(2))
        trivial = generate([], rank=2)
        assert am_chi(spec).group != am_t(hirzebruch(2), trivial).group


class TestDp6Walkthrough:
    """The fixed-lattice computation for J generated by s r^3."""

    def setup_method(self):
        self.tp = validate(dp6())
        self.j = dp6_subgroup("srrr")
        e1, e2, e3, l1, l2, l3 = self.tp.ray_classes
        self.a = tuple(x + y for x, y in zip(l1, e2))  # H - E3
        self.b = tuple(x + y for x, y in zip(e3, l3))  # H - E1 - E2 + E3

    def test_group_is_c2(self):
        assert self.j.order == 2

    def test_fixed_lattice_basis(self):
        e1, l2 = self.tp.ray_classes[0], self.tp.ray_classes[4]
        assert self.a == tuple(x + y for x, y in zip(e1, l2))
        assert fixed_lattice(self.j) == span([self.a, self.b], 4)

    def test_restricted_chi_closed_form(self):
        spec = surface_variety_spec(dp6(), self.j)
        basis = IntegerMatrix.from_columns([self.a, self.b], 4)
        g = restrict(spec.chi, basis)
        for m in range(-2, 3):
            for n in range(-2, 3):
                assert g.eval((m, n)) == 2 * m * n - n * n + m + n + 1
