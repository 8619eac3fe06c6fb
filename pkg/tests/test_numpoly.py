import math
import random
from itertools import product

import pytest

from numam.intlin import IntegerMatrix, span
from numam.numpoly import (
    DegreeBoundError,
    RankDeficient,
    binomial,
    divides_gcd_k_values,
    from_values,
    gcd_k_values,
    gcd_values,
    lcm_upto,
    polynomial_from_coeffs,
    restrict,
    simplex_points,
    univariate_coeffs,
)


def random_poly(rng, num_vars, degree, bound=9):
    coeffs = {
        p: rng.randint(-bound, bound) for p in simplex_points(num_vars, degree)
    }
    return polynomial_from_coeffs(num_vars, degree, coeffs)


class TestSimplex:
    def test_univariate(self):
        assert simplex_points(1, 2).points == ((0,), (1,), (2,))

    def test_two_vars(self):
        assert simplex_points(2, 2).points == (
            (0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
        )

    def test_count(self):
        assert len(simplex_points(3, 1)) == 4
        for r in range(1, 4):
            for n in range(5):
                assert len(simplex_points(r, n)) == math.comb(n + r, r)


class TestBinomial:
    def test_negative_argument(self):
        assert binomial(-1, 2) == 1
        assert binomial(-2, 3) == -4
        for x in range(-6, 7):
            assert binomial(x, 2) == x * (x - 1) // 2


class TestFromValues:
    def test_shifted_pascal(self):
        f = from_values(1, 2, lambda p: math.comb(p[0] + 2, 2))
        assert univariate_coeffs(f) == (1, 2, 1)

    def test_square(self):
        f = from_values(1, 2, lambda p: p[0] ** 2)
        assert univariate_coeffs(f) == (0, 1, 2)

    def test_eval_at_negative(self):
        f = from_values(1, 2, lambda p: math.comb(p[0] + 2, 2))
        assert f.eval((-1,)) == 0
        assert f.eval((-3,)) == 1

    def test_constant(self):
        f = from_values(2, 0, lambda p: 1)
        for x in ((0, 0), (5, -3), (-7, 2)):
            assert f.eval(x) == 1

    def test_round_trip_random(self):
        rng = random.Random(17)
        for _ in range(200):
            r = rng.randint(1, 3)
            n = rng.randint(0, 4)
            f = random_poly(rng, r, n)
            g = from_values(r, n, f.eval)
            assert g == f
            for _ in range(5):
                x = tuple(rng.randint(-6, 6) for _ in range(r))
                assert g.eval(x) == f.eval(x)

    def test_verify_flag_catches_higher_degree(self):
        with pytest.raises(DegreeBoundError):
            from_values(1, 2, lambda p: p[0] ** 3, verify=True)
        from_values(1, 3, lambda p: p[0] ** 3, verify=True)


class TestRestrict:
    def test_identity_basis(self):
        rng = random.Random(3)
        f = random_poly(rng, 2, 2)
        assert restrict(f, IntegerMatrix.identity(2)) == f

    def test_zero_columns_gives_constant(self):
        rng = random.Random(4)
        f = random_poly(rng, 2, 3)
        g = restrict(f, IntegerMatrix.from_columns([], 2))
        assert g.num_vars == 0
        assert g.eval(()) == f.eval((0, 0))

    def test_composition_agrees_pointwise(self):
        rng = random.Random(8)
        for _ in range(40):
            f = random_poly(rng, 3, 2)
            basis = IntegerMatrix.from_columns(
                [(1, 0, 1), (0, 1, -1)]
            )
            g = restrict(f, basis)
            for _ in range(6):
                y = tuple(rng.randint(-4, 4) for _ in range(2))
                assert g.eval(y) == f.eval(basis.apply(y))

    def test_rank_deficient_rejected(self):
        rng = random.Random(13)
        f = random_poly(rng, 2, 2)
        with pytest.raises(RankDeficient):
            restrict(f, IntegerMatrix.from_columns([(1, 1), (2, 2)]))


class TestGcds:
    def test_even_linear(self):
        f = from_values(1, 1, lambda p: 2 * p[0] + 2)
        assert gcd_values(f) == 2

    def test_plane_hilbert(self):
        f = from_values(1, 2, lambda p: math.comb(p[0] + 2, 2))
        assert gcd_values(f) == 1
        assert gcd_k_values(f) == 3

    def test_degree_one_curve(self):
        # chi(kD) = k + 1 on a genus-0 curve with deg D = 1
        f = from_values(1, 1, lambda p: p[0] + 1)
        assert gcd_values(f) == 1
        assert gcd_k_values(f) == 2

    def test_constant_one(self):
        f = from_values(1, 0, lambda p: 1)
        assert gcd_k_values(f) == 1

    def test_zero_polynomial(self):
        f = from_values(1, 2, lambda p: 0)
        assert gcd_values(f) == 0
        assert gcd_k_values(f) == 0

    def test_divides_examples(self):
        f = from_values(1, 2, lambda p: math.comb(p[0] + 2, 2))
        assert divides_gcd_k_values(3, f)
        assert not divides_gcd_k_values(2, f)
        assert divides_gcd_k_values(1, f)

    def test_lcm_upto(self):
        assert lcm_upto(2) == 2
        assert lcm_upto(4) == 12
        assert lcm_upto(7) == 420


class TestValueLatticeProperties:
    """The binomial-transform identities, on 200 seeded random polynomials."""

    def test_univariate_gcd_identities(self):
        rng = random.Random(2024)
        for _ in range(200):
            n = rng.randint(0, 5)
            f = random_poly(rng, 1, n)
            brute_vals = math.gcd(*(f.eval((k,)) for k in range(-20, 21)))
            assert gcd_values(f) == brute_vals
            brute_k = math.gcd(*(k * f.eval((k,)) for k in range(-20, 21)))
            assert gcd_k_values(f) == brute_k
            gv, gk = gcd_values(f), gcd_k_values(f)
            if gv:
                assert gk % gv == 0
                assert lcm_upto(n + 1) % (gk // gv) == 0
            for m in range(1, 31):
                assert divides_gcd_k_values(m, f) == (gk % m == 0)

    def test_poised_simplex_spans_value_vectors(self):
        # span{g(x) x : x in S_{n+1}} equals the span over a whole box
        rng = random.Random(99)
        for _ in range(25):
            r = rng.randint(1, 2)
            n = rng.randint(0, 3)
            g = random_poly(rng, r, n, bound=5)
            simplex_span = span(
                [
                    tuple(g.eval(x) * xi for xi in x)
                    for x in simplex_points(r, n + 1)
                ],
                r,
            )
            box = range(-(n + 3), n + 4)
            box_span = span(
                [
                    tuple(g.eval(x) * xi for xi in x)
                    for x in product(box, repeat=r)
                ],
                r,
            )
            assert simplex_span == box_span
