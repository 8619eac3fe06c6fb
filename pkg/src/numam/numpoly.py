"""Integer-valued polynomials in the binomial-coefficient basis.

A polynomial f with f(Z^r) contained in Z is stored as the integer
coefficients c_a of the expansion f(x) = sum_a c_a * C(x_1, a_1) * ...
* C(x_r, a_r) over exponent tuples a with a_i >= 0 and sum(a) bounded
by the degree.  Interpolation from values on the lattice simplex,
restriction along integer linear maps, and the gcd arithmetic of the
values f(k) and k*f(k) all stay inside Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Callable, Sequence

from numam.intlin import IntegerMatrix, span


class RankDeficient(ValueError):
    """Restriction basis does not have independent columns."""


class DegreeBoundError(ValueError):
    """Supplied values do not come from a polynomial within the claimed degree."""


def binomial(x: int, k: int) -> int:
    """C(x, k) as a polynomial in x, valid for negative x; k must be >= 0."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return 1
    if x >= 0:
        return math.comb(x, k)
    # C(x, k) = (-1)^k C(k - x - 1, k) for x < 0
    return (-1) ** k * math.comb(k - x - 1, k)


def lcm_upto(n: int) -> int:
    """lcm{1, ..., n}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.lcm(*range(1, n + 1))


def _graded_key(point: tuple[int, ...]) -> tuple:
    return (sum(point), tuple(-x for x in point))


@dataclass(frozen=True)
class LatticeSimplex:
    """Lattice points a >= 0 with sum(a) <= degree, in graded order."""

    num_vars: int
    degree: int
    points: tuple[tuple[int, ...], ...]

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


def simplex_points(num_vars: int, degree: int) -> LatticeSimplex:
    """All exponent tuples of the degree-scaled standard simplex.

    Contains C(degree + num_vars, num_vars) points; their values pin
    down every integer-valued polynomial of that degree.
    """
    if num_vars < 0 or degree < 0:
        raise ValueError("num_vars and degree must be non-negative")
    if num_vars == 0:
        return LatticeSimplex(0, degree, ((),))
    pts = [p for p in product(range(degree + 1), repeat=num_vars) if sum(p) <= degree]
    pts.sort(key=_graded_key)
    return LatticeSimplex(num_vars, degree, tuple(pts))


@dataclass(frozen=True)
class NumericalPolynomial:
    """Integer-valued polynomial in binomial basis.

    ``terms`` maps exponent tuples to nonzero integer coefficients,
    stored as a sorted tuple of pairs so values are hashable and
    structurally canonical.
    """

    num_vars: int
    degree: int
    terms: tuple[tuple[tuple[int, ...], int], ...]

    def coefficient(self, exponent: Sequence[int]) -> int:
        exponent = tuple(exponent)
        for e, c in self.terms:
            if e == exponent:
                return c
        return 0

    def eval(self, point: Sequence[int]) -> int:
        if len(point) != self.num_vars:
            raise ValueError("point length does not match variable count")
        total = 0
        for exps, c in self.terms:
            w = c
            for x, a in zip(point, exps):
                if a:
                    w *= binomial(x, a)
                    if w == 0:
                        break
            total += w
        return total

    def is_zero(self) -> bool:
        return not self.terms


def _make_terms(coeffs: dict[tuple[int, ...], int]) -> tuple:
    items = [(e, c) for e, c in coeffs.items() if c]
    items.sort(key=lambda item: _graded_key(item[0]))
    return tuple(items)


def polynomial_from_coeffs(num_vars: int, degree: int, coeffs: dict[tuple[int, ...], int]) -> NumericalPolynomial:
    """Build a polynomial directly from binomial-basis coefficients."""
    for e in coeffs:
        if len(e) != num_vars:
            raise ValueError(f"exponent {e} has wrong arity")
        if any(a < 0 for a in e) or sum(e) > degree:
            raise ValueError(f"exponent {e} outside the degree-{degree} simplex")
    return NumericalPolynomial(num_vars, degree, _make_terms(coeffs))


def from_values(
    num_vars: int,
    degree: int,
    value_fn: Callable[[tuple[int, ...]], int],
    verify: bool = False,
) -> NumericalPolynomial:
    """Interpolate the unique degree-bounded polynomial matching value_fn.

    Coefficients are the iterated forward differences at the origin;
    only values on the degree simplex are consulted.  The caller owns
    the degree bound: with ``verify=True`` the shell of points at
    sum(a) = degree + 1 is rechecked and a DegreeBoundError is raised on
    mismatch.
    """
    values = {p: int(value_fn(p)) for p in simplex_points(num_vars, degree)}
    coeffs: dict[tuple[int, ...], int] = {}
    for a in values:
        total = 0
        for b in product(*(range(ai + 1) for ai in a)):
            sgn = -1 if (sum(a) - sum(b)) % 2 else 1
            w = 1
            for ai, bi in zip(a, b):
                w *= math.comb(ai, bi)
            total += sgn * w * values[b]
        if total:
            coeffs[a] = total
    f = NumericalPolynomial(num_vars, degree, _make_terms(coeffs))
    if verify and num_vars:
        shell = (
            p
            for p in product(range(degree + 2), repeat=num_vars)
            if sum(p) == degree + 1
        )
        for p in shell:
            if f.eval(p) != int(value_fn(p)):
                raise DegreeBoundError(
                    f"values disagree with a degree-{degree} polynomial at {p}"
                )
    return f


def restrict(f: NumericalPolynomial, basis: IntegerMatrix) -> NumericalPolynomial:
    """Pull f back along the injective linear map given by basis columns."""
    if basis.rows != f.num_vars:
        raise ValueError("basis row count does not match variable count")
    if span(basis.columns(), basis.rows).rank != basis.cols:
        raise RankDeficient("basis columns are linearly dependent")
    return from_values(basis.cols, f.degree, lambda a: f.eval(basis.apply(a)))


def univariate_coeffs(f: NumericalPolynomial) -> tuple[int, ...]:
    """Binomial-basis coefficients (a_0, ..., a_n) of a univariate polynomial."""
    if f.num_vars != 1:
        raise ValueError("polynomial is not univariate")
    a = [0] * (f.degree + 1)
    for (e,), c in f.terms:
        a[e] = c
    return tuple(a)


def gcd_values(f: NumericalPolynomial) -> int:
    """gcd of all values f(x), x ranging over Z^r; 0 for the zero polynomial.

    In the binomial basis this is the gcd of the coefficients, because
    the triangular binomial transform identifies the coefficient lattice
    with the value lattice.
    """
    return math.gcd(*(c for _, c in f.terms))


def _k_times_coeffs(f: NumericalPolynomial) -> list[int]:
    # Binomial coefficients of k*f(k): the i-th is i*(a_i + a_{i-1}) for
    # 1 <= i <= n, and the top one is (n+1)*a_n.
    a = univariate_coeffs(f)
    n = f.degree
    out = [i * (a[i] + a[i - 1]) for i in range(1, n + 1)]
    out.append((n + 1) * a[n])
    return out


def gcd_k_values(f: NumericalPolynomial) -> int:
    """gcd{ k * f(k) : k in Z } for univariate f."""
    return math.gcd(*_k_times_coeffs(f))


def divides_gcd_k_values(m: int, f: NumericalPolynomial) -> bool:
    """Whether m divides every k*f(k), tested through the coefficient congruences."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return all(c % m == 0 for c in _k_times_coeffs(f))
