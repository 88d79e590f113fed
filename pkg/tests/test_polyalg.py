import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tridisc.errors import DomainError
from tridisc.polyalg import (
    MultiPoly,
    from_text,
    grid_is_zero,
    is_zero_poly,
    poly_add,
    poly_eval,
    poly_mul,
    to_text,
)

z1, z2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)

coefficient = st.builds(complex, st.floats(-3, 3), st.floats(-3, 3))
exponent = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(exponent, coefficient, max_size=6).map(lambda d: MultiPoly(2, d))
points = st.tuples(coefficient, coefficient)
# integer coefficients: products are exact, so nothing falls under the pruning floor
gaussian = st.builds(complex, st.integers(-3, 3), st.integers(-3, 3))
int_polys = st.dictionaries(exponent, gaussian, max_size=6).map(lambda d: MultiPoly(2, d))


def term_diff(p, q):
    keys = set(p.terms) | set(q.terms)
    return max((abs(p.coeff(k) - q.coeff(k)) for k in keys), default=0.0)


def naive_eval(p, x):
    return sum(c * np.prod([xi**k for xi, k in zip(x, e)]) for e, c in p.terms.items())


class TestConstruction:
    def test_prunes_zeros(self):
        p = MultiPoly(2, {(1, 0): 1.0, (0, 1): 0.0, (2, 2): 1e-17})
        assert list(p.terms) == [(1, 0)]

    def test_arity_limits(self):
        with pytest.raises(DomainError):
            MultiPoly(4)
        with pytest.raises(DomainError):
            MultiPoly(2, {(1,): 1.0})
        with pytest.raises(DomainError):
            MultiPoly(2, {(1, -1): 1.0})

    def test_arity_mismatch(self):
        with pytest.raises(DomainError):
            z1 + MultiPoly.variable(0, 3)
        with pytest.raises(DomainError):
            poly_mul(z1, MultiPoly.variable(0, 1))

    def test_numpy_scalars_stay_polynomials(self):
        p = np.complex128(2.0) * z1 + np.float64(1.0)
        assert isinstance(p, MultiPoly)
        assert p.coeff((1, 0)) == 2


class TestArithmetic:
    def test_add_zero(self):
        p = 3 * z1 * z2 + 1j
        assert poly_add(p, MultiPoly.zero(2)) == p

    def test_add_negation(self):
        p = 3 * z1 * z2 + 1j * z2**3
        assert (p + (-p)).is_zero()

    def test_sum_of_variables(self):
        assert len(z1 + z2) == 2

    def test_mul_one(self):
        p = 3 * z1 * z2 + 1j
        assert p * 1 == p

    def test_difference_of_squares(self):
        assert (z1 + z2) * (z1 - z2) == z1**2 - z2**2

    @given(int_polys, int_polys)
    def test_degree_adds(self, p, q):
        if p.is_zero() or q.is_zero():
            return
        prod = p * q
        if not prod.is_zero():
            assert prod.degree() == p.degree() + q.degree()

    @given(polys, polys, polys)
    def test_ring_laws(self, p, q, r):
        assert term_diff((p * q) * r, p * (q * r)) < 1e-12
        assert term_diff(p * q, q * p) < 1e-14
        assert term_diff((p + q) + r, p + (q + r)) < 1e-14
        assert term_diff(p + q, q + p) == 0
        assert term_diff(p * (q + r), p * q + p * r) < 1e-12

    def test_power(self):
        assert (z1 + 1) ** 2 == z1 * z1 + 2 * z1 + 1
        with pytest.raises(DomainError):
            z1 ** -1

    def test_conjugate_coefficients(self):
        p = (1 + 2j) * z1
        assert p.conj_coeffs().coeff((1, 0)) == 1 - 2j


class TestEvaluation:
    def test_at_origin(self):
        p = 3 * z1 * z2 + (2 - 1j)
        assert poly_eval(p, (0, 0)) == 2 - 1j

    def test_product_value(self):
        assert (z1 * z2)(2, 3) == 6

    @given(polys, points)
    def test_matches_naive_sum(self, p, x):
        assert abs(p(*x) - naive_eval(p, x)) <= 1e-12 * max(1, abs(naive_eval(p, x)), sum(abs(c) * 3 ** sum(e) for e, c in p.terms.items()))

    @given(polys, polys, points)
    def test_homomorphism(self, p, q, x):
        x = tuple(v / max(1, abs(v)) for v in x)
        bound = max(1.0, (p * q).max_coeff() * 16 * len(p) * len(q))
        assert abs((p * q)(*x) - p(*x) * q(*x)) <= 1e-12 * bound
        assert abs((p + q)(*x) - (p(*x) + q(*x))) <= 1e-12 * max(1.0, p.max_coeff() + q.max_coeff()) * 16

    def test_vectorized(self):
        x = np.array([0.1, 0.2, 0.3])
        assert np.allclose((z1 * z2 + 1)(x, 2.0), x * 2 + 1)

    def test_wrong_arity(self):
        with pytest.raises(DomainError):
            poly_eval(z1, (1, 2, 3))


class TestZeroTests:
    def test_zero(self):
        assert is_zero_poly(MultiPoly.zero(2), 1e-9)

    def test_constant_one(self):
        assert not is_zero_poly(MultiPoly.constant(1.0, 2), 1e-9)

    def test_cancellation_relative_to_operands(self):
        big = 1e6 * z1 + 1e6 * z2
        noisy = big + (-big + 1e-6 * z1)  # leftover is 1e-12 of the operand scale
        assert is_zero_poly(noisy, 1e-9)
        assert not is_zero_poly(noisy, 1e-9, scale=1.0)

    def test_bad_tol(self):
        with pytest.raises(DomainError):
            is_zero_poly(z1, 0)

    @given(polys)
    def test_grid_agrees_with_coefficients(self, p):
        assert grid_is_zero(p, 1e-9, scale=1.0) == is_zero_poly(p, 1e-9, scale=1.0) or p.max_coeff() < 1e-8

    def test_grid_detects_small_degree_polys(self):
        p = (z1 - 0.3) * (z2 + 0.1j)
        assert not grid_is_zero(p, 1e-9)


class TestText:
    def test_zero(self):
        assert to_text(MultiPoly.zero(2)) == "0"
        assert from_text("0", 2).is_zero()

    def test_graded_lex_order(self):
        p = 1 + z2 + z1 + z1 * z2**2
        lines = to_text(p).splitlines()
        assert lines[0].endswith("z1^1 z2^2")
        assert lines[-1].endswith("z1^0 z2^0")
        assert lines[1].endswith("z1^1 z2^0") and lines[2].endswith("z1^0 z2^1")

    @given(polys)
    def test_round_trip(self, p):
        assert from_text(to_text(p), 2) == p

    def test_three_variables(self):
        x = [MultiPoly.variable(i, 3) for i in range(3)]
        p = (0.5 - 2j) * x[0] * x[2] ** 3 - x[1]
        assert from_text(str(p), 3) == p

    def test_parse_error(self):
        with pytest.raises(DomainError):
            from_text("(1,2) w^3", 2)
