"""
Pruebas del álgebra de Laurent: aritmética, división exacta, determinantes y núcleos.
"""

from fractions import Fraction

import pytest

from src.models.algebra_models import EXACT, NUMERIC, LaurentPoly, convex_hull
from src.utils.exceptions import NullspaceDim0, NullspaceDimHigh, ZeroPolynomial


def poly(terms, field=EXACT) -> LaurentPoly:
    return LaurentPoly(terms, field)


class TestLaurentPoly:

    def test_zero_coefficients_dropped(self):
        f = poly({(0, 0): 1, (1, 0): 0})
        assert f.support() == [(0, 0)]

    def test_product_with_negative_exponents(self):
        f = poly({(-1, 0): 1, (0, 0): 1})
        g = poly({(1, 0): 1, (0, 0): -1})
        assert f * g == poly({(1, 0): 1, (-1, 0): -1})

    def test_addition_cancels(self):
        f = poly({(1, 2): Fraction(1, 3)})
        assert (f - f).is_zero()
        assert f + 1 == poly({(1, 2): Fraction(1, 3), (0, 0): 1})

    def test_divide_exact(self):
        f = poly({(0, 0): 1, (1, 0): 1})
        g = poly({(0, 0): 1, (0, 1): -1, (-1, 0): 2})
        assert (f * g).divide_exact(f) == g

    def test_divide_not_exact(self):
        f = poly({(0, 0): 1, (1, 0): 1})
        with pytest.raises(ValueError):
            poly({(2, 0): 1, (0, 0): 1}).divide_exact(f)

    def test_evaluate_exact(self):
        f = poly({(-1, 0): 1, (0, 0): -42})
        assert f.evaluate(Fraction(1, 42), Fraction(7)) == 0

    def test_numeric_field_join(self):
        f = poly({(0, 0): 1}) + poly({(1, 0): 1j}, NUMERIC)
        assert f.field is NUMERIC
        assert f.coefficient((1, 0)) == 1j

    def test_shift_and_power(self):
        f = poly({(0, 0): 1, (0, 1): 1})
        assert (f ** 2).shift(1, -1) == poly({(1, -1): 1, (1, 0): 2, (1, 1): 1})

    def test_serialization(self):
        f = poly({(0, 1): Fraction(-10, 11), (1, 0): 2})
        assert f.to_dict()['terms'][0] == {'i': 0, 'j': 1, 'value': '-10/11'}
        assert LaurentPoly.from_dict(f.to_dict()) == f

    def test_convex_hull(self):
        hull = convex_hull([(0, 0), (2, 1), (1, 3), (1, 1), (1, 2)])
        assert sorted(hull) == [(0, 0), (1, 3), (2, 1)]


class TestRayRestriction:

    def test_leading_part(self, services):
        basis = services.toric_service.ray_basis((1, 0), (0, 1))
        f = poly({(0, 0): 3, (1, 0): -1, (0, 1): 5, (2, -1): 7})
        leading, order = services.algebra_service.restrict_to_ray(f, basis)
        assert order == -1
        assert leading == poly({(2, 0): 7})

    def test_lift_undoes_restriction(self, services):
        alg = services.algebra_service
        basis = services.toric_service.ray_basis((1, 1), (-1, 1))
        f = poly({(0, 0): 1, (1, 1): -2, (0, 1): 4})
        leading, order = alg.restrict_to_ray(f, basis)
        assert alg.lift_from_ray(leading, order, basis) == poly({(0, 0): 1, (1, 1): -2})

    def test_zero_polynomial(self, services):
        basis = services.toric_service.ray_basis((1, 0), (0, 1))
        with pytest.raises(ZeroPolynomial):
            services.algebra_service.restrict_to_ray(LaurentPoly.zero(), basis)


class TestNullspace:

    def test_exact_one_dimensional(self, services):
        vector = services.algebra_service.nullspace_vector([[Fraction(42), Fraction(1)]], 2, EXACT)
        assert vector == [1, -42]

    def test_exact_dimension_zero(self, services):
        with pytest.raises(NullspaceDim0):
            services.algebra_service.nullspace_vector([[1, 0], [0, 1]], 2, EXACT)

    def test_exact_dimension_high(self, services):
        with pytest.raises(NullspaceDimHigh):
            services.algebra_service.nullspace_vector([[1, 1, 1]], 3, EXACT)

    def test_numeric_one_dimensional(self, services):
        vector = services.algebra_service.nullspace_vector([[1.0, 1 / 11]], 2, NUMERIC)
        assert abs(vector[0] * 1 + vector[1] / 11) < 1e-12
        assert max(abs(x) for x in vector) == pytest.approx(1.0)

    def test_numeric_dimension_zero(self, services):
        with pytest.raises(NullspaceDim0):
            services.algebra_service.nullspace_vector([[1.0, 2.0], [3.0, -1.0]], 2, NUMERIC)

    def test_numeric_dimension_high(self, services):
        with pytest.raises(NullspaceDimHigh):
            services.algebra_service.nullspace_vector([[1.0, 2.0, 3.0]], 3, NUMERIC)

    def test_rank(self, services):
        rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
        assert services.algebra_service.rank(rows, 3, EXACT) == 2
        assert services.algebra_service.rank([[complex(x) for x in r] for r in rows], 3, NUMERIC) == 2


class TestDeterminants:

    def test_small_matrix(self, services):
        M = [[poly({(0, 0): 1}), poly({(1, 0): 1})],
             [poly({(0, 1): 1}), poly({(0, 0): 2})]]
        assert services.algebra_service.det(M) == poly({(0, 0): 2, (1, 1): -1})

    def test_bareiss_matches_matching_expansion(self, services, hexagon):
        ks = services.kasteleyn_service
        g = hexagon.graph
        eps = ks.kasteleyn_sign(g)
        wt = ks.weight_cocycle(g, hexagon.weights)
        K = ks.kasteleyn_matrix(g, wt, eps)
        assert len(K) > 4
        assert services.algebra_service.det(K) == ks.matching_expansion(g, wt, eps)

    def test_adjugate_column_annihilates(self, services, square):
        ks = services.kasteleyn_service
        alg = services.algebra_service
        g = square.graph
        eps = ks.kasteleyn_sign(g)
        K = ks.kasteleyn_matrix(g, ks.weight_cocycle(g, square.weights), eps)
        det_k = alg.det(K)
        column = alg.adjugate_column(K, 0)
        product = alg.mat_vec(K, column)
        assert product[0] == det_k
        assert product[1].is_zero()
