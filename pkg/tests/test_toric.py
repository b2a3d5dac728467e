"""
Pruebas de geometría tórica: polígonos racionales, divisores en el infinito y bases de rayo.
"""

from fractions import Fraction

import pytest

from src.models.algebra_models import RationalDivisor, RayBasis
from src.utils.exceptions import NoLatticePoints, NotOrthogonal, NotPrimitive


@pytest.fixture(scope="module")
def square_fan(services, square):
    gs = services.graph_service
    return gs.newton_polygon(gs.zigzag_paths(square.graph))


def uniform(fan, value) -> RationalDivisor:
    return RationalDivisor({ray.id: value for ray in fan.rays})


class TestPolygonDivisor:

    def test_zero_divisor_is_origin(self, services, square_fan):
        polygon = services.toric_service.divisor_to_polygon(RationalDivisor(), square_fan)
        assert polygon.lattice_points() == [(0, 0)]

    def test_unit_divisor_is_diamond(self, services, square_fan):
        polygon = services.toric_service.divisor_to_polygon(uniform(square_fan, 1), square_fan)
        assert polygon.lattice_points() == [(-1, 0), (0, -1), (0, 0), (0, 1), (1, 0)]
        assert sorted(polygon.vertices()) == [(-1, 0), (0, -1), (0, 1), (1, 0)]

    def test_fan_divisor_round_trip(self, services, square_fan):
        ts = services.toric_service
        divisor = ts.fan_divisor(square_fan)
        assert divisor.is_integral()
        polygon = ts.divisor_to_polygon(divisor, square_fan)
        assert sorted(polygon.vertices()) == sorted(square_fan.vertices)
        assert ts.polygon_to_divisor(polygon.vertices(), square_fan) == divisor

    def test_floor_divisor(self, services):
        d = RationalDivisor({'rho1': Fraction(3, 2), 'rho2': Fraction(-1, 3)})
        assert services.toric_service.floor_divisor(d) == RationalDivisor({'rho1': 1, 'rho2': -1})

    def test_empty_polygon(self, services, square_fan):
        polygon = services.toric_service.divisor_to_polygon(uniform(square_fan, Fraction(-1, 3)), square_fan)
        assert polygon.is_empty()
        assert polygon.lattice_points() == []


class TestEdgeMinimizers:

    def test_diamond_side(self, services, square_fan):
        ts = services.toric_service
        polygon = ts.divisor_to_polygon(uniform(square_fan, 1), square_fan)
        ray = next(r for r in square_fan.rays if r.normal == (1, 1))
        assert ts.edge_minimizers(polygon, ray.id) == [(-1, 0), (0, -1)]

    def test_single_point(self, services, square_fan):
        ts = services.toric_service
        polygon = ts.divisor_to_polygon(RationalDivisor(), square_fan)
        for ray in square_fan.rays:
            assert ts.edge_minimizers(polygon, ray.id) == [(0, 0)]

    def test_no_lattice_points(self, services, square_fan):
        ts = services.toric_service
        polygon = ts.divisor_to_polygon(uniform(square_fan, Fraction(-1, 3)), square_fan)
        with pytest.raises(NoLatticePoints):
            ts.edge_minimizers(polygon, square_fan.rays[0].id)


class TestRayBasis:

    def test_horizontal_class(self, services):
        basis = services.toric_service.ray_basis((1, 0), (0, 1))
        assert basis.x1 == (1, 0)
        assert basis.x2 == (0, 1)
        assert abs(basis.det) == 1

    def test_diagonal_class(self, services):
        basis = services.toric_service.ray_basis((1, 1), (-1, 1))
        assert basis.x2 == (0, 1)
        assert basis.x2[0] * -1 + basis.x2[1] * 1 == 1

    def test_hexagon_ray(self, services):
        basis = services.toric_service.ray_basis((-1, 2), (-2, -1))
        assert basis.x2[0] * -2 + basis.x2[1] * -1 == 1
        assert abs(basis.det) == 1

    def test_not_primitive(self, services):
        with pytest.raises(NotPrimitive):
            services.toric_service.ray_basis((2, 0), (0, 1))

    def test_not_orthogonal(self, services):
        with pytest.raises(NotOrthogonal):
            services.toric_service.ray_basis((1, 1), (0, 1))

    def test_coordinates_round_trip(self, services):
        ts = services.toric_service
        basis = ts.ray_basis((1, 1), (-1, 1))
        for m in [(3, -2), (0, 0), (-1, 4)]:
            b, c = ts.to_ray_coordinates(m, basis)
            assert ts.from_ray_coordinates(b, c, basis) == m
        assert ts.to_ray_coordinates((3, -2), basis) == (3, -5)

    def test_pairing_with_normal_is_second_coordinate(self, services):
        basis = services.toric_service.ray_basis((2, 1), (-1, 2))
        for m in [(1, 0), (0, 1), (2, -3)]:
            _, c = basis.to_ray(m)
            assert c == m[0] * -1 + m[1] * 2

    def test_shortest_second_vector_wins(self, services):
        assert services.toric_service.ray_basis((-1, 2), (-2, -1)).x2 == (0, -1)

    def test_leading_part_shifts_with_second_vector(self, services, square, square_spectral):
        gs = services.graph_service
        polygon = gs.newton_polygon(gs.zigzag_paths(square.graph))
        P = square_spectral.polynomial
        for ray in polygon.rays:
            basis = services.toric_service.ray_basis(ray.direction, ray.normal)
            shifted = RayBasis(x1=basis.x1, x2=(basis.x2[0] + basis.x1[0], basis.x2[1] + basis.x1[1]),
                               normal=basis.normal)
            leading, order = services.algebra_service.restrict_to_ray(P, basis)
            leading_shifted, order_shifted = services.algebra_service.restrict_to_ray(P, shifted)
            assert order_shifted == order
            assert leading_shifted.terms == {(b - order, 0): c for (b, _), c in leading.terms.items()}


class TestPositionedPolygon:

    def test_square_is_diamond(self, services, square):
        ctx = services.inverse_service.prepare(square.graph)
        positioned = services.toric_service.positioned_polygon(ctx.divisor_n, ctx.polygon)
        assert sorted(positioned.vertices) == [(-1, 0), (0, -1), (0, 1), (1, 0)]

    def test_square_positioned_matches_det(self, services, square, square_spectral):
        ctx = services.inverse_service.prepare(square.graph)
        positioned = services.toric_service.positioned_polygon(ctx.divisor_n, ctx.polygon)
        assert sorted(positioned.vertices) == sorted(square_spectral.det_newton)
