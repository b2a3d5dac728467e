"""
Pruebas de la transformada directa: divisor espectral, Casimires y puntos en el infinito.
"""

import logging
import math
from fractions import Fraction

import pytest

from src.models.algebra_models import LaurentPoly
from src.models.data_models import Casimirs
from src.utils.exceptions import CasimirCollision, EmptyColumn, RootMismatch, WrongCount
from src.utils.logging import PerformanceTimer, app_logger
from tests.conftest import (
    HEXAGON_CASIMIRS, SQUARE_CASIMIRS, SQUARE_DIVISOR, SQUARE_OCTAGON_CASIMIRS, close
)

SQRT_DELTA = math.sqrt(10789129)
HEXAGON_DIVISOR = [
    (-(SQRT_DELTA + 2197) / 572, (-SQRT_DELTA + 3289) / 14196),
    (-(-SQRT_DELTA + 2197) / 572, (SQRT_DELTA + 3289) / 14196),
]


class TestSquare:

    def test_exact_divisor(self, square_spectral):
        assert square_spectral.genus == 1
        assert len(square_spectral.points) == 1
        point = square_spectral.points[0]
        assert point.exact
        assert (point.p, point.q) == SQUARE_DIVISOR

    def test_casimirs(self, square_spectral):
        assert square_spectral.casimirs.values == SQUARE_CASIMIRS

    def test_curve_passes_through_divisor(self, square_spectral):
        p, q = SQUARE_DIVISOR
        assert square_spectral.polynomial.evaluate(p, q) == 0
        for entry in square_spectral.column.values():
            assert entry.evaluate(p, q) == 0

    def test_infinity_points(self, square_spectral):
        assert sorted(square_spectral.infinity) == ['Z1', 'Z2', 'Z3', 'Z4']
        for zid, point in square_spectral.infinity.items():
            assert point.x1 == 1 / SQUARE_CASIMIRS[zid]
            assert point.residual == 0.0

    def test_numeric_mode(self, services):
        fixture = services.fixture_service.load_fixture('square', 'numeric')
        spectral = services.forward_service.forward(fixture.graph, fixture.weights)
        assert not spectral.field.exact
        point = spectral.points[0]
        assert close(point.p, SQUARE_DIVISOR[0], 1e-9)
        assert close(point.q, SQUARE_DIVISOR[1], 1e-9)
        for zid, value in SQUARE_CASIMIRS.items():
            assert close(spectral.casimirs[zid], value, 1e-12)

    def test_document(self, square_spectral):
        document = square_spectral.to_dict()
        assert document['schema'] == 'dimer-spectral/1'
        assert document['divisor'][0]['p'] == '1/42'
        assert document['divisor'][0]['q'] == '1/11'
        assert document['casimirs']['Z1'] == '-1/231'


class TestHexagon:

    def test_divisor_closed_form(self, hexagon_spectral):
        assert hexagon_spectral.genus == 2
        assert len(hexagon_spectral.points) == 2
        for p, q in HEXAGON_DIVISOR:
            assert any(close(pt.p, p) and close(pt.q, q) for pt in hexagon_spectral.points)

    def test_points_are_real_and_sorted(self, hexagon_spectral):
        points = hexagon_spectral.points
        assert all(abs(complex(pt.p).imag) < 1e-9 for pt in points)
        assert complex(points[0].p).real < complex(points[1].p).real

    def test_residuals(self, hexagon_spectral):
        for pt in hexagon_spectral.points:
            assert pt.max_residual <= 1e-8

    def test_casimirs(self, services, hexagon, hexagon_spectral):
        gs = services.graph_service
        zz = gs.zigzag_paths(hexagon.graph)
        for side, value in HEXAGON_CASIMIRS.items():
            assert hexagon_spectral.casimirs[gs.zigzag_through(zz, *side).id] == value


class TestSquareOctagon:

    def test_casimirs(self, services, square_octagon, square_octagon_spectral):
        gs = services.graph_service
        zz = gs.zigzag_paths(square_octagon.graph)
        for side, value in SQUARE_OCTAGON_CASIMIRS.items():
            assert square_octagon_spectral.casimirs[gs.zigzag_through(zz, *side).id] == value

    def test_two_roots_per_ray(self, square_octagon_spectral):
        polygon = square_octagon_spectral.polygon
        for ray in polygon.rays:
            roots = {square_octagon_spectral.infinity[zid].x1 for zid in ray.zigzags}
            assert len(roots) == 2

    def test_single_divisor_point(self, square_octagon_spectral):
        assert len(square_octagon_spectral.points) == 1
        assert square_octagon_spectral.points[0].max_residual <= 1e-8


class TestErrors:

    def test_casimir_collision(self, services, square_octagon_spectral):
        spectral = square_octagon_spectral
        ray = spectral.polygon.rays[0]
        values = dict(spectral.casimirs.values)
        values[ray.zigzags[1]] = values[ray.zigzags[0]]
        zz = services.graph_service.zigzag_paths(
            services.fixture_service.load_fixture('square_octagon').graph
        )
        with pytest.raises(CasimirCollision):
            services.forward_service.infinity_points(
                spectral.polynomial, spectral.polygon, Casimirs(values, spectral.field), zz
            )

    def test_root_mismatch(self, services, square, square_spectral):
        values = dict(square_spectral.casimirs.values)
        values['Z1'] = Fraction(5)
        zz = services.graph_service.zigzag_paths(square.graph)
        with pytest.raises(RootMismatch):
            services.forward_service.infinity_points(
                square_spectral.polynomial, square_spectral.polygon, Casimirs(values), zz
            )

    def test_wrong_count(self, services, square_spectral):
        with pytest.raises(WrongCount):
            services.forward_service.spectral_divisor(square_spectral.column, square_spectral.polynomial, 2)

    def test_empty_column(self, services, square_spectral):
        with pytest.raises(EmptyColumn):
            services.forward_service.spectral_divisor({'b1': LaurentPoly.zero()}, square_spectral.polynomial, 1)

    def test_genus_zero_has_no_points(self, services, square_spectral):
        assert services.forward_service.spectral_divisor(square_spectral.column, square_spectral.polynomial, 0) == []


class TestGaugeInvariance:

    def test_forward_ignores_gauge(self, services, square, square_spectral):
        ks = services.kasteleyn_service
        g = square.graph
        wt = ks.weight_cocycle(g, square.weights)
        gauged = ks.gauge_transform(g, wt, {'b1': Fraction(2), 'w2': Fraction(-3), 'b2': Fraction(1, 5)})
        spectral = services.forward_service.forward_from_cocycle(g, gauged)
        assert spectral.casimirs.values == square_spectral.casimirs.values
        assert spectral.polynomial == square_spectral.polynomial
        assert [(pt.p, pt.q) for pt in spectral.points] == [SQUARE_DIVISOR]



class TestSerialization:

    @pytest.mark.parametrize('name', ['square', 'hexagon', 'square_octagon'])
    def test_spectral_document_round_trip(self, services, name):
        fixture = services.fixture_service.load_fixture(name)
        spectral = services.forward_service.forward(fixture.graph, fixture.weights)
        document = spectral.to_dict()
        parsed = services.fixture_service.parse_spectral(document)
        assert parsed.to_dict() == document
        assert set(parsed.infinity) == set(spectral.infinity)
        assert parsed.polygon.vertices == spectral.polygon.vertices
        assert parsed.column == spectral.column

    def test_infinity_points_survive(self, services, square, square_spectral):
        parsed = services.fixture_service.parse_spectral(square_spectral.to_dict())
        for zid, point in square_spectral.infinity.items():
            assert parsed.infinity[zid].ray == point.ray
            assert parsed.infinity[zid].basis == point.basis
            assert parsed.infinity[zid].x1 == point.x1

    @pytest.mark.parametrize('name', ['square', 'hexagon', 'square_octagon'])
    def test_weight_document_round_trip(self, services, name):
        fixture = services.fixture_service.load_fixture(name)
        document = fixture.weights.to_dict()
        parsed = services.fixture_service.parse_weights(fixture.graph, document)
        assert parsed.to_dict() == document


class TestTimingLogs:

    def test_label_carries_inputs(self):
        timer = PerformanceTimer(app_logger, "determinante de K", {'graph': 'square', 'size': '2x2'})
        assert timer.label == "determinante de K [graph: square, size: 2x2]"
        assert PerformanceTimer(app_logger, "divisor espectral").label == "divisor espectral"

    def test_every_timer_names_the_graph(self, services, square, caplog):
        with caplog.at_level(logging.INFO, logger='dimer_spectral'):
            services.inverse_service.roundtrip(square.graph, square.weights)
        timed = [r.getMessage() for r in caplog.records if r.getMessage().startswith('Operación ')]
        assert len(timed) >= 5
        assert all(f"graph: {square.graph.name}" in message for message in timed)
        assert any('size: 2x2' in message for message in timed)
