"""
Pruebas de Kasteleyn: signos, cociclos, polinomio característico y Casimires.
"""

from fractions import Fraction

import pytest

from src.models.algebra_models import LaurentPoly
from src.models.data_models import WeightClass
from src.utils.exceptions import InconsistentClass, Unsatisfiable
from tests.conftest import SQUARE_CASIMIRS


@pytest.fixture(scope="module")
def square_parts(services, square):
    ks = services.kasteleyn_service
    g = square.graph
    eps = ks.kasteleyn_sign(g)
    wt = ks.weight_cocycle(g, square.weights)
    return g, eps, wt


class TestSigns:

    @pytest.mark.parametrize('name', ['square', 'hexagon', 'square_octagon'])
    def test_face_condition(self, services, name):
        ks = services.kasteleyn_service
        g = services.fixture_service.load_fixture(name).graph
        eps = ks.kasteleyn_sign(g)
        for face in g.faces.values():
            assert ks.loop_sign(face.boundary, eps) == ks.face_sign(len(face))

    def test_face_sign_rule(self, services):
        ks = services.kasteleyn_service
        assert ks.face_sign(4) == -1
        assert ks.face_sign(6) == 1
        assert ks.face_sign(8) == -1

    def test_explicit_signs_violating_faces(self, services, square_doc):
        for edge in square_doc['edges']:
            edge['sign'] = 1
        g = services.graph_service.build_graph(square_doc)
        with pytest.raises(Unsatisfiable):
            services.kasteleyn_service.kasteleyn_sign(g)

    def test_cycle_signs_respected(self, services, square_parts):
        g, eps, _ = square_parts
        ks = services.kasteleyn_service
        assert ks.loop_sign(g.cycles['a'], eps) == g.cycle_signs['a']
        assert ks.loop_sign(g.cycles['b'], eps) == g.cycle_signs['b']

    def test_matching_signs_are_uniform_per_class(self, services, square_parts):
        g, eps, _ = square_parts
        m0 = services.graph_service.reference_matching(g)
        signs = services.kasteleyn_service.matching_signs(g, eps, m0)
        assert signs[(0, 0)] == {1}
        assert all(len(values) == 1 for values in signs.values())


class TestCocycle:

    def test_reproduces_class(self, services, square, square_parts):
        g, _, wt = square_parts
        wc = services.kasteleyn_service.cocycle_class(g, wt)
        assert wc.faces == square.weights.faces
        assert (wc.A, wc.B) == (7, 11)

    def test_trivial_on_spanning_tree(self, services, square_parts):
        g, _, wt = square_parts
        for eid in services.graph_service.spanning_tree(g):
            assert wt[eid] == 1

    def test_missing_face(self, services, square):
        wc = WeightClass(faces={'f1': Fraction(2)}, A=Fraction(7), B=Fraction(11))
        with pytest.raises(InconsistentClass):
            services.kasteleyn_service.weight_cocycle(square.graph, wc)

    def test_root_face_product_must_be_one(self, services, square):
        faces = {'f1': Fraction(2), 'f2': Fraction(3), 'f3': Fraction(5), 'f4': Fraction(1)}
        wc = WeightClass(faces=faces, A=Fraction(7), B=Fraction(11))
        with pytest.raises(InconsistentClass):
            services.kasteleyn_service.weight_cocycle(square.graph, wc)

    def test_explicit_cocycle_zero_weight(self, services, square):
        weights = {eid: 1 for eid in square.graph.edges}
        weights['e3'] = 0
        with pytest.raises(InconsistentClass):
            services.kasteleyn_service.explicit_cocycle(square.graph, weights)

    def test_edge_weights_document(self, services, square):
        fs = services.fixture_service
        edges = {eid: str(k + 2) for k, eid in enumerate(square.graph.edges)}
        wc = fs.parse_weights(square.graph, {'schema': 'dimer-spectral/1', 'edges': edges}, 'exact')
        wt = services.kasteleyn_service.explicit_cocycle(
            square.graph, {eid: Fraction(v) for eid, v in edges.items()}
        )
        assert wc.faces['f1'] == services.kasteleyn_service.loop_product(square.graph.faces['f1'].boundary, wt)


class TestCharacteristicPolynomial:

    def test_square_exact(self, services, square_parts):
        g, eps, wt = square_parts
        ks = services.kasteleyn_service
        K = ks.kasteleyn_matrix(g, wt, eps)
        P = ks.characteristic_polynomial(g, K, services.graph_service.reference_matching(g), wt, eps)
        expected = LaurentPoly({
            (0, 0): Fraction(40, 3),
            (0, 1): -11,
            (0, -1): Fraction(-10, 11),
            (-1, 0): Fraction(-1, 21),
            (1, 0): -14,
        })
        assert P == expected
        assert P.evaluate(Fraction(1, 42), Fraction(1, 11)) == 0

    def test_normalized_by_reference_matching(self, services, square_parts):
        g, eps, wt = square_parts
        ks = services.kasteleyn_service
        m0 = services.graph_service.reference_matching(g)
        K = ks.kasteleyn_matrix(g, wt, eps)
        P = ks.characteristic_polynomial(g, K, m0, wt, eps)
        assert P * ks.reference_monomial(g, m0, wt, eps) == ks.determinant(K)

    def test_newton_polygon_of_det(self, services, hexagon):
        ks = services.kasteleyn_service
        gs = services.graph_service
        g = hexagon.graph
        eps = ks.kasteleyn_sign(g)
        K = ks.kasteleyn_matrix(g, ks.weight_cocycle(g, hexagon.weights), eps)
        hull = ks.determinant(K).newton_hull
        polygon = gs.newton_polygon(gs.zigzag_paths(g))
        origin = min(hull)
        assert sorted((x - origin[0], y - origin[1]) for x, y in hull) == sorted(polygon.vertices)

    def test_gauge_invariance(self, services, square_parts):
        g, eps, wt = square_parts
        ks = services.kasteleyn_service
        m0 = services.graph_service.reference_matching(g)
        gauged = ks.gauge_transform(g, wt, {'b1': Fraction(3), 'w2': Fraction(5, 7), 'b2': Fraction(-2)})
        P = ks.characteristic_polynomial(g, ks.kasteleyn_matrix(g, wt, eps), m0, wt, eps)
        P_gauged = ks.characteristic_polynomial(g, ks.kasteleyn_matrix(g, gauged, eps), m0, gauged, eps)
        assert P == P_gauged
        zz = services.graph_service.zigzag_paths(g)
        assert ks.casimirs(g, wt, eps, zz).values == ks.casimirs(g, gauged, eps, zz).values


class TestCasimirs:

    def test_square(self, services, square_parts):
        g, eps, wt = square_parts
        zz = services.graph_service.zigzag_paths(g)
        casimirs = services.kasteleyn_service.casimirs(g, wt, eps, zz)
        assert casimirs.values == SQUARE_CASIMIRS

    def test_product_is_one(self, services, square_parts):
        g, eps, wt = square_parts
        zz = services.graph_service.zigzag_paths(g)
        product = Fraction(1)
        for value in services.kasteleyn_service.casimirs(g, wt, eps, zz).values.values():
            product *= value
        assert product == 1

    def test_serialized_as_rationals(self, services, square_parts):
        g, eps, wt = square_parts
        zz = services.graph_service.zigzag_paths(g)
        assert services.kasteleyn_service.casimirs(g, wt, eps, zz).to_dict()['Z1'] == '-1/231'
