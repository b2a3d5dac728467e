"""
Pruebas del grafo en el toro: validación, caminos zig-zag, polígono de Newton y emparejamientos.
"""

from dataclasses import replace

import pytest

from src.models.data_models import ZigZagPath, natural_key
from src.utils.exceptions import EulerMismatch, FaceInconsistency, InvalidCycle, NonBipartite
from src.utils.validators import ValidationError
from tests.conftest import fixture_document


class TestBuildGraph:

    def test_square_counts(self, square):
        g = square.graph
        assert len(g.vertices) == 4
        assert len(g.edges) == 8
        assert len(g.faces) == 4
        assert g.euler_characteristic() == 0
        assert g.blacks == ['b1', 'b2']
        assert g.whites == ['w1', 'w2']

    def test_hexagon_counts(self, hexagon):
        g = hexagon.graph
        assert (len(g.vertices), len(g.edges), len(g.faces)) == (10, 15, 5)

    def test_edge_between_blacks_rejected(self, services, square_doc):
        square_doc['edges'][0]['white'] = 'b2'
        with pytest.raises(NonBipartite):
            services.graph_service.build_graph(square_doc)

    def test_missing_face_breaks_euler(self, services, square_doc):
        square_doc['faces'] = square_doc['faces'][:3]
        with pytest.raises(EulerMismatch):
            services.graph_service.build_graph(square_doc)

    def test_face_sign_flip_detected(self, services, square_doc):
        square_doc['faces'][0]['boundary'] = ['-e7', '-e1', '-e3', '+e5']
        with pytest.raises(FaceInconsistency):
            services.graph_service.build_graph(square_doc)

    def test_parallel_cycles_rejected(self, services, square_doc):
        square_doc['cycles']['b'] = ['+e2', '-e1']
        with pytest.raises(InvalidCycle):
            services.graph_service.build_graph(square_doc)

    def test_partial_signs_rejected(self, services, square_doc):
        square_doc['edges'][0]['sign'] = 1
        with pytest.raises(ValidationError):
            services.graph_service.build_graph(square_doc)

    def test_missing_field_rejected(self, services, square_doc):
        del square_doc['cycles']
        with pytest.raises(ValidationError):
            services.graph_service.build_graph(square_doc)

    def test_wrong_schema_rejected(self, services, square_doc):
        square_doc['schema'] = 'dimer-spectral/0'
        with pytest.raises(ValidationError):
            services.graph_service.build_graph(square_doc)

    def test_unknown_root_white(self, services, square_doc):
        square_doc['root_white'] = 'b1'
        with pytest.raises(ValidationError):
            services.graph_service.build_graph(square_doc)


class TestZigZags:

    def test_square_classes(self, services, square):
        zz = services.graph_service.zigzag_paths(square.graph)
        assert [p.id for p in zz] == ['Z1', 'Z2', 'Z3', 'Z4']
        assert [p.homology for p in zz] == [(-1, -1), (1, -1), (1, 1), (-1, 1)]

    def test_square_sides_partition(self, services, square):
        zz = services.graph_service.zigzag_paths(square.graph)
        sides = [side for p in zz for side in p.sides]
        assert len(sides) == 16
        assert len(set(sides)) == 16

    def test_square_membership(self, services, square):
        gs = services.graph_service
        zz = gs.zigzag_paths(square.graph)
        assert gs.zigzag_through(zz, 'e1', 1).sides == (('e1', 1), ('e3', -1), ('e6', 1), ('e8', -1))
        assert gs.zigzag_through(zz, 'e2', 1).homology == (1, 1)
        assert gs.zigzag_through(zz, 'e5', -1).homology == (-1, 1)

    def test_hexagon_classes(self, services, hexagon):
        gs = services.graph_service
        zz = gs.zigzag_paths(hexagon.graph)
        assert len(zz) == 3
        assert gs.zigzag_through(zz, 'w1b3', 1).homology == (-1, 2)
        assert gs.zigzag_through(zz, 'w1b1', 1).homology == (-1, -3)
        assert gs.zigzag_through(zz, 'w1b5', 1).homology == (2, 1)

    def test_square_octagon_classes(self, services, square_octagon):
        gs = services.graph_service
        zz = gs.zigzag_paths(square_octagon.graph)
        classes = sorted(p.homology for p in zz)
        assert classes == [(-1, 0), (-1, 0), (0, -1), (0, -1), (0, 1), (0, 1), (1, 0), (1, 0)]
        assert gs.zigzag_through(zz, 'w6b1', 1).homology == (0, 1)
        assert gs.zigzag_through(zz, 'w8b5', -1).homology == (1, 0)

    def test_fixtures_are_minimal(self, services, square, hexagon, square_octagon):
        gs = services.graph_service
        for fixture in (square, hexagon, square_octagon):
            g = fixture.graph
            assert gs.check_minimality(g, gs.zigzag_paths(g)) == []

    def test_antiparallel_zigzags_weave(self, services, square_octagon):
        gs = services.graph_service
        g = square_octagon.graph
        zz = gs.zigzag_paths(g)
        alpha = gs.zigzag_through(zz, 'w1b1', 1)
        beta = gs.zigzag_through(zz, 'w2b1', -1)
        (ax, ay), (bx, by) = alpha.homology, beta.homology
        assert ax * by - ay * bx == 0
        assert ax * bx + ay * by < 0
        crossings = gs.crossings(g, alpha, beta)
        assert sorted(alpha.sides[i][0] for i, _, _ in crossings) == ['w5b2', 'w6b1']
        assert not gs._has_parallel_bigon(alpha, beta, crossings)

    def test_parallel_bigon_detected(self, services):
        gs = services.graph_service
        sides = (('e1', 1), ('e2', -1))
        alpha = ZigZagPath('Z1', sides, (0, 1))
        beta = ZigZagPath('Z2', sides, (0, -1))
        assert gs._has_parallel_bigon(alpha, beta, [(0, 0, (0, 0)), (1, 1, (0, 0))])
        assert not gs._has_parallel_bigon(alpha, beta, [(0, 1, (0, 0)), (1, 0, (0, 0))])

    def test_doubled_edge_is_self_intersection(self, services, square):
        gs = services.graph_service
        bad = ZigZagPath('Z9', (('e1', 1), ('e1', -1)), (1, 0))
        kinds = [v.kind for v in gs.check_minimality(square.graph, [bad])]
        assert kinds == ['self_intersection']

    @pytest.mark.parametrize('name', ['square', 'hexagon', 'square_octagon'])
    def test_paths_carry_their_ray(self, services, name):
        gs = services.graph_service
        g = services.fixture_service.load_fixture(name).graph
        zz = gs.zigzag_paths(g)
        polygon = gs.newton_polygon(zz)
        for path in zz:
            assert path.ray == polygon.ray_of(path.id).id
            assert path.to_dict()['ray'] == path.ray

    def test_every_side_has_successor(self, services, square_octagon):
        successor = services.graph_service.zigzag_successors(square_octagon.graph)
        assert len(successor) == 2 * len(square_octagon.graph.edges)


class TestNewtonPolygon:

    def test_square(self, services, square):
        gs = services.graph_service
        polygon = gs.newton_polygon(gs.zigzag_paths(square.graph))
        assert polygon.twice_area == 4
        assert polygon.boundary_points == 4
        assert polygon.genus == 1
        assert min(polygon.vertices) == (0, 0)
        assert [r.length for r in polygon.rays] == [1, 1, 1, 1]

    def test_hexagon(self, services, hexagon):
        gs = services.graph_service
        polygon = gs.newton_polygon(gs.zigzag_paths(hexagon.graph))
        assert sorted(polygon.vertices) == [(0, 0), (1, 3), (2, 1)]
        assert polygon.twice_area == 5
        assert polygon.genus == 2

    def test_square_octagon(self, services, square_octagon):
        gs = services.graph_service
        polygon = gs.newton_polygon(gs.zigzag_paths(square_octagon.graph))
        assert polygon.genus == 1
        assert polygon.twice_area == 8
        assert sorted(r.length for r in polygon.rays) == [2, 2, 2, 2]
        assert all(len(r.zigzags) == 2 for r in polygon.rays)

    def test_normals_are_rotated_directions(self, services, hexagon):
        gs = services.graph_service
        polygon = gs.newton_polygon(gs.zigzag_paths(hexagon.graph))
        for ray in polygon.rays:
            assert ray.normal == (-ray.direction[1], ray.direction[0])

    def test_ray_members_in_natural_order(self, services, square_octagon):
        gs = services.graph_service
        polygon = gs.newton_polygon(gs.zigzag_paths(square_octagon.graph))
        for ray in polygon.rays:
            assert list(ray.zigzags) == sorted(ray.zigzags, key=natural_key)

    def test_strip_selection_ignores_member_order(self, services, square_octagon):
        g = square_octagon.graph
        ctx = services.inverse_service.prepare(g)
        rays = [replace(r, zigzags=tuple(reversed(r.zigzags))) for r in ctx.polygon.rays]
        reordered = replace(ctx.polygon, rays=rays)
        abel = services.abel_service
        for black in g.blacks:
            expected = abel.strip_type2(g, ctx.zigzags, ctx.polygon, ctx.discrete_abel, black)
            assert abel.strip_type2(g, ctx.zigzags, reordered, ctx.discrete_abel, black) == expected


class TestMatchings:

    def test_square_matchings(self, services, square):
        matchings = services.graph_service.enumerate_matchings(square.graph)
        assert len(matchings) == 8
        assert all(services.graph_service.is_perfect_matching(square.graph, m.edges) for m in matchings)

    def test_deterministic_matching_is_perfect(self, services, hexagon, square_octagon):
        gs = services.graph_service
        for fixture in (hexagon, square_octagon):
            m = gs.perfect_matching(fixture.graph)
            assert gs.is_perfect_matching(fixture.graph, m.edges)

    def test_reference_matching_from_document(self, services, square):
        m0 = services.graph_service.reference_matching(square.graph)
        assert m0.edges == ('e3', 'e7')
        assert services.graph_service.matching_class(square.graph, m0, m0) == (0, 0)

    def test_spanning_tree_size(self, services, square_octagon):
        tree = services.graph_service.spanning_tree(square_octagon.graph)
        assert len(tree) == len(square_octagon.graph.vertices) - 1

    @pytest.mark.parametrize('name', ['square', 'hexagon', 'square_octagon'])
    def test_document_round_trip(self, services, name):
        g = services.graph_service.build_graph(fixture_document(name))
        rebuilt = services.graph_service.build_graph(g.to_dict())
        assert rebuilt.edges == g.edges
        assert rebuilt.faces == g.faces
        assert rebuilt.to_dict() == g.to_dict()
