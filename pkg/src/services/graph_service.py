"""
Servicio de combinatoria de grafos bipartitos en el toro.
Construye y valida el grafo, recorre los caminos zig-zag y calcula el polígono de Newton.
"""

import math
from collections import deque
from dataclasses import replace
from typing import Any, Dict, List, Optional, Set, Tuple

from ..models.data_models import (
    BLACK, WHITE, Edge, EdgeSide, Face, Matching, MinimalityViolation, NewtonPolygonData,
    NewtonRay, SignedEdge, TorusGraph, Vertex, ZigZagPath, natural_key, parse_signed_edge
)
from ..utils.exceptions import (
    DegenerateNewton, EulerMismatch, FaceInconsistency, InvalidCycle, NonBipartite,
    NoPerfectMatching, OddFace
)
from ..utils.logging import app_logger, error_handler, PerformanceTimer
from ..utils.validators import GraphSpecValidator, ValidationError


class GraphService:
    """Servicio para construir grafos en el toro y derivar sus caminos zig-zag"""

    def __init__(self):
        self.logger = app_logger
        self.error_handler = error_handler

    # Construcción y validación
    def build_graph(self, spec: Dict[str, Any]) -> TorusGraph:
        """Construye un TorusGraph validando todos sus invariantes"""
        GraphSpecValidator.validate(spec)
        name = spec.get('name', 'graph')

        try:
            with PerformanceTimer(self.logger, "construcción del grafo", {
                'graph': name, 'vertices': len(spec['vertices']), 'edges': len(spec['edges'])
            }):
                vertices = self._parse_vertices(spec['vertices'])
                edges = self._parse_edges(spec['edges'], vertices)
                faces = self._parse_faces(spec['faces'])

                blacks = [v for v in vertices.values() if v.color == BLACK]
                if len(blacks) * 2 != len(vertices):
                    raise NonBipartite(f"#B = {len(blacks)} distinto de #W = {len(vertices) - len(blacks)}")

                chi = len(vertices) - len(edges) + len(faces)
                if chi != 0:
                    raise EulerMismatch(f"#V - #E + #F = {chi}, se esperaba 0")

                self._check_face_incidence(edges, faces)
                for face in faces.values():
                    if len(face) % 2:
                        raise OddFace(f"La cara {face.id} tiene {len(face)} aristas")
                    self._check_chain(face.boundary, edges, closed_error=FaceInconsistency, label=face.id)
                    if self.chain_homology(face.boundary, edges) != (0, 0):
                        raise FaceInconsistency(f"Suma homológica no nula alrededor de {face.id}")

                root_white = spec['root_white']
                if root_white not in vertices or vertices[root_white].color != WHITE:
                    raise ValidationError(f"root_white {root_white} no es un vértice blanco")
                root_face = spec['root_face']
                if root_face not in faces:
                    raise ValidationError(f"root_face {root_face} no es una cara")

                cycles = {key: tuple(parse_signed_edge(t) for t in spec['cycles'][key]) for key in ('a', 'b')}
                self._check_cycles(cycles, edges)

                cycle_signs = {'a': 1, 'b': 1}
                cycle_signs.update({k: int(v) for k, v in spec.get('cycle_signs', {}).items()})

                signed = [e for e in edges.values() if e.sign is not None]
                if signed and len(signed) != len(edges):
                    raise ValidationError("Los signos explícitos deben darse en todas las aristas o en ninguna")

                graph = TorusGraph(
                    name=name,
                    vertices=vertices,
                    edges=edges,
                    faces=faces,
                    root_white=root_white,
                    root_face=root_face,
                    cycles=cycles,
                    cycle_signs=cycle_signs
                )

                if spec.get('reference_matching'):
                    matching = tuple(sorted(spec['reference_matching'], key=natural_key))
                    if not self.is_perfect_matching(graph, matching):
                        raise NoPerfectMatching(f"reference_matching no es un emparejamiento perfecto: {matching}")
                    graph.reference_matching = matching

                self.logger.info(f"Grafo {name}: {len(vertices)} vértices, {len(edges)} aristas, {len(faces)} caras")
                return graph

        except Exception as e:
            self.error_handler.log_error(e, {'graph': name})
            raise

    @staticmethod
    def _parse_vertices(raw: List[Dict[str, Any]]) -> Dict[str, Vertex]:
        vertices = {}
        for item in raw:
            vid = str(item['id'])
            if vid in vertices:
                raise ValidationError(f"Vértice duplicado: {vid}")
            vertices[vid] = Vertex(vid, item['color'])
        return {vid: vertices[vid] for vid in sorted(vertices, key=natural_key)}

    @staticmethod
    def _parse_edges(raw: List[Dict[str, Any]], vertices: Dict[str, Vertex]) -> Dict[str, Edge]:
        edges = {}
        for item in raw:
            eid = str(item['id'])
            if eid in edges:
                raise ValidationError(f"Arista duplicada: {eid}")
            black, white = str(item['black']), str(item['white'])
            for vid in (black, white):
                if vid not in vertices:
                    raise ValidationError(f"La arista {eid} usa un vértice desconocido: {vid}")
            if vertices[black].color != BLACK or vertices[white].color != WHITE:
                raise NonBipartite(f"La arista {eid} no une un vértice negro con uno blanco")
            edges[eid] = Edge(eid, black, white, (int(item.get('dz', 0)), int(item.get('dw', 0))), item.get('sign'))
        return {eid: edges[eid] for eid in sorted(edges, key=natural_key)}

    @staticmethod
    def _parse_faces(raw: List[Any]) -> Dict[str, Face]:
        faces = {}
        for index, item in enumerate(raw):
            if isinstance(item, dict):
                fid, boundary = str(item['id']), item['boundary']
            else:
                fid, boundary = f"f{index + 1}", item
            if fid in faces:
                raise ValidationError(f"Cara duplicada: {fid}")
            faces[fid] = Face(fid, tuple(parse_signed_edge(t) for t in boundary))
        return {fid: faces[fid] for fid in sorted(faces, key=natural_key)}

    @staticmethod
    def _check_face_incidence(edges: Dict[str, Edge], faces: Dict[str, Face]) -> None:
        counts = {eid: {1: 0, -1: 0} for eid in edges}
        for face in faces.values():
            for sign, eid in face.boundary:
                if eid not in counts:
                    raise FaceInconsistency(f"La cara {face.id} usa la arista desconocida {eid}")
                counts[eid][sign] += 1
        for eid, count in counts.items():
            if count[1] != 1 or count[-1] != 1:
                raise FaceInconsistency(
                    f"La arista {eid} debe aparecer una vez con cada signo (+{count[1]}, -{count[-1]})"
                )

    @staticmethod
    def endpoints(signed: SignedEdge, edges: Dict[str, Edge]) -> Tuple[str, str]:
        """Origen y destino de una arista recorrida con signo"""
        sign, eid = signed
        edge = edges[eid]
        return (edge.black, edge.white) if sign > 0 else (edge.white, edge.black)

    def _check_chain(self, chain: Tuple[SignedEdge, ...], edges: Dict[str, Edge],
                     closed_error=FaceInconsistency, label: str = '') -> None:
        if not chain:
            raise closed_error(f"Cadena vacía en {label}")
        for sign, eid in chain:
            if eid not in edges:
                raise closed_error(f"Arista desconocida {eid} en {label}")
        for k in range(len(chain)):
            _, head = self.endpoints(chain[k], edges)
            tail, _ = self.endpoints(chain[(k + 1) % len(chain)], edges)
            if head != tail:
                raise closed_error(f"La cadena {label} no es cerrada y conexa en la posición {k}")

    @staticmethod
    def chain_homology(chain: Tuple[SignedEdge, ...], edges: Dict[str, Edge]) -> Tuple[int, int]:
        x = sum(sign * edges[eid].hom[0] for sign, eid in chain)
        y = sum(sign * edges[eid].hom[1] for sign, eid in chain)
        return x, y

    def _check_cycles(self, cycles: Dict[str, Tuple[SignedEdge, ...]], edges: Dict[str, Edge]) -> None:
        for key, loop in cycles.items():
            self._check_chain(loop, edges, closed_error=InvalidCycle, label=f"ciclo {key}")
        a = self.chain_homology(cycles['a'], edges)
        b = self.chain_homology(cycles['b'], edges)
        if abs(a[0] * b[1] - a[1] * b[0]) != 1:
            raise InvalidCycle(f"Las clases de a {a} y b {b} no forman una base de Z²")

    # Caminos zig-zag
    @staticmethod
    def zigzag_successors(g: TorusGraph) -> Dict[EdgeSide, EdgeSide]:
        """Relación sucesor de lados de arista derivada de las fronteras de caras"""
        successor: Dict[EdgeSide, EdgeSide] = {}
        for face in g.faces.values():
            boundary = face.boundary
            n = len(boundary)
            for k in range(n):
                (s1, e1), (s2, e2) = boundary[k], boundary[(k + 1) % n]
                if s1 > 0 and s2 < 0:
                    successor[(e1, 1)] = (e2, -1)
                elif s1 < 0 and s2 > 0:
                    successor[(e2, -1)] = (e1, 1)
        return successor

    def zigzag_paths(self, g: TorusGraph) -> List[ZigZagPath]:
        """Partición de los 2·#E lados de arista en caminos zig-zag cerrados"""
        successor = self.zigzag_successors(g)
        visited: Set[EdgeSide] = set()
        paths: List[ZigZagPath] = []

        for eid in g.edges:
            for side in (1, -1):
                start = (eid, side)
                if start in visited:
                    continue
                sides = []
                current = start
                while current not in visited:
                    visited.add(current)
                    sides.append(current)
                    current = successor[current]
                homology = (
                    sum(s * g.edges[e].hom[0] for e, s in sides),
                    sum(s * g.edges[e].hom[1] for e, s in sides)
                )
                paths.append(ZigZagPath(f"Z{len(paths) + 1}", tuple(sides), homology))

        self.logger.debug(f"{len(paths)} caminos zig-zag en {g.name}")
        return self._with_rays(paths)

    def _with_rays(self, paths: List[ZigZagPath]) -> List[ZigZagPath]:
        """Anota el lado E_ρ de cada zig-zag cuando el polígono de Newton está definido"""
        try:
            polygon = self.newton_polygon(paths)
        except DegenerateNewton:
            return paths
        return [replace(path, ray=polygon.ray_of(path.id).id) for path in paths]

    @staticmethod
    def zigzag_through(zz: List[ZigZagPath], edge_id: str, side: int) -> ZigZagPath:
        for path in zz:
            if (edge_id, side) in path.sides:
                return path
        raise KeyError(f"Ningún zig-zag contiene ({edge_id}, {side})")

    @staticmethod
    def black_visits(g: TorusGraph, path: ZigZagPath) -> List[str]:
        """Vértices negros visitados, uno por cada lado (e, +1)"""
        return [g.edges[e].black for e, s in path.sides if s > 0]

    @staticmethod
    def white_visits(g: TorusGraph, path: ZigZagPath) -> List[str]:
        return [g.edges[e].white for e, s in path.sides if s > 0]

    # Polígono de Newton
    def newton_polygon(self, zz: List[ZigZagPath]) -> NewtonPolygonData:
        """
        Polígono convexo cuyos vectores de lado antihorarios son las clases de los zig-zags.

        Los zig-zags de un mismo lado E_ρ se listan en orden natural de identificador y no en
        el orden en que cortan una arista de referencia. Nada aguas abajo depende de ese orden:
        las franjas usan medias y conjuntos sobre E_ρ y D_ρ depende sólo del lado.
        """
        classes = [p.homology for p in zz]
        if not classes or any(c == (0, 0) for c in classes):
            raise DegenerateNewton("Hay caminos zig-zag con clase nula")
        if (sum(c[0] for c in classes), sum(c[1] for c in classes)) != (0, 0):
            raise DegenerateNewton("La suma de las clases de los zig-zags no es cero")

        groups: Dict[Tuple[int, int], List[ZigZagPath]] = {}
        lengths: Dict[Tuple[int, int], int] = {}
        for path in zz:
            x, y = path.homology
            d = math.gcd(abs(x), abs(y))
            direction = (x // d, y // d)
            groups.setdefault(direction, []).append(path)
            lengths[direction] = lengths.get(direction, 0) + d

        directions = sorted(groups, key=lambda v: math.atan2(v[1], v[0]) % (2 * math.pi))

        points = [(0, 0)]
        for direction in directions:
            x, y = points[-1]
            step = lengths[direction]
            points.append((x + step * direction[0], y + step * direction[1]))
        points.pop()

        anchor = min(range(len(points)), key=lambda k: points[k])
        directions = directions[anchor:] + directions[:anchor]
        points = points[anchor:] + points[:anchor]
        origin = points[0]
        vertices = [(x - origin[0], y - origin[1]) for x, y in points]

        twice_area = 0
        for k in range(len(vertices)):
            x1, y1 = vertices[k]
            x2, y2 = vertices[(k + 1) % len(vertices)]
            twice_area += x1 * y2 - x2 * y1
        if twice_area <= 0:
            raise DegenerateNewton("El polígono de Newton tiene área nula")

        boundary = sum(lengths.values())
        genus = (twice_area - boundary + 2) // 2

        rays = []
        for index, direction in enumerate(directions):
            members = sorted((p.id for p in groups[direction]), key=natural_key)
            rays.append(NewtonRay(
                id=f"rho{index + 1}",
                direction=direction,
                normal=(-direction[1], direction[0]),
                length=lengths[direction],
                zigzags=tuple(members)
            ))

        self.logger.info(f"Polígono de Newton: {len(rays)} lados, área {twice_area}/2, género {genus}")
        return NewtonPolygonData(vertices=vertices, rays=rays, genus=genus,
                                 twice_area=twice_area, boundary_points=boundary)

    def check_minimality(self, g: TorusGraph, zz: List[ZigZagPath]) -> List[MinimalityViolation]:
        """
        Lista de violaciones de minimalidad sobre los levantamientos al recubrimiento universal.
        Clases no paralelas: tantos cruces como |det|. Clases paralelas del mismo sentido: ningún cruce.
        Clases antiparalelas: los cruces de cada par de levantamientos van en orden opuesto (sin biláteros paralelos).
        """
        violations: List[MinimalityViolation] = []
        for path in zz:
            if path.homology == (0, 0):
                violations.append(MinimalityViolation('zero_class', (path.id,), "clase homológica nula"))
            repeated = sorted({e for e, s in path.sides if (e, -s) in path.sides}, key=natural_key)
            if repeated:
                violations.append(MinimalityViolation(
                    'self_intersection', (path.id,), f"recorre ambos lados de {', '.join(repeated)}"
                ))

        for i in range(len(zz)):
            for j in range(i + 1, len(zz)):
                alpha, beta = zz[i], zz[j]
                crossings = self.crossings(g, alpha, beta)
                det = alpha.homology[0] * beta.homology[1] - alpha.homology[1] * beta.homology[0]
                if det != 0:
                    if len(crossings) != abs(det):
                        violations.append(MinimalityViolation(
                            'intersection_count', (alpha.id, beta.id),
                            f"{len(crossings)} cruces frente a |det| = {abs(det)}"
                        ))
                    continue
                same_sense = alpha.homology[0] * beta.homology[0] + alpha.homology[1] * beta.homology[1] > 0
                if same_sense and crossings:
                    violations.append(MinimalityViolation(
                        'parallel_bigon', (alpha.id, beta.id), f"{len(crossings)} cruces entre zig-zags paralelos"
                    ))
                elif not same_sense and self._has_parallel_bigon(alpha, beta, crossings):
                    violations.append(MinimalityViolation(
                        'parallel_bigon', (alpha.id, beta.id), "dos cruces recorridos en el mismo orden"
                    ))

        if violations:
            self.error_handler.log_warning(f"{len(violations)} violaciones de minimalidad", {'graph': g.name})
        return violations

    @staticmethod
    def lift_offsets(g: TorusGraph, path: ZigZagPath) -> List[Tuple[int, int]]:
        """Traslación del vértice negro de cada arista del levantamiento que empieza en el origen"""
        x, y = 0, 0
        offsets = []
        for eid, side in path.sides:
            hx, hy = g.edges[eid].hom
            offsets.append((x, y) if side > 0 else (x - hx, y - hy))
            x, y = x + side * hx, y + side * hy
        return offsets

    def crossings(self, g: TorusGraph, alpha: ZigZagPath, beta: ZigZagPath) -> List[Tuple[int, int, Tuple[int, int]]]:
        """Cruces en el toro: (posición en α, posición en β, diferencia de traslaciones de la arista común)"""
        position = {side: k for k, side in enumerate(beta.sides)}
        offsets_a = self.lift_offsets(g, alpha)
        offsets_b = self.lift_offsets(g, beta)
        result = []
        for k, (eid, side) in enumerate(alpha.sides):
            m = position.get((eid, -side))
            if m is None:
                continue
            (ax, ay), (bx, by) = offsets_a[k], offsets_b[m]
            result.append((k, m, (ax - bx, ay - by)))
        return result

    @staticmethod
    def _has_parallel_bigon(alpha: ZigZagPath, beta: ZigZagPath,
                            crossings: List[Tuple[int, int, Tuple[int, int]]], periods: int = 2) -> bool:
        """Busca dos cruces de un mismo par de levantamientos que α y β recorren en el mismo orden"""
        ax, ay = alpha.homology
        bx, by = beta.homology
        norm = bx * bx + by * by
        for i1, j1, (dx1, dy1) in crossings:
            for i2, j2, (dx2, dy2) in crossings:
                for n in range(-periods, periods + 1):
                    vx, vy = dx2 - dx1 + n * ax, dy2 - dy1 + n * ay
                    # Mismo levantamiento de β si v = k·[β]
                    if vx * by - vy * bx != 0 or (vx * bx + vy * by) % norm != 0:
                        continue
                    k = (vx * bx + vy * by) // norm
                    step_a = i2 - i1 + n * len(alpha.sides)
                    step_b = j2 - j1 + k * len(beta.sides)
                    if step_a * step_b > 0:
                        return True
        return False

    # Emparejamientos
    @staticmethod
    def is_perfect_matching(g: TorusGraph, edge_ids) -> bool:
        covered: List[str] = []
        for eid in edge_ids:
            if eid not in g.edges:
                return False
            covered.extend([g.edges[eid].black, g.edges[eid].white])
        return sorted(covered) == sorted(g.vertices)

    def perfect_matching(self, g: TorusGraph) -> Matching:
        """Emparejamiento determinista: voraz y luego caminos aumentantes en orden fijo"""
        blacks, whites = g.blacks, g.whites
        if len(blacks) != len(whites):
            raise NoPerfectMatching(f"#B = {len(blacks)} distinto de #W = {len(whites)}")

        incident = {b: [e for e in g.edges.values() if e.black == b] for b in blacks}
        match_white: Dict[str, Edge] = {}
        match_black: Dict[str, Edge] = {}

        for b in blacks:
            for edge in incident[b]:
                if edge.white not in match_white:
                    match_white[edge.white] = edge
                    match_black[b] = edge
                    break

        def augment(b: str, seen: Set[str]) -> bool:
            ordered = sorted(incident[b], key=lambda e: e.white in match_white)
            for edge in ordered:
                w = edge.white
                if w in seen:
                    continue
                seen.add(w)
                if w not in match_white or augment(match_white[w].black, seen):
                    match_white[w] = edge
                    match_black[b] = edge
                    return True
            return False

        for b in blacks:
            if b not in match_black and not augment(b, set()):
                raise NoPerfectMatching(f"El vértice {b} no puede emparejarse")

        return Matching(tuple(sorted((e.id for e in match_black.values()), key=natural_key)))

    def reference_matching(self, g: TorusGraph) -> Matching:
        """Emparejamiento de referencia 𝔪₀: el del documento o el determinista"""
        if g.reference_matching:
            return Matching(tuple(g.reference_matching))
        return self.perfect_matching(g)

    @staticmethod
    def enumerate_matchings(g: TorusGraph) -> List[Matching]:
        """Todos los emparejamientos perfectos por búsqueda exhaustiva"""
        blacks = g.blacks
        incident = {b: [e for e in g.edges.values() if e.black == b] for b in blacks}
        found: List[Matching] = []

        def search(k: int, used: Set[str], chosen: List[str]) -> None:
            if k == len(blacks):
                found.append(Matching(tuple(sorted(chosen, key=natural_key))))
                return
            for edge in incident[blacks[k]]:
                if edge.white not in used:
                    used.add(edge.white)
                    chosen.append(edge.id)
                    search(k + 1, used, chosen)
                    chosen.pop()
                    used.discard(edge.white)

        search(0, set(), [])
        return found

    @staticmethod
    def matching_class(g: TorusGraph, m: Matching, m0: Optional[Matching] = None) -> Tuple[int, int]:
        """Clase homológica [𝔪 - 𝔪₀]"""
        x = sum(g.edges[e].hom[0] for e in m.edges)
        y = sum(g.edges[e].hom[1] for e in m.edges)
        if m0 is not None:
            x -= sum(g.edges[e].hom[0] for e in m0.edges)
            y -= sum(g.edges[e].hom[1] for e in m0.edges)
        return x, y

    @staticmethod
    def spanning_tree(g: TorusGraph) -> List[str]:
        """Árbol generador BFS desde el primer vértice, aristas en orden natural"""
        adjacency: Dict[str, List[Edge]] = {v: [] for v in g.vertices}
        for edge in g.edges.values():
            adjacency[edge.black].append(edge)
            adjacency[edge.white].append(edge)

        start = next(iter(g.vertices))
        seen = {start}
        tree: List[str] = []
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for edge in adjacency[v]:
                other = edge.white if edge.black == v else edge.black
                if other not in seen:
                    seen.add(other)
                    tree.append(edge.id)
                    queue.append(other)
        return tree
