"""
Servicio de mapas de Abel: mapa racional D sobre rayos, mapa discreto d sobre zig-zags,
divisores Y_bw, polígonos pequeños y zig-zags que aportan ecuaciones de tipo 2.
Incluye las reglas de franjas como verificación cruzada.
"""

from collections import deque
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..models.algebra_models import RationalDivisor
from ..models.data_models import (
    NewtonPolygonData, SmallPolygon, TorusGraph, ZigZagPath, natural_key
)
from ..utils.exceptions import InconsistentPropagation, NegativeCoefficient, StripMismatch
from ..utils.logging import app_logger, error_handler
from .graph_service import GraphService
from .toric_service import ToricService


class AbelService:
    """Servicio para los mapas de Abel y los polígonos pequeños"""

    def __init__(self, graph_service: Optional[GraphService] = None,
                 toric_service: Optional[ToricService] = None):
        self.logger = app_logger
        self.error_handler = error_handler
        self.graph_service = graph_service or GraphService()
        self.toric_service = toric_service or ToricService()

    @staticmethod
    def _side_owner(zz: List[ZigZagPath]) -> Dict[Tuple[str, int], ZigZagPath]:
        return {side: path for path in zz for side in path.sides}

    def _propagate(self, g: TorusGraph, increment) -> Dict[str, RationalDivisor]:
        """BFS desde 𝐰 con valor nulo: valor(w) - valor(b) = increment(e) en cada arista"""
        values: Dict[str, RationalDivisor] = {g.root_white: RationalDivisor()}
        adjacency: Dict[str, List] = {v: [] for v in g.vertices}
        for edge in g.edges.values():
            adjacency[edge.black].append(edge)
            adjacency[edge.white].append(edge)

        queue = deque([g.root_white])
        while queue:
            v = queue.popleft()
            for edge in adjacency[v]:
                step = increment(edge)
                if v == edge.white:
                    other, value = edge.black, values[v] - step
                else:
                    other, value = edge.white, values[v] + step
                if other not in values:
                    values[other] = value
                    queue.append(other)
                elif values[other] != value:
                    raise InconsistentPropagation(
                        f"Valores incompatibles en {other} a través de la arista {edge.id}"
                    )

        missing = [v for v in g.vertices if v not in values]
        if missing:
            raise InconsistentPropagation(f"Vértices no alcanzados: {', '.join(missing)}")
        return {v: values[v] for v in g.vertices}

    # Mapa de Abel racional
    def rational_abel(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData) -> Dict[str, RationalDivisor]:
        """D con D(𝐰) = 0 e incrementos por arista sobre los divisores D_ρ"""
        owner = self._side_owner(zz)

        def increment(edge) -> RationalDivisor:
            step = RationalDivisor()
            for side in (1, -1):
                ray = polygon.ray_of(owner[(edge.id, side)].id)
                step = step - RationalDivisor.single(ray.id, Fraction(1, ray.length))
            for ray in polygon.rays:
                pairing = edge.hom[0] * ray.normal[0] + edge.hom[1] * ray.normal[1]
                if pairing:
                    step = step - RationalDivisor.single(ray.id, pairing)
            return step

        try:
            return self._propagate(g, increment)
        except InconsistentPropagation as e:
            self.error_handler.log_error(e, {'graph': g.name, 'map': 'rational'})
            raise

    def visits(self, g: TorusGraph, zz: List[ZigZagPath], black: str) -> Dict[str, int]:
        """Número de pasos de cada zig-zag por el vértice negro"""
        counts = {}
        for path in zz:
            count = self.graph_service.black_visits(g, path).count(black)
            if count:
                counts[path.id] = count
        return counts

    def black_correction(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData, black: str) -> RationalDivisor:
        """Σ_{α∋b} D_ρ(α)/|E_ρ|"""
        total = RationalDivisor()
        for zid, count in self.visits(g, zz, black).items():
            ray = polygon.ray_of(zid)
            total = total + RationalDivisor.single(ray.id, Fraction(count, ray.length))
        return total

    def divisor_n(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData,
                  D: Dict[str, RationalDivisor]) -> RationalDivisor:
        """D_N = Σ_w D(w) - Σ_b D(b) + Σ_b Σ_{α∋b} D_ρ/|E_ρ|"""
        total = RationalDivisor()
        for w in g.whites:
            total = total + D[w]
        for b in g.blacks:
            total = total - D[b] + self.black_correction(g, zz, polygon, b)
        return total

    def y_divisor(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData,
                  D: Dict[str, RationalDivisor], divisor_n: RationalDivisor, black: str,
                  white: Optional[str] = None) -> RationalDivisor:
        """Y_bw = D_N - D(w) + D(b) - Σ_{α∋b} D_ρ/|E_ρ|"""
        white = white or g.root_white
        return divisor_n - D[white] + D[black] - self.black_correction(g, zz, polygon, black)

    def small_polygon(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData,
                      D: Dict[str, RationalDivisor], divisor_n: RationalDivisor, black: str,
                      white: Optional[str] = None,
                      discrete: Optional[Dict[str, RationalDivisor]] = None) -> SmallPolygon:
        """Polígono pequeño N_bw; con el mapa discreto se contrasta con la regla de franjas"""
        white = white or g.root_white
        Y = self.y_divisor(g, zz, polygon, D, divisor_n, black, white)
        rational = self.toric_service.divisor_to_polygon(Y, polygon)
        if discrete is not None:
            strip = self.strip_small_polygon(g, zz, polygon, discrete, divisor_n, black, white)
            for ray_id, value in strip.items():
                if value != Y[ray_id]:
                    raise StripMismatch(
                        f"Regla de franjas {value} frente a Y = {Y[ray_id]} en {ray_id} para ({black}, {white})"
                    )
        return SmallPolygon(black=black, white=white, divisor=Y, polygon=rational,
                            points=rational.lattice_points())

    # Mapa de Abel discreto
    def discrete_abel(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData) -> Dict[str, RationalDivisor]:
        """d sobre vértices y caras con d(f₀) = 0; coeficientes enteros sobre los zig-zags"""
        owner = self._side_owner(zz)
        normals = {path.id: polygon.ray_of(path.id).normal for path in zz}

        def pairing(t: Tuple[int, int]) -> RationalDivisor:
            return RationalDivisor({zid: t[0] * u[0] + t[1] * u[1] for zid, u in normals.items()})

        def increment(edge) -> RationalDivisor:
            plus = owner[(edge.id, 1)].id
            minus = owner[(edge.id, -1)].id
            return -(RationalDivisor.single(plus) + RationalDivisor.single(minus)) - pairing(edge.hom)

        try:
            values = self._propagate(g, increment)
            faces = {fid: self._face_value(g, face, values, owner, pairing) for fid, face in g.faces.items()}
        except InconsistentPropagation as e:
            self.error_handler.log_error(e, {'graph': g.name, 'map': 'discrete'})
            raise

        base = faces[g.root_face]
        result = {v: d - base for v, d in values.items()}
        result.update({fid: d - base for fid, d in faces.items()})
        return result

    def _face_value(self, g: TorusGraph, face, values, owner, pairing) -> RationalDivisor:
        """Reglas de esquina en el levantamiento que empieza en el origen de la primera arista"""
        boundary = face.boundary
        n = len(boundary)
        offsets = [(0, 0)]
        for sign, eid in boundary[:-1]:
            hom = g.edges[eid].hom
            last = offsets[-1]
            offsets.append((last[0] + sign * hom[0], last[1] + sign * hom[1]))

        candidates = []
        for k in range(n):
            s1, e1 = boundary[k]
            s2, e2 = boundary[(k + 1) % n]
            # Vértice entre las aristas k y k+1, en el levantamiento de la arista k+1
            if k + 1 < n:
                t = offsets[k + 1]
            else:
                hom = g.edges[e1].hom
                t = (offsets[k][0] + s1 * hom[0], offsets[k][1] + s1 * hom[1])
            if s1 < 0 and s2 > 0:
                b = g.edges[e2].black
                lifted = values[b] + pairing(t)
                candidates.append(lifted - RationalDivisor.single(owner[(e2, -1)].id))
            elif s1 > 0 and s2 < 0:
                w = g.edges[e1].white
                lifted = values[w] + pairing(t)
                candidates.append(lifted + RationalDivisor.single(owner[(e1, 1)].id))

        if any(c != candidates[0] for c in candidates[1:]):
            raise InconsistentPropagation(f"Las esquinas de la cara {face.id} no coinciden")
        return candidates[0]

    # Ecuaciones de tipo 2
    def type2_coefficients(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData,
                           discrete: Dict[str, RationalDivisor], divisor_n: RationalDivisor,
                           Y: RationalDivisor, black: str, white: Optional[str] = None) -> Dict[str, int]:
        """Coeficiente de ν(α) en -D_N|𝒞 + d(w) - d(b) + Σν(α) + ⌊Y_bw⌋|𝒞"""
        white = white or g.root_white
        difference = discrete[white] - discrete[black]
        floor = Y.floor()
        coefficients = {}
        for path in zz:
            ray = polygon.ray_of(path.id)
            value = -divisor_n[ray.id] + difference[path.id] + 1 + floor[ray.id]
            coefficients[path.id] = int(value)
        return coefficients

    def type2_zigzags(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData,
                      discrete: Dict[str, RationalDivisor], divisor_n: RationalDivisor,
                      Y: RationalDivisor, black: str, white: Optional[str] = None,
                      cross_check: bool = True) -> Dict[str, int]:
        """Multiconjunto de zig-zags con coeficiente positivo (id -> multiplicidad)"""
        white = white or g.root_white
        coefficients = self.type2_coefficients(g, zz, polygon, discrete, divisor_n, Y, black, white)
        negative = {k: v for k, v in coefficients.items() if v < 0}
        if negative:
            raise NegativeCoefficient(f"Coeficientes negativos para {black}: {negative}")

        selected = {k: v for k, v in coefficients.items() if v > 0}
        for zid, multiplicity in selected.items():
            if multiplicity > 1:
                self.error_handler.log_warning(
                    f"ν({zid}) aparece con multiplicidad {multiplicity}: se añaden filas de orden superior",
                    {'black': black}
                )

        if cross_check:
            strip = self.strip_type2(g, zz, polygon, discrete, black, white)
            if strip is not None and strip != set(selected):
                raise StripMismatch(
                    f"Regla de franjas {sorted(strip, key=natural_key)} frente a "
                    f"{sorted(selected, key=natural_key)} para {black}"
                )
        return {k: selected[k] for k in sorted(selected, key=natural_key)}

    # Reglas de franjas
    def _strip_mean(self, polygon: NewtonPolygonData, d: RationalDivisor, ray_id: str) -> Fraction:
        members = polygon.ray(ray_id).zigzags
        return sum((d[zid] for zid in members), Fraction(0)) / len(members)

    def _ray_visits(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData, black: str) -> Dict[str, int]:
        counts = {ray.id: 0 for ray in polygon.rays}
        for zid, count in self.visits(g, zz, black).items():
            counts[polygon.ray_of(zid).id] += count
        return counts

    def strip_small_polygon(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData,
                            discrete: Dict[str, RationalDivisor], divisor_n: RationalDivisor,
                            black: str, white: Optional[str] = None) -> Dict[str, Fraction]:
        """Desplazamiento de cada lado: a_ρ + s_ρ(b) - s_ρ(w) - [b en Z_ρ]/|E_ρ|"""
        white = white or g.root_white
        visits = self._ray_visits(g, zz, polygon, black)
        offsets: Dict[str, Fraction] = {}
        for ray in polygon.rays:
            if visits[ray.id] > 1:
                self.error_handler.log_warning(
                    f"{black} se visita {visits[ray.id]} veces por Z_{ray.id}: se omite la comparación",
                    {'ray': ray.id}
                )
                continue
            value = (divisor_n[ray.id]
                     + self._strip_mean(polygon, discrete[black], ray.id)
                     - self._strip_mean(polygon, discrete[white], ray.id)
                     - Fraction(visits[ray.id], ray.length))
            offsets[ray.id] = value
        return offsets

    def strip_type2(self, g: TorusGraph, zz: List[ZigZagPath], polygon: NewtonPolygonData,
                    discrete: Dict[str, RationalDivisor], black: str,
                    white: Optional[str] = None) -> Optional[set]:
        """Zig-zags de tipo 2 según las franjas; None si algún rayo visita b más de una vez"""
        white = white or g.root_white
        visits = self._ray_visits(g, zz, polygon, black)
        difference = discrete[white] - discrete[black]
        selected = set()
        for ray in polygon.rays:
            if visits[ray.id] > 1:
                return None
            members = list(ray.zigzags)
            values = [difference[zid] for zid in members]
            top = max(values)
            shifted = [v - top for v in values]
            if any(v not in (0, -1) for v in shifted):
                raise StripMismatch(f"Valores de franja fuera de {{-1, 0}} en {ray.id}: {shifted}")
            constant = all(v == 0 for v in shifted)
            if visits[ray.id]:
                if not constant:
                    selected.update(zid for zid, v in zip(members, shifted) if v == 0)
            else:
                if constant:
                    selected.update(members)
                else:
                    selected.update(zid for zid, v in zip(members, shifted) if v == 0)
        return selected

    @staticmethod
    def degrees(discrete: Dict[str, RationalDivisor]) -> Dict[str, int]:
        return {k: int(v.degree()) for k, v in discrete.items()}

