"""
Modelos de datos para la aplicación.
Define las estructuras del grafo en el toro, los datos espectrales y las respuestas.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..config.settings import SchemaConfig
from .algebra_models import (
    EXACT, NUMERIC, LaurentPoly, RationalDivisor, RationalPolygon, RayBasis,
    ScalarField, field_of, parse_scalar
)

SignedEdge = Tuple[int, str]
EdgeSide = Tuple[str, int]

BLACK = 'black'
WHITE = 'white'


def natural_key(identifier: str) -> Tuple:
    """Orden natural de identificadores: b2 < b10"""
    return tuple(int(part) if part.isdigit() else part for part in re.split(r'(\d+)', identifier))


def parse_signed_edge(token: str) -> SignedEdge:
    """Convierte "+e1" / "-e1" / "e1" en (signo, arista)"""
    token = str(token).strip()
    if token.startswith('-'):
        return -1, token[1:]
    if token.startswith('+'):
        return 1, token[1:]
    return 1, token


def format_signed_edge(signed: SignedEdge) -> str:
    return ('+' if signed[0] > 0 else '-') + signed[1]


@dataclass(frozen=True)
class Vertex:
    """Vértice coloreado del grafo bipartito"""
    id: str
    color: str


@dataclass(frozen=True)
class Edge:
    """Arista orientada negro -> blanco con su desplazamiento homológico"""
    id: str
    black: str
    white: str
    hom: Tuple[int, int]
    sign: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        result = {'id': self.id, 'black': self.black, 'white': self.white,
                  'dz': self.hom[0], 'dw': self.hom[1]}
        if self.sign is not None:
            result['sign'] = self.sign
        return result


@dataclass(frozen=True)
class Face:
    """Cara del grafo: frontera cíclica de aristas con signo"""
    id: str
    boundary: Tuple[SignedEdge, ...]

    def __len__(self) -> int:
        return len(self.boundary)

    def to_dict(self) -> Dict[str, Any]:
        return {'id': self.id, 'boundary': [format_signed_edge(s) for s in self.boundary]}


@dataclass
class TorusGraph:
    """Grafo bipartito en el toro con caras, ciclos generadores y datos de referencia"""
    name: str
    vertices: Dict[str, Vertex]
    edges: Dict[str, Edge]
    faces: Dict[str, Face]
    root_white: str
    root_face: str
    cycles: Dict[str, Tuple[SignedEdge, ...]]
    reference_matching: Optional[Tuple[str, ...]] = None
    cycle_signs: Dict[str, int] = field(default_factory=lambda: {'a': 1, 'b': 1})

    @property
    def blacks(self) -> List[str]:
        return [v.id for v in self.vertices.values() if v.color == BLACK]

    @property
    def whites(self) -> List[str]:
        return [v.id for v in self.vertices.values() if v.color == WHITE]

    @property
    def has_explicit_signs(self) -> bool:
        return any(e.sign is not None for e in self.edges.values())

    def edges_at(self, vertex_id: str) -> List[Edge]:
        return [e for e in self.edges.values() if vertex_id in (e.black, e.white)]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'schema': SchemaConfig.SCHEMA_VERSION,
            'name': self.name,
            'vertices': [{'id': v.id, 'color': v.color} for v in self.vertices.values()],
            'edges': [e.to_dict() for e in self.edges.values()],
            'faces': [f.to_dict() for f in self.faces.values()],
            'root_white': self.root_white,
            'root_face': self.root_face,
            'cycles': {k: [format_signed_edge(s) for s in loop] for k, loop in self.cycles.items()},
            'cycle_signs': dict(self.cycle_signs)
        }
        if self.reference_matching:
            result['reference_matching'] = list(self.reference_matching)
        return result


@dataclass(frozen=True)
class ZigZagPath:
    """Camino zig-zag: sucesión cíclica de lados de arista (e, +1) negro->blanco, (e, -1) blanco->negro"""
    id: str
    sides: Tuple[EdgeSide, ...]
    homology: Tuple[int, int]
    ray: Optional[str] = None

    def edges(self) -> List[str]:
        return [eid for eid, _ in self.sides]

    def contains(self, side: EdgeSide) -> bool:
        return side in self.sides

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'sides': [format_signed_edge((s, eid)) for eid, s in self.sides],
            'class': list(self.homology),
            'ray': self.ray
        }


@dataclass(frozen=True)
class Matching:
    """Emparejamiento perfecto"""
    edges: Tuple[str, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {'edges': list(self.edges)}


@dataclass(frozen=True)
class MinimalityViolation:
    kind: str
    zigzags: Tuple[str, ...]
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'zigzags': list(self.zigzags), 'detail': self.detail}


@dataclass(frozen=True)
class NewtonRay:
    """Lado E_ρ del polígono: normal interior primitiva, longitud reticular y zig-zags asignados"""
    id: str
    direction: Tuple[int, int]
    normal: Tuple[int, int]
    length: int
    zigzags: Tuple[str, ...]


@dataclass
class NewtonPolygonData:
    """Polígono de Newton con su abanico normal"""
    vertices: List[Tuple[int, int]]
    rays: List[NewtonRay]
    genus: int
    twice_area: int
    boundary_points: int

    def ray(self, ray_id: str) -> NewtonRay:
        for ray in self.rays:
            if ray.id == ray_id:
                return ray
        raise KeyError(ray_id)

    def ray_of(self, zigzag_id: str) -> NewtonRay:
        for ray in self.rays:
            if zigzag_id in ray.zigzags:
                return ray
        raise KeyError(zigzag_id)

    def offset(self, ray_id: str) -> int:
        """a_ρ con N ⊂ {⟨m, u_ρ⟩ ≥ -a_ρ}"""
        u = self.ray(ray_id).normal
        return -min(v[0] * u[0] + v[1] * u[1] for v in self.vertices)

    def offsets(self) -> Dict[str, int]:
        return {ray.id: self.offset(ray.id) for ray in self.rays}

    def translated(self, shift: Tuple[int, int]) -> 'NewtonPolygonData':
        return NewtonPolygonData(
            vertices=[(v[0] + shift[0], v[1] + shift[1]) for v in self.vertices],
            rays=list(self.rays),
            genus=self.genus,
            twice_area=self.twice_area,
            boundary_points=self.boundary_points
        )

    def to_dict(self) -> Dict[str, Any]:
        offsets = self.offsets()
        return {
            'vertices': [list(v) for v in self.vertices],
            'rays': [
                {'id': r.id, 'direction': list(r.direction), 'normal': list(r.normal),
                 'length': r.length, 'offset': offsets[r.id], 'zigzags': list(r.zigzags)}
                for r in self.rays
            ],
            'genus': self.genus,
            'area': str(Fraction(self.twice_area, 2)),
            'boundary_points': self.boundary_points
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'NewtonPolygonData':
        rays = [
            NewtonRay(id=r['id'], direction=tuple(r['direction']), normal=tuple(r['normal']),
                      length=int(r['length']), zigzags=tuple(r['zigzags']))
            for r in data['rays']
        ]
        return cls(
            vertices=[tuple(v) for v in data['vertices']],
            rays=rays,
            genus=int(data['genus']),
            twice_area=int(Fraction(data['area']) * 2),
            boundary_points=int(data['boundary_points'])
        )


@dataclass
class WeightClass:
    """Clase de cohomología: pesos de cara (salvo f₀) y monodromías A, B"""
    faces: Dict[str, Any]
    A: Any
    B: Any
    field: ScalarField = EXACT

    def __post_init__(self):
        for key, value in list(self.faces.items()) + [('A', self.A), ('B', self.B)]:
            if value == 0:
                raise ValueError(f"Peso nulo en {key}")

    def coordinates(self) -> Dict[str, Any]:
        """Coordenadas ordenadas: caras, luego A y B"""
        result = {fid: self.faces[fid] for fid in sorted(self.faces, key=natural_key)}
        result['A'] = self.A
        result['B'] = self.B
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': SchemaConfig.SCHEMA_VERSION,
            'mode': self.field.name,
            'faces': {fid: self.field.to_json(v) for fid, v in sorted(self.faces.items(), key=lambda kv: natural_key(kv[0]))},
            'A': self.field.to_json(self.A),
            'B': self.field.to_json(self.B)
        }


@dataclass
class EdgeCocycle:
    """Representante wt de la clase: valor por arista"""
    values: Dict[str, Any]
    field: ScalarField = EXACT

    def __getitem__(self, edge_id: str):
        return self.values[edge_id]

    def to_dict(self) -> Dict[str, Any]:
        return {eid: self.field.to_json(v) for eid, v in sorted(self.values.items(), key=lambda kv: natural_key(kv[0]))}


@dataclass
class SignCocycle:
    """Signos de Kasteleyn por arista"""
    values: Dict[str, int]

    def __getitem__(self, edge_id: str) -> int:
        return self.values[edge_id]

    def to_dict(self) -> Dict[str, int]:
        return dict(sorted(self.values.items(), key=lambda kv: natural_key(kv[0])))


@dataclass
class Casimirs:
    """Valor C_α por zig-zag"""
    values: Dict[str, Any]
    field: ScalarField = EXACT

    def __getitem__(self, zigzag_id: str):
        return self.values[zigzag_id]

    def to_dict(self) -> Dict[str, Any]:
        return {k: self.field.to_json(v) for k, v in sorted(self.values.items(), key=lambda kv: natural_key(kv[0]))}


@dataclass
class SpectralPoint:
    """Punto (p, q) del divisor con los residuos de la columna y de P"""
    p: Any
    q: Any
    residuals: Dict[str, float] = field(default_factory=dict)
    exact: bool = False

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        scalar_field = EXACT if self.exact else NUMERIC
        return {
            'p': scalar_field.to_json(self.p),
            'q': scalar_field.to_json(self.q),
            'max_residual': self.max_residual
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SpectralPoint':
        p = parse_scalar(data['p'])
        q = parse_scalar(data['q'])
        exact = isinstance(p, Fraction) and isinstance(q, Fraction)
        if not exact:
            p, q = complex(p), complex(q)
        residuals = {'max': float(data['max_residual'])} if data.get('max_residual') else {}
        return cls(p=p, q=q, residuals=residuals, exact=exact)


@dataclass
class InfinityPoint:
    """Punto en el infinito ν(α) sobre D_ρ: x₁ = 1/C_α en la base del rayo"""
    zigzag: str
    ray: str
    basis: RayBasis
    casimir: Any
    residual: float = 0.0

    @property
    def x1(self):
        return 1 / self.casimir

    def to_dict(self, scalar_field: ScalarField) -> Dict[str, Any]:
        return {
            'ray': self.ray,
            'basis': self.basis.to_dict(),
            'casimir': scalar_field.to_json(self.casimir),
            'x1': scalar_field.to_json(self.x1),
            'residual': self.residual
        }

    @classmethod
    def from_dict(cls, zigzag: str, data: Dict[str, Any], scalar_field: ScalarField) -> 'InfinityPoint':
        return cls(
            zigzag=zigzag,
            ray=data['ray'],
            basis=RayBasis.from_dict(data['basis']),
            casimir=scalar_field.from_json(data['casimir']),
            residual=float(data.get('residual', 0.0))
        )


@dataclass
class SpectralData:
    """Datos espectrales: curva P, divisor S y parametrización ν"""
    polynomial: LaurentPoly
    points: List[SpectralPoint]
    infinity: Dict[str, InfinityPoint]
    casimirs: Casimirs
    polygon: Optional[NewtonPolygonData] = None
    genus: int = 0
    reference_matching: Optional[Matching] = None
    column: Dict[str, LaurentPoly] = field(default_factory=dict)
    det_newton: List[Tuple[int, int]] = field(default_factory=list)
    graph_name: str = ''

    @property
    def field(self) -> ScalarField:
        return self.casimirs.field

    def to_dict(self) -> Dict[str, Any]:
        result = {
            'schema': SchemaConfig.SCHEMA_VERSION,
            'graph': self.graph_name,
            'mode': self.field.name,
            'genus': self.genus,
            'P': self.polynomial.to_dict(),
            'divisor': [pt.to_dict() for pt in self.points],
            'casimirs': self.casimirs.to_dict(),
            'infinity': {k: v.to_dict(self.field) for k, v in sorted(self.infinity.items(), key=lambda kv: natural_key(kv[0]))},
            'column': {b: poly.to_dict() for b, poly in sorted(self.column.items(), key=lambda kv: natural_key(kv[0]))}
        }
        if self.polygon is not None:
            result['newton'] = self.polygon.to_dict()
        if self.det_newton:
            result['det_newton'] = [list(v) for v in self.det_newton]
        if self.reference_matching is not None:
            result['reference_matching'] = list(self.reference_matching.edges)
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SpectralData':
        """Lee divisor y Casimires; P, infinito, polígono y columna son opcionales"""
        raw_casimirs = {k: parse_scalar(v) for k, v in data['casimirs'].items()}
        numeric = any(not isinstance(v, Fraction) for v in raw_casimirs.values())
        scalar_field = NUMERIC if numeric or data.get('mode') == 'numeric' else EXACT
        casimirs = Casimirs({k: scalar_field.coerce(v) for k, v in raw_casimirs.items()}, scalar_field)
        polynomial = LaurentPoly.from_dict(data['P']) if 'P' in data else LaurentPoly.zero(scalar_field)
        matching = Matching(tuple(data['reference_matching'])) if data.get('reference_matching') else None
        return cls(
            polynomial=polynomial,
            points=[SpectralPoint.from_dict(pt) for pt in data['divisor']],
            infinity={k: InfinityPoint.from_dict(k, v, scalar_field) for k, v in data.get('infinity', {}).items()},
            casimirs=casimirs,
            polygon=NewtonPolygonData.from_dict(data['newton']) if 'newton' in data else None,
            genus=int(data.get('genus', len(data['divisor']))),
            reference_matching=matching,
            column={b: LaurentPoly.from_dict(poly) for b, poly in data.get('column', {}).items()},
            det_newton=[tuple(v) for v in data.get('det_newton', [])],
            graph_name=data.get('graph', '')
        )


@dataclass
class AbelData:
    """Mapas de Abel: d discreto (sobre zig-zags) y D racional (sobre rayos)"""
    discrete: Dict[str, RationalDivisor] = field(default_factory=dict)
    rational: Dict[str, RationalDivisor] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'discrete': {k: v.to_dict() for k, v in sorted(self.discrete.items(), key=lambda kv: natural_key(kv[0]))},
            'rational': {k: v.to_dict() for k, v in sorted(self.rational.items(), key=lambda kv: natural_key(kv[0]))}
        }


@dataclass
class SmallPolygon:
    """Polígono pequeño N_{bw} con sus puntos enteros"""
    black: str
    white: str
    divisor: RationalDivisor
    polygon: RationalPolygon
    points: List[Tuple[int, int]]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'black': self.black,
            'white': self.white,
            'divisor': self.divisor.to_dict(),
            'lattice_points': [list(p) for p in self.points]
        }


@dataclass
class LinearSystemV:
    """Sistema 𝕍_{bw}: columnas = puntos enteros del polígono pequeño"""
    black: str
    columns: List[Tuple[int, int]]
    rows: List[List[Any]]
    labels: List[str]
    field: ScalarField = EXACT

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.columns)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'black': self.black,
            'columns': [list(c) for c in self.columns],
            'labels': list(self.labels),
            'rows': [[NUMERIC.to_json(v) if isinstance(v, complex) else self.field.to_json(v) for v in row]
                     for row in self.rows]
        }


@dataclass(frozen=True)
class Wedge:
    """Cuña b -e-> w -e'-> b' a lo largo del zig-zag α"""
    white: str
    edge_in: str
    edge_out: str
    black_in: str
    black_out: str
    zigzag: str


@dataclass
class InverseResult:
    """Resultado de la transformada inversa"""
    weights: WeightClass
    V: Dict[str, LaurentPoly]
    systems: Dict[str, LinearSystemV] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        result = self.weights.to_dict()
        result['V'] = {b: poly.to_dict() for b, poly in sorted(self.V.items(), key=lambda kv: natural_key(kv[0]))}
        return result


@dataclass
class RoundTripReport:
    """Errores por coordenada de inverse(forward(w)) frente a w"""
    graph_name: str
    expected: Dict[str, Any]
    recovered: Dict[str, Any]
    absolute_errors: Dict[str, float]
    relative_errors: Dict[str, float]

    @property
    def max_relative_error(self) -> float:
        return max(self.relative_errors.values(), default=0.0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'schema': SchemaConfig.SCHEMA_VERSION,
            'graph': self.graph_name,
            'absolute_errors': dict(sorted(self.absolute_errors.items(), key=lambda kv: natural_key(kv[0]))),
            'relative_errors': dict(sorted(self.relative_errors.items(), key=lambda kv: natural_key(kv[0]))),
            'max_relative_error': self.max_relative_error,
            'recovered': {k: NUMERIC.to_json(v) if isinstance(v, complex) else EXACT.to_json(v)
                          for k, v in sorted(self.recovered.items(), key=lambda kv: natural_key(kv[0]))}
        }


@dataclass
class Fixture:
    """Ejemplo resuelto: grafo, pesos y género esperado"""
    name: str
    graph: TorusGraph
    weights: Any
    genus: int

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'graph': self.graph.name, 'genus': self.genus,
                'vertices': len(self.graph.vertices), 'edges': len(self.graph.edges),
                'faces': len(self.graph.faces)}


@dataclass
class CommandResponse:
    """Modelo base para las respuestas de la CLI"""
    success: bool
    data: Optional[Dict[str, Any]] = None
    error: Optional[Dict[str, str]] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convierte a diccionario"""
        result = {'schema': SchemaConfig.SCHEMA_VERSION}
        if self.data:
            result.update(self.data)
        if self.error:
            result['error'] = self.error
        return result

    @property
    def exit_code(self) -> int:
        if self.success:
            return 0
        return 2 if self.error and self.error.get('kind') == 'ValidationError' else 1


@dataclass
class GraphContext:
    """Datos combinatorios derivados del grafo que usa la transformada inversa"""
    zigzags: List[ZigZagPath]
    polygon: NewtonPolygonData
    abel: AbelData
    divisor_n: RationalDivisor
    signs: Any

    @property
    def rational_abel(self) -> Dict[str, RationalDivisor]:
        return self.abel.rational

    @property
    def discrete_abel(self) -> Dict[str, RationalDivisor]:
        return self.abel.discrete
