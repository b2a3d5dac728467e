"""
Modelos algebraicos: escalares, polinomios de Laurent en dos variables,
divisores racionales en el infinito, polígonos racionales y bases de rayo.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, Iterable, List, Optional, Tuple

from ..config.settings import NumericConfig

Exponent = Tuple[int, int]


class ScalarField:
    """Cuerpo de escalares intercambiable: racionales exactos o complejos en doble precisión"""

    def __init__(self, name: str):
        self.name = name
        self.exact = name == 'exact'

    def coerce(self, value: Any):
        """Convierte un valor al cuerpo"""
        if self.exact:
            if isinstance(value, complex):
                raise TypeError(f"Valor complejo {value} en modo exacto")
            if isinstance(value, float):
                return Fraction(value).limit_denominator(NumericConfig.RATIONAL_DENOMINATOR_LIMIT)
            return Fraction(value)
        return complex(value)

    def is_zero(self, value: Any, scale: float = 1.0) -> bool:
        if self.exact:
            return value == 0
        return abs(value) <= NumericConfig.ZERO_TOL * max(1.0, scale)

    def to_json(self, value: Any) -> Any:
        if self.exact:
            value = Fraction(value)
            return f"{value.numerator}/{value.denominator}"
        value = complex(value)
        return {'re': value.real, 'im': value.imag}

    def from_json(self, raw: Any):
        return self.coerce(parse_scalar(raw))

    def __repr__(self) -> str:
        return f"ScalarField({self.name})"


EXACT = ScalarField('exact')
NUMERIC = ScalarField('numeric')


def parse_scalar(raw: Any):
    """Interpreta "num/den", enteros, flotantes o {"re","im"}"""
    if isinstance(raw, dict):
        return complex(float(raw.get('re', 0.0)), float(raw.get('im', 0.0)))
    if isinstance(raw, bool):
        raise ValueError(f"Escalar inválido: {raw}")
    if isinstance(raw, (int, Fraction)):
        return Fraction(raw)
    if isinstance(raw, float):
        return raw
    if isinstance(raw, str):
        return Fraction(raw.strip())
    if isinstance(raw, complex):
        return raw
    raise ValueError(f"Escalar inválido: {raw}")


def field_of(value: Any) -> ScalarField:
    return NUMERIC if isinstance(value, (complex, float)) else EXACT


def join_fields(*fields: ScalarField) -> ScalarField:
    return EXACT if all(f.exact for f in fields) else NUMERIC


class LaurentPoly:
    """Polinomio de Laurent disperso en z, w: mapa exponente (i, j) -> coeficiente"""

    def __init__(self, terms: Optional[Dict[Exponent, Any]] = None, scalar_field: ScalarField = EXACT):
        self.field = scalar_field
        cleaned = {}
        for (i, j), coeff in (terms or {}).items():
            value = scalar_field.coerce(coeff)
            if not scalar_field.is_zero(value):
                cleaned[(int(i), int(j))] = value
        self.terms: Dict[Exponent, Any] = dict(sorted(cleaned.items()))

    # Constructores
    @classmethod
    def zero(cls, scalar_field: ScalarField = EXACT) -> 'LaurentPoly':
        return cls({}, scalar_field)

    @classmethod
    def constant(cls, value: Any, scalar_field: ScalarField = EXACT) -> 'LaurentPoly':
        return cls({(0, 0): value}, scalar_field)

    @classmethod
    def monomial(cls, i: int, j: int, value: Any = 1, scalar_field: ScalarField = EXACT) -> 'LaurentPoly':
        return cls({(i, j): value}, scalar_field)

    # Consultas
    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> List[Exponent]:
        return list(self.terms.keys())

    def coefficient(self, exponent: Exponent):
        return self.terms.get(tuple(exponent), self.field.coerce(0))

    def leading_term(self) -> Tuple[Exponent, Any]:
        """Término líder en orden lexicográfico (i mayor primero)"""
        exponent = max(self.terms)
        return exponent, self.terms[exponent]

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def bounding_box(self) -> Tuple[int, int, int, int]:
        xs = [e[0] for e in self.terms]
        ys = [e[1] for e in self.terms]
        return min(xs), max(xs), min(ys), max(ys)

    @cached_property
    def newton_hull(self) -> List[Exponent]:
        """Vértices del polígono de Newton del soporte, en sentido antihorario"""
        return convex_hull(self.terms.keys())

    # Aritmética
    def _join(self, other: 'LaurentPoly') -> ScalarField:
        return join_fields(self.field, other.field)

    def _lift(self, other: Any) -> 'LaurentPoly':
        if isinstance(other, LaurentPoly):
            return other
        return LaurentPoly.constant(other, join_fields(self.field, field_of(other)))

    def __add__(self, other: Any) -> 'LaurentPoly':
        other = self._lift(other)
        target = self._join(other)
        result = dict(self.terms)
        for e, c in other.terms.items():
            result[e] = result.get(e, 0) + c
        return LaurentPoly(result, target)

    __radd__ = __add__

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly({e: -c for e, c in self.terms.items()}, self.field)

    def __sub__(self, other: Any) -> 'LaurentPoly':
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> 'LaurentPoly':
        return self._lift(other) + (-self)

    def __mul__(self, other: Any) -> 'LaurentPoly':
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        target = self._join(other)
        result: Dict[Exponent, Any] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2)
                result[key] = result.get(key, 0) + c1 * c2
        return LaurentPoly(result, target)

    __rmul__ = __mul__

    def scale(self, value: Any) -> 'LaurentPoly':
        target = join_fields(self.field, field_of(value))
        return LaurentPoly({e: c * value for e, c in self.terms.items()}, target)

    def shift(self, di: int, dj: int) -> 'LaurentPoly':
        """Multiplica por el monomio z^di w^dj"""
        return LaurentPoly({(i + di, j + dj): c for (i, j), c in self.terms.items()}, self.field)

    def __pow__(self, n: int) -> 'LaurentPoly':
        if n < 0:
            raise ValueError("Solo potencias no negativas")
        result = LaurentPoly.constant(1, self.field)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other, field_of(other))
        if self.field.exact and other.field.exact:
            return self.terms == other.terms
        diff = self - other
        return diff.is_zero()

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def divide_exact(self, divisor: 'LaurentPoly') -> 'LaurentPoly':
        """División exacta en el anillo de Laurent por términos líderes lexicográficos"""
        if divisor.is_zero():
            raise ZeroDivisionError("División por el polinomio cero")
        target = self._join(divisor)
        if self.is_zero():
            return LaurentPoly.zero(target)

        lead_exp, lead_coeff = divisor.leading_term()
        a_min_i, a_max_i, a_min_j, a_max_j = self.bounding_box()
        d_min_i, d_max_i, d_min_j, d_max_j = divisor.bounding_box()
        box = (a_min_i - d_min_i, a_max_i - d_max_i, a_min_j - d_min_j, a_max_j - d_max_j)
        scale = self.max_abs()

        remainder = dict(self.terms)
        quotient: Dict[Exponent, Any] = {}
        max_steps = (box[1] - box[0] + 1) * (box[3] - box[2] + 1) + 1 if box[0] <= box[1] and box[2] <= box[3] else 1

        for _ in range(max(max_steps, 1)):
            remainder = {e: c for e, c in remainder.items() if not target.is_zero(c, scale)}
            if not remainder:
                return LaurentPoly(quotient, target)
            r_exp = max(remainder)
            q_exp = (r_exp[0] - lead_exp[0], r_exp[1] - lead_exp[1])
            if not (box[0] <= q_exp[0] <= box[1] and box[2] <= q_exp[1] <= box[3]):
                break
            q_coeff = remainder[r_exp] / lead_coeff
            quotient[q_exp] = quotient.get(q_exp, 0) + q_coeff
            for (i, j), c in divisor.terms.items():
                key = (i + q_exp[0], j + q_exp[1])
                remainder[key] = remainder.get(key, 0) - q_coeff * c

        remainder = {e: c for e, c in remainder.items() if not target.is_zero(c, scale)}
        if remainder:
            raise ValueError("La división no es exacta")
        return LaurentPoly(quotient, target)

    # Evaluación
    def evaluate(self, z: Any, w: Any):
        total = 0
        for (i, j), c in self.terms.items():
            total += c * (z ** i) * (w ** j)
        return total

    def relative_residual(self, z: complex, w: complex) -> float:
        """|f(z,w)| / Σ|c_m||z^i w^j|"""
        value = 0j
        magnitude = 0.0
        for (i, j), c in self.terms.items():
            term = complex(c) * (complex(z) ** i) * (complex(w) ** j)
            value += term
            magnitude += abs(term)
        if magnitude == 0.0:
            return 0.0
        return abs(value) / magnitude

    def to_field(self, scalar_field: ScalarField) -> 'LaurentPoly':
        if scalar_field is self.field:
            return self
        return LaurentPoly(dict(self.terms), scalar_field)

    # Serialización
    def to_dict(self) -> Dict[str, Any]:
        if self.field.exact:
            terms = [{'i': i, 'j': j, 'value': self.field.to_json(c)} for (i, j), c in self.terms.items()]
        else:
            terms = [{'i': i, 'j': j, 're': complex(c).real, 'im': complex(c).imag} for (i, j), c in self.terms.items()]
        return {'field': self.field.name, 'terms': terms}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'LaurentPoly':
        scalar_field = EXACT if data.get('field', 'exact') == 'exact' else NUMERIC
        terms = {}
        for term in data.get('terms', []):
            raw = term['value'] if 'value' in term else {'re': term.get('re', 0.0), 'im': term.get('im', 0.0)}
            terms[(int(term['i']), int(term['j']))] = scalar_field.from_json(raw)
        return cls(terms, scalar_field)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (i, j), c in self.terms.items():
            parts.append(f"({c})*z^{i}*w^{j}")
        return " + ".join(parts)


def convex_hull(points: Iterable[Exponent]) -> List[Exponent]:
    """Envolvente convexa (cadena monótona), vértices en sentido antihorario"""
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: List[Exponent] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Exponent] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


class RationalDivisor:
    """Combinación lineal con coeficientes racionales de símbolos (rayos o zig-zags)"""

    def __init__(self, coefficients: Optional[Dict[str, Any]] = None):
        self.coefficients: Dict[str, Fraction] = {}
        for key, value in (coefficients or {}).items():
            value = Fraction(value)
            if value != 0:
                self.coefficients[key] = value

    @classmethod
    def single(cls, key: str, value: Any = 1) -> 'RationalDivisor':
        return cls({key: value})

    def __getitem__(self, key: str) -> Fraction:
        return self.coefficients.get(key, Fraction(0))

    def keys(self) -> List[str]:
        return sorted(self.coefficients)

    def items(self):
        return sorted(self.coefficients.items())

    def __add__(self, other: 'RationalDivisor') -> 'RationalDivisor':
        result = dict(self.coefficients)
        for key, value in other.coefficients.items():
            result[key] = result.get(key, Fraction(0)) + value
        return RationalDivisor(result)

    def __neg__(self) -> 'RationalDivisor':
        return RationalDivisor({k: -v for k, v in self.coefficients.items()})

    def __sub__(self, other: 'RationalDivisor') -> 'RationalDivisor':
        return self + (-other)

    def __mul__(self, scalar: Any) -> 'RationalDivisor':
        return RationalDivisor({k: v * Fraction(scalar) for k, v in self.coefficients.items()})

    __rmul__ = __mul__

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, RationalDivisor) and self.coefficients == other.coefficients

    def __hash__(self):
        return hash(tuple(self.items()))

    def degree(self) -> Fraction:
        return sum(self.coefficients.values(), Fraction(0))

    def is_integral(self) -> bool:
        return all(v.denominator == 1 for v in self.coefficients.values())

    def floor(self) -> 'RationalDivisor':
        return RationalDivisor({k: math.floor(v) for k, v in self.coefficients.items()})

    def to_dict(self) -> Dict[str, str]:
        return {k: f"{v.numerator}/{v.denominator}" for k, v in self.items()}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RationalDivisor':
        return cls({k: Fraction(str(v)) for k, v in data.items()})

    def __repr__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"{v}*{k}" for k, v in self.items())


@dataclass(frozen=True)
class HalfPlane:
    """Semiplano ⟨m, u⟩ ≥ -offset asociado a un rayo"""
    ray: str
    normal: Exponent
    offset: Fraction

    def value(self, m: Tuple[Any, Any]):
        return m[0] * self.normal[0] + m[1] * self.normal[1]

    def contains(self, m: Tuple[Any, Any]) -> bool:
        return self.value(m) >= -self.offset


@dataclass
class RationalPolygon:
    """Polígono racional dado por semiplanos indexados por rayos del abanico"""
    half_planes: List[HalfPlane] = field(default_factory=list)

    def contains(self, m: Tuple[Any, Any]) -> bool:
        return all(h.contains(m) for h in self.half_planes)

    def vertices(self) -> List[Tuple[Fraction, Fraction]]:
        """Vértices exactos: intersecciones factibles de pares de rectas frontera"""
        found = set()
        planes = self.half_planes
        for a in range(len(planes)):
            for b in range(a + 1, len(planes)):
                h1, h2 = planes[a], planes[b]
                det = h1.normal[0] * h2.normal[1] - h1.normal[1] * h2.normal[0]
                if det == 0:
                    continue
                # ⟨m,u1⟩ = -c1, ⟨m,u2⟩ = -c2
                r1, r2 = -h1.offset, -h2.offset
                x = Fraction(r1 * h2.normal[1] - r2 * h1.normal[1], det)
                y = Fraction(h1.normal[0] * r2 - h2.normal[0] * r1, det)
                if self.contains((x, y)):
                    found.add((x, y))
        if len(found) <= 2:
            return sorted(found)
        cx = sum(p[0] for p in found) / len(found)
        cy = sum(p[1] for p in found) / len(found)
        return sorted(found, key=lambda p: math.atan2(float(p[1] - cy), float(p[0] - cx)))

    def is_empty(self) -> bool:
        return not self.vertices()

    def lattice_points(self) -> List[Exponent]:
        """Puntos enteros del polígono, en orden lexicográfico"""
        verts = self.vertices()
        if not verts:
            return []
        min_x = math.ceil(min(v[0] for v in verts))
        max_x = math.floor(max(v[0] for v in verts))
        min_y = math.ceil(min(v[1] for v in verts))
        max_y = math.floor(max(v[1] for v in verts))
        points = []
        for x in range(min_x, max_x + 1):
            for y in range(min_y, max_y + 1):
                if self.contains((x, y)):
                    points.append((x, y))
        return points

    def half_plane(self, ray: str) -> HalfPlane:
        for h in self.half_planes:
            if h.ray == ray:
                return h
        raise KeyError(ray)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'half_planes': [
                {'ray': h.ray, 'normal': list(h.normal), 'offset': f"{h.offset.numerator}/{h.offset.denominator}"}
                for h in self.half_planes
            ],
            'lattice_points': [list(p) for p in self.lattice_points()]
        }


@dataclass(frozen=True)
class RayBasis:
    """Base unimodular (x1, x2) adaptada a un rayo: x1 = [α], ⟨x2, u⟩ = 1"""
    x1: Exponent
    x2: Exponent
    normal: Exponent

    @property
    def det(self) -> int:
        return self.x1[0] * self.x2[1] - self.x1[1] * self.x2[0]

    def to_ray(self, m: Exponent) -> Tuple[int, int]:
        """Exponentes (b, c) con χ^m = x1^b x2^c"""
        d = self.det
        b = (m[0] * self.x2[1] - m[1] * self.x2[0]) // d
        c = (self.x1[0] * m[1] - self.x1[1] * m[0]) // d
        return b, c

    def from_ray(self, b: int, c: int) -> Exponent:
        return (b * self.x1[0] + c * self.x2[0], b * self.x1[1] + c * self.x2[1])

    def to_dict(self) -> Dict[str, Any]:
        return {'x1': list(self.x1), 'x2': list(self.x2), 'normal': list(self.normal)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RayBasis':
        return cls(x1=tuple(data['x1']), x2=tuple(data['x2']), normal=tuple(data['normal']))
