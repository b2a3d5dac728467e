"""
Servicio de geometría tórica: diccionario polígono <-> divisor en el infinito,
puntos enteros, minimizadores por rayo y bases adaptadas a un rayo.
"""

import math
from fractions import Fraction
from typing import Dict, List, Tuple

from ..models.algebra_models import HalfPlane, RationalDivisor, RationalPolygon, RayBasis
from ..models.data_models import NewtonPolygonData
from ..utils.exceptions import NoLatticePoints, NotOrthogonal, NotPrimitive
from ..utils.logging import app_logger, error_handler


class ToricService:
    """Servicio para polígonos racionales y divisores sobre el abanico normal"""

    # Radio máximo de búsqueda de x₂
    BASIS_SEARCH_RADIUS = 64

    def __init__(self):
        self.logger = app_logger
        self.error_handler = error_handler

    @staticmethod
    def divisor_to_polygon(d: RationalDivisor, fan: NewtonPolygonData) -> RationalPolygon:
        """∩_ρ {⟨m, u_ρ⟩ ≥ -coef_ρ}"""
        return RationalPolygon([HalfPlane(ray.id, ray.normal, d[ray.id]) for ray in fan.rays])

    @staticmethod
    def polygon_to_divisor(vertices: List[Tuple[int, int]], fan: NewtonPolygonData) -> RationalDivisor:
        """a_ρ = -min ⟨m, u_ρ⟩ sobre los vértices"""
        coefficients = {}
        for ray in fan.rays:
            u = ray.normal
            coefficients[ray.id] = -min(Fraction(v[0]) * u[0] + Fraction(v[1]) * u[1] for v in vertices)
        return RationalDivisor(coefficients)

    @staticmethod
    def lattice_points(p: RationalPolygon) -> List[Tuple[int, int]]:
        return p.lattice_points()

    @staticmethod
    def floor_divisor(d: RationalDivisor) -> RationalDivisor:
        return d.floor()

    def edge_minimizers(self, p: RationalPolygon, ray_id: str) -> List[Tuple[int, int]]:
        """Puntos enteros de p que minimizan ⟨·, u_ρ⟩ (el conjunto N^ρ)"""
        points = p.lattice_points()
        if not points:
            raise NoLatticePoints(f"El polígono no tiene puntos enteros (rayo {ray_id})")
        plane = p.half_plane(ray_id)
        best = min(plane.value(m) for m in points)
        return [m for m in points if plane.value(m) == best]

    def ray_basis(self, alpha_class: Tuple[int, int], normal: Tuple[int, int]) -> RayBasis:
        """
        Base (x₁, x₂) con x₁ = [α] y ⟨x₂, u⟩ = 1.

        x₂ se elige por norma del máximo, después |a| + |b|, después |a| y por último (a, b)
        en orden lexicográfico; así salen las bases de los ejemplos resueltos. Cambiar x₂ por
        x₂ + k·x₁ sólo multiplica la parte líder por x₁^(-k·c₀), de modo que ni los ceros en
        x₁ = 1/C_α ni los cocientes de cuña dependen de la elección.
        """
        x, y = alpha_class
        if math.gcd(abs(x), abs(y)) != 1:
            raise NotPrimitive(f"La clase {alpha_class} no es primitiva")
        if x * normal[0] + y * normal[1] != 0:
            raise NotOrthogonal(f"La clase {alpha_class} no es ortogonal a {normal}")
        if math.gcd(abs(normal[0]), abs(normal[1])) != 1:
            raise NotPrimitive(f"La normal {normal} no es primitiva")

        for radius in range(1, self.BASIS_SEARCH_RADIUS + 1):
            candidates = []
            for a in range(-radius, radius + 1):
                for b in range(-radius, radius + 1):
                    if max(abs(a), abs(b)) != radius:
                        continue
                    if a * normal[0] + b * normal[1] != 1:
                        continue
                    if abs(x * b - y * a) != 1:
                        continue
                    candidates.append((abs(a) + abs(b), abs(a), a, b))
            if candidates:
                _, _, a, b = min(candidates)
                return RayBasis(x1=(x, y), x2=(a, b), normal=tuple(normal))

        raise NotOrthogonal(f"No existe x₂ para la clase {alpha_class} y la normal {normal}")

    @staticmethod
    def to_ray_coordinates(m: Tuple[int, int], basis: RayBasis) -> Tuple[int, int]:
        return basis.to_ray(m)

    @staticmethod
    def from_ray_coordinates(b: int, c: int, basis: RayBasis) -> Tuple[int, int]:
        return basis.from_ray(b, c)

    def positioned_polygon(self, divisor_n: RationalDivisor, fan: NewtonPolygonData) -> NewtonPolygonData:
        """Polígono N situado en los exponentes de det K a partir de D_N"""
        polygon = self.divisor_to_polygon(divisor_n, fan)
        vertices = polygon.vertices()
        if any(v[0].denominator != 1 or v[1].denominator != 1 for v in vertices):
            self.error_handler.log_warning("D_N no es entero: vértices racionales", {'D_N': divisor_n})
        anchor = min(vertices)
        shift = (int(anchor[0]) - fan.vertices[0][0], int(anchor[1]) - fan.vertices[0][1])
        return fan.translated(shift)

    def fan_divisor(self, fan: NewtonPolygonData) -> RationalDivisor:
        """Divisor D_N del polígono anclado"""
        return self.polygon_to_divisor(fan.vertices, fan)

    @staticmethod
    def ray_lengths(fan: NewtonPolygonData) -> Dict[str, int]:
        return {ray.id: ray.length for ray in fan.rays}
