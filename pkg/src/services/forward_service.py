"""
Servicio de la transformada espectral directa.
Calcula P, el divisor S de la columna 𝐰 de la adjunta y los puntos en el infinito ν.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config.settings import NumericConfig
from ..models.algebra_models import LaurentPoly, convex_hull
from ..models.data_models import (
    Casimirs, EdgeCocycle, InfinityPoint, NewtonPolygonData, SignCocycle, SpectralData,
    SpectralPoint, TorusGraph, WeightClass, ZigZagPath, natural_key
)
from ..utils.exceptions import CasimirCollision, EmptyColumn, RootMismatch, WrongCount
from ..utils.logging import app_logger, error_handler, PerformanceTimer
from .algebra_service import AlgebraService
from .graph_service import GraphService
from .kasteleyn_service import KasteleynService
from .toric_service import ToricService


class ForwardService:
    """Servicio para la transformada espectral κ_{Γ,𝐰}"""

    # Poda relativa de coeficientes de resultantes interpoladas
    RESULTANT_TRIM = 1e-11

    def __init__(self, graph_service: Optional[GraphService] = None,
                 toric_service: Optional[ToricService] = None,
                 algebra_service: Optional[AlgebraService] = None,
                 kasteleyn_service: Optional[KasteleynService] = None):
        self.logger = app_logger
        self.error_handler = error_handler
        self.graph_service = graph_service or GraphService()
        self.toric_service = toric_service or ToricService()
        self.algebra_service = algebra_service or AlgebraService()
        self.kasteleyn_service = kasteleyn_service or KasteleynService(self.graph_service, self.algebra_service)

    # Puntos en el infinito
    def infinity_points(self, P: LaurentPoly, polygon: NewtonPolygonData,
                        casimirs: Casimirs, zz: List[ZigZagPath]) -> Dict[str, InfinityPoint]:
        """ν: cada zig-zag α se empareja con la raíz x₁ = 1/C_α de la parte líder de P en su rayo"""
        exact = casimirs.field.exact
        points: Dict[str, InfinityPoint] = {}

        for ray in polygon.rays:
            members = list(ray.zigzags)
            values = [casimirs[zid] for zid in members]
            for i in range(len(values)):
                for j in range(i + 1, len(values)):
                    if self._same(values[i], values[j], exact):
                        raise CasimirCollision(
                            f"C_{members[i]} = C_{members[j]} en el rayo {ray.id}"
                        )

            basis = self.toric_service.ray_basis(ray.direction, ray.normal)
            leading, _ = self.algebra_service.restrict_to_ray(P, basis)
            exponents = [b for b, _ in leading.terms]
            span = max(exponents) - min(exponents)
            if span != len(members):
                raise RootMismatch(
                    f"La parte líder en {ray.id} tiene grado {span}, se esperaban {len(members)} raíces"
                )

            for zid in members:
                x1 = 1 / casimirs[zid]
                if exact:
                    if leading.evaluate(x1, Fraction(1)) != 0:
                        raise RootMismatch(f"La parte líder en {ray.id} no se anula en 1/C_{zid}")
                    residual = 0.0
                else:
                    residual = leading.relative_residual(complex(x1), 1)
                    if residual > NumericConfig.RESIDUAL_TOL:
                        raise RootMismatch(
                            f"La parte líder en {ray.id} no se anula en 1/C_{zid} (residuo {residual:.2e})"
                        )
                points[zid] = InfinityPoint(zigzag=zid, ray=ray.id, basis=basis,
                                            casimir=casimirs[zid], residual=residual)

        return {k: points[k] for k in sorted(points, key=natural_key)}

    @staticmethod
    def _same(a: Any, b: Any, exact: bool) -> bool:
        if exact:
            return a == b
        return abs(complex(a) - complex(b)) <= NumericConfig.DEDUP_TOL * max(1.0, abs(complex(a)))

    # Divisor espectral
    def spectral_divisor(self, column: Dict[str, LaurentPoly], P: LaurentPoly, genus: int,
                         graph_name: str = '') -> List[SpectralPoint]:
        """Los g ceros comunes de la columna 𝐰 sobre {P = 0} en (ℂ×)²"""
        entries = [(b, f) for b, f in column.items() if not f.is_zero()]
        if not entries:
            raise EmptyColumn("La columna 𝐰 de la adjunta es idénticamente nula")
        if genus == 0:
            return []

        entries.sort(key=lambda item: (len(item[1].terms), natural_key(item[0])))
        polys = [f for _, f in entries]
        first = polys[0]
        partners = polys[1:] + [P]

        found = 0
        context = {'graph': graph_name, 'genus': genus, 'entries': len(entries)}
        with PerformanceTimer(self.logger, "divisor espectral", context):
            for partner in partners:
                candidates = self._eliminate(first, partner)
                if candidates is None:
                    continue
                points = []
                for z0 in candidates:
                    for w0 in self._back_substitute(polys + [P], z0):
                        z, w = self._polish(first, P, polys[1] if len(polys) > 1 else P, z0, w0)
                        residuals = self._residuals(entries, P, z, w)
                        if max(residuals.values()) <= NumericConfig.RESIDUAL_TOL:
                            points.append(SpectralPoint(p=z, q=w, residuals=residuals))
                points = self._deduplicate(points)
                found = len(points)
                if found == genus:
                    return self._sorted(points)
                self.logger.debug(f"Par de eliminación descartado: {found} puntos frente a g = {genus}")

        raise WrongCount(f"Se encontraron {found} puntos del divisor, se esperaban {genus}")

    def _eliminate(self, f1: LaurentPoly, f2: LaurentPoly) -> Optional[List[complex]]:
        """Raíces en z de Res_w(f1, f2); None si la resultante es idénticamente nula"""
        a1 = self.algebra_service.to_polynomial_array(f1)
        a2 = self.algebra_service.to_polynomial_array(f2)
        m, n = a1.shape[1] - 1, a2.shape[1] - 1

        if m == 0:
            return self._z_roots(a1[:, 0])
        if n == 0:
            return self._z_roots(a2[:, 0])

        bound = n * (a1.shape[0] - 1) + m * (a2.shape[0] - 1)
        size = bound + 1
        nodes = np.exp(2j * np.pi * np.arange(size) / size)
        values = np.zeros(size, dtype=complex)
        scales = np.zeros(size)
        for k, z0 in enumerate(nodes):
            c1 = np.array([np.polyval(a1[::-1, j], z0) for j in range(m + 1)])
            c2 = np.array([np.polyval(a2[::-1, j], z0) for j in range(n + 1)])
            S = self._sylvester(c1, c2)
            values[k] = np.linalg.det(S)
            scales[k] = np.prod(np.linalg.norm(S, axis=1))

        if np.max(np.abs(values)) <= NumericConfig.ZERO_TOL * max(np.max(scales), 1e-300):
            return None
        coefficients = np.fft.fft(values) / size
        return self._z_roots(coefficients)

    @staticmethod
    def _sylvester(c1: np.ndarray, c2: np.ndarray) -> np.ndarray:
        """Matriz de Sylvester de dos polinomios en w (coeficientes ascendentes)"""
        m, n = len(c1) - 1, len(c2) - 1
        S = np.zeros((m + n, m + n), dtype=complex)
        for r in range(n):
            S[r, r:r + m + 1] = c1[::-1]
        for r in range(m):
            S[n + r, r:r + n + 1] = c2[::-1]
        return S

    def _z_roots(self, coefficients: np.ndarray) -> List[complex]:
        """Raíces no nulas de Σ c_k z^k"""
        coefficients = np.asarray(coefficients, dtype=complex)
        scale = np.max(np.abs(coefficients)) if coefficients.size else 0.0
        if scale == 0:
            return []
        significant = np.nonzero(np.abs(coefficients) > self.RESULTANT_TRIM * scale)[0]
        trimmed = coefficients[significant[0]:significant[-1] + 1]
        if len(trimmed) < 2:
            return []
        roots = np.roots(trimmed[::-1])
        return [complex(r) for r in roots if abs(r) > NumericConfig.ZERO_TOL]

    def _back_substitute(self, polys: List[LaurentPoly], z0: complex) -> List[complex]:
        """Raíces en w de la primera entrada no constante en w al fijar z = z0"""
        for f in polys:
            coefficients, _ = self.algebra_service.univariate_in_w(f, z0)
            magnitude = sum(abs(complex(c)) * abs(z0) ** i * 1.0 for (i, _), c in f.terms.items())
            significant = np.nonzero(np.abs(coefficients) > NumericConfig.RESIDUAL_TOL * magnitude)[0]
            if len(significant) == 0:
                continue
            trimmed = coefficients[significant[0]:significant[-1] + 1]
            if len(trimmed) == 1:
                # Constante no nula: z0 no está en el divisor
                return []
            return [complex(r) for r in np.roots(trimmed[::-1]) if abs(r) > NumericConfig.ZERO_TOL]
        return []

    @staticmethod
    def _partial(f: LaurentPoly, variable: int) -> LaurentPoly:
        terms = {}
        for (i, j), c in f.terms.items():
            power = i if variable == 0 else j
            if power:
                key = (i - 1, j) if variable == 0 else (i, j - 1)
                terms[key] = c * power
        return LaurentPoly(terms, f.field)

    def _polish(self, f: LaurentPoly, P: LaurentPoly, fallback: LaurentPoly,
                z: complex, w: complex) -> Tuple[complex, complex]:
        """Pasos de Newton sobre (f, P), o sobre (f, fallback) si el jacobiano es singular"""
        for g in (P, fallback):
            if g is f:
                continue
            derivatives = [self._partial(f, 0), self._partial(f, 1), self._partial(g, 0), self._partial(g, 1)]
            zc, wc = complex(z), complex(w)
            ok = True
            for _ in range(NumericConfig.NEWTON_STEPS):
                F = np.array([complex(f.evaluate(zc, wc)), complex(g.evaluate(zc, wc))])
                J = np.array([[complex(d.evaluate(zc, wc)) if not d.is_zero() else 0j for d in derivatives[:2]],
                              [complex(d.evaluate(zc, wc)) if not d.is_zero() else 0j for d in derivatives[2:]]])
                try:
                    step = np.linalg.solve(J, F)
                except np.linalg.LinAlgError:
                    ok = False
                    break
                if not np.all(np.isfinite(step)):
                    ok = False
                    break
                zc, wc = zc - step[0], wc - step[1]
            if ok and zc != 0 and wc != 0:
                return zc, wc
        return complex(z), complex(w)

    @staticmethod
    def _residuals(entries: List[Tuple[str, LaurentPoly]], P: LaurentPoly, z: complex, w: complex) -> Dict[str, float]:
        residuals = {b: f.relative_residual(z, w) for b, f in entries}
        residuals['P'] = P.relative_residual(z, w)
        return residuals

    @staticmethod
    def _deduplicate(points: List[SpectralPoint]) -> List[SpectralPoint]:
        unique: List[SpectralPoint] = []
        tol = NumericConfig.DEDUP_TOL
        for pt in points:
            duplicate = any(
                abs(pt.p - other.p) <= tol * max(1.0, abs(pt.p)) and abs(pt.q - other.q) <= tol * max(1.0, abs(pt.q))
                for other in unique
            )
            if not duplicate:
                unique.append(pt)
        return unique

    @staticmethod
    def _sorted(points: List[SpectralPoint]) -> List[SpectralPoint]:
        def key(pt: SpectralPoint):
            p, q = complex(pt.p), complex(pt.q)
            return (round(p.real, 9), round(p.imag, 9), round(q.real, 9), round(q.imag, 9))
        return sorted(points, key=key)

    def rationalize_divisor(self, points: List[SpectralPoint], column: Dict[str, LaurentPoly],
                            P: LaurentPoly) -> List[SpectralPoint]:
        """Puntos exactos si la racionalización anula exactamente la columna y P"""
        limit = NumericConfig.RATIONAL_DENOMINATOR_LIMIT
        exact_points = []
        for pt in points:
            p, q = complex(pt.p), complex(pt.q)
            if abs(p.imag) > NumericConfig.ZERO_TOL * max(1.0, abs(p)) or abs(q.imag) > NumericConfig.ZERO_TOL * max(1.0, abs(q)):
                return points
            pr = Fraction(p.real).limit_denominator(limit)
            qr = Fraction(q.real).limit_denominator(limit)
            if pr == 0 or qr == 0:
                return points
            polys = [f for f in column.values() if not f.is_zero()] + [P]
            if any(f.evaluate(pr, qr) != 0 for f in polys):
                return points
            exact_points.append(SpectralPoint(p=pr, q=qr, residuals={k: 0.0 for k in pt.residuals}, exact=True))
        self.logger.info(f"Divisor racional exacto con {len(exact_points)} puntos")
        return exact_points

    # Transformada completa
    def forward(self, g: TorusGraph, wc: WeightClass) -> SpectralData:
        """Datos espectrales de (Γ, [wt])"""
        try:
            eps = self.kasteleyn_service.kasteleyn_sign(g)
            wt = self.kasteleyn_service.weight_cocycle(g, wc)
            return self.forward_from_cocycle(g, wt, eps)
        except Exception as e:
            self.error_handler.log_error(e, {'graph': g.name, 'operation': 'forward'})
            raise

    def forward_from_cocycle(self, g: TorusGraph, wt: EdgeCocycle, eps: Optional[SignCocycle] = None) -> SpectralData:
        """Datos espectrales a partir de un cociclo explícito"""
        eps = eps or self.kasteleyn_service.kasteleyn_sign(g)
        size = f"{len(g.blacks)}x{len(g.whites)}"
        with PerformanceTimer(self.logger, "transformada directa", {'graph': g.name, 'size': size}):
            zz = self.graph_service.zigzag_paths(g)
            polygon = self.graph_service.newton_polygon(zz)

            K = self.kasteleyn_service.kasteleyn_matrix(g, wt, eps)
            det_k = self.kasteleyn_service.determinant(K, g.name)
            m0 = self.graph_service.reference_matching(g)
            P = self.kasteleyn_service.characteristic_polynomial(g, K, m0, wt, eps, det_k=det_k)
            casimirs = self.kasteleyn_service.casimirs(g, wt, eps, zz)
            infinity = self.infinity_points(P, polygon, casimirs, zz)

            root = g.whites.index(g.root_white)
            with PerformanceTimer(self.logger, "columna de la adjunta", {'graph': g.name, 'size': size}):
                adj = self.algebra_service.adjugate_column(K, root)
            column = dict(zip(g.blacks, adj))

            points = self.spectral_divisor(column, P, polygon.genus, g.name)
            if wt.field.exact:
                points = self.rationalize_divisor(points, column, P)

            return SpectralData(
                polynomial=P,
                points=points,
                infinity=infinity,
                casimirs=casimirs,
                polygon=polygon,
                genus=polygon.genus,
                reference_matching=m0,
                column=column,
                det_newton=convex_hull(det_k.support()),
                graph_name=g.name
            )
