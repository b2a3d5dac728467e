"""
Servicio de la transformada espectral inversa.
Reconstruye la clase de pesos a partir de (curva, divisor, parametrización en el infinito):
resuelve los sistemas 𝕍_{b𝐰}, forma las cuñas de cada lazo y multiplica sus cocientes.
"""

from typing import Any, Dict, List, Optional, Tuple

from joblib import Parallel, delayed

from ..config.settings import NumericConfig
from ..models.algebra_models import EXACT, NUMERIC, LaurentPoly, ScalarField
from ..models.data_models import (
    AbelData, GraphContext, InverseResult, LinearSystemV, RoundTripReport, SignedEdge, SpectralData,
    TorusGraph, WeightClass, Wedge, ZigZagPath, natural_key
)
from ..utils.exceptions import (
    EmptyPolygon, InconsistentClass, NotAWedgePath, NullspaceDimHigh, OrderMismatch, WrongCount,
    ZeroDenominator
)
from ..utils.logging import app_logger, error_handler, PerformanceTimer
from ..utils.validators import ValidationError
from .abel_service import AbelService
from .algebra_service import AlgebraService
from .forward_service import ForwardService
from .graph_service import GraphService
from .kasteleyn_service import KasteleynService
from .toric_service import ToricService


class InverseService:
    """Servicio para la transformada inversa κ⁻¹_{Γ,𝐰}"""

    def __init__(self, graph_service: Optional[GraphService] = None,
                 toric_service: Optional[ToricService] = None,
                 algebra_service: Optional[AlgebraService] = None,
                 kasteleyn_service: Optional[KasteleynService] = None,
                 abel_service: Optional[AbelService] = None,
                 forward_service: Optional[ForwardService] = None):
        self.logger = app_logger
        self.error_handler = error_handler
        self.graph_service = graph_service or GraphService()
        self.toric_service = toric_service or ToricService()
        self.algebra_service = algebra_service or AlgebraService()
        self.kasteleyn_service = kasteleyn_service or KasteleynService(self.graph_service, self.algebra_service)
        self.abel_service = abel_service or AbelService(self.graph_service, self.toric_service)
        self.forward_service = forward_service or ForwardService(
            self.graph_service, self.toric_service, self.algebra_service, self.kasteleyn_service
        )

    def prepare(self, g: TorusGraph) -> GraphContext:
        """Zig-zags, abanico, mapas de Abel y signos de Kasteleyn del grafo"""
        zz = self.graph_service.zigzag_paths(g)
        polygon = self.graph_service.newton_polygon(zz)
        D = self.abel_service.rational_abel(g, zz, polygon)
        divisor_n = self.abel_service.divisor_n(g, zz, polygon, D)
        discrete = self.abel_service.discrete_abel(g, zz, polygon)
        return GraphContext(
            zigzags=zz,
            polygon=polygon,
            abel=AbelData(discrete=discrete, rational=D),
            divisor_n=divisor_n,
            signs=self.kasteleyn_service.kasteleyn_sign(g)
        )

    @staticmethod
    def system_field(spectral: SpectralData) -> ScalarField:
        """Exacto sólo si los Casimires y todos los puntos del divisor son racionales"""
        if spectral.field.exact and all(pt.exact for pt in spectral.points):
            return EXACT
        return NUMERIC

    # Sistemas lineales
    def build_system(self, g: TorusGraph, ctx: GraphContext, black: str,
                     spectral: SpectralData) -> LinearSystemV:
        """Filas de tipo 1 (puntos del divisor) y de tipo 2 (zig-zags seleccionados)"""
        scalar_field = self.system_field(spectral)
        sp = self.abel_service.small_polygon(
            g, ctx.zigzags, ctx.polygon, ctx.rational_abel, ctx.divisor_n, black,
            discrete=ctx.discrete_abel
        )
        columns = sp.points
        if not columns:
            raise EmptyPolygon(f"El polígono pequeño de ({black}, {g.root_white}) no tiene puntos enteros")

        rows: List[List[Any]] = []
        labels: List[str] = []
        for k, pt in enumerate(spectral.points, start=1):
            p, q = scalar_field.coerce(pt.p), scalar_field.coerce(pt.q)
            rows.append([(p ** i) * (q ** j) for i, j in columns])
            labels.append(f"p{k}")

        selected = self.abel_service.type2_zigzags(
            g, ctx.zigzags, ctx.polygon, ctx.discrete_abel, ctx.divisor_n, sp.divisor, black
        )
        for zid, multiplicity in selected.items():
            ray = ctx.polygon.ray_of(zid)
            basis = self.toric_service.ray_basis(ray.direction, ray.normal)
            minimizers = set(self.toric_service.edge_minimizers(sp.polygon, ray.id))
            casimir = scalar_field.coerce(spectral.casimirs[zid])
            for order in range(multiplicity):
                row = []
                for m in columns:
                    if m in minimizers:
                        b = basis.to_ray(m)[0]
                        row.append(scalar_field.coerce(b ** order) * casimir ** (-b))
                    else:
                        row.append(scalar_field.coerce(0))
                rows.append(row)
                labels.append(zid + "'" * order)

        self.logger.debug(f"Sistema de {black}: {len(rows)} filas, {len(columns)} columnas")
        return LinearSystemV(black=black, columns=list(columns), rows=rows, labels=labels, field=scalar_field)

    def solve_V(self, system: LinearSystemV) -> LaurentPoly:
        """V_{b𝐰} como generador del núcleo unidimensional"""
        vector = self.algebra_service.nullspace_vector(system.rows, len(system.columns), system.field)
        terms = {m: v for m, v in zip(system.columns, vector)}
        return LaurentPoly(terms, system.field)

    def determinant_form(self, system: LinearSystemV) -> LaurentPoly:
        """V como determinante con la fila de caracteres χ^m encima de filas independientes"""
        ncols = len(system.columns)
        chosen: List[List[Any]] = []
        for row in system.rows:
            candidate = chosen + [row]
            if self.algebra_service.rank(candidate, ncols, system.field) == len(candidate):
                chosen = candidate
            if len(chosen) == ncols - 1:
                break
        if len(chosen) < ncols - 1:
            raise NullspaceDimHigh(f"Sólo {len(chosen)} filas independientes para {ncols} columnas")

        field = system.field
        matrix = [[LaurentPoly.monomial(i, j, 1, field) for i, j in system.columns]]
        matrix += [[LaurentPoly.constant(v, field) for v in row] for row in chosen]
        return self.algebra_service.det(matrix)

    # Cuñas
    def wedge_path(self, g: TorusGraph, zz: List[ZigZagPath], loop: Tuple[SignedEdge, ...]) -> List[Wedge]:
        """Descompone un lazo alternado en cuñas consecutivas alrededor de sus vértices blancos"""
        if not loop or len(loop) % 2:
            raise NotAWedgePath("El lazo debe alternar aristas +e y -e'")
        n = len(loop)
        for k in range(n):
            _, head = self.graph_service.endpoints(loop[k], g.edges)
            tail, _ = self.graph_service.endpoints(loop[(k + 1) % n], g.edges)
            if head != tail:
                raise NotAWedgePath(f"El lazo no es cerrado entre {loop[k][1]} y {loop[(k + 1) % n][1]}")

        start = next((k for k, (sign, _) in enumerate(loop) if sign > 0), None)
        if start is None:
            raise NotAWedgePath("El lazo no contiene aristas positivas")
        loop = loop[start:] + loop[:start]

        successor = self.graph_service.zigzag_successors(g)
        wedges: List[Wedge] = []
        for k in range(0, n, 2):
            (s_in, e_in), (s_out, e_out) = loop[k], loop[k + 1]
            if s_in < 0 or s_out > 0:
                raise NotAWedgePath(f"Signos no alternados en {e_in}, {e_out}")
            if e_in == e_out:
                continue
            white = g.edges[e_in].white
            degree = len(g.edges_at(white))
            current = e_in
            for _ in range(degree):
                following = successor[(current, 1)][0]
                wedges.append(self._wedge(g, zz, current, following))
                if following == e_out:
                    break
                current = following
            else:
                raise NotAWedgePath(f"{e_out} no se alcanza desde {e_in} alrededor de {white}")
        return wedges

    def _wedge(self, g: TorusGraph, zz: List[ZigZagPath], edge_in: str, edge_out: str) -> Wedge:
        return Wedge(
            white=g.edges[edge_in].white,
            edge_in=edge_in,
            edge_out=edge_out,
            black_in=g.edges[edge_in].black,
            black_out=g.edges[edge_out].black,
            zigzag=self.graph_service.zigzag_through(zz, edge_in, 1).id
        )

    def wedge_ratio(self, g: TorusGraph, ctx: GraphContext, wedge: Wedge,
                    V: Dict[str, LaurentPoly], casimir: Any):
        """wt(e)/wt(e') leído en el punto ν(α) de la cuña"""
        field = V[wedge.black_in].field
        eps = ctx.signs
        e_in, e_out = g.edges[wedge.edge_in], g.edges[wedge.edge_out]
        num = V[wedge.black_out].shift(*e_out.hom).scale(-eps[e_out.id])
        den = V[wedge.black_in].shift(*e_in.hom).scale(eps[e_in.id])

        ray = ctx.polygon.ray_of(wedge.zigzag)
        basis = self.toric_service.ray_basis(ray.direction, ray.normal)
        lead_num, order_num = self.algebra_service.restrict_to_ray(num, basis)
        lead_den, order_den = self.algebra_service.restrict_to_ray(den, basis)
        if order_num != order_den:
            raise OrderMismatch(
                f"Órdenes {order_num} y {order_den} en la cuña {wedge.edge_in} -> {wedge.edge_out}"
            )

        x1 = 1 / field.coerce(casimir)
        one = field.coerce(1)
        value_num = lead_num.evaluate(x1, one)
        value_den = lead_den.evaluate(x1, one)
        scale = sum(abs(complex(c)) * abs(complex(x1)) ** b for (b, _), c in lead_den.terms.items())
        if field.is_zero(value_den, scale):
            raise ZeroDenominator(
                f"Denominador nulo en la cuña {wedge.edge_in} -> {wedge.edge_out} ({wedge.zigzag})"
            )
        return value_num / value_den

    def loop_weight(self, g: TorusGraph, ctx: GraphContext, loop: Tuple[SignedEdge, ...],
                    V: Dict[str, LaurentPoly], spectral: SpectralData):
        """Producto de los cocientes de cuña a lo largo del lazo"""
        field = next(iter(V.values())).field
        value = field.coerce(1)
        for wedge in self.wedge_path(g, ctx.zigzags, loop):
            value = value * self.wedge_ratio(g, ctx, wedge, V, spectral.casimirs[wedge.zigzag])
        return value

    # Reconstrucción
    def _solve_black(self, g: TorusGraph, ctx: GraphContext, black: str,
                     spectral: SpectralData) -> Tuple[LinearSystemV, LaurentPoly]:
        system = self.build_system(g, ctx, black, spectral)
        try:
            return system, self.solve_V(system)
        except Exception as e:
            self.error_handler.log_error(e, {'black': black, 'shape': system.shape})
            raise

    def reconstruct_weights(self, g: TorusGraph, spectral: SpectralData, jobs: int = 1) -> InverseResult:
        """V_b para cada negro y clase (X_f, A, B) por lazos de caras y ciclos a, b"""
        ctx = self.prepare(g)
        self._check_spectral(ctx, spectral)

        blacks = g.blacks
        context = {'graph': g.name, 'blacks': len(blacks), 'jobs': jobs}
        with PerformanceTimer(self.logger, "sistemas 𝕍", context):
            if jobs > 1:
                solved = Parallel(n_jobs=jobs, prefer="threads")(
                    delayed(self._solve_black)(g, ctx, b, spectral) for b in blacks
                )
            else:
                solved = [self._solve_black(g, ctx, b, spectral) for b in blacks]
        systems = {b: s for b, (s, _) in zip(blacks, solved)}
        V = {b: v for b, (_, v) in zip(blacks, solved)}

        field = self.system_field(spectral)
        with PerformanceTimer(self.logger, "pesos por cuñas", {'graph': g.name, 'faces': len(g.faces)}):
            faces = {
                fid: self.loop_weight(g, ctx, face.boundary, V, spectral)
                for fid, face in sorted(g.faces.items(), key=lambda kv: natural_key(kv[0]))
            }
            A = self.loop_weight(g, ctx, g.cycles['a'], V, spectral)
            B = self.loop_weight(g, ctx, g.cycles['b'], V, spectral)

        self._check_face_product(faces, field)
        faces.pop(g.root_face)
        weights = WeightClass(faces=faces, A=A, B=B, field=field)
        return InverseResult(weights=weights, V=V, systems=systems)

    def _check_spectral(self, ctx: GraphContext, spectral: SpectralData) -> None:
        expected = {path.id for path in ctx.zigzags}
        if set(spectral.casimirs.values) != expected:
            raise ValidationError(f"Los Casimires deben indexarse por {sorted(expected, key=natural_key)}")
        if len(spectral.points) != ctx.polygon.genus:
            raise WrongCount(
                f"El divisor tiene {len(spectral.points)} puntos y el género es {ctx.polygon.genus}"
            )

    def _check_face_product(self, faces: Dict[str, Any], field: ScalarField) -> None:
        """∏ X_f = 1; en modo numérico se admite un desvío relativo de FACE_PRODUCT_TOL"""
        product = field.coerce(1)
        for value in faces.values():
            product = product * value
        if field.exact:
            consistent = product == 1
        else:
            consistent = abs(complex(product) - 1) <= NumericConfig.FACE_PRODUCT_TOL
        if not consistent:
            raise InconsistentClass(f"El producto de los X_f recuperados es {product}, no 1")

    def inverse(self, g: TorusGraph, spectral: SpectralData, jobs: int = 1) -> InverseResult:
        try:
            context = {'graph': g.name, 'genus': len(spectral.points)}
            with PerformanceTimer(self.logger, "transformada inversa", context):
                return self.reconstruct_weights(g, spectral, jobs)
        except Exception as e:
            self.error_handler.log_error(e, {'graph': g.name, 'operation': 'inverse'})
            raise

    # Ida y vuelta
    def roundtrip(self, g: TorusGraph, wc: WeightClass, jobs: int = 1) -> RoundTripReport:
        """Errores por coordenada de inverse(forward(wc)) frente a wc"""
        spectral = self.forward_service.forward(g, wc)
        result = self.inverse(g, spectral, jobs)
        expected = wc.coordinates()
        recovered = result.weights.coordinates()

        absolute, relative = {}, {}
        for key, value in expected.items():
            error = abs(complex(recovered[key]) - complex(value))
            absolute[key] = error
            relative[key] = error / abs(complex(value))
        report = RoundTripReport(
            graph_name=g.name,
            expected=expected,
            recovered=recovered,
            absolute_errors=absolute,
            relative_errors=relative
        )
        self.logger.info(f"Ida y vuelta en {g.name}: error relativo máximo {report.max_relative_error:.2e}")
        return report
