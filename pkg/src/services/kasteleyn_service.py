"""
Servicio de Kasteleyn: signos, cociclos de pesos, matriz de Kasteleyn,
polinomio característico y Casimires.
"""

from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..models.algebra_models import EXACT, LaurentPoly, ScalarField
from ..models.data_models import (
    Casimirs, EdgeCocycle, Matching, SignCocycle, SignedEdge, TorusGraph, WeightClass,
    ZigZagPath, natural_key
)
from ..utils.exceptions import InconsistentClass, Unsatisfiable, ZeroDeterminant
from ..utils.logging import app_logger, error_handler, PerformanceTimer
from .algebra_service import AlgebraService
from .graph_service import GraphService


class KasteleynService:
    """Servicio para cociclos, matriz de Kasteleyn y Casimires"""

    def __init__(self, graph_service: Optional[GraphService] = None,
                 algebra_service: Optional[AlgebraService] = None):
        self.logger = app_logger
        self.error_handler = error_handler
        self.graph_service = graph_service or GraphService()
        self.algebra_service = algebra_service or AlgebraService()

    # Resolución de cociclos
    def _constraint_loops(self, g: TorusGraph) -> List[Tuple[str, Tuple[SignedEdge, ...]]]:
        loops = [(fid, face.boundary) for fid, face in g.faces.items() if fid != g.root_face]
        loops.append(('a', g.cycles['a']))
        loops.append(('b', g.cycles['b']))
        return loops

    def cocycle_exponents(self, g: TorusGraph) -> Tuple[List[str], List[str], List[List[int]]]:
        """
        Exponentes enteros E tales que wt(e) = Π_k Y_k^{E[e][k]} con wt = 1 en el árbol generador.
        Las restricciones son las caras salvo f₀ y los lazos a, b.
        """
        tree = set(self.graph_service.spanning_tree(g))
        free_edges = [eid for eid in g.edges if eid not in tree]
        loops = self._constraint_loops(g)
        labels = [label for label, _ in loops]

        if len(free_edges) != len(loops):
            raise Unsatisfiable(f"{len(free_edges)} aristas libres frente a {len(loops)} restricciones")

        index = {eid: k for k, eid in enumerate(free_edges)}
        M = [[Fraction(0)] * len(free_edges) for _ in loops]
        for r, (_, loop) in enumerate(loops):
            for sign, eid in loop:
                if eid in index:
                    M[r][index[eid]] += sign

        inverse = self._invert(M)
        if inverse is None:
            raise Unsatisfiable("La matriz de restricciones es singular")
        if any(x.denominator != 1 for row in inverse for x in row):
            raise Unsatisfiable("La matriz de restricciones no es unimodular")

        exponents = [[int(x) for x in row] for row in inverse]
        return free_edges, labels, exponents

    @staticmethod
    def _invert(M: List[List[Fraction]]) -> Optional[List[List[Fraction]]]:
        """Inversa por Gauss-Jordan sobre los racionales"""
        n = len(M)
        A = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
            if pivot is None:
                return None
            A[col], A[pivot] = A[pivot], A[col]
            lead = A[col][col]
            A[col] = [x / lead for x in A[col]]
            for r in range(n):
                if r != col and A[r][col] != 0:
                    factor = A[r][col]
                    A[r] = [a - factor * b for a, b in zip(A[r], A[col])]
        return [row[n:] for row in A]

    # Signos de Kasteleyn
    @staticmethod
    def face_sign(length: int) -> int:
        """-1 si la cara tiene 0 mod 4 aristas, +1 si tiene 2 mod 4"""
        return -1 if length % 4 == 0 else 1

    def kasteleyn_sign(self, g: TorusGraph) -> SignCocycle:
        """Cociclo de signos que cumple la condición de cara"""
        if g.has_explicit_signs:
            signs = SignCocycle({eid: int(e.sign) for eid, e in g.edges.items()})
            for face in g.faces.values():
                if self.loop_sign(face.boundary, signs) != self.face_sign(len(face)):
                    raise Unsatisfiable(f"Los signos explícitos violan la condición de la cara {face.id}")
            return signs

        free_edges, labels, exponents = self.cocycle_exponents(g)
        targets = []
        for label in labels:
            if label in ('a', 'b'):
                targets.append(g.cycle_signs.get(label, 1))
            else:
                targets.append(self.face_sign(len(g.faces[label])))

        values = {eid: 1 for eid in g.edges}
        for r, eid in enumerate(free_edges):
            negative = sum(abs(k) for k, t in zip(exponents[r], targets) if t < 0)
            values[eid] = -1 if negative % 2 else 1

        signs = SignCocycle(values)
        for face in g.faces.values():
            if self.loop_sign(face.boundary, signs) != self.face_sign(len(face)):
                raise Unsatisfiable(f"No se satisface la condición de signo en {face.id}")
        return signs

    @staticmethod
    def loop_sign(loop: Tuple[SignedEdge, ...], signs: SignCocycle) -> int:
        result = 1
        for _, eid in loop:
            result *= signs[eid]
        return result

    # Cociclos de pesos
    def weight_cocycle(self, g: TorusGraph, wc: WeightClass) -> EdgeCocycle:
        """Representante wt con wt = 1 en el árbol generador"""
        scalar_field = wc.field
        missing = [fid for fid in g.faces if fid != g.root_face and fid not in wc.faces]
        unknown = [fid for fid in wc.faces if fid not in g.faces]
        if missing or unknown:
            raise InconsistentClass(f"Pesos de cara incompletos: faltan {missing}, desconocidas {unknown}")

        if g.root_face in wc.faces:
            product = 1
            for value in wc.faces.values():
                product *= value
            if not self._is_one(product, scalar_field):
                raise InconsistentClass(f"El producto de todos los X_f es {product}, no 1")

        free_edges, labels, exponents = self.cocycle_exponents(g)
        targets = [wc.A if label == 'a' else wc.B if label == 'b' else wc.faces[label] for label in labels]

        values = {eid: scalar_field.coerce(1) for eid in g.edges}
        for r, eid in enumerate(free_edges):
            value = scalar_field.coerce(1)
            for k, target in zip(exponents[r], targets):
                if k > 0:
                    value *= target ** k
                elif k < 0:
                    value /= target ** (-k)
            values[eid] = value

        wt = EdgeCocycle(values, scalar_field)
        self._verify_class(g, wt, wc)
        return wt

    @staticmethod
    def _is_one(value: Any, scalar_field: ScalarField) -> bool:
        return value == 1 if scalar_field.exact else abs(value - 1) <= 1e-9 * max(1.0, abs(value))

    def _verify_class(self, g: TorusGraph, wt: EdgeCocycle, wc: WeightClass) -> None:
        products = self.face_products(g, wt)
        for fid, expected in wc.faces.items():
            if fid != g.root_face and not self._is_one(products[fid] / expected, wt.field):
                raise InconsistentClass(f"El cociclo no reproduce X_{fid}")
        for label, expected in (('a', wc.A), ('b', wc.B)):
            if not self._is_one(self.loop_product(g.cycles[label], wt) / expected, wt.field):
                raise InconsistentClass(f"El cociclo no reproduce la monodromía {label}")

    @staticmethod
    def loop_product(loop: Tuple[SignedEdge, ...], wt: EdgeCocycle):
        """Producto alternado: +e aporta wt(e), -e aporta 1/wt(e)"""
        value = wt.field.coerce(1)
        for sign, eid in loop:
            value = value * wt[eid] if sign > 0 else value / wt[eid]
        return value

    def face_products(self, g: TorusGraph, wt: EdgeCocycle) -> Dict[str, Any]:
        return {fid: self.loop_product(face.boundary, wt) for fid, face in g.faces.items()}

    def explicit_cocycle(self, g: TorusGraph, edge_weights: Dict[str, Any], scalar_field: ScalarField = EXACT) -> EdgeCocycle:
        """Cociclo dado arista por arista"""
        missing = [eid for eid in g.edges if eid not in edge_weights]
        if missing:
            raise InconsistentClass(f"Faltan pesos de arista: {', '.join(missing)}")
        values = {eid: scalar_field.coerce(edge_weights[eid]) for eid in g.edges}
        zero = [eid for eid, v in values.items() if v == 0]
        if zero:
            raise InconsistentClass(f"Pesos de arista nulos: {', '.join(zero)}")
        return EdgeCocycle(values, scalar_field)

    def cocycle_class(self, g: TorusGraph, wt: EdgeCocycle) -> WeightClass:
        """Clase (X_f salvo f₀, A, B) de un cociclo"""
        products = self.face_products(g, wt)
        faces = {fid: v for fid, v in products.items() if fid != g.root_face}
        return WeightClass(
            faces=faces,
            A=self.loop_product(g.cycles['a'], wt),
            B=self.loop_product(g.cycles['b'], wt),
            field=wt.field
        )

    @staticmethod
    def gauge_transform(g: TorusGraph, wt: EdgeCocycle, vertex_scalars: Dict[str, Any]) -> EdgeCocycle:
        """Multiplica por el cobordo g(b)/g(w)"""
        values = {}
        for eid, edge in g.edges.items():
            factor_b = vertex_scalars.get(edge.black, 1)
            factor_w = vertex_scalars.get(edge.white, 1)
            values[eid] = wt.field.coerce(wt[eid] * factor_b / factor_w)
        return EdgeCocycle(values, wt.field)

    # Matriz de Kasteleyn
    def kasteleyn_matrix(self, g: TorusGraph, wt: EdgeCocycle, eps: SignCocycle) -> List[List[LaurentPoly]]:
        """K_{w,b} = Σ wt(e) ε(e) z^dz w^dw; filas blancas, columnas negras"""
        whites, blacks = g.whites, g.blacks
        row = {w: k for k, w in enumerate(whites)}
        col = {b: k for k, b in enumerate(blacks)}
        terms: List[List[Dict]] = [[{} for _ in blacks] for _ in whites]
        for eid, edge in g.edges.items():
            cell = terms[row[edge.white]][col[edge.black]]
            cell[edge.hom] = cell.get(edge.hom, 0) + wt[eid] * eps[eid]
        return [[LaurentPoly(cell, wt.field) for cell in r] for r in terms]

    def permutation_sign(self, g: TorusGraph, m: Matching) -> int:
        """Signo de la permutación filas blancas -> columnas negras definida por 𝔪"""
        col = {b: k for k, b in enumerate(g.blacks)}
        image = {}
        for eid in m.edges:
            edge = g.edges[eid]
            image[edge.white] = col[edge.black]
        perm = [image[w] for w in g.whites]
        inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
        return -1 if inversions % 2 else 1

    def reference_monomial(self, g: TorusGraph, m0: Matching, wt: EdgeCocycle, eps: SignCocycle) -> LaurentPoly:
        """τ(𝔪₀): término de 𝔪₀ en la expansión de det K"""
        coeff = wt.field.coerce(self.permutation_sign(g, m0))
        hom = [0, 0]
        for eid in m0.edges:
            coeff *= wt[eid] * eps[eid]
            hom[0] += g.edges[eid].hom[0]
            hom[1] += g.edges[eid].hom[1]
        return LaurentPoly.monomial(hom[0], hom[1], coeff, wt.field)

    def determinant(self, K: List[List[LaurentPoly]], graph_name: str = '') -> LaurentPoly:
        size = f"{len(K)}x{len(K[0]) if K else 0}"
        with PerformanceTimer(self.logger, "determinante de K", {'graph': graph_name, 'size': size}):
            return self.algebra_service.det(K)

    def characteristic_polynomial(self, g: TorusGraph, K: List[List[LaurentPoly]], m0: Matching,
                                  wt: EdgeCocycle, eps: SignCocycle,
                                  det_k: Optional[LaurentPoly] = None) -> LaurentPoly:
        """P = det K / τ(𝔪₀)"""
        det_k = det_k if det_k is not None else self.determinant(K, g.name)
        if det_k.is_zero():
            raise ZeroDeterminant("det K es idénticamente nulo")
        tau = self.reference_monomial(g, m0, wt, eps)
        (i, j), c = tau.leading_term()
        return det_k.shift(-i, -j).scale(1 / c)

    def matching_expansion(self, g: TorusGraph, wt: EdgeCocycle, eps: SignCocycle) -> LaurentPoly:
        """Σ_𝔪 sgn · Π wt ε φ sobre todos los emparejamientos"""
        total = LaurentPoly.zero(wt.field)
        for m in self.graph_service.enumerate_matchings(g):
            total = total + self.reference_monomial(g, m, wt, eps)
        return total

    def matching_signs(self, g: TorusGraph, eps: SignCocycle, m0: Matching) -> Dict[Tuple[int, int], set]:
        """Signos relativos sgn(𝔪)ε(𝔪) / sgn(𝔪₀)ε(𝔪₀) agrupados por clase [𝔪 - 𝔪₀]"""
        def signed(m: Matching) -> int:
            value = self.permutation_sign(g, m)
            for eid in m.edges:
                value *= eps[eid]
            return value

        base = signed(m0)
        signs: Dict[Tuple[int, int], set] = {}
        for m in self.graph_service.enumerate_matchings(g):
            cls = self.graph_service.matching_class(g, m, m0)
            signs.setdefault(cls, set()).add(signed(m) * base)
        return signs

    # Casimires
    def casimirs(self, g: TorusGraph, wt: EdgeCocycle, eps: SignCocycle, zz: List[ZigZagPath]) -> Casimirs:
        """C_α = (-1)^d [ε]([α]) [wt]([α]) con d el número de vértices blancos de α"""
        values = {}
        for path in zz:
            value = wt.field.coerce(1)
            whites = 0
            for eid, side in path.sides:
                factor = wt[eid] * eps[eid]
                if side > 0:
                    value *= factor
                    whites += 1
                else:
                    value /= factor
            values[path.id] = -value if whites % 2 else value
        ordered = {k: values[k] for k in sorted(values, key=natural_key)}
        return Casimirs(ordered, wt.field)
