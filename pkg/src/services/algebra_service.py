"""
Servicio de álgebra lineal sobre polinomios de Laurent y sobre escalares:
determinantes, columnas de la adjunta, restricción a un rayo y núcleos.
"""

from fractions import Fraction
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from ..config.settings import NumericConfig
from ..models.algebra_models import EXACT, NUMERIC, LaurentPoly, RayBasis, ScalarField, join_fields
from ..utils.exceptions import NullspaceDim0, NullspaceDimHigh, ZeroPolynomial
from ..utils.logging import app_logger, error_handler

Matrix = List[List[LaurentPoly]]


class AlgebraService:
    """Servicio para determinantes y núcleos exactos o numéricos"""

    def __init__(self):
        self.logger = app_logger
        self.error_handler = error_handler

    # Determinantes
    def det(self, M: Matrix) -> LaurentPoly:
        """Determinante: cofactores hasta el umbral, Bareiss por encima"""
        n = len(M)
        scalar_field = self._matrix_field(M)
        if n == 0:
            return LaurentPoly.constant(1, scalar_field)
        if n <= NumericConfig.DETERMINANT_CROSSOVER:
            return self._det_cofactor(M, scalar_field)
        return self._det_bareiss(M, scalar_field)

    @staticmethod
    def _matrix_field(M: Matrix) -> ScalarField:
        return join_fields(EXACT, *[entry.field for row in M for entry in row])

    def _det_cofactor(self, M: Matrix, scalar_field: ScalarField) -> LaurentPoly:
        n = len(M)
        if n == 1:
            return M[0][0].to_field(scalar_field)
        if n == 2:
            return (M[0][0] * M[1][1] - M[0][1] * M[1][0]).to_field(scalar_field)
        total = LaurentPoly.zero(scalar_field)
        for col in range(n):
            entry = M[0][col]
            if entry.is_zero():
                continue
            minor = [row[:col] + row[col + 1:] for row in M[1:]]
            term = entry * self._det_cofactor(minor, scalar_field)
            total = total + term if col % 2 == 0 else total - term
        return total

    def _det_bareiss(self, M: Matrix, scalar_field: ScalarField) -> LaurentPoly:
        """Eliminación sin fracciones con división exacta en el anillo de Laurent"""
        n = len(M)
        shift_i, shift_j = 0, 0
        A: Matrix = []
        for row in M:
            support = [e for entry in row for e in entry.support()]
            if not support:
                return LaurentPoly.zero(scalar_field)
            di = min(e[0] for e in support)
            dj = min(e[1] for e in support)
            shift_i += di
            shift_j += dj
            A.append([entry.shift(-di, -dj).to_field(scalar_field) for entry in row])

        sign = 1
        previous = LaurentPoly.constant(1, scalar_field)
        for k in range(n - 1):
            if A[k][k].is_zero():
                pivot = next((r for r in range(k + 1, n) if not A[r][k].is_zero()), None)
                if pivot is None:
                    return LaurentPoly.zero(scalar_field)
                A[k], A[pivot] = A[pivot], A[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    numerator = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                    A[i][j] = numerator.divide_exact(previous)
            previous = A[k][k]

        result = A[n - 1][n - 1].shift(shift_i, shift_j)
        return result if sign > 0 else -result

    def adjugate_column(self, M: Matrix, j: int) -> List[LaurentPoly]:
        """Columna j de la adjunta: entrada i = (-1)^{i+j} det(M sin fila j ni columna i)"""
        n = len(M)
        scalar_field = self._matrix_field(M)
        if n == 1:
            return [LaurentPoly.constant(1, scalar_field)]
        rows = M[:j] + M[j + 1:]
        column = []
        for i in range(n):
            minor = [row[:i] + row[i + 1:] for row in rows]
            value = self.det(minor)
            column.append(value if (i + j) % 2 == 0 else -value)
        return column

    @staticmethod
    def mat_vec(M: Matrix, v: Sequence[LaurentPoly]) -> List[LaurentPoly]:
        result = []
        for row in M:
            total = LaurentPoly.zero(row[0].field if row else EXACT)
            for entry, x in zip(row, v):
                total = total + entry * x
            result.append(total)
        return result

    # Restricción a un rayo
    @staticmethod
    def restrict_to_ray(f: LaurentPoly, basis: RayBasis) -> Tuple[LaurentPoly, int]:
        """Parte líder en x₁ (exponentes (b, 0)) y orden mínimo c₀ en x₂"""
        if f.is_zero():
            raise ZeroPolynomial("No se puede restringir el polinomio cero a un rayo")
        rewritten = {}
        for m, coeff in f.terms.items():
            b, c = basis.to_ray(m)
            rewritten[(b, c)] = coeff
        order = min(c for _, c in rewritten)
        leading = {(b, 0): coeff for (b, c), coeff in rewritten.items() if c == order}
        return LaurentPoly(leading, f.field), order

    @staticmethod
    def lift_from_ray(leading: LaurentPoly, order: int, basis: RayBasis) -> LaurentPoly:
        """Deshace la sustitución: estrato x₂^{c₀} en exponentes (i, j)"""
        terms = {basis.from_ray(b, order): coeff for (b, _), coeff in leading.terms.items()}
        return LaurentPoly(terms, leading.field)

    # Evaluación numérica
    @staticmethod
    def exact_divide(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        return f.divide_exact(g)

    @staticmethod
    def evaluate(f: LaurentPoly, z: Any, w: Any):
        return f.evaluate(z, w)

    @staticmethod
    def relative_residual(f: LaurentPoly, z: complex, w: complex) -> float:
        return f.relative_residual(z, w)

    @staticmethod
    def univariate_in_w(f: LaurentPoly, z0: complex) -> Tuple[np.ndarray, int]:
        """Coeficientes (ascendentes) en w de f(z0, w) y el exponente mínimo en w"""
        if f.is_zero():
            return np.zeros(1, dtype=complex), 0
        min_j = min(j for _, j in f.terms)
        max_j = max(j for _, j in f.terms)
        coefficients = np.zeros(max_j - min_j + 1, dtype=complex)
        for (i, j), c in f.terms.items():
            coefficients[j - min_j] += complex(c) * complex(z0) ** i
        return coefficients, min_j

    @staticmethod
    def to_polynomial_array(f: LaurentPoly) -> np.ndarray:
        """Matriz densa c[i, j] tras desplazar a exponentes no negativos"""
        min_i, max_i, min_j, max_j = f.bounding_box()
        array = np.zeros((max_i - min_i + 1, max_j - min_j + 1), dtype=complex)
        for (i, j), c in f.terms.items():
            array[i - min_i, j - min_j] += complex(c)
        return array

    # Núcleos
    def nullspace_exact(self, rows: List[List[Fraction]], ncols: int) -> List[List[Fraction]]:
        """Base del núcleo por forma escalonada reducida sobre los racionales"""
        A = [[Fraction(x) for x in row] for row in rows]
        pivots: List[int] = []
        r = 0
        for col in range(ncols):
            pivot = next((i for i in range(r, len(A)) if A[i][col] != 0), None)
            if pivot is None:
                continue
            A[r], A[pivot] = A[pivot], A[r]
            lead = A[r][col]
            A[r] = [x / lead for x in A[r]]
            for i in range(len(A)):
                if i != r and A[i][col] != 0:
                    factor = A[i][col]
                    A[i] = [a - factor * b for a, b in zip(A[i], A[r])]
            pivots.append(col)
            r += 1
            if r == len(A):
                break

        free = [c for c in range(ncols) if c not in pivots]
        basis = []
        for f in free:
            vector = [Fraction(0)] * ncols
            vector[f] = Fraction(1)
            for row_index, col in enumerate(pivots):
                vector[col] = -A[row_index][f]
            basis.append(vector)
        return basis

    def nullspace_numeric(self, rows: List[List[complex]], ncols: int) -> Tuple[int, np.ndarray]:
        """Dimensión del núcleo por la regla de cocientes de valores singulares y vector asociado"""
        if rows:
            A = np.array([[complex(x) for x in row] for row in rows], dtype=complex)
        else:
            A = np.zeros((0, ncols), dtype=complex)
        norms = np.linalg.norm(A, axis=1) if len(A) else np.zeros(0)
        nonzero = norms > 0
        A[nonzero] = A[nonzero] / norms[nonzero][:, None]
        if A.shape[0] < ncols:
            A = np.vstack([A, np.zeros((ncols - A.shape[0], ncols), dtype=complex)])

        _, s, vh = linalg.svd(A)
        vector = vh[-1].conj()
        ratio = NumericConfig.NULLSPACE_RATIO

        if s[0] == 0:
            return ncols, vector
        if ncols == 1:
            return 0, vector
        if s[ncols - 1] <= ratio * s[ncols - 2]:
            if s[ncols - 2] <= ratio * s[0]:
                return 2, vector
            return 1, vector
        return 0, vector

    def nullspace_vector(self, rows: List[List[Any]], ncols: int, scalar_field: ScalarField) -> List[Any]:
        """Vector del núcleo unidimensional normalizado"""
        if scalar_field.exact:
            basis = self.nullspace_exact(rows, ncols)
            if not basis:
                raise NullspaceDim0("El sistema sólo admite la solución nula")
            if len(basis) > 1:
                raise NullspaceDimHigh(f"Núcleo de dimensión {len(basis)}")
            vector = basis[0]
            first = next(x for x in vector if x != 0)
            return [x / first for x in vector]

        dimension, vector = self.nullspace_numeric(rows, ncols)
        if dimension == 0:
            raise NullspaceDim0("El sistema sólo admite la solución nula")
        if dimension > 1:
            raise NullspaceDimHigh(f"Núcleo de dimensión {dimension}")
        largest = vector[int(np.argmax(np.abs(vector)))]
        vector = vector / largest
        cutoff = NumericConfig.ZERO_TOL * float(np.max(np.abs(vector)))
        return [complex(x) if abs(x) > cutoff else 0j for x in vector]

    def rank(self, rows: List[List[Any]], ncols: int, scalar_field: ScalarField) -> int:
        if not rows:
            return 0
        if scalar_field.exact:
            return ncols - len(self.nullspace_exact(rows, ncols))
        A = np.array([[complex(x) for x in row] for row in rows], dtype=complex)
        return int(np.linalg.matrix_rank(A, tol=NumericConfig.NULLSPACE_RATIO * max(1.0, float(np.max(np.abs(A))))))
