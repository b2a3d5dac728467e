"""
Jerarquía de errores de dominio.
Cada subclase corresponde a un tipo de error serializable por la CLI.
"""

from typing import Any, Dict


class DimerError(Exception):
    """Error de dominio base: se serializa como {"kind", "detail"}"""

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, 'detail': str(self)}


# Grafo en el toro
class NonBipartite(DimerError):
    pass


class EulerMismatch(DimerError):
    pass


class FaceInconsistency(DimerError):
    pass


class OddFace(DimerError):
    pass


class InvalidCycle(DimerError):
    pass


class DegenerateNewton(DimerError):
    pass


class NoPerfectMatching(DimerError):
    pass


# Retículo y geometría tórica
class NotPrimitive(DimerError):
    pass


class NotOrthogonal(DimerError):
    pass


class NoLatticePoints(DimerError):
    pass


# Álgebra de Laurent
class ZeroPolynomial(DimerError):
    pass


# Kasteleyn
class Unsatisfiable(DimerError):
    pass


class InconsistentClass(DimerError):
    pass


class ZeroDeterminant(DimerError):
    pass


# Transformada directa
class CasimirCollision(DimerError):
    pass


class RootMismatch(DimerError):
    pass


class WrongCount(DimerError):
    pass


class EmptyColumn(DimerError):
    pass


# Transformada inversa
class InconsistentPropagation(DimerError):
    pass


class StripMismatch(DimerError):
    pass


class NegativeCoefficient(DimerError):
    pass


class EmptyPolygon(DimerError):
    pass


class NullspaceDim0(DimerError):
    pass


class NullspaceDimHigh(DimerError):
    pass


class OrderMismatch(DimerError):
    pass


class ZeroDenominator(DimerError):
    pass


class NotAWedgePath(DimerError):
    pass
