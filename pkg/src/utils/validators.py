"""
Utilidades para validaciones de los documentos JSON de entrada.
"""

from fractions import Fraction
from typing import Any, Dict, List

from ..config.settings import AppConfig, SchemaConfig


class ValidationError(Exception):
    """Excepción personalizada para errores de validación"""

    kind = 'ValidationError'

    def to_dict(self) -> Dict[str, str]:
        return {'kind': self.kind, 'detail': str(self)}


class RequestValidator:
    """Validador genérico de documentos"""

    @staticmethod
    def validate_required_fields(data: Dict[str, Any], required_fields: List[str]) -> None:
        """Valida que todos los campos requeridos estén presentes"""
        missing_fields = [field for field in required_fields if field not in data]
        if missing_fields:
            raise ValidationError(f"Campos requeridos faltantes: {', '.join(missing_fields)}")

    @staticmethod
    def validate_json_data(data: Any) -> None:
        """Valida que los datos sean un diccionario válido"""
        if not data or not isinstance(data, dict):
            raise ValidationError("Se requieren datos JSON válidos")

    @staticmethod
    def validate_schema(data: Dict[str, Any]) -> None:
        """Si el documento declara esquema, debe ser el vigente"""
        schema = data.get('schema')
        if schema is not None and schema != SchemaConfig.SCHEMA_VERSION:
            raise ValidationError(f"Esquema no soportado: {schema}. Se esperaba {SchemaConfig.SCHEMA_VERSION}")

    @staticmethod
    def validate_mode(mode: str) -> None:
        if not AppConfig.is_valid_mode(mode):
            raise ValidationError(f"Modo inválido: {mode}. Modos válidos: {', '.join(AppConfig.MODES)}")

    @staticmethod
    def validate_document(data: Any, document: str) -> None:
        RequestValidator.validate_json_data(data)
        RequestValidator.validate_schema(data)
        RequestValidator.validate_required_fields(data, SchemaConfig.get_required_fields(document))


class ScalarValidator:
    """Validador de escalares serializados"""

    @staticmethod
    def validate_scalar(raw: Any, name: str) -> None:
        if isinstance(raw, bool):
            raise ValidationError(f"Valor inválido para {name}: {raw}")
        if isinstance(raw, dict):
            if not set(raw).issubset({'re', 'im'}):
                raise ValidationError(f"Complejo inválido para {name}: {raw}")
            return
        if isinstance(raw, (int, float)):
            return
        try:
            Fraction(str(raw).strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"Racional inválido para {name}: {raw}")


class GraphSpecValidator:
    """Validador de la forma del documento de grafo"""

    COLORS = ('black', 'white')

    @staticmethod
    def validate(data: Dict[str, Any]) -> None:
        RequestValidator.validate_document(data, 'graph')

        if not isinstance(data['vertices'], list) or not data['vertices']:
            raise ValidationError("'vertices' debe ser una lista no vacía")
        for vertex in data['vertices']:
            if not isinstance(vertex, dict) or 'id' not in vertex or 'color' not in vertex:
                raise ValidationError(f"Vértice inválido: {vertex}")
            if vertex['color'] not in GraphSpecValidator.COLORS:
                raise ValidationError(f"Color inválido en {vertex['id']}: {vertex['color']}")

        if not isinstance(data['edges'], list):
            raise ValidationError("'edges' debe ser una lista")
        for edge in data['edges']:
            RequestValidator.validate_required_fields(edge, ['id', 'black', 'white'])
            for key in ('dz', 'dw'):
                if not isinstance(edge.get(key, 0), int) or isinstance(edge.get(key, 0), bool):
                    raise ValidationError(f"Desplazamiento {key} no entero en {edge['id']}")
            if 'sign' in edge and edge['sign'] not in (1, -1):
                raise ValidationError(f"Signo inválido en {edge['id']}: {edge['sign']}")

        if not isinstance(data['faces'], list) or not data['faces']:
            raise ValidationError("'faces' debe ser una lista no vacía")

        cycles = data['cycles']
        if not isinstance(cycles, dict) or 'a' not in cycles or 'b' not in cycles:
            raise ValidationError("'cycles' debe contener los lazos 'a' y 'b'")

        for key, value in data.get('cycle_signs', {}).items():
            if key not in ('a', 'b') or value not in (1, -1):
                raise ValidationError(f"cycle_signs inválido: {key}={value}")


class WeightSpecValidator:
    """Validador del documento de pesos"""

    @staticmethod
    def validate(data: Dict[str, Any]) -> None:
        RequestValidator.validate_document(data, 'weights')
        if 'edges' in data:
            if not isinstance(data['edges'], dict):
                raise ValidationError("'edges' debe ser un mapa arista -> peso")
            for edge_id, raw in data['edges'].items():
                ScalarValidator.validate_scalar(raw, edge_id)
            return

        RequestValidator.validate_required_fields(data, ['faces', 'A', 'B'])
        if not isinstance(data['faces'], dict):
            raise ValidationError("'faces' debe ser un mapa cara -> peso")
        for face_id, raw in data['faces'].items():
            ScalarValidator.validate_scalar(raw, face_id)
        ScalarValidator.validate_scalar(data['A'], 'A')
        ScalarValidator.validate_scalar(data['B'], 'B')


class SpectralSpecValidator:
    """Validador del documento de datos espectrales"""

    @staticmethod
    def validate(data: Dict[str, Any]) -> None:
        RequestValidator.validate_document(data, 'spectral')
        if not isinstance(data['divisor'], list):
            raise ValidationError("'divisor' debe ser una lista de puntos")
        for index, point in enumerate(data['divisor']):
            if not isinstance(point, dict) or 'p' not in point or 'q' not in point:
                raise ValidationError(f"Punto del divisor inválido en posición {index}")
            ScalarValidator.validate_scalar(point['p'], f'p{index + 1}')
            ScalarValidator.validate_scalar(point['q'], f'q{index + 1}')
        if not isinstance(data['casimirs'], dict) or not data['casimirs']:
            raise ValidationError("'casimirs' debe ser un mapa zig-zag -> valor")
        for zigzag_id, raw in data['casimirs'].items():
            ScalarValidator.validate_scalar(raw, zigzag_id)
