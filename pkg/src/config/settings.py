"""
Configuración de la aplicación.
Centraliza todas las configuraciones y constantes.
"""

import os
from typing import Dict, Any, List


class AppConfig:
    """Configuración principal de la aplicación"""

    APP_NAME = 'dimer-spectral'
    VERSION = '1.0.0'

    # Configuración de logging
    LOG_LEVEL = os.getenv('DIMER_LOG_LEVEL', 'INFO')

    # Modo escalar por defecto: 'exact' (racionales) o 'numeric' (complejos)
    DEFAULT_MODE = os.getenv('DIMER_MODE', 'exact')
    MODES = ['exact', 'numeric']

    # Paralelismo para resolver los sistemas por vértice negro
    DEFAULT_JOBS = int(os.getenv('DIMER_JOBS', '1'))

    @classmethod
    def is_valid_mode(cls, mode: str) -> bool:
        """Verifica si el modo escalar es soportado"""
        return mode in cls.MODES


class NumericConfig:
    """Tolerancias y parámetros numéricos"""

    ZERO_TOL = float(os.getenv('DIMER_TOL', '1e-9'))
    RESIDUAL_TOL = float(os.getenv('DIMER_RESIDUAL_TOL', '1e-8'))
    NULLSPACE_RATIO = float(os.getenv('DIMER_NULLSPACE_RATIO', '1e-6'))
    # Desvío relativo admitido en el producto de los X_f recuperados
    FACE_PRODUCT_TOL = float(os.getenv('DIMER_FACE_PRODUCT_TOL', '1e-6'))
    NEWTON_STEPS = 3
    DEDUP_TOL = 1e-7
    RATIONAL_DENOMINATOR_LIMIT = 10 ** 8

    # Cofactores hasta este tamaño, Bareiss por encima
    DETERMINANT_CROSSOVER = 4

    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Devuelve las tolerancias vigentes"""
        return {
            'zero_tol': cls.ZERO_TOL,
            'residual_tol': cls.RESIDUAL_TOL,
            'nullspace_ratio': cls.NULLSPACE_RATIO,
            'face_product_tol': cls.FACE_PRODUCT_TOL,
            'newton_steps': cls.NEWTON_STEPS
        }

    @classmethod
    def override(cls, tol: float = None) -> None:
        """Sobrescribe la tolerancia de poda para una invocación"""
        if tol is not None:
            cls.ZERO_TOL = float(tol)


class SchemaConfig:
    """Configuración de los documentos JSON"""

    SCHEMA_VERSION = 'dimer-spectral/1'

    REQUIRED_FIELDS = {
        'graph': ['vertices', 'edges', 'faces', 'root_white', 'root_face', 'cycles'],
        'weights': [],
        'spectral': ['divisor', 'casimirs']
    }

    @classmethod
    def get_required_fields(cls, document: str) -> List[str]:
        """Obtiene los campos requeridos de un tipo de documento"""
        return cls.REQUIRED_FIELDS.get(document, [])


class FixtureConfig:
    """Ejemplos resueltos incluidos en el repositorio"""

    FIXTURES_DIR = os.getenv(
        'DIMER_FIXTURES_DIR',
        os.path.join(os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))), 'fixtures')
    )

    FIXTURES = {
        'square': {'graph': 'square.json', 'weights': 'square_weights.json', 'genus': 1},
        'hexagon': {'graph': 'hexagon.json', 'weights': 'hexagon_weights.json', 'genus': 2},
        'square_octagon': {'graph': 'square_octagon.json', 'weights': 'square_octagon_weights.json', 'genus': 1}
    }

    @classmethod
    def get_fixture_names(cls) -> list:
        """Obtiene la lista de ejemplos disponibles"""
        return list(cls.FIXTURES.keys())

    @classmethod
    def get_fixture_paths(cls, name: str) -> Dict[str, str]:
        """Obtiene las rutas de grafo y pesos de un ejemplo"""
        entry = cls.FIXTURES.get(name, {})
        if not entry:
            return {}
        return {
            'graph': os.path.join(cls.FIXTURES_DIR, entry['graph']),
            'weights': os.path.join(cls.FIXTURES_DIR, entry['weights'])
        }
