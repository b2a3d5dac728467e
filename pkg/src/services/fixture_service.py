"""
Servicio de documentos: lectura de grafos, pesos y datos espectrales en JSON,
ejemplos resueltos incluidos y escritura determinista de resultados.
"""

import json
import os
from typing import Any, Dict, List, Optional, Union

from ..config.settings import AppConfig, FixtureConfig
from ..models.algebra_models import EXACT, NUMERIC, ScalarField, parse_scalar
from ..models.data_models import (
    Casimirs, Fixture, SpectralData, SpectralPoint, TorusGraph, WeightClass
)
from ..utils.logging import app_logger, error_handler
from ..utils.validators import (
    RequestValidator, SpectralSpecValidator, ValidationError, WeightSpecValidator
)
from .graph_service import GraphService
from .kasteleyn_service import KasteleynService


class FixtureService:
    """Servicio para documentos JSON y ejemplos resueltos"""

    def __init__(self, graph_service: Optional[GraphService] = None,
                 kasteleyn_service: Optional[KasteleynService] = None):
        self.logger = app_logger
        self.error_handler = error_handler
        self.graph_service = graph_service or GraphService()
        self.kasteleyn_service = kasteleyn_service or KasteleynService(self.graph_service)

    @staticmethod
    def field_for(mode: Optional[str]) -> ScalarField:
        mode = mode or AppConfig.DEFAULT_MODE
        RequestValidator.validate_mode(mode)
        return EXACT if mode == 'exact' else NUMERIC

    def load_json(self, path: str) -> Dict[str, Any]:
        """Lee un documento JSON desde disco"""
        if not os.path.exists(path):
            raise ValidationError(f"No se encontró el documento: {path}")
        try:
            with open(path, 'r', encoding='utf-8') as handle:
                data = json.load(handle)
        except json.JSONDecodeError as e:
            raise ValidationError(f"JSON inválido en {path}: {e}")
        self.logger.debug(f"Documento leído: {path}")
        return data

    def _document(self, source: Union[str, Dict[str, Any]]) -> Dict[str, Any]:
        return self.load_json(source) if isinstance(source, str) else source

    def load_graph(self, source: Union[str, Dict[str, Any]]) -> TorusGraph:
        return self.graph_service.build_graph(self._document(source))

    def _coerce(self, scalar_field: ScalarField, raw: Any, name: str):
        try:
            return scalar_field.coerce(parse_scalar(raw))
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"Valor inválido para {name} en modo {scalar_field.name}: {e}")

    def parse_weights(self, g: TorusGraph, source: Union[str, Dict[str, Any]],
                      mode: Optional[str] = None) -> WeightClass:
        """Clase de pesos desde (X_f, A, B) o desde un cociclo arista por arista"""
        data = self._document(source)
        WeightSpecValidator.validate(data)
        scalar_field = self.field_for(mode or data.get('mode'))

        if 'edges' in data:
            values = {eid: self._coerce(scalar_field, raw, eid) for eid, raw in data['edges'].items()}
            wt = self.kasteleyn_service.explicit_cocycle(g, values, scalar_field)
            return self.kasteleyn_service.cocycle_class(g, wt)

        faces = {fid: self._coerce(scalar_field, raw, fid) for fid, raw in data['faces'].items()}
        try:
            return WeightClass(
                faces=faces,
                A=self._coerce(scalar_field, data['A'], 'A'),
                B=self._coerce(scalar_field, data['B'], 'B'),
                field=scalar_field
            )
        except ValueError as e:
            raise ValidationError(str(e))

    def parse_spectral(self, source: Union[str, Dict[str, Any]], mode: Optional[str] = None) -> SpectralData:
        """Datos espectrales; en modo numérico se pasan los valores a complejos"""
        data = self._document(source)
        SpectralSpecValidator.validate(data)
        try:
            spectral = SpectralData.from_dict(data)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise ValidationError(f"Documento espectral inválido: {e}")

        if mode == 'numeric' and spectral.field.exact:
            spectral.casimirs = Casimirs({k: complex(v) for k, v in spectral.casimirs.values.items()}, NUMERIC)
            spectral.points = [SpectralPoint(p=complex(pt.p), q=complex(pt.q), residuals=pt.residuals)
                               for pt in spectral.points]
        return spectral

    # Ejemplos resueltos
    def list_fixtures(self) -> List[Dict[str, Any]]:
        return [
            {'name': name, 'genus': FixtureConfig.FIXTURES[name]['genus'], **FixtureConfig.get_fixture_paths(name)}
            for name in FixtureConfig.get_fixture_names()
        ]

    def load_fixture(self, name: str, mode: Optional[str] = None) -> Fixture:
        paths = FixtureConfig.get_fixture_paths(name)
        if not paths:
            raise ValidationError(
                f"Ejemplo desconocido: {name}. Disponibles: {', '.join(FixtureConfig.get_fixture_names())}"
            )
        graph = self.load_graph(paths['graph'])
        weights = self.parse_weights(graph, paths['weights'], mode)
        return Fixture(name=name, graph=graph, weights=weights, genus=FixtureConfig.FIXTURES[name]['genus'])

    @staticmethod
    def dump_json(data: Dict[str, Any], path: Optional[str] = None) -> str:
        """JSON con claves ordenadas; se escribe en disco si se indica ruta"""
        text = json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False)
        if path:
            with open(path, 'w', encoding='utf-8') as handle:
                handle.write(text + '\n')
        return text
