"""
Inicializador de servicios globales.
"""

from .config.settings import AppConfig, NumericConfig
from .services.abel_service import AbelService
from .services.algebra_service import AlgebraService
from .services.fixture_service import FixtureService
from .services.forward_service import ForwardService
from .services.graph_service import GraphService
from .services.inverse_service import InverseService
from .services.kasteleyn_service import KasteleynService
from .services.toric_service import ToricService
from .utils.logging import app_logger


class ServiceManager:
    """Gestor de servicios de la aplicación"""

    def __init__(self):
        self._graph_service = None
        self._toric_service = None
        self._algebra_service = None
        self._kasteleyn_service = None
        self._forward_service = None
        self._abel_service = None
        self._inverse_service = None
        self._fixture_service = None

    @property
    def graph_service(self) -> GraphService:
        if self._graph_service is None:
            self._graph_service = GraphService()
        return self._graph_service

    @property
    def toric_service(self) -> ToricService:
        if self._toric_service is None:
            self._toric_service = ToricService()
        return self._toric_service

    @property
    def algebra_service(self) -> AlgebraService:
        if self._algebra_service is None:
            self._algebra_service = AlgebraService()
        return self._algebra_service

    @property
    def kasteleyn_service(self) -> KasteleynService:
        if self._kasteleyn_service is None:
            self._kasteleyn_service = KasteleynService(self.graph_service, self.algebra_service)
        return self._kasteleyn_service

    @property
    def forward_service(self) -> ForwardService:
        if self._forward_service is None:
            self._forward_service = ForwardService(
                self.graph_service, self.toric_service, self.algebra_service, self.kasteleyn_service
            )
        return self._forward_service

    @property
    def abel_service(self) -> AbelService:
        if self._abel_service is None:
            self._abel_service = AbelService(self.graph_service, self.toric_service)
        return self._abel_service

    @property
    def inverse_service(self) -> InverseService:
        if self._inverse_service is None:
            self._inverse_service = InverseService(
                self.graph_service, self.toric_service, self.algebra_service,
                self.kasteleyn_service, self.abel_service, self.forward_service
            )
        return self._inverse_service

    @property
    def fixture_service(self) -> FixtureService:
        if self._fixture_service is None:
            self._fixture_service = FixtureService(self.graph_service, self.kasteleyn_service)
        return self._fixture_service

    def initialize_all(self):
        """Inicializa todos los servicios"""
        services = [
            self.graph_service, self.toric_service, self.algebra_service, self.kasteleyn_service,
            self.forward_service, self.abel_service, self.inverse_service, self.fixture_service
        ]
        app_logger.debug(f"{len(services)} servicios listos (modo {AppConfig.DEFAULT_MODE}, "
                         f"tolerancia {NumericConfig.ZERO_TOL})")


# Instancia global del gestor de servicios
service_manager = ServiceManager()
