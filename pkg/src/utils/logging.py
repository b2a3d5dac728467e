"""
Utilidades para logging y manejo de errores.
"""

import logging
import sys
from typing import Any, Dict, Optional
from datetime import datetime

from ..config.settings import AppConfig


class Logger:
    """Configurador de logging para la aplicación"""

    @staticmethod
    def setup_logger(name: str, level: int = logging.INFO) -> logging.Logger:
        """Configura un logger con formato estándar"""
        logger = logging.getLogger(name)
        logger.setLevel(level)

        # Evitar duplicar handlers
        if logger.handlers:
            return logger

        # stdout queda reservado para los documentos JSON
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
        )
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

        return logger

    @staticmethod
    def resolve_level(level_name: str) -> int:
        """Convierte el nombre de nivel configurado en constante de logging"""
        return getattr(logging, str(level_name).upper(), logging.INFO)


class ErrorHandler:
    """Manejador de errores centralizado"""

    def __init__(self, logger: logging.Logger):
        self.logger = logger

    @staticmethod
    def _format_context(context: Dict[str, Any]) -> str:
        return ', '.join([f"{k}: {v}" for k, v in context.items()])

    def log_error(self, error: Exception, context: Optional[Dict[str, Any]] = None) -> str:
        """Registra un error y devuelve un mensaje apropiado"""
        error_msg = str(error)
        kind = getattr(error, 'kind', type(error).__name__)

        if context:
            self.logger.error(f"Error [{kind}]: {error_msg} | Context: {self._format_context(context)}")
        else:
            self.logger.error(f"Error [{kind}]: {error_msg}")

        return error_msg

    def log_warning(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        """Registra una advertencia"""
        if context:
            self.logger.warning(f"Warning: {message} | Context: {self._format_context(context)}")
        else:
            self.logger.warning(f"Warning: {message}")

    def log_info(self, message: str, context: Optional[Dict[str, Any]] = None) -> None:
        """Registra información"""
        if context:
            self.logger.info(f"Info: {message} | Context: {self._format_context(context)}")
        else:
            self.logger.info(f"Info: {message}")


class PerformanceTimer:
    """Utilidad para medir tiempo de ejecución"""

    def __init__(self, logger: logging.Logger, operation_name: str, context: Optional[Dict[str, Any]] = None):
        self.logger = logger
        self.operation_name = operation_name
        self.context = context or {}
        self.start_time = None
        self.duration = None

    @property
    def label(self) -> str:
        """Nombre de la operación con sus entradas (grafo, tamaño)"""
        if not self.context:
            return self.operation_name
        return f"{self.operation_name} [{ErrorHandler._format_context(self.context)}]"

    def __enter__(self):
        self.start_time = datetime.now()
        self.logger.debug(f"Iniciando operación: {self.label}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time:
            self.duration = (datetime.now() - self.start_time).total_seconds()
            if exc_type is None:
                self.logger.info(f"Operación {self.label} completada en {self.duration:.3f} segundos")
            else:
                self.logger.warning(f"Operación {self.label} interrumpida tras {self.duration:.3f} segundos")


# Logger principal de la aplicación
app_logger = Logger.setup_logger('dimer_spectral', Logger.resolve_level(AppConfig.LOG_LEVEL))
error_handler = ErrorHandler(app_logger)
