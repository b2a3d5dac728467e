"""
Aplicación principal: interfaz de línea de comandos de la transformada espectral de dímeros.
"""

from typing import Optional

import click
from dotenv import load_dotenv

from src.config.settings import AppConfig, NumericConfig
from src.service_manager import service_manager
from src.commands.graph_commands import graph_commands
from src.commands.kasteleyn_commands import kasteleyn_commands
from src.commands.spectral_commands import spectral_commands
from src.utils.logging import app_logger


class DimerSpectralApp:
    """Clase principal de la aplicación"""

    def __init__(self):
        self.cli = None
        self.logger = app_logger

    def create_app(self) -> click.Group:
        """Crea y configura el grupo de comandos"""
        # Cargar variables de entorno
        load_dotenv()

        self.cli = self._build_group()
        self._configure_app()
        self._register_commands()
        self._initialize_services()
        return self.cli

    @staticmethod
    def _build_group() -> click.Group:
        @click.group(name=AppConfig.APP_NAME)
        @click.option('--mode', type=click.Choice(AppConfig.MODES), default=None,
                      help='Cuerpo de escalares: exact (racionales) o numeric (complejos)')
        @click.option('--tol', type=float, default=None, help='Tolerancia de poda en modo numérico')
        @click.option('--jobs', type=int, default=AppConfig.DEFAULT_JOBS,
                      help='Hilos para los sistemas por vértice negro')
        @click.option('-o', '--output', type=click.Path(dir_okay=False), default=None,
                      help='Escribe el documento JSON en esta ruta')
        @click.version_option(AppConfig.VERSION)
        @click.pass_context
        def cli(ctx: click.Context, mode: Optional[str], tol: Optional[float], jobs: int, output: Optional[str]):
            """Transformada espectral de dímeros en el toro y su inversa"""
            NumericConfig.override(tol)
            ctx.ensure_object(dict)
            ctx.obj.update({'mode': mode, 'jobs': max(1, jobs), 'output': output})

        return cli

    def _configure_app(self):
        """Configura la aplicación"""
        self.logger.debug(f"Configuración numérica: {NumericConfig.as_dict()}")

    def _register_commands(self):
        """Registra todos los comandos"""
        commands = graph_commands + kasteleyn_commands + spectral_commands
        for command in commands:
            self.cli.add_command(command)

        self.logger.debug(f"Comandos registrados: {len(commands)}")

    def _initialize_services(self):
        """Inicializa los servicios necesarios"""
        service_manager.initialize_all()

    def run(self):
        """Ejecuta la aplicación"""
        self._log_startup_info()
        self.cli(obj={})

    def _log_startup_info(self):
        """Registra información de inicio"""
        self.logger.debug(f"{AppConfig.APP_NAME} {AppConfig.VERSION} (modo por defecto {AppConfig.DEFAULT_MODE})")


def create_app() -> click.Group:
    """Factory function para crear la aplicación"""
    dimer_app = DimerSpectralApp()
    return dimer_app.create_app()


if __name__ == '__main__':
    try:
        dimer_app = DimerSpectralApp()
        dimer_app.create_app()
        dimer_app.run()
    except KeyboardInterrupt:
        app_logger.info("Ejecución detenida por el usuario")
    except Exception as e:
        app_logger.error(f"Error crítico: {str(e)}")
        raise
