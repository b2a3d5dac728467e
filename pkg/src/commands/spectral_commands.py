"""
Comandos de la transformada espectral: directa, inversa e ida y vuelta.
"""

from typing import Optional

import click

from ..models.data_models import CommandResponse
from ..service_manager import service_manager
from ..utils.exceptions import DimerError
from ..utils.logging import app_logger, error_handler
from ..utils.validators import ValidationError
from .graph_commands import graph_option
from .output import emit_response

weights_option = click.option('--weights', 'weights_path', required=True,
                              type=click.Path(dir_okay=False), help='Documento JSON de pesos')


@click.command('forward')
@graph_option
@weights_option
@click.pass_context
def forward_command(ctx: click.Context, graph_path: str, weights_path: str):
    """Curva espectral, divisor y puntos en el infinito de (Γ, [wt])"""
    try:
        fixtures = service_manager.fixture_service
        g = fixtures.load_graph(graph_path)
        wc = fixtures.parse_weights(g, weights_path, ctx.obj.get('mode'))

        spectral = service_manager.forward_service.forward(g, wc)
        app_logger.info(f"Divisor de {g.name}: {len(spectral.points)} puntos, género {spectral.genus}")
        response = CommandResponse(success=True, data=spectral.to_dict())

    except ValidationError as e:
        app_logger.warning(f"Error de validación: {str(e)}")
        response = CommandResponse(success=False, error=e.to_dict())

    except DimerError as e:
        error_handler.log_error(e, {'command': 'forward'})
        response = CommandResponse(success=False, error=e.to_dict())

    emit_response(ctx, response)


@click.command('inverse')
@graph_option
@click.option('--spectral', 'spectral_path', required=True,
              type=click.Path(dir_okay=False), help='Documento JSON de datos espectrales')
@click.pass_context
def inverse_command(ctx: click.Context, graph_path: str, spectral_path: str):
    """Clase de pesos reconstruida a partir de los datos espectrales"""
    try:
        fixtures = service_manager.fixture_service
        g = fixtures.load_graph(graph_path)
        spectral = fixtures.parse_spectral(spectral_path, ctx.obj.get('mode'))

        result = service_manager.inverse_service.inverse(g, spectral, ctx.obj.get('jobs', 1))
        data = result.to_dict()
        data['graph'] = g.name
        data['systems'] = {b: s.to_dict() for b, s in result.systems.items()}
        response = CommandResponse(success=True, data=data)

    except ValidationError as e:
        app_logger.warning(f"Error de validación: {str(e)}")
        response = CommandResponse(success=False, error=e.to_dict())

    except DimerError as e:
        error_handler.log_error(e, {'command': 'inverse'})
        response = CommandResponse(success=False, error=e.to_dict())

    emit_response(ctx, response)


@click.command('roundtrip')
@graph_option
@weights_option
@click.option('--report', 'report_path', type=click.Path(dir_okay=False), default=None,
              help='Ruta adicional para el informe de errores')
@click.pass_context
def roundtrip_command(ctx: click.Context, graph_path: str, weights_path: str, report_path: Optional[str]):
    """inverse(forward(w)) frente a w con errores por coordenada"""
    try:
        fixtures = service_manager.fixture_service
        g = fixtures.load_graph(graph_path)
        wc = fixtures.parse_weights(g, weights_path, ctx.obj.get('mode'))

        report = service_manager.inverse_service.roundtrip(g, wc, ctx.obj.get('jobs', 1))
        if report_path:
            fixtures.dump_json(report.to_dict(), report_path)
        response = CommandResponse(success=True, data=report.to_dict())

    except ValidationError as e:
        app_logger.warning(f"Error de validación: {str(e)}")
        response = CommandResponse(success=False, error=e.to_dict())

    except DimerError as e:
        error_handler.log_error(e, {'command': 'roundtrip'})
        response = CommandResponse(success=False, error=e.to_dict())

    emit_response(ctx, response)


spectral_commands = [forward_command, inverse_command, roundtrip_command]
